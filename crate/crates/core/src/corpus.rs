//! Seeded random words, for tests, benchmarks and the `random` command.

use rand::Rng;

use crate::fgword::{Alphabet, Letter, ReducedWord, Sign};

fn random_letter<R: Rng + ?Sized>(alphabet: &Alphabet, rng: &mut R) -> Letter {
    Letter::new(
        rng.gen_range(0..alphabet.rank()),
        if rng.gen() { Sign::Plus } else { Sign::Minus },
    )
}

/// A random freely reduced word of exactly `len` letters: a random walk
/// that redraws any letter cancelling the previous one.
pub fn random_reduced_word<R: Rng + ?Sized>(
    alphabet: &Alphabet,
    len: usize,
    rng: &mut R,
) -> ReducedWord {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = random_letter(alphabet, rng);
        if letters.last().is_some_and(|&last| last.cancels(l)) {
            continue;
        }
        letters.push(l);
    }
    alphabet.word_from_letters(letters).reduced()
}

/// A random product of `pairs` conjugated commutators `g [u,v] g^-1`,
/// with `u, v` drawn from lengths `1..=factor_len` and conjugators from
/// `0..=factor_len`. The result has commutator length at most `pairs`.
pub fn random_commutator_product<R: Rng + ?Sized>(
    alphabet: &Alphabet,
    pairs: usize,
    factor_len: usize,
    rng: &mut R,
) -> ReducedWord {
    assert!(factor_len >= 1, "factors need at least one letter");
    let mut w = ReducedWord::empty(alphabet);
    for _ in 0..pairs {
        let u = random_reduced_word(alphabet, rng.gen_range(1..=factor_len), rng);
        let v = random_reduced_word(alphabet, rng.gen_range(1..=factor_len), rng);
        let g = random_reduced_word(alphabet, rng.gen_range(0..=factor_len), rng);
        w = w.multiply(&g.conjugate(&ReducedWord::commutator(&u, &v)));
    }
    w
}

/// A random reduced word of exactly `len` letters with every exponent sum
/// zero, found by rejection. `len` must be even and the alphabet needs at
/// least two generators (over one generator only the empty word qualifies).
pub fn random_commutator_subgroup_word<R: Rng + ?Sized>(
    alphabet: &Alphabet,
    len: usize,
    rng: &mut R,
) -> ReducedWord {
    assert!(len % 2 == 0, "zero exponent sums force even length");
    assert!(alphabet.rank() >= 2 || len == 0, "need two generators for a nonempty word");
    loop {
        let w = random_reduced_word(alphabet, len, rng);
        if w.in_commutator_subgroup() {
            return w;
        }
    }
}
