//! Commutator presentations and the peel identity.
//!
//! If a reduced word factors without cancellation as
//! `w = w1 a^-1 w2 b^-1 w3 a w4 b w5`, then
//!
//! ```text
//! w = [ w1 w4 w3 a w1^-1 ,  w1 w4 b w2^-1 w3^-1 w4^-1 w1^-1 ] . w1 w4 w3 w2 w5
//! ```
//!
//! so one commutator peels off, leaving a residue four letters shorter
//! (before reduction). Iterating this identity drives both search backends.

use std::fmt;

use crate::fgword::{reduce_parts, Alphabet, Part, ReducedWord, Word};
use crate::search::Decomposition;

/// The three words produced by one application of the peel identity.
#[derive(Clone, Debug)]
pub struct Peel {
    pub u: ReducedWord,
    pub v: ReducedWord,
    pub residue: ReducedWord,
}

/// Applies the peel identity to a marked decomposition:
/// `u = w1 w4 w3 a w1^-1`, `v = w1 w4 b w2^-1 w3^-1 w4^-1 w1^-1`,
/// `residue = w1 w4 w3 w2 w5`, all freely reduced, with
/// `[u, v] . residue = w` in the free group.
pub fn peel(d: &Decomposition<'_>) -> Peel {
    let alphabet = d.word().alphabet();
    let (w1, w2, w3, w4, w5) = (d.factor(1), d.factor(2), d.factor(3), d.factor(4), d.factor(5));
    let a = d.letter_a();
    let b = d.letter_b();
    let n = d.word().len();

    let u = reduce_parts(
        alphabet,
        &[Part::Fwd(w1), Part::Fwd(w4), Part::Fwd(w3), Part::One(a), Part::Inv(w1)],
        n,
    );
    let v = reduce_parts(
        alphabet,
        &[
            Part::Fwd(w1),
            Part::Fwd(w4),
            Part::One(b),
            Part::Inv(w2),
            Part::Inv(w3),
            Part::Inv(w4),
            Part::Inv(w1),
        ],
        n,
    );
    let residue = reduce_parts(
        alphabet,
        &[Part::Fwd(w1), Part::Fwd(w4), Part::Fwd(w3), Part::Fwd(w2), Part::Fwd(w5)],
        n,
    );
    debug_assert_eq!(
        ReducedWord::commutator(&u, &v).multiply(&residue).letters(),
        d.word().letters(),
        "peel identity violated"
    );
    Peel { u, v, residue }
}

/// A product of commutators: `[u1,v1][u2,v2]...`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommutatorPresentation {
    alphabet: Alphabet,
    pairs: Vec<(ReducedWord, ReducedWord)>,
}

impl CommutatorPresentation {
    pub fn new(alphabet: Alphabet, pairs: Vec<(ReducedWord, ReducedWord)>) -> CommutatorPresentation {
        for (u, v) in &pairs {
            assert_eq!(u.alphabet(), &alphabet, "alphabet mismatch");
            assert_eq!(v.alphabet(), &alphabet, "alphabet mismatch");
        }
        CommutatorPresentation { alphabet, pairs }
    }

    pub fn empty(alphabet: Alphabet) -> CommutatorPresentation {
        CommutatorPresentation { alphabet, pairs: Vec::new() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn pairs(&self) -> &[(ReducedWord, ReducedWord)] {
        &self.pairs
    }

    /// Number of commutators.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Multiplies the commutators out and reduces.
    pub fn expand(&self) -> ReducedWord {
        let mut out = ReducedWord::empty(&self.alphabet);
        for (u, v) in &self.pairs {
            out = out.multiply(&ReducedWord::commutator(u, v));
        }
        out
    }

    /// True when the presentation expands to `w`.
    pub fn verify(&self, w: &Word) -> bool {
        self.expand() == w.reduced()
    }

    /// Conjugates every pair by `c`, using `c [u,v] c^-1 = [cuc^-1, cvc^-1]`.
    pub fn conjugated(&self, c: &ReducedWord) -> CommutatorPresentation {
        let pairs = self
            .pairs
            .iter()
            .map(|(u, v)| (c.conjugate(u), c.conjugate(v)))
            .collect();
        CommutatorPresentation { alphabet: self.alphabet.clone(), pairs }
    }
}

impl fmt::Display for CommutatorPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        for (u, v) in &self.pairs {
            write!(f, "[{u},{v}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgword::{Letter, Sign};
    use crate::search::decompositions;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Alphabet {
        Alphabet::new(["x", "y"]).unwrap()
    }

    fn r(text: &str) -> ReducedWord {
        ab().parse(text).unwrap().reduced()
    }

    #[test]
    fn peel_commutator_gives_its_pair() {
        let word = r("[x,y]");
        let d = decompositions(&word).next().unwrap();
        let p = peel(&d);
        assert_eq!(p.u, r("x"));
        assert_eq!(p.v, r("y"));
        assert!(p.residue.is_empty());
    }

    #[test]
    fn peel_commutator_square() {
        let word = r("[x,y]^2");
        // the quad marking the first four letters
        let d = Decomposition::new(&word, [0, 1, 2, 3]).unwrap();
        let p = peel(&d);
        assert_eq!(p.u, r("x"));
        assert_eq!(p.v, r("y"));
        assert_eq!(p.residue, r("[x,y]"));
    }

    #[test]
    fn peel_rebuilds_word_for_every_decomposition() {
        for text in ["[x,y]^2", "[x,y][x^-1,y^-1]", "[x y, y^-1 x]", "[x,y]^3"] {
            let word = r(text);
            let mut count = 0;
            for d in decompositions(&word) {
                let p = peel(&d);
                assert_eq!(ReducedWord::commutator(&p.u, &p.v).multiply(&p.residue), word);
                // residue drops exactly four letters before reduction
                assert_eq!(
                    d.factor(1).len() + d.factor(2).len() + d.factor(3).len() + d.factor(4).len()
                        + d.factor(5).len(),
                    word.len() - 4
                );
                count += 1;
            }
            assert!(count > 0, "no decompositions for {text}");
        }
    }

    fn random_reduced(alphabet: &Alphabet, len: usize, rng: &mut ChaCha8Rng) -> ReducedWord {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        while letters.len() < len {
            let l = Letter::new(
                rng.gen_range(0..alphabet.rank()),
                if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus },
            );
            if letters.last().is_some_and(|last| last.cancels(l)) {
                continue;
            }
            letters.push(l);
        }
        alphabet.word_from_letters(letters).reduced()
    }

    #[test]
    fn peel_identity_random_instances() {
        // the identity behind peel, rebuilt from scratch with group ops
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for case in 0..300 {
            let alphabet = Alphabet::with_rank(1 + case % 4);
            let ws: Vec<ReducedWord> =
                (0..5).map(|_| random_reduced(&alphabet, rng.gen_range(0..=4), &mut rng)).collect();
            let a_letter = Letter::new(
                rng.gen_range(0..alphabet.rank()),
                if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus },
            );
            let b_letter = Letter::new(
                rng.gen_range(0..alphabet.rank()),
                if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus },
            );
            let a = alphabet.word_from_letters(vec![a_letter]).reduced();
            let b = alphabet.word_from_letters(vec![b_letter]).reduced();
            let (w1, w2, w3, w4, w5) = (&ws[0], &ws[1], &ws[2], &ws[3], &ws[4]);

            let w = w1
                .multiply(&a.inverse())
                .multiply(w2)
                .multiply(&b.inverse())
                .multiply(w3)
                .multiply(&a)
                .multiply(w4)
                .multiply(&b)
                .multiply(w5);
            let u = w1.multiply(w4).multiply(w3).multiply(&a).multiply(&w1.inverse());
            let v = w1
                .multiply(w4)
                .multiply(&b)
                .multiply(&w2.inverse())
                .multiply(&w3.inverse())
                .multiply(&w4.inverse())
                .multiply(&w1.inverse());
            let residue = w1.multiply(w4).multiply(w3).multiply(w2).multiply(w5);
            assert_eq!(ReducedWord::commutator(&u, &v).multiply(&residue), w, "case {case}");
        }
    }

    #[test]
    fn expand_and_verify() {
        let p = CommutatorPresentation::new(ab(), vec![(r("x"), r("y"))]);
        assert_eq!(p.expand(), r("[x,y]"));
        assert!(p.verify(ab().parse("[x,y]").unwrap().reduced().as_word()));
        assert!(!p.verify(r("[x,y]^2").as_word()));

        let empty = CommutatorPresentation::empty(ab());
        assert_eq!(empty.expand(), r("1"));
        assert_eq!(empty.to_string(), "1");
    }

    #[test]
    fn conjugation_lifts_pairs() {
        let p = CommutatorPresentation::new(ab(), vec![(r("x"), r("y"))]);
        let lifted = p.conjugated(&r("x"));
        assert_eq!(lifted.pairs()[0], (r("x"), r("x y x^-1")));
        // conjugating the presentation conjugates its expansion
        assert_eq!(lifted.expand(), r("x").conjugate(&p.expand()));
    }

    #[test]
    fn conjugation_is_an_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let alphabet = Alphabet::with_rank(2);
            let p = CommutatorPresentation::new(
                alphabet.clone(),
                vec![
                    (random_reduced(&alphabet, 3, &mut rng), random_reduced(&alphabet, 2, &mut rng)),
                    (random_reduced(&alphabet, 1, &mut rng), random_reduced(&alphabet, 4, &mut rng)),
                ],
            );
            let c1 = random_reduced(&alphabet, 3, &mut rng);
            let c2 = random_reduced(&alphabet, 2, &mut rng);
            assert_eq!(p.conjugated(&c1).conjugated(&c2), p.conjugated(&c2.multiply(&c1)));
        }
    }

    #[test]
    fn display_presentation() {
        let p = CommutatorPresentation::new(ab(), vec![(r("x^2"), r("y")), (r("y x"), r("x"))]);
        assert_eq!(p.to_string(), "[x^2,y][y x,x]");
    }
}
