//! Letter pairings and the extremal-pairing commutator length.
//!
//! A pairing of a word `W = a_1 ... a_n` is a fixed-point-free involution
//! `p` of positions with `a_{p(i)} = a_i^-1`. Writing `v(p)` for the number
//! of orbits of the long cycle composed with `p`, every pairing satisfies
//! `(1 - v(p))/2 + n/4 >= cl(w)` with equality for a pairing maximizing
//! `v`, so maximizing `v` over all pairings computes the commutator length
//! directly. The number of pairings is the product over generators `g` of
//! `k_g!` where `k_g` counts the occurrences of `g`.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::fgword::{require_commutator_subgroup, NotInCommutatorSubgroup, ReducedWord, Sign, Word};
use crate::perm::Permutation;

/// A position pairing: an involution matching each letter with an inverse
/// occurrence. Positions are 0-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pairing {
    images: Vec<usize>,
}

impl Pairing {
    fn from_images(images: Vec<usize>) -> Pairing {
        Pairing { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn as_permutation(&self) -> Permutation {
        Permutation::new(self.images.clone())
    }

    /// Number of orbits of `long_cycle(n)` composed with this pairing.
    pub fn orbit_statistic(&self) -> usize {
        orbit_statistic_of(&self.images)
    }
}

impl Serialize for Pairing {
    /// Serializes as a 1-based image array.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.images.len()))?;
        for &img in &self.images {
            seq.serialize_element(&(img + 1))?;
        }
        seq.end()
    }
}

/// Orbits of `i -> p(i) + 1 (mod n)` for an image table `p`.
fn orbit_statistic_of(images: &[usize]) -> usize {
    let n = images.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = (images[i] + 1) % n;
        }
    }
    count
}

/// Per-generator-and-sign position block with its current matching.
struct Block {
    /// positions of the positive letters, ascending
    pos: Vec<usize>,
    /// positions of the negative letters, ascending
    neg: Vec<usize>,
    /// matching[t] indexes into neg: pos[t] pairs with neg[matching[t]]
    matching: Vec<usize>,
}

impl Block {
    fn write_into(&self, images: &mut [usize]) {
        for (t, &m) in self.matching.iter().enumerate() {
            images[self.pos[t]] = self.neg[m];
            images[self.neg[m]] = self.pos[t];
        }
    }
}

/// Classic next-permutation step; returns false (leaving `a` sorted
/// ascending) after the last permutation.
fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        a.reverse();
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn blocks_of(word: &Word) -> Vec<Block> {
    let rank = word.alphabet().rank();
    let mut pos = vec![Vec::new(); rank];
    let mut neg = vec![Vec::new(); rank];
    for (i, l) in word.letters().iter().enumerate() {
        match l.sign() {
            Sign::Plus => pos[l.gen()].push(i),
            Sign::Minus => neg[l.gen()].push(i),
        }
    }
    pos.into_iter()
        .zip(neg)
        .filter(|(p, _)| !p.is_empty())
        .map(|(pos, neg)| {
            let k = pos.len();
            Block { pos, neg, matching: (0..k).collect() }
        })
        .collect()
}

/// Odometer step over the per-generator matchings, last block fastest.
/// Returns false once every combination has been visited.
fn advance(blocks: &mut [Block], images: &mut [usize]) -> bool {
    for b in blocks.iter_mut().rev() {
        let more = next_permutation(&mut b.matching);
        b.write_into(images);
        if more {
            return true;
        }
    }
    false
}

/// Iterator over every pairing of `word`, in lexicographic matching order
/// per generator, composed by nested iteration (last generator fastest).
pub struct Pairings {
    blocks: Vec<Block>,
    images: Vec<usize>,
    done: bool,
}

impl Iterator for Pairings {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        if self.done {
            return None;
        }
        let current = Pairing::from_images(self.images.clone());
        self.done = !advance(&mut self.blocks, &mut self.images);
        Some(current)
    }
}

/// Enumerates the pairings of `word`, which may be unreduced.
pub fn pairings(word: &Word) -> Result<Pairings, NotInCommutatorSubgroup> {
    require_commutator_subgroup(word)?;
    let blocks = blocks_of(word);
    let mut images = vec![0; word.len()];
    for b in &blocks {
        b.write_into(&mut images);
    }
    Ok(Pairings { blocks, images, done: false })
}

/// `prod_g k_g!`, the exact number of pairings; 0 when the word has no
/// pairing (unbalanced letter counts).
pub fn enumeration_count(word: &Word) -> u128 {
    let rank = word.alphabet().rank();
    let mut pos = vec![0u64; rank];
    let mut neg = vec![0u64; rank];
    for l in word.letters() {
        match l.sign() {
            Sign::Plus => pos[l.gen()] += 1,
            Sign::Minus => neg[l.gen()] += 1,
        }
    }
    let mut count: u128 = 1;
    for g in 0..rank {
        if pos[g] != neg[g] {
            return 0;
        }
        for t in 1..=pos[g] {
            count = count.saturating_mul(t as u128);
        }
    }
    count
}

/// Commutator length from an orbit statistic: `(1 - v)/2 + n/4` in exact
/// integer arithmetic.
fn length_from_statistic(n: usize, v: usize) -> usize {
    let numerator = n as i64 + 2 - 2 * v as i64;
    assert!(numerator >= 0 && numerator % 4 == 0, "statistic {v} impossible for length {n}");
    (numerator / 4) as usize
}

/// A maximizing pairing with its statistic and the length it certifies.
#[derive(Clone, Debug)]
pub struct ExtremalPairing {
    pub pairing: Pairing,
    pub v: usize,
    pub cl: usize,
    /// pairings visited before stopping (ties broken by enumeration order)
    pub enumerated: u64,
}

/// Exhaustively maximizes the orbit statistic over every pairing of `word`.
///
/// When the word does not freely reduce to the empty word the search stops
/// early on reaching `n/2 - 1`, the statistic forcing length 1, which no
/// pairing of a nontrivial word can exceed.
pub fn extremal_pairing(word: &Word) -> Result<ExtremalPairing, NotInCommutatorSubgroup> {
    require_commutator_subgroup(word)?;
    assert!(!word.is_empty(), "the empty word has no pairing");
    let n = word.len();
    let early_exit = if word.reduced().is_empty() { usize::MAX } else { n / 2 - 1 };

    let mut blocks = blocks_of(word);
    let mut images = vec![0; n];
    for b in &blocks {
        b.write_into(&mut images);
    }

    let mut seen = vec![0u32; n];
    let mut epoch = 0u32;
    let mut best_v = 0usize;
    let mut best_images: Option<Vec<usize>> = None;
    let mut enumerated = 0u64;

    loop {
        enumerated += 1;
        epoch += 1;
        let mut v = 0usize;
        for start in 0..n {
            if seen[start] == epoch {
                continue;
            }
            v += 1;
            let mut i = start;
            while seen[i] != epoch {
                seen[i] = epoch;
                i = (images[i] + 1) % n;
            }
        }
        debug_assert_eq!(v % 2, (1 + n / 2) % 2, "statistic parity violated");
        if v > best_v {
            best_v = v;
            best_images = Some(images.clone());
            if v >= early_exit {
                break;
            }
        }
        if !advance(&mut blocks, &mut images) {
            break;
        }
    }

    let pairing = Pairing::from_images(best_images.expect("at least one pairing exists"));
    Ok(ExtremalPairing { pairing, v: best_v, cl: length_from_statistic(n, best_v), enumerated })
}

/// Result of the pairing backend on a reduced word.
#[derive(Clone, Debug)]
pub struct PairingLength {
    pub cl: usize,
    /// extremal data on the cyclically reduced core; None for the empty word
    pub extremal: Option<ExtremalPairing>,
}

/// Commutator length via the extremal pairing of the cyclically reduced
/// core. Returns 0 exactly for the empty word.
pub fn commutator_length(w: &ReducedWord) -> Result<PairingLength, NotInCommutatorSubgroup> {
    require_commutator_subgroup(w.as_word())?;
    if w.is_empty() {
        return Ok(PairingLength { cl: 0, extremal: None });
    }
    let (_, core) = w.cyclic_reduce();
    let extremal = extremal_pairing(core.as_reduced().as_word())?;
    Ok(PairingLength { cl: extremal.cl, extremal: Some(extremal) })
}
