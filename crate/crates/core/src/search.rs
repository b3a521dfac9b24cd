//! Search backends: breadth-first residue search, guided descent, and the
//! single-commutator test.
//!
//! All three revolve around *decompositions*: four marked positions
//! `i1 < i2 < i3 < i4` in a reduced word whose letters pair into inverses
//! (`a^-1 ... b^-1 ... a ... b`). Peeling a decomposition extracts one
//! commutator and leaves a residue four letters shorter, so a word of
//! commutator length `m` reaches the empty word in exactly `m` peels and
//! never fewer. Breadth-first search over residues (up to rotation) finds
//! the shortest peel sequence; the guided backend reads a provably good
//! marking off an extremal pairing instead of branching.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fgword::{
    reduce_parts, require_commutator_subgroup, Alphabet, CyclicWord, Letter,
    NotInCommutatorSubgroup, Part, ReducedWord, Sign,
};
use crate::pairing::{extremal_pairing, Pairing};
use crate::present::{peel, CommutatorPresentation};

/// Four marked positions `[i1, i2, i3, i4]` in a reduced word, strictly
/// increasing, with `letters[i3] = letters[i1]^-1` and
/// `letters[i4] = letters[i2]^-1`. Writing `a = letters[i3]` and
/// `b = letters[i4]`, the word splits without cancellation as
/// `w1 a^-1 w2 b^-1 w3 a w4 b w5`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Decomposition<'a> {
    word: &'a ReducedWord,
    quad: [usize; 4],
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum DecompositionError {
    #[error("marked positions must be strictly increasing and within the word")]
    BadPositions,
    #[error("marked letters do not pair into inverses")]
    LetterMismatch,
}

impl<'a> Decomposition<'a> {
    pub fn new(word: &'a ReducedWord, quad: [usize; 4]) -> Result<Decomposition<'a>, DecompositionError> {
        let [i1, i2, i3, i4] = quad;
        if !(i1 < i2 && i2 < i3 && i3 < i4 && i4 < word.len()) {
            return Err(DecompositionError::BadPositions);
        }
        let l = word.letters();
        if l[i3] != l[i1].inverse() || l[i4] != l[i2].inverse() {
            return Err(DecompositionError::LetterMismatch);
        }
        Ok(Decomposition { word, quad })
    }

    fn new_unchecked(word: &'a ReducedWord, quad: [usize; 4]) -> Decomposition<'a> {
        debug_assert!(Decomposition::new(word, quad).is_ok());
        Decomposition { word, quad }
    }

    pub fn word(&self) -> &'a ReducedWord {
        self.word
    }

    pub fn quad(&self) -> [usize; 4] {
        self.quad
    }

    /// The k-th unmarked factor (1-based): `w1..w5` in
    /// `w1 a^-1 w2 b^-1 w3 a w4 b w5`.
    pub fn factor(&self, k: usize) -> &'a [Letter] {
        let l = self.word.letters();
        let [i1, i2, i3, i4] = self.quad;
        match k {
            1 => &l[..i1],
            2 => &l[i1 + 1..i2],
            3 => &l[i2 + 1..i3],
            4 => &l[i3 + 1..i4],
            5 => &l[i4 + 1..],
            _ => panic!("factor index must be 1..=5"),
        }
    }

    /// The letter `a`, at `i3` (its inverse sits at `i1`).
    pub fn letter_a(&self) -> Letter {
        self.word.letters()[self.quad[2]]
    }

    /// The letter `b`, at `i4` (its inverse sits at `i2`).
    pub fn letter_b(&self) -> Letter {
        self.word.letters()[self.quad[3]]
    }
}

fn letter_code(l: Letter) -> usize {
    l.gen() * 2
        + match l.sign() {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
}

/// Iterates every decomposition of `word` in lexicographic quad order.
pub fn decompositions(word: &ReducedWord) -> Decompositions<'_> {
    let mut by_code = vec![Vec::new(); word.alphabet().rank() * 2];
    for (i, &l) in word.letters().iter().enumerate() {
        by_code[letter_code(l)].push(i);
    }
    Decompositions { word, by_code, i1: 0, i2: 0, t3: 0, t4: usize::MAX }
}

/// Lazy iterator over the decompositions of one word; see [`decompositions`].
pub struct Decompositions<'a> {
    word: &'a ReducedWord,
    /// positions of each letter, ascending, indexed by `letter_code`
    by_code: Vec<Vec<usize>>,
    i1: usize,
    i2: usize,
    /// cursor into the position list for `letters[i1]^-1` (candidate `i3`s)
    t3: usize,
    /// cursor into the position list for `letters[i2]^-1` (candidate `i4`s);
    /// `usize::MAX` marks it stale after `i3` moved
    t4: usize,
}

impl Decompositions<'_> {
    fn letter(&self, i: usize) -> Letter {
        self.word.letters()[i]
    }

    fn list(&self, l: Letter) -> &[usize] {
        &self.by_code[letter_code(l)]
    }

    /// First candidate `i3` strictly beyond the current `i2`.
    fn lower3(&self) -> usize {
        self.list(self.letter(self.i1).inverse()).partition_point(|&p| p <= self.i2)
    }
}

impl<'a> Iterator for Decompositions<'a> {
    type Item = Decomposition<'a>;

    fn next(&mut self) -> Option<Decomposition<'a>> {
        let n = self.word.len();
        loop {
            if self.i1 + 4 > n {
                return None;
            }
            if self.i2 <= self.i1 {
                self.i2 = self.i1 + 1;
                self.t3 = self.lower3();
                self.t4 = usize::MAX;
            }
            if self.i2 >= n {
                self.i1 += 1;
                self.i2 = 0;
                continue;
            }
            let i3 = self.list(self.letter(self.i1).inverse()).get(self.t3).copied();
            let Some(i3) = i3 else {
                self.i2 += 1;
                if self.i2 < n {
                    self.t3 = self.lower3();
                    self.t4 = usize::MAX;
                }
                continue;
            };
            if self.t4 == usize::MAX {
                self.t4 = self.list(self.letter(self.i2).inverse()).partition_point(|&p| p <= i3);
            }
            let i4 = self.list(self.letter(self.i2).inverse()).get(self.t4).copied();
            let Some(i4) = i4 else {
                self.t3 += 1;
                self.t4 = usize::MAX;
                continue;
            };
            self.t4 += 1;
            return Some(Decomposition::new_unchecked(self.word, [self.i1, self.i2, i3, i4]));
        }
    }
}

fn residue_reduced(d: &Decomposition<'_>) -> ReducedWord {
    reduce_parts(
        d.word().alphabet(),
        &[
            Part::Fwd(d.factor(1)),
            Part::Fwd(d.factor(4)),
            Part::Fwd(d.factor(3)),
            Part::Fwd(d.factor(2)),
            Part::Fwd(d.factor(5)),
        ],
        d.word().len(),
    )
}

/// Peels the decomposition and cyclically reduces what is left: returns
/// `(k, c)` with `w1 w4 w3 w2 w5 = c k c^-1`.
pub fn residue(d: &Decomposition<'_>) -> (CyclicWord, ReducedWord) {
    let (c, k) = residue_reduced(d).cyclic_reduce();
    (k, c)
}

/// Options shared by the breadth-first backends.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Merge residues that agree up to rotation within a level (default on).
    /// Off explores the raw peel tree instead.
    pub dedup: bool,
    /// Worker threads for expanding a level; 1 = sequential. Results and
    /// statistics do not depend on the thread count.
    pub threads: usize,
    /// Collect every distinct minimal presentation instead of stopping at
    /// the first completion.
    pub all_minimal: bool,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions { dedup: true, threads: 1, all_minimal: false }
    }
}

/// Counters describing one search run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    /// nodes taken off a frontier and expanded
    pub nodes_expanded: u64,
    /// residues that matched an already-seen rotation class at the same depth
    pub dedup_hits: u64,
    /// size of each completed frontier, root level (always 1) first
    pub frontier_sizes: Vec<u64>,
    /// pairings visited (guided and pairing backends; 0 for plain search)
    pub pairings_enumerated: u64,
    /// wall-clock time
    pub elapsed_ms: u64,
}

/// Result of a length-only search.
#[derive(Clone, Debug)]
pub struct LengthResult {
    pub cl: usize,
    pub stats: SearchStats,
}

/// Result of a presentation search. `presentations` is never empty: it
/// holds the first minimal presentation found, or every distinct one when
/// `all_minimal` was set.
#[derive(Clone, Debug)]
pub struct PresentationResult {
    pub presentations: Vec<CommutatorPresentation>,
    pub stats: SearchStats,
}

impl PresentationResult {
    pub fn primary(&self) -> &CommutatorPresentation {
        &self.presentations[0]
    }

    /// The commutator length all presentations share.
    pub fn cl(&self) -> usize {
        self.presentations[0].len()
    }
}

/// Commutator length by breadth-first search over residues.
pub fn bfs_commutator_length(
    w: &ReducedWord,
    opts: &SearchOptions,
) -> Result<LengthResult, NotInCommutatorSubgroup> {
    let (cl, _, stats) = bfs_engine(w, opts, false)?;
    Ok(LengthResult { cl, stats })
}

/// A provably minimal presentation (the shortest peel sequence) by
/// breadth-first search; every returned presentation is re-expanded and
/// checked against the input before returning.
pub fn minimal_presentations(
    w: &ReducedWord,
    opts: &SearchOptions,
) -> Result<PresentationResult, NotInCommutatorSubgroup> {
    let (_, presentations, stats) = bfs_engine(w, opts, true)?;
    Ok(PresentationResult { presentations, stats })
}

/// Parents expanded per batch. Completion is only acted on at batch
/// boundaries, so the set of expanded nodes (and every statistic) is
/// independent of the thread count.
const CHUNK: usize = 1024;

struct Node {
    residue: CyclicWord,
    parent: u32,
    quad: [u32; 4],
}

struct ExpandedNode {
    rank: u32,
    /// nonempty residues with the quad that produced them, in peel order
    children: Vec<(CyclicWord, [u32; 4])>,
    /// quads whose residue reduced to the empty word
    terminals: Vec<[u32; 4]>,
}

fn expand_node(node: &Node, rank: u32) -> ExpandedNode {
    let word = node.residue.as_reduced();
    let mut children = Vec::new();
    let mut terminals = Vec::new();
    for d in decompositions(word) {
        let r = residue_reduced(&d);
        let quad = d.quad().map(|i| i as u32);
        if r.is_empty() {
            terminals.push(quad);
        } else {
            let (_, k) = r.cyclic_reduce();
            children.push((k, quad));
        }
    }
    ExpandedNode { rank, children, terminals }
}

fn build_pool(threads: usize) -> Option<rayon::ThreadPool> {
    (threads > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("building a thread pool")
    })
}

fn ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn bfs_engine(
    w: &ReducedWord,
    opts: &SearchOptions,
    want_presentations: bool,
) -> Result<(usize, Vec<CommutatorPresentation>, SearchStats), NotInCommutatorSubgroup> {
    require_commutator_subgroup(w.as_word())?;
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let alphabet = w.alphabet().clone();

    let (c0, k0) = w.cyclic_reduce();
    stats.frontier_sizes.push(1);
    if k0.is_empty() {
        stats.elapsed_ms = ms(start);
        let presentations =
            if want_presentations { vec![CommutatorPresentation::empty(alphabet)] } else { Vec::new() };
        return Ok((0, presentations, stats));
    }

    let pool = build_pool(opts.threads);
    let root = Node { residue: k0, parent: u32::MAX, quad: [0; 4] };
    let mut levels: Vec<Vec<Node>> = vec![vec![root]];

    loop {
        let depth = levels.len() - 1;
        let frontier = &levels[depth];
        assert!(!frontier.is_empty(), "search exhausted before reaching the empty word");
        assert!(frontier.len() <= u32::MAX as usize, "frontier too large to index");

        let mut terminals: Vec<(u32, [u32; 4])> = Vec::new();
        let mut merged: HashMap<CyclicWord, (u32, [u32; 4])> = HashMap::new();
        let mut ordered: Vec<Node> = Vec::new();
        let mut found = false;

        for (chunk_index, chunk) in frontier.chunks(CHUNK).enumerate() {
            if found && !opts.all_minimal {
                break;
            }
            let base = (chunk_index * CHUNK) as u32;
            let expand = |(off, node): (usize, &Node)| expand_node(node, base + off as u32);
            let expanded: Vec<ExpandedNode> = match &pool {
                Some(pool) => pool.install(|| chunk.par_iter().enumerate().map(expand).collect()),
                None => chunk.iter().enumerate().map(expand).collect(),
            };
            stats.nodes_expanded += chunk.len() as u64;
            for exp in expanded {
                if !exp.terminals.is_empty() {
                    found = true;
                    terminals.extend(exp.terminals.into_iter().map(|quad| (exp.rank, quad)));
                }
                if found {
                    // the next frontier will never be used
                    continue;
                }
                for (residue, quad) in exp.children {
                    if opts.dedup {
                        match merged.entry(residue) {
                            Entry::Occupied(_) => stats.dedup_hits += 1,
                            Entry::Vacant(e) => {
                                e.insert((exp.rank, quad));
                            }
                        }
                    } else {
                        ordered.push(Node { residue, parent: exp.rank, quad });
                    }
                }
            }
        }

        if found {
            let cl = depth + 1;
            let presentations = if want_presentations {
                reconstruct(&alphabet, &c0, &levels, &terminals, opts.all_minimal, w)
            } else {
                Vec::new()
            };
            stats.elapsed_ms = ms(start);
            return Ok((cl, presentations, stats));
        }

        let next = if opts.dedup {
            let mut next: Vec<Node> = merged
                .into_iter()
                .map(|(residue, (parent, quad))| Node { residue, parent, quad })
                .collect();
            next.sort_by(|a, b| a.residue.cmp(&b.residue));
            next
        } else {
            ordered
        };
        stats.frontier_sizes.push(next.len() as u64);
        levels.push(next);
        if !want_presentations {
            // length-only search never replays, so parents can be dropped
            let done = levels.len() - 2;
            levels[done] = Vec::new();
        }
    }
}

/// Walks each completion back to the root, then replays the peels forward,
/// lifting every peeled pair by the accumulated conjugator.
fn reconstruct(
    alphabet: &Alphabet,
    c0: &ReducedWord,
    levels: &[Vec<Node>],
    terminals: &[(u32, [u32; 4])],
    all: bool,
    w: &ReducedWord,
) -> Vec<CommutatorPresentation> {
    let take = if all { terminals.len() } else { 1 };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &(parent, quad) in &terminals[..take] {
        let mut quads = vec![quad];
        let mut level = levels.len() - 1;
        let mut rank = parent;
        while level > 0 {
            let node = &levels[level][rank as usize];
            quads.push(node.quad);
            rank = node.parent;
            level -= 1;
        }
        debug_assert_eq!(rank, 0, "every path leads back to the root");
        quads.reverse();

        let mut pairs = Vec::with_capacity(quads.len());
        let mut conj = c0.clone();
        let mut core = levels[0][0].residue.clone();
        for q in quads {
            let quad = [q[0] as usize, q[1] as usize, q[2] as usize, q[3] as usize];
            let d = Decomposition::new(core.as_reduced(), quad)
                .expect("recorded marking stays valid on replay");
            let p = peel(&d);
            pairs.push((conj.conjugate(&p.u), conj.conjugate(&p.v)));
            let (c1, k1) = p.residue.cyclic_reduce();
            conj = conj.multiply(&c1);
            core = k1;
        }
        assert!(core.is_empty(), "replay must end at the empty word");
        let presentation = CommutatorPresentation::new(alphabet.clone(), pairs);
        assert!(presentation.verify(w.as_word()), "presentation must expand to the input");
        if !all || seen.insert(presentation.to_string()) {
            out.push(presentation);
        }
    }
    out
}

/// Reads a marking off an extremal pairing: `i2` is the last position
/// paired forward, `i4` its partner, `i3` the first position after `i2`
/// held by a different generator than `i4`, and `i1` the partner of `i3`.
/// For an extremal pairing these always satisfy `i1 < i2 < i3 < i4`, and
/// peeling them lowers the commutator length by exactly one.
fn descent_quad(letters: &[Letter], pairing: &Pairing) -> [usize; 4] {
    let n = letters.len();
    let i2 = (0..n)
        .rev()
        .find(|&i| pairing.apply(i) > i)
        .expect("a pairing always pairs something forward");
    let i4 = pairing.apply(i2);
    let b = letters[i4];
    let i3 = (i2 + 1..i4)
        .find(|&i| letters[i].gen() != b.gen())
        .expect("an extremal pairing brackets a letter of another generator");
    let i1 = pairing.apply(i3);
    debug_assert!(i1 < i2 && i2 < i3 && i3 < i4, "descent marking out of order");
    [i1, i2, i3, i4]
}

/// A minimal presentation without breadth-first branching: each step finds
/// an extremal pairing of the current core, reads a descent marking off it,
/// and peels. The number of steps always matches the pairing-formula length.
pub fn guided_presentation(w: &ReducedWord) -> Result<PresentationResult, NotInCommutatorSubgroup> {
    require_commutator_subgroup(w.as_word())?;
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let (mut conj, mut core) = w.cyclic_reduce();
    let mut pairs = Vec::new();
    while !core.is_empty() {
        let extremal = extremal_pairing(core.as_reduced().as_word())?;
        stats.pairings_enumerated += extremal.enumerated;
        let quad = descent_quad(core.letters(), &extremal.pairing);
        let d = Decomposition::new(core.as_reduced(), quad).expect("descent marking is valid");
        let p = peel(&d);
        pairs.push((conj.conjugate(&p.u), conj.conjugate(&p.v)));
        let (c1, k1) = p.residue.cyclic_reduce();
        conj = conj.multiply(&c1);
        core = k1;
        stats.nodes_expanded += 1;
    }
    let presentation = CommutatorPresentation::new(w.alphabet().clone(), pairs);
    assert!(presentation.verify(w.as_word()), "presentation must expand to the input");
    stats.elapsed_ms = ms(start);
    Ok(PresentationResult { presentations: vec![presentation], stats })
}

/// A witness that `w = g [u, v] g^-1`.
#[derive(Clone, Debug)]
pub struct CommutatorWitness {
    pub conjugator: ReducedWord,
    pub u: ReducedWord,
    pub v: ReducedWord,
}

impl CommutatorWitness {
    /// `g [u,v] g^-1`, reduced.
    pub fn expand(&self) -> ReducedWord {
        self.conjugator.conjugate(&ReducedWord::commutator(&self.u, &self.v))
    }
}

/// Decides whether `w` is a single commutator, i.e. `w = g [u,v] g^-1` for
/// some words (equivalently `cl(w) <= 1`), by scanning `w`'s own
/// decompositions for one whose residue vanishes. The returned witness is
/// verified before returning. The empty word counts: `1 = [1, 1]`.
pub fn single_commutator_witness(
    w: &ReducedWord,
) -> Result<Option<CommutatorWitness>, NotInCommutatorSubgroup> {
    require_commutator_subgroup(w.as_word())?;
    let alphabet = w.alphabet();
    if w.is_empty() {
        let one = ReducedWord::empty(alphabet);
        return Ok(Some(CommutatorWitness { conjugator: one.clone(), u: one.clone(), v: one }));
    }
    for d in decompositions(w) {
        if !residue_reduced(&d).is_empty() {
            continue;
        }
        let n = w.len();
        let conjugator =
            reduce_parts(alphabet, &[Part::Fwd(d.factor(1)), Part::Fwd(d.factor(4))], n);
        let u = reduce_parts(
            alphabet,
            &[Part::Fwd(d.factor(3)), Part::One(d.letter_a()), Part::Fwd(d.factor(4))],
            n,
        );
        let v = reduce_parts(
            alphabet,
            &[Part::One(d.letter_b()), Part::Inv(d.factor(2)), Part::Inv(d.factor(3))],
            n,
        );
        let witness = CommutatorWitness { conjugator, u, v };
        assert_eq!(witness.expand(), *w, "witness must expand to the input");
        return Ok(Some(witness));
    }
    Ok(None)
}
