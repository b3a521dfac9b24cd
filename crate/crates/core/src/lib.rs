//! Commutator length in free groups.
//!
//! The commutator length `cl(w)` of a word `w` in the commutator subgroup
//! of a free group is the least `m` with `w = [u1,v1]...[um,vm]`. This
//! crate computes it exactly and produces presentations realizing it,
//! through three independent backends that cross-check each other:
//!
//! * **pairing** — maximizes an orbit statistic over all letter pairings
//!   of the cyclically reduced core; an exact closed formula turns the
//!   maximum into `cl(w)`. Exhaustive over `prod_g k_g!` pairings.
//! * **bfs** — breadth-first search over peel residues, merging residues
//!   that agree up to rotation. Finds the shortest peel sequence, hence
//!   both `cl(w)` and a provably minimal presentation.
//! * **guided** — reads a descent marking off an extremal pairing and
//!   peels it, never branching; each step provably lowers the length by
//!   one.
//!
//! Every produced presentation is re-expanded and checked against the
//! input before it is returned.
//!
//! ```
//! use comlen::{search, SearchOptions, Word};
//!
//! let w = Word::parse("[x,y]^3").unwrap().reduced();
//! let found = search::minimal_presentations(&w, &SearchOptions::default()).unwrap();
//! assert_eq!(found.cl(), 2);
//! assert!(found.primary().verify(w.as_word()));
//! ```

pub mod corpus;
pub mod fgword;
pub mod pairing;
pub mod perm;
pub mod present;
pub mod search;

pub use fgword::{
    Alphabet, AlphabetError, CyclicWord, Letter, NotInCommutatorSubgroup, ParseError,
    ParseErrorKind, ReducedWord, Sign, Word,
};
pub use pairing::{ExtremalPairing, Pairing, PairingLength};
pub use perm::{Injection, Permutation};
pub use present::{CommutatorPresentation, Peel};
pub use search::{
    CommutatorWitness, Decomposition, DecompositionError, LengthResult, PresentationResult,
    SearchOptions, SearchStats,
};
