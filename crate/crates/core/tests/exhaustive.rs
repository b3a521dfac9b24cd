//! Exhaustive cross-checks over every short reduced word in rank 2.

use comlen::present::peel;
use comlen::{pairing, search, Alphabet, Letter, ReducedWord, SearchOptions, Sign};
use search::Decomposition;

/// Every freely reduced word over `alphabet` of length at most `max_len`.
fn all_reduced_words(alphabet: &Alphabet, max_len: usize) -> Vec<ReducedWord> {
    let mut out = vec![ReducedWord::empty(alphabet)];
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &frontier {
            for g in 0..alphabet.rank() {
                for sign in [Sign::Plus, Sign::Minus] {
                    let l = Letter::new(g, sign);
                    if prefix.last().is_some_and(|&last| last.cancels(l)) {
                        continue;
                    }
                    let mut extended = prefix.clone();
                    extended.push(l);
                    next.push(extended);
                }
            }
        }
        out.extend(next.iter().map(|ls| alphabet.word_from_letters(ls.clone()).reduced()));
        frontier = next;
    }
    out
}

fn quads_brute(word: &ReducedWord) -> Vec<[usize; 4]> {
    let n = word.len();
    let mut out = Vec::new();
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            for i3 in i2 + 1..n {
                for i4 in i3 + 1..n {
                    if Decomposition::new(word, [i1, i2, i3, i4]).is_ok() {
                        out.push([i1, i2, i3, i4]);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn decomposition_iterator_is_exact_on_every_short_word() {
    let alphabet = Alphabet::with_rank(2);
    let mut words = 0u64;
    let mut quads = 0u64;
    for w in all_reduced_words(&alphabet, 9) {
        let listed: Vec<[usize; 4]> = search::decompositions(&w).map(|d| d.quad()).collect();
        assert_eq!(listed, quads_brute(&w), "word {w}");
        words += 1;
        quads += listed.len() as u64;
    }
    assert_eq!(words, 39_365, "4 * 3^(n-1) reduced words of each length n <= 9, plus the empty word");
    assert!(quads > 0);
}

#[test]
fn peel_rebuilds_every_decomposition_of_every_short_word() {
    let alphabet = Alphabet::with_rank(2);
    for w in all_reduced_words(&alphabet, 7) {
        for d in search::decompositions(&w) {
            let p = peel(&d);
            assert_eq!(
                ReducedWord::commutator(&p.u, &p.v).multiply(&p.residue),
                w,
                "peel at {:?} of {w}",
                d.quad()
            );
            let (k, c) = search::residue(&d);
            assert_eq!(c.multiply(k.as_reduced()).multiply(&c.inverse()), p.residue);
        }
    }
}

#[test]
fn backends_agree_on_every_short_subgroup_word() {
    let alphabet = Alphabet::with_rank(2);
    let opts = SearchOptions::default();
    let mut checked = 0u64;
    for w in all_reduced_words(&alphabet, 8) {
        if !w.in_commutator_subgroup() {
            continue;
        }
        let from_pairing = pairing::commutator_length(&w).unwrap().cl;
        let bfs = search::bfs_commutator_length(&w, &opts).unwrap();
        assert_eq!(bfs.cl, from_pairing, "bfs vs pairing on {w}");

        let presented = search::minimal_presentations(&w, &opts).unwrap();
        assert_eq!(presented.cl(), from_pairing, "presentation length on {w}");
        assert!(presented.primary().verify(w.as_word()));

        let guided = search::guided_presentation(&w).unwrap();
        assert_eq!(guided.cl(), from_pairing, "guided vs pairing on {w}");
        assert!(guided.primary().verify(w.as_word()));

        let witness = search::single_commutator_witness(&w).unwrap();
        assert_eq!(witness.is_some(), from_pairing <= 1, "witness vs length on {w}");
        if let Some(witness) = witness {
            assert_eq!(witness.expand(), w);
        }
        checked += 1;
    }
    // every word of length <= 8 over two generators with zero exponent sums
    assert_eq!(checked, 361);
}

#[test]
fn dedup_and_raw_search_agree_on_every_short_subgroup_word() {
    let alphabet = Alphabet::with_rank(2);
    let deduped = SearchOptions::default();
    let raw = SearchOptions { dedup: false, ..SearchOptions::default() };
    for w in all_reduced_words(&alphabet, 8) {
        if !w.in_commutator_subgroup() {
            continue;
        }
        let a = search::bfs_commutator_length(&w, &deduped).unwrap();
        let b = search::bfs_commutator_length(&w, &raw).unwrap();
        assert_eq!(a.cl, b.cl, "word {w}");
        assert!(a.stats.nodes_expanded <= b.stats.nodes_expanded, "dedup never expands more");
    }
}
