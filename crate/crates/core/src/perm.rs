//! Finite permutations and induced (first-return) permutations.
//!
//! Everything here is 0-based. Composition is right-to-left:
//! `compose(s, t)` applies `t` first. The induced permutation of a subset
//! sends each point to the first point of the subset its forward orbit
//! reaches, which restricts any permutation to a permutation of the subset.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// A permutation of `{0, .., n-1}` stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds from an image table; panics unless it is a bijection.
    pub fn new(images: Vec<usize>) -> Permutation {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            assert!(img < n, "image {img} out of range for degree {n}");
            assert!(!seen[img], "image {img} repeated");
            seen[img] = true;
        }
        Permutation { images }
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n).collect() }
    }

    /// The cycle `(0 1 2 ... n-1)`: each point maps to its successor mod n.
    pub fn long_cycle(n: usize) -> Permutation {
        Permutation { images: (0..n).map(|i| (i + 1) % n.max(1)).collect() }
    }

    /// Swaps `i` and `j`, fixing everything else.
    pub fn transposition(n: usize, i: usize, j: usize) -> Permutation {
        assert!(i < n && j < n, "transposition points out of range");
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Permutation { images }
    }

    /// One cycle through `points` in listed order, fixing everything else.
    pub fn from_cycle(n: usize, points: &[usize]) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        for (k, &p) in points.iter().enumerate() {
            assert!(p < n, "cycle point out of range");
            images[p] = points[(k + 1) % points.len()];
        }
        Permutation::new(images)
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

    /// `self` after `other`: the result maps `i` to `self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Permutation { images }
    }

    pub fn orbit_count(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut count = 0;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
            }
        }
        count
    }

    /// Orbits as sorted point sets, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut orbits = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                orbit.push(i);
                i = self.images[i];
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    /// Uniformly random permutation (Fisher-Yates).
    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            images.swap(i, rng.gen_range(0..=i));
        }
        Permutation { images }
    }

    /// First-return map on `subset`: each point of the subset goes to the
    /// first subset point on its forward orbit. Points stay on their
    /// original labels.
    pub fn induced_on_subset(&self, subset: &[usize]) -> InducedPermutation {
        let mut member = vec![false; self.degree()];
        for &p in subset {
            assert!(p < self.degree(), "subset point out of range");
            assert!(!member[p], "subset point repeated");
            member[p] = true;
        }
        let mut points: Vec<usize> = subset.to_vec();
        points.sort_unstable();
        let images = points
            .iter()
            .map(|&p| {
                let mut i = self.apply(p);
                while !member[i] {
                    i = self.apply(i);
                }
                i
            })
            .collect();
        InducedPermutation { points, images }
    }

    /// The induced permutation pulled back along an injection: maps `y` to
    /// `alpha^-1` of the first image point on the forward orbit of
    /// `alpha(y)`. Equals the subset first-return map relabeled through
    /// `alpha`.
    pub fn induced_along(&self, alpha: &Injection) -> Permutation {
        assert_eq!(alpha.codomain(), self.degree(), "degree mismatch");
        let mut preimage: Vec<Option<usize>> = vec![None; self.degree()];
        for y in 0..alpha.domain() {
            preimage[alpha.apply(y)] = Some(y);
        }
        let images = (0..alpha.domain())
            .map(|y| {
                let mut i = self.apply(alpha.apply(y));
                loop {
                    match preimage[i] {
                        Some(pre) => break pre,
                        None => i = self.apply(i),
                    }
                }
            })
            .collect();
        Permutation { images }
    }
}

impl Serialize for Permutation {
    /// Serializes as a 1-based image array.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.images.len()))?;
        for &img in &self.images {
            seq.serialize_element(&(img + 1))?;
        }
        seq.end()
    }
}

/// A permutation of a subset, kept on the subset's own labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InducedPermutation {
    points: Vec<usize>,
    images: Vec<usize>,
}

impl InducedPermutation {
    /// The subset, sorted ascending.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn apply(&self, point: usize) -> usize {
        let k = self.points.binary_search(&point).expect("point not in subset");
        self.images[k]
    }

    /// Relabels through the sorted order of the subset: point rank k of the
    /// subset becomes k.
    pub fn relabeled(&self) -> Permutation {
        let images = self
            .images
            .iter()
            .map(|&img| self.points.binary_search(&img).expect("image stays in subset"))
            .collect();
        Permutation::new(images)
    }

    pub fn orbit_count(&self) -> usize {
        self.relabeled().orbit_count()
    }
}

/// An injective map `{0, .., m-1} -> {0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Injection {
    codomain: usize,
    images: Vec<usize>,
}

impl Injection {
    pub fn new(codomain: usize, images: Vec<usize>) -> Injection {
        let mut seen = vec![false; codomain];
        for &img in &images {
            assert!(img < codomain, "image {img} out of range for codomain {codomain}");
            assert!(!seen[img], "image {img} repeated");
            seen[img] = true;
        }
        Injection { codomain, images }
    }

    /// The order-preserving injection `{0,..,n-5} -> {0,..,n-1}` that skips
    /// the four points of `quad`.
    pub fn complement_embedding(n: usize, quad: [usize; 4]) -> Injection {
        check_quad(n, quad);
        let images = (0..n).filter(|i| !quad.contains(i)).collect();
        Injection { codomain: n, images }
    }

    pub fn domain(&self) -> usize {
        self.images.len()
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn apply(&self, y: usize) -> usize {
        self.images[y]
    }

    pub fn image(&self) -> &[usize] {
        &self.images
    }
}

fn check_quad(n: usize, quad: [usize; 4]) {
    assert!(n >= 5, "need degree at least 5");
    assert!(
        quad[0] < quad[1] && quad[1] < quad[2] && quad[2] < quad[3],
        "quad indices must be strictly increasing"
    );
    assert!(quad[3] < n, "quad index out of range");
}

/// The element order of the cycle that the long cycle composed with the two
/// quad transpositions induces on the complement of the quad, written in
/// relabeled coordinates `{0, .., n-5}`.
///
/// With 1-based quad `(i1, i2, i3, i4)` the cycle reads
/// `(1, .., i1-1, i3-2, .., i4-4, i2-1, .., i3-3, i1, .., i2-2, i4-3, .., n-4)`,
/// where a segment is empty whenever its bounds cross. The concatenation
/// below follows that listing, shifted down to 0-based labels.
fn complement_cycle_order(n: usize, quad: [usize; 4]) -> Vec<usize> {
    check_quad(n, quad);
    let (i1, i2, i3, i4) = (quad[0] + 1, quad[1] + 1, quad[2] + 1, quad[3] + 1);
    let mut order: Vec<usize> = Vec::with_capacity(n - 4);
    let mut seg = |lo: usize, hi: usize| {
        // 1-based inclusive bounds; empty when hi < lo
        for v in lo..=hi {
            order.push(v - 1);
        }
    };
    seg(1, i1 - 1);
    seg(i3 - 2, i4 - 4);
    seg(i2 - 1, i3 - 3);
    seg(i1, i2 - 2);
    seg(i4 - 3, n - 4);
    order
}

/// The permutation of `{0, .., n-5}` obtained by inducing
/// `long_cycle(n) . (i1 i3) . (i2 i4)` on the complement of the quad and
/// relabeling order-preservingly. It is always a single (n-4)-cycle; this
/// builds it from the closed-form segment listing rather than by orbit
/// chasing.
pub fn complement_cycle(n: usize, quad: [usize; 4]) -> Permutation {
    let order = complement_cycle_order(n, quad);
    let mut images = vec![usize::MAX; order.len()];
    for (k, &p) in order.iter().enumerate() {
        assert!(p < order.len() && images[p] == usize::MAX, "segment listing is not a cycle");
        images[p] = order[(k + 1) % order.len()];
    }
    Permutation::new(images)
}

/// The conjugator `g` with `complement_cycle(n, quad) = g^-1 . long_cycle . g`:
/// the k-th element of the cycle listing is sent to slot k. It fixes
/// `0, .., i1-2` pointwise.
pub fn complement_cycle_conjugator(n: usize, quad: [usize; 4]) -> Permutation {
    let order = complement_cycle_order(n, quad);
    let mut images = vec![usize::MAX; order.len()];
    for (k, &p) in order.iter().enumerate() {
        assert!(p < order.len() && images[p] == usize::MAX, "segment listing is not a cycle");
        images[p] = k;
    }
    Permutation::new(images)
}
