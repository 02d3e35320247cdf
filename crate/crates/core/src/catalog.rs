//! The canonical enumeration of all finite Kripke frames.
//!
//! Frames are ordered by world count n = 1, 2, …; within a fixed n, by
//! the integer value of the order-relation matrix on worlds {0,…,n−1}
//! read in row-major bit order. Only relations *compatible with the
//! index order* (`k ≽ j` implies `k ≥ j` as integers) are enumerated:
//! the diagonal is forced to 1 and the lower triangle to 0, so the
//! matrix integer is determined by the strict upper triangle, with bit
//! (0,1) most significant. Every finite poset has a linear extension,
//! so restricting to index-compatible relations loses nothing up to
//! isomorphism, while keeping the enumeration finite at each n.
//!
//! The enumeration is part of the crate's public contract: index `i`
//! denotes the same frame in every run and every version, because
//! sequence-valued truth values ([`crate::values::ValueSeq`]) index
//! their components by it.
//!
//! Entry counts per world count grow fast (1, 2, 7, 40, 357, 4824,
//! 96428 for n = 1..7), and generating the chunk for a given n costs
//! 2^(n(n−1)/2) candidate matrices, so the catalog refuses to extend
//! beyond [`MAX_CATALOG_WORLDS`] worlds.

use std::sync::Mutex;

use crate::kripke::{Frame, WorldSet};

/// Largest world count the catalog will generate (2^21 candidate
/// matrices; the next step would be 2^28).
pub const MAX_CATALOG_WORLDS: usize = 7;

/// Lazily extended, internally synchronized frame enumeration.
///
/// All accessors behave as pure functions of their arguments; the
/// mutex only guards the memoized chunks.
pub struct FrameCatalog {
    inner: Mutex<CatalogInner>,
}

struct CatalogInner {
    /// All frames generated so far, in catalog order.
    frames: Vec<Frame>,
    /// Chunks for world counts 1..=generated_worlds are in `frames`.
    generated_worlds: usize,
}

impl FrameCatalog {
    pub fn new() -> FrameCatalog {
        FrameCatalog {
            inner: Mutex::new(CatalogInner {
                frames: Vec::new(),
                generated_worlds: 0,
            }),
        }
    }

    /// The frame at catalog index `i`.
    ///
    /// # Panics
    /// If reaching index `i` would require frames with more than
    /// [`MAX_CATALOG_WORLDS`] worlds.
    pub fn frame_at(&self, i: usize) -> Frame {
        let mut inner = self.inner.lock().expect("catalog lock");
        while inner.frames.len() <= i {
            inner.extend_one_world_count();
        }
        inner.frames[i].clone()
    }

    /// All catalog frames with at most `max_worlds` worlds, in catalog
    /// order. `max_worlds` is capped by [`MAX_CATALOG_WORLDS`].
    pub fn frames_up_to_worlds(&self, max_worlds: usize) -> Vec<Frame> {
        assert!(
            max_worlds <= MAX_CATALOG_WORLDS,
            "catalog generation beyond {MAX_CATALOG_WORLDS} worlds is refused \
             (2^(n(n-1)/2) candidates per chunk)"
        );
        let mut inner = self.inner.lock().expect("catalog lock");
        while inner.generated_worlds < max_worlds {
            inner.extend_one_world_count();
        }
        inner
            .frames
            .iter()
            .take_while(|f| f.n() <= max_worlds)
            .cloned()
            .collect()
    }

    /// Number of catalog entries with exactly `n` worlds.
    pub fn count_with_worlds(&self, n: usize) -> usize {
        self.frames_up_to_worlds(n)
            .iter()
            .filter(|f| f.n() == n)
            .count()
    }

    /// The first `count` catalog entries, paired with their indices.
    /// With `up_to_iso`, entries isomorphic to an earlier entry are
    /// skipped (indices still refer to the full enumeration).
    pub fn enumerate_frames(&self, count: usize, up_to_iso: bool) -> Vec<(usize, Frame)> {
        let mut out: Vec<(usize, Frame)> = Vec::new();
        for i in 0..count {
            let frame = self.frame_at(i);
            if up_to_iso && out.iter().any(|(_, seen)| seen.isomorphic_to(&frame)) {
                continue;
            }
            out.push((i, frame));
        }
        out
    }
}

impl Default for FrameCatalog {
    fn default() -> Self {
        FrameCatalog::new()
    }
}

impl CatalogInner {
    fn extend_one_world_count(&mut self) {
        let n = self.generated_worlds + 1;
        assert!(
            n <= MAX_CATALOG_WORLDS,
            "catalog generation beyond {MAX_CATALOG_WORLDS} worlds is refused \
             (2^(n(n-1)/2) candidates per chunk)"
        );
        self.frames.extend(frames_with_worlds(n));
        self.generated_worlds = n;
    }
}

/// All index-compatible posets on `n` worlds, ascending by the
/// upper-triangle bit pattern with pair (0,1) most significant.
fn frames_with_worlds(n: usize) -> Vec<Frame> {
    assert!(n >= 1);
    let pair_count = n * (n - 1) / 2;
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut out = Vec::new();
    for pattern in 0u64..(1 << pair_count) {
        let mut up: Vec<WorldSet> = (0..n).map(WorldSet::singleton).collect();
        let mut bit = pair_count;
        for (i, row) in up.iter_mut().enumerate() {
            for j in (i + 1)..n {
                bit -= 1;
                if pattern & (1 << bit) != 0 {
                    *row = row.with(j);
                }
            }
        }
        if is_transitive(&up) {
            out.push(
                Frame::new(names.clone(), up)
                    .expect("transitive index-compatible relation is a poset"),
            );
        }
    }
    out
}

fn is_transitive(up: &[WorldSet]) -> bool {
    up.iter().all(|&s| s.iter().all(|j| up[j].is_subset_of(s)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(worlds: usize, pairs: &[(usize, usize)]) -> Frame {
        let names = (0..worlds).map(|i| i.to_string()).collect();
        Frame::from_order_pairs(names, pairs).unwrap()
    }

    #[test]
    fn the_smallest_catalog_entries() {
        let cat = FrameCatalog::new();
        assert!(cat.frame_at(0).same_shape(&frame(1, &[])));
        assert!(cat.frame_at(1).same_shape(&frame(2, &[])));
        assert!(cat.frame_at(2).same_shape(&frame(2, &[(0, 1)])));
    }

    #[test]
    fn three_world_chunk_layout() {
        // Patterns on 3 bits (b01 b02 b12) in ascending order; only
        // b01=1, b12=1, b02=0 is intransitive, so seven frames remain.
        let cat = FrameCatalog::new();
        let expected: [&[(usize, usize)]; 7] = [
            &[],
            &[(1, 2)],
            &[(0, 2)],
            &[(0, 2), (1, 2)],
            &[(0, 1)],
            &[(0, 1), (0, 2)],
            &[(0, 1), (1, 2)],
        ];
        for (offset, pairs) in expected.iter().enumerate() {
            let got = cat.frame_at(3 + offset);
            assert!(got.same_shape(&frame(3, pairs)), "index {}", 3 + offset);
        }
    }

    #[test]
    fn labelled_counts_match_an_independent_matrix_filter() {
        // Independent oracle: scan all 2^(n^2) relation matrices and
        // keep the reflexive, transitive, index-compatible ones.
        fn brute_count(n: usize) -> usize {
            let mut count = 0;
            'outer: for code in 0u64..(1 << (n * n)) {
                let rel = |i: usize, j: usize| code & (1 << (i * n + j)) != 0;
                for i in 0..n {
                    if !rel(i, i) {
                        continue 'outer;
                    }
                    for j in 0..n {
                        if rel(i, j) && j < i {
                            continue 'outer;
                        }
                        for k in 0..n {
                            if rel(i, j) && rel(j, k) && !rel(i, k) {
                                continue 'outer;
                            }
                        }
                    }
                }
                count += 1;
            }
            count
        }
        let cat = FrameCatalog::new();
        for n in 1..=4 {
            assert_eq!(cat.count_with_worlds(n), brute_count(n), "n = {n}");
        }
    }

    #[test]
    fn chunk_sizes_for_small_world_counts() {
        let cat = FrameCatalog::new();
        assert_eq!(cat.count_with_worlds(1), 1);
        assert_eq!(cat.count_with_worlds(2), 2);
        assert_eq!(cat.count_with_worlds(3), 7);
        assert_eq!(cat.count_with_worlds(4), 40);
        assert_eq!(cat.count_with_worlds(5), 357);
    }

    #[test]
    fn catalog_is_deterministic_across_instances() {
        let a = FrameCatalog::new();
        let b = FrameCatalog::new();
        for i in 0..50 {
            assert_eq!(a.frame_at(i), b.frame_at(i), "index {i}");
        }
    }

    #[test]
    fn every_entry_passes_frame_validation() {
        let cat = FrameCatalog::new();
        for f in cat.frames_up_to_worlds(4) {
            // Rebuilding through the validating constructor must work.
            let rebuilt = Frame::new(f.worlds().to_vec(), (0..f.n()).map(|i| f.up(i)).collect());
            assert!(rebuilt.is_ok());
        }
    }

    #[test]
    fn key_fixture_indices() {
        let cat = FrameCatalog::new();
        // One top world above two incomparable ones.
        assert!(cat.frame_at(6).same_shape(&frame(3, &[(0, 2), (1, 2)])));
        // One root below two incomparable tops.
        assert!(cat.frame_at(8).same_shape(&frame(3, &[(0, 1), (0, 2)])));
        // The three-world chain.
        assert!(cat.frame_at(9).same_shape(&frame(3, &[(0, 1), (1, 2)])));
        // The first frame shaped like a root with three incomparable
        // leaves sits at index 43: no frame on ≤ 3 worlds has a world
        // with three successors, and among 4-world patterns every
        // matrix smaller than the fan's either lacks such a world or
        // is intransitive.
        let fan = frame(4, &[(0, 1), (0, 2), (0, 3)]);
        let all = cat.frames_up_to_worlds(4);
        let first = all.iter().position(|f| f.same_shape(&fan));
        assert_eq!(first, Some(43));
    }

    #[test]
    fn iso_dedup_keeps_one_representative_per_shape() {
        let cat = FrameCatalog::new();
        let all = cat.enumerate_frames(10, false);
        assert_eq!(all.len(), 10);
        let classes = cat.enumerate_frames(10, true);
        // 1 one-world + 2 two-world + 5 three-world shapes.
        assert_eq!(classes.len(), 8);
        let three: Vec<&Frame> = classes
            .iter()
            .map(|(_, f)| f)
            .filter(|f| f.n() == 3)
            .collect();
        assert_eq!(three.len(), 5);
        // The five shapes on three worlds: antichain, chain with an
        // isolated point, one-top, one-root, chain.
        let shapes = [
            frame(3, &[]),
            frame(3, &[(1, 2)]),
            frame(3, &[(0, 2), (1, 2)]),
            frame(3, &[(0, 1), (0, 2)]),
            frame(3, &[(0, 1), (1, 2)]),
        ];
        for shape in &shapes {
            assert_eq!(three.iter().filter(|f| f.isomorphic_to(shape)).count(), 1);
        }
        // Indices in the deduplicated listing refer to the full
        // enumeration.
        assert_eq!(classes[0].0, 0);
        assert_eq!(classes[1].0, 1);
        assert_eq!(classes[2].0, 2);
        assert_eq!(classes[3].0, 3);
        assert_eq!(classes[4].0, 4);
        // Indices 5 and 7 are isomorphic to 4; the next survivors are
        // the one-top (6), one-root (8), and chain (9).
        assert_eq!(classes[5].0, 6);
        assert_eq!(classes[6].0, 8);
        assert_eq!(classes[7].0, 9);
    }

    #[test]
    fn every_small_poset_is_isomorphic_to_a_catalog_entry() {
        // Hand-built posets on <= 3 points, in arbitrary labelling.
        let cat = FrameCatalog::new();
        let samples = [
            frame(1, &[]),
            frame(2, &[(1, 0)]),
            frame(3, &[(2, 1), (2, 0)]),
            frame(3, &[(1, 0), (2, 0)]),
            frame(3, &[(2, 0), (0, 1)]),
        ];
        let catalog_prefix = cat.frames_up_to_worlds(3);
        for sample in &samples {
            assert!(
                catalog_prefix.iter().any(|f| f.isomorphic_to(sample)),
                "missing shape with {} worlds",
                sample.n()
            );
        }
    }
}
