//! Seeded random graphs and characteristic elements for property checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::charlat::{CharElement, Lattice};
use crate::graph::{Definiteness, PlumbingGraph};

/// Deterministic generator for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index)
}

/// A random tree on `s` vertices with decorations drawn from `lo..=hi`.
pub fn random_tree<R: Rng>(rng: &mut R, s: usize, lo: i64, hi: i64) -> PlumbingGraph {
    let decorations: Vec<i64> = (0..s).map(|_| rng.gen_range(lo..=hi)).collect();
    let edges: Vec<(usize, usize)> = (1..s).map(|j| (rng.gen_range(0..j), j)).collect();
    PlumbingGraph::from_decorations(&decorations, &edges).expect("tree is well formed")
}

/// A random negative definite tree with `1..=max_s` vertices.
pub fn random_negative_definite<R: Rng>(rng: &mut R, max_s: usize, min_e: i64) -> PlumbingGraph {
    loop {
        let s = rng.gen_range(1..=max_s);
        let g = random_tree(rng, s, min_e, -1);
        if g.intersection_form().classify() == Definiteness::NegativeDefinite {
            return g;
        }
    }
}

/// A random non-degenerate tree with `min_s..=max_s` vertices; decorations
/// may be positive, so the form is often indefinite.
pub fn random_nondegenerate<R: Rng>(rng: &mut R, min_s: usize, max_s: usize) -> PlumbingGraph {
    loop {
        let s = rng.gen_range(min_s..=max_s);
        let g = random_tree(rng, s, -4, 2);
        if !g.intersection_form().is_degenerate() {
            return g;
        }
    }
}

/// A characteristic element with coefficients in `[-spread, spread]` (up to parity).
pub fn random_char<R: Rng>(rng: &mut R, lat: &Lattice, spread: i64) -> CharElement {
    let a = lat
        .graph()
        .decorations()
        .iter()
        .map(|&e| {
            let x = rng.gen_range(-spread..=spread);
            if (x - e).rem_euclid(2) == 0 {
                x
            } else {
                x + 1
            }
        })
        .collect();
    CharElement::new(a)
}

/// A random subset of `0..s` as a bit mask, with at most `max_dim` elements.
pub fn random_mask<R: Rng>(rng: &mut R, s: usize, max_dim: usize) -> u64 {
    let mut mask = 0u64;
    let target = rng.gen_range(0..=max_dim.min(s));
    while (mask.count_ones() as usize) < target {
        mask |= 1 << rng.gen_range(0..s);
    }
    mask
}
