//! Shared inputs for the benchmarks.

use latcoh_core::{fixtures, sample, PlumbingGraph};

pub fn fixture(text: &str) -> PlumbingGraph {
    PlumbingGraph::parse(text).expect("fixture parses")
}

pub fn star_2_3_7() -> PlumbingGraph {
    fixture(fixtures::STAR_2_3_7)
}

pub fn e8_tail() -> PlumbingGraph {
    fixture(fixtures::E8_TAIL)
}

/// Seeded negative definite graphs with `s` vertices.
pub fn random_graphs(s: usize, count: u64) -> Vec<PlumbingGraph> {
    (0..count)
        .map(|seed| sample::random_negative_definite(&mut sample::case_rng(seed, 0), s, -3))
        .collect()
}
