mod common;

use latcoh_core::series::{
    class_component, default_coefficient_count, default_periods, e_coordinate, h_series, h_series_direct,
    periodic_constant, z_series, z_series_ordered,
};
use latcoh_core::surgery::k_plus_two;
use latcoh_core::zu_module::module;
use latcoh_core::{
    sample, Definiteness, Lattice, Normalization, PlumbingGraph, Rational, RelativeContext, Stabilization,
    TowerOptions,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::oracle_relative;

fn small_graph(seed: u64) -> PlumbingGraph {
    sample::random_negative_definite(&mut sample::case_rng(seed, 1), 4, -3)
}

/// Exponents whose `E`-coordinates all lie below `bound`.
fn in_region(g: &PlumbingGraph, c: &[i64], bound: i64) -> bool {
    (0..g.len()).all(|j| e_coordinate(g, c, j) <= Rational::from(bound as i128))
}

fn star(center: i64, legs: &[Vec<i64>]) -> PlumbingGraph {
    let mut dec = vec![center];
    let mut edges = Vec::new();
    for leg in legs {
        let mut prev = 0;
        for &e in leg {
            dec.push(e);
            edges.push((prev, dec.len() - 1));
            prev = dec.len() - 1;
        }
    }
    PlumbingGraph::from_decorations(&dec, &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn z_series_order_independent(seed in 0u64..10_000, bound in 1i64..3) {
        let g = small_graph(seed);
        let bounds = vec![Some(Rational::from(bound as i128)); g.len()];
        let mut order: Vec<usize> = (0..g.len()).collect();
        order.shuffle(&mut sample::case_rng(seed, 2));
        let a = z_series(&g, &bounds).unwrap();
        let b = z_series_ordered(&g, &bounds, &order).unwrap();
        for c in a.coeffs.keys().chain(b.coeffs.keys()) {
            if in_region(&g, c, bound) {
                prop_assert_eq!(a.coefficient(c), b.coefficient(c), "exponent {:?}", c);
            }
        }
    }

    #[test]
    fn class_components_partition(seed in 0u64..10_000) {
        let g = small_graph(seed);
        let lat = Lattice::new(&g).unwrap();
        let z = z_series(&g, &vec![Some(Rational::from(2)); g.len()]).unwrap();
        let mut total = 0usize;
        for id in 0..lat.num_classes() {
            let part = class_component(&z, &lat, id);
            for (c, v) in &part.coeffs {
                prop_assert_eq!(lat.dual_class_id(c), id);
                prop_assert_eq!(z.coefficient(c), *v);
            }
            total += part.len();
        }
        prop_assert_eq!(total, z.len());
    }

    #[test]
    fn one_variable_reduction_agrees(seed in 0u64..10_000) {
        let g = small_graph(seed);
        let lat = Lattice::new(&g).unwrap();
        let mut rng = sample::case_rng(seed, 3);
        let j0 = rng.gen_range(0..g.len());
        let class = rng.gen_range(0..lat.num_classes());
        let d = lat.form().determinant();
        let n = 12usize;
        let mut bounds = vec![None; g.len()];
        bounds[j0] = Some(Rational::new(n as i128, d));
        let z = z_series(&g, &bounds).unwrap();
        let h = h_series(&z, &g, class, j0, n).unwrap();
        prop_assert_eq!(h.coeffs, h_series_direct(&g, class, j0, n).unwrap().coeffs);
    }

    #[test]
    fn pair_and_tower_counts_agree(seed in 0u64..10_000) {
        let g = small_graph(seed);
        prop_assume!(g.len() >= 2);
        let lat = Lattice::new(&g).unwrap();
        let mut rng = sample::case_rng(seed, 4);
        let j0 = rng.gen_range(0..g.len());
        let kbar = sample::random_char(&mut rng, &lat, 4);
        let ctx = RelativeContext::new(&g, j0, &TowerOptions::default()).unwrap();
        let (euler, direct) = ctx.both(&kbar).unwrap();
        if let Some(rel) = direct {
            prop_assert_eq!(rel.eu, euler.eu);
            prop_assert_eq!(rel.n, euler.n);
            // groups vanish above the derived bound
            let above = ctx.level(&kbar, euler.top + 1).unwrap();
            prop_assert!(above.is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn relative_matches_kernel_oracle(seed in 0u64..10_000) {
        let g = sample::random_negative_definite(&mut sample::case_rng(seed, 5), 3, -3);
        let lat = Lattice::new(&g).unwrap();
        let mut rng = sample::case_rng(seed, 6);
        let j0 = rng.gen_range(0..g.len());
        let c: Vec<i64> = (0..g.len()).map(|_| rng.gen_range(0..=3)).collect();
        let kbar = k_plus_two(&lat, &c);
        let rel = RelativeContext::new(&g, j0, &TowerOptions::default()).unwrap().cohomology(&kbar).unwrap();
        let Stabilization::Bounded { top } = rel.status else {
            return Err(TestCaseError::fail(format!("status {:?}", rel.status)));
        };
        // long towers do not fit the brute-force box
        prop_assume!(top <= 12);
        let oracle = oracle_relative(&g, j0, &kbar.a, top + 2)
            .map_err(|e| TestCaseError::fail(format!("{e}: {:?} j0 {j0} kbar {:?} top {top}", g.decorations(), kbar.a)))?;
        prop_assert_eq!(rel.base_weight, lat.weight(&kbar) + oracle.min_shift);
        let mut lib = std::collections::BTreeMap::new();
        for d in &rel.degrees {
            for e in &d.entries {
                lib.insert((e.level, d.q), (e.rank, e.torsion.clone()));
            }
        }
        prop_assert_eq!(lib, oracle.groups);
    }

    /// Star-shaped graphs with `j0` the centre, at `kbar = K`: the relative
    /// group is `ℍ⁰_rel` of rank `rank ℍ⁰_red − min χ_K`, and the periodic
    /// constant of the `[0]` series gives the same number.
    #[test]
    fn star_shaped_centre(
        center in -3i64..=-1,
        legs in proptest::collection::vec(proptest::collection::vec(-5i64..=-2, 1..=2), 3..=3),
    ) {
        let g = star(center, &legs);
        prop_assume!(g.intersection_form().classify() == Definiteness::NegativeDefinite);
        prop_assume!(g.intersection_form().determinant() <= 60);
        let lat = Lattice::new(&g).unwrap();
        let canonical = TowerOptions { normalization: Normalization::Canonical, ..Default::default() };
        let k = lat.canonical();
        let m = module(&lat, lat.class_id(&k).unwrap(), &canonical).unwrap();
        prop_assert!(m.parts.iter().skip(1).all(|p| p.reduced_rank == 0));
        let min_chi = m.d.unwrap() / Rational::from(2);
        let want = Rational::from(m.reduced_rank(0) as i128) - min_chi;

        let ctx = RelativeContext::new(&g, 0, &TowerOptions::default()).unwrap();
        let (euler, direct) = ctx.both(&k).unwrap();
        prop_assert_eq!(Rational::from(euler.eu as i128), want);
        if let Some(rel) = direct {
            prop_assert!(rel.degrees.iter().skip(1).all(|d| d.rank == 0));
            prop_assert_eq!(Rational::from(rel.rank(0) as i128), want);
        }

        let zero = lat.dual_class_id(&vec![0; g.len()]);
        let h = h_series_direct(&g, zero, 0, default_coefficient_count(&g, 0).unwrap()).unwrap();
        let fit = periodic_constant(&h, &default_periods(&h)).unwrap();
        prop_assert_eq!(fit.constant, want);
    }
}
