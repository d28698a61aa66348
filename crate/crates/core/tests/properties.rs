//! Property suites: algebraic identities, oracle equivalence against plain
//! enumeration, determinism across parallel schedules, and the randomized
//! halves of the structural checks.

use std::sync::Arc;

use proptest::prelude::*;

use curvecert_core::config::{Divisor, RawConfiguration, SurfaceConfiguration};
use curvecert_core::connectivity::{
    connectedness_number, enumerate_decompositions, split_connectivity_check, Conn, EnumerationBudget,
};
use curvecert_core::generators::{gen_cycle, permutations, SampleStream, SamplerSpec};
use curvecert_core::intersection::{additivity_check, arithmetic_genus, intersect};
use curvecert_core::order::{box_size, counter_cmp};
use curvecert_core::structure::{
    chain_decomposition_search, enumerate_subcurves, fixed_part_report, genus_connectivity_equivalence,
    genus_spectrum, reduced_component_bound_check, reduced_h1,
};
use curvecert_core::CheckStatus;

fn budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

/// Plain exhaustive minimum of `a.(d-a)` over every interior lattice point,
/// scanning both orientations of each pair. Kept independent of the library
/// search path: raw counter, raw matrix arithmetic.
fn oracle_conn(d: &Divisor) -> Option<(i64, Vec<i64>)> {
    let caps = d.mult();
    let n = caps.len();
    let cfg = d.config();
    let mut cur = vec![0i64; n];
    let mut best: Option<(i64, Vec<i64>)> = None;
    'outer: loop {
        let mut i = 0;
        loop {
            if i == n {
                break 'outer;
            }
            if cur[i] < caps[i] {
                cur[i] += 1;
                for slot in cur.iter_mut().take(i) {
                    *slot = 0;
                }
                break;
            }
            i += 1;
        }
        if cur == caps {
            continue;
        }
        let mut value: i128 = 0;
        for p in 0..n {
            for q in 0..n {
                value += (cur[p] as i128) * (cfg.entry(p, q) as i128) * ((caps[q] - cur[q]) as i128);
            }
        }
        let value = i64::try_from(value).unwrap();
        if best.as_ref().map_or(true, |(b, _)| value < *b) {
            best = Some((value, cur.clone()));
        }
    }
    best
}

fn build_config(comps: &[(i64, i64)], offs: &[i64], snc: bool) -> Arc<SurfaceConfiguration> {
    let n = comps.len();
    let mut matrix = vec![vec![0i64; n]; n];
    let mut k = vec![0i64; n];
    for (i, &(self_int, genus)) in comps.iter().enumerate() {
        matrix[i][i] = self_int;
        k[i] = 2 * genus - 2 - self_int;
    }
    let mut idx = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            matrix[i][j] = offs[idx];
            matrix[j][i] = offs[idx];
            idx += 1;
        }
    }
    Arc::new(
        SurfaceConfiguration::validate(RawConfiguration {
            name: "prop".into(),
            component_names: (0..n).map(|i| format!("c{i}")).collect(),
            matrix,
            k,
            snc_faithful: snc,
        })
        .unwrap(),
    )
}

fn config_strategy(n_max: usize) -> impl Strategy<Value = Arc<SurfaceConfiguration>> {
    (1..=n_max).prop_flat_map(|n| {
        (
            prop::collection::vec((-4i64..=2, 0i64..=1), n),
            prop::collection::vec(0i64..=2, n * (n - 1) / 2),
        )
            .prop_map(|(comps, offs)| build_config(&comps, &offs, true))
    })
}

fn mult_strategy(n: usize, mult_max: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..=mult_max, n).prop_filter("non-zero divisor", |m| m.iter().any(|&v| v > 0))
}

fn instance_strategy(n_max: usize, mult_max: i64) -> impl Strategy<Value = (Arc<SurfaceConfiguration>, Vec<i64>)> {
    config_strategy(n_max).prop_flat_map(move |cfg| {
        let n = cfg.n();
        (Just(cfg), mult_strategy(n, mult_max))
    })
}

proptest! {
    #[test]
    fn pairing_is_bilinear_and_symmetric(
        (cfg, m1) in instance_strategy(4, 3),
        seeds in prop::collection::vec(0i64..=3, 8),
    ) {
        let n = cfg.n();
        let m2: Vec<i64> = (0..n).map(|i| seeds[i % seeds.len()]).collect();
        let m3: Vec<i64> = (0..n).map(|i| seeds[(i + 3) % seeds.len()] % 3 + 1).collect();
        prop_assume!(m2.iter().any(|&v| v > 0));
        let a = Divisor::new(cfg.clone(), m1).unwrap();
        let b = Divisor::new(cfg.clone(), m2).unwrap();
        let c = Divisor::new(cfg, m3).unwrap();
        let sum = a.try_add(&b).unwrap();
        prop_assert_eq!(
            intersect(&sum, &c).unwrap(),
            intersect(&a, &c).unwrap() + intersect(&b, &c).unwrap()
        );
        prop_assert_eq!(intersect(&a, &b).unwrap(), intersect(&b, &a).unwrap());
    }

    #[test]
    fn additivity_identity_holds_exactly(
        (cfg, m1) in instance_strategy(4, 3),
        extra in prop::collection::vec(0i64..=3, 4),
    ) {
        let n = cfg.n();
        let m2: Vec<i64> = (0..n).map(|i| extra[i % extra.len()]).collect();
        prop_assume!(m2.iter().any(|&v| v > 0));
        let d1 = Divisor::new(cfg.clone(), m1).unwrap();
        let d2 = Divisor::new(cfg, m2).unwrap();
        let check = additivity_check(&d1, &d2).unwrap();
        prop_assert!(check.equal, "lhs {} != rhs {}", check.lhs, check.rhs);
    }

    #[test]
    fn genus_report_satisfies_adjunction((cfg, m) in instance_strategy(4, 4)) {
        let d = Divisor::new(cfg, m).unwrap();
        let g = arithmetic_genus(&d).unwrap();
        prop_assert_eq!(2 * g.pa - 2, g.k_degree + g.self_int);
    }

    #[test]
    fn decomposition_stream_is_canonical_and_complete((cfg, m) in instance_strategy(4, 3)) {
        let d = Divisor::new(cfg, m.clone()).unwrap();
        let pairs: Vec<_> = enumerate_decompositions(&d, &budget()).unwrap().collect();
        let total = box_size(&m).unwrap();
        let ordered = total - 2;
        let self_symmetric = u128::from(m.iter().all(|&v| v % 2 == 0));
        prop_assert_eq!(pairs.len() as u128, (ordered + self_symmetric) / 2);
        let mut seen = std::collections::BTreeSet::new();
        for pair in &pairs {
            prop_assert!(counter_cmp(pair.a.mult(), pair.b.mult()) != std::cmp::Ordering::Greater);
            prop_assert_eq!(&pair.divisor().unwrap(), &d);
            prop_assert!(seen.insert(pair.a.mult().to_vec()));
        }
    }

    #[test]
    fn connectedness_matches_plain_oracle((cfg, m) in instance_strategy(4, 4)) {
        prop_assume!(box_size(&m).unwrap() <= 1024);
        let d = Divisor::new(cfg, m).unwrap();
        let result = connectedness_number(&d, &budget()).unwrap();
        match oracle_conn(&d) {
            None => {
                prop_assert_eq!(result.conn, Conn::Infinite);
                prop_assert!(result.argmin.is_none());
            }
            Some((value, argmin)) => {
                prop_assert_eq!(result.conn, Conn::Finite(value));
                let dec = result.argmin.unwrap();
                prop_assert_eq!(dec.a.mult(), &argmin[..]);
            }
        }
    }

    #[test]
    fn connectedness_invariant_under_relabeling((cfg, m) in instance_strategy(4, 3)) {
        prop_assume!(box_size(&m).unwrap() <= 2048);
        let d = Divisor::new(cfg.clone(), m.clone()).unwrap();
        let conn = connectedness_number(&d, &budget()).unwrap().conn;
        for perm in permutations(cfg.n()).into_iter().take(6) {
            let pcfg = Arc::new(cfg.permuted(&perm).unwrap());
            let pd = d.permuted(&perm, pcfg).unwrap();
            prop_assert_eq!(connectedness_number(&pd, &budget()).unwrap().conn, conn);
        }
    }

    #[test]
    fn subcurve_stream_counts((cfg, m) in instance_strategy(4, 3)) {
        prop_assume!(box_size(&m).unwrap() <= 4096);
        let d = Divisor::new(cfg, m.clone()).unwrap();
        let count = enumerate_subcurves(&d, &budget()).unwrap().count() as u128;
        prop_assert_eq!(count, box_size(&m).unwrap() - 1);
    }

    #[test]
    fn equivalence_check_never_fails((cfg, m) in instance_strategy(4, 2)) {
        let d = Divisor::new(cfg, m).unwrap();
        let report = genus_connectivity_equivalence(&d, &budget()).unwrap();
        prop_assert!(report.status != CheckStatus::Fail, "witness: {:?}", report);
    }

    #[test]
    fn component_bound_never_fails(cfg in config_strategy(5)) {
        let d = Divisor::new(cfg.clone(), vec![1; cfg.n()]).unwrap();
        let conn = connectedness_number(&d, &budget()).unwrap().conn;
        prop_assume!(conn.at_least(1));
        let report = reduced_component_bound_check(&d, &budget()).unwrap();
        prop_assert!(report.status == CheckStatus::Pass, "witness: {:?}", report.counterexample);
    }

    #[test]
    fn split_connectivity_never_fails((cfg, m) in instance_strategy(3, 2)) {
        prop_assume!(box_size(&m).unwrap() <= 512);
        let d = Divisor::new(cfg, m).unwrap();
        if let Conn::Finite(c) = connectedness_number(&d, &budget()).unwrap().conn {
            let report = split_connectivity_check(&d, c, &budget()).unwrap();
            prop_assert!(report.status == CheckStatus::Pass, "witness: {:?}", report.counterexample);
        }
    }

    #[test]
    fn reduced_h1_is_nonnegative(cfg in config_strategy(5), mask in prop::collection::vec(0i64..=1, 5)) {
        let n = cfg.n();
        let m: Vec<i64> = mask[..n].to_vec();
        prop_assume!(m.iter().any(|&v| v > 0));
        let d = Divisor::new(cfg, m).unwrap();
        prop_assert!(reduced_h1(&d).unwrap() >= 0);
    }

    #[test]
    fn found_chains_verify((cfg, m) in instance_strategy(3, 2)) {
        prop_assume!(box_size(&m).unwrap() <= 256);
        let d = Divisor::new(cfg, m).unwrap();
        prop_assume!(connectedness_number(&d, &budget()).unwrap().conn.at_least(1));
        for dec in enumerate_decompositions(&d, &budget()).unwrap().take(8) {
            let b = intersect(&dec.a, &dec.b).unwrap();
            if b < 1 {
                continue;
            }
            if let Some(chain) = chain_decomposition_search(&d, &dec.a, &budget()).unwrap() {
                chain.verify(&budget()).unwrap();
                prop_assert_eq!(chain.pieces().len() as i64, b);
            }
        }
    }

    #[test]
    fn fixed_part_report_is_deterministic((cfg, m) in instance_strategy(3, 2)) {
        prop_assume!(box_size(&m).unwrap() <= 128);
        let d = Divisor::new(cfg.clone(), m.clone()).unwrap();
        let z_mult: Vec<i64> = m.iter().enumerate().map(|(i, &v)| if i == 0 { v } else { 0 }).collect();
        prop_assume!(z_mult.iter().any(|&v| v > 0) && z_mult != m);
        let z = Divisor::new(cfg, z_mult).unwrap();
        let a = serde_json::to_string(&fixed_part_report(&d, &z, &budget()).unwrap()).unwrap();
        let b = serde_json::to_string(&fixed_part_report(&d, &z, &budget()).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn multiple_fibres_of_cycles_are_not_one_connected() {
    for n in 3..=5 {
        let (_, d) = gen_cycle(n).unwrap();
        for t in 2..=3 {
            let fiber = d.scaled(t).unwrap();
            let conn = connectedness_number(&fiber, &budget()).unwrap().conn;
            assert!(!conn.at_least(1), "cycle-{n} x{t} has conn {conn}");
            assert_eq!(conn, Conn::Finite(0));
        }
    }
}

#[test]
fn results_identical_across_parallel_schedules() {
    // Large enough to cross the internal partitioning threshold.
    let (cfg, _) = gen_cycle(4).unwrap();
    let d = Divisor::new(cfg, vec![19, 15, 15, 15]).unwrap();
    assert!(box_size(d.mult()).unwrap() > 1 << 16);

    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let r1 = single.install(|| connectedness_number(&d, &budget())).unwrap();
    let r4 = many.install(|| connectedness_number(&d, &budget())).unwrap();
    let r4b = many.install(|| connectedness_number(&d, &budget())).unwrap();
    assert_eq!(r1, r4);
    assert_eq!(r4, r4b);
}

#[test]
fn budget_boundary_is_exact() {
    let (cfg, _) = gen_cycle(3).unwrap();
    let d = Divisor::new(cfg, vec![2, 2, 2]).unwrap();
    let ordered = box_size(d.mult()).unwrap() - 2; // 25
    let required = u64::try_from((ordered + 1) / 2).unwrap(); // 13
    assert!(enumerate_decompositions(&d, &EnumerationBudget::new(required).unwrap()).is_ok());
    let err = enumerate_decompositions(&d, &EnumerationBudget::new(required - 1).unwrap()).unwrap_err();
    assert_eq!(
        err,
        curvecert_core::Error::BudgetExceeded { required: (ordered + 1) / 2, max_candidates: required - 1 }
    );
}

#[test]
fn sampler_streams_are_reproducible() {
    let spec = SamplerSpec { seed: 42, n_max: 3, ..SamplerSpec::default() };
    let first: Vec<_> = SampleStream::new(spec.clone())
        .unwrap()
        .take(8)
        .map(|r| r.unwrap())
        .collect();
    let second: Vec<_> = SampleStream::new(spec).unwrap().take(8).map(|r| r.unwrap()).collect();
    assert_eq!(first.len(), second.len());
    for ((c1, d1), (c2, d2)) in first.iter().zip(&second) {
        assert_eq!(c1.to_raw(), c2.to_raw());
        assert_eq!(d1.mult(), d2.mult());
    }
}

#[test]
fn spectrum_filter_agrees_with_subcurve_scan() {
    let spec = SamplerSpec { seed: 3, n_max: 3, mult_max: 2, ..SamplerSpec::default() };
    for item in SampleStream::new(spec).unwrap().take(32) {
        let (_, d) = item.unwrap();
        let spectrum = genus_spectrum(&d, &budget()).unwrap();
        let max_by_stream = enumerate_subcurves(&d, &budget())
            .unwrap()
            .map(|s| arithmetic_genus(&s).unwrap().pa)
            .max()
            .unwrap();
        assert_eq!(spectrum.max_pa, max_by_stream);
    }
}
