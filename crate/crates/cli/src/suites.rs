//! Named invariant suites behind `curvecert check`.
//!
//! Exhaustive suites sweep bounded configuration families; randomized suites
//! draw seeded instances and shrink any counterexample before reporting it.
//! Configurations are swept up to component relabeling where the checked
//! quantity is relabeling-invariant (that invariance is itself covered by
//! the library's property tests).

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use curvecert_core::config::{Divisor, RawConfiguration, SurfaceConfiguration};
use curvecert_core::connectivity::{connectedness_number, split_connectivity_check, Conn, EnumerationBudget};
use curvecert_core::error::Result;
use curvecert_core::generators::{permutations, relabeling_canonical, SampleStream, SamplerSpec};
use curvecert_core::intersection::additivity_check;
use curvecert_core::order::Odometer;
use curvecert_core::structure::{genus_connectivity_equivalence, reduced_component_bound_check, reduced_h1};
use curvecert_core::CheckStatus;

use crate::report::{csv, SuiteWitnessJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Additivity,
    PropGo,
    LemmaB,
    SplitConn,
    H1Nonneg,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Additivity, Suite::PropGo, Suite::LemmaB, Suite::SplitConn, Suite::H1Nonneg];

    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "additivity" => Some(Suite::Additivity),
            "prop_go" => Some(Suite::PropGo),
            "lemma_b" => Some(Suite::LemmaB),
            "split_conn" => Some(Suite::SplitConn),
            "h1_nonneg" => Some(Suite::H1Nonneg),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Additivity => "additivity",
            Suite::PropGo => "prop_go",
            Suite::LemmaB => "lemma_b",
            Suite::SplitConn => "split_conn",
            Suite::H1Nonneg => "h1_nonneg",
        }
    }

    /// Randomized suites draw from a seeded stream; exhaustive ones sweep a
    /// family whose size is set by `--count` (maximum component count).
    pub fn is_randomized(&self) -> bool {
        matches!(self, Suite::Additivity | Suite::H1Nonneg)
    }

    pub fn default_count(&self) -> u64 {
        match self {
            Suite::Additivity => 1000,
            Suite::PropGo => 3,
            Suite::LemmaB => 4,
            Suite::SplitConn => 4,
            Suite::H1Nonneg => 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub scale: String,
    pub checked: u64,
    pub violations: u64,
    pub witness: Option<SuiteWitnessJson>,
}

pub fn run_suite(suite: Suite, seed: u64, count: u64, budget: &EnumerationBudget) -> Result<SuiteOutcome> {
    match suite {
        Suite::Additivity => run_additivity(seed, count, budget),
        Suite::PropGo => run_prop_go(count as usize, budget),
        Suite::LemmaB => run_lemma_b(count as usize, budget),
        Suite::SplitConn => run_split_conn(count as usize, budget),
        Suite::H1Nonneg => run_h1_nonneg(seed, count, budget),
    }
}

fn witness_from(cfg: &SurfaceConfiguration, divisors: &[Vec<i64>], detail: String) -> SuiteWitnessJson {
    SuiteWitnessJson {
        config: Some(cfg.to_document()),
        divisors: divisors.to_vec(),
        detail,
    }
}

/// Greedily shrink a failing instance: drop components, then decrement
/// multiplicities, as long as the predicate still fails.
pub fn shrink_instance<F>(
    mut cfg: Arc<SurfaceConfiguration>,
    mut divisors: Vec<Vec<i64>>,
    fails: F,
) -> (Arc<SurfaceConfiguration>, Vec<Vec<i64>>)
where
    F: Fn(&Arc<SurfaceConfiguration>, &[Vec<i64>]) -> bool,
{
    loop {
        let mut improved = false;
        let n = cfg.n();
        if n > 1 {
            'drop: for skip in 0..n {
                let keep: Vec<usize> = (0..n).filter(|&i| i != skip).collect();
                let shrunk: Vec<Vec<i64>> = divisors
                    .iter()
                    .map(|d| keep.iter().map(|&i| d[i]).collect())
                    .collect();
                if shrunk.iter().any(|d: &Vec<i64>| d.iter().all(|&v| v == 0)) {
                    continue;
                }
                let mut matrix = vec![vec![0i64; n - 1]; n - 1];
                for (a, &i) in keep.iter().enumerate() {
                    for (b, &j) in keep.iter().enumerate() {
                        matrix[a][b] = cfg.entry(i, j);
                    }
                }
                let raw = RawConfiguration {
                    name: cfg.name().to_string(),
                    component_names: keep.iter().map(|&i| cfg.component_name(i).to_string()).collect(),
                    matrix,
                    k: keep.iter().map(|&i| cfg.k()[i]).collect(),
                    snc_faithful: cfg.snc_faithful(),
                };
                if let Ok(sub) = SurfaceConfiguration::validate(raw) {
                    let sub = Arc::new(sub);
                    if fails(&sub, &shrunk) {
                        cfg = sub;
                        divisors = shrunk;
                        improved = true;
                        break 'drop;
                    }
                }
            }
        }
        if improved {
            continue;
        }
        'dec: for di in 0..divisors.len() {
            for i in 0..cfg.n() {
                if divisors[di][i] == 0 {
                    continue;
                }
                divisors[di][i] -= 1;
                let nonzero = divisors[di].iter().any(|&v| v > 0);
                if nonzero && fails(&cfg, &divisors) {
                    improved = true;
                    break 'dec;
                }
                divisors[di][i] += 1;
            }
        }
        if !improved {
            break;
        }
    }
    (cfg, divisors)
}

fn run_additivity(seed: u64, samples: u64, budget: &EnumerationBudget) -> Result<SuiteOutcome> {
    let _ = budget;
    let spec = SamplerSpec { seed, n_max: 4, mult_max: 3, ..SamplerSpec::default() };
    let mut aux = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_cafe);
    let mut checked = 0u64;
    let mut witness = None;
    for item in SampleStream::new(spec)?.take(samples as usize) {
        let (cfg, d1) = item?;
        let n = cfg.n();
        let m2: Vec<i64> = loop {
            let m: Vec<i64> = (0..n).map(|_| aux.gen_range(0..=3)).collect();
            if m.iter().any(|&v| v > 0) {
                break m;
            }
        };
        let d2 = Divisor::new(cfg.clone(), m2.clone())?;
        checked += 1;
        let result = additivity_check(&d1, &d2)?;
        if !result.equal {
            let fails = |c: &Arc<SurfaceConfiguration>, ds: &[Vec<i64>]| {
                let a = Divisor::new(c.clone(), ds[0].clone());
                let b = Divisor::new(c.clone(), ds[1].clone());
                match (a, b) {
                    (Ok(a), Ok(b)) => additivity_check(&a, &b).map(|r| !r.equal).unwrap_or(false),
                    _ => false,
                }
            };
            let (cfg, ds) = shrink_instance(cfg, vec![d1.mult().to_vec(), m2], fails);
            witness = Some(witness_from(
                &cfg,
                &ds,
                format!("pa(d1+d2) != pa(d1)+pa(d2)-1+d1.d2 for d1={}, d2={}", csv(&ds[0]), csv(&ds[1])),
            ));
            break;
        }
    }
    Ok(SuiteOutcome {
        scale: format!("{samples} seeded samples"),
        checked,
        violations: u64::from(witness.is_some()),
        witness,
    })
}

/// Sweep every configuration with `n <= n_max`, self-intersections in
/// [-3, 3], rational components, off-diagonals in [0, 2], up to relabeling;
/// on full-support divisors with multiplicities in {1, 2} whose subcurves
/// all have non-positive genus, `pa = 0` must coincide with 1-connectedness.
fn run_prop_go(n_max: usize, budget: &EnumerationBudget) -> Result<SuiteOutcome> {
    let mut checked = 0u64;
    let mut witness: Option<SuiteWitnessJson> = None;
    for n in 1..=n_max {
        let perms = permutations(n);
        let off_pairs = n * (n - 1) / 2;
        let mut patterns = Vec::new();
        {
            let odo_caps = vec![2i64; off_pairs];
            let mut odo = Odometer::new(odo_caps);
            patterns.push(vec![0i64; off_pairs]);
            while odo.advance() {
                patterns.push(odo.current().to_vec());
            }
        }
        let per_pattern: Vec<Result<(u64, Option<SuiteWitnessJson>)>> = patterns
            .par_iter()
            .map(|pattern| prop_go_pattern(n, pattern, &perms, budget))
            .collect();
        for result in per_pattern {
            let (count, w) = result?;
            checked += count;
            if witness.is_none() {
                witness = w;
            }
        }
        if witness.is_some() {
            break;
        }
    }
    Ok(SuiteOutcome {
        scale: format!("exhaustive n<={n_max}, |self|<=3, off-diag<=2, genus 0, mult<=2"),
        checked,
        violations: u64::from(witness.is_some()),
        witness,
    })
}

fn prop_go_pattern(
    n: usize,
    pattern: &[i64],
    perms: &[Vec<usize>],
    budget: &EnumerationBudget,
) -> Result<(u64, Option<SuiteWitnessJson>)> {
    let mut matrix = vec![vec![0i64; n]; n];
    let mut idx = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            matrix[i][j] = pattern[idx];
            matrix[j][i] = pattern[idx];
            idx += 1;
        }
    }
    let mut k = vec![0i64; n];
    let mut checked = 0u64;
    let mut witness = None;

    let mut selfs = Odometer::new(vec![6i64; n]);
    loop {
        for i in 0..n {
            matrix[i][i] = selfs.current()[i] - 3;
            k[i] = -2 - matrix[i][i];
        }
        if relabeling_canonical(&matrix, &k, perms) {
            let cfg = Arc::new(SurfaceConfiguration::validate(RawConfiguration {
                name: format!("prop-go-{n}"),
                component_names: (0..n).map(|i| format!("c{i}")).collect(),
                matrix: matrix.clone(),
                k: k.clone(),
                snc_faithful: false,
            })?);
            let mut mults = Odometer::new(vec![1i64; n]);
            loop {
                let mult: Vec<i64> = mults.current().iter().map(|&b| b + 1).collect();
                let d = Divisor::new(cfg.clone(), mult)?;
                let report = genus_connectivity_equivalence(&d, budget)?;
                match report.status {
                    CheckStatus::NotApplicable => {}
                    CheckStatus::Pass => checked += 1,
                    CheckStatus::Fail => {
                        checked += 1;
                        if witness.is_none() {
                            witness = Some(witness_from(
                                &cfg,
                                &[d.mult().to_vec()],
                                format!("equivalence fails: {}", report.detail),
                            ));
                        }
                    }
                }
                if !mults.advance() {
                    break;
                }
            }
        }
        if !selfs.advance() {
            break;
        }
    }
    Ok((checked, witness))
}

/// Shared sweep for the reduced families: (-2)-components with canonical
/// degree 0, off-diagonals in [0, 2] up to relabeling, all-ones divisor.
fn for_each_reduced_family<F>(n_max: usize, mut per_divisor: F) -> Result<(u64, Option<SuiteWitnessJson>)>
where
    F: FnMut(&Arc<SurfaceConfiguration>, &Divisor) -> Result<Option<SuiteWitnessJson>> + Send,
{
    let mut checked = 0u64;
    let mut witness = None;
    for n in 2..=n_max {
        let perms = permutations(n);
        let off_pairs = n * (n - 1) / 2;
        let mut odo = Odometer::new(vec![2i64; off_pairs]);
        let mut patterns = vec![vec![0i64; off_pairs]];
        while odo.advance() {
            patterns.push(odo.current().to_vec());
        }
        for pattern in patterns {
            let mut matrix = vec![vec![0i64; n]; n];
            let mut idx = 0;
            for i in 0..n {
                matrix[i][i] = -2;
                for j in (i + 1)..n {
                    matrix[i][j] = pattern[idx];
                    matrix[j][i] = pattern[idx];
                    idx += 1;
                }
            }
            let k = vec![0i64; n];
            if !relabeling_canonical(&matrix, &k, &perms) {
                continue;
            }
            let cfg = Arc::new(SurfaceConfiguration::validate(RawConfiguration {
                name: format!("reduced-family-{n}"),
                component_names: (0..n).map(|i| format!("c{i}")).collect(),
                matrix,
                k,
                snc_faithful: true,
            })?);
            let d = Divisor::new(cfg.clone(), vec![1; n])?;
            checked += 1;
            if witness.is_none() {
                witness = per_divisor(&cfg, &d)?;
                if witness.is_some() {
                    return Ok((checked, witness));
                }
            }
        }
    }
    Ok((checked, witness))
}

/// Reduced h0 bound: on 1-connected reduced divisors, the component count of
/// every reduced proper subcurve is at most its pairing with the complement.
fn run_lemma_b(n_max: usize, budget: &EnumerationBudget) -> Result<SuiteOutcome> {
    let (checked, witness) = for_each_reduced_family(n_max, |cfg, d| {
        if !connectedness_number(d, budget)?.conn.at_least(1) {
            return Ok(None);
        }
        let report = reduced_component_bound_check(d, budget)?;
        if report.status == CheckStatus::Fail {
            let w = report.counterexample.expect("failed check carries a witness");
            return Ok(Some(witness_from(
                cfg,
                &[d.mult().to_vec(), w.subcurve.clone()],
                format!("h0 = {} exceeds pairing {} for subcurve {}", w.h0, w.pairing, csv(&w.subcurve)),
            )));
        }
        Ok(None)
    })?;
    Ok(SuiteOutcome {
        scale: format!("exhaustive snc families n<={n_max}, off-diag<=2, reduced 1-connected d"),
        checked,
        violations: u64::from(witness.is_some()),
        witness,
    })
}

/// Split-connectivity bounds on decompositions attaining the connectedness
/// number of each divisor in the reduced family.
fn run_split_conn(n_max: usize, budget: &EnumerationBudget) -> Result<SuiteOutcome> {
    let (checked, witness) = for_each_reduced_family(n_max, |cfg, d| {
        let conn = connectedness_number(d, budget)?.conn;
        let Conn::Finite(m) = conn else { return Ok(None) };
        let report = split_connectivity_check(d, m, budget)?;
        if report.status == CheckStatus::Fail {
            let w = report.counterexample.expect("failed check carries a witness");
            return Ok(Some(witness_from(
                cfg,
                &[d.mult().to_vec(), w.part.clone()],
                format!(
                    "part {} has conn {} below the required {}",
                    csv(&w.part),
                    w.conn,
                    w.required
                ),
            )));
        }
        Ok(None)
    })?;
    Ok(SuiteOutcome {
        scale: format!("exhaustive snc families n<={n_max}, off-diag<=2, all-ones d"),
        checked,
        violations: u64::from(witness.is_some()),
        witness,
    })
}

fn run_h1_nonneg(seed: u64, samples: u64, budget: &EnumerationBudget) -> Result<SuiteOutcome> {
    let _ = budget;
    let spec = SamplerSpec { seed, n_max: 5, mult_max: 1, ..SamplerSpec::default() };
    let mut checked = 0u64;
    let mut witness = None;
    for item in SampleStream::new(spec)?.take(samples as usize) {
        let (cfg, d) = item?;
        checked += 1;
        let h1 = reduced_h1(&d)?;
        if h1 < 0 {
            let fails = |c: &Arc<SurfaceConfiguration>, ds: &[Vec<i64>]| {
                Divisor::new(c.clone(), ds[0].clone())
                    .and_then(|d| reduced_h1(&d))
                    .map(|h| h < 0)
                    .unwrap_or(false)
            };
            let (cfg, ds) = shrink_instance(cfg, vec![d.mult().to_vec()], fails);
            witness = Some(witness_from(&cfg, &ds, format!("reduced h1 = {h1} below zero")));
            break;
        }
    }
    Ok(SuiteOutcome {
        scale: format!("{samples} seeded reduced samples"),
        checked,
        violations: u64::from(witness.is_some()),
        witness,
    })
}
