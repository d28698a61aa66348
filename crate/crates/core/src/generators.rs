//! Named fixture families and seeded random instances.
//!
//! Fixtures are dual-graph shaped: chains of like components, cycles of
//! (-2)-components, and stars with a central component meeting disjoint
//! leaves. The sampler draws component data with parity and genus constraints
//! satisfied by construction, so every emitted configuration validates.

use std::cmp::Ordering;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Divisor, RawConfiguration, SurfaceConfiguration};
use crate::connectivity::{connectedness_number, EnumerationBudget};
use crate::error::{Error, Result};
use crate::order::box_size;
use crate::structure::genus_spectrum;

fn build(name: String, component_names: Vec<String>, matrix: Vec<Vec<i64>>, k: Vec<i64>) -> Result<Arc<SurfaceConfiguration>> {
    Ok(Arc::new(SurfaceConfiguration::validate(RawConfiguration {
        name,
        component_names,
        matrix,
        k,
        snc_faithful: true,
    })?))
}

fn all_ones(cfg: &Arc<SurfaceConfiguration>) -> Result<Divisor> {
    Divisor::new(cfg.clone(), vec![1; cfg.n()])
}

/// Path of `n` components with equal self-intersection and canonical degree,
/// consecutive components meeting once; divisor all-ones.
pub fn gen_chain(n: usize, self_int: i64, k: i64) -> Result<(Arc<SurfaceConfiguration>, Divisor)> {
    if n == 0 {
        return Err(Error::ChainTooShort);
    }
    let mut matrix = vec![vec![0i64; n]; n];
    for i in 0..n {
        matrix[i][i] = self_int;
        if i + 1 < n {
            matrix[i][i + 1] = 1;
            matrix[i + 1][i] = 1;
        }
    }
    let cfg = build(
        format!("chain-{n}"),
        (0..n).map(|i| format!("c{i}")).collect(),
        matrix,
        vec![k; n],
    )?;
    let d = all_ones(&cfg)?;
    Ok((cfg, d))
}

/// Cycle of `n >= 3` (-2)-components with canonical degree 0, consecutive
/// components meeting once; divisor all-ones. The cycle has `D^2 = 0` and
/// `K.D = 0`, hence genus 1.
pub fn gen_cycle(n: usize) -> Result<(Arc<SurfaceConfiguration>, Divisor)> {
    if n < 3 {
        return Err(Error::CycleTooShort { len: n });
    }
    let mut matrix = vec![vec![0i64; n]; n];
    for i in 0..n {
        matrix[i][i] = -2;
        let j = (i + 1) % n;
        matrix[i][j] = 1;
        matrix[j][i] = 1;
    }
    let cfg = build(
        format!("cycle-{n}"),
        (0..n).map(|i| format!("c{i}")).collect(),
        matrix,
        vec![0; n],
    )?;
    let d = all_ones(&cfg)?;
    Ok((cfg, d))
}

/// A (-2)-core meeting each of `leaves >= 1` disjoint (-1)-leaves once;
/// divisor all-ones.
pub fn gen_star(leaves: usize) -> Result<(Arc<SurfaceConfiguration>, Divisor)> {
    if leaves == 0 {
        return Err(Error::StarTooSmall);
    }
    let n = leaves + 1;
    let mut matrix = vec![vec![0i64; n]; n];
    matrix[0][0] = -2;
    let mut k = vec![0i64; n];
    for leaf in 1..n {
        matrix[leaf][leaf] = -1;
        matrix[0][leaf] = 1;
        matrix[leaf][0] = 1;
        k[leaf] = -1;
    }
    let mut names = vec!["core".to_string()];
    names.extend((1..n).map(|i| format!("leaf-{i}")));
    let cfg = build(format!("star-{leaves}"), names, matrix, k)?;
    let d = all_ones(&cfg)?;
    Ok((cfg, d))
}

/// Multiple fibre: the divisor scaled by `m >= 2`.
pub fn gen_multiple_fiber(d: &Divisor, m: i64) -> Result<Divisor> {
    if m < 2 {
        return Err(Error::MultiplierTooSmall { multiplier: m });
    }
    d.scaled(m)
}

/// Predicate applied to sampled instances by rejection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceFilter {
    OneConnected,
    AllSubcurvePaNonpositive,
}

impl InstanceFilter {
    pub fn name(&self) -> &'static str {
        match self {
            InstanceFilter::OneConnected => "one_connected",
            InstanceFilter::AllSubcurvePaNonpositive => "all_subcurve_pa_nonpositive",
        }
    }
}

impl std::str::FromStr for InstanceFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one_connected" => Ok(InstanceFilter::OneConnected),
            "all_subcurve_pa_nonpositive" => Ok(InstanceFilter::AllSubcurvePaNonpositive),
            other => Err(Error::InvalidSamplerSpec(format!("unknown filter {other:?}"))),
        }
    }
}

/// Rule for drawing canonical degrees: a component genus is chosen and the
/// degree derived as `k = 2g - 2 - self`, so parity and non-negative genus
/// hold by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KPolicy {
    RationalOnly,
    GenusAtMostOne,
}

/// Parameters of the seeded random instance stream.
#[derive(Debug, Clone)]
pub struct SamplerSpec {
    pub n_max: usize,
    pub mult_max: i64,
    pub self_range: (i64, i64),
    pub k_policy: KPolicy,
    pub edge_density: f64,
    pub seed: u64,
    pub filter: Option<InstanceFilter>,
    pub snc_faithful: bool,
}

impl Default for SamplerSpec {
    fn default() -> Self {
        SamplerSpec {
            n_max: 4,
            mult_max: 3,
            self_range: (-4, 1),
            k_policy: KPolicy::GenusAtMostOne,
            edge_density: 0.5,
            seed: 0,
            filter: None,
            snc_faithful: true,
        }
    }
}

impl SamplerSpec {
    fn validate(&self) -> Result<()> {
        if self.n_max == 0 {
            return Err(Error::InvalidSamplerSpec("n_max must be at least 1".into()));
        }
        if self.mult_max < 1 {
            return Err(Error::InvalidSamplerSpec("mult_max must be at least 1".into()));
        }
        if self.self_range.0 > self.self_range.1 {
            return Err(Error::InvalidSamplerSpec("empty self-intersection range".into()));
        }
        if !(0.0..=1.0).contains(&self.edge_density) {
            return Err(Error::InvalidSamplerSpec("edge_density must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Rejection-rate guard window: at most 99.9% of a window may be rejected.
const REJECTION_WINDOW: u64 = 10_000;

/// Seeded stream of validated `(configuration, divisor)` instances.
/// The same seed yields the same stream.
pub struct SampleStream {
    spec: SamplerSpec,
    rng: ChaCha8Rng,
    budget: EnumerationBudget,
    index: u64,
    window_attempts: u64,
    window_accepted: u64,
}

impl SampleStream {
    pub fn new(spec: SamplerSpec) -> Result<Self> {
        spec.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(spec.seed);
        Ok(SampleStream {
            spec,
            rng,
            budget: EnumerationBudget::default(),
            index: 0,
            window_attempts: 0,
            window_accepted: 0,
        })
    }

    fn draw(&mut self) -> Result<(Arc<SurfaceConfiguration>, Divisor)> {
        let n = self.rng.gen_range(1..=self.spec.n_max);
        let mut matrix = vec![vec![0i64; n]; n];
        let mut k = vec![0i64; n];
        for i in 0..n {
            let self_int = self.rng.gen_range(self.spec.self_range.0..=self.spec.self_range.1);
            let genus = match self.spec.k_policy {
                KPolicy::RationalOnly => 0,
                KPolicy::GenusAtMostOne => self.rng.gen_range(0..=1),
            };
            matrix[i][i] = self_int;
            k[i] = 2 * genus - 2 - self_int;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.rng.gen_bool(self.spec.edge_density) {
                    let weight = self.rng.gen_range(1..=2);
                    matrix[i][j] = weight;
                    matrix[j][i] = weight;
                }
            }
        }
        let cfg = Arc::new(SurfaceConfiguration::validate(RawConfiguration {
            name: format!("sample-{}-{}", self.spec.seed, self.index),
            component_names: (0..n).map(|i| format!("c{i}")).collect(),
            matrix,
            k,
            snc_faithful: self.spec.snc_faithful,
        })?);
        let mult = loop {
            let mult: Vec<i64> = (0..n).map(|_| self.rng.gen_range(0..=self.spec.mult_max)).collect();
            if mult.iter().any(|&v| v > 0) {
                break mult;
            }
        };
        let d = Divisor::new(cfg.clone(), mult)?;
        Ok((cfg, d))
    }

    fn accepts(&mut self, d: &Divisor) -> Result<bool> {
        match self.spec.filter {
            None => Ok(true),
            Some(InstanceFilter::OneConnected) => {
                Ok(connectedness_number(d, &self.budget)?.conn.at_least(1))
            }
            Some(InstanceFilter::AllSubcurvePaNonpositive) => {
                Ok(genus_spectrum(d, &self.budget)?.all_nonpositive)
            }
        }
    }
}

impl Iterator for SampleStream {
    type Item = Result<(Arc<SurfaceConfiguration>, Divisor)>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.window_attempts += 1;
            let drawn = match self.draw() {
                Ok(instance) => instance,
                Err(e) => return Some(Err(e)),
            };
            let accepted = match self.accepts(&drawn.1) {
                Ok(a) => a,
                Err(e) => return Some(Err(e)),
            };
            if accepted {
                self.index += 1;
                self.window_accepted += 1;
            }
            if self.window_attempts == REJECTION_WINDOW {
                let rejected = self.window_attempts - self.window_accepted;
                if rejected * 1000 > self.window_attempts * 999 {
                    return Some(Err(Error::RejectionRateExceeded {
                        attempts: self.window_attempts,
                        rejected,
                    }));
                }
                self.window_attempts = 0;
                self.window_accepted = 0;
            }
            if accepted {
                return Some(Ok(drawn));
            }
        }
    }
}

/// Draw `count` instances and return them smallest decomposition box first
/// (stable under ties, so the order is seed-deterministic).
pub fn sample_batch(spec: SamplerSpec, count: usize) -> Result<Vec<(Arc<SurfaceConfiguration>, Divisor)>> {
    let stream = SampleStream::new(spec)?;
    let mut instances = Vec::with_capacity(count);
    for item in stream.take(count) {
        instances.push(item?);
    }
    let mut keyed: Vec<(u128, usize)> = instances
        .iter()
        .enumerate()
        .map(|(i, (_, d))| Ok((box_size(d.mult())?, i)))
        .collect::<Result<Vec<_>>>()?;
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut by_index: Vec<Option<(Arc<SurfaceConfiguration>, Divisor)>> =
        instances.into_iter().map(Some).collect();
    Ok(keyed
        .into_iter()
        .map(|(_, i)| by_index[i].take().expect("each index moved once"))
        .collect())
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    assert!(n <= 8, "permutation enumeration limited to 8 components");
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(items, k - 1, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(&mut items, n, &mut out);
    out.sort();
    out
}

/// True iff `(matrix, k)` is the smallest representative of its relabeling
/// class, comparing the streamed tuple (diag, k, upper off-diagonal).
pub fn relabeling_canonical(matrix: &[Vec<i64>], k: &[i64], perms: &[Vec<usize>]) -> bool {
    let n = k.len();
    for perm in perms {
        let mut ordering = Ordering::Equal;
        'compare: {
            for i in 0..n {
                match matrix[perm[i]][perm[i]].cmp(&matrix[i][i]) {
                    Ordering::Equal => {}
                    other => {
                        ordering = other;
                        break 'compare;
                    }
                }
            }
            for i in 0..n {
                match k[perm[i]].cmp(&k[i]) {
                    Ordering::Equal => {}
                    other => {
                        ordering = other;
                        break 'compare;
                    }
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    match matrix[perm[i]][perm[j]].cmp(&matrix[i][j]) {
                        Ordering::Equal => {}
                        other => {
                            ordering = other;
                            break 'compare;
                        }
                    }
                }
            }
        }
        if ordering == Ordering::Less {
            return false;
        }
    }
    true
}
