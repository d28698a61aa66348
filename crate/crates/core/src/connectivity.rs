//! Connectedness numbers by exact minimization over the decomposition lattice.
//!
//! A decomposition of a divisor `D` is an ordered pair `(A, D-A)` of non-zero
//! effective divisors. The connectedness number is the minimum of `A.(D-A)`;
//! `D` is m-connected when that minimum is at least `m`. The search walks the
//! multiplicity box in counting order, halves the work through the `A <-> D-A`
//! symmetry (keeping the counter-smaller part as `A`), and prunes subtrees
//! with an interval lower bound on the remaining quadratic form. Pruning and
//! partitioning never change the result: the minimum, the tie-broken argmin,
//! and the examined count are functions of the input alone.
//!
//! Large boxes are partitioned by the most significant digit and scanned in
//! parallel; each partition keeps a local incumbent so the reduction is
//! associative and schedule-independent.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Decomposition, Divisor, SurfaceConfiguration};
use crate::error::{Error, Result};
use crate::intersection::{check_magnitude, pairing_raw};
use crate::order::{box_size, counter_cmp, Odometer};
use crate::CheckStatus;

pub const DEFAULT_MAX_CANDIDATES: u64 = 10_000_000;

/// Boxes with more ordered candidates than this are partitioned across workers.
const PARALLEL_THRESHOLD: u128 = 1 << 16;

/// Cap on the number of candidates an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationBudget {
    max_candidates: u64,
}

impl EnumerationBudget {
    pub fn new(max_candidates: u64) -> Result<Self> {
        if max_candidates == 0 {
            return Err(Error::InvalidBudget);
        }
        Ok(EnumerationBudget { max_candidates })
    }

    pub fn max_candidates(&self) -> u64 {
        self.max_candidates
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_candidates: DEFAULT_MAX_CANDIDATES }
    }
}

/// Connectedness number: minimum pairing over decompositions, or infinite
/// when no decomposition exists (irreducible reduced divisors).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conn {
    Finite(i64),
    Infinite,
}

impl Conn {
    /// True iff the connectedness number is at least `m`; infinity counts
    /// as at least every m.
    pub fn at_least(&self, m: i64) -> bool {
        match self {
            Conn::Infinite => true,
            Conn::Finite(c) => *c >= m,
        }
    }
}

impl Ord for Conn {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Conn::Infinite, Conn::Infinite) => Ordering::Equal,
            (Conn::Infinite, Conn::Finite(_)) => Ordering::Greater,
            (Conn::Finite(_), Conn::Infinite) => Ordering::Less,
            (Conn::Finite(a), Conn::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Conn {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Conn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Conn::Finite(c) => write!(f, "{c}"),
            Conn::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Conn {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Conn::Finite(c) => serializer.serialize_i64(*c),
            Conn::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Conn {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ConnVisitor;
        impl serde::de::Visitor<'_> for ConnVisitor {
            type Value = Conn;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                write!(f, "an integer or the string \"inf\"")
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<Conn, E> {
                Ok(Conn::Finite(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<Conn, E> {
                i64::try_from(v).map(Conn::Finite).map_err(serde::de::Error::custom)
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<Conn, E> {
                if v == "inf" {
                    Ok(Conn::Infinite)
                } else {
                    Err(serde::de::Error::custom("expected \"inf\""))
                }
            }
        }
        deserializer.deserialize_any(ConnVisitor)
    }
}

/// Result of a connectedness computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectivityResult {
    pub divisor: Divisor,
    pub conn: Conn,
    pub argmin: Option<Decomposition>,
    pub candidates_examined: u64,
}

/// Ordered candidate count `prod(d_i + 1) - 2` with the budget guard applied.
fn checked_ordered_candidates(d: &Divisor, budget: &EnumerationBudget) -> Result<u128> {
    let total = box_size(d.mult())?;
    let ordered = total - 2; // the box contains 0 and d
    let max = budget.max_candidates as u128;
    if ordered > max.checked_mul(2).ok_or(Error::Overflow)? {
        return Err(Error::BudgetExceeded {
            required: (ordered + 1) / 2,
            max_candidates: budget.max_candidates,
        });
    }
    Ok(ordered)
}

/// Stream of decompositions of `d`, each unordered pair exactly once with the
/// counter-smaller multiplicity vector as the first part, in counting order.
pub fn enumerate_decompositions(d: &Divisor, budget: &EnumerationBudget) -> Result<DecompositionIter> {
    checked_ordered_candidates(d, budget)?;
    Ok(DecompositionIter { divisor: d.clone(), odo: Odometer::new(d.mult().to_vec()) })
}

#[derive(Debug)]
pub struct DecompositionIter {
    divisor: Divisor,
    odo: Odometer,
}

impl Iterator for DecompositionIter {
    type Item = Decomposition;

    fn next(&mut self) -> Option<Decomposition> {
        while self.odo.advance() {
            let a = self.odo.current();
            let d = self.divisor.mult();
            let b: Vec<i64> = d.iter().zip(a).map(|(x, y)| x - y).collect();
            if counter_cmp(a, &b) == Ordering::Greater {
                continue;
            }
            if b.iter().all(|&v| v == 0) {
                continue; // a == d
            }
            let cfg = self.divisor.config().clone();
            let part_a = Divisor::new(cfg.clone(), a.to_vec()).expect("non-zero part");
            let part_b = Divisor::new(cfg, b).expect("non-zero complement");
            return Some(Decomposition::from_parts(part_a, part_b).expect("same configuration"));
        }
        None
    }
}

/// Branch-and-bound state for minimizing `a^T M (d - a)` over the box.
///
/// Digits are assigned from the most significant index down; `c[l]` tracks
/// the linear coefficient of a free digit given the assigned prefix, and
/// `quad_pos_suffix[i]` bounds the positive quadratic mass of the free box.
struct MinSearch<'a> {
    cfg: &'a SurfaceConfiguration,
    d: &'a [i64],
    n: usize,
    c: Vec<i128>,
    a: Vec<i64>,
    quad_pos_suffix: Vec<i128>,
    best: i128,
    best_a: Option<Vec<i64>>,
    examined: u64,
}

impl<'a> MinSearch<'a> {
    fn new(cfg: &'a SurfaceConfiguration, d: &'a [i64]) -> Self {
        let n = cfg.n();
        let mut c = vec![0i128; n];
        for l in 0..n {
            let mut s = 0i128;
            for j in 0..n {
                s += (cfg.entry(l, j) as i128) * (d[j] as i128);
            }
            c[l] = s;
        }
        let mut quad_pos_suffix = vec![0i128; n];
        let mut acc = 0i128;
        for i in 0..n {
            let di = d[i] as i128;
            acc += (cfg.entry(i, i).max(0) as i128) * di * di;
            for j in 0..i {
                acc += 2 * (cfg.entry(i, j).max(0) as i128) * di * (d[j] as i128);
            }
            quad_pos_suffix[i] = acc;
        }
        MinSearch {
            cfg,
            d,
            n,
            c,
            a: vec![0; n],
            quad_pos_suffix,
            best: i128::MAX,
            best_a: None,
            examined: 0,
        }
    }

    fn leaf(&mut self, value: i128) {
        self.examined += 1;
        if value < self.best {
            self.best = value;
            self.best_a = Some(self.a.clone());
        }
    }

    /// Assign the most significant digit and scan its subtree.
    fn top(&mut self, v: i64) {
        let i = self.n - 1;
        let di = self.d[i];
        let sym = v.cmp(&(di - v));
        if sym == Ordering::Greater {
            return;
        }
        let ci = self.c[i];
        let vi = v as i128;
        let acc = vi * ci - vi * vi * (self.cfg.entry(i, i) as i128);
        self.a[i] = v;
        if self.n == 1 {
            if v > 0 {
                self.leaf(acc);
            }
            return;
        }
        if v != 0 {
            for l in 0..i {
                self.c[l] -= 2 * vi * (self.cfg.entry(i, l) as i128);
            }
        }
        self.descend(i - 1, sym, v > 0, acc);
        if v != 0 {
            for l in 0..i {
                self.c[l] += 2 * vi * (self.cfg.entry(i, l) as i128);
            }
        }
    }

    fn descend(&mut self, i: usize, sym: Ordering, nonzero: bool, acc: i128) {
        let di = self.d[i];
        let ci = self.c[i];
        let mii = self.cfg.entry(i, i) as i128;
        for v in 0..=di {
            let sym_v = if sym == Ordering::Equal { v.cmp(&(di - v)) } else { sym };
            if sym_v == Ordering::Greater {
                continue; // the counter-larger orientation of a pair seen already
            }
            let vi = v as i128;
            let acc_v = acc + vi * ci - vi * vi * mii;
            let nz = nonzero || v > 0;
            self.a[i] = v;
            if i == 0 {
                if nz {
                    self.leaf(acc_v);
                }
                continue;
            }
            // Lower bound of the free box: positive quadratic mass plus the
            // negative reach of each free linear coefficient.
            let mut lb = acc_v - self.quad_pos_suffix[i - 1];
            for l in 0..i {
                let cl = self.c[l] - 2 * vi * (self.cfg.entry(i, l) as i128);
                let t = cl * (self.d[l] as i128);
                if t < 0 {
                    lb += t;
                }
            }
            if lb >= self.best {
                continue; // cannot beat the incumbent; equal ties were visited earlier
            }
            if v != 0 {
                for l in 0..i {
                    self.c[l] -= 2 * vi * (self.cfg.entry(i, l) as i128);
                }
            }
            self.descend(i - 1, sym_v, nz, acc_v);
            if v != 0 {
                for l in 0..i {
                    self.c[l] += 2 * vi * (self.cfg.entry(i, l) as i128);
                }
            }
        }
    }
}

/// Minimum of `A.(D-A)` over all decompositions, with the counting-order
/// smallest minimizer, or infinite when no decomposition exists.
pub fn connectedness_number(d: &Divisor, budget: &EnumerationBudget) -> Result<ConnectivityResult> {
    let cfg = d.config();
    let ordered = checked_ordered_candidates(d, budget)?;
    if ordered == 0 {
        return Ok(ConnectivityResult {
            divisor: d.clone(),
            conn: Conn::Infinite,
            argmin: None,
            candidates_examined: 0,
        });
    }
    check_magnitude(cfg, d.mult())?;

    let n = cfg.n();
    let top_cap = d.mult()[n - 1];
    let (best, best_a, examined) = if ordered > PARALLEL_THRESHOLD && n > 1 {
        let partials: Vec<(i128, Option<Vec<i64>>, u64)> = (0..=top_cap)
            .into_par_iter()
            .map(|v| {
                let mut search = MinSearch::new(cfg, d.mult());
                search.top(v);
                (search.best, search.best_a, search.examined)
            })
            .collect();
        let mut best = i128::MAX;
        let mut best_a = None;
        let mut examined: u64 = 0;
        for (b, a, e) in partials {
            examined += e;
            if a.is_some() && b < best {
                best = b;
                best_a = a;
            }
        }
        (best, best_a, examined)
    } else {
        let mut search = MinSearch::new(cfg, d.mult());
        for v in 0..=top_cap {
            search.top(v);
        }
        (search.best, search.best_a, search.examined)
    };

    let a_mult = best_a.expect("non-empty decomposition lattice");
    let b_mult: Vec<i64> = d.mult().iter().zip(&a_mult).map(|(x, y)| x - y).collect();
    let part_a = Divisor::new(cfg.clone(), a_mult)?;
    let part_b = Divisor::new(cfg.clone(), b_mult)?;
    let conn = i64::try_from(best).map_err(|_| Error::Overflow)?;
    Ok(ConnectivityResult {
        divisor: d.clone(),
        conn: Conn::Finite(conn),
        argmin: Some(Decomposition::from_parts(part_a, part_b)?),
        candidates_examined: examined,
    })
}

/// True iff every decomposition pairs to at least `m`.
pub fn is_m_connected(d: &Divisor, m: i64, budget: &EnumerationBudget) -> Result<bool> {
    Ok(connectedness_number(d, budget)?.conn.at_least(m))
}

/// A part that fails one of the split-connectivity bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitWitness {
    pub part: Vec<i64>,
    pub complement: Vec<i64>,
    pub required: i64,
    pub conn: Conn,
}

/// Outcome of [`split_connectivity_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitConnectivityReport {
    pub m: i64,
    pub conn: Conn,
    pub attaining_parts: u64,
    pub minimal_parts: u64,
    pub status: CheckStatus,
    pub counterexample: Option<SplitWitness>,
    pub detail: String,
}

/// For an m-connected divisor, verify the structure of decompositions that
/// attain `m`: both parts of such a decomposition must be
/// `floor((m+1)/2)`-connected, and every part minimal (componentwise) among
/// those attaining `m` must be `floor((m+3)/2)`-connected. A counterexample
/// indicates an implementation bug or invalid configuration data.
pub fn split_connectivity_check(
    d: &Divisor,
    m: i64,
    budget: &EnumerationBudget,
) -> Result<SplitConnectivityReport> {
    let res = connectedness_number(d, budget)?;
    if !res.conn.at_least(m) {
        return Err(Error::NotMConnected { required: m, conn: res.conn });
    }

    // Decompositions attaining m exist only when the minimum equals m.
    let mut parts: Vec<Vec<i64>> = Vec::new();
    if res.conn == Conn::Finite(m) {
        check_magnitude(d.config(), d.mult())?;
        let mut odo = Odometer::new(d.mult().to_vec());
        while odo.advance() {
            let a = odo.current();
            let b: Vec<i64> = d.mult().iter().zip(a).map(|(x, y)| x - y).collect();
            if counter_cmp(a, &b) == Ordering::Greater || b.iter().all(|&v| v == 0) {
                continue;
            }
            if pairing_raw(d.config(), a, &b) == m as i128 {
                parts.push(a.to_vec());
                parts.push(b);
            }
        }
        parts.sort_by(|x, y| counter_cmp(x, y));
        parts.dedup();
    }

    let half = (m + 1).div_euclid(2);
    let minimal_bound = (m + 3).div_euclid(2);
    let mut minimal_count = 0u64;
    let mut failure: Option<SplitWitness> = None;

    'outer: for (idx, part) in parts.iter().enumerate() {
        let part_div = Divisor::new(d.config().clone(), part.clone())?;
        let part_conn = connectedness_number(&part_div, budget)?.conn;
        let minimal = parts
            .iter()
            .enumerate()
            .all(|(j, other)| j == idx || !other.iter().zip(part).all(|(o, p)| o <= p) || other == part);
        let required = if minimal {
            minimal_count += 1;
            minimal_bound.max(half)
        } else {
            half
        };
        if !part_conn.at_least(required) {
            failure = Some(SplitWitness {
                part: part.clone(),
                complement: d.mult().iter().zip(part).map(|(x, y)| x - y).collect(),
                required,
                conn: part_conn,
            });
            break 'outer;
        }
    }

    let status = if failure.is_none() { CheckStatus::Pass } else { CheckStatus::Fail };
    let detail = format!(
        "{} part(s) attain m={}, {} minimal; bounds {} and {}",
        parts.len(),
        m,
        minimal_count,
        half,
        minimal_bound
    );
    Ok(SplitConnectivityReport {
        m,
        conn: res.conn,
        attaining_parts: parts.len() as u64,
        minimal_parts: minimal_count,
        status,
        counterexample: failure,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_chain, gen_cycle, gen_star};

    #[test]
    fn a2_has_one_unordered_decomposition() {
        let (_, d) = gen_chain(2, -2, 0).unwrap();
        let pairs: Vec<_> = enumerate_decompositions(&d, &EnumerationBudget::default())
            .unwrap()
            .collect();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].a.mult(), &[1, 0]);
        assert_eq!(pairs[0].b.mult(), &[0, 1]);
    }

    #[test]
    fn i3_has_three_unordered_decompositions() {
        let (_, d) = gen_cycle(3).unwrap();
        let pairs: Vec<_> = enumerate_decompositions(&d, &EnumerationBudget::default())
            .unwrap()
            .collect();
        assert_eq!(pairs.len(), 3);
        for p in &pairs {
            assert_eq!(p.divisor().unwrap(), d);
        }
    }

    #[test]
    fn single_component_has_no_decomposition() {
        let (_, d) = gen_chain(1, -2, 0).unwrap();
        let pairs: Vec<_> = enumerate_decompositions(&d, &EnumerationBudget::default())
            .unwrap()
            .collect();
        assert!(pairs.is_empty());
        let res = connectedness_number(&d, &EnumerationBudget::default()).unwrap();
        assert_eq!(res.conn, Conn::Infinite);
        assert!(res.argmin.is_none());
        assert!(is_m_connected(&d, 1_000_000, &EnumerationBudget::default()).unwrap());
    }

    #[test]
    fn connectedness_fixtures() {
        let budget = EnumerationBudget::default();
        let (_, a2) = gen_chain(2, -2, 0).unwrap();
        assert_eq!(connectedness_number(&a2, &budget).unwrap().conn, Conn::Finite(1));

        let (_, i3) = gen_cycle(3).unwrap();
        let res = connectedness_number(&i3, &budget).unwrap();
        assert_eq!(res.conn, Conn::Finite(2));
        assert_eq!(res.argmin.unwrap().a.mult(), &[1, 0, 0]);

        let fiber = i3.scaled(2).unwrap();
        let res = connectedness_number(&fiber, &budget).unwrap();
        assert_eq!(res.conn, Conn::Finite(0));
        assert_eq!(res.argmin.unwrap().a.mult(), &[1, 1, 1]);
    }

    #[test]
    fn m_connected_thresholds() {
        let budget = EnumerationBudget::default();
        let (_, i3) = gen_cycle(3).unwrap();
        assert!(is_m_connected(&i3, 2, &budget).unwrap());
        assert!(!is_m_connected(&i3, 3, &budget).unwrap());
    }

    #[test]
    fn budget_error_names_required_budget() {
        let (cfg, _) = gen_chain(2, -2, 0).unwrap();
        let d = Divisor::new(cfg, vec![3, 3]).unwrap();
        let tiny = EnumerationBudget::new(1).unwrap();
        match connectedness_number(&d, &tiny).unwrap_err() {
            Error::BudgetExceeded { required, max_candidates } => {
                assert_eq!(required, 7); // ceil((16 - 2) / 2)
                assert_eq!(max_candidates, 1);
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn split_connectivity_fixtures() {
        let budget = EnumerationBudget::default();
        let (_, a2) = gen_chain(2, -2, 0).unwrap();
        let report = split_connectivity_check(&a2, 1, &budget).unwrap();
        assert_eq!(report.status, CheckStatus::Pass);

        let (_, i3) = gen_cycle(3).unwrap();
        let report = split_connectivity_check(&i3, 2, &budget).unwrap();
        assert_eq!(report.status, CheckStatus::Pass);

        let (_, star) = gen_star(2).unwrap();
        let report = split_connectivity_check(&star, 1, &budget).unwrap();
        assert_eq!(report.status, CheckStatus::Pass);
    }

    #[test]
    fn split_connectivity_requires_precondition() {
        let budget = EnumerationBudget::default();
        let (_, i3) = gen_cycle(3).unwrap();
        assert!(matches!(
            split_connectivity_check(&i3, 3, &budget),
            Err(Error::NotMConnected { required: 3, .. })
        ));
    }

    #[test]
    fn conn_order_and_display() {
        assert!(Conn::Infinite > Conn::Finite(i64::MAX));
        assert!(Conn::Finite(-1) < Conn::Finite(0));
        assert_eq!(Conn::Infinite.to_string(), "inf");
        assert_eq!(Conn::Finite(2).to_string(), "2");
        let json = serde_json::to_string(&Conn::Infinite).unwrap();
        assert_eq!(json, "\"inf\"");
        assert_eq!(serde_json::from_str::<Conn>(&json).unwrap(), Conn::Infinite);
        assert_eq!(serde_json::from_str::<Conn>("-3").unwrap(), Conn::Finite(-3));
    }
}
