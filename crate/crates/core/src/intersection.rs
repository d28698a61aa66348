//! Bilinear intersection pairing and adjunction genus arithmetic.
//!
//! All values are exact integers. Public entry points use checked arithmetic
//! and fail with `Error::Overflow` rather than wrap; the crate-internal raw
//! helpers assume a prior magnitude check and run without per-operation
//! checks, which keeps exhaustive scans cheap.

use serde::Serialize;

use crate::config::{Divisor, SurfaceConfiguration};
use crate::error::{Error, Result};

/// Magnitudes stay below this; leaves generous i128 headroom for sums of
/// partial quadratic forms and search bounds.
const MAGNITUDE_LIMIT: u128 = 1 << 100;

/// Verify that every quadratic-form partial sum over the box `0..=caps`
/// stays far from i128 range, so raw arithmetic cannot overflow.
pub(crate) fn check_magnitude(cfg: &SurfaceConfiguration, caps: &[i64]) -> Result<()> {
    let n = cfg.n();
    let mut total: u128 = 0;
    for i in 0..n {
        let ci = caps[i].unsigned_abs() as u128;
        let ki = cfg.k()[i].unsigned_abs() as u128;
        total = total
            .checked_add(ki.checked_mul(ci).ok_or(Error::Overflow)?)
            .ok_or(Error::Overflow)?;
        for j in 0..n {
            let term = (cfg.entry(i, j).unsigned_abs() as u128)
                .checked_mul(ci)
                .and_then(|t| t.checked_mul(caps[j].unsigned_abs() as u128))
                .ok_or(Error::Overflow)?;
            total = total.checked_add(term).ok_or(Error::Overflow)?;
        }
    }
    if total > MAGNITUDE_LIMIT {
        return Err(Error::Overflow);
    }
    Ok(())
}

/// Raw pairing `a^T M b`; callers must have run [`check_magnitude`] with
/// caps dominating both vectors.
pub(crate) fn pairing_raw(cfg: &SurfaceConfiguration, a: &[i64], b: &[i64]) -> i128 {
    let n = cfg.n();
    let mut total: i128 = 0;
    for i in 0..n {
        if a[i] == 0 {
            continue;
        }
        let mut row: i128 = 0;
        for j in 0..n {
            row += (cfg.entry(i, j) as i128) * (b[j] as i128);
        }
        total += (a[i] as i128) * row;
    }
    total
}

/// Raw arithmetic genus `1 + (v^T M v + k.v)/2`; same magnitude contract.
pub(crate) fn pa_raw(cfg: &SurfaceConfiguration, v: &[i64]) -> i128 {
    let quad = pairing_raw(cfg, v, v);
    let mut kd: i128 = 0;
    for (i, &m) in v.iter().enumerate() {
        kd += (cfg.k()[i] as i128) * (m as i128);
    }
    debug_assert_eq!((quad + kd).rem_euclid(2), 0, "adjunction parity");
    1 + (quad + kd) / 2
}

fn to_i64(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

/// Intersection number of two divisors on the same configuration.
pub fn intersect(a: &Divisor, b: &Divisor) -> Result<i64> {
    a.same_config(b)?;
    let cfg = a.config();
    let caps: Vec<i64> = a
        .mult()
        .iter()
        .zip(b.mult())
        .map(|(x, y)| (*x).max(*y))
        .collect();
    check_magnitude(cfg, &caps)?;
    to_i64(pairing_raw(cfg, a.mult(), b.mult()))
}

/// Canonical degree `K.D`.
pub fn k_degree(d: &Divisor) -> Result<i64> {
    let cfg = d.config();
    let mut total: i128 = 0;
    for (i, &m) in d.mult().iter().enumerate() {
        let term = (cfg.k()[i] as i128)
            .checked_mul(m as i128)
            .ok_or(Error::Overflow)?;
        total = total.checked_add(term).ok_or(Error::Overflow)?;
    }
    to_i64(total)
}

/// Genus data of a divisor; `2*pa - 2 = k_degree + self_int` by construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenusReport {
    pub divisor: Divisor,
    pub self_int: i64,
    pub k_degree: i64,
    pub pa: i64,
}

/// Arithmetic genus by adjunction.
pub fn arithmetic_genus(d: &Divisor) -> Result<GenusReport> {
    let cfg = d.config();
    check_magnitude(cfg, d.mult())?;
    let self_int = to_i64(pairing_raw(cfg, d.mult(), d.mult()))?;
    let k_deg = k_degree(d)?;
    let pa = to_i64(pa_raw(cfg, d.mult()))?;
    Ok(GenusReport { divisor: d.clone(), self_int, k_degree: k_deg, pa })
}

/// Both sides of the genus additivity identity
/// `pa(d1+d2) = pa(d1) + pa(d2) - 1 + d1.d2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdditivityCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
}

/// Evaluate the additivity identity on a pair of divisors. The identity is a
/// consequence of bilinearity, so `equal` is always true on valid inputs;
/// it is exposed as a self-test primitive.
pub fn additivity_check(d1: &Divisor, d2: &Divisor) -> Result<AdditivityCheck> {
    d1.same_config(d2)?;
    let sum = d1.try_add(d2)?;
    let lhs = arithmetic_genus(&sum)?.pa;
    let pa1 = arithmetic_genus(d1)?.pa as i128;
    let pa2 = arithmetic_genus(d2)?.pa as i128;
    let cross = intersect(d1, d2)? as i128;
    let rhs = to_i64(pa1 + pa2 - 1 + cross)?;
    Ok(AdditivityCheck { lhs, rhs, equal: lhs == rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{RawConfiguration, SurfaceConfiguration};
    use crate::generators::{gen_chain, gen_cycle};
    use std::sync::Arc;

    fn disj2() -> Arc<SurfaceConfiguration> {
        Arc::new(
            SurfaceConfiguration::validate(RawConfiguration {
                name: "disj-2".into(),
                component_names: vec!["c0".into(), "c1".into()],
                matrix: vec![vec![-2, 0], vec![0, -2]],
                k: vec![0, 0],
                snc_faithful: true,
            })
            .unwrap(),
        )
    }

    #[test]
    fn pairing_examples() {
        let (a2, _) = gen_chain(2, -2, 0).unwrap();
        let d = |m: Vec<i64>| Divisor::new(a2.clone(), m).unwrap();
        assert_eq!(intersect(&d(vec![1, 0]), &d(vec![0, 1])).unwrap(), 1);

        let (i3, full) = gen_cycle(3).unwrap();
        assert_eq!(intersect(&full, &full).unwrap(), 0);
        let x = Divisor::new(i3.clone(), vec![2, 1, 0]).unwrap();
        let y = Divisor::new(i3, vec![0, 1, 3]).unwrap();
        assert_eq!(intersect(&x, &y).unwrap(), intersect(&y, &x).unwrap());
    }

    #[test]
    fn genus_examples() {
        let (a2, d_a2) = gen_chain(2, -2, 0).unwrap();
        let g = arithmetic_genus(&d_a2).unwrap();
        assert_eq!((g.self_int, g.k_degree, g.pa), (-2, 0, 0));
        assert_eq!(2 * g.pa - 2, g.k_degree + g.self_int);
        let _ = a2;

        let (_, d_i3) = gen_cycle(3).unwrap();
        let g = arithmetic_genus(&d_i3).unwrap();
        assert_eq!((g.self_int, g.k_degree, g.pa), (0, 0, 1));

        let cfg = disj2();
        let d = Divisor::new(cfg, vec![1, 1]).unwrap();
        assert_eq!(arithmetic_genus(&d).unwrap().pa, -1);
    }

    #[test]
    fn additivity_examples() {
        let (a2, _) = gen_chain(2, -2, 0).unwrap();
        let d = |m: Vec<i64>| Divisor::new(a2.clone(), m).unwrap();
        let check = additivity_check(&d(vec![1, 0]), &d(vec![0, 1])).unwrap();
        assert_eq!((check.lhs, check.rhs, check.equal), (0, 0, true));

        let (i3, _) = gen_cycle(3).unwrap();
        let e = |m: Vec<i64>| Divisor::new(i3.clone(), m).unwrap();
        let check = additivity_check(&e(vec![1, 1, 0]), &e(vec![0, 0, 1])).unwrap();
        assert_eq!((check.lhs, check.rhs, check.equal), (1, 1, true));

        let double = additivity_check(&d(vec![1, 1]), &d(vec![1, 1])).unwrap();
        assert!(double.equal);
    }

    #[test]
    fn mismatched_configurations_error() {
        let (a2, da) = gen_chain(2, -2, 0).unwrap();
        let _ = a2;
        let db = Divisor::new(disj2(), vec![1, 1]).unwrap();
        assert_eq!(intersect(&da, &db).unwrap_err(), Error::ConfigMismatch);
    }

    #[test]
    fn overflow_detected_not_wrapped() {
        let cfg = Arc::new(
            SurfaceConfiguration::validate(RawConfiguration {
                name: "big".into(),
                component_names: vec!["c0".into()],
                matrix: vec![vec![i64::MAX - 1]],
                k: vec![i64::MAX - 1],
                snc_faithful: false,
            })
            .unwrap(),
        );
        let d = Divisor::new(cfg, vec![i64::MAX]).unwrap();
        assert_eq!(arithmetic_genus(&d).unwrap_err(), Error::Overflow);
        assert_eq!(intersect(&d, &d).unwrap_err(), Error::Overflow);
    }
}
