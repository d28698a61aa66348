//! Mixed-radix counters over multiplicity boxes and the induced total order.
//!
//! Every enumeration in this crate walks a box `0 <= v[i] <= caps[i]` in
//! counting order: component 0 is the fastest-varying digit. The order on
//! vectors induced by that counter compares the highest index first, and all
//! tie-breaks ("smallest" witnesses, canonical decomposition parts) use it.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Number of lattice points in the box `0..=caps[i]`, i.e. `prod(caps[i]+1)`.
pub fn box_size(caps: &[i64]) -> Result<u128> {
    let mut total: u128 = 1;
    for &c in caps {
        debug_assert!(c >= 0);
        total = total
            .checked_mul(c as u128 + 1)
            .ok_or(Error::Overflow)?;
    }
    Ok(total)
}

/// Compare two vectors in counter order (highest index most significant).
pub fn counter_cmp(a: &[i64], b: &[i64]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Mixed-radix counter over `0..=caps[i]` per digit, component 0 fastest.
///
/// Freshly constructed it sits at the zero vector; [`Odometer::advance`]
/// steps to the next vector, so a plain advance loop visits every non-zero
/// vector of the box exactly once, in counting order.
#[derive(Debug, Clone)]
pub struct Odometer {
    caps: Vec<i64>,
    cur: Vec<i64>,
}

impl Odometer {
    pub fn new(caps: Vec<i64>) -> Self {
        let cur = vec![0; caps.len()];
        Odometer { caps, cur }
    }

    pub fn current(&self) -> &[i64] {
        &self.cur
    }

    /// Step to the next vector; `false` once the box is exhausted.
    pub fn advance(&mut self) -> bool {
        for i in 0..self.cur.len() {
            if self.cur[i] < self.caps[i] {
                self.cur[i] += 1;
                for slot in &mut self.cur[..i] {
                    *slot = 0;
                }
                return true;
            }
        }
        false
    }
}
