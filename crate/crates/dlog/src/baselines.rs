//! Reference discrete-log solvers: exhaustive scan and baby-step giant-step.
//! They double as correctness oracles for the birthday attack and as
//! benchmark comparators.

use std::collections::HashMap;

use crate::arith::ceil_sqrt;
use crate::group::{CyclicGroup, GroupElement};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BaselineError {
    #[error("order {order} exceeds the {limit}-bit budget for this solver")]
    ScaleExceeded { order: u128, limit: u32 },
}

/// Result of a baseline solve. `exponent` is `None` when `y` lies outside
/// the generated subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DlogResult {
    pub exponent: Option<u128>,
    pub multiplications: u64,
    pub comparisons: u64,
}

/// Scans `g^0, g^1, ...` until `y` is hit; `None` after `order` steps.
/// Orders up to 2^24 only.
pub fn brute_force_dlog(group: &CyclicGroup, y: GroupElement) -> Result<DlogResult, BaselineError> {
    if group.order() > 1 << 24 {
        return Err(BaselineError::ScaleExceeded {
            order: group.order(),
            limit: 24,
        });
    }
    let mut multiplications = 0;
    let mut comparisons = 0;
    let mut acc = group.identity();
    for e in 0..group.order() {
        comparisons += 1;
        if acc == y {
            return Ok(DlogResult {
                exponent: Some(e),
                multiplications,
                comparisons,
            });
        }
        acc = group.mul(acc, group.generator());
        multiplications += 1;
    }
    Ok(DlogResult {
        exponent: None,
        multiplications,
        comparisons,
    })
}

/// Baby-step giant-step with `s = ceil(sqrt(order))`. The giant strides
/// `(g^s)^i` are tabled (keyed by the canonical residue) and the probes are
/// the baby values `y * g^j`, so `x = i*s - j` and no inverse element is
/// ever needed. Stays within `2 ceil(sqrt(order)) + ceil(log2 order)` group
/// multiplications on every call. Orders up to 2^48 only.
pub fn bsgs(group: &CyclicGroup, y: GroupElement) -> Result<DlogResult, BaselineError> {
    let order = group.order();
    if order > 1 << 48 {
        return Err(BaselineError::ScaleExceeded { order, limit: 48 });
    }
    let mut multiplications = 0u64;
    let mut comparisons = 0u64;
    if y == group.identity() {
        comparisons += 1;
        return Ok(DlogResult {
            exponent: Some(0),
            multiplications,
            comparisons,
        });
    }
    comparisons += 1;
    let s = ceil_sqrt(order).max(1);
    let giant_count = order.div_ceil(s);
    // g^s costs at most 2*ceil(log2 s) <= ceil(log2 order) multiplications.
    let (stride, cost) = group.pow_counted(group.generator(), s);
    multiplications += cost;
    let mut table: HashMap<u128, u128> = HashMap::with_capacity(giant_count as usize);
    let mut acc = stride;
    for i in 1..=giant_count {
        table.entry(acc.residue()).or_insert(i);
        if i < giant_count {
            acc = group.mul(acc, stride);
            multiplications += 1;
        }
    }
    let mut probe = y;
    for j in 0..s {
        comparisons += 1;
        if let Some(&i) = table.get(&probe.residue()) {
            let x = (i * s - j) % order;
            return Ok(DlogResult {
                exponent: Some(x),
                multiplications,
                comparisons,
            });
        }
        if j < s - 1 {
            probe = group.mul(probe, group.generator());
            multiplications += 1;
        }
    }
    Ok(DlogResult {
        exponent: None,
        multiplications,
        comparisons,
    })
}

/// The multiplication envelope asserted by the test suite:
/// `2 ceil(sqrt(order)) + ceil(log2 order)`.
pub fn bsgs_mult_envelope(order: u128) -> u64 {
    let ceil_log2 = if order <= 1 {
        0
    } else {
        (128 - (order - 1).leading_zeros()) as u128
    };
    (2 * ceil_sqrt(order) + ceil_log2) as u64
}
