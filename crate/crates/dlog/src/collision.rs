//! Randomized power tables, collision detection over the union table, and
//! the reduction of collisions to linear congruences in the unknown
//! exponents.

use std::collections::HashSet;
use std::io::{self, Write};

use crate::arith::gcd_u128;
use crate::group::{CyclicGroup, GroupElement, TargetKey};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CollisionError {
    #[error("table width {width} too large for order {order}")]
    WidthTooLarge { width: usize, order: u128 },
    #[error("exponent table has {expected} target rows, got {got} targets")]
    RowMismatch { expected: usize, got: usize },
    #[error("target {index} is not a member of the group")]
    NotMember { index: usize },
    #[error("bad target indices: {0}")]
    BadTargetIndices(String),
    #[error("collision references invalid slot ({owner}, {slot})")]
    InvalidSlot { owner: usize, slot: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// How row exponents are sampled from `[1, N-1]`.
// TODO: a selection scheme that shares multiplications across a row
// (addition-chain style) would cut table cost toward one multiplication per
// entry; no construction is known here, so rows cost ~2 log2(N) each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentMode {
    /// Any nonzero residue.
    #[default]
    NonZero,
    /// Only residues coprime to the order, guaranteeing invertible
    /// congruence coefficients.
    CoprimeToOrder,
}

/// The random distinct exponents `r_j^(i)`; row 0 belongs to the generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentTable {
    rows: Vec<Vec<u128>>,
    width: usize,
    seed: u64,
}

impl ExponentTable {
    pub fn rows(&self) -> &[Vec<u128>] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of target rows (excluding the generator row).
    pub fn target_count(&self) -> usize {
        self.rows.len() - 1
    }

    /// `r_slot^(owner)`, slots 1-based.
    pub fn exponent(&self, owner: usize, slot: usize) -> Result<u128, CollisionError> {
        self.rows
            .get(owner)
            .and_then(|row| row.get(slot.checked_sub(1)?))
            .copied()
            .ok_or(CollisionError::InvalidSlot { owner, slot })
    }

    /// Builds a table from explicit rows, checking distinctness and range.
    pub fn from_rows(rows: Vec<Vec<u128>>, order: u128) -> Result<Self, CollisionError> {
        assert!(!rows.is_empty());
        let width = rows[0].len();
        for row in &rows {
            if row.len() != width {
                return Err(CollisionError::RowMismatch {
                    expected: width,
                    got: row.len(),
                });
            }
            let mut seen = HashSet::new();
            for &r in row {
                if r == 0 || r >= order || !seen.insert(r) {
                    return Err(CollisionError::WidthTooLarge { width, order });
                }
            }
        }
        Ok(ExponentTable {
            rows,
            width,
            seed: 0,
        })
    }
}

/// Samples `m + 1` independent rows of `n` distinct exponents from
/// `[1, N-1]`; row 0 is the generator row. Deterministic for a given seed
/// (each row draws from its own RNG stream).
pub fn sample_exponents(
    order: u128,
    targets: usize,
    width: usize,
    seed: u64,
    mode: ExponentMode,
) -> Result<ExponentTable, CollisionError> {
    assert!(width >= 1, "width must be positive");
    if (width as u128) > order.saturating_sub(1) {
        return Err(CollisionError::WidthTooLarge { width, order });
    }
    let mut rows = Vec::with_capacity(targets + 1);
    for row_idx in 0..=targets {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(row_idx as u64);
        rows.push(sample_row(order, width, mode, &mut rng)?);
    }
    Ok(ExponentTable { rows, width, seed })
}

fn sample_row(
    order: u128,
    width: usize,
    mode: ExponentMode,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u128>, CollisionError> {
    let pool = order - 1;
    let admissible = |v: u128| match mode {
        ExponentMode::NonZero => true,
        ExponentMode::CoprimeToOrder => gcd_u128(v, order) == 1,
    };
    // Dense path when the pool is small relative to the request; rejection
    // sampling would thrash as the row fills up.
    if pool <= 1 << 22 && (pool < 4 * width as u128 || matches!(mode, ExponentMode::CoprimeToOrder))
    {
        let mut values: Vec<u128> = (1..order).filter(|&v| admissible(v)).collect();
        if values.len() < width {
            return Err(CollisionError::WidthTooLarge { width, order });
        }
        for i in 0..width {
            let j = rng.gen_range(i..values.len());
            values.swap(i, j);
        }
        values.truncate(width);
        return Ok(values);
    }
    let mut seen = HashSet::with_capacity(width);
    let mut row = Vec::with_capacity(width);
    let mut attempts_left: u64 = 64 * width as u64 + (1 << 20);
    while row.len() < width {
        attempts_left = attempts_left
            .checked_sub(1)
            .ok_or(CollisionError::WidthTooLarge { width, order })?;
        let v = rng.gen_range(1..order);
        if admissible(v) && seen.insert(v) {
            row.push(v);
        }
    }
    Ok(row)
}

/// One entry of the union table: which row produced it, which slot, and the
/// group element `y_owner^(r_slot)` (or `g^(r_slot)` for owner 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabeledElement {
    pub owner: usize,
    pub slot: usize,
    pub element: GroupElement,
}

/// The union table of all power sets, `(m+1) * n` entries in row-major
/// order.
#[derive(Debug, Clone)]
pub struct OmegaTable {
    pub entries: Vec<LabeledElement>,
    group: CyclicGroup,
    /// Group multiplications spent building the table; every entry is
    /// charged at least one.
    pub multiplications: u64,
}

impl OmegaTable {
    pub fn group(&self) -> &CyclicGroup {
        &self.group
    }

    pub fn from_entries(group: CyclicGroup, entries: Vec<LabeledElement>) -> Self {
        OmegaTable {
            entries,
            group,
            multiplications: 0,
        }
    }
}

/// Raises each target (and the generator, row 0) to its row of exponents.
/// Targets must be indexed `1..=m` in order and must be validated members.
pub fn build_omega(
    group: &CyclicGroup,
    targets: &[TargetKey],
    exponents: &ExponentTable,
) -> Result<OmegaTable, CollisionError> {
    let m = exponents.target_count();
    if targets.len() != m {
        return Err(CollisionError::RowMismatch {
            expected: m,
            got: targets.len(),
        });
    }
    for (pos, t) in targets.iter().enumerate() {
        if t.index != pos + 1 {
            return Err(CollisionError::BadTargetIndices(format!(
                "expected index {} at position {pos}, got {}",
                pos + 1,
                t.index
            )));
        }
        if !group.is_member(t.value) {
            return Err(CollisionError::NotMember { index: t.index });
        }
    }
    let mut entries = Vec::with_capacity((m + 1) * exponents.width());
    let mut multiplications = 0u64;
    for (owner, row) in exponents.rows().iter().enumerate() {
        let base = if owner == 0 {
            group.generator()
        } else {
            targets[owner - 1].value
        };
        for (j, &r) in row.iter().enumerate() {
            let (element, cost) = group.pow_counted(base, r);
            multiplications += cost.max(1);
            entries.push(LabeledElement {
                owner,
                slot: j + 1,
                element,
            });
        }
    }
    Ok(OmegaTable {
        entries,
        group: group.clone(),
        multiplications,
    })
}

/// An equal pair in the union table; `left` is the first occurrence in table
/// order, so `left.owner <= right.owner` (ties broken by slot).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Collision {
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub element: GroupElement,
}

/// Result of a collision scan, with the comparison count of the sort.
#[derive(Debug, Clone)]
pub struct CollisionScan {
    pub collisions: Vec<Collision>,
    pub comparisons: u64,
}

/// Sorts the table by canonical encoding and pairs every duplicate with the
/// first occurrence of its element. An element occurring `c` times emits
/// `c - 1` collisions, so the total is `T - distinct`, the collision count
/// `d` of the table. `O(T log T)` comparisons.
pub fn find_collisions(omega: &OmegaTable) -> CollisionScan {
    let keys: Vec<Vec<u8>> = omega
        .entries
        .iter()
        .map(|e| omega.group.encode(e.element))
        .collect();
    let mut order: Vec<usize> = (0..omega.entries.len()).collect();
    let mut comparisons = 0u64;
    order.sort_by(|&a, &b| {
        comparisons += 1;
        keys[a].cmp(&keys[b]).then(a.cmp(&b))
    });
    let mut collisions = Vec::new();
    let mut run_start = 0;
    for i in 1..=order.len() {
        if i == order.len() || keys[order[i]] != keys[order[run_start]] {
            let anchor = &omega.entries[order[run_start]];
            for &dup_idx in &order[run_start + 1..i] {
                let dup = &omega.entries[dup_idx];
                collisions.push(Collision {
                    left: (anchor.owner, anchor.slot),
                    right: (dup.owner, dup.slot),
                    element: anchor.element,
                });
            }
            run_start = i;
        }
    }
    CollisionScan {
        collisions,
        comparisons,
    }
}

/// A linear relation `sum coeff_i * x_i = constant (mod N)` induced by a
/// collision. Collision-derived rows have at most two nonzero coefficients;
/// intra-row relations (one unknown, zero constant) are flagged `weak`
/// because they pin the unknown only up to a divisor class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub coefficients: Vec<(usize, u128)>,
    pub constant: u128,
    pub provenance: Option<Collision>,
    pub weak: bool,
}

impl Congruence {
    /// Whether `assignment` (0-based, `assignment[i]` for unknown `i+1`)
    /// satisfies the relation mod `modulus`.
    pub fn satisfied_by(&self, assignment: &[u128], modulus: u128) -> bool {
        let lhs = self.coefficients.iter().fold(0u128, |acc, &(idx, coeff)| {
            (acc + crate::arith::mul_mod(coeff, assignment[idx - 1], modulus)) % modulus
        });
        lhs == self.constant % modulus
    }
}

/// Translates collisions into congruences mod `order`:
///
/// * target/target `(i, s) ~ (j, t)`, `i != j`: `r_s^(i) x_i - r_t^(j) x_j = 0`
/// * generator/target `(0, t) ~ (i, s)`: `r_s^(i) x_i = r_t^(0)`
/// * intra-row `(i, s) ~ (i, t)`, `i >= 1`: `(r_s^(i) - r_t^(i)) x_i = 0`, weak
/// * `(0, s) ~ (0, t)` cannot occur for a generator of exact order and
///   distinct exponents; seeing one means the group or table is broken.
///
/// Rows that reduce to `0 = 0` are discarded.
pub fn collisions_to_congruences(
    collisions: &[Collision],
    exponents: &ExponentTable,
    order: u128,
) -> Result<Vec<Congruence>, CollisionError> {
    let mut out = Vec::with_capacity(collisions.len());
    for col in collisions {
        let (lo, ls) = col.left;
        let (ro, rs) = col.right;
        let r_left = exponents.exponent(lo, ls)? % order;
        let r_right = exponents.exponent(ro, rs)? % order;
        let congruence = match (lo, ro) {
            (0, 0) => {
                return Err(CollisionError::Internal(format!(
                    "generator row self-collision at slots {ls}, {rs}"
                )));
            }
            (0, i) => Congruence {
                coefficients: vec![(i, r_right)],
                constant: r_left,
                provenance: Some(*col),
                weak: false,
            },
            (i, j) if i != j => Congruence {
                coefficients: vec![(i, r_left), (j, (order - r_right) % order)],
                constant: 0,
                provenance: Some(*col),
                weak: false,
            },
            (i, _) => {
                let diff = (order + r_left - r_right) % order;
                Congruence {
                    coefficients: vec![(i, diff)],
                    constant: 0,
                    provenance: Some(*col),
                    weak: true,
                }
            }
        };
        if congruence.constant == 0 && congruence.coefficients.iter().all(|&(_, c)| c == 0) {
            continue;
        }
        out.push(congruence);
    }
    Ok(out)
}

/// Debug dump of the union table as CSV `owner,slot,exponent,residue`,
/// sorted by canonical encoding.
pub fn dump_omega(
    omega: &OmegaTable,
    exponents: &ExponentTable,
    out: &mut dyn Write,
) -> io::Result<()> {
    let mut order: Vec<usize> = (0..omega.entries.len()).collect();
    order.sort_by_key(|&i| (omega.group.encode(omega.entries[i].element), i));
    writeln!(out, "owner,slot,exponent,residue")?;
    for i in order {
        let e = &omega.entries[i];
        let r = exponents
            .exponent(e.owner, e.slot)
            .map_err(io::Error::other)?;
        writeln!(out, "{},{},{},{}", e.owner, e.slot, r, e.element.residue())?;
    }
    Ok(())
}
