//! Exact linear algebra over `Z_N` for composite `N`: extended gcd, single
//! linear congruences, desk-scale integer factorization, and system solving
//! by prime-power decomposition plus CRT recombination.
//!
//! Collision coefficients are arbitrary residues, so non-invertible pivots
//! mod `q^e` are the common case, not the exception. Elimination therefore
//! picks pivots of minimal q-adic valuation and the solver enumerates the
//! (bounded) solution set per prime power instead of assuming independence.

use crate::arith::{gcd_u128, mul_mod, pow_mod};
use crate::collision::Congruence;
use thiserror::Error;

/// Solution-enumeration cap, per prime power and globally.
pub const ENUMERATION_CAP: u128 = 1 << 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModLinAlgError {
    #[error("ext_gcd(0, 0) is undefined")]
    BothZero,
    #[error("factorization budget exceeded for {0}")]
    Timeout(u128),
    #[error("{0} exceeds the supported scale")]
    ScaleExceeded(u128),
    #[error("bad factorization: {0}")]
    BadFactorization(String),
    #[error("factorization product {product} does not match modulus {modulus}")]
    ModulusMismatch { product: u128, modulus: u128 },
    #[error("congruence references unknown {index}, system has {count}")]
    UnknownOutOfRange { index: usize, count: usize },
}

/// Extended Euclid: returns `(g, u, v)` with `g = gcd(a, b) > 0` and
/// `a*u + b*v = g`.
pub fn ext_gcd(a: i128, b: i128) -> Result<(i128, i128, i128), ModLinAlgError> {
    if a == 0 && b == 0 {
        return Err(ModLinAlgError::BothZero);
    }
    let (mut old_r, mut r) = (a, b);
    let (mut old_u, mut u) = (1i128, 0i128);
    let (mut old_v, mut v) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_u, u) = (u, old_u - q * u);
        (old_v, v) = (v, old_v - q * v);
    }
    if old_r < 0 {
        (old_r, old_u, old_v) = (-old_r, -old_u, -old_v);
    }
    Ok((old_r, old_u, old_v))
}

/// Inverse of `a` mod `m`, when `gcd(a, m) = 1`.
pub fn inverse_mod(a: u128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    let (g, u, _) = ext_gcd((a % m) as i128, m as i128).ok()?;
    if g != 1 {
        return None;
    }
    Some(u.rem_euclid(m as i128) as u128)
}

/// The full solution set of `a*x = b (mod n)`: `{base + t*step : 0 <= t < count}`
/// with `base` the smallest solution and `step = n / gcd(a, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearSolution {
    pub base: u128,
    pub step: u128,
    pub count: u128,
}

impl LinearSolution {
    pub fn iter(&self) -> impl Iterator<Item = u128> + '_ {
        (0..self.count).map(move |t| self.base + t * self.step)
    }
}

/// Solves `a*x = b (mod n)`; `None` when `gcd(a, n)` does not divide `b`.
pub fn solve_linear_congruence(a: u128, b: u128, n: u128) -> Option<LinearSolution> {
    assert!(n >= 1);
    if n == 1 {
        return Some(LinearSolution {
            base: 0,
            step: 1,
            count: 1,
        });
    }
    let a = a % n;
    let b = b % n;
    if a == 0 {
        return if b == 0 {
            Some(LinearSolution {
                base: 0,
                step: 1,
                count: n,
            })
        } else {
            None
        };
    }
    let g = gcd_u128(a, n);
    if !b.is_multiple_of(g) {
        return None;
    }
    let step = n / g;
    let inv = inverse_mod(a / g, step).expect("a/g coprime to n/g");
    let base = mul_mod(b / g, inv, step);
    Some(LinearSolution {
        base,
        step,
        count: g,
    })
}

/// Chinese-remainder combination of residues mod pairwise-coprime moduli.
/// Returns the unique residue mod the product.
pub fn crt_combine(parts: &[(u128, u128)]) -> Option<(u128, u128)> {
    let mut acc = *parts.first()?;
    for &(r2, m2) in &parts[1..] {
        let (r1, m1) = acc;
        let inv = inverse_mod(m1 % m2, m2)?;
        let diff = (r2 + m2 - r1 % m2) % m2;
        let t = mul_mod(diff, inv, m2);
        acc = (r1 + m1 * t, m1 * m2);
    }
    Some(acc)
}

// ---------------------------------------------------------------------------
// Primality and factorization
// ---------------------------------------------------------------------------

const SMALL_PRIMES: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Primality test: trial division below 2^20, deterministic Miller-Rabin
/// below 2^64, and Miller-Rabin with fixed pseudorandom bases above that
/// (probabilistic but deterministic in its verdict).
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 1 << 20 {
        let mut d = 41u128;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 2;
        }
        return true;
    }
    if n < 1 << 64 {
        // This witness set is exact for all n < 2^64.
        return SMALL_PRIMES.iter().all(|&a| miller_rabin_round(n, a));
    }
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x004d_5250_5249_4d45);
    miller_rabin_round(n, 2) && (0..40).all(|_| miller_rabin_round(n, rng.gen_range(2..n - 1)))
}

fn miller_rabin_round(n: u128, a: u128) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// A complete prime factorization, sorted by prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    /// Validates externally supplied `(prime, exponent)` parts.
    pub fn from_parts(mut parts: Vec<(u128, u32)>) -> Result<Self, ModLinAlgError> {
        parts.sort_unstable();
        for window in parts.windows(2) {
            if window[0].0 == window[1].0 {
                return Err(ModLinAlgError::BadFactorization(format!(
                    "duplicate prime {}",
                    window[0].0
                )));
            }
        }
        for &(q, e) in &parts {
            if e == 0 {
                return Err(ModLinAlgError::BadFactorization(format!(
                    "zero exponent on {q}"
                )));
            }
            if !is_prime(q) {
                return Err(ModLinAlgError::BadFactorization(format!(
                    "{q} is not prime"
                )));
            }
        }
        Ok(Factorization { factors: parts })
    }

    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &(q, e)| acc * q.pow(e))
    }

    /// The prime-power components `q^e`.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u128, u32, u128)> + '_ {
        self.factors.iter().map(|&(q, e)| (q, e, q.pow(e)))
    }
}

/// Complete factorization by trial division (to 10^6) followed by Brent's
/// variant of Pollard rho, with a default iteration budget that desk-scale
/// inputs never approach. Inputs must satisfy `2 <= n < 2^64`.
pub fn factorize(n: u128) -> Result<Factorization, ModLinAlgError> {
    factorize_with_budget(n, 1 << 26)
}

pub fn factorize_with_budget(n: u128, budget: u64) -> Result<Factorization, ModLinAlgError> {
    if !(2..1 << 64).contains(&n) {
        return Err(ModLinAlgError::ScaleExceeded(n));
    }
    let mut remaining = n as u64;
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let push = |q: u64, factors: &mut Vec<(u128, u32)>| match factors
        .iter_mut()
        .find(|(p, _)| *p == q as u128)
    {
        Some((_, e)) => *e += 1,
        None => factors.push((q as u128, 1)),
    };
    for d in std::iter::once(2).chain((3..=1_000_000u64).step_by(2)) {
        if d.saturating_mul(d) > remaining {
            break;
        }
        while remaining.is_multiple_of(d) {
            remaining /= d;
            push(d, &mut factors);
        }
    }
    if remaining > 1 {
        if is_prime(remaining as u128) {
            push(remaining, &mut factors);
        } else {
            let mut budget = budget;
            let mut stack = vec![remaining];
            while let Some(v) = stack.pop() {
                if is_prime(v as u128) {
                    push(v, &mut factors);
                    continue;
                }
                let d = pollard_brent(v, &mut budget).ok_or(ModLinAlgError::Timeout(n))?;
                stack.push(d);
                stack.push(v / d);
            }
        }
    }
    factors.sort_unstable();
    Ok(Factorization { factors })
}

/// One non-trivial factor of composite odd `n` (deterministic parameter
/// schedule; decrements `budget` per iteration).
fn pollard_brent(n: u64, budget: &mut u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let n128 = n as u128;
    for c in 1..64u64 {
        let f = |x: u64| ((mul_mod(x as u128, x as u128, n128) + c as u128) % n128) as u64;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                let steps = 128.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    let diff = x.abs_diff(y);
                    if diff != 0 {
                        q = mul_mod(q as u128, diff as u128, n128) as u64;
                    }
                }
                *budget = budget.checked_sub(steps)?;
                g = gcd_u128(q as u128, n128) as u64;
                k += steps;
            }
            r *= 2;
        }
        if g == n {
            // Backtrack one step at a time.
            g = 1;
            let mut z = ys;
            while g == 1 {
                z = f(z);
                let diff = x.abs_diff(z);
                if diff == 0 {
                    break;
                }
                g = gcd_u128(diff as u128, n128) as u64;
                *budget = budget.checked_sub(1)?;
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Congruence systems over Z_N
// ---------------------------------------------------------------------------

/// A system of linear congruences in unknowns `x_1..x_m` over `Z_N`.
#[derive(Debug, Clone)]
pub struct CongruenceSystem {
    unknown_count: usize,
    modulus: u128,
    rows: Vec<Congruence>,
}

impl CongruenceSystem {
    pub fn new(unknown_count: usize, modulus: u128) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        CongruenceSystem {
            unknown_count,
            modulus,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Congruence) -> Result<(), ModLinAlgError> {
        for &(idx, _) in &row.coefficients {
            if idx == 0 || idx > self.unknown_count {
                return Err(ModLinAlgError::UnknownOutOfRange {
                    index: idx,
                    count: self.unknown_count,
                });
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn unknown_count(&self) -> usize {
        self.unknown_count
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn rows(&self) -> &[Congruence] {
        &self.rows
    }

    /// Dense `[coeff_1 .. coeff_m | constant]` rows reduced mod `m`.
    fn dense_rows(&self, modulus: u128) -> Vec<Vec<u128>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0u128; self.unknown_count + 1];
                for &(idx, coeff) in &row.coefficients {
                    dense[idx - 1] = (dense[idx - 1] + coeff) % modulus;
                }
                dense[self.unknown_count] = row.constant % modulus;
                dense
            })
            .collect()
    }
}

/// Solution description for a [`CongruenceSystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionSet {
    /// Exactly one vector satisfies the system.
    Unique(Vec<u128>),
    /// The complete (duplicate-free) solution list; at most [`ENUMERATION_CAP`].
    Enumerated(Vec<Vec<u128>>),
    /// More than the cap; `count_bound` is an upper bound on the solution
    /// count (exact when no prime-power component had dead branches).
    TooMany {
        count_bound: u128,
    },
    Unsolvable,
}

impl SolutionSet {
    pub fn vectors(&self) -> &[Vec<u128>] {
        match self {
            SolutionSet::Unique(v) => std::slice::from_ref(v),
            SolutionSet::Enumerated(vs) => vs,
            _ => &[],
        }
    }
}

/// q-adic valuation of `x` in `Z_{q^e}`; `e` for `x = 0`.
fn valuation(mut x: u128, q: u128, e: u32) -> u32 {
    if x == 0 {
        return e;
    }
    let mut v = 0;
    while x.is_multiple_of(q) {
        x /= q;
        v += 1;
    }
    v.min(e)
}

struct Echelon {
    /// `(column, pivot valuation, row index)` in elimination order.
    pivots: Vec<(usize, u32, usize)>,
    rows: Vec<Vec<u128>>,
    inconsistent: bool,
}

/// Row echelon over `Z_{q^e}` with minimal-valuation pivoting. Pivot rows are
/// normalized so the pivot entry is exactly `q^v`, and all other rows are
/// fully reduced in pivot columns.
fn echelon_prime_power(mut rows: Vec<Vec<u128>>, m: usize, q: u128, e: u32) -> Echelon {
    let modulus = q.pow(e);
    rows.retain(|row| row.iter().any(|&c| c != 0));
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..m {
        let best = (rank..rows.len())
            .filter(|&i| rows[i][col] != 0)
            .min_by_key(|&i| valuation(rows[i][col], q, e));
        let Some(best) = best else { continue };
        rows.swap(rank, best);
        let v = valuation(rows[rank][col], q, e);
        let unit = rows[rank][col] / q.pow(v);
        let inv = inverse_mod(unit, modulus).expect("unit part is invertible");
        for entry in rows[rank].iter_mut() {
            *entry = mul_mod(*entry, inv, modulus);
        }
        debug_assert_eq!(rows[rank][col], q.pow(v));
        for i in 0..rows.len() {
            if i == rank || rows[i][col] == 0 {
                continue;
            }
            // Rows above an earlier pivot can carry a lower valuation here;
            // those entries cannot be cleared by multiples of q^v and are
            // harmless to back-substitution (they sit right of that row's
            // own pivot).
            if i < rank && valuation(rows[i][col], q, e) < v {
                continue;
            }
            let factor = rows[i][col] / q.pow(v);
            let pivot_row = rows[rank].clone();
            for (entry, &p) in rows[i].iter_mut().zip(&pivot_row) {
                let sub = mul_mod(factor, p, modulus);
                *entry = (*entry + modulus - sub) % modulus;
            }
            debug_assert_eq!(rows[i][col], 0);
        }
        pivots.push((col, v, rank));
        rank += 1;
    }
    let inconsistent = rows[rank..].iter().any(|row| row[m] != 0);
    rows.truncate(rank);
    Echelon {
        pivots,
        rows,
        inconsistent,
    }
}

enum PrimePowerSolutions {
    Inconsistent,
    /// All solution vectors mod `q^e`.
    All(Vec<Vec<u128>>),
    /// More than the cap would be produced; the bound counts pivot
    /// multiplicities and free dimensions.
    OverCap(u128),
}

fn solve_prime_power(system: &CongruenceSystem, q: u128, e: u32, cap: u128) -> PrimePowerSolutions {
    let m = system.unknown_count;
    let modulus = q.pow(e);
    let ech = echelon_prime_power(system.dense_rows(modulus), m, q, e);
    if ech.inconsistent {
        return PrimePowerSolutions::Inconsistent;
    }
    let pivot_for_col: Vec<Option<(u32, usize)>> = {
        let mut v = vec![None; m];
        for &(col, val, row) in &ech.pivots {
            v[col] = Some((val, row));
        }
        v
    };
    // Branch-count bound: q^v choices per pivot, q^e per free unknown.
    let mut bound: u128 = 1;
    for pivot in &pivot_for_col {
        let mult = match pivot {
            Some((val, _)) => q.pow(*val),
            None => modulus,
        };
        bound = bound.saturating_mul(mult);
        if bound > cap {
            return PrimePowerSolutions::OverCap(bound);
        }
    }
    // Back-substitution from the last unknown, branching over congruence
    // solution classes; dead branches occur when a pivot's rhs misses the
    // required valuation.
    let mut enumeration = Enumeration {
        m,
        modulus,
        q,
        pivot_for_col: &pivot_for_col,
        rows: &ech.rows,
        assignment: vec![0u128; m],
        sols: Vec::new(),
    };
    enumeration.recurse(m as isize - 1);
    PrimePowerSolutions::All(enumeration.sols)
}

struct Enumeration<'a> {
    m: usize,
    modulus: u128,
    q: u128,
    pivot_for_col: &'a [Option<(u32, usize)>],
    rows: &'a [Vec<u128>],
    assignment: Vec<u128>,
    sols: Vec<Vec<u128>>,
}

impl Enumeration<'_> {
    fn recurse(&mut self, col: isize) {
        if col < 0 {
            self.sols.push(self.assignment.clone());
            return;
        }
        let c = col as usize;
        match self.pivot_for_col[c] {
            None => {
                for x in 0..self.modulus {
                    self.assignment[c] = x;
                    self.recurse(col - 1);
                }
            }
            Some((val, row_idx)) => {
                let row = &self.rows[row_idx];
                let mut rhs = row[self.m];
                for (&coeff, &x) in row[c + 1..self.m].iter().zip(&self.assignment[c + 1..]) {
                    let sub = mul_mod(coeff, x, self.modulus);
                    rhs = (rhs + self.modulus - sub) % self.modulus;
                }
                let Some(class) = solve_linear_congruence(self.q.pow(val), rhs, self.modulus)
                else {
                    return;
                };
                for x in class.iter() {
                    self.assignment[c] = x;
                    self.recurse(col - 1);
                }
            }
        }
    }
}

/// Solves the system independently mod each prime power of `factorization`
/// and recombines by CRT. `Unique`/`Enumerated` list every solution exactly;
/// exceeding [`ENUMERATION_CAP`] (per prime power or globally) yields
/// `TooMany` rather than a truncated list.
pub fn solve_system_mod(
    system: &CongruenceSystem,
    factorization: &Factorization,
) -> Result<SolutionSet, ModLinAlgError> {
    if factorization.product() != system.modulus {
        return Err(ModLinAlgError::ModulusMismatch {
            product: factorization.product(),
            modulus: system.modulus,
        });
    }
    let mut per_pp: Vec<(u128, Vec<Vec<u128>>)> = Vec::new();
    let mut total: u128 = 1;
    let mut over_cap = false;
    for (q, e, pe) in factorization.prime_powers() {
        match solve_prime_power(system, q, e, ENUMERATION_CAP) {
            PrimePowerSolutions::Inconsistent => return Ok(SolutionSet::Unsolvable),
            PrimePowerSolutions::OverCap(bound) => {
                over_cap = true;
                total = total.saturating_mul(bound);
            }
            PrimePowerSolutions::All(sols) => {
                if sols.is_empty() {
                    return Ok(SolutionSet::Unsolvable);
                }
                total = total.saturating_mul(sols.len() as u128);
                per_pp.push((pe, sols));
            }
        }
    }
    if over_cap || total > ENUMERATION_CAP {
        return Ok(SolutionSet::TooMany { count_bound: total });
    }
    // CRT across prime powers, coordinate by coordinate.
    let m = system.unknown_count;
    let mut combined: Vec<Vec<u128>> = vec![vec![0u128; m]];
    let mut modulus_so_far = 1u128;
    for (pe, sols) in &per_pp {
        let mut next = Vec::with_capacity(combined.len() * sols.len());
        for base in &combined {
            for sol in sols {
                let mut merged = vec![0u128; m];
                for i in 0..m {
                    let (value, _) = crt_combine(&[(base[i], modulus_so_far), (sol[i], *pe)])
                        .expect("prime powers are coprime");
                    merged[i] = value;
                }
                next.push(merged);
            }
        }
        combined = next;
        modulus_so_far *= pe;
    }
    debug_assert_eq!(combined.len() as u128, total);
    combined.sort_unstable();
    // every returned vector must satisfy every input row by substitution
    debug_assert!(combined.iter().all(|v| {
        system
            .rows
            .iter()
            .all(|row| row.satisfied_by(v, system.modulus))
    }));
    if combined.len() == 1 {
        Ok(SolutionSet::Unique(combined.pop().unwrap()))
    } else {
        Ok(SolutionSet::Enumerated(combined))
    }
}

/// Per-prime-power rank summary. `free_unknowns` counts unknowns without a
/// unit (valuation-zero) pivot; it is zero in every component exactly when
/// the system pins all unknowns uniquely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerRank {
    pub prime: u128,
    pub exponent: u32,
    pub pivots: usize,
    pub unit_pivots: usize,
    pub free_unknowns: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub per_prime_power: Vec<PrimePowerRank>,
}

impl RankReport {
    pub fn fully_determined(&self) -> bool {
        self.per_prime_power.iter().all(|r| r.free_unknowns == 0)
    }
}

pub fn rank_deficiency(
    system: &CongruenceSystem,
    factorization: &Factorization,
) -> Result<RankReport, ModLinAlgError> {
    if factorization.product() != system.modulus {
        return Err(ModLinAlgError::ModulusMismatch {
            product: factorization.product(),
            modulus: system.modulus,
        });
    }
    let m = system.unknown_count;
    let per = factorization
        .prime_powers()
        .map(|(q, e, pe)| {
            let ech = echelon_prime_power(system.dense_rows(pe), m, q, e);
            let unit_pivots = ech.pivots.iter().filter(|&&(_, v, _)| v == 0).count();
            PrimePowerRank {
                prime: q,
                exponent: e,
                pivots: ech.pivots.len(),
                unit_pivots,
                free_unknowns: m - unit_pivots,
            }
        })
        .collect();
    Ok(RankReport {
        per_prime_power: per,
    })
}

/// Incremental rank bookkeeping used by the attack loop and the simulation
/// harness: re-eliminates the accumulated rows per prime power and reports
/// whether a new row increased the unit-pivot count anywhere.
pub struct RankTracker {
    system: CongruenceSystem,
    factorization: Factorization,
    unit_pivots: Vec<usize>,
}

impl RankTracker {
    pub fn new(unknown_count: usize, modulus: u128, factorization: &Factorization) -> Self {
        let pps = factorization.factors().len();
        RankTracker {
            system: CongruenceSystem::new(unknown_count, modulus),
            factorization: factorization.clone(),
            unit_pivots: vec![0; pps],
        }
    }

    /// Adds a row; true when it is rank-contributing (reduces the free
    /// dimension of at least one prime-power component).
    pub fn add_row(&mut self, row: Congruence) -> Result<bool, ModLinAlgError> {
        self.system.push(row)?;
        let report = rank_deficiency(&self.system, &self.factorization)?;
        let mut improved = false;
        for (i, pp) in report.per_prime_power.iter().enumerate() {
            if pp.unit_pivots > self.unit_pivots[i] {
                improved = true;
            }
            self.unit_pivots[i] = self.unit_pivots[i].max(pp.unit_pivots);
        }
        Ok(improved)
    }

    pub fn unit_pivots(&self) -> &[usize] {
        &self.unit_pivots
    }

    pub fn fully_determined(&self) -> bool {
        self.unit_pivots
            .iter()
            .all(|&u| u == self.system.unknown_count())
    }
}
