//! Computable forms of the collision-probability claims: the lower bound for
//! at-least-`k` collisions in the union table, its reduced-table-size
//! variant, the exact uniform-multiset collision-count model behind the
//! proof, and Monte Carlo estimation under iid sampling.
//!
//! The uniform-multiset model and iid sampling are different distributions;
//! everything here labels which one it computes, and the comparison surfaces
//! report values side by side instead of assuming one bounds the other.
//!
//! Bound arithmetic runs on [`BigFloat`] (256-bit mantissa): the exponential
//! factor underflows `f64` once `m` passes ~26. The exact model uses
//! big-integer rationals throughout.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{ceil_sqrt, ceil_sqrt_ratio};
use crate::bigfloat::{pi, BigFloat};

pub type BigRational = Ratio<BigInt>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProbabilityError {
    #[error("model violation: {0}")]
    ModelViolation(String),
    #[error("exact combinatorics limited to order <= 10^4, size <= 10^3 (got {order}, {size})")]
    ScaleExceeded { order: u64, size: u64 },
}

/// Inputs for the at-least-`k`-collisions bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundInput {
    /// Group order `N`.
    pub order: u128,
    /// Number of target keys `m`.
    pub targets: usize,
    /// Table width `n`.
    pub width: usize,
    /// Collision threshold `k`.
    pub threshold: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    Eq21,
    Eq22,
}

/// Evaluated bound. `bound` uses epsilon at its stated upper limit,
/// `bound_eps_zero` the epsilon-free variant; both are reported because the
/// direction of the epsilon term is the loose end of the derivation.
/// High-precision complements (`1 - bound`) are kept for comparisons that
/// f64 cannot resolve.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub formula: Formula,
    pub epsilon: f64,
    pub bound: f64,
    pub bound_eps_zero: f64,
    /// The Stirling-relaxed second chained form (reduced-size bound only).
    pub second_form: Option<f64>,
    pub second_form_eps_zero: Option<f64>,
    /// Variant keeping the full sum over `i < k` instead of the single
    /// `k`-th term (the derivation replaces the sum by its last term).
    pub full_sum_variant: Option<f64>,
    pub complement: BigFloat,
    pub complement_eps_zero: BigFloat,
}

/// `epsilon = 2 (T - k)^3 / (3 N^2)`, the stated upper limit.
pub fn epsilon_upper(order: u128, table_size: u128, threshold: u128) -> BigFloat {
    assert!(table_size > threshold);
    let diff = BigInt::from(table_size - threshold);
    let num = 2 * &diff * &diff * &diff;
    let n = BigInt::from(order);
    BigFloat::from_ratio(&num, &(3 * &n * &n))
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Complement of the main bound: `e^(-(m+1)^2 + eps) * (m+1)^(2k) / k!`.
pub fn eq21_complement(targets: usize, threshold: usize, eps: &BigFloat) -> BigFloat {
    let m1 = (targets + 1) as i64;
    let exponent = &BigFloat::from_i64(-m1 * m1) + eps;
    let power = BigFloat::from_bigint(BigInt::from(m1).pow(2 * threshold as u32));
    let kfact = BigFloat::from_bigint(BigInt::from(factorial(threshold as u64)));
    &(&exponent.exp() * &power) / &kfact
}

/// Complement variant with the full sum `sum_{i<k} (m+1)^(2i) / i!`.
pub fn eq21_full_sum_complement(targets: usize, threshold: usize, eps: &BigFloat) -> BigFloat {
    let m1 = BigInt::from((targets + 1) as u64);
    let mut sum_num = BigInt::zero();
    let kfact = BigInt::from(factorial(threshold.saturating_sub(1) as u64));
    // sum_{i<k} (m+1)^{2i}/i! = (sum_{i<k} (m+1)^{2i} * (k-1)!/i!) / (k-1)!
    for i in 0..threshold {
        let mut term = m1.pow(2 * i as u32);
        for j in i + 1..threshold {
            term *= j as u64;
        }
        sum_num += term;
    }
    let m1f = (targets + 1) as i64;
    let exponent = &BigFloat::from_i64(-m1f * m1f) + eps;
    let sum = BigFloat::from_ratio(&sum_num, &kfact);
    &exponent.exp() * &sum
}

/// Both complements of the reduced-size bound chain: the tighter first form
/// `e^(-2(m+1)+eps) (2m+2)^m / m!` and the Stirling relaxation
/// `e^(-1+eps)/sqrt(2 pi m) * (2/e)^m`.
pub fn eq22_complements(targets: usize, eps: &BigFloat) -> (BigFloat, BigFloat) {
    let m = targets as i64;
    let first = {
        let exponent = &BigFloat::from_i64(-2 * (m + 1)) + eps;
        let power = BigFloat::from_bigint(BigInt::from(2 * m + 2).pow(m as u32));
        let mfact = BigFloat::from_bigint(BigInt::from(factorial(m as u64)));
        &(&exponent.exp() * &power) / &mfact
    };
    let second = {
        // e^(-1+eps) (2/e)^m / sqrt(2 pi m) = e^(eps - 1 - m) 2^m / sqrt(2 pi m)
        let exponent = &BigFloat::from_i64(-1 - m) + eps;
        let two_m = BigFloat::from_bigint(BigInt::one() << (m as usize));
        let root = (&BigFloat::from_i64(2 * m) * pi()).sqrt();
        &(&exponent.exp() * &two_m) / &root
    };
    (first, second)
}

/// The main lower bound on the probability of at least `k` collisions in the
/// union table, for full-strategy widths (`n ~ sqrt(N) + 1`, so the squared
/// `(m+1)` exponent encodes `n^2 ~ N`).
pub fn prop1_bound(input: &BoundInput) -> Result<BoundReport, ProbabilityError> {
    let BoundInput {
        order,
        targets,
        width,
        threshold,
    } = *input;
    if targets < 1 {
        return Err(ProbabilityError::ModelViolation(
            "need at least one target".into(),
        ));
    }
    if threshold > targets {
        return Err(ProbabilityError::ModelViolation(format!(
            "threshold {threshold} exceeds target count {targets}"
        )));
    }
    let table_size = (targets as u128 + 1) * width as u128;
    if table_size > order {
        return Err(ProbabilityError::ModelViolation(format!(
            "table size {table_size} exceeds order {order}"
        )));
    }
    let eps = epsilon_upper(order, table_size, threshold as u128);
    let zero = BigFloat::zero();
    let complement = eq21_complement(targets, threshold, &eps);
    let complement_eps_zero = eq21_complement(targets, threshold, &zero);
    let full_sum = eq21_full_sum_complement(targets, threshold, &eps);
    let one = BigFloat::one();
    Ok(BoundReport {
        formula: Formula::Eq21,
        epsilon: eps.to_f64(),
        bound: (&one - &complement).to_f64(),
        bound_eps_zero: (&one - &complement_eps_zero).to_f64(),
        second_form: None,
        second_form_eps_zero: None,
        full_sum_variant: Some((&one - &full_sum).to_f64()),
        complement,
        complement_eps_zero,
    })
}

/// Reduced-strategy width `n = ceil(sqrt(2N/(m+1))) + 1`.
pub fn reduced_width(order: u128, targets: usize) -> usize {
    (ceil_sqrt_ratio(2 * order, targets as u128 + 1) + 1) as usize
}

/// Full-strategy width `n = ceil(sqrt(N)) + 1`.
pub fn full_width(order: u128) -> usize {
    (ceil_sqrt(order) + 1) as usize
}

/// The reduced-table-size bound with `k = m`, returning both chained forms.
pub fn eq22_bound(targets: usize, order: u128) -> Result<BoundReport, ProbabilityError> {
    if targets < 1 {
        return Err(ProbabilityError::ModelViolation(
            "need at least one target".into(),
        ));
    }
    let width = reduced_width(order, targets);
    let table_size = (targets as u128 + 1) * width as u128;
    if table_size > order {
        return Err(ProbabilityError::ModelViolation(format!(
            "reduced table size {table_size} exceeds order {order}"
        )));
    }
    let eps = epsilon_upper(order, table_size, targets as u128);
    let zero = BigFloat::zero();
    let (first, second) = eq22_complements(targets, &eps);
    let (first0, second0) = eq22_complements(targets, &zero);
    let one = BigFloat::one();
    Ok(BoundReport {
        formula: Formula::Eq22,
        epsilon: eps.to_f64(),
        bound: (&one - &first).to_f64(),
        bound_eps_zero: (&one - &first0).to_f64(),
        second_form: Some((&one - &second).to_f64()),
        second_form_eps_zero: Some((&one - &second0).to_f64()),
        full_sum_variant: None,
        complement: first,
        complement_eps_zero: first0,
    })
}

/// Exact uniform-multiset collision counts: `lambdas[i]` is the number of
/// size-`T` multisets over `N` symbols with exactly `i` collisions,
/// `C(N, T-i) * C(T-1, i)`, and `total = C(N+T-1, T)` is the multiset count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionDistribution {
    pub order: u64,
    pub size: u64,
    pub lambdas: Vec<BigUint>,
    pub total: BigUint,
}

impl CollisionDistribution {
    /// Model probability mass of exactly `i` collisions.
    pub fn mass(&self, i: usize) -> BigRational {
        BigRational::new(self.lambdas[i].clone().into(), self.total.clone().into())
    }
}

pub fn exact_collision_counts(
    order: u64,
    size: u64,
) -> Result<CollisionDistribution, ProbabilityError> {
    if order == 0 || size == 0 || order > 10_000 || size > 1_000 {
        return Err(ProbabilityError::ScaleExceeded { order, size });
    }
    let lambdas: Vec<BigUint> = (0..size)
        .map(|i| binomial(order, size - i) * binomial(size - 1, i))
        .collect();
    let total = binomial(order + size - 1, size);
    Ok(CollisionDistribution {
        order,
        size,
        lambdas,
        total,
    })
}

/// The proof's uniform-multiset probability of at least `k` collisions:
/// `1 - sum_{i<k} lambda_i / C(N+T-1, T)`, exact.
pub fn multiset_model_pk(order: u64, size: u64, k: u64) -> Result<BigRational, ProbabilityError> {
    let dist = exact_collision_counts(order, size)?;
    let mut below = BigUint::zero();
    for i in 0..k.min(size) {
        below += &dist.lambdas[i as usize];
    }
    Ok(BigRational::one() - BigRational::new(below.into(), dist.total.into()))
}

/// Monte Carlo estimate under iid uniform sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub hits: u64,
    pub trials: u64,
}

/// Draws `size` iid uniform values in `[1, order]` per trial and estimates
/// `P(collisions >= k)` with its binomial standard error. Each trial uses
/// its own RNG stream off the seed, so the result is independent of any
/// execution order. Requires `trials >= 100`.
pub fn monte_carlo_collision_prob(
    order: u128,
    size: usize,
    k: usize,
    trials: u64,
    seed: u64,
) -> McEstimate {
    assert!(trials >= 100, "at least 100 trials required");
    assert!(order >= 1 && size >= 1);
    let mut hits = 0u64;
    let mut draws: Vec<u128> = Vec::with_capacity(size);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        draws.clear();
        for _ in 0..size {
            draws.push(rng.gen_range(1..=order));
        }
        draws.sort_unstable();
        let distinct = 1 + draws.windows(2).filter(|w| w[0] != w[1]).count();
        if size - distinct >= k {
            hits += 1;
        }
    }
    let estimate = hits as f64 / trials as f64;
    let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    McEstimate {
        estimate,
        std_error,
        hits,
        trials,
    }
}
