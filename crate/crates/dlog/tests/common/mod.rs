//! Shared helpers and independent oracles for the integration suites. The
//! oracle implementations deliberately take different algebraic routes from
//! the crate code they check.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::Rng;

pub type BigRational = Ratio<BigInt>;

/// Binomial coefficients via the Pascal recurrence (the crate uses the
/// multiplicative formula).
pub fn binomial_pascal(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut row: Vec<BigUint> = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::one()];
        for i in 1..row.len() {
            next.push(&row[i - 1] + &row[i]);
        }
        next.push(BigUint::one());
        row = next;
    }
    row[k as usize].clone()
}

/// Collision-count distribution over all size-`size` multisets of `order`
/// symbols, computed by summing over integer partitions of `size`: a
/// partition with `d` parts and part-size multiplicities `m_s` accounts for
/// `C(order, d) * d! / prod m_s!` multisets, all with `size - d` collisions.
pub fn partition_collision_counts(order: u64, size: u64) -> Vec<BigUint> {
    fn factorial(n: u64) -> BigUint {
        (1..=n).fold(BigUint::one(), |acc, i| acc * i)
    }
    let mut out = vec![BigUint::zero(); size as usize];
    let mut parts: Vec<u64> = Vec::new();
    fn walk(
        remaining: u64,
        max_part: u64,
        parts: &mut Vec<u64>,
        order: u64,
        size: u64,
        out: &mut [BigUint],
    ) {
        if remaining == 0 {
            let d = parts.len() as u64;
            if d > order {
                return;
            }
            let mut mult_product = BigUint::one();
            let mut run = 1u64;
            for i in 1..parts.len() {
                if parts[i] == parts[i - 1] {
                    run += 1;
                } else {
                    mult_product *= factorial(run);
                    run = 1;
                }
            }
            mult_product *= factorial(run);
            let ways = binomial_pascal(order, d) * factorial(d) / mult_product;
            out[(size - d) as usize] += ways;
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            parts.push(part);
            walk(remaining - part, part, parts, order, size, out);
            parts.pop();
        }
    }
    walk(size, size, &mut parts, order, size, &mut out);
    out
}

/// Collision-count distribution by literal enumeration of every multiset
/// (as a non-decreasing tuple). Only for small spaces.
pub fn enumerate_collision_counts(order: u64, size: u64) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); size as usize];
    let mut tuple: Vec<u64> = Vec::new();
    fn walk(remaining: u64, min_sym: u64, order: u64, tuple: &mut Vec<u64>, out: &mut [BigUint]) {
        if remaining == 0 {
            let distinct = tuple.windows(2).filter(|w| w[0] != w[1]).count() + 1;
            out[tuple.len() - distinct] += 1u32;
            return;
        }
        for sym in min_sym..=order {
            tuple.push(sym);
            walk(remaining - 1, sym, order, tuple, out);
            tuple.pop();
        }
    }
    walk(size, 1, order, &mut tuple, &mut out);
    out
}

/// Exact iid probability of at least `k` collisions among `size` uniform
/// draws from `order` symbols, by dynamic programming over the distinct
/// count.
pub fn occupancy_collision_prob(order: u64, size: u64, k: u64) -> BigRational {
    let n = BigRational::from(BigInt::from(order));
    // dist[d] = P(exactly d distinct) after t draws
    let mut dist = vec![BigRational::zero(); size as usize + 1];
    dist[0] = BigRational::one();
    for _ in 0..size {
        let mut next = vec![BigRational::zero(); size as usize + 1];
        for (d, p) in dist.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let d_big = BigRational::from(BigInt::from(d as u64));
            // repeat one of the d seen symbols
            next[d] += p * &d_big / &n;
            // draw a new symbol
            if (d as u64) < order {
                let fresh = (&n - &d_big) / &n;
                next[d + 1] += p * fresh;
            }
        }
        dist = next;
    }
    let mut acc = BigRational::zero();
    for (d, p) in dist.iter().enumerate() {
        if size - (d as u64) >= k {
            acc += p;
        }
    }
    acc
}

/// Plain square-and-multiply for desk-scale moduli (below 2^64).
pub fn pow_mod_small(base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128;
    let mut base = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Smallest generator of `Z_p^*`.
pub fn find_generator(p: u128) -> u128 {
    let n = p - 1;
    let factors = dlog::modlinalg::factorize(n).expect("desk-scale factorization");
    'cand: for g in 2..p {
        for &(q, _) in factors.factors() {
            if pow_mod_small(g, n / q, p) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("Z_p^* is cyclic");
}

/// Random prime in `[lo, hi]`.
pub fn random_prime(lo: u128, hi: u128, rng: &mut impl Rng) -> u128 {
    loop {
        let c = rng.gen_range(lo..=hi) | 1;
        if c <= hi && dlog::modlinalg::is_prime(c) {
            return c;
        }
    }
}
