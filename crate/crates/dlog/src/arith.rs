//! Low-level modular arithmetic on `u128` residues.
//!
//! Moduli up to `u64::MAX` take a native fast path; wider moduli (supported up
//! to 2^128) fall back to `num_bigint`. All attack-scale work stays on the
//! fast path.

use num_bigint::BigUint;

/// `(a * b) % m` without overflow. `m` must be nonzero.
pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m != 0);
    let (a, b) = (a % m, b % m);
    if m <= u64::MAX as u128 {
        // a, b < m <= 2^64, so the product fits in u128.
        (a * b) % m
    } else {
        let r = BigUint::from(a) * BigUint::from(b) % BigUint::from(m);
        to_u128(&r)
    }
}

fn to_u128(v: &BigUint) -> u128 {
    let digits = v.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0] as u128,
        2 => (digits[1] as u128) << 64 | digits[0] as u128,
        _ => unreachable!("value exceeds u128"),
    }
}

/// `base^exp % m` by left-to-right square-and-multiply.
pub(crate) fn pow_mod(base: u128, exp: u128, m: u128) -> u128 {
    pow_mod_counted(base, exp, m).0
}

/// `base^exp % m`, also returning the number of modular multiplications
/// performed: `floor(log2 exp)` squarings plus `popcount(exp) - 1` extra
/// multiplies; zero for `exp <= 1`.
pub(crate) fn pow_mod_counted(base: u128, exp: u128, m: u128) -> (u128, u64) {
    debug_assert!(m != 0);
    if m == 1 {
        return (0, 0);
    }
    if exp == 0 {
        return (1, 0);
    }
    let base = base % m;
    let mut acc = base;
    let mut count = 0u64;
    let bits = 128 - exp.leading_zeros();
    for i in (0..bits - 1).rev() {
        acc = mul_mod(acc, acc, m);
        count += 1;
        if exp >> i & 1 == 1 {
            acc = mul_mod(acc, base, m);
            count += 1;
        }
    }
    (acc, count)
}

pub(crate) fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Smallest `s` with `s*s >= n`.
pub(crate) fn ceil_sqrt(n: u128) -> u128 {
    let s = n.isqrt();
    if s * s == n {
        s
    } else {
        s + 1
    }
}

/// Smallest `s` with `s^2 * den >= num`, i.e. `ceil(sqrt(num/den))` with the
/// division taken over the rationals. `num/den` must be modest enough that
/// `s^2 * den` does not overflow; callers stay below 2^64.
pub(crate) fn ceil_sqrt_ratio(num: u128, den: u128) -> u128 {
    debug_assert!(den != 0);
    let mut s = (num / den).isqrt();
    while s
        .checked_mul(s)
        .and_then(|v| v.checked_mul(den))
        .expect("ceil_sqrt_ratio overflow")
        < num
    {
        s += 1;
    }
    s
}

/// Cheap deterministic mixer for deriving sub-seeds from a master seed
/// (splitmix64 finalizer).
pub(crate) fn derive_seed(master: u64, salt: u64) -> u64 {
    let mut z = master ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
