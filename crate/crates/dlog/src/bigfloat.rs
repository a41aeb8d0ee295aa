//! Arbitrary-range binary floating point with a 256-bit mantissa (~77
//! significant decimal digits), enough headroom for the bound evaluations,
//! whose exponentials underflow `f64` long before the interesting regime.
//!
//! Only the operations the probability module needs are provided: field ops,
//! comparison, integer powers, `exp`, `sqrt`, and conversions. Errors are a
//! few ulps per operation; every consumer works with gaps many orders of
//! magnitude wider.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

/// Mantissa precision in bits.
const PREC: u64 = 256;
/// Extra working bits for intermediate results.
const GUARD: u64 = 64;

/// A floating-point value `mant * 2^exp` with `|mant| < 2^PREC`.
#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        BigFloat::from_u128(1)
    }

    pub fn from_u128(v: u128) -> Self {
        BigFloat {
            mant: BigInt::from(v),
            exp: 0,
        }
        .normalized()
    }

    pub fn from_i64(v: i64) -> Self {
        BigFloat {
            mant: BigInt::from(v),
            exp: 0,
        }
        .normalized()
    }

    pub fn from_bigint(v: BigInt) -> Self {
        BigFloat { mant: v, exp: 0 }.normalized()
    }

    /// `2^e`, handy for tolerances.
    pub fn pow2(e: i64) -> Self {
        BigFloat {
            mant: BigInt::from(1),
            exp: e,
        }
    }

    /// Rounded quotient `num / den` of two integers.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Self::zero();
        }
        // Shift so the quotient keeps at least PREC + GUARD significant bits
        // even when |num| << |den|.
        let shift = PREC
            + GUARD
            + den
                .magnitude()
                .bits()
                .saturating_sub(num.magnitude().bits());
        let scaled: BigInt = (num << shift) / den;
        BigFloat {
            mant: scaled,
            exp: -(shift as i64),
        }
        .normalized()
    }

    /// Parses a plain decimal literal like `-12.345` or `0.5`.
    pub fn from_decimal_str(s: &str) -> Self {
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        let digits: String = format!("{int_part}{frac_part}");
        let num: BigInt = digits.parse::<BigInt>().expect("invalid decimal literal") * sign;
        let den = BigInt::from(10u8).pow(frac_part.len() as u32);
        Self::from_ratio(&num, &den)
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let bits = self.mant.magnitude().bits();
        if bits > PREC {
            let shift = bits - PREC;
            self.mant >>= shift;
            self.exp += shift as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Position of the most significant bit: value magnitude is in
    /// `[2^(msb-1), 2^msb)`. Zero for the zero value.
    fn msb(&self) -> i64 {
        self.mant.magnitude().bits() as i64 + self.exp
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let diff = self - other;
        if diff.mant.is_zero() {
            Ordering::Equal
        } else if diff.mant.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    fn add_impl(&self, other: &Self) -> Self {
        if self.mant.is_zero() {
            return other.clone();
        }
        if other.mant.is_zero() {
            return self.clone();
        }
        // When magnitudes are too far apart the small operand is below one
        // ulp of the large one and can be dropped.
        let gap_limit = (PREC + 2 * GUARD) as i64;
        if self.msb() - other.msb() > gap_limit {
            return self.clone();
        }
        if other.msb() - self.msb() > gap_limit {
            return other.clone();
        }
        let (lo, hi) = if self.exp <= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exp - lo.exp) as u64;
        let mant = (&hi.mant << shift) + &lo.mant;
        BigFloat { mant, exp: lo.exp }.normalized()
    }

    fn mul_impl(&self, other: &Self) -> Self {
        BigFloat {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
        .normalized()
    }

    fn div_impl(&self, other: &Self) -> Self {
        assert!(!other.mant.is_zero(), "division by zero");
        if self.mant.is_zero() {
            return Self::zero();
        }
        let shift = PREC
            + GUARD
            + other
                .mant
                .magnitude()
                .bits()
                .saturating_sub(self.mant.magnitude().bits());
        let mant = (&self.mant << shift) / &other.mant;
        BigFloat {
            mant,
            exp: self.exp - other.exp - shift as i64,
        }
        .normalized()
    }

    fn div_u64(&self, d: u64) -> Self {
        self.div_impl(&BigFloat::from_u128(d as u128))
    }

    pub fn recip(&self) -> Self {
        BigFloat::one().div_impl(self)
    }

    /// Integer power by binary exponentiation; negative exponents via the
    /// reciprocal.
    pub fn pow_i64(&self, n: i64) -> Self {
        if n < 0 {
            return self.pow_i64(-n).recip();
        }
        let mut result = BigFloat::one();
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_impl(&base);
            }
            base = base.mul_impl(&base);
            e >>= 1;
        }
        result
    }

    /// Largest integer `<= self`, which must fit in an `i64`.
    fn floor_i64(&self) -> i64 {
        if self.mant.is_zero() {
            return 0;
        }
        let floored: BigInt = if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            // BigInt shr rounds toward negative infinity, i.e. floor.
            &self.mant >> (-self.exp) as u64
        };
        floored.to_i64().expect("floor out of i64 range")
    }

    /// `e^self`. The argument magnitude must stay below 2^24 (far beyond any
    /// bound evaluation in this crate).
    pub fn exp(&self) -> Self {
        assert!(self.msb() < 24, "exp argument out of supported range");
        let n = self.floor_i64();
        let frac = self - &BigFloat::from_i64(n);
        debug_assert!(!frac.is_negative() && frac.msb() <= 0);
        // e^frac by Taylor series; frac in [0, 1) converges in ~65 terms.
        let mut term = BigFloat::one();
        let mut sum = BigFloat::one();
        let mut i = 1u64;
        loop {
            term = term.mul_impl(&frac).div_u64(i);
            if term.is_zero() || term.msb() < sum.msb() - (PREC + GUARD / 2) as i64 {
                break;
            }
            sum = sum.add_impl(&term);
            i += 1;
        }
        e_const().pow_i64(n).mul_impl(&sum)
    }

    /// Square root by integer square root of the scaled mantissa. The value
    /// must be nonnegative.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative value");
        if self.mant.is_zero() {
            return Self::zero();
        }
        let bits = self.mant.magnitude().bits();
        // Scale so the root keeps ~PREC+GUARD significant bits, with the
        // shifted exponent even.
        let mut shift = 2 * (PREC + GUARD).saturating_sub(bits / 2);
        if (self.exp - shift as i64) % 2 != 0 {
            shift += 1;
        }
        let scaled: BigUint = self.mant.magnitude() << shift;
        let root = scaled.sqrt();
        BigFloat {
            mant: BigInt::from_biguint(Sign::Plus, root),
            exp: (self.exp - shift as i64) / 2,
        }
        .normalized()
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.magnitude().bits();
        let (top, exp) = if bits > 53 {
            let shift = bits - 53;
            (
                (&self.mant >> shift).to_i64().unwrap(),
                self.exp + shift as i64,
            )
        } else {
            (self.mant.to_i64().unwrap(), self.exp)
        };
        if exp > 2000 {
            return if top < 0 {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if exp < -2000 {
            return 0.0;
        }
        top as f64 * 2f64.powi(exp as i32)
    }
}

/// `e` to full precision, from the exact series `sum 1/i!`.
fn e_const() -> &'static BigFloat {
    static E: OnceLock<BigFloat> = OnceLock::new();
    E.get_or_init(|| {
        // sum_{i<=70} 1/i! = (sum_{i<=70} 70!/i!) / 70!; the tail is < 2^-330.
        let mut den = BigInt::from(1u8);
        for i in 1..=70u32 {
            den *= i;
        }
        let mut term = den.clone();
        let mut num = BigInt::zero();
        for i in 0..=70u32 {
            if i > 0 {
                term /= i;
            }
            num += &term;
        }
        BigFloat::from_ratio(&num, &den)
    })
}

/// `pi` to 110 decimal digits.
pub fn pi() -> &'static BigFloat {
    static PI: OnceLock<BigFloat> = OnceLock::new();
    PI.get_or_init(|| {
        BigFloat::from_decimal_str(
            "3.141592653589793238462643383279502884197169399375105820974944592307816406286208998628034825342117067982148086513282",
        )
    })
}

pub fn e() -> &'static BigFloat {
    e_const()
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl:ident) => {
        impl $trait for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                self.$impl(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Sub for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        self.add_impl(&-rhs)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}
