//! Cyclic groups realized as prime-order-N subgroups of `Z_p^*` (including
//! the full multiplicative group), with canonical element encoding.

use crate::arith::{pow_mod, pow_mod_counted};
use crate::modlinalg::{self, Factorization};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("modulus {0} is not prime")]
    NotPrime(u128),
    #[error("generator {generator} does not have exact order {order} mod {modulus}")]
    WrongOrder {
        modulus: u128,
        order: u128,
        generator: u128,
    },
    #[error("bad order factorization: {0}")]
    BadFactorization(String),
    #[error("generator {0} outside [1, modulus-1]")]
    InvalidGenerator(u128),
    #[error("residue {0} is not a canonical group element")]
    InvalidElement(u128),
    #[error("invalid group spec: {0}")]
    Parse(String),
}

/// Element of a [`CyclicGroup`], stored as the least positive residue.
/// Equality and ordering are plain residue comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(u128);

impl GroupElement {
    pub fn residue(self) -> u128 {
        self.0
    }
}

/// A public key to attack: index `i` in `[1, m]` together with `y_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetKey {
    pub index: usize,
    pub value: GroupElement,
}

/// The multiplicative group mod a prime `p`, restricted to the subgroup of
/// order `N` generated by `generator`. Immutable after construction; all
/// operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicGroup {
    modulus: u128,
    order: u128,
    generator: u128,
    order_factorization: Vec<(u128, u32)>,
}

impl CyclicGroup {
    /// Validates and builds a group: `modulus` must be prime (deterministic
    /// check below 2^20, Miller-Rabin above), `generator` must have exact
    /// order `order`, and `factors`, when given, must multiply back to
    /// `order`. Without `factors` the order is factorized here, which
    /// requires `order < 2^64`.
    pub fn new(
        modulus: u128,
        order: u128,
        generator: u128,
        factors: Option<Vec<(u128, u32)>>,
    ) -> Result<Self, GroupError> {
        if modulus < 2 || !modlinalg::is_prime(modulus) {
            return Err(GroupError::NotPrime(modulus));
        }
        if generator == 0 || generator >= modulus {
            return Err(GroupError::InvalidGenerator(generator));
        }
        if order == 0 || order > modulus - 1 {
            return Err(GroupError::WrongOrder {
                modulus,
                order,
                generator,
            });
        }
        let factorization = match factors {
            Some(list) => {
                let f = Factorization::from_parts(list)
                    .map_err(|e| GroupError::BadFactorization(e.to_string()))?;
                if f.product() != order {
                    return Err(GroupError::BadFactorization(format!(
                        "factors multiply to {}, expected {}",
                        f.product(),
                        order
                    )));
                }
                f
            }
            None => {
                if order >= 1 << 64 {
                    return Err(GroupError::BadFactorization(
                        "explicit factorization required for orders >= 2^64".into(),
                    ));
                }
                modlinalg::factorize(order)
                    .map_err(|e| GroupError::BadFactorization(e.to_string()))?
            }
        };
        if pow_mod(generator, order, modulus) != 1 {
            return Err(GroupError::WrongOrder {
                modulus,
                order,
                generator,
            });
        }
        for &(q, _) in factorization.factors() {
            if pow_mod(generator, order / q, modulus) == 1 {
                return Err(GroupError::WrongOrder {
                    modulus,
                    order,
                    generator,
                });
            }
        }
        Ok(CyclicGroup {
            modulus,
            order,
            generator,
            order_factorization: factorization.factors().to_vec(),
        })
    }

    /// Parses the textual group spec `p=<dec>,N=<dec>,g=<dec>[,factors=q1^e1*q2^e2*...]`.
    pub fn parse_spec(spec: &str) -> Result<Self, GroupError> {
        let mut p = None;
        let mut n = None;
        let mut g = None;
        let mut factors = None;
        for part in spec.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| GroupError::Parse(format!("expected key=value, got `{part}`")))?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "p" => p = Some(parse_u128(value)?),
                "N" => n = Some(parse_u128(value)?),
                "g" => g = Some(parse_u128(value)?),
                "factors" => factors = Some(parse_factors(value)?),
                other => return Err(GroupError::Parse(format!("unknown key `{other}`"))),
            }
        }
        let p = p.ok_or_else(|| GroupError::Parse("missing p".into()))?;
        let n = n.ok_or_else(|| GroupError::Parse("missing N".into()))?;
        let g = g.ok_or_else(|| GroupError::Parse("missing g".into()))?;
        CyclicGroup::new(p, n, g, factors)
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn generator(&self) -> GroupElement {
        GroupElement(self.generator)
    }

    pub fn order_factorization(&self) -> &[(u128, u32)] {
        &self.order_factorization
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(1)
    }

    /// Canonicalizes a residue into an element of `Z_p^*`. Zero residues are
    /// rejected; subgroup membership is a separate check ([`Self::is_member`]).
    pub fn element(&self, residue: u128) -> Result<GroupElement, GroupError> {
        let r = residue % self.modulus;
        if r == 0 {
            return Err(GroupError::InvalidElement(residue));
        }
        Ok(GroupElement(r))
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement(crate::arith::mul_mod(a.0, b.0, self.modulus))
    }

    /// `base^exponent`. The exponent is reduced mod the group order first
    /// (valid for members by Lagrange), then evaluated by square-and-multiply.
    pub fn pow(&self, base: GroupElement, exponent: u128) -> GroupElement {
        self.pow_counted(base, exponent).0
    }

    /// [`Self::pow`] plus the number of group multiplications performed.
    pub fn pow_counted(&self, base: GroupElement, exponent: u128) -> (GroupElement, u64) {
        let e = exponent % self.order.max(1);
        let (v, count) = pow_mod_counted(base.0, e, self.modulus);
        (GroupElement(v), count)
    }

    /// Whether `e` lies in the generated subgroup (`e^order = 1`).
    pub fn is_member(&self, e: GroupElement) -> bool {
        pow_mod(e.0, self.order, self.modulus) == 1
    }

    /// Number of bytes of the canonical encoding: the byte length of the
    /// modulus.
    pub fn element_width(&self) -> usize {
        ((128 - self.modulus.leading_zeros()) as usize).div_ceil(8)
    }

    /// Fixed-width big-endian encoding of the residue. Injective on the
    /// group, and lexicographic byte order matches integer order.
    pub fn encode(&self, e: GroupElement) -> Vec<u8> {
        let width = self.element_width();
        let bytes = e.0.to_be_bytes();
        bytes[16 - width..].to_vec()
    }

    pub fn decode(&self, bytes: &[u8]) -> Result<GroupElement, GroupError> {
        if bytes.len() != self.element_width() {
            return Err(GroupError::Parse(format!(
                "encoded element must be {} bytes, got {}",
                self.element_width(),
                bytes.len()
            )));
        }
        let mut buf = [0u8; 16];
        buf[16 - bytes.len()..].copy_from_slice(bytes);
        let r = u128::from_be_bytes(buf);
        if r == 0 || r >= self.modulus {
            return Err(GroupError::InvalidElement(r));
        }
        Ok(GroupElement(r))
    }
}

fn parse_u128(s: &str) -> Result<u128, GroupError> {
    s.parse::<u128>()
        .map_err(|_| GroupError::Parse(format!("invalid number `{s}`")))
}

fn parse_factors(s: &str) -> Result<Vec<(u128, u32)>, GroupError> {
    s.split('*')
        .map(|term| {
            let term = term.trim();
            match term.split_once('^') {
                Some((q, e)) => {
                    let q = parse_u128(q)?;
                    let e = e
                        .parse::<u32>()
                        .map_err(|_| GroupError::Parse(format!("invalid exponent `{e}`")))?;
                    Ok((q, e))
                }
                None => Ok((parse_u128(term)?, 1)),
            }
        })
        .collect()
}
