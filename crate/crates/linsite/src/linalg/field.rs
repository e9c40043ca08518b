use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// The exact ground field: `F_p` for a small prime `p`, or the rationals.
///
/// The default configuration is `F_2`, which supports every exhaustive
/// quantifier in the crate. The rationals support all linear algebra but no
/// vector enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    /// The prime field `Z/pZ`.
    Prime(u32),
    /// The field of rational numbers, with arbitrary-precision arithmetic.
    Rationals,
}

/// An element of a [`Field`].
///
/// Prime-field elements are stored as canonical representatives in
/// `0..p`; rationals in fully reduced form (guaranteed by `BigRational`).
/// Scalars are only meaningful relative to the field that produced them,
/// which every matrix carries along.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Prime(u64),
    Rational(BigRational),
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(2)
    }
}

impl Field {
    /// Constructs `F_p`, rejecting composite or zero moduli.
    pub fn prime(p: u32) -> Result<Field> {
        if p < 2 || !is_prime(p) {
            return Err(Error::Precondition { what: format!("{p} is not prime") });
        }
        Ok(Field::Prime(p))
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    /// Number of elements, when finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(u64::from(*p)),
            Field::Rationals => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Prime(_) => Scalar::Prime(0),
            Field::Rationals => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Prime(_) => Scalar::Prime(1),
            Field::Rationals => Scalar::Rational(BigRational::one()),
        }
    }

    /// Embeds a signed integer.
    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Prime(p) => {
                let p = i64::from(*p);
                Scalar::Prime(n.rem_euclid(p) as u64)
            }
            Field::Rationals => Scalar::Rational(BigRational::from(BigInt::from(n))),
        }
    }

    /// Element with the given index in the canonical enumeration `0..p`.
    /// Only meaningful over a prime field.
    pub fn element(&self, index: u64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Prime(index % u64::from(*p)),
            Field::Rationals => unreachable!("rationals are not enumerable"),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Prime(x) => *x == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime((x + y) % u64::from(*p))
            }
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x + y)
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Prime(p), Scalar::Prime(x)) => {
                let p = u64::from(*p);
                Scalar::Prime((p - x % p) % p)
            }
            (Field::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime((x * y) % u64::from(*p))
            }
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x * y)
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    /// Multiplicative inverse; panics on zero (callers pivot on nonzero
    /// entries only).
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Prime(p), Scalar::Prime(x)) => {
                assert!(*x != 0, "inverse of zero");
                let p = u64::from(*p);
                // Fermat: x^(p-2) mod p.
                let mut base = x % p;
                let mut exp = p - 2;
                let mut acc = 1u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Scalar::Prime(acc)
            }
            (Field::Rationals, Scalar::Rational(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Scalar::Rational(x.recip())
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// Parses a decimal integer or `n/d` fraction.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::Precondition { what: format!("cannot parse scalar `{s}`") };
        match self {
            Field::Prime(_) => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Ok(self.from_i64(n))
            }
            Field::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let num: BigInt = num.parse().map_err(|_| bad())?;
                let den: BigInt = den.parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
        }
    }
}

impl Scalar {
    /// Renders the scalar in the form [`Field::parse`] accepts.
    pub fn render(&self) -> String {
        match self {
            Scalar::Prime(x) => x.to_string(),
            Scalar::Rational(r) => {
                if r.denom().is_one() || r.numer().is_zero() {
                    r.numer().to_string()
                } else if r.denom().is_negative() {
                    // BigRational normalizes signs into the numerator, so
                    // this branch is unreachable for reduced values.
                    format!("{}/{}", -r.numer(), -r.denom())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= u64::from(p) {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(f.add(&a, &b), f.from_i64(2));
        assert_eq!(f.mul(&a, &b), f.from_i64(2));
        assert_eq!(f.neg(&a), f.from_i64(2));
        assert_eq!(f.mul(&a, &f.inv(&a)), f.one());
        assert_eq!(f.from_i64(-1), f.from_i64(4));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(7).is_ok());
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let f = Field::Rationals;
        let third = f.parse("1/3").unwrap();
        let sum = f.add(&f.add(&third, &third), &third);
        assert_eq!(sum, f.one());
        assert_eq!(third.render(), "1/3");
        assert_eq!(f.parse("-2/4").unwrap().render(), "-1/2");
    }

    #[test]
    fn inverse_over_f2() {
        let f = Field::default();
        assert_eq!(f.inv(&f.one()), f.one());
    }
}
