//! Coefficient fields: arbitrary-precision rationals and odd prime fields F_p.
//!
//! All scalar arithmetic goes through a field object implementing [`Field`].
//! Elements carry no field context of their own, so word-size residues stay
//! word-size and rationals stay plain `BigRational`s. Characteristic 2 is
//! rejected globally: the symmetric-bilinear/quadratic correspondence the
//! rest of the crate relies on fails there.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Runtime description of a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// Checks the invariants: primes must be odd, at least 3 and below 2^31.
    pub fn validate(&self) -> Result<()> {
        match self {
            FieldSpec::Rational => Ok(()),
            FieldSpec::Prime(p) => {
                if *p < 3 {
                    return Err(Error::InvalidField(format!(
                        "p = {p} too small (characteristic 2 and trivial rings are rejected)"
                    )));
                }
                if *p % 2 == 0 {
                    return Err(Error::InvalidField("characteristic 2 is rejected".into()));
                }
                if *p >= (1 << 31) {
                    return Err(Error::InvalidField(format!("p = {p} exceeds 2^31")));
                }
                if !is_prime_u64(*p) {
                    return Err(Error::InvalidField(format!("{p} is not prime")));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "QQ"),
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Deterministic Miller-Rabin for n < 3,215,031,751 (covers all p < 2^31).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    // operands stay below 2^31, so the product fits in a u64
    (a * b) % m
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// An exact field of scalars. Operations are pure; elements are plain values.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    /// `None` for characteristic zero, `Some(p)` for F_p.
    fn characteristic(&self) -> Option<u64>;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Parse a decimal integer literal of arbitrary length.
    fn from_int_str(&self, s: &str) -> Result<Self::Elem>;
    /// Parse `num/den`; only rationals admit true fractions.
    fn from_fraction_strs(&self, num: &str, den: &str) -> Result<Self::Elem>;
    /// Uniformly random element (used for congruences and evaluation points).
    fn random<R: Rng>(&self, rng: &mut R) -> Self::Elem;
    /// Random element of small height for matrix fills: {-9..9} over Q,
    /// uniform over F_p.
    fn random_small<R: Rng>(&self, rng: &mut R) -> Self::Elem;
    /// `(is_negative, magnitude)` for the printer; over F_p nothing is
    /// negative and the magnitude is the canonical residue.
    fn display_parts(&self, a: &Self::Elem) -> (bool, String);

    fn format(&self, a: &Self::Elem) -> String {
        let (neg, mag) = self.display_parts(a);
        if neg {
            format!("-{mag}")
        } else {
            mag
        }
    }

    /// Exponentiation by squaring.
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The field of rationals with arbitrary-precision integers, kept in lowest
/// terms by `BigRational` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
    fn characteristic(&self) -> Option<u64> {
        None
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_int_str(&self, s: &str) -> Result<BigRational> {
        let n: BigInt = s
            .parse()
            .map_err(|_| Error::NotRepresentable(format!("bad integer `{s}`")))?;
        Ok(BigRational::from_integer(n))
    }
    fn from_fraction_strs(&self, num: &str, den: &str) -> Result<BigRational> {
        let n: BigInt = num
            .parse()
            .map_err(|_| Error::NotRepresentable(format!("bad integer `{num}`")))?;
        let d: BigInt = den
            .parse()
            .map_err(|_| Error::NotRepresentable(format!("bad integer `{den}`")))?;
        if d.is_zero() {
            return Err(Error::NotRepresentable("zero denominator".into()));
        }
        Ok(BigRational::new(n, d))
    }
    fn random<R: Rng>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-99..=99))
    }
    fn random_small<R: Rng>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-9..=9))
    }
    fn display_parts(&self, a: &BigRational) -> (bool, String) {
        let neg = a.is_negative();
        let abs = if neg { -a } else { a.clone() };
        if abs.is_integer() {
            (neg, abs.numer().to_string())
        } else {
            (neg, format!("{}/{}", abs.numer(), abs.denom()))
        }
    }
}

/// F_p for an odd word-size prime p < 2^31. Elements are canonical residues
/// in `0..p`; products fit in a u64, so no wide arithmetic is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        FieldSpec::Prime(p).validate()?;
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, n: i64) -> u64 {
        let r = n.rem_euclid(self.p as i64);
        r as u64
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        use num_traits::ToPrimitive;
        let m = n % BigInt::from(self.p);
        let m = if m.is_negative() { m + BigInt::from(self.p) } else { m };
        m.to_u64().expect("residue fits in u64")
    }

    /// Euler criterion: 1 for nonzero squares, -1 (as p-1) for nonsquares.
    pub fn legendre(&self, a: u64) -> i32 {
        if a % self.p == 0 {
            return 0;
        }
        let e = pow_mod(a % self.p, (self.p - 1) / 2, self.p);
        if e == 1 {
            1
        } else {
            -1
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn characteristic(&self) -> Option<u64> {
        Some(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(pow_mod(*a, self.p - 2, self.p))
        }
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn from_int_str(&self, s: &str) -> Result<u64> {
        let n: BigInt = s
            .parse()
            .map_err(|_| Error::NotRepresentable(format!("bad integer `{s}`")))?;
        Ok(self.reduce_bigint(&n))
    }
    fn from_fraction_strs(&self, _num: &str, _den: &str) -> Result<u64> {
        Err(Error::NotRepresentable(
            "fractional coefficients are only allowed over the rationals".into(),
        ))
    }
    fn random<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn random_small<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn display_parts(&self, a: &u64) -> (bool, String) {
        (false, a.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_rejects_char_two_and_composites() {
        assert!(FieldSpec::Prime(2).validate().is_err());
        assert!(FieldSpec::Prime(9).validate().is_err());
        assert!(FieldSpec::Prime(1).validate().is_err());
        assert!(FieldSpec::Prime(1 << 31).validate().is_err());
        assert!(FieldSpec::Prime(101).validate().is_ok());
        assert!(FieldSpec::Prime(32003).validate().is_ok());
        assert!(FieldSpec::Rational.validate().is_ok());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.add(&100, &5), 4);
        assert_eq!(f.sub(&3, &7), 97);
        assert_eq!(f.mul(&50, &50), 2500 % 101);
        let i = f.inv(&7).unwrap();
        assert_eq!(f.mul(&7, &i), 1);
        assert_eq!(f.legendre(2), -1); // 2 is a nonsquare mod 101? 101 ≡ 5 mod 8 → nonsquare
        assert_eq!(f.legendre(4), 1);
    }

    #[test]
    fn rationals_lowest_terms() {
        let q = Rationals;
        let a = q.from_fraction_strs("4", "6").unwrap();
        let (neg, s) = q.display_parts(&a);
        assert!(!neg);
        assert_eq!(s, "2/3");
    }
}
