//! Reduction of rational objects modulo a prime.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::matrix::PolyMatrix;
use crate::poly::Poly;

/// Reduce a rational polynomial mod p; fails if p divides a denominator.
pub fn poly_mod_p(p: &Poly<Rationals>, fp: &PrimeField) -> Result<Poly<PrimeField>> {
    let mut out = Poly::zero(fp, p.vars());
    let pb = BigInt::from(fp.p());
    for (m, c) in p.terms() {
        if (c.denom() % &pb).is_zero() {
            return Err(Error::BadReduction(fp.p()));
        }
        let num = fp.reduce_bigint(c.numer());
        let den = fp.reduce_bigint(c.denom());
        let den_inv = fp.inv(&den).ok_or(Error::BadReduction(fp.p()))?;
        let val = fp.mul(&num, &den_inv);
        let t = Poly::term(fp, p.vars(), &m.0, val);
        out = out.add(&t)?;
    }
    Ok(out)
}

pub fn matrix_mod_p(m: &PolyMatrix<Rationals>, fp: &PrimeField) -> Result<PolyMatrix<PrimeField>> {
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            entries.push(poly_mod_p(m.get(i, j), fp)?);
        }
    }
    PolyMatrix::new(fp, m.vars(), m.rows(), m.cols(), entries)
}

/// Class-preserving integer representative of a rational polynomial:
/// returns `h` with integer coefficients such that `[h] = [p]` modulo
/// squares (p is scaled by a square of a rational).
pub fn integerize_square_class(p: &Poly<Rationals>) -> Poly<Rationals> {
    use num_integer::Integer;
    let mut den_lcm = BigInt::from(1);
    for (_, c) in p.terms() {
        den_lcm = den_lcm.lcm(c.denom());
    }
    // p * L^2 has integer coefficients and the same class
    let l2 = num_rational::BigRational::from_integer(den_lcm.clone() * den_lcm);
    p.scalar_mul(&l2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::poly::VarSet;

    #[test]
    fn reduction_and_bad_primes() {
        let v = VarSet::xyz();
        let q = parse("1/3*x+2*y", &v, &Rationals).unwrap();
        let f101 = PrimeField::new(101).unwrap();
        let r = poly_mod_p(&q, &f101).unwrap();
        // 1/3 mod 101 = 34
        let expect = parse("34*x+2*y", &v, &f101).unwrap();
        assert_eq!(r, expect);
        let f3 = PrimeField::new(3).unwrap();
        assert!(matches!(poly_mod_p(&q, &f3), Err(Error::BadReduction(3))));
    }

    #[test]
    fn integerization_preserves_class_shape() {
        let v = VarSet::xyz();
        let q = parse("1/2*x^2+1/3*y^2", &v, &Rationals).unwrap();
        let h = integerize_square_class(&q);
        for (_, c) in h.terms() {
            assert!(c.is_integer());
        }
    }
}
