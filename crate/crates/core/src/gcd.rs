//! Polynomial gcds and squarefree machinery.
//!
//! Univariate gcds run plain Euclid over the field; bivariate gcds run a
//! primitive pseudo-remainder sequence over k[x][y]. Trivariate inputs are
//! only supported when homogeneous, where stripping powers of the last
//! effective variable reduces to the bivariate case. That is all the crate
//! needs: every polynomial downstream of a discriminant is homogeneous in
//! x, y, z, and square-class bookkeeping happens in charts with two
//! variables.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Poly, VarSet};

/// Coefficient list of `p` seen as univariate in `var`; index = exponent.
fn coeffs_in<F: Field>(p: &Poly<F>, var: usize) -> Vec<Poly<F>> {
    let d = p.degree_in(var).unwrap_or(0) as usize;
    let field = p.field().clone();
    let vars = p.vars().clone();
    let mut out = vec![Poly::zero(&field, &vars); d + 1];
    for (m, c) in p.terms() {
        let e = m.0[var] as usize;
        let mut m2 = m.clone();
        m2.0[var] = 0;
        let t = Poly::term(&field, &vars, &m2.0, c.clone());
        out[e] = out[e].add(&t).unwrap();
    }
    out
}

fn from_coeffs_in<F: Field>(
    field: &F,
    vars: &VarSet,
    coeffs: &[Poly<F>],
    var: usize,
) -> Poly<F> {
    let mut acc = Poly::zero(field, vars);
    let v = Poly::var(field, vars, var);
    for (e, c) in coeffs.iter().enumerate() {
        let t = c.mul(&v.pow(e as u32)).unwrap();
        acc = acc.add(&t).unwrap();
    }
    acc
}

/// Euclidean gcd for polynomials in a single variable, monic output.
fn gcd_univar<F: Field>(a: &Poly<F>, b: &Poly<F>, var: usize) -> Poly<F> {
    let field = a.field().clone();
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    while !r1.is_zero() {
        let rem = rem_univar(&r0, &r1, var);
        r0 = r1;
        r1 = rem;
    }
    if r0.is_zero() {
        r0
    } else {
        let lc = leading_in(&r0, var);
        let inv = field.inv(&lc.constant_value().expect("univariate leading coeff")).unwrap();
        r0.scalar_mul(&inv)
    }
}

/// Leading coefficient of `p` as a univariate in `var` (a poly in the rest).
fn leading_in<F: Field>(p: &Poly<F>, var: usize) -> Poly<F> {
    let cs = coeffs_in(p, var);
    cs.into_iter().rev().find(|c| !c.is_zero()).unwrap_or_else(|| Poly::zero(p.field(), p.vars()))
}

fn rem_univar<F: Field>(a: &Poly<F>, b: &Poly<F>, var: usize) -> Poly<F> {
    let field = a.field().clone();
    let db = b.degree_in(var).unwrap();
    let lb = leading_in(b, var).constant_value().expect("univariate divisor");
    let lb_inv = field.inv(&lb).unwrap();
    let v = Poly::var(&field, a.vars(), var);
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(var) {
        if dr < db {
            break;
        }
        let lr = leading_in(&r, var).constant_value().expect("univariate");
        let q = field.mul(&lr, &lb_inv);
        let shift = v.pow((dr - db) as u32).scalar_mul(&q);
        r = r.sub(&shift.mul(b).unwrap()).unwrap();
    }
    r
}

/// Content of `p` w.r.t. `var`: gcd of its coefficients (polys in `other`).
fn content_in<F: Field>(p: &Poly<F>, var: usize, other: usize) -> Poly<F> {
    let cs = coeffs_in(p, var);
    let mut g = Poly::zero(p.field(), p.vars());
    for c in cs {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() {
            c
        } else {
            gcd_univar_or_const(&g, &c, other)
        };
        if g.is_constant() && !g.is_zero() {
            return Poly::one(p.field(), p.vars());
        }
    }
    g
}

fn gcd_univar_or_const<F: Field>(a: &Poly<F>, b: &Poly<F>, var: usize) -> Poly<F> {
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.field(), a.vars());
    }
    gcd_univar(a, b, var)
}

/// Primitive pseudo-remainder gcd for polynomials in two variables.
fn gcd_bivar<F: Field>(a: &Poly<F>, b: &Poly<F>, v_lo: usize, v_hi: usize) -> Poly<F> {
    let field = a.field().clone();
    let vars = a.vars().clone();
    let cont_a = content_in(a, v_hi, v_lo);
    let cont_b = content_in(b, v_hi, v_lo);
    let cont_gcd = gcd_univar_or_const(&cont_a, &cont_b, v_lo);
    let mut r0 = a.div_exact(&cont_a).expect("content divides");
    let mut r1 = b.div_exact(&cont_b).expect("content divides");
    if r0.degree_in(v_hi).unwrap_or(0) < r1.degree_in(v_hi).unwrap_or(0) {
        std::mem::swap(&mut r0, &mut r1);
    }
    while !r1.is_zero() && r1.degree_in(v_hi).unwrap_or(0) > 0 {
        let rem = pseudo_rem(&r0, &r1, v_hi);
        if rem.is_zero() {
            r0 = r1;
            r1 = Poly::zero(&field, &vars);
            break;
        }
        let c = content_in(&rem, v_hi, v_lo);
        let rem = rem.div_exact(&c).expect("content divides");
        r0 = r1;
        r1 = rem;
    }
    let prim = if r1.is_zero() {
        r0
    } else {
        // gcd is a poly in v_lo alone and the primitive parts are coprime
        Poly::one(&field, &vars)
    };
    prim.mul(&cont_gcd).unwrap().monic()
}

/// Pseudo-remainder of `a` by `b` as univariates in `var`.
fn pseudo_rem<F: Field>(a: &Poly<F>, b: &Poly<F>, var: usize) -> Poly<F> {
    let da = a.degree_in(var).unwrap_or(0);
    let db = b.degree_in(var).unwrap();
    if da < db {
        return a.clone();
    }
    let lb = leading_in(b, var);
    let field = a.field().clone();
    let vars = a.vars().clone();
    let v = Poly::var(&field, &vars, var);
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(var) {
        if r.is_zero() || dr < db {
            break;
        }
        let lr = leading_in(&r, var);
        // lb * r  -  lr * v^(dr-db) * b
        let t1 = r.mul(&lb).unwrap();
        let t2 = lr.mul(&v.pow((dr - db) as u32)).unwrap().mul(b).unwrap();
        r = t1.sub(&t2).unwrap();
    }
    r
}

/// Gcd of two polynomials. Supports any inputs with at most two effective
/// variables between them, plus homogeneous trivariate inputs.
pub fn gcd_poly<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Result<Poly<F>> {
    let field = a.field().clone();
    let vars = a.vars().clone();
    if a.is_zero() {
        return Ok(b.monic());
    }
    if b.is_zero() {
        return Ok(a.monic());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(Poly::one(&field, &vars));
    }
    let mut eff: Vec<usize> = a.effective_vars();
    for v in b.effective_vars() {
        if !eff.contains(&v) {
            eff.push(v);
        }
    }
    eff.sort_unstable();
    match eff.len() {
        0 => Ok(Poly::one(&field, &vars)),
        1 => Ok(gcd_univar(a, b, eff[0])),
        2 => Ok(gcd_bivar(a, b, eff[0], eff[1])),
        3 => {
            if !a.is_homogeneous() || !b.is_homogeneous() {
                return Err(Error::Unsupported(
                    "gcd with three effective variables requires homogeneous inputs".into(),
                ));
            }
            let zv = eff[2];
            let ka = a.var_multiplicity(zv);
            let kb = b.var_multiplicity(zv);
            let ah = a.shift_down(zv, ka).dehomogenize(zv);
            let bh = b.shift_down(zv, kb).dehomogenize(zv);
            let g2 = gcd_poly(&ah, &bh)?;
            let gdeg = g2.degree().unwrap_or(0);
            let g3 = g2.homogenize(zv, gdeg)?;
            let zpow = Poly::var(&field, &vars, zv).pow(ka.min(kb) as u32);
            Ok(g3.mul(&zpow)?.monic())
        }
        _ => Err(Error::Unsupported(
            "gcd supports at most three variables".into(),
        )),
    }
}

pub fn gcd_many<'a, F: Field + 'a>(
    polys: impl IntoIterator<Item = &'a Poly<F>>,
) -> Result<Option<Poly<F>>> {
    let mut acc: Option<Poly<F>> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.monic(),
            Some(g) => {
                if g.is_constant() {
                    return Ok(Some(g));
                }
                gcd_poly(&g, p)?
            }
        });
    }
    Ok(acc)
}

fn check_characteristic<F: Field>(p: &Poly<F>) -> Result<()> {
    if let (Some(ch), Some(d)) = (p.field().characteristic(), p.degree()) {
        if (ch as i64) <= d {
            return Err(Error::CharacteristicTooSmall {
                needed: d,
                have: ch,
            });
        }
    }
    Ok(())
}

/// Product of the distinct irreducible factors, monic. Requires at most two
/// effective variables and characteristic 0 or p > deg.
pub fn squarefree_part<F: Field>(p: &Poly<F>) -> Result<Poly<F>> {
    if p.is_zero() {
        return Err(Error::Unsupported("squarefree part of zero".into()));
    }
    check_characteristic(p)?;
    if p.is_constant() {
        return Ok(Poly::one(p.field(), p.vars()));
    }
    let eff = p.effective_vars();
    if eff.len() > 2 {
        return Err(Error::Unsupported(
            "squarefree part needs at most two effective variables".into(),
        ));
    }
    let mut g = p.clone();
    for &v in &eff {
        let d = p.derivative(v);
        g = gcd_poly(&g, &d)?;
        if g.is_constant() {
            break;
        }
    }
    let sf = p.div_exact(&g).expect("gcd divides");
    Ok(sf.monic())
}

/// True iff `p = u * s^2` for a nonzero constant u and a polynomial s.
pub fn is_unit_times_square<F: Field>(p: &Poly<F>) -> Result<bool> {
    if p.is_zero() {
        return Ok(false);
    }
    if p.is_constant() {
        return Ok(true);
    }
    let sf = squarefree_part(p)?;
    let sq = sf.mul(&sf).unwrap();
    match p.div_exact(&sq) {
        None => Ok(false),
        Some(q) => is_unit_times_square(&q),
    }
}

/// The maximal `s` with `s^2` dividing `p` (monic). Same variable limits as
/// [`squarefree_part`].
pub fn square_part<F: Field>(p: &Poly<F>) -> Result<Poly<F>> {
    if p.is_zero() {
        return Err(Error::Unsupported("square part of zero".into()));
    }
    if p.is_constant() {
        return Ok(Poly::one(p.field(), p.vars()));
    }
    let sf = squarefree_part(p)?;
    let q = p.div_exact(&sf).expect("squarefree part divides");
    if q.is_constant() {
        return Ok(Poly::one(p.field(), p.vars()));
    }
    let s1 = gcd_poly(&sf, &q)?;
    let rest = q.div_exact(&s1).expect("gcd divides");
    let tail = square_part(&rest)?;
    Ok(s1.mul(&tail).unwrap().monic())
}

/// Strip the last variable, apply a bivariate operation, and re-homogenize.
fn on_dehomog<F: Field>(
    p: &Poly<F>,
    zv: usize,
    f: impl Fn(&Poly<F>) -> Result<Poly<F>>,
) -> Result<(u16, Poly<F>)> {
    let k = p.var_multiplicity(zv);
    let core = p.shift_down(zv, k).dehomogenize(zv);
    let r = f(&core)?;
    Ok((k, r))
}

/// Squarefree part of a homogeneous polynomial in three variables.
pub fn squarefree_part_homog<F: Field>(p: &Poly<F>) -> Result<Poly<F>> {
    if p.is_zero() {
        return Err(Error::Unsupported("squarefree part of zero".into()));
    }
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let eff = p.effective_vars();
    if eff.len() <= 2 {
        return squarefree_part(p);
    }
    let zv = eff[2];
    let (k, sf2) = on_dehomog(p, zv, |c| squarefree_part(c))?;
    let field = p.field().clone();
    let vars = p.vars().clone();
    let d = sf2.degree().unwrap_or(0);
    let mut out = sf2.homogenize(zv, d)?;
    if k > 0 {
        out = out.mul(&Poly::var(&field, &vars, zv))?;
    }
    Ok(out.monic())
}

/// Maximal square divisor root for a homogeneous trivariate polynomial.
pub fn square_part_homog<F: Field>(p: &Poly<F>) -> Result<Poly<F>> {
    if p.is_zero() {
        return Err(Error::Unsupported("square part of zero".into()));
    }
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let eff = p.effective_vars();
    if eff.len() <= 2 {
        return square_part(p);
    }
    let zv = eff[2];
    let k = p.var_multiplicity(zv);
    let core = p.shift_down(zv, k).dehomogenize(zv);
    let s2 = square_part(&core)?;
    let d = s2.degree().unwrap_or(0);
    let mut out = s2.homogenize(zv, d)?;
    let field = p.field().clone();
    let vars = p.vars().clone();
    if k >= 2 {
        out = out.mul(&Poly::var(&field, &vars, zv).pow((k / 2) as u32))?;
    }
    Ok(out.monic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::parse::parse;
    use crate::poly::VarSet;

    fn qp(s: &str) -> Poly<Rationals> {
        parse(s, &VarSet::xyz(), &Rationals).unwrap()
    }

    #[test]
    fn squarefree_part_examples() {
        // x^4 y^2 → x y
        assert_eq!(squarefree_part(&qp("x^4*y^2")).unwrap(), qp("x*y"));
        // x^5 y → x y
        assert_eq!(squarefree_part(&qp("x^5*y")).unwrap(), qp("x*y"));
        // (x+y)^3 (x-y)^2 → x^2 - y^2
        let p = qp("x+y").pow(3).mul(&qp("x-y").pow(2)).unwrap();
        assert_eq!(squarefree_part(&p).unwrap(), qp("x^2-y^2"));
    }

    #[test]
    fn unit_times_square_detection() {
        assert!(is_unit_times_square(&qp("x^4*y^2")).unwrap());
        assert!(!is_unit_times_square(&qp("x^5*y")).unwrap());
        // x^5 y * x y = x^6 y^2 is a square
        let p = qp("x^5*y").mul(&qp("x*y")).unwrap();
        assert!(is_unit_times_square(&p).unwrap());
        let f = qp("x^2+y^2+z^2-2*x*y-2*x*z-2*y*z").dehomogenize(2);
        assert!(is_unit_times_square(&f.mul(&f).unwrap()).unwrap());
        assert!(!is_unit_times_square(&f).unwrap());
        // constants count as unit times square
        assert!(is_unit_times_square(&qp("7")).unwrap());
    }

    #[test]
    fn square_part_extraction() {
        let s = square_part(&qp("x^5*y")).unwrap();
        assert_eq!(s, qp("x^2"));
        let s = square_part(&qp("x^4*y^2")).unwrap();
        assert_eq!(s, qp("x^2*y"));
        let p = qp("x+y").pow(3).mul(&qp("x-y").pow(2)).unwrap();
        let s = square_part(&p).unwrap();
        // (x+y)(x-y) up to the monic normalization
        assert_eq!(s, qp("x^2-y^2"));
    }

    #[test]
    fn homogeneous_trivariate_gcd() {
        let a = qp("x^2*y^2*z^2");
        let b = qp("x^3*z^4");
        let g = gcd_poly(&a, &b).unwrap();
        assert_eq!(g, qp("x^2*z^2"));
        let f = qp("x^2+y^2+z^2-2*x*y-2*x*z-2*y*z");
        let p1 = f.mul(&qp("x*y")).unwrap();
        let p2 = f.mul(&qp("z^2")).unwrap();
        assert_eq!(gcd_poly(&p1, &p2).unwrap(), f.monic());
    }

    #[test]
    fn characteristic_guard() {
        let f = PrimeField::new(5).unwrap();
        let v = VarSet::xyz();
        let p = parse("x^6", &v, &f).unwrap();
        assert!(matches!(
            squarefree_part(&p),
            Err(Error::CharacteristicTooSmall { .. })
        ));
    }

    #[test]
    fn trivariate_square_part() {
        let p = qp("x^2+y^2+z^2-2*x*y-2*x*z-2*y*z")
            .mul(&qp("x^2*y^4*z^3"))
            .unwrap();
        let s = square_part_homog(&p).unwrap();
        assert_eq!(s, qp("x*y^2*z"));
    }
}
