//! Clifford residue representatives along the discriminant and the
//! probabilistic square-class equality test.
//!
//! The residue of the even Clifford algebra along a smooth discriminant
//! `C = {f = 0}` is represented by the leading (m-1)-principal minor of the
//! symmetric matrix after a constant congruence that moves the minor off
//! the curve, normalized to even degree by at most one multiplication with
//! the reference line. Equality of two residue classes is decided by Euler's
//! criterion at sampled smooth points of C: any nonsquare value certifies
//! NotEqual; agreement on n valid samples gives equality with heuristic
//! confidence 1 - 2^-n.

use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::fpscan::{scan_zeros, FpPoly};
use crate::gcd::{gcd_poly, is_unit_times_square, square_part_homog, squarefree_part_homog};
use crate::graded::{GradedSymMatrix, PlaneCurve};
use crate::linalg;
use crate::modred::{integerize_square_class, poly_mod_p};
use crate::poly::Poly;

/// Even-degree homogeneous representative of a class in k(C)* mod squares.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareClass<F: Field> {
    pub g: Poly<F>,
    pub line: Poly<F>,
    pub curve: PlaneCurve<F>,
}

/// Residue of the even Clifford algebra along the discriminant curve.
///
/// Works for chart-level models too: the determinant may carry square
/// factors, the curve is its squarefree core, and the representative is
/// valid as long as the determinant has valuation one along every
/// component (checked).
pub fn residue_along_curve<F: Field>(
    q: &GradedSymMatrix<F>,
    line: &Poly<F>,
    seed: u64,
) -> Result<SquareClass<F>> {
    let field = q.mat.field().clone();
    if line.degree() != Some(1) || !line.is_homogeneous() {
        return Err(Error::BadLine("normalization line must be linear".into()));
    }
    let f_raw = q.mat.det()?;
    if f_raw.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let s = square_part_homog(&f_raw)?;
    let s2 = s.mul(&s)?;
    let f_core = f_raw.div_exact(&s2).expect("square part divides");
    // squarefree core, valuation 1 along every component
    if squarefree_part_homog(&f_core)? != f_core.monic() {
        return Err(Error::NotSquarefree);
    }
    if !gcd_poly(&s, &f_core)?.is_constant() {
        return Err(Error::NotSquarefree);
    }
    if f_core.div_exact(line).is_some() {
        return Err(Error::BadLine(
            "normalization line is a component of the discriminant".into(),
        ));
    }
    let m = q.size();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    'tries: for attempt in 0..50 {
        let mm = if attempt == 0 {
            q.mat.clone()
        } else {
            let p = linalg::random_invertible(&field, m, &mut rng);
            q.mat.congruence_const(&p)?
        };
        // principal minors of sizes 1..m-1 must avoid the curve
        for k in 1..m {
            let minor = mm.principal_minor(k)?;
            if minor.is_zero() || minor.div_exact(&f_core).is_some() {
                continue 'tries;
            }
        }
        let minor = mm.principal_minor(m - 1)?;
        let mut g = minor;
        if g.degree().unwrap_or(0) % 2 != 0 {
            g = g.mul(line)?;
        }
        // strip square factors (line powers included) to keep the
        // representative small; the class is unchanged
        let sp = square_part_homog(&g)?;
        if !sp.is_constant() {
            let sp2 = sp.mul(&sp)?;
            g = g.div_exact(&sp2).expect("square part divides");
        }
        let curve = PlaneCurve::new(f_core)?;
        return Ok(SquareClass {
            g,
            line: line.clone(),
            curve,
        });
    }
    Err(Error::MinorAlwaysDivisible)
}

/// Smooth F_p points of the curve, in scan order, truncated to `budget`.
pub fn curve_points_fp(
    curve: &PlaneCurve<PrimeField>,
    budget: usize,
) -> Result<Vec<[u64; 3]>> {
    let fp = *curve.f.field();
    let f = &curve.f;
    let partials: Vec<Poly<PrimeField>> = (0..3).map(|v| f.derivative(v)).collect();
    let compiled = FpPoly::compile(f);
    let mut out = Vec::new();
    scan_zeros::<()>(&fp, &compiled, |pt| {
        let point = [pt[0], pt[1], pt[2]];
        let smooth = partials
            .iter()
            .any(|g| g.eval(&point).expect("arity") != 0);
        if smooth {
            out.push(point);
        }
        if out.len() >= budget {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(out)
}

/// Reduce a rational curve mod p and enumerate smooth points; errors on bad
/// reduction (denominators hit, vanishing, or non-squarefree reduction).
pub fn curve_points_q(
    curve: &PlaneCurve<Rationals>,
    p: u64,
    budget: usize,
) -> Result<(PlaneCurve<PrimeField>, Vec<[u64; 3]>)> {
    let fp = PrimeField::new(p)?;
    let fmod = poly_mod_p(&curve.f, &fp)?;
    if fmod.is_zero() {
        return Err(Error::BadReduction(p));
    }
    if squarefree_part_homog(&fmod)? != fmod.monic() {
        return Err(Error::BadReduction(p));
    }
    let cmod = PlaneCurve::new(fmod)?;
    let pts = curve_points_fp(&cmod, budget)?;
    Ok((cmod, pts))
}

#[derive(Debug, Clone, PartialEq)]
pub enum EquivVerdict {
    NotEqual { prime: u64, point: [u64; 3] },
    ProbablyEqual { samples: usize, primes_used: Vec<u64> },
    Inconclusive { reason: String },
}

impl EquivVerdict {
    /// 1 - 2^-samples under the half-density heuristic for nonsquares.
    pub fn confidence(&self) -> f64 {
        match self {
            EquivVerdict::ProbablyEqual { samples, .. } => {
                1.0 - 0.5f64.powi((*samples).min(1022) as i32)
            }
            _ => 0.0,
        }
    }
}

fn check_same_curve<F: Field>(a: &SquareClass<F>, b: &SquareClass<F>) -> Result<()> {
    if a.curve.f.monic() != b.curve.f.monic() {
        return Err(Error::CurveMismatch);
    }
    if a.g.degree().unwrap_or(0) % 2 != 0 || b.g.degree().unwrap_or(0) % 2 != 0 {
        return Err(Error::OddDegreeRepresentative);
    }
    Ok(())
}

/// Sample Euler's criterion for `h = g1 g2` at smooth points of the curve
/// over one prime field. Returns (positives, witness).
fn sample_prime(
    fp: &PrimeField,
    curve: &PlaneCurve<PrimeField>,
    h: &Poly<PrimeField>,
    lines: &[Poly<PrimeField>],
    want: usize,
) -> Result<(usize, Option<[u64; 3]>)> {
    let budget = want * 8 + 64;
    let pts = curve_points_fp(curve, budget)?;
    let mut positives = 0usize;
    for pt in pts {
        if positives >= want {
            break;
        }
        let hv = h.eval(&pt)?;
        if hv == 0 {
            continue;
        }
        if lines.iter().any(|l| l.eval(&pt).expect("arity") == 0) {
            continue;
        }
        match fp.legendre(hv) {
            1 => positives += 1,
            -1 => {
                // independent recheck of the witness
                debug_assert_eq!(curve.f.eval(&pt)?, 0);
                let brute_square = (0..fp.p()).any(|s| fp.mul(&s, &s) == hv);
                if !brute_square {
                    return Ok((positives, Some(pt)));
                }
            }
            _ => {}
        }
    }
    Ok((positives, None))
}

/// Decide equality of two square classes over F_p by point sampling.
pub fn square_class_equal_fp(
    a: &SquareClass<PrimeField>,
    b: &SquareClass<PrimeField>,
    trials: usize,
    _seed: u64,
) -> Result<EquivVerdict> {
    check_same_curve(a, b)?;
    let fp = *a.g.field();
    let h = a.g.mul(&b.g)?;
    let lines = vec![a.line.clone(), b.line.clone()];
    let (pos, witness) = sample_prime(&fp, &a.curve, &h, &lines, trials)?;
    if let Some(pt) = witness {
        return Ok(EquivVerdict::NotEqual {
            prime: fp.p(),
            point: pt,
        });
    }
    if pos >= trials {
        Ok(EquivVerdict::ProbablyEqual {
            samples: pos,
            primes_used: vec![fp.p()],
        })
    } else {
        Ok(EquivVerdict::Inconclusive {
            reason: format!("only {pos} valid samples of {trials} requested"),
        })
    }
}

/// Decide equality of two square classes over Q by sampling reductions
/// modulo the given primes; needs at least two good primes for a positive
/// verdict.
pub fn square_class_equal_q(
    a: &SquareClass<Rationals>,
    b: &SquareClass<Rationals>,
    trials: usize,
    primes: &[u64],
    _seed: u64,
) -> Result<EquivVerdict> {
    check_same_curve(a, b)?;
    let h = integerize_square_class(&a.g.mul(&b.g)?);
    let mut total = 0usize;
    let mut used = Vec::new();
    let mut skipped = Vec::new();
    let per_prime = trials.div_ceil(2.min(primes.len()).max(1));
    for &p in primes {
        let (cmod, _) = match curve_points_q(&a.curve, p, 1) {
            Ok(x) => x,
            Err(_) => {
                skipped.push(p);
                continue;
            }
        };
        let fp = PrimeField::new(p)?;
        let hmod = match poly_mod_p(&h, &fp) {
            Ok(hm) if !hm.is_zero() => hm,
            _ => {
                skipped.push(p);
                continue;
            }
        };
        let lines: Vec<Poly<PrimeField>> = [&a.line, &b.line]
            .iter()
            .filter_map(|l| poly_mod_p(l, &fp).ok())
            .collect();
        let (pos, witness) = sample_prime(&fp, &cmod, &hmod, &lines, per_prime)?;
        if let Some(pt) = witness {
            return Ok(EquivVerdict::NotEqual { prime: p, point: pt });
        }
        total += pos;
        if pos > 0 {
            used.push(p);
        }
    }
    if total >= trials && used.len() >= 2 {
        Ok(EquivVerdict::ProbablyEqual {
            samples: total,
            primes_used: used,
        })
    } else {
        Ok(EquivVerdict::Inconclusive {
            reason: format!(
                "{total} valid samples over primes {used:?} (skipped {skipped:?}), needed {trials} over at least 2 primes"
            ),
        })
    }
}

/// Is `p` a unit times a square in the rational function field of the
/// chart `{chart_var = 1}`?
pub fn is_square_in_ratfield<F: Field>(p: &Poly<F>, chart_var: usize) -> Result<bool> {
    let affine = p.dehomogenize(chart_var);
    if affine.effective_vars().len() > 2 {
        return Err(Error::Unsupported(
            "square testing needs at most two variables after dehomogenizing".into(),
        ));
    }
    is_unit_times_square(&affine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::PolyMatrix;
    use crate::parse::parse;
    use crate::poly::VarSet;

    fn fp101() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn unit_minor_gives_trivial_class() {
        // diag(1, f) with f a smooth sextic: residue representative is 1
        let fp = fp101();
        let v = VarSet::xyz();
        let f = parse("x^6+y^6+z^6", &v, &fp).unwrap();
        let entries = vec![
            Poly::one(&fp, &v),
            Poly::zero(&fp, &v),
            Poly::zero(&fp, &v),
            f,
        ];
        let mat = PolyMatrix::new(&fp, &v, 2, 2, entries).unwrap();
        let q = GradedSymMatrix::validate(vec![0, -3], 0, mat).unwrap();
        let line = parse("z", &v, &fp).unwrap();
        let s = residue_along_curve(&q, &line, 7).unwrap();
        assert!(s.g.is_constant());
    }

    #[test]
    fn conic_point_count() {
        let fp = fp101();
        let v = VarSet::xyz();
        let f = parse("x^2+y^2-z^2", &v, &fp).unwrap();
        let c = PlaneCurve::new(f).unwrap();
        let pts = curve_points_fp(&c, 10_000).unwrap();
        assert_eq!(pts.len(), 102);
        for pt in &pts {
            assert_eq!(c.f.eval(pt).unwrap(), 0);
        }
    }

    #[test]
    fn self_equality_and_square_twists() {
        let fp = fp101();
        let v = VarSet::xyz();
        let f = parse("x^6+y^6+z^6", &v, &fp).unwrap();
        let line = parse("z", &v, &fp).unwrap();
        let curve = PlaneCurve::new(f).unwrap();
        let g = parse("x^2+7*y^2", &v, &fp).unwrap();
        let s1 = SquareClass {
            g: g.clone(),
            line: line.clone(),
            curve: curve.clone(),
        };
        let v1 = square_class_equal_fp(&s1, &s1, 32, 1).unwrap();
        match v1 {
            EquivVerdict::ProbablyEqual { samples, .. } => assert!(samples >= 32),
            other => panic!("expected ProbablyEqual, got {other:?}"),
        }
        // twist by the square of a quadric
        let qsq = parse("x^2-3*y*z", &v, &fp).unwrap().pow(2);
        let s2 = SquareClass {
            g: g.mul(&qsq).unwrap(),
            line,
            curve,
        };
        let v2 = square_class_equal_fp(&s1, &s2, 32, 1).unwrap();
        assert!(matches!(v2, EquivVerdict::ProbablyEqual { .. }));
    }

    #[test]
    fn twisting_by_a_line_pair_is_detected() {
        let fp = fp101();
        let v = VarSet::xyz();
        // a smooth sextic
        let f = parse("x^6+y^6+z^6+x*y*z^4", &v, &fp).unwrap();
        let line = parse("z", &v, &fp).unwrap();
        let curve = PlaneCurve::new(f).unwrap();
        let g = Poly::one(&fp, &v);
        let s1 = SquareClass {
            g,
            line: line.clone(),
            curve: curve.clone(),
        };
        let gx =
            parse("x", &v, &fp).unwrap().mul(&line).unwrap();
        let s2 = SquareClass {
            g: gx,
            line,
            curve,
        };
        let v2 = square_class_equal_fp(&s1, &s2, 20, 1).unwrap();
        assert!(matches!(v2, EquivVerdict::NotEqual { .. }));
    }

    #[test]
    fn rat_field_square_examples() {
        let v = VarSet::xyz();
        let q = Rationals;
        let p1 = parse("x^4*y^2", &v, &q).unwrap();
        assert!(is_square_in_ratfield(&p1, 2).unwrap());
        let p2 = parse("x^5*y", &v, &q).unwrap();
        assert!(!is_square_in_ratfield(&p2, 2).unwrap());
        let cert = p2.mul(&parse("x*y", &v, &q).unwrap()).unwrap();
        assert!(is_square_in_ratfield(&cert, 2).unwrap());
        let f = parse("x^2+y^2+z^2-2*x*y-2*x*z-2*y*z", &v, &q).unwrap();
        assert!(is_square_in_ratfield(&f.mul(&f).unwrap(), 2).unwrap());
    }
}
