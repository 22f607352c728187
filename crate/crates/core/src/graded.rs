//! Graded symmetric matrices `q: G -> G^v(delta)` for split `G = ⊕ O(a_i)`,
//! their discriminant curves, corank loci, and smoothness certification.
//!
//! Entry (i, j) of a validated matrix is homogeneous of degree
//! `delta - a_i - a_j`; a negative required degree forces the zero entry.
//! Chart-level models (outputs of quadric reduction, the HPT diagonal form)
//! carry the same data with `chart = true` and skip the degree bookkeeping.

use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::fpscan::{scan_zeros, FpPoly};
use crate::gcd::gcd_poly;
use crate::linalg;
use crate::matrix::{resultant, PolyMatrix};
use crate::modred::{matrix_mod_p, poly_mod_p};
use crate::poly::Poly;

/// Default primes for exhaustive plane scans: small enough to enumerate,
/// large enough to dodge accidental vanishing.
pub const DEFAULT_SCAN_PRIMES: [u64; 3] = [101, 211, 32003];

#[derive(Debug, Clone, PartialEq)]
pub struct GradedSymMatrix<F: Field> {
    pub degrees: Vec<i64>,
    pub twist: i64,
    pub mat: PolyMatrix<F>,
    /// Chart-level models keep degrees/twist as bookkeeping hints only.
    pub chart: bool,
}

impl<F: Field> GradedSymMatrix<F> {
    /// Validate the graded structure: symmetry, entry degrees, nonzero
    /// determinant.
    pub fn validate(degrees: Vec<i64>, twist: i64, mat: PolyMatrix<F>) -> Result<Self> {
        if mat.rows() != mat.cols() || mat.rows() != degrees.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees for a {}x{} matrix",
                degrees.len(),
                mat.rows(),
                mat.cols()
            )));
        }
        for i in 0..mat.rows() {
            for j in 0..mat.cols() {
                if mat.get(i, j) != mat.get(j, i) {
                    return Err(Error::Asymmetric(i, j));
                }
            }
        }
        for i in 0..mat.rows() {
            for j in 0..mat.cols() {
                let required = twist - degrees[i] - degrees[j];
                let e = mat.get(i, j);
                if e.is_zero() {
                    continue;
                }
                if required < 0 {
                    return Err(Error::WrongEntryDegree {
                        i,
                        j,
                        expected: required,
                        found: format!("{:?}", e.degree()),
                    });
                }
                if !e.is_homogeneous() || e.degree() != Some(required) {
                    return Err(Error::WrongEntryDegree {
                        i,
                        j,
                        expected: required,
                        found: format!("{:?}", e.degree()),
                    });
                }
            }
        }
        let q = GradedSymMatrix {
            degrees,
            twist,
            mat,
            chart: false,
        };
        if q.mat.det()?.is_zero() {
            return Err(Error::ZeroDeterminant);
        }
        Ok(q)
    }

    /// Chart-level constructor: symmetry and a nonzero determinant only.
    pub fn chart_model(degrees: Vec<i64>, twist: i64, mat: PolyMatrix<F>) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::DimensionMismatch("chart model must be square".into()));
        }
        for i in 0..mat.rows() {
            for j in (i + 1)..mat.cols() {
                if mat.get(i, j) != mat.get(j, i) {
                    return Err(Error::Asymmetric(i, j));
                }
            }
        }
        if mat.det()?.is_zero() {
            return Err(Error::ZeroDeterminant);
        }
        Ok(GradedSymMatrix {
            degrees,
            twist,
            mat,
            chart: true,
        })
    }

    pub fn size(&self) -> usize {
        self.mat.rows()
    }

    /// Expected discriminant degree `-2 Σ a_i + m δ` for graded models.
    pub fn expected_disc_degree(&self) -> i64 {
        let s: i64 = self.degrees.iter().sum();
        -2 * s + (self.size() as i64) * self.twist
    }

    /// The discriminant curve `det(q) = 0`.
    pub fn discriminant(&self) -> Result<PlaneCurve<F>> {
        let f = self.mat.det()?;
        if f.is_zero() {
            return Err(Error::ZeroDeterminant);
        }
        let degree = f.degree().expect("nonzero");
        if !self.chart {
            debug_assert_eq!(degree, self.expected_disc_degree());
        }
        Ok(PlaneCurve {
            f,
            degree,
            smooth: None,
        })
    }

    /// m - rank of the matrix evaluated at the point.
    pub fn corank_at(&self, point: &[F::Elem]) -> Result<usize> {
        if point.iter().all(|c| self.mat.field().is_zero(c)) {
            return Err(Error::OutOfRange("corank at the zero vector".into()));
        }
        Ok(self.size() - self.mat.rank_at_point(point)?)
    }
}

/// Outcome of the corank-two emptiness scan. One-sided: a hit is exact,
/// emptiness is evidence over the scanned primes only.
#[derive(Debug, Clone, PartialEq)]
pub enum Corank2Verdict<E> {
    NonemptyAt(Vec<E>),
    ProbablyEmpty {
        primes_scanned: Vec<u64>,
        primes_skipped: Vec<u64>,
    },
}

impl GradedSymMatrix<PrimeField> {
    /// Exhaustively scan P^2(F_p) for points of corank at least 2.
    pub fn corank2_empty(&self, _seed: u64) -> Result<Corank2Verdict<u64>> {
        let fp = *self.mat.field();
        let det = self.mat.det()?;
        let compiled = FpPoly::compile(&det);
        let hit = scan_corank2(&fp, &compiled, &self.mat);
        match hit {
            Some(pt) => Ok(Corank2Verdict::NonemptyAt(pt.to_vec())),
            None => Ok(Corank2Verdict::ProbablyEmpty {
                primes_scanned: vec![fp.p()],
                primes_skipped: vec![],
            }),
        }
    }
}

impl GradedSymMatrix<Rationals> {
    /// Scan reductions mod each prime; a modular hit is rechecked exactly
    /// over Q via the symmetric lift before it counts.
    pub fn corank2_empty(
        &self,
        primes: &[u64],
        _seed: u64,
    ) -> Result<Corank2Verdict<num_rational::BigRational>> {
        let mut scanned = Vec::new();
        let mut skipped = Vec::new();
        for &p in primes {
            let fp = match PrimeField::new(p) {
                Ok(f) => f,
                Err(_) => {
                    skipped.push(p);
                    continue;
                }
            };
            let mp = match matrix_mod_p(&self.mat, &fp) {
                Ok(m) => m,
                Err(_) => {
                    skipped.push(p);
                    continue;
                }
            };
            let det = mp.det()?;
            if det.is_zero() {
                skipped.push(p);
                continue;
            }
            let compiled = FpPoly::compile(&det);
            if let Some(pt) = scan_corank2(&fp, &compiled, &mp) {
                // symmetric lift, exact recheck over Q
                let q = Rationals;
                let lift: Vec<num_rational::BigRational> = pt
                    .iter()
                    .map(|&c| {
                        let half = p / 2;
                        if c > half {
                            q.from_i64(c as i64 - p as i64)
                        } else {
                            q.from_i64(c as i64)
                        }
                    })
                    .collect();
                let rank = self.mat.rank_at_point(&lift)?;
                if self.size() - rank >= 2 {
                    return Ok(Corank2Verdict::NonemptyAt(lift));
                }
            }
            scanned.push(p);
        }
        Ok(Corank2Verdict::ProbablyEmpty {
            primes_scanned: scanned,
            primes_skipped: skipped,
        })
    }
}

fn scan_corank2(
    fp: &PrimeField,
    det: &FpPoly,
    mat: &PolyMatrix<PrimeField>,
) -> Option<[u64; 3]> {
    let m = mat.rows();
    scan_zeros(fp, det, |pt| {
        let point = [pt[0], pt[1], pt[2]];
        let rank = mat
            .rank_at_point(&point)
            .expect("evaluation over the same field");
        if m - rank >= 2 {
            ControlFlow::Break(pt)
        } else {
            ControlFlow::Continue(())
        }
    })
}

/// Verdict of the smoothness certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothVerdict<E> {
    Proven,
    RefutedAt(Vec<E>),
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCurve<F: Field> {
    pub f: Poly<F>,
    pub degree: i64,
    pub smooth: Option<SmoothVerdict<F::Elem>>,
}

impl<F: Field> PlaneCurve<F> {
    pub fn new(f: Poly<F>) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroDeterminant);
        }
        if !f.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let degree = f.degree().unwrap();
        Ok(PlaneCurve {
            f,
            degree,
            smooth: None,
        })
    }
}

/// Deterministic emptiness check of the singular system via bivariate
/// resultants after (up to 5) linear coordinate changes. A constant gcd of
/// the two resultants proves smoothness; a surviving common root is chased
/// down by back-substitution to an exact witness when one is rational.
fn smoothness_generic<F: Field>(
    curve: &PlaneCurve<F>,
    seed: u64,
    mut rational_root_hunt: impl FnMut(&Poly<F>) -> Vec<F::Elem>,
) -> Result<SmoothVerdict<F::Elem>> {
    let f = &curve.f;
    let field = f.field().clone();
    let vars = f.vars().clone();
    if vars.len() != 3 {
        return Err(Error::Unsupported("smoothness needs x,y,z".into()));
    }
    if let Some(p) = field.characteristic() {
        if curve.degree % (p as i64) == 0 {
            return Err(Error::CharacteristicTooSmall {
                needed: curve.degree,
                have: p,
            });
        }
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    'attempt: for attempt in 0..5 {
        let t: linalg::Mat<F> = if attempt == 0 {
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| if i == j { field.one() } else { field.zero() })
                        .collect()
                })
                .collect()
        } else {
            linalg::random_invertible(&field, 3, &mut rng)
        };
        // f'(v) = f(T v)
        let images: Vec<Poly<F>> = (0..3)
            .map(|i| {
                let mut acc = Poly::zero(&field, &vars);
                for j in 0..3 {
                    let term = Poly::var(&field, &vars, j).scalar_mul(&t[i][j]);
                    acc = acc.add(&term).unwrap();
                }
                acc
            })
            .collect();
        let fprime = compose_linear(f, &images);
        let partials: Vec<Poly<F>> = (0..3).map(|v| fprime.derivative(v)).collect();
        // z-leading coefficients must be nonzero constants
        for g in &partials {
            let dz = g.degree().unwrap_or(0);
            // a pure z^deg term means the z-leading coefficient is constant
            let has_lead = g
                .terms()
                .any(|(m, _)| m.0[2] as i64 == dz && m.degree() == dz);
            if !has_lead {
                continue 'attempt;
            }
        }
        let r1 = resultant(&partials[0], &partials[1], 2)?;
        let r2 = resultant(&partials[0], &partials[2], 2)?;
        if r1.is_zero() || r2.is_zero() {
            continue 'attempt;
        }
        let g = gcd_poly(&r1, &r2)?;
        if g.is_constant() {
            return Ok(SmoothVerdict::Proven);
        }
        // chase rational roots of the gcd (as a univariate in x at y = 1,
        // plus the point at infinity (1:0))
        let mut xy_candidates: Vec<(F::Elem, F::Elem)> = Vec::new();
        let g_aff = g.dehomogenize(1);
        for r in rational_root_hunt(&g_aff) {
            xy_candidates.push((r, field.one()));
        }
        // (1:0) is a root iff y divides g
        if g.var_multiplicity(1) > 0 {
            xy_candidates.push((field.one(), field.zero()));
        }
        for (x0, y0) in xy_candidates {
            let mut univ = partials[0].clone();
            univ = univ.substitute(0, &x0);
            univ = univ.substitute(1, &y0);
            for z0 in rational_root_hunt(&univ) {
                let pt = vec![x0.clone(), y0.clone(), z0.clone()];
                let all_zero = partials.iter().all(|p| {
                    field.is_zero(&p.eval(&pt).expect("arity"))
                });
                if all_zero && !pt.iter().all(|c| field.is_zero(c)) {
                    // map back through T
                    let orig: Vec<F::Elem> = (0..3)
                        .map(|i| {
                            let mut acc = field.zero();
                            for j in 0..3 {
                                acc = field.add(&acc, &field.mul(&t[i][j], &pt[j]));
                            }
                            acc
                        })
                        .collect();
                    return Ok(SmoothVerdict::RefutedAt(orig));
                }
            }
        }
        // gcd persists but no rational witness: try fresh coordinates
    }
    Ok(SmoothVerdict::Unknown(
        "resultant gcd persisted without a rational witness after 5 coordinate changes".into(),
    ))
}

fn compose_linear<F: Field>(f: &Poly<F>, images: &[Poly<F>]) -> Poly<F> {
    let field = f.field().clone();
    let vars = f.vars().clone();
    let mut acc = Poly::zero(&field, &vars);
    for (m, c) in f.terms() {
        let mut t = Poly::constant(&field, &vars, c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&images[i].pow(e as u32)).unwrap();
            }
        }
        acc = acc.add(&t).unwrap();
    }
    acc
}

/// All roots of a univariate-in-one-variable polynomial over F_p, by scan.
fn fp_roots(p: &Poly<PrimeField>) -> Vec<u64> {
    let fp = *p.field();
    let eff = p.effective_vars();
    if p.is_zero() {
        // identically zero after substitution: every value qualifies
        return (0..fp.p()).collect();
    }
    if eff.is_empty() {
        return Vec::new();
    }
    let v = eff[0];
    let mut roots = Vec::new();
    for c in 0..fp.p() {
        let val = p.substitute(v, &c);
        if val.is_zero() {
            roots.push(c);
        }
    }
    roots
}

/// Rational roots of a univariate rational polynomial, found through
/// root hunting modulo two primes and exact lift verification. Complete
/// enough for witness hunting; misses only force an Unknown verdict.
fn q_roots(p: &Poly<Rationals>) -> Vec<num_rational::BigRational> {
    let q = Rationals;
    let candidates: Vec<num_rational::BigRational> =
        (-32i64..=32).map(|c| q.from_i64(c)).collect();
    if p.is_zero() {
        return candidates;
    }
    let eff = p.effective_vars();
    if eff.is_empty() {
        return Vec::new();
    }
    let v = eff[0];
    candidates
        .into_iter()
        .filter(|c| p.substitute(v, c).is_zero())
        .collect()
}

pub fn smoothness_fp(
    curve: &PlaneCurve<PrimeField>,
    seed: u64,
) -> Result<SmoothVerdict<u64>> {
    smoothness_generic(curve, seed, |p| fp_roots(p))
}

pub fn smoothness_q(
    curve: &PlaneCurve<Rationals>,
    seed: u64,
) -> Result<SmoothVerdict<num_rational::BigRational>> {
    // quick witness pass: scan reductions mod small primes and lift
    for p in [101u64, 211] {
        let fp = PrimeField::new(p).unwrap();
        let Ok(fmod) = poly_mod_p(&curve.f, &fp) else {
            continue;
        };
        if fmod.is_zero() {
            continue;
        }
        let partials: Vec<_> = (0..3).map(|v| fmod.derivative(v)).collect();
        if partials.iter().all(|g| g.is_zero()) {
            continue;
        }
        let first = partials.iter().find(|g| !g.is_zero()).unwrap();
        let compiled = FpPoly::compile(first);
        let q = Rationals;
        let hit = scan_zeros(&fp, &compiled, |pt| {
            let point = [pt[0], pt[1], pt[2]];
            let all = partials
                .iter()
                .all(|g| g.eval(&point).expect("arity") == 0);
            if all {
                ControlFlow::Break(pt)
            } else {
                ControlFlow::Continue(())
            }
        });
        if let Some(pt) = hit {
            let lift: Vec<num_rational::BigRational> = pt
                .iter()
                .map(|&c| {
                    let half = p / 2;
                    if c > half {
                        q.from_i64(c as i64 - p as i64)
                    } else {
                        q.from_i64(c as i64)
                    }
                })
                .collect();
            let exact = (0..3)
                .map(|v| curve.f.derivative(v))
                .all(|g| Rationals.is_zero(&g.eval(&lift).expect("arity")));
            if exact {
                return Ok(SmoothVerdict::RefutedAt(lift));
            }
        }
    }
    smoothness_generic(curve, seed, |p| q_roots(p))
}

/// Compute (and cache) the smoothness verdict on a curve over F_p.
pub fn certify_smoothness_fp(curve: &mut PlaneCurve<PrimeField>, seed: u64) -> Result<()> {
    if curve.smooth.is_none() {
        let v = smoothness_fp(curve, seed)?;
        curve.smooth = Some(v);
    }
    Ok(())
}

pub fn certify_smoothness_q(curve: &mut PlaneCurve<Rationals>, seed: u64) -> Result<()> {
    if curve.smooth.is_none() {
        let v = smoothness_q(curve, seed)?;
        curve.smooth = Some(v);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::poly::VarSet;

    fn fermat_sextic() -> PlaneCurve<Rationals> {
        let v = VarSet::xyz();
        PlaneCurve::new(parse("x^6+y^6+z^6", &v, &Rationals).unwrap()).unwrap()
    }

    #[test]
    fn validation_accepts_quadric_matrices() {
        let v = VarSet::xyz();
        let q = Rationals;
        let quadrics = ["x^2+y*z", "x*y", "z^2", "x*y", "y^2-x*z", "x^2", "z^2", "x^2", "y^2"];
        let mat = PolyMatrix::new(
            &q,
            &v,
            3,
            3,
            quadrics
                .iter()
                .map(|s| parse(s, &v, &q).unwrap())
                .collect(),
        )
        .unwrap();
        let g = GradedSymMatrix::validate(vec![-1, -1, -1], 0, mat).unwrap();
        assert_eq!(g.expected_disc_degree(), 6);
    }

    #[test]
    fn validation_rejects_wrong_degree() {
        let v = VarSet::xyz();
        let q = Rationals;
        // degrees (-1, 0), delta = 0: off-diagonal required degree 1,
        // a quadric there must be rejected
        let entries = vec![
            parse("x^2", &v, &q).unwrap(),
            parse("y^2", &v, &q).unwrap(),
            parse("y^2", &v, &q).unwrap(),
            parse("1", &v, &q).unwrap(),
        ];
        let mat = PolyMatrix::new(&q, &v, 2, 2, entries).unwrap();
        match GradedSymMatrix::validate(vec![-1, 0], 0, mat) {
            Err(Error::WrongEntryDegree { i: 0, j: 1, expected: 1, .. }) => {}
            other => panic!("expected degree rejection, got {other:?}"),
        }
    }

    #[test]
    fn smoothness_of_fermat_sextic() {
        let mut c = fermat_sextic();
        certify_smoothness_q(&mut c, 1).unwrap();
        assert_eq!(c.smooth, Some(SmoothVerdict::Proven));
    }

    #[test]
    fn singular_product_curve_is_refuted() {
        let v = VarSet::xyz();
        let f = parse("x^2+y^2+z^2-2*x*y-2*x*z-2*y*z", &v, &Rationals).unwrap();
        let g = parse("x^2*y^2", &v, &Rationals)
            .unwrap()
            .mul(&f)
            .unwrap();
        let mut c = PlaneCurve::new(g).unwrap();
        certify_smoothness_q(&mut c, 1).unwrap();
        match &c.smooth {
            Some(SmoothVerdict::RefutedAt(pt)) => {
                let q = Rationals;
                let val = c.f.eval(pt).unwrap();
                assert!(q.is_zero(&val));
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }
}
