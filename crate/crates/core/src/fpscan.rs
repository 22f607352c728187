//! Fast exhaustive scans over the projective plane P^2(F_p).
//!
//! Points are enumerated chart by chart, [1:y:z], then [0:1:z], then
//! [0:0:1]. The inner loop over z runs Horner on per-slice univariate
//! coefficient tables, so a full scan of one polynomial costs about
//! deg(f) multiplications per point.

use std::ops::ControlFlow;

use crate::field::{Field, PrimeField};
use crate::poly::Poly;

/// Number of points of P^2(F_p).
pub fn p2_size(p: u64) -> u64 {
    p * p + p + 1
}

/// Compiled polynomial for repeated evaluation over F_p in x, y, z.
#[derive(Debug, Clone)]
pub struct FpPoly {
    terms: Vec<([u16; 3], u64)>,
    deg_z: usize,
    deg_y: usize,
}

impl FpPoly {
    pub fn compile(p: &Poly<PrimeField>) -> Self {
        assert_eq!(p.vars().len(), 3, "scans are specific to x,y,z");
        let mut terms = Vec::with_capacity(p.num_terms());
        let mut deg_z = 0usize;
        let mut deg_y = 0usize;
        for (m, c) in p.terms() {
            terms.push(([m.0[0], m.0[1], m.0[2]], *c));
            deg_z = deg_z.max(m.0[2] as usize);
            deg_y = deg_y.max(m.0[1] as usize);
        }
        FpPoly {
            terms,
            deg_z,
            deg_y,
        }
    }

    /// Coefficients in z of `f(x0, y0, z)`.
    fn z_slice(&self, fp: &PrimeField, x0: u64, y0: u64, buf: &mut [u64], pow_y: &[u64]) {
        for b in buf.iter_mut() {
            *b = 0;
        }
        for ([ex, ey, ez], c) in &self.terms {
            let mut v = *c;
            if *ex > 0 {
                if x0 == 0 {
                    continue;
                }
                // x0 is always 0 or 1 in chart enumeration
                debug_assert_eq!(x0, 1);
            }
            v = fp.mul(&v, &pow_y[*ey as usize]);
            buf[*ez as usize] = fp.add(&buf[*ez as usize], &v);
        }
        let _ = y0;
    }

    pub fn eval(&self, fp: &PrimeField, pt: &[u64; 3]) -> u64 {
        let mut acc = 0u64;
        for ([ex, ey, ez], c) in &self.terms {
            let mut v = *c;
            v = fp.mul(&v, &pow(fp, pt[0], *ex));
            v = fp.mul(&v, &pow(fp, pt[1], *ey));
            v = fp.mul(&v, &pow(fp, pt[2], *ez));
            acc = fp.add(&acc, &v);
        }
        acc
    }
}

fn pow(fp: &PrimeField, b: u64, e: u16) -> u64 {
    fp.pow(&b, e as u64)
}

fn horner(fp: &PrimeField, coeffs: &[u64], z: u64) -> u64 {
    let mut acc = 0u64;
    for c in coeffs.iter().rev() {
        acc = fp.add(&fp.mul(&acc, &z), c);
    }
    acc
}

/// Visit every zero of `f` in P^2(F_p) until the visitor breaks.
pub fn scan_zeros<B>(
    fp: &PrimeField,
    f: &FpPoly,
    mut visit: impl FnMut([u64; 3]) -> ControlFlow<B>,
) -> Option<B> {
    let p = fp.p();
    let mut buf = vec![0u64; f.deg_z + 1];
    let mut pow_y = vec![1u64; f.deg_y + 1];
    // chart [1:y:z]
    for y in 0..p {
        for k in 1..pow_y.len() {
            pow_y[k] = fp.mul(&pow_y[k - 1], &y);
        }
        f.z_slice(fp, 1, y, &mut buf, &pow_y);
        for z in 0..p {
            if horner(fp, &buf, z) == 0 {
                if let ControlFlow::Break(b) = visit([1, y, z]) {
                    return Some(b);
                }
            }
        }
    }
    // chart [0:1:z]
    for k in 1..pow_y.len() {
        pow_y[k] = 1;
    }
    f.z_slice(fp, 0, 1, &mut buf, &pow_y);
    for z in 0..p {
        if horner(fp, &buf, z) == 0 {
            if let ControlFlow::Break(b) = visit([0, 1, z]) {
                return Some(b);
            }
        }
    }
    // point [0:0:1]
    if f.eval(fp, &[0, 0, 1]) == 0 {
        if let ControlFlow::Break(b) = visit([0, 0, 1]) {
            return Some(b);
        }
    }
    None
}

/// Visit every point of P^2(F_p) until the visitor breaks.
pub fn scan_all<B>(fp: &PrimeField, mut visit: impl FnMut([u64; 3]) -> ControlFlow<B>) -> Option<B> {
    let p = fp.p();
    for y in 0..p {
        for z in 0..p {
            if let ControlFlow::Break(b) = visit([1, y, z]) {
                return Some(b);
            }
        }
    }
    for z in 0..p {
        if let ControlFlow::Break(b) = visit([0, 1, z]) {
            return Some(b);
        }
    }
    if let ControlFlow::Break(b) = visit([0, 0, 1]) {
        return Some(b);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::poly::VarSet;

    #[test]
    fn conic_zero_count_matches_brute_force() {
        let fp = PrimeField::new(101).unwrap();
        let v = VarSet::xyz();
        let f = parse("x^2+y^2-z^2", &v, &fp).unwrap();
        let c = FpPoly::compile(&f);
        let mut fast = 0u64;
        scan_zeros::<()>(&fp, &c, |_| {
            fast += 1;
            ControlFlow::Continue(())
        });
        let mut brute = 0u64;
        scan_all::<()>(&fp, |pt| {
            let val = f
                .eval(&[pt[0], pt[1], pt[2]])
                .unwrap();
            if val == 0 {
                brute += 1;
            }
            ControlFlow::Continue(())
        });
        assert_eq!(fast, brute);
        // smooth conic with a rational point has p+1 points
        assert_eq!(fast, 102);
    }
}
