//! Sparse multivariate polynomials over an exact field.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under the graded-lex
//! order, so a polynomial is canonical by construction: no zero coefficients
//! are ever stored and printing just walks the map in descending order.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::Field;

/// An ordered list of variable names, shared by reference.
#[derive(Debug, Clone)]
pub struct VarSet(Arc<Vec<String>>);

impl VarSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Self {
        VarSet(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    /// The default projective-plane coordinates.
    pub fn xyz() -> Self {
        VarSet::new(vec!["x", "y", "z"])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for VarSet {}

/// Exponent vector with the graded-lex order (degree first, then lex).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub SmallVec<[u16; 6]>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial(smallvec::smallvec![0; nvars])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise division; `None` if any exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}
impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in canonical form.
#[derive(Debug, Clone)]
pub struct Poly<F: Field> {
    field: F,
    vars: VarSet,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars && self.terms == other.terms
    }
}

impl<F: Field> Poly<F> {
    pub fn zero(field: &F, vars: &VarSet) -> Self {
        Poly {
            field: field.clone(),
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, vars: &VarSet, c: F::Elem) -> Self {
        let mut p = Poly::zero(field, vars);
        if !field.is_zero(&c) {
            p.terms.insert(Monomial::unit(vars.len()), c);
        }
        p
    }

    pub fn one(field: &F, vars: &VarSet) -> Self {
        Poly::constant(field, vars, field.one())
    }

    pub fn from_i64(field: &F, vars: &VarSet, n: i64) -> Self {
        Poly::constant(field, vars, field.from_i64(n))
    }

    /// The variable with index `i`.
    pub fn var(field: &F, vars: &VarSet, i: usize) -> Self {
        let mut m = Monomial::unit(vars.len());
        m.0[i] = 1;
        let mut p = Poly::zero(field, vars);
        p.terms.insert(m, field.one());
        p
    }

    /// A single term `c * x^exps`.
    pub fn term(field: &F, vars: &VarSet, exps: &[u16], c: F::Elem) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Poly::zero(field, vars);
        if !field.is_zero(&c) {
            p.terms.insert(Monomial(SmallVec::from_slice(exps)), c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().degree() == 0)
    }

    /// The constant value of a constant polynomial.
    pub fn constant_value(&self) -> Option<F::Elem> {
        if self.is_zero() {
            return Some(self.field.zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    /// Total degree; `None` encodes the degree of the zero polynomial (-∞).
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<F::Elem> {
        self.leading().map(|(_, c)| c.clone())
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        Ok(())
    }

    fn insert_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &c);
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), self.field.neg(c));
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let mut out = Poly::zero(&self.field, &self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &F::Elem) -> Self {
        let mut out = Poly::zero(&self.field, &self.vars);
        for (m, a) in &self.terms {
            out.insert_term(m.clone(), self.field.mul(a, c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one(&self.field, &self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            e >>= 1;
        }
        acc
    }

    /// Exact substitution at a point; the point length must match the
    /// variable count.
    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.vars.len() {
            return Err(Error::ArityMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        // power tables per variable up to the maximal exponent present
        let mut max_e = vec![0u16; self.vars.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                max_e[i] = max_e[i].max(e);
            }
        }
        let pows: Vec<Vec<F::Elem>> = point
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut t = Vec::with_capacity(max_e[i] as usize + 1);
                t.push(self.field.one());
                for k in 1..=max_e[i] as usize {
                    let prev = t[k - 1].clone();
                    t.push(self.field.mul(&prev, v));
                }
                t
            })
            .collect();
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = self.field.mul(&t, &pows[i][e as usize]);
                }
            }
            acc = self.field.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Poly::zero(&self.field, &self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] = e - 1;
            out.insert_term(m2, self.field.mul(c, &self.field.from_i64(e as i64)));
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut deg = None;
        for m in self.terms.keys() {
            match deg {
                None => deg = Some(m.degree()),
                Some(d) => {
                    if m.degree() != d {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Substitute a constant for one variable.
    pub fn substitute(&self, var: usize, value: &F::Elem) -> Self {
        let mut out = Poly::zero(&self.field, &self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut m2 = m.clone();
            m2.0[var] = 0;
            let factor = self.field.pow(value, e as u64);
            out.insert_term(m2, self.field.mul(c, &factor));
        }
        out
    }

    /// Set the given variable to 1.
    pub fn dehomogenize(&self, var: usize) -> Self {
        self.substitute(var, &self.field.one())
    }

    /// Pad every term with powers of `var` up to total degree `target`.
    pub fn homogenize(&self, var: usize, target: i64) -> Result<Self> {
        let mut out = Poly::zero(&self.field, &self.vars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let d = m.degree() - m.0[var] as i64;
            let need = target - d;
            if need < 0 {
                return Err(Error::DegreeTooSmall {
                    target,
                    present: d,
                });
            }
            m2.0[var] = u16::try_from(need).map_err(|_| Error::DegreeTooSmall {
                target,
                present: d,
            })?;
            out.insert_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Indices of the variables that actually occur.
    pub fn effective_vars(&self) -> Vec<usize> {
        let mut seen = vec![false; self.vars.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(i, &s)| if s { Some(i) } else { None })
            .collect()
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> Option<i64> {
        self.terms
            .keys()
            .map(|m| m.0[var] as i64)
            .max()
            .filter(|_| !self.is_zero())
    }

    /// Largest k with `var^k` dividing the polynomial (0 for the zero poly).
    pub fn var_multiplicity(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m.0[var]).min().unwrap_or(0)
    }

    /// Divide by `var^k`; panics if not divisible.
    pub fn shift_down(&self, var: usize, k: u16) -> Self {
        let mut out = Poly::zero(&self.field, &self.vars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            assert!(m2.0[var] >= k, "not divisible by the variable power");
            m2.0[var] -= k;
            out.insert_term(m2, c.clone());
        }
        out
    }

    /// Exact multivariate division: `Some(q)` with `self = q * d` or `None`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let field = self.field.clone();
        let mut rem = self.clone();
        let mut quo = Poly::zero(&field, &self.vars);
        let (dm, dc) = {
            let (m, c) = d.leading().unwrap();
            (m.clone(), c.clone())
        };
        let dc_inv = field.inv(&dc)?;
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (m.clone(), c.clone())
            };
            let qm = rm.div(&dm)?;
            let qc = field.mul(&rc, &dc_inv);
            let t = Poly::term(&field, &self.vars, &qm.0, qc);
            quo = quo.add(&t).unwrap();
            rem = rem.sub(&t.mul(d).unwrap()).unwrap();
        }
        Some(quo)
    }

    /// Divide all coefficients so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => {
                let inv = self.field.inv(&c).expect("nonzero leading coefficient");
                self.scalar_mul(&inv)
            }
        }
    }

    /// Random polynomial, homogeneous of the given degree, small coefficients.
    pub fn random_homogeneous<R: Rng>(
        field: &F,
        vars: &VarSet,
        degree: i64,
        rng: &mut R,
    ) -> Self {
        let mut out = Poly::zero(field, vars);
        if degree < 0 {
            return out;
        }
        for exps in monomials_of_degree(vars.len(), degree as u16) {
            out.insert_term(Monomial(exps), field.random_small(rng));
        }
        out
    }
}

/// All exponent vectors of the given total degree.
pub fn monomials_of_degree(nvars: usize, degree: u16) -> Vec<SmallVec<[u16; 6]>> {
    let mut out = Vec::new();
    let mut cur: SmallVec<[u16; 6]> = smallvec::smallvec![0; nvars];
    fn rec(
        nvars: usize,
        pos: usize,
        left: u16,
        cur: &mut SmallVec<[u16; 6]>,
        out: &mut Vec<SmallVec<[u16; 6]>>,
    ) {
        if pos + 1 == nvars {
            cur[pos] = left;
            out.push(cur.clone());
            cur[pos] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(nvars, pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    if nvars == 0 {
        return out;
    }
    rec(nvars, 0, degree, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q() -> Rationals {
        Rationals
    }

    #[test]
    fn arithmetic_identities() {
        let f = q();
        let v = VarSet::xyz();
        let x = Poly::var(&f, &v, 0);
        let y = Poly::var(&f, &v, 1);
        // (x+y)(x-y) = x^2 - y^2
        let lhs = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        let rhs = x.pow(2).sub(&y.pow(2)).unwrap();
        assert_eq!(lhs, rhs);
        // p * 0 = 0
        let z = Poly::zero(&f, &v);
        assert!(lhs.mul(&z).unwrap().is_zero());
    }

    #[test]
    fn eval_and_derivative() {
        let f = q();
        let v = VarSet::xyz();
        let x = Poly::var(&f, &v, 0);
        let y = Poly::var(&f, &v, 1);
        let p = x.pow(2).mul(&y).unwrap(); // x^2 y
        let dx = p.derivative(0);
        let expected = x.mul(&y).unwrap().scalar_mul(&f.from_i64(2));
        assert_eq!(dx, expected);
        let val = p
            .eval(&[f.from_i64(3), f.from_i64(2), f.from_i64(0)])
            .unwrap();
        assert_eq!(val, f.from_i64(18));
    }

    #[test]
    fn degree_of_zero_is_minus_infinity_marker() {
        let f = q();
        let v = VarSet::xyz();
        assert_eq!(Poly::zero(&f, &v).degree(), None);
        assert_eq!(Poly::one(&f, &v).degree(), Some(0));
    }

    #[test]
    fn homogenize_round_trip() {
        let f = q();
        let v = VarSet::xyz();
        let x = Poly::var(&f, &v, 0);
        let y = Poly::var(&f, &v, 1);
        // x^2 + y  →  x^2 + y z
        let p = x.pow(2).add(&y).unwrap();
        let h = p.homogenize(2, 2).unwrap();
        let z = Poly::var(&f, &v, 2);
        assert_eq!(h, x.pow(2).add(&y.mul(&z).unwrap()).unwrap());
        assert_eq!(h.dehomogenize(2), p);
        assert!(p.homogenize(2, 1).is_err());
    }

    #[test]
    fn exact_division() {
        let f = PrimeField::new(101).unwrap();
        let v = VarSet::xyz();
        let x = Poly::var(&f, &v, 0);
        let y = Poly::var(&f, &v, 1);
        let a = x.add(&y).unwrap();
        let b = x.sub(&y).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.div_exact(&x.pow(3)).is_none());
    }

    #[test]
    fn field_mismatch_is_rejected() {
        let v = VarSet::xyz();
        let a = Poly::one(&PrimeField::new(101).unwrap(), &v);
        let b = Poly::one(&PrimeField::new(211).unwrap(), &v);
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch)));
    }
}
