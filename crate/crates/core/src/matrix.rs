//! Matrices over the polynomial ring: fraction-free determinants, minors,
//! generic rank, and kernels over the rational-function field.
//!
//! Kernels of graded matrices are searched degree by degree so the basis
//! columns come out homogeneous of minimal twist; the Cramer construction
//! (maximal minors) is the fallback and also bounds the search.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gcd::gcd_many;
use crate::linalg;
use crate::poly::{monomials_of_degree, Monomial, Poly, VarSet};

pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix<F: Field> {
    field: F,
    vars: VarSet,
    rows: usize,
    cols: usize,
    entries: Vec<Poly<F>>,
}

impl<F: Field> PolyMatrix<F> {
    pub fn new(field: &F, vars: &VarSet, rows: usize, cols: usize, entries: Vec<Poly<F>>) -> Result<Self> {
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(Error::DimensionMismatch(format!(
                "dimensions capped at {MAX_DIM}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if e.field() != field {
                return Err(Error::FieldMismatch);
            }
            if e.vars() != vars {
                return Err(Error::VariableMismatch);
            }
        }
        Ok(PolyMatrix {
            field: field.clone(),
            vars: vars.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        field: &F,
        vars: &VarSet,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Poly<F>,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix::new(field, vars, rows, cols, entries).expect("from_fn entries consistent")
    }

    pub fn zero(field: &F, vars: &VarSet, rows: usize, cols: usize) -> Self {
        PolyMatrix::from_fn(field, vars, rows, cols, |_, _| Poly::zero(field, vars))
    }

    pub fn identity(field: &F, vars: &VarSet, n: usize) -> Self {
        PolyMatrix::from_fn(field, vars, n, n, |i, j| {
            if i == j {
                Poly::one(field, vars)
            } else {
                Poly::zero(field, vars)
            }
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn vars(&self) -> &VarSet {
        &self.vars
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<F> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<F>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly<F>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> Self {
        PolyMatrix::from_fn(&self.field, &self.vars, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix add".into()));
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            entries.push(a.add(b)?);
        }
        PolyMatrix::new(&self.field, &self.vars, self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sub".into()));
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            entries.push(a.sub(b)?);
        }
        PolyMatrix::new(&self.field, &self.vars, self.rows, self.cols, entries)
    }

    pub fn scale(&self, c: &Poly<F>) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for a in &self.entries {
            entries.push(a.mul(c)?);
        }
        PolyMatrix::new(&self.field, &self.vars, self.rows, self.cols, entries)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zero(&self.field, &self.vars, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(&self.field, &self.vars);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `P^T * self * P`.
    pub fn congruence(&self, p: &PolyMatrix<F>) -> Result<Self> {
        if self.rows != self.cols || p.rows != self.rows {
            return Err(Error::DimensionMismatch("congruence".into()));
        }
        p.transpose().matmul(self)?.matmul(p)
    }

    /// Congruence by a constant scalar matrix.
    pub fn congruence_const(&self, p: &linalg::Mat<F>) -> Result<Self> {
        let n = self.rows;
        if p.len() != n {
            return Err(Error::DimensionMismatch("congruence_const".into()));
        }
        let pm = PolyMatrix::from_fn(&self.field, &self.vars, n, p[0].len(), |i, j| {
            Poly::constant(&self.field, &self.vars, p[i][j].clone())
        });
        self.congruence(&pm)
    }

    pub fn submatrix(&self, row_ids: &[usize], col_ids: &[usize]) -> Self {
        PolyMatrix::from_fn(
            &self.field,
            &self.vars,
            row_ids.len(),
            col_ids.len(),
            |i, j| self.get(row_ids[i], col_ids[j]).clone(),
        )
    }

    pub fn hconcat(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hconcat".into()));
        }
        Ok(PolyMatrix::from_fn(
            &self.field,
            &self.vars,
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self.get(i, j).clone()
                } else {
                    other.get(i, j - self.cols).clone()
                }
            },
        ))
    }

    /// Exact determinant: cofactor expansion for n ≤ 4, fraction-free
    /// Bareiss elimination with lowest-degree pivoting above that.
    pub fn det(&self) -> Result<Poly<F>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square".into()));
        }
        if self.rows == 0 {
            return Ok(Poly::one(&self.field, &self.vars));
        }
        if self.rows <= 4 {
            return Ok(self.det_cofactor());
        }
        Ok(self.det_bareiss())
    }

    fn det_cofactor(&self) -> Poly<F> {
        fn rec<F: Field>(m: &PolyMatrix<F>, rows: &[usize], cols: &[usize]) -> Poly<F> {
            let field = m.field.clone();
            if rows.len() == 1 {
                return m.get(rows[0], cols[0]).clone();
            }
            let mut acc = Poly::zero(&field, &m.vars);
            let r = rows[0];
            let rest: Vec<usize> = rows[1..].to_vec();
            for (k, &c) in cols.iter().enumerate() {
                let e = m.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &cc)| if i != k { Some(cc) } else { None })
                    .collect();
                let minor = rec(m, &rest, &sub_cols);
                let term = e.mul(&minor).unwrap();
                acc = if k % 2 == 0 {
                    acc.add(&term).unwrap()
                } else {
                    acc.sub(&term).unwrap()
                };
            }
            acc
        }
        let ids: Vec<usize> = (0..self.rows).collect();
        rec(self, &ids, &ids)
    }

    fn det_bareiss(&self) -> Poly<F> {
        let n = self.rows;
        let field = self.field.clone();
        let vars = self.vars.clone();
        let mut w: Vec<Vec<Poly<F>>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = false;
        let mut prev = Poly::one(&field, &vars);
        for k in 0..n {
            // lowest-degree nonzero pivot in the remaining block
            let mut best: Option<(usize, usize, i64)> = None;
            for i in k..n {
                for j in k..n {
                    if let Some(d) = w[i][j].degree() {
                        if best.map_or(true, |(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return Poly::zero(&field, &vars);
            };
            if pi != k {
                w.swap(k, pi);
                sign = !sign;
            }
            if pj != k {
                for row in w.iter_mut() {
                    row.swap(k, pj);
                }
                sign = !sign;
            }
            if k == n - 1 {
                break;
            }
            let pivot = w[k][k].clone();
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let t1 = pivot.mul(&w[i][j]).unwrap();
                    let t2 = w[i][k].mul(&w[k][j]).unwrap();
                    let num = t1.sub(&t2).unwrap();
                    w[i][j] = num
                        .div_exact(&prev)
                        .expect("Bareiss division is exact");
                }
                w[i][k] = Poly::zero(&field, &vars);
            }
            prev = pivot;
        }
        let d = w[n - 1][n - 1].clone();
        if sign {
            d.neg()
        } else {
            d
        }
    }

    /// Determinant of the leading k x k block; the empty minor is 1.
    pub fn principal_minor(&self, k: usize) -> Result<Poly<F>> {
        if k > self.rows.min(self.cols) {
            return Err(Error::OutOfRange(format!(
                "principal minor {k} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let ids: Vec<usize> = (0..k).collect();
        self.submatrix(&ids, &ids).det()
    }

    /// Rank of the scalar matrix obtained by evaluation at a point.
    pub fn rank_at_point(&self, point: &[F::Elem]) -> Result<usize> {
        let mut scalar: linalg::Mat<F> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(self.get(i, j).eval(point)?);
            }
            scalar.push(row);
        }
        Ok(linalg::rank(&self.field, &scalar))
    }

    /// Rank over the fraction field, by fraction-free elimination.
    pub fn generic_rank(&self) -> usize {
        let mut w: Vec<Vec<Poly<F>>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let field = self.field.clone();
        let vars = self.vars.clone();
        let mut prev = Poly::one(&field, &vars);
        let mut k = 0;
        let maxr = self.rows.min(self.cols);
        while k < maxr {
            let mut best: Option<(usize, usize, i64)> = None;
            for i in k..self.rows {
                for j in k..self.cols {
                    if let Some(d) = w[i][j].degree() {
                        if best.map_or(true, |(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            w.swap(k, pi);
            for row in w.iter_mut() {
                row.swap(k, pj);
            }
            let pivot = w[k][k].clone();
            for i in (k + 1)..self.rows {
                for j in (k + 1)..self.cols {
                    let t1 = pivot.mul(&w[i][j]).unwrap();
                    let t2 = w[i][k].mul(&w[k][j]).unwrap();
                    w[i][j] = t1
                        .sub(&t2)
                        .unwrap()
                        .div_exact(&prev)
                        .expect("Bareiss division is exact");
                }
                w[i][k] = Poly::zero(&field, &vars);
            }
            prev = pivot;
            k += 1;
        }
        k
    }

    /// Row and column twists making every nonzero entry homogeneous of
    /// degree `r_i + c_j`; `None` when the matrix is not graded.
    pub fn grading(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        for e in &self.entries {
            if !e.is_homogeneous() {
                return None;
            }
        }
        let mut r: Vec<Option<i64>> = vec![None; self.rows];
        let mut c: Vec<Option<i64>> = vec![None; self.cols];
        loop {
            let mut progress = false;
            // anchor the first unassigned row that has a nonzero entry
            if let Some(i) = (0..self.rows).find(|&i| {
                r[i].is_none() && (0..self.cols).any(|j| !self.get(i, j).is_zero())
            }) {
                if (0..self.cols)
                    .all(|j| self.get(i, j).is_zero() || c[j].is_none())
                {
                    r[i] = Some(0);
                    progress = true;
                }
            }
            // propagate until stable
            let mut changed = true;
            while changed {
                changed = false;
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        let d = match self.get(i, j).degree() {
                            Some(d) => d,
                            None => continue,
                        };
                        match (r[i], c[j]) {
                            (Some(ri), None) => {
                                c[j] = Some(d - ri);
                                changed = true;
                                progress = true;
                            }
                            (None, Some(cj)) => {
                                r[i] = Some(d - cj);
                                changed = true;
                                progress = true;
                            }
                            (Some(ri), Some(cj)) => {
                                if ri + cj != d {
                                    return None;
                                }
                            }
                            (None, None) => {}
                        }
                    }
                }
            }
            if !progress {
                break;
            }
        }
        // zero rows/cols get twist 0
        let r: Vec<i64> = r.into_iter().map(|x| x.unwrap_or(0)).collect();
        let c: Vec<i64> = c.into_iter().map(|x| x.unwrap_or(0)).collect();
        Some((r, c))
    }

    /// Basis of the right kernel over k(vars), denominators cleared.
    ///
    /// Graded matrices get a homogeneous basis of minimal column twists;
    /// anything else falls back to the Cramer (maximal-minor) construction.
    /// The rational view and the cleared polynomial companion share columns.
    pub fn kernel(&self) -> Result<KernelBasis<F>> {
        let rank = self.generic_rank();
        let dim = self.cols - rank;
        if dim == 0 {
            return Ok(KernelBasis {
                rat: RatMatrix::from_polys(&PolyMatrix::zero(&self.field, &self.vars, self.cols, 0)),
                cleared: PolyMatrix::zero(&self.field, &self.vars, self.cols, 0),
            });
        }
        let cramer = self.kernel_cramer(rank)?;
        let cleared = match self.grading() {
            Some((rdeg, cdeg)) => {
                let cap = cramer
                    .columns_twists(&cdeg)
                    .into_iter()
                    .max()
                    .unwrap_or(0);
                match self.kernel_graded(&rdeg, &cdeg, dim, cap)? {
                    Some(k) => k,
                    None => cramer,
                }
            }
            None => cramer,
        };
        debug_assert!(self.matmul(&cleared).unwrap().is_zero());
        Ok(KernelBasis {
            rat: RatMatrix::from_polys(&cleared),
            cleared,
        })
    }

    fn columns_twists(&self, cdeg: &[i64]) -> Vec<i64> {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .filter_map(|i| self.get(i, j).degree().map(|d| d + cdeg[i]))
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }

    fn kernel_cramer(&self, rank: usize) -> Result<PolyMatrix<F>> {
        // independent row set and pivot column set via elimination
        let (row_set, col_set) = self.pivot_sets(rank);
        let others: Vec<usize> = (0..self.cols).filter(|j| !col_set.contains(j)).collect();
        let a = self.submatrix(&row_set, &col_set);
        let d = a.det()?;
        debug_assert!(!d.is_zero());
        let mut cols: Vec<Vec<Poly<F>>> = Vec::new();
        for &q in &others {
            let mut v = vec![Poly::zero(&self.field, &self.vars); self.cols];
            v[q] = d.clone();
            for (i, &p) in col_set.iter().enumerate() {
                // det of a with column i replaced by column q of self
                let mut ai = a.clone();
                for (ri, &row) in row_set.iter().enumerate() {
                    ai.set(ri, i, self.get(row, q).clone());
                }
                v[p] = ai.det()?.neg();
            }
            cols.push(v);
        }
        let mut out = PolyMatrix::zero(&self.field, &self.vars, self.cols, cols.len());
        for (j, v) in cols.into_iter().enumerate() {
            for (i, e) in v.into_iter().enumerate() {
                out.set(i, j, e);
            }
        }
        out = strip_column_content(&out)?;
        Ok(out)
    }

    /// Row/column index sets of a nonsingular rank x rank submatrix.
    fn pivot_sets(&self, rank: usize) -> (Vec<usize>, Vec<usize>) {
        let mut w: Vec<Vec<Poly<F>>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let field = self.field.clone();
        let vars = self.vars.clone();
        let mut rows: Vec<usize> = (0..self.rows).collect();
        let mut cols: Vec<usize> = (0..self.cols).collect();
        let mut prev = Poly::one(&field, &vars);
        for k in 0..rank {
            let mut best: Option<(usize, usize, i64)> = None;
            for i in k..self.rows {
                for j in k..self.cols {
                    if let Some(d) = w[i][j].degree() {
                        if best.map_or(true, |(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let (pi, pj, _) = best.expect("rank many pivots exist");
            w.swap(k, pi);
            rows.swap(k, pi);
            for row in w.iter_mut() {
                row.swap(k, pj);
            }
            cols.swap(k, pj);
            let pivot = w[k][k].clone();
            for i in (k + 1)..self.rows {
                for j in (k + 1)..self.cols {
                    let t1 = pivot.mul(&w[i][j]).unwrap();
                    let t2 = w[i][k].mul(&w[k][j]).unwrap();
                    w[i][j] = t1
                        .sub(&t2)
                        .unwrap()
                        .div_exact(&prev)
                        .expect("Bareiss division is exact");
                }
                w[i][k] = Poly::zero(&field, &vars);
            }
            prev = pivot;
        }
        let mut rs: Vec<usize> = rows[..rank].to_vec();
        let mut cs: Vec<usize> = cols[..rank].to_vec();
        rs.sort_unstable();
        cs.sort_unstable();
        (rs, cs)
    }

    /// Minimal-twist homogeneous kernel search; `None` if the cap is hit
    /// before a full basis is found.
    fn kernel_graded(
        &self,
        rdeg: &[i64],
        cdeg: &[i64],
        dim: usize,
        twist_cap: i64,
    ) -> Result<Option<PolyMatrix<F>>> {
        let field = self.field.clone();
        let vars = self.vars.clone();
        let nv = vars.len();
        let mut collected: Vec<Vec<Poly<F>>> = Vec::new();
        let t0 = cdeg.iter().copied().min().unwrap_or(0);
        for t in t0..=twist_cap {
            if collected.len() == dim {
                break;
            }
            // unknown coefficient layout for a candidate vector of twist t
            let mut layout: Vec<(usize, Vec<Monomial>)> = Vec::new();
            let mut total = 0usize;
            for j in 0..self.cols {
                let d = t - cdeg[j];
                if d < 0 {
                    continue;
                }
                let monos: Vec<Monomial> = monomials_of_degree(nv, d as u16)
                    .into_iter()
                    .map(Monomial)
                    .collect();
                total += monos.len();
                layout.push((j, monos));
            }
            if total == 0 {
                continue;
            }
            // constraint rows: coefficients of M v = 0
            let mut sys: linalg::Mat<F> = Vec::new();
            let mut row_index: std::collections::HashMap<(usize, Monomial), usize> =
                std::collections::HashMap::new();
            let mut ncons = 0usize;
            for i in 0..self.rows {
                let dtot = rdeg[i] + t;
                if dtot < 0 {
                    continue;
                }
                for m in monomials_of_degree(nv, dtot as u16) {
                    row_index.insert((i, Monomial(m)), ncons);
                    ncons += 1;
                }
            }
            sys.resize_with(ncons, || vec![field.zero(); total]);
            let mut col_off = 0usize;
            for (j, monos) in &layout {
                for (mi, mono) in monos.iter().enumerate() {
                    let col = col_off + mi;
                    for i in 0..self.rows {
                        let e = self.get(i, *j);
                        for (em, ec) in e.terms() {
                            let prod = em.mul(mono);
                            if let Some(&ri) = row_index.get(&(i, prod)) {
                                sys[ri][col] = field.add(&sys[ri][col], ec);
                            }
                        }
                    }
                }
                col_off += monos.len();
            }
            let null = linalg::nullspace(&field, &sys);
            for nv_coeffs in null {
                if collected.len() == dim {
                    break;
                }
                // rebuild the polynomial vector
                let mut vec_polys = vec![Poly::zero(&field, &vars); self.cols];
                let mut off = 0usize;
                for (j, monos) in &layout {
                    let mut p = Poly::zero(&field, &vars);
                    for (mi, mono) in monos.iter().enumerate() {
                        let c = &nv_coeffs[off + mi];
                        if !field.is_zero(c) {
                            p = p.add(&Poly::term(&field, &vars, &mono.0, c.clone()))?;
                        }
                    }
                    vec_polys[*j] = p;
                    off += monos.len();
                }
                if vec_polys.iter().all(|p| p.is_zero()) {
                    continue;
                }
                // accept only if the fraction-field span grows
                let mut cand = collected.clone();
                cand.push(vec_polys.clone());
                let cand_mat = cols_to_matrix(&field, &vars, self.cols, &cand);
                if cand_mat.generic_rank() == cand.len() {
                    collected.push(vec_polys);
                }
            }
        }
        if collected.len() < dim {
            return Ok(None);
        }
        let mut out = cols_to_matrix(&self.field, &self.vars, self.cols, &collected);
        out = strip_column_content(&out)?;
        debug_assert!(self.matmul(&out).unwrap().is_zero());
        Ok(Some(out))
    }
}

fn cols_to_matrix<F: Field>(
    field: &F,
    vars: &VarSet,
    nrows: usize,
    cols: &[Vec<Poly<F>>],
) -> PolyMatrix<F> {
    PolyMatrix::from_fn(field, vars, nrows, cols.len(), |i, j| cols[j][i].clone())
}

/// Divide every column by its polynomial content and normalize the leading
/// coefficient of its first nonzero entry to 1.
fn strip_column_content<F: Field>(m: &PolyMatrix<F>) -> Result<PolyMatrix<F>> {
    let field = m.field().clone();
    let mut out = m.clone();
    for j in 0..m.cols() {
        let col: Vec<Poly<F>> = (0..m.rows()).map(|i| m.get(i, j).clone()).collect();
        let g = match gcd_many(col.iter()) {
            Ok(Some(g)) if !g.is_constant() => Some(g),
            _ => None,
        };
        let mut newcol: Vec<Poly<F>> = match g {
            Some(g) => col
                .iter()
                .map(|p| p.div_exact(&g).expect("content divides"))
                .collect(),
            None => col,
        };
        if let Some(first) = newcol.iter().find(|p| !p.is_zero()) {
            let lc = first.leading_coeff().unwrap();
            let inv = field.inv(&lc).unwrap();
            newcol = newcol.iter().map(|p| p.scalar_mul(&inv)).collect();
        }
        for (i, p) in newcol.into_iter().enumerate() {
            out.set(i, j, p);
        }
    }
    Ok(out)
}

/// Matrix over the fraction field, stored as numerator/denominator pairs.
#[derive(Debug, Clone)]
pub struct RatMatrix<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(Poly<F>, Poly<F>)>,
    pub normalized: bool,
}

impl<F: Field> RatMatrix<F> {
    pub fn new(rows: usize, cols: usize, entries: Vec<(Poly<F>, Poly<F>)>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch("rational matrix".into()));
        }
        for (_, d) in &entries {
            if d.is_zero() {
                return Err(Error::DimensionMismatch("zero denominator".into()));
            }
        }
        Ok(RatMatrix {
            rows,
            cols,
            entries,
            normalized: false,
        })
    }

    pub fn from_polys(m: &PolyMatrix<F>) -> Self {
        let one = Poly::one(m.field(), m.vars());
        RatMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries: m
                .entries()
                .iter()
                .map(|p| (p.clone(), one.clone()))
                .collect(),
            normalized: true,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &(Poly<F>, Poly<F>) {
        &self.entries[i * self.cols + j]
    }

    /// Reduce num/den by their gcd where the gcd machinery applies
    /// (at most two effective variables or homogeneous trivariate); entries
    /// outside that range are left untouched and the flag records it.
    pub fn normalize(&mut self) {
        let mut all = true;
        for (n, d) in self.entries.iter_mut() {
            if n.is_zero() {
                *d = Poly::one(d.field(), d.vars());
                continue;
            }
            match crate::gcd::gcd_poly(n, d) {
                Ok(g) if !g.is_constant() => {
                    *n = n.div_exact(&g).expect("gcd divides");
                    *d = d.div_exact(&g).expect("gcd divides");
                }
                Ok(_) => {}
                Err(_) => {
                    all = false;
                }
            }
        }
        self.normalized = all;
    }
}

/// Sylvester resultant of `f` and `g` with respect to `var`.
pub fn resultant<F: Field>(f: &Poly<F>, g: &Poly<F>, var: usize) -> Result<Poly<F>> {
    let field = f.field().clone();
    let vars = f.vars().clone();
    let df = f.degree_in(var).unwrap_or(0) as usize;
    let dg = g.degree_in(var).unwrap_or(0) as usize;
    if df == 0 && dg == 0 {
        return Ok(Poly::one(&field, &vars));
    }
    let n = df + dg;
    let fc = univar_coeffs(f, var);
    let gc = univar_coeffs(g, var);
    let zero = Poly::zero(&field, &vars);
    let mut m = PolyMatrix::zero(&field, &vars, n, n);
    for i in 0..dg {
        for (k, c) in fc.iter().enumerate() {
            let col = i + (df - k);
            m.set(i, col, c.clone());
        }
    }
    for i in 0..df {
        for (k, c) in gc.iter().enumerate() {
            let col = i + (dg - k);
            m.set(dg + i, col, c.clone());
        }
    }
    let _ = zero;
    m.det()
}

fn univar_coeffs<F: Field>(p: &Poly<F>, var: usize) -> Vec<Poly<F>> {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::parse::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn qp(s: &str) -> Poly<Rationals> {
        parse(s, &VarSet::xyz(), &Rationals).unwrap()
    }

    fn diag_xyxyf() -> PolyMatrix<Rationals> {
        let f = Rationals;
        let v = VarSet::xyz();
        let entries = ["x", "y", "x*y", "x^2+y^2+z^2-2*x*y-2*x*z-2*y*z"];
        PolyMatrix::from_fn(&f, &v, 4, 4, |i, j| {
            if i == j {
                qp(entries[i])
            } else {
                Poly::zero(&f, &v)
            }
        })
    }

    #[test]
    fn det_of_identity_and_diagonal() {
        let f = Rationals;
        let v = VarSet::xyz();
        let id = PolyMatrix::identity(&f, &v, 4);
        assert_eq!(id.det().unwrap(), Poly::one(&f, &v));
        let d = diag_xyxyf();
        let expect = qp("x")
            .mul(&qp("y"))
            .unwrap()
            .mul(&qp("x*y"))
            .unwrap()
            .mul(&qp("x^2+y^2+z^2-2*x*y-2*x*z-2*y*z"))
            .unwrap();
        assert_eq!(d.det().unwrap(), expect);
    }

    #[test]
    fn principal_minors() {
        let d = diag_xyxyf();
        assert_eq!(d.principal_minor(0).unwrap(), qp("1"));
        assert_eq!(d.principal_minor(3).unwrap(), qp("x^2*y^2"));
        assert_eq!(d.principal_minor(4).unwrap(), d.det().unwrap());
        assert!(d.principal_minor(5).is_err());
    }

    #[test]
    fn kernel_of_row_vector() {
        let f = Rationals;
        let v = VarSet::xyz();
        let m = PolyMatrix::new(&f, &v, 1, 2, vec![qp("x"), qp("y")]).unwrap();
        let k = m.kernel().unwrap();
        assert_eq!(k.cleared.cols(), 1);
        let prod = m.matmul(&k.cleared).unwrap();
        assert!(prod.is_zero());
        // (-y, x) up to scaling
        let a = k.cleared.get(0, 0);
        let b = k.cleared.get(1, 0);
        assert_eq!(a.mul(&qp("x")).unwrap(), b.mul(&qp("y")).unwrap().neg());
        assert_eq!(a.degree(), Some(1));
    }

    #[test]
    fn kernel_product_vanishes_for_random_linear_maps() {
        let f = PrimeField::new(101).unwrap();
        let v = VarSet::xyz();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..5 {
            let m = PolyMatrix::from_fn(&f, &v, 2, 4, |_, _| {
                Poly::random_homogeneous(&f, &v, 1, &mut rng)
            });
            let k = m.kernel().unwrap();
            assert_eq!(k.cleared.cols(), 4 - m.generic_rank());
            assert!(m.matmul(&k.cleared).unwrap().is_zero());
        }
    }

    #[test]
    fn transpose_product_identity() {
        let f = PrimeField::new(101).unwrap();
        let v = VarSet::xyz();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let a = PolyMatrix::from_fn(&f, &v, 3, 3, |_, _| {
            Poly::random_homogeneous(&f, &v, 1, &mut rng)
        });
        let b = PolyMatrix::from_fn(&f, &v, 3, 3, |_, _| {
            Poly::random_homogeneous(&f, &v, 1, &mut rng)
        });
        let lhs = a.matmul(&b).unwrap().transpose();
        let rhs = b.transpose().matmul(&a.transpose()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn congruence_basics() {
        let f = Rationals;
        let v = VarSet::xyz();
        let id = PolyMatrix::identity(&f, &v, 3);
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let p = PolyMatrix::from_fn(&f, &v, 3, 3, |_, _| {
            Poly::constant(&f, &v, f.random_small(&mut rng))
        });
        // congruence(I, P) = P^T P
        assert_eq!(
            id.congruence(&p).unwrap(),
            p.transpose().matmul(&p).unwrap()
        );
        // congruence(M, I) = M
        let m = diag_xyxyf();
        let id4 = PolyMatrix::identity(&f, &v, 4);
        assert_eq!(m.congruence(&id4).unwrap(), m);
    }

    #[test]
    fn resultant_detects_common_roots() {
        let f = Rationals;
        let v = VarSet::xyz();
        // f = (z - x)(z - y), g = (z - x)(z + y): share the root z = x
        let a = qp("z-x").mul(&qp("z-y")).unwrap();
        let b = qp("z-x").mul(&qp("z+y")).unwrap();
        let r = resultant(&a, &b, 2).unwrap();
        assert!(r.is_zero());
        let c = qp("z-y");
        let r2 = resultant(&qp("z-x"), &c, 2).unwrap();
        // Res_z(z-x, z-y) = y - x up to sign
        assert!(r2 == qp("y-x") || r2 == qp("x-y"));
    }
}

/// Kernel basis: rational view plus the cleared polynomial companion.
#[derive(Debug, Clone)]
pub struct KernelBasis<F: Field> {
    pub rat: RatMatrix<F>,
    pub cleared: PolyMatrix<F>,
}
