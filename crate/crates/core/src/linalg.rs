//! Dense linear algebra over the scalar field: rank, solving, nullspaces.
//!
//! These run on plain `Vec<Vec<Elem>>` rows and back every coefficient-level
//! computation in the crate (graded kernels, lift solving, Jacobian ranks,
//! isotropic searches).

use rand::Rng;

use crate::field::Field;

pub type Mat<F> = Vec<Vec<<F as Field>::Elem>>;

/// Row-reduce in place; returns the pivot columns. `cols` bounds the pivot
/// search so augmented systems can keep their right-hand side intact.
pub fn row_reduce<F: Field>(field: &F, m: &mut Mat<F>, cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let mut sel = None;
        for i in r..rows {
            if !field.is_zero(&m[i][c]) {
                sel = Some(i);
                break;
            }
        }
        let Some(i) = sel else { continue };
        m.swap(r, i);
        let inv = field.inv(&m[r][c]).expect("pivot nonzero");
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !field.is_zero(&m[i][c]) {
                let f = m[i][c].clone();
                let width = m[i].len();
                for j in 0..width {
                    let t = field.mul(&f, &m[r][j]);
                    m[i][j] = field.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &Mat<F>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut work = m.clone();
    row_reduce(field, &mut work, cols).len()
}

/// One solution of `A x = b`, free variables set to zero; `None` if
/// inconsistent.
pub fn solve<F: Field>(field: &F, a: &Mat<F>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    solve_with_free(field, a, b, |_| field.zero())
}

/// One solution of `A x = b` with a caller-chosen value for each free
/// column; `None` if inconsistent.
pub fn solve_with_free<F: Field>(
    field: &F,
    a: &Mat<F>,
    b: &[F::Elem],
    mut free_value: impl FnMut(usize) -> F::Elem,
) -> Option<Vec<F::Elem>> {
    let rows = a.len();
    if rows == 0 {
        return Some(Vec::new());
    }
    let cols = a[0].len();
    let mut work: Mat<F> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(field, &mut work, cols);
    // inconsistent if a zero row has nonzero rhs
    for row in work.iter().skip(pivots.len()) {
        if !field.is_zero(&row[cols]) {
            return None;
        }
    }
    let mut x: Vec<F::Elem> = Vec::with_capacity(cols);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    for c in 0..cols {
        if pivot_set.contains(&c) {
            x.push(field.zero());
        } else {
            x.push(free_value(c));
        }
    }
    for (r, &pc) in pivots.iter().enumerate() {
        let mut v = work[r][cols].clone();
        for c in 0..cols {
            if c != pc && !field.is_zero(&work[r][c]) {
                let t = field.mul(&work[r][c], &x[c]);
                v = field.sub(&v, &t);
            }
        }
        x[pc] = v;
    }
    Some(x)
}

/// A basis for the right nullspace of `A`.
pub fn nullspace<F: Field>(field: &F, a: &Mat<F>) -> Vec<Vec<F::Elem>> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut work = a.clone();
    let pivots = row_reduce(field, &mut work, cols);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(&work[r][free]);
        }
        basis.push(v);
    }
    basis
}

/// Random invertible square matrix (resamples until nonsingular).
pub fn random_invertible<F: Field, R: Rng>(field: &F, n: usize, rng: &mut R) -> Mat<F> {
    loop {
        let m: Mat<F> = (0..n)
            .map(|_| (0..n).map(|_| field.random_small(rng)).collect())
            .collect();
        if rank(field, &m) == n {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn solve_and_nullspace() {
        let f = PrimeField::new(101).unwrap();
        // x + 2y = 5; 3x + 6y = 15 (rank 1)
        let a = vec![vec![1u64, 2], vec![3, 6]];
        let b = vec![5u64, 15];
        let x = solve(&f, &a, &b).unwrap();
        assert_eq!(f.add(&x[0], &f.mul(&2, &x[1])), 5);
        let ns = nullspace(&f, &a);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert_eq!(f.add(&v[0], &f.mul(&2, &v[1])), 0);
        // inconsistent system
        let b2 = vec![5u64, 16];
        assert!(solve(&f, &a, &b2).is_none());
        assert_eq!(rank(&f, &a), 1);
    }
}
