//! Quadric reduction with respect to a regular isotropic subbundle, the
//! inverse hyperbolic extension, the degeneration family Psi_t, and a
//! best-effort isotropic search.
//!
//! Reduction: for an isotropic embedding `N: U -> G` the induced form on
//! `U^perp / U` is `W^T M W` where the columns of `W` complete the columns
//! of `N` to a basis of `ker(N^T M)` over the function field. Reduced models
//! are chart-level: their degree vector records the twists of the chosen
//! kernel sections, not a minimal resolution.
//!
//! Extension: given a split presentation `0 -> B -> A -> T^v -> 0` encoded
//! by `rho` and a form `Q_T` on the cokernel pattern, a symmetric lift `S`
//! on `A` with `kappa S kappa^T = Q_T` (up to square line factors) is found
//! by solving a linear system in the coefficients of `S`; the extension is
//! the block matrix `[[S, rho], [rho^T, 0]]`, and reducing it by the
//! planted `B` block recovers the congruence class of `Q_T`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::fpscan::{scan_all, FpPoly};
use crate::gcd::{gcd_many, square_part_homog};
use crate::graded::GradedSymMatrix;
use crate::linalg;
use crate::matrix::PolyMatrix;
use crate::poly::{monomials_of_degree, Monomial, Poly, VarSet};

#[derive(Debug, Clone, PartialEq)]
pub enum RegularityStatus {
    /// No rank drop found by exhaustive scans over these primes.
    ProvenAt(Vec<u64>),
    /// Exact witness point where N or M N drops rank.
    RefutedAt(Vec<String>),
    Unknown,
}

#[derive(Debug, Clone)]
pub struct IsotropicEmbedding<F: Field> {
    pub n: PolyMatrix<F>,
    pub isotropy_ok: bool,
    pub regularity: RegularityStatus,
}

/// Check `N^T M N = 0` exactly and gather regularity evidence.
pub fn verify_isotropic<F: Field>(
    q: &GradedSymMatrix<F>,
    n: &PolyMatrix<F>,
    scan_primes: &[u64],
    _seed: u64,
) -> Result<IsotropicEmbedding<F>> {
    let m = q.size();
    if n.rows() != m || n.cols() == 0 || n.cols() > m {
        return Err(Error::DimensionMismatch(format!(
            "embedding must be {}x r with 1 <= r <= {}",
            m, m
        )));
    }
    if !q.chart {
        check_graded_columns(q, n)?;
    }
    let prod = n.transpose().matmul(&q.mat)?.matmul(n)?;
    let isotropy_ok = prod.is_zero();
    let r = n.cols();
    let mn = q.mat.matmul(n)?;
    let field = q.mat.field().clone();
    let regularity = if n.generic_rank() < r || mn.generic_rank() < r {
        // a generic drop holds at every point; any sample is a witness
        let pt = vec![field.one(), field.zero(), field.zero()];
        RegularityStatus::RefutedAt(pt.iter().map(|c| field.format(c)).collect())
    } else {
        scan_regularity(q, n, &mn, scan_primes)?
    };
    Ok(IsotropicEmbedding {
        n: n.clone(),
        isotropy_ok,
        regularity,
    })
}

fn check_graded_columns<F: Field>(q: &GradedSymMatrix<F>, n: &PolyMatrix<F>) -> Result<()> {
    for j in 0..n.cols() {
        let mut twist: Option<i64> = None;
        for i in 0..n.rows() {
            let e = n.get(i, j);
            if e.is_zero() {
                continue;
            }
            if !e.is_homogeneous() {
                return Err(Error::ShapeMismatch(format!(
                    "embedding column {j} is not graded"
                )));
            }
            let t = e.degree().unwrap() - q.degrees[i];
            match twist {
                None => twist = Some(t),
                Some(t0) if t0 != t => {
                    return Err(Error::ShapeMismatch(format!(
                        "embedding column {j} is not graded"
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Exhaustive rank scans; only meaningful over a prime field, and only over
/// the field's own characteristic.
fn scan_regularity<F: Field>(
    q: &GradedSymMatrix<F>,
    n: &PolyMatrix<F>,
    mn: &PolyMatrix<F>,
    scan_primes: &[u64],
) -> Result<RegularityStatus> {
    let Some(p) = q.mat.field().characteristic() else {
        // over Q the scans live in reductions; handled by the caller layer
        return Ok(if scan_primes.is_empty() {
            RegularityStatus::Unknown
        } else {
            RegularityStatus::Unknown
        });
    };
    if scan_primes.is_empty() {
        return Ok(RegularityStatus::Unknown);
    }
    if !scan_primes.contains(&p) {
        return Ok(RegularityStatus::Unknown);
    }
    // downcast through evaluation: scan every point, checking both ranks
    let r = n.cols();
    let fp = PrimeField::new(p)?;
    let field = q.mat.field().clone();
    let mut witness: Option<[u64; 3]> = None;
    scan_all::<()>(&fp, |pt| {
        let point: Vec<F::Elem> = pt.iter().map(|&c| field.from_i64(c as i64)).collect();
        let rn = n.rank_at_point(&point).expect("arity");
        if rn < r {
            witness = Some(pt);
            return std::ops::ControlFlow::Break(());
        }
        let rmn = mn.rank_at_point(&point).expect("arity");
        if rmn < r {
            witness = Some(pt);
            return std::ops::ControlFlow::Break(());
        }
        std::ops::ControlFlow::Continue(())
    });
    match witness {
        Some(pt) => Ok(RegularityStatus::RefutedAt(
            pt.iter().map(|c| c.to_string()).collect(),
        )),
        None => Ok(RegularityStatus::ProvenAt(vec![p])),
    }
}

/// Quadric reduction of `q` by a certified isotropic embedding.
pub fn reduce<F: Field>(
    q: &GradedSymMatrix<F>,
    iso: &IsotropicEmbedding<F>,
) -> Result<GradedSymMatrix<F>> {
    if !iso.isotropy_ok {
        return Err(Error::IsotropyNotCertified);
    }
    let m = q.size();
    let r = iso.n.cols();
    let new_size = m as i64 - 2 * r as i64;
    if new_size < 1 {
        return Err(Error::SizeTooSmall(new_size));
    }
    let mn = q.mat.matmul(&iso.n)?;
    if iso.n.generic_rank() < r || mn.generic_rank() < r {
        return Err(Error::RankDeficient(
            "embedding or its image drops rank generically".into(),
        ));
    }
    let ntm = iso.n.transpose().matmul(&q.mat)?;
    let kernel = ntm.kernel()?.cleared;
    if kernel.cols() != m - r {
        return Err(Error::KernelDimension {
            expected: m - r,
            found: kernel.cols(),
        });
    }
    // greedy complement of col(N) inside the kernel, lowest degree first
    let mut order: Vec<usize> = (0..kernel.cols()).collect();
    let col_degree = |j: usize| -> i64 {
        (0..kernel.rows())
            .filter_map(|i| kernel.get(i, j).degree())
            .max()
            .unwrap_or(0)
    };
    order.sort_by_key(|&j| (col_degree(j), j));
    let mut picked: Vec<usize> = Vec::new();
    let mut current = iso.n.clone();
    for j in order {
        if picked.len() == (m - 2 * r) {
            break;
        }
        let cand_col = kernel.submatrix(&(0..m).collect::<Vec<_>>(), &[j]);
        let cand = current.hconcat(&cand_col)?;
        if cand.generic_rank() == current.cols() + 1 {
            current = cand;
            picked.push(j);
        }
    }
    if picked.len() != m - 2 * r {
        return Err(Error::RankDeficient(
            "complement selection inside the kernel failed".into(),
        ));
    }
    let w = kernel.submatrix(&(0..m).collect::<Vec<_>>(), &picked);
    let mut reduced = w.transpose().matmul(&q.mat)?.matmul(&w)?;
    // strip matrix-global square polynomial factors
    let mut twist_drop = 0i64;
    if let Ok(Some(content)) = gcd_many(reduced.entries().iter().filter(|e| !e.is_zero())) {
        if !content.is_constant() {
            if let Ok(s) = square_part_homog(&content) {
                if !s.is_constant() {
                    let s2 = s.mul(&s)?;
                    let stripped: Vec<Poly<F>> = reduced
                        .entries()
                        .iter()
                        .map(|e| {
                            if e.is_zero() {
                                e.clone()
                            } else {
                                e.div_exact(&s2).expect("global square factor divides")
                            }
                        })
                        .collect();
                    reduced = PolyMatrix::new(
                        q.mat.field(),
                        q.mat.vars(),
                        reduced.rows(),
                        reduced.cols(),
                        stripped,
                    )?;
                    twist_drop = 2 * s.degree().unwrap_or(0);
                }
            }
        }
    }
    // chart degrees: the twist of each chosen kernel section
    let degrees: Vec<i64> = picked
        .iter()
        .map(|&j| {
            let mut t = 0i64;
            for i in 0..m {
                if let Some(d) = kernel.get(i, j).degree() {
                    t = d - q.degrees[i];
                    break;
                }
            }
            -t
        })
        .collect();
    GradedSymMatrix::chart_model(degrees, q.twist - twist_drop, reduced)
}

/// The numeric stand-in for the `H^2(Λ^2 B(δ))` vanishing assumption.
pub fn h2_criterion(b_degrees: &[i64], delta: i64) -> bool {
    for i in 0..b_degrees.len() {
        for j in (i + 1)..b_degrees.len() {
            if b_degrees[i] + b_degrees[j] - delta <= -3 {
                return false;
            }
        }
    }
    true
}

/// Hyperbolic extension. With `B` empty, `A` must contain the target
/// pattern of `Q_T` plus extra summands that pair hyperbolically; the
/// result is the block-diagonal bordered matrix. With `B` nonempty the
/// full symmetric lift is solved along `rho`.
pub fn extend_hyperbolic<F: Field>(
    qt: &GradedSymMatrix<F>,
    a_degrees: &[i64],
    b_degrees: &[i64],
    rho: &PolyMatrix<F>,
) -> Result<GradedSymMatrix<F>> {
    if b_degrees.is_empty() {
        return extend_bordered(qt, a_degrees);
    }
    extend_with_lift(qt, a_degrees, b_degrees, rho)
}

fn extend_bordered<F: Field>(
    qt: &GradedSymMatrix<F>,
    a_degrees: &[i64],
) -> Result<GradedSymMatrix<F>> {
    let field = qt.mat.field().clone();
    let vars = qt.mat.vars().clone();
    let delta = qt.twist;
    let m = qt.size();
    let t_pattern: Vec<i64> = qt.degrees.iter().map(|&a| delta - a).collect();
    // assign Q_T slots to positions of A with matching degree
    let mut used = vec![false; a_degrees.len()];
    let mut slot_of = Vec::with_capacity(m);
    for &t in &t_pattern {
        let pos = a_degrees
            .iter()
            .enumerate()
            .position(|(k, &alpha)| !used[k] && alpha == t)
            .ok_or_else(|| {
                Error::ShapeMismatch(format!(
                    "A degrees {a_degrees:?} do not contain the target pattern {t_pattern:?}"
                ))
            })?;
        used[pos] = true;
        slot_of.push(pos);
    }
    // leftover summands must pair up hyperbolically (or be delta/2 singles)
    let mut extras: Vec<usize> = (0..a_degrees.len()).filter(|&k| !used[k]).collect();
    let mut singles = Vec::new();
    let mut pairs = Vec::new();
    while let Some(k) = extras.pop() {
        if 2 * a_degrees[k] == delta {
            singles.push(k);
            continue;
        }
        let partner = extras
            .iter()
            .position(|&l| a_degrees[l] + a_degrees[k] == delta)
            .ok_or_else(|| {
                Error::ShapeMismatch(format!(
                    "extra summand of degree {} has no hyperbolic partner",
                    a_degrees[k]
                ))
            })?;
        let l = extras.remove(partner);
        pairs.push((k, l));
    }
    let ma = a_degrees.len();
    let mut mat = PolyMatrix::zero(&field, &vars, ma, ma);
    for i in 0..m {
        for j in 0..m {
            mat.set(slot_of[i], slot_of[j], qt.mat.get(i, j).clone());
        }
    }
    for &k in &singles {
        mat.set(k, k, Poly::one(&field, &vars));
    }
    for &(k, l) in &pairs {
        mat.set(k, l, Poly::one(&field, &vars));
        mat.set(l, k, Poly::one(&field, &vars));
    }
    let degrees: Vec<i64> = a_degrees.iter().map(|&alpha| delta - alpha).collect();
    if qt.chart {
        GradedSymMatrix::chart_model(degrees, delta, mat)
    } else {
        GradedSymMatrix::validate(degrees, delta, mat)
    }
}

fn extend_with_lift<F: Field>(
    qt: &GradedSymMatrix<F>,
    a_degrees: &[i64],
    b_degrees: &[i64],
    rho: &PolyMatrix<F>,
) -> Result<GradedSymMatrix<F>> {
    let field = qt.mat.field().clone();
    let vars = qt.mat.vars().clone();
    let delta = qt.twist;
    let m = qt.size();
    let ma = a_degrees.len();
    let mb = b_degrees.len();
    if ma != m + mb {
        return Err(Error::ShapeMismatch(format!(
            "need rank A = rank T + rank B: {ma} != {m} + {mb}"
        )));
    }
    if rho.rows() != ma || rho.cols() != mb {
        return Err(Error::DimensionMismatch(format!(
            "rho must be {ma}x{mb}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    // rho graded of degrees alpha_i - beta_j
    for i in 0..ma {
        for j in 0..mb {
            let e = rho.get(i, j);
            if e.is_zero() {
                continue;
            }
            let need = a_degrees[i] - b_degrees[j];
            if need < 0 || !e.is_homogeneous() || e.degree() != Some(need) {
                return Err(Error::WrongEntryDegree {
                    i,
                    j,
                    expected: need,
                    found: format!("{:?}", e.degree()),
                });
            }
        }
    }
    if rho.generic_rank() < mb {
        return Err(Error::RankDeficient("rho drops rank generically".into()));
    }
    // kappa spans the kernel of rho^T: columns are sections of T in A^v
    let kernel = rho.transpose().kernel()?.cleared; // ma x m
    if kernel.cols() != m {
        return Err(Error::KernelDimension {
            expected: m,
            found: kernel.cols(),
        });
    }
    // twists tau_i of the kernel sections: deg kernel[j][i] = tau_i - alpha_j
    let mut tau = Vec::with_capacity(m);
    for i in 0..m {
        let mut t: Option<i64> = None;
        for jj in 0..ma {
            if let Some(d) = kernel.get(jj, i).degree() {
                t = Some(d + a_degrees[jj]);
                break;
            }
        }
        tau.push(t.ok_or_else(|| Error::ShapeMismatch("zero kernel column".into()))?);
    }
    // pair kernel sections against Q_T slots by sorted twist
    let t_pattern: Vec<i64> = qt.degrees.iter().map(|&a| delta - a).collect();
    let mut tau_order: Vec<usize> = (0..m).collect();
    tau_order.sort_by_key(|&i| tau[i]);
    let mut t_order: Vec<usize> = (0..m).collect();
    t_order.sort_by_key(|&i| t_pattern[i]);
    let mut q_index = vec![0usize; m];
    let mut shift = vec![0i64; m];
    for k in 0..m {
        let u = tau_order[k];
        let qi = t_order[k];
        let e = tau[u] - t_pattern[qi];
        if e < 0 {
            return Err(Error::LiftFailed);
        }
        q_index[u] = qi;
        shift[u] = e;
    }
    // target R_{uv} = l^{e_u + e_v} * QT_{q(u), q(v)} with l = z
    let line = Poly::var(&field, &vars, vars.len() - 1);
    let mut target = PolyMatrix::zero(&field, &vars, m, m);
    for u in 0..m {
        for v in 0..m {
            let base = qt.mat.get(q_index[u], q_index[v]);
            if base.is_zero() {
                continue;
            }
            let e = (shift[u] + shift[v]) as u32;
            target.set(u, v, base.mul(&line.pow(e))?);
        }
    }
    // unknown layout for the symmetric lift S
    let nv = vars.len();
    let mut unknown_offset = std::collections::HashMap::new();
    let mut slots: Vec<(usize, usize, Vec<Monomial>)> = Vec::new();
    let mut total = 0usize;
    for j in 0..ma {
        for l in j..ma {
            let d = a_degrees[j] + a_degrees[l] - delta;
            if d < 0 {
                continue;
            }
            let monos: Vec<Monomial> = monomials_of_degree(nv, d as u16)
                .into_iter()
                .map(Monomial)
                .collect();
            unknown_offset.insert((j, l), total);
            total += monos.len();
            slots.push((j, l, monos));
        }
    }
    // equations: coefficients of kappa S kappa^T - R, entries u <= v
    let kappa = kernel.transpose(); // m x ma
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    let mut rhs: Vec<F::Elem> = Vec::new();
    for u in 0..m {
        for v in u..m {
            let deg_uv = tau[u] + tau[v] - delta;
            if deg_uv < 0 {
                continue;
            }
            let eq_monos = monomials_of_degree(nv, deg_uv as u16);
            let mut index = std::collections::HashMap::new();
            let base_row = rows.len();
            for (k, mo) in eq_monos.iter().enumerate() {
                index.insert(Monomial(mo.clone()), base_row + k);
                rows.push(vec![field.zero(); total]);
                let tgt = target.get(u, v);
                let mut val = field.zero();
                for (tm, tc) in tgt.terms() {
                    if tm.0 == *mo {
                        val = tc.clone();
                    }
                }
                rhs.push(val);
            }
            for (j, l, monos) in &slots {
                let off = unknown_offset[&(*j, *l)];
                // kappa_{u j} kappa_{v l} + (j != l) kappa_{u l} kappa_{v j}
                let mut factor = kappa.get(u, *j).mul(kappa.get(v, *l))?;
                if j != l {
                    factor = factor.add(&kappa.get(u, *l).mul(kappa.get(v, *j))?)?;
                }
                if factor.is_zero() {
                    continue;
                }
                for (mi, mono) in monos.iter().enumerate() {
                    for (fm, fc) in factor.terms() {
                        let prod = fm.mul(mono);
                        if let Some(&ri) = index.get(&prod) {
                            rows[ri][off + mi] = field.add(&rows[ri][off + mi], fc);
                        }
                    }
                }
            }
        }
    }
    // solve, retrying with varied free values until the extension is
    // nondegenerate
    let mut rng = ChaCha12Rng::seed_from_u64(0x9bd1_a0e5);
    for attempt in 0..6 {
        let sol = if attempt == 0 {
            linalg::solve(&field, &rows, &rhs)
        } else {
            linalg::solve_with_free(&field, &rows, &rhs, |_| field.random_small(&mut rng))
        };
        let Some(sol) = sol else {
            return Err(Error::LiftFailed);
        };
        // assemble S and the extension
        let mut s = PolyMatrix::zero(&field, &vars, ma, ma);
        for (j, l, monos) in &slots {
            let off = unknown_offset[&(*j, *l)];
            let mut p = Poly::zero(&field, &vars);
            for (mi, mono) in monos.iter().enumerate() {
                let c = &sol[off + mi];
                if !field.is_zero(c) {
                    p = p.add(&Poly::term(&field, &vars, &mono.0, c.clone()))?;
                }
            }
            s.set(*j, *l, p.clone());
            s.set(*l, *j, p);
        }
        let total_size = ma + mb;
        let mut psi = PolyMatrix::zero(&field, &vars, total_size, total_size);
        for i in 0..ma {
            for j in 0..ma {
                psi.set(i, j, s.get(i, j).clone());
            }
        }
        for i in 0..ma {
            for j in 0..mb {
                psi.set(i, ma + j, rho.get(i, j).clone());
                psi.set(ma + j, i, rho.get(i, j).clone());
            }
        }
        let mut degrees: Vec<i64> = a_degrees.iter().map(|&alpha| delta - alpha).collect();
        degrees.extend_from_slice(b_degrees);
        match GradedSymMatrix::validate(degrees.clone(), delta, psi.clone()) {
            Ok(g) => return Ok(g),
            Err(Error::ZeroDeterminant) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ZeroDeterminant)
}

/// The planted isotropic subbundle of an extension: the B block.
pub fn planted_isotropic<F: Field>(
    ext: &GradedSymMatrix<F>,
    mb: usize,
) -> Result<IsotropicEmbedding<F>> {
    let total = ext.size();
    if mb == 0 || mb * 2 >= total {
        return Err(Error::DimensionMismatch("planted block size".into()));
    }
    let field = ext.mat.field().clone();
    let vars = ext.mat.vars().clone();
    let n = PolyMatrix::from_fn(&field, &vars, total, mb, |i, j| {
        if i == total - mb + j {
            Poly::one(&field, &vars)
        } else {
            Poly::zero(&field, &vars)
        }
    });
    verify_isotropic(ext, &n, &[], 0)
}

/// Assemble the degeneration family Psi_t at a field value t.
///
/// Inputs: `a_sym`, `m_sym`: symmetric maps on G; `eta`: H^v -> G^v;
/// `theta`: G^v -> E^v with `theta eta = 0`; `j_iso`: the symmetric
/// isomorphism H = H^v(delta) (constant invertible); `e_degrees`: the
/// degree hints for the E block of the chart output.
#[allow(clippy::too_many_arguments)]
pub fn degeneration_family<F: Field>(
    a_sym: &GradedSymMatrix<F>,
    m_sym: &PolyMatrix<F>,
    eta: &PolyMatrix<F>,
    theta: &PolyMatrix<F>,
    j_iso: &PolyMatrix<F>,
    e_degrees: &[i64],
    t: &F::Elem,
) -> Result<GradedSymMatrix<F>> {
    let field = a_sym.mat.field().clone();
    let vars = a_sym.mat.vars().clone();
    let m = a_sym.size();
    let e = theta.rows();
    let h = eta.cols();
    if m_sym.rows() != m || m_sym.cols() != m || !m_sym.is_symmetric() {
        return Err(Error::ShapeMismatch("M must be a symmetric m x m map".into()));
    }
    if eta.rows() != m || theta.cols() != m {
        return Err(Error::ShapeMismatch("eta and theta must plug into G^v".into()));
    }
    if j_iso.rows() != h || j_iso.cols() != h || !j_iso.is_symmetric() {
        return Err(Error::ShapeMismatch("J must be symmetric on the H block".into()));
    }
    if e_degrees.len() != e {
        return Err(Error::ShapeMismatch("E degree hints".into()));
    }
    let jdet = j_iso.det()?;
    if jdet.constant_value().map_or(true, |c| field.is_zero(&c)) {
        return Err(Error::ShapeMismatch(
            "J must be a constant invertible symmetric map".into(),
        ));
    }
    if !theta.matmul(eta)?.is_zero() {
        return Err(Error::ShapeMismatch("theta . eta must vanish".into()));
    }
    let phi = theta.matmul(m_sym)?.matmul(&theta.transpose())?;
    let tc = |k: u64| -> Poly<F> {
        Poly::constant(&field, &vars, field.pow(t, k))
    };
    // TL = t^3 A + t^2 M + eta J eta^T
    let tl = a_sym
        .mat
        .scale(&tc(3))?
        .add(&m_sym.scale(&tc(2))?)?
        .add(&eta.matmul(j_iso)?.matmul(&eta.transpose())?)?;
    // TR = t^2 A theta^T + t M theta^T
    let tr = a_sym
        .mat
        .matmul(&theta.transpose())?
        .scale(&tc(2))?
        .add(&m_sym.matmul(&theta.transpose())?.scale(&tc(1))?)?;
    // BR = phi + t theta A theta^T
    let br = phi.add(
        &theta
            .matmul(&a_sym.mat)?
            .matmul(&theta.transpose())?
            .scale(&tc(1))?,
    )?;
    let total = m + e;
    let mut psi = PolyMatrix::zero(&field, &vars, total, total);
    for i in 0..m {
        for j in 0..m {
            psi.set(i, j, tl.get(i, j).clone());
        }
    }
    for i in 0..m {
        for j in 0..e {
            psi.set(i, m + j, tr.get(i, j).clone());
            psi.set(m + j, i, tr.get(i, j).clone());
        }
    }
    for i in 0..e {
        for j in 0..e {
            psi.set(m + i, m + j, br.get(i, j).clone());
        }
    }
    let mut degrees = a_sym.degrees.clone();
    degrees.extend_from_slice(e_degrees);
    GradedSymMatrix::chart_model(degrees, a_sym.twist, psi)
}

#[derive(Debug, Clone)]
pub enum IsotropicAnsatz {
    /// `B_1 = [Id | B_1']` constants plus linear `B_2`, the Cor 4.2 scheme.
    IdentityBlock,
    /// Explicit delta-shaped column(s) with the given exponents.
    DeltaShape { a_exps: Vec<u16>, b_exps: Vec<u16> },
}

/// Best-effort isotropic search over F_p by iterated linearization of the
/// quadratic isotropy system. Absence of output is a legitimate result.
pub fn find_isotropic(
    q: &GradedSymMatrix<PrimeField>,
    target_rank: usize,
    ansatz: &IsotropicAnsatz,
    max_tries: usize,
    seed: u64,
) -> Result<Option<IsotropicEmbedding<PrimeField>>> {
    let m = q.size();
    if 2 * target_rank >= m {
        return Err(Error::SizeTooSmall(m as i64 - 2 * target_rank as i64));
    }
    match ansatz {
        IsotropicAnsatz::DeltaShape { a_exps, b_exps } => {
            let n = delta_shape_column(q, a_exps, b_exps)?;
            let emb = verify_isotropic(q, &n, &[], seed)?;
            Ok(if emb.isotropy_ok { Some(emb) } else { None })
        }
        IsotropicAnsatz::IdentityBlock => {
            find_isotropic_identity_block(q, target_rank, max_tries, seed)
        }
    }
}

fn delta_shape_column(
    q: &GradedSymMatrix<PrimeField>,
    a_exps: &[u16],
    b_exps: &[u16],
) -> Result<PolyMatrix<PrimeField>> {
    let field = *q.mat.field();
    let vars = q.mat.vars().clone();
    let m = q.size();
    if a_exps.len() + 2 + b_exps.len() != m || b_exps.len() != 1 {
        return Err(Error::ShapeMismatch(
            "delta ansatz expects (z^a1, y^a2, 0, 0 | x^b1)".into(),
        ));
    }
    let mut col = vec![Poly::zero(&field, &vars); m];
    col[0] = Poly::var(&field, &vars, 2).pow(a_exps[0] as u32);
    col[1] = Poly::var(&field, &vars, 1).pow(a_exps[1] as u32);
    col[m - 1] = Poly::var(&field, &vars, 0).pow(b_exps[0] as u32);
    PolyMatrix::new(&field, &vars, m, 1, col)
}

fn find_isotropic_identity_block(
    q: &GradedSymMatrix<PrimeField>,
    r: usize,
    max_tries: usize,
    seed: u64,
) -> Result<Option<IsotropicEmbedding<PrimeField>>> {
    let field = *q.mat.field();
    let vars = q.mat.vars().clone();
    // pattern split: quadric block indices (a_i = -1), constant block (a_i = 0)
    let s1: Vec<usize> = (0..q.size()).filter(|&i| q.degrees[i] == -1).collect();
    let s2: Vec<usize> = (0..q.size()).filter(|&i| q.degrees[i] == 0).collect();
    if s1.len() + s2.len() != q.size() || q.twist != 0 {
        return Err(Error::Unsupported(
            "identity-block ansatz expects the half-period pattern".into(),
        ));
    }
    let d = s1.len();
    let k = s2.len();
    if r > d {
        return Err(Error::ShapeMismatch("target rank exceeds the quadric block".into()));
    }
    // unknowns: B1' (r x (d-r) constants) and B2 (r x k linear, 3 coeffs each)
    let n_unknowns = r * (d - r) + r * k * 3;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    // quadric-coefficient coordinates of N^T M N for the candidate embedding
    let residual = |vals: &[u64]| -> Result<Vec<u64>> {
        let n = build_identity_block_embedding(q, r, &s1, &s2, vals)?;
        let prod = n.transpose().matmul(&q.mat)?.matmul(&n)?;
        let mut out = Vec::new();
        for i in 0..r {
            for j in i..r {
                let e = prod.get(i, j);
                for mo in monomials_of_degree(3, 2) {
                    let mut c = 0u64;
                    for (tm, tc) in e.terms() {
                        if tm.0 == mo {
                            c = *tc;
                        }
                    }
                    out.push(c);
                }
            }
        }
        Ok(out)
    };

    let n_eq = r * (r + 1) / 2 * 6;
    let zero_vals = vec![0u64; n_unknowns];
    let c0 = residual(&zero_vals)?;
    // linear part: L(e_i) = (R(e_i) - R(-e_i)) / 2
    let inv2 = field.inv(&2).unwrap();
    let mut lmat: Vec<Vec<u64>> = vec![vec![0; n_unknowns]; n_eq];
    for col in 0..n_unknowns {
        let mut plus = zero_vals.clone();
        plus[col] = 1;
        let mut minus = zero_vals.clone();
        minus[col] = field.neg(&1);
        let rp = residual(&plus)?;
        let rm = residual(&minus)?;
        for row in 0..n_eq {
            let diff = field.sub(&rp[row], &rm[row]);
            lmat[row][col] = field.mul(&diff, &inv2);
        }
    }
    for _try in 0..max_tries {
        let mut v: Vec<u64> = (0..n_unknowns).map(|_| field.random(&mut rng)).collect();
        for _round in 0..20 {
            let rv = residual(&v)?;
            if rv.iter().all(|&c| c == 0) {
                let n = build_identity_block_embedding(q, r, &s1, &s2, &v)?;
                let emb = verify_isotropic(q, &n, &[], seed)?;
                if emb.isotropy_ok {
                    return Ok(Some(emb));
                }
                break;
            }
            // solve L w = -(R(v) + R(-v)) / 2
            let neg_v: Vec<u64> = v.iter().map(|c| field.neg(c)).collect();
            let rneg = residual(&neg_v)?;
            let rhs: Vec<u64> = rv
                .iter()
                .zip(rneg.iter())
                .map(|(a, b)| field.neg(&field.mul(&field.add(a, b), &inv2)))
                .collect();
            match linalg::solve_with_free(&field, &lmat, &rhs, |_| field.random(&mut rng)) {
                Some(w) => v = w,
                None => break,
            }
        }
        let _ = &vars;
    }
    Ok(None)
}

fn build_identity_block_embedding(
    q: &GradedSymMatrix<PrimeField>,
    r: usize,
    s1: &[usize],
    s2: &[usize],
    vals: &[u64],
) -> Result<PolyMatrix<PrimeField>> {
    let field = *q.mat.field();
    let vars = q.mat.vars().clone();
    let d = s1.len();
    let k = s2.len();
    let m = q.size();
    let mut n = PolyMatrix::zero(&field, &vars, m, r);
    // identity block on the first r quadric rows
    for j in 0..r {
        n.set(s1[j], j, Poly::one(&field, &vars));
    }
    // B1' constants on the remaining quadric rows
    for j in 0..r {
        for (ci, &row) in s1.iter().skip(r).enumerate() {
            let val = vals[j * (d - r) + ci];
            n.set(row, j, Poly::constant(&field, &vars, val));
        }
    }
    // B2 linear forms on the constant rows
    let base = r * (d - r);
    for j in 0..r {
        for (ci, &row) in s2.iter().enumerate() {
            let off = base + (j * k + ci) * 3;
            let mut p = Poly::zero(&field, &vars);
            for v in 0..3 {
                let c = vals[off + v];
                if c != 0 {
                    let mut exps = [0u16; 3];
                    exps[v] = 1;
                    p = p.add(&Poly::term(&field, &vars, &exps, c))?;
                }
            }
            n.set(row, j, p);
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::parse::parse;

    fn fp() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    /// antidiag(1,1) ⊕ M0 reduced by e1 gives back M0
    #[test]
    fn hyperbolic_block_reduction() {
        let f = Rationals;
        let v = VarSet::xyz();
        let m0 = ["x^2", "x*y", "x*y", "y^2-x*z"];
        let mut mat = PolyMatrix::zero(&f, &v, 4, 4);
        mat.set(0, 1, Poly::one(&f, &v));
        mat.set(1, 0, Poly::one(&f, &v));
        for i in 0..2 {
            for j in 0..2 {
                mat.set(2 + i, 2 + j, parse(m0[i * 2 + j], &v, &f).unwrap());
            }
        }
        // degrees: hyperbolic pair (0, 0) with delta 0 needs the pair to be
        // (k, -k): use chart model to sidestep strict grading of the toy
        let q = GradedSymMatrix::chart_model(vec![0, 0, -1, -1], 0, mat).unwrap();
        let n = PolyMatrix::from_fn(&f, &v, 4, 1, |i, _| {
            if i == 0 {
                Poly::one(&f, &v)
            } else {
                Poly::zero(&f, &v)
            }
        });
        let emb = verify_isotropic(&q, &n, &[], 0).unwrap();
        assert!(emb.isotropy_ok);
        let red = reduce(&q, &emb).unwrap();
        assert_eq!(red.size(), 2);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(red.mat.get(i, j), &parse(m0[i * 2 + j], &v, &f).unwrap());
            }
        }
    }

    #[test]
    fn bordered_extension_matches_diag() {
        let f = fp();
        let q = crate::gallery::halfperiod_pattern(&f, 3, 0, 3).unwrap();
        let ext = extend_hyperbolic(
            &q,
            &[1, 1, 1, 0],
            &[],
            &PolyMatrix::zero(&f, q.mat.vars(), 4, 0),
        )
        .unwrap();
        assert_eq!(ext.size(), 4);
        assert_eq!(ext.degrees, vec![-1, -1, -1, 0]);
        assert_eq!(ext.mat.get(3, 3), &Poly::one(&f, q.mat.vars()));
        assert_eq!(
            ext.mat.det().unwrap().monic(),
            q.mat.det().unwrap().monic()
        );
    }

    #[test]
    fn planted_reduction_round_trips_the_determinant_class() {
        let f = fp();
        let v = VarSet::xyz();
        let q = crate::gallery::halfperiod_pattern(&f, 3, 0, 11).unwrap();
        // extension along a random linear column B = O(0) -> A = 3 O(1) + O(1)
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let rho = PolyMatrix::from_fn(&f, &v, 4, 1, |_, _| {
            Poly::random_homogeneous(&f, &v, 1, &mut rng)
        });
        let ext = extend_hyperbolic(&q, &[1, 1, 1, 0], &[0], &rho).unwrap();
        assert_eq!(ext.size(), 5);
        let emb = planted_isotropic(&ext, 1).unwrap();
        assert!(emb.isotropy_ok);
        let red = reduce(&ext, &emb).unwrap();
        assert_eq!(red.size(), 3);
        // det(reduced) * det(original) must be a unit times a square
        let prod = red
            .mat
            .det()
            .unwrap()
            .mul(&q.mat.det().unwrap())
            .unwrap();
        let z_mult = prod.var_multiplicity(2);
        assert_eq!(z_mult % 2, 0);
        let affine = prod.shift_down(2, z_mult).dehomogenize(2);
        assert!(crate::gcd::is_unit_times_square(&affine).unwrap());
    }

    #[test]
    fn degeneration_family_at_zero_is_block_diagonal() {
        let f = fp();
        let v = VarSet::xyz();
        let q = crate::gallery::halfperiod_pattern(&f, 3, 0, 21).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        // theta: projection G^v -> E^v on the first two coordinates;
        // eta: the complementary column
        let theta = PolyMatrix::from_fn(&f, &v, 2, 3, |i, j| {
            if i == j {
                Poly::one(&f, &v)
            } else {
                Poly::zero(&f, &v)
            }
        });
        let eta = PolyMatrix::from_fn(&f, &v, 3, 1, |i, _| {
            if i == 2 {
                Poly::one(&f, &v)
            } else {
                Poly::zero(&f, &v)
            }
        });
        let j_iso = PolyMatrix::identity(&f, &v, 1);
        let m_sym = PolyMatrix::from_fn(&f, &v, 3, 3, |i, j| {
            if i <= j {
                Poly::random_homogeneous(&f, &v, 2, &mut rng)
            } else {
                Poly::zero(&f, &v)
            }
        });
        let m_sym = m_sym
            .add(&m_sym.transpose())
            .unwrap();
        let psi0 =
            degeneration_family(&q, &m_sym, &eta, &theta, &j_iso, &[-1, -1], &f.zero()).unwrap();
        // off-diagonal blocks vanish at t = 0
        for i in 0..3 {
            for j in 0..2 {
                assert!(psi0.mat.get(i, 3 + j).is_zero());
            }
        }
        // corner block is phi = theta M theta^T
        let phi = theta
            .matmul(&m_sym)
            .unwrap()
            .matmul(&theta.transpose())
            .unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(psi0.mat.get(3 + i, 3 + j), phi.get(i, j));
            }
        }
        // symmetric at several t values
        for t in [1u64, 2, 7, 19] {
            let psi = degeneration_family(&q, &m_sym, &eta, &theta, &j_iso, &[-1, -1], &t)
                .unwrap();
            assert!(psi.mat.is_symmetric());
        }
    }
}
