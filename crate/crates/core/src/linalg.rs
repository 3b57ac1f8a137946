//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{Schur, SVD};

use crate::{CMatrix, CVector, Error, Result, C64};

const SCHUR_MAX_ITER: usize = 20_000;

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Determinant by LU with partial pivoting.
pub fn det(m: &CMatrix) -> C64 {
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

/// Eigenvalues of a square complex matrix via the complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    if !all_finite(m) {
        return Err(Error::NonFinite("eigenvalue input"));
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER).ok_or(Error::RootFinding)?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Columns `w, Bw, ..., B^{k-1} w`.
pub fn krylov_matrix(b: &CMatrix, w: &CVector) -> CMatrix {
    let k = w.len();
    let mut out = CMatrix::zeros(k, k);
    let mut col = w.clone();
    for j in 0..k {
        out.set_column(j, &col);
        if j + 1 < k {
            col = b * &col;
        }
    }
    out
}

/// Orthonormal basis (as columns) of the column space of `m`, with rank
/// decided by `sigma_i > rel_tol * sigma_max`.
pub fn range_basis(m: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    let n = m.nrows();
    if m.ncols() == 0 || n == 0 {
        return Ok(CMatrix::zeros(n, 0));
    }
    let mut svd = SVD::try_new(m.clone(), true, false, f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::RootFinding)?;
    svd.sort_by_singular_values();
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let rank = if smax == 0.0 {
        0
    } else {
        svd.singular_values.iter().filter(|&&s| s > rel_tol * smax).count()
    };
    let u = svd.u.ok_or(Error::RootFinding)?;
    Ok(u.columns(0, rank).into_owned())
}

/// Gram-Schmidt closure of `start` under the given matrices; returns the
/// dimension of the smallest invariant subspace containing `start`.
pub fn invariant_span_dim(start: &CVector, mats: &[&CMatrix], tol: f64) -> usize {
    let k = start.len();
    let mut basis: Vec<CVector> = Vec::new();
    let mut queue = vec![start.clone()];
    while let Some(v) = queue.pop() {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dotc(&r);
                r -= q * c;
            }
        }
        let n = r.norm();
        if n > tol * v.norm().max(1e-300) && n > 0.0 {
            let q = r / C64::new(n, 0.0);
            for m in mats {
                queue.push(*m * &q);
            }
            basis.push(q);
            if basis.len() == k {
                break;
            }
        }
    }
    basis.len()
}
