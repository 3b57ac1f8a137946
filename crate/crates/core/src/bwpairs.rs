//! Donaldson pairs `(B, W)`: `B` complex symmetric (transpose, not adjoint),
//! `W` a vector, projecting to `f(z) = W^t (zI - B)^{-1} W`.
//!
//! `O(k)` acts by `(Q B Q^t, Q W)` and leaves the projection unchanged. Over
//! maps with distinct poles the diagonal pairs give a slice on which only
//! signed permutations act.

use nalgebra::DMatrix;

use crate::monodromy::SignedPermutation;
use crate::ratmaps::{PartialFractions, Polynomial, RationalMap};
use crate::tolerance::{min_separation, separation_threshold};
use crate::{linalg, CMatrix, CVector, Error, Result, Tolerances, C64, MAX_DEGREE};

#[derive(Debug, Clone, PartialEq)]
pub struct BWPair {
    b: CMatrix,
    w: CVector,
}

/// Result of [`BWPair::project`].
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub map: RationalMap,
    /// Set when `W` is not cyclic and the realized map has degree below `k`.
    pub degree_drop: bool,
}

impl BWPair {
    pub fn new(b: CMatrix, w: CVector) -> Result<Self> {
        Self::with_tolerances(b, w, &Tolerances::default())
    }

    /// Checks shapes, finiteness and `max |B - B^t| <= symmetry * max |B|`.
    /// Cyclicity is not required; see [`BWPair::is_cyclic`].
    pub fn with_tolerances(b: CMatrix, w: CVector, tol: &Tolerances) -> Result<Self> {
        let k = w.len();
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(k));
        }
        if b.nrows() != k || b.ncols() != k {
            return Err(Error::SizeMismatch(format!("B is {}x{} but W has length {k}", b.nrows(), b.ncols())));
        }
        if !linalg::all_finite(&b) || !w.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("pair"));
        }
        let asym = linalg::max_abs(&(&b - b.transpose()));
        if asym > tol.symmetry * linalg::max_abs(&b) {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        Ok(BWPair { b, w })
    }

    /// Diagonal pair `B = diag(diag)`.
    pub fn diagonal(diag: &[C64], w: &[C64]) -> Result<Self> {
        if diag.len() != w.len() {
            return Err(Error::SizeMismatch(format!("{} diagonal entries, {} W entries", diag.len(), w.len())));
        }
        BWPair::new(CMatrix::from_diagonal(&CVector::from_column_slice(diag)), CVector::from_column_slice(w))
    }

    pub fn k(&self) -> usize {
        self.w.len()
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn w(&self) -> &CVector {
        &self.w
    }

    /// `det [W, BW, ..., B^{k-1} W]`.
    pub fn cyclicity(&self) -> C64 {
        linalg::det(&linalg::krylov_matrix(&self.b, &self.w))
    }

    /// `|det K| > cyclic * prod_j |K e_j|`, the Hadamard bound being the scale.
    pub fn is_cyclic(&self, tol: &Tolerances) -> bool {
        let kry = linalg::krylov_matrix(&self.b, &self.w);
        let scale: f64 = kry.column_iter().map(|c| c.norm()).product();
        linalg::det(&kry).norm() > tol.cyclic * scale
    }

    /// `f(z) = W^t (zI - B)^{-1} W` via Faddeev-LeVerrier.
    ///
    /// Non-cyclic pairs are first reduced to a minimal realization (the
    /// reachable subspace, then the observable quotient); the reduced map
    /// is returned with `degree_drop` set.
    pub fn project(&self) -> Result<Projection> {
        self.project_with(&Tolerances::default())
    }

    pub fn project_with(&self, tol: &Tolerances) -> Result<Projection> {
        let k = self.k();
        let c_row = self.w.transpose();
        let (a, b, c) = minimal_realization(&self.b, &self.w, &c_row, tol.rank)?;
        let n = a.nrows();
        let (p, q) = faddeev_leverrier(&a, &b, &c);
        let map = if n == 0 { RationalMap::zero() } else { RationalMap::from_parts_unchecked(p, q) };
        Ok(Projection { map, degree_drop: n < k })
    }

    /// `(Q B Q^t, Q W)`; the conjugated matrix is re-symmetrized.
    pub fn act(&self, q: &OrthogonalMatrix) -> Result<BWPair> {
        if q.dim() != self.k() {
            return Err(Error::SizeMismatch(format!("Q is {0}x{0}, pair has k = {1}", q.dim(), self.k())));
        }
        let qc = q.as_complex();
        let m = &qc * &self.b * qc.transpose();
        let b = (&m + m.transpose()) * C64::new(0.5, 0.0);
        Ok(BWPair { b, w: &qc * &self.w })
    }

    /// Diagonal lift over a map with distinct poles: `B = diag(b_i)`,
    /// `W_i = sqrt(r_i)` on the principal branch (negative reals map to
    /// `+i sqrt|r|`).
    pub fn lift_distinct(f: &RationalMap, tol: &Tolerances) -> Result<BWPair> {
        let pf = f.poles_and_residues(tol)?;
        Ok(Self::lift_partial_fractions(&pf))
    }

    pub fn lift_partial_fractions(pf: &PartialFractions) -> BWPair {
        let w: Vec<C64> = pf.residues().iter().map(|&r| principal_sqrt(r)).collect();
        BWPair {
            b: CMatrix::from_diagonal(&CVector::from_column_slice(pf.poles())),
            w: CVector::from_vec(w),
        }
    }

    /// Diagonal entries, if `B` is diagonal to within `symmetry * max(1, |B|)`.
    pub fn diagonal_entries(&self, tol: &Tolerances) -> Option<Vec<C64>> {
        let k = self.k();
        let cut = tol.symmetry * linalg::max_abs(&self.b).max(1.0);
        for i in 0..k {
            for j in 0..k {
                if i != j && self.b[(i, j)].norm() > cut {
                    return None;
                }
            }
        }
        Some((0..k).map(|i| self.b[(i, i)]).collect())
    }

    /// Applies a signed permutation: `(P B P^t, P W)`.
    pub fn act_signed(&self, g: &SignedPermutation) -> Result<BWPair> {
        if g.k() != self.k() {
            return Err(Error::GroupSizeMismatch(g.k(), self.k()));
        }
        let p = g.matrix().map(|x| C64::new(x, 0.0));
        Ok(BWPair { b: &p * &self.b * p.transpose(), w: &p * &self.w })
    }
}

/// Square root with the cut on the negative real axis, where `-x` maps to
/// `+i sqrt(x)` regardless of the sign of the zero imaginary part.
pub fn principal_sqrt(r: C64) -> C64 {
    let im = if r.im == 0.0 { 0.0 } else { r.im };
    C64::new(r.re, im).sqrt()
}

/// Signed permutation `g` with `g . pair1 = pair2`, for diagonal pairs with
/// distinct entries and nonzero `W` components.
pub fn relate(pair1: &BWPair, pair2: &BWPair, tol: &Tolerances) -> Result<SignedPermutation> {
    if pair1.k() != pair2.k() {
        return Err(Error::GroupSizeMismatch(pair1.k(), pair2.k()));
    }
    let k = pair1.k();
    let d1 = diagonal_slice(pair1, tol)?;
    let d2 = diagonal_slice(pair2, tol)?;
    let thresh = separation_threshold(tol.delta, &d1);
    let mut used = vec![false; k];
    let mut pi = Vec::with_capacity(k);
    let mut signs = Vec::with_capacity(k);
    for (i, b) in d1.iter().enumerate() {
        let (j, dist) = d2
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, c)| (j, (c - b).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("k unused entries remain");
        if dist > thresh {
            return Err(Error::NoMatch(format!("entry {b} has no partner (nearest at distance {dist:e})")));
        }
        used[j] = true;
        let ratio = pair2.w[j] / pair1.w[i];
        let sign = if (ratio - 1.0).norm() <= tol.sign_match {
            1
        } else if (ratio + 1.0).norm() <= tol.sign_match {
            -1
        } else {
            return Err(Error::NotSignRelated(format!("W ratio {ratio} at component {}", i + 1)));
        };
        pi.push(j);
        signs.push(sign);
    }
    SignedPermutation::new(pi, signs)
}

fn diagonal_slice(pair: &BWPair, tol: &Tolerances) -> Result<Vec<C64>> {
    let d = pair.diagonal_entries(tol).ok_or(Error::NotDiagonal)?;
    if min_separation(&d) <= separation_threshold(tol.delta, &d) {
        return Err(Error::NotDiagonal);
    }
    let wmax = pair.w.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    if pair.w.iter().any(|z| z.norm() <= tol.residue * wmax) {
        return Err(Error::NotDiagonal);
    }
    Ok(d)
}

/// Reduces `(A, b, c)` to a minimal realization of `c (zI - A)^{-1} b`.
fn minimal_realization(
    a: &CMatrix,
    b: &CVector,
    c: &nalgebra::RowDVector<C64>,
    rank_tol: f64,
) -> Result<(CMatrix, CVector, nalgebra::RowDVector<C64>)> {
    let n = a.nrows();
    let growth = a.norm().max(1.0);
    let c_scale = c.norm();
    let reach = normalize_columns(linalg::krylov_matrix(a, b), b.norm(), growth, rank_tol);
    let v = linalg::range_basis(&reach, rank_tol)?;
    let (a, b, c) = if v.ncols() < n {
        let vh = v.adjoint();
        (&vh * a * &v, &vh * b, c * &v)
    } else {
        (a.clone(), b.clone(), c.clone())
    };
    let r = a.nrows();
    if r == 0 {
        return Ok((a, b, c));
    }
    // Observability matrix rows c A^j; its row space is spanned by the range of O^H.
    let mut obs_h = CMatrix::zeros(r, r);
    let mut row = c.clone();
    for j in 0..r {
        obs_h.set_column(j, &row.adjoint());
        row = &row * &a;
    }
    let u = linalg::range_basis(&normalize_columns(obs_h, c_scale, growth, rank_tol), rank_tol)?;
    if u.ncols() < r {
        let uh = u.adjoint();
        Ok((&uh * &a * &u, &uh * &b, &c * &u))
    } else {
        Ok((a, b, c))
    }
}

/// Scales Krylov column `j` to unit length, or to zero when it is below
/// `tol * scale * growth^j`.
fn normalize_columns(mut m: CMatrix, scale: f64, growth: f64, tol: f64) -> CMatrix {
    let mut floor = tol * scale;
    for mut col in m.column_iter_mut() {
        let n = col.norm();
        if n > floor {
            col /= C64::new(n, 0.0);
        } else {
            col.fill(C64::new(0.0, 0.0));
        }
        floor *= growth;
    }
    m
}

/// Returns `(p, q)` with `q = det(zI - A)` and `p = c adj(zI - A) b`.
fn faddeev_leverrier(a: &CMatrix, b: &CVector, c: &nalgebra::RowDVector<C64>) -> (Polynomial, Polynomial) {
    let n = a.nrows();
    let mut q = vec![C64::new(0.0, 0.0); n + 1];
    let mut p = vec![C64::new(0.0, 0.0); n];
    q[n] = C64::new(1.0, 0.0);
    let ident = CMatrix::identity(n, n);
    let mut m = CMatrix::zeros(n, n);
    for j in 1..=n {
        m = a * &m + &ident * q[n + 1 - j];
        p[n - j] = (c * &m * b)[(0, 0)];
        q[n - j] = -(a * &m).trace() / j as f64;
    }
    (Polynomial::new(p), Polynomial::new(q))
}

/// Real orthogonal `k x k` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMatrix(DMatrix<f64>);

impl OrthogonalMatrix {
    pub fn new(q: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerances(q, &Tolerances::default())
    }

    pub fn with_tolerances(q: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        if q.nrows() != q.ncols() {
            return Err(Error::SizeMismatch(format!("Q is {}x{}", q.nrows(), q.ncols())));
        }
        if !q.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("orthogonal matrix"));
        }
        let n = q.nrows();
        let defect = (q.transpose() * &q - DMatrix::<f64>::identity(n, n)).amax();
        if defect > tol.orthogonal {
            return Err(Error::NotOrthogonal { defect });
        }
        Ok(OrthogonalMatrix(q))
    }

    pub fn identity(k: usize) -> Self {
        OrthogonalMatrix(DMatrix::identity(k, k))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    fn as_complex(&self) -> CMatrix {
        self.0.map(|x| C64::new(x, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn r(x: f64) -> C64 {
        c(x, 0.0)
    }

    fn mat(k: usize, rows: &[C64]) -> CMatrix {
        CMatrix::from_row_slice(k, k, rows)
    }

    #[test]
    fn scalar_resolvent() {
        let pair = BWPair::diagonal(&[r(0.0)], &[r(1.0)]).unwrap();
        let proj = pair.project().unwrap();
        assert!(!proj.degree_drop);
        assert_eq!(proj.map.numerator(), &Polynomial::from_real(&[1.0]));
        assert_eq!(proj.map.denominator(), &Polynomial::from_real(&[0.0, 1.0]));
    }

    #[test]
    fn diagonal_projection() {
        let pair = BWPair::diagonal(&[r(1.0), r(-1.0)], &[r(1.0), r(1.0)]).unwrap();
        let f = pair.project().unwrap().map;
        assert!(f.coefficient_distance(&RationalMap::new(
            Polynomial::from_real(&[0.0, 2.0]),
            Polynomial::from_real(&[-1.0, 0.0, 1.0])
        ).unwrap()) < 1e-15);
    }

    #[test]
    fn off_diagonal_projection_matches_symbolic_inverse() {
        // (zI - B)^{-1} = [[z, 1], [1, z]] / (z^2 - 1), so W^t(...)W = z/(z^2 - 1) for W = e_1.
        let pair = BWPair::new(mat(2, &[r(0.0), r(1.0), r(1.0), r(0.0)]), CVector::from_vec(vec![r(1.0), r(0.0)]))
            .unwrap();
        let proj = pair.project().unwrap();
        assert!(!proj.degree_drop);
        assert!((&proj.map.numerator().clone() - &Polynomial::from_real(&[0.0, 1.0])).norm_max() < 1e-15);
        assert!((&proj.map.denominator().clone() - &Polynomial::from_real(&[-1.0, 0.0, 1.0])).norm_max() < 1e-15);
    }

    #[test]
    fn cyclicity_examples() {
        // Direct 2x2 determinant of [[1, 1], [1, -1]].
        let p = BWPair::diagonal(&[r(1.0), r(-1.0)], &[r(1.0), r(1.0)]).unwrap();
        assert!((p.cyclicity() - r(-2.0)).norm() < 1e-15);
        let p = BWPair::diagonal(&[r(1.0), r(-1.0)], &[r(1.0), r(0.0)]).unwrap();
        assert_eq!(p.cyclicity(), r(0.0));
        assert!(!p.is_cyclic(&Tolerances::default()));
        let p = BWPair::diagonal(&[c(3.0, 2.0)], &[r(1.0)]).unwrap();
        assert_eq!(p.cyclicity(), r(1.0));
    }

    #[test]
    fn degree_drop_reduces_map() {
        let p = BWPair::diagonal(&[r(1.0), r(-1.0)], &[r(2.0), r(0.0)]).unwrap();
        let proj = p.project().unwrap();
        assert!(proj.degree_drop);
        assert_eq!(proj.map.k(), 1);
        let pf = proj.map.poles_and_residues(&Tolerances::default()).unwrap();
        assert!((pf.poles()[0] - r(1.0)).norm() < 1e-12);
        assert!((pf.residues()[0] - r(4.0)).norm() < 1e-12);
    }

    #[test]
    fn isotropic_w_with_zero_b_projects_to_zero() {
        // W^t W = 0 and B = 0 give f = 0 although W != 0.
        let p = BWPair::new(CMatrix::zeros(2, 2), CVector::from_vec(vec![r(1.0), c(0.0, 1.0)])).unwrap();
        let proj = p.project().unwrap();
        assert!(proj.degree_drop);
        assert_eq!(proj.map.k(), 0);
    }

    #[test]
    fn nilpotent_symmetric_is_cyclic() {
        let b = mat(2, &[r(1.0), c(0.0, 1.0), c(0.0, 1.0), r(-1.0)]);
        let p = BWPair::new(b, CVector::from_vec(vec![r(1.0), r(0.0)])).unwrap();
        assert!(p.is_cyclic(&Tolerances::default()));
        let f = p.project().unwrap().map;
        // 1/z + 1/z^2 = (z + 1)/z^2.
        assert!((&f.numerator().clone() - &Polynomial::from_real(&[1.0, 1.0])).norm_max() < 1e-14);
        assert!((&f.denominator().clone() - &Polynomial::from_real(&[0.0, 0.0, 1.0])).norm_max() < 1e-14);
    }

    #[test]
    fn orthogonal_action() {
        let pair = BWPair::diagonal(&[r(1.0), r(-1.0)], &[r(1.0), r(2.0)]).unwrap();
        assert_eq!(pair.act(&OrthogonalMatrix::identity(2)).unwrap(), pair);
        let swap = OrthogonalMatrix::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let out = pair.act(&swap).unwrap();
        assert_eq!(out, BWPair::diagonal(&[r(-1.0), r(1.0)], &[r(2.0), r(1.0)]).unwrap());
        assert!(matches!(
            OrthogonalMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0])),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn lift_examples() {
        let tol = Tolerances::default();
        let f = RationalMap::new(Polynomial::from_real(&[1.0]), Polynomial::from_real(&[0.0, 1.0])).unwrap();
        let l = BWPair::lift_distinct(&f, &tol).unwrap();
        assert_eq!(l, BWPair::diagonal(&[r(0.0)], &[r(1.0)]).unwrap());

        let f = RationalMap::new(Polynomial::from_real(&[-1.0]), Polynomial::from_real(&[0.0, 1.0])).unwrap();
        let l = BWPair::lift_distinct(&f, &tol).unwrap();
        assert_eq!(l.w()[0], c(0.0, 1.0));

        let f = RationalMap::new(Polynomial::from_real(&[1.0]), Polynomial::from_real(&[0.0, 0.0, 1.0])).unwrap();
        assert!(matches!(BWPair::lift_distinct(&f, &tol), Err(Error::RepeatedPoles { .. })));
    }

    #[test]
    fn principal_branch_ignores_negative_zero() {
        assert_eq!(principal_sqrt(c(-4.0, -0.0)), c(0.0, 2.0));
        assert_eq!(principal_sqrt(c(-4.0, 0.0)), c(0.0, 2.0));
    }

    #[test]
    fn relate_examples() {
        let tol = Tolerances::default();
        let p = BWPair::diagonal(&[r(1.0), r(-1.0)], &[r(1.0), r(1.0)]).unwrap();
        assert!(relate(&p, &p, &tol).unwrap().is_identity());

        let q = BWPair::diagonal(&[r(-1.0), r(1.0)], &[r(1.0), r(-1.0)]).unwrap();
        let g = relate(&p, &q, &tol).unwrap();
        // Exhaustive oracle over the 8 elements of the group of order 8.
        let matches: Vec<_> = SignedPermutation::all(2)
            .into_iter()
            .filter(|h| p.act_signed(h).unwrap() == q)
            .collect();
        assert_eq!(matches, vec![g.clone()]);
        assert_eq!(g.pi(), &[1, 0]);
        assert_eq!(g.signs(), &[-1, 1]);

        let q = BWPair::diagonal(&[r(1.0), r(-1.0)], &[r(2.0), r(1.0)]).unwrap();
        assert!(matches!(relate(&p, &q, &tol), Err(Error::NotSignRelated(_))));

        let q = BWPair::diagonal(&[r(1.0), r(-2.0)], &[r(1.0), r(1.0)]).unwrap();
        assert!(matches!(relate(&p, &q, &tol), Err(Error::NoMatch(_))));
    }

    #[test]
    fn asymmetric_b_rejected() {
        let b = mat(2, &[r(0.0), r(1.0), r(0.0), r(0.0)]);
        assert!(matches!(
            BWPair::new(b, CVector::from_vec(vec![r(1.0), r(0.0)])),
            Err(Error::NotSymmetric { .. })
        ));
    }
}
