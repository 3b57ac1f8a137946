use nalgebra::SVD;

use crate::{linalg, CMatrix, CVector, Error, Result, C64};

/// Residue triple `t_1, t_2, t_3` of Nahm data at a pole, with the unit
/// vector `v` spanning the top eigenspace of `-i t_3`.
///
/// Taking residues in `dT_1/ds = [T_2, T_3]` (and cyclic) forces
/// `t_1 + [t_2, t_3] = 0` (and cyclic), i.e. `t_j = i S_j` for an `su(2)`
/// representation `S_j`; the spectrum of `-i t_3` is then
/// `(k-1)/2, (k-3)/2, ..., -(k-1)/2` for an irreducible triple.
#[derive(Debug, Clone, PartialEq)]
pub struct SU2Residues {
    t: [CMatrix; 3],
    v: CVector,
}

impl SU2Residues {
    /// Validates the residue equations, the spectrum of `-i t_3`,
    /// irreducibility and `v`. When `v` is `None` it is computed.
    pub fn new(t: [CMatrix; 3], v: Option<CVector>) -> Result<Self> {
        let k = t[0].nrows();
        if k == 0 || t.iter().any(|m| m.nrows() != k || m.ncols() != k) {
            return Err(Error::InvalidResidues("t_i must be square of equal size".into()));
        }
        if !t.iter().all(linalg::all_finite) {
            return Err(Error::NonFinite("residues"));
        }
        let scale = t.iter().map(linalg::max_abs).fold(1.0f64, f64::max);
        let defect = residue_equation_defect(&t);
        if defect > 1e-12 * scale * scale {
            return Err(Error::InvalidResidues(format!("t_i + [t_j, t_m] = {defect:e}")));
        }
        let spec = spectrum_of_minus_i_t3(&t[2])?;
        if spec.iter().any(|z| z.im.abs() > 1e-9 * scale) {
            return Err(Error::InvalidResidues("-i t3 has non-real eigenvalues".into()));
        }
        let ev: Vec<f64> = spec.iter().map(|z| z.re).collect();
        if k > 1 {
            let gaps: Vec<f64> = ev.windows(2).map(|w| w[0] - w[1]).collect();
            if gaps.iter().any(|&g| g <= 1e-9 * scale) {
                return Err(Error::InvalidResidues("-i t3 spectrum is not simple".into()));
            }
            if gaps.iter().any(|&g| (g - gaps[0]).abs() > 1e-9 * scale) {
                return Err(Error::InvalidResidues("-i t3 spectrum is not equally spaced".into()));
            }
        }
        let top = ev[0];
        let minus_i_t3 = &t[2] * C64::new(0.0, -1.0);
        let v = match v {
            Some(v) => v,
            None => top_eigenvector(&minus_i_t3, top)?,
        };
        if v.len() != k || !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidResidues("v has the wrong length".into()));
        }
        if (v.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidResidues("v is not a unit vector".into()));
        }
        let eig_defect = (&minus_i_t3 * &v - &v * C64::new(top, 0.0)).norm();
        if eig_defect > 1e-10 * scale {
            return Err(Error::InvalidResidues("v is not in the top eigenspace of -i t3".into()));
        }
        if linalg::invariant_span_dim(&v, &[&t[0], &t[1], &t[2]], 1e-10) != k {
            return Err(Error::InvalidResidues("triple is reducible".into()));
        }
        Ok(SU2Residues { t, v })
    }

    /// The trivial one-dimensional representation.
    pub fn trivial() -> Self {
        SU2Residues { t: std::array::from_fn(|_| CMatrix::zeros(1, 1)), v: CVector::from_element(1, C64::new(1.0, 0.0)) }
    }

    pub fn k(&self) -> usize {
        self.v.len()
    }

    pub fn t(&self) -> &[CMatrix; 3] {
        &self.t
    }

    pub fn v(&self) -> &CVector {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().all(|m| linalg::max_abs(m) == 0.0)
    }
}

/// `t_i = i S_i` with `S_i` the spin-`(k-1)/2` matrices in the basis where
/// `S_3 = diag((k-1)/2, ..., -(k-1)/2)`; `v` is the first basis vector.
pub fn su2_residues(k: usize) -> SU2Residues {
    assert!(k >= 1, "representation dimension must be positive");
    let spin = (k as f64 - 1.0) / 2.0;
    let mut raise = CMatrix::zeros(k, k);
    let mut s3 = CMatrix::zeros(k, k);
    for a in 0..k {
        let m = spin - a as f64;
        s3[(a, a)] = C64::new(m, 0.0);
        if a > 0 {
            // S_+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, and |m+1> is basis index a-1.
            raise[(a - 1, a)] = C64::new((spin * (spin + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let lower = raise.adjoint();
    let s1 = (&raise + &lower) * C64::new(0.5, 0.0);
    let s2 = (&raise - &lower) * C64::new(0.0, -0.5);
    let i = C64::new(0.0, 1.0);
    let mut v = CVector::zeros(k);
    v[0] = C64::new(1.0, 0.0);
    SU2Residues { t: [s1 * i, s2 * i, s3 * i], v }
}

/// `max_i |t_i + [t_j, t_m]|_F` over cyclic `(i, j, m)`.
pub fn residue_equation_defect(t: &[CMatrix; 3]) -> f64 {
    (0..3)
        .map(|i| (&t[i] + linalg::commutator(&t[(i + 1) % 3], &t[(i + 2) % 3])).norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues of `-i t_3`, sorted by descending real part.
pub fn spectrum_of_minus_i_t3(t3: &CMatrix) -> Result<Vec<C64>> {
    let mut ev = linalg::eigenvalues(&(t3 * C64::new(0.0, -1.0)))?;
    ev.sort_by(|a, b| b.re.total_cmp(&a.re));
    Ok(ev)
}

/// Unit vector minimizing `|(M - lambda) x|`.
pub fn top_eigenvector(m: &CMatrix, lambda: f64) -> Result<CVector> {
    let k = m.nrows();
    let shifted = m - CMatrix::identity(k, k) * C64::new(lambda, 0.0);
    let mut svd = SVD::try_new(shifted, false, true, f64::EPSILON, 20_000).ok_or(Error::RootFinding)?;
    svd.sort_by_singular_values();
    let vt = svd.v_t.ok_or(Error::RootFinding)?;
    let mut x: CVector = vt.row(k - 1).adjoint();
    // Fix the phase so the largest component is real positive.
    let (idx, _) = x.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap();
    let phase = x[idx] / x[idx].norm();
    x /= phase;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trivial_representation() {
        let r = su2_residues(1);
        assert!(r.is_zero());
        assert_eq!(r.v()[0], c(1.0, 0.0));
        assert!(SU2Residues::new(r.t().clone(), Some(r.v().clone())).is_ok());
    }

    #[test]
    fn spin_half_matches_pauli_by_direct_multiplication() {
        let r = su2_residues(2);
        let half_i = c(0.0, 0.5);
        let sigma = [
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
        ];
        for i in 0..3 {
            assert!((&r.t()[i] - &sigma[i] * half_i).norm() < 1e-15);
        }
        // t1 + [t2, t3] with t = i sigma / 2: [t2, t3] = -(1/4) [s2, s3] = -(1/4)(2i s1) = -t1.
        let t = r.t();
        let comm = &t[1] * &t[2] - &t[2] * &t[1];
        assert!((&t[0] + comm).norm() < 1e-15);
        assert_eq!(r.v().as_slice(), &[c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn spectra_are_half_integer_ladders() {
        for k in 1..=7 {
            let r = su2_residues(k);
            assert!(residue_equation_defect(r.t()) < 1e-12);
            let ev = spectrum_of_minus_i_t3(&r.t()[2]).unwrap();
            for (a, z) in ev.iter().enumerate() {
                assert!((z.re - ((k as f64 - 1.0) / 2.0 - a as f64)).abs() < 1e-14);
            }
            assert!(SU2Residues::new(r.t().clone(), Some(r.v().clone())).is_ok(), "k={k}");
        }
        let ev = spectrum_of_minus_i_t3(&su2_residues(3).t()[2]).unwrap();
        let re: Vec<f64> = ev.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn reducible_triple_rejected() {
        // Direct sum of two trivial representations.
        let t: [CMatrix; 3] = std::array::from_fn(|_| CMatrix::zeros(2, 2));
        assert!(SU2Residues::new(t, None).is_err());
    }

    #[test]
    fn doubled_normalization_rejected() {
        let r = su2_residues(2);
        let t = r.t().clone().map(|m| m * c(2.0, 0.0));
        assert!(matches!(SU2Residues::new(t, None), Err(Error::InvalidResidues(_))));
    }

    #[test]
    fn computed_top_vector() {
        let r = su2_residues(3);
        let s = SU2Residues::new(r.t().clone(), None).unwrap();
        assert!((s.v() - r.v()).norm() < 1e-12);
    }
}
