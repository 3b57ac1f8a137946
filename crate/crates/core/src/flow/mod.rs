//! Scattering flow from Nahm data to a pair `(B, W)`.
//!
//! With `A_0 = T_1 + i T_2`, `A_1 = -i T_3`, `A_2 = T_1 - i T_2`, solve
//! `du/ds = (1/2) A_1 u` from the pole at `s = -1`, where solutions behave
//! like `(1 + s)^lambda v`, and read off `W = u(1)`, `B = -A_0(1)`.
//!
//! The integration runs on `[-1 + eps, 1 - eps]`; the result at `eps` and
//! `eps/2` is combined by Richardson extrapolation (error linear in `eps`).

mod ode;

pub use ode::{integrate, StepControl};

use crate::bwpairs::BWPair;
use crate::nahm::{spectrum_of_minus_i_t3, NahmData};
use crate::ratmaps::RationalMap;
use crate::{linalg, CMatrix, CVector, Error, Result, Tolerances, C64};

/// The matrices `A_0, A_1, A_2` as functions of `s`.
#[derive(Debug, Clone, Copy)]
pub struct CombinedMatrices<'a> {
    data: &'a NahmData,
}

pub fn combine(data: &NahmData) -> CombinedMatrices<'_> {
    CombinedMatrices { data }
}

impl CombinedMatrices<'_> {
    /// `T_1 + i T_2`.
    pub fn a0(&self, s: f64) -> CMatrix {
        let t = self.data.sample(s);
        &t[0] + &t[1] * C64::new(0.0, 1.0)
    }

    /// `-i T_3`.
    pub fn a1(&self, s: f64) -> CMatrix {
        let t = self.data.sample(s);
        &t[2] * C64::new(0.0, -1.0)
    }

    /// `T_1 - i T_2`.
    pub fn a2(&self, s: f64) -> CMatrix {
        let t = self.data.sample(s);
        &t[0] - &t[1] * C64::new(0.0, 1.0)
    }
}

/// Frobenius exponent `lambda = mu / 2` at `s = -1`, with `mu` the largest
/// eigenvalue of `-i t_3`: substituting `u = (1+s)^lambda v` into
/// `u' = (1/2) A_1 u` with `A_1 ~ (-i t_3)/(1+s)` gives `lambda v = (mu/2) v`.
pub fn indicial_exponent(data: &NahmData) -> Result<f64> {
    let spec = spectrum_of_minus_i_t3(&data.residue_minus().t()[2])?;
    Ok(0.5 * spec[0].re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub epsilon: f64,
    pub tol: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { epsilon: 1e-5, tol: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub b: CMatrix,
    pub w: CVector,
    pub epsilon_used: f64,
    /// Size of the Richardson correction relative to the `eps/2` result.
    pub extrapolation_error: f64,
    /// `|A_0(1 - eps)|` grows like `1/eps`: `A_0` has a pole at `s = 1`.
    pub endpoint_divergence_flag: bool,
    pub diagnostics: String,
}

/// Ratio window for `|A_0(1 - eps/2)| / |A_0(1 - eps)|` signalling a simple pole.
pub const DIVERGENCE_RATIO: (f64, f64) = (1.7, 2.3);

const MAX_STEP_FRACTION: f64 = 0.1;

/// Single-level solve: `u(1 - eps)` starting from `u(-1 + eps) = eps^lambda v`.
pub fn solve_once(data: &NahmData, v: &CVector, eps: f64, tol: f64) -> Result<CVector> {
    Ok(solve_with_stops(data, v, eps, tol, &[])?.0)
}

/// As [`solve_once`], also returning `u` at each of `stops`.
pub fn solve_with_stops(
    data: &NahmData,
    v: &CVector,
    eps: f64,
    tol: f64,
    stops: &[f64],
) -> Result<(CVector, Vec<CVector>)> {
    let lambda = indicial_exponent(data)?;
    let comb = combine(data);
    let u0 = v * C64::new(eps.powf(lambda), 0.0);
    let ctl = StepControl { tol, max_step_fraction: MAX_STEP_FRACTION };
    let mut out = Vec::new();
    let (u, _) = integrate(|s| comb.a1(s) * C64::new(0.5, 0.0), -1.0 + eps, 1.0 - eps, u0, &ctl, stops, &mut out)?;
    Ok((u, out))
}

/// Runs the flow with the declared top vector `v` of the residue at `-1`.
pub fn donaldson_flow(data: &NahmData, opts: &FlowOptions) -> Result<FlowResult> {
    donaldson_flow_from(data, data.residue_minus().v(), opts)
}

/// Runs the flow from an arbitrary start vector (scaled eigenvector, say).
pub fn donaldson_flow_from(data: &NahmData, v: &CVector, opts: &FlowOptions) -> Result<FlowResult> {
    let eps = opts.epsilon;
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::InvalidFlowParameter(format!("epsilon {eps} outside (0, 0.1)")));
    }
    if !(opts.tol > 0.0 && opts.tol < 1.0) {
        return Err(Error::InvalidFlowParameter(format!("tolerance {} outside (0, 1)", opts.tol)));
    }
    if v.len() != data.k() {
        return Err(Error::SizeMismatch(format!("start vector has length {}, k = {}", v.len(), data.k())));
    }
    let comb = combine(data);
    let half = 0.5 * eps;
    let w1 = solve_once(data, v, eps, opts.tol)?;
    let w2 = solve_once(data, v, half, opts.tol)?;
    let b1 = -comb.a0(1.0 - eps);
    let b2 = -comb.a0(1.0 - half);

    let n1 = linalg::max_abs(&b1);
    let n2 = linalg::max_abs(&b2);
    let ratio = if n1 > 0.0 { n2 / n1 } else { 1.0 };
    let divergent = n1 > 0.0 && ratio >= DIVERGENCE_RATIO.0 && ratio <= DIVERGENCE_RATIO.1;

    let two = C64::new(2.0, 0.0);
    let w = &w2 * two - &w1;
    let b = &b2 * two - &b1;
    let extrapolation_error = linalg::max_abs_vec(&(&w - &w2)).max(linalg::max_abs(&(&b - &b2)));

    let mut diagnostics = format!(
        "|A0(1-eps)| = {n1:.6e}, |A0(1-eps/2)| = {n2:.6e}, growth ratio {ratio:.4}; |W| = {:.6e}",
        w.norm()
    );
    if divergent {
        diagnostics.push_str("; A0 has a simple pole at s = 1, B = -A0(1) is undefined");
    } else {
        let asym = linalg::max_abs(&(&b - b.transpose()));
        if asym > 1e-6 * linalg::max_abs(&b).max(1.0) {
            diagnostics.push_str(&format!("; B is not symmetric (asymmetry {asym:.3e})"));
        }
    }
    if ![&w, &w1, &w2].iter().all(|x| x.iter().all(|z| z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::StepFailure { s: 1.0 - eps });
    }
    Ok(FlowResult {
        b,
        w,
        epsilon_used: eps,
        extrapolation_error,
        endpoint_divergence_flag: divergent,
        diagnostics,
    })
}

/// `W^t (zI - B)^{-1} W` for a non-divergent flow result.
pub fn extract_map(result: &FlowResult) -> Result<RationalMap> {
    extract_pair(result)?.project().map(|p| p.map)
}

/// The pair `(B, W)` of a non-divergent flow result, `B` symmetrized.
pub fn extract_pair(result: &FlowResult) -> Result<BWPair> {
    if result.endpoint_divergence_flag {
        return Err(Error::DivergentEndpoint);
    }
    let tol = Tolerances { symmetry: 1e-6, ..Tolerances::default() };
    let pair = BWPair::with_tolerances(result.b.clone(), result.w.clone(), &tol)?;
    let b = pair.b();
    let sym = (b + b.transpose()) * C64::new(0.5, 0.0);
    BWPair::new(sym, result.w.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nahm::su2_residues;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn combined_matrices_k1() {
        let cs = [1.0, 2.0, 3.0];
        let data = NahmData::builtin_k1(cs);
        let comb = combine(&data);
        assert_eq!(comb.a1(0.3)[(0, 0)], c(-1.5, 0.0));
        assert_eq!(comb.a0(0.3)[(0, 0)], c(1.0, -0.5));
        assert_eq!(comb.a2(0.3)[(0, 0)], c(-1.0, -0.5));
    }

    #[test]
    fn combined_matrices_k2_pointwise() {
        let data = NahmData::builtin_k2(0.4).unwrap();
        let comb = combine(&data);
        for s in [-0.5, 0.0, 0.6] {
            let t = data.sample(s);
            assert!((comb.a1(s) - &t[2] * c(0.0, -1.0)).norm() < 1e-15);
            assert!((comb.a0(s) + comb.a2(s) - &t[0] * c(2.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn indicial_exponents() {
        assert_eq!(indicial_exponent(&NahmData::builtin_k1([1.0, 2.0, 3.0])).unwrap(), 0.0);
        assert!((indicial_exponent(&NahmData::builtin_k2(0.5).unwrap()).unwrap() - 0.25).abs() < 1e-14);
        // k = 3 via a tabulated pure-pole triple with spin-1 residues at -1.
        let r = su2_residues(3);
        let lam = 0.5 * spectrum_of_minus_i_t3(&r.t()[2]).unwrap()[0].re;
        assert!((lam - 0.5).abs() < 1e-14);
    }

    #[test]
    fn k1_closed_form() {
        let cs = [0.7, -1.3, 0.9];
        let res = donaldson_flow(&NahmData::builtin_k1(cs), &FlowOptions::default()).unwrap();
        assert!(!res.endpoint_divergence_flag);
        assert!((res.b[(0, 0)] - c(-cs[1] / 2.0, cs[0] / 2.0)).norm() < 1e-12);
        assert!((res.w[0] - c((-cs[2] / 2.0).exp(), 0.0)).norm() < 1e-9);
    }

    #[test]
    fn zero_data_gives_minimal_map() {
        let res = donaldson_flow(&NahmData::builtin_k1([0.0; 3]), &FlowOptions::default()).unwrap();
        let f = extract_map(&res).unwrap();
        assert!(f.coefficient_distance(&RationalMap::new(
            crate::ratmaps::Polynomial::from_real(&[1.0]),
            crate::ratmaps::Polynomial::from_real(&[0.0, 1.0])
        ).unwrap()) < 1e-12);
    }

    #[test]
    fn divergent_endpoint_refused() {
        let res = donaldson_flow(&NahmData::builtin_k2(0.5).unwrap(), &FlowOptions::default()).unwrap();
        assert!(res.endpoint_divergence_flag);
        assert!(res.diagnostics.contains("growth ratio"));
        assert_eq!(extract_map(&res).unwrap_err(), Error::DivergentEndpoint);
    }

    #[test]
    fn bad_parameters() {
        let d = NahmData::builtin_k1([0.0; 3]);
        assert!(donaldson_flow(&d, &FlowOptions { epsilon: 0.2, tol: 1e-10 }).is_err());
        assert!(donaldson_flow(&d, &FlowOptions { epsilon: 1e-3, tol: 0.0 }).is_err());
    }
}
