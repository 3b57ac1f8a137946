use super::data::{NahmData, Triple};
use super::residues::{residue_equation_defect, spectrum_of_minus_i_t3, top_eigenvector};
use crate::{linalg, CMatrix, Error, Result, C64};

/// Minimum distance of residual grid points from the endpoints.
pub const ENDPOINT_MARGIN: f64 = 1e-3;

/// Central-difference stencils for `dT/ds`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Second,
    Fourth,
    Eighth,
}

impl Stencil {
    /// `(offset, weight)` pairs for positive offsets; the stencil is odd.
    fn weights(self) -> &'static [(f64, f64)] {
        match self {
            Stencil::Second => &[(1.0, 0.5)],
            Stencil::Fourth => &[(1.0, 2.0 / 3.0), (2.0, -1.0 / 12.0)],
            Stencil::Eighth => &[(1.0, 4.0 / 5.0), (2.0, -1.0 / 5.0), (3.0, 4.0 / 105.0), (4.0, -1.0 / 280.0)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualOptions {
    /// Step as a fraction of the distance to the nearest endpoint.
    pub step_fraction: f64,
    pub stencil: Stencil,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        ResidualOptions { step_fraction: 0.01, stencil: Stencil::Eighth }
    }
}

/// `n` equally spaced points strictly inside `(-1, 1)`, excluding the endpoints.
pub fn interior_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| -1.0 + 2.0 * (j + 1) as f64 / (n + 1) as f64).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    for &s in grid {
        if !(s.abs() <= 1.0 - ENDPOINT_MARGIN) {
            return Err(Error::GridOutOfRange { s });
        }
    }
    Ok(())
}

/// `max_s max_i |dT_i/ds - [T_j, T_m]|_F` with default options.
pub fn nahm_residual(data: &NahmData, grid: &[f64]) -> Result<f64> {
    nahm_residual_with(data, grid, &ResidualOptions::default())
}

pub fn nahm_residual_with(data: &NahmData, grid: &[f64], opts: &ResidualOptions) -> Result<f64> {
    check_grid(grid)?;
    let mut worst: f64 = 0.0;
    for &s in grid {
        let h = power_of_two_below(opts.step_fraction * (1.0 - s.abs()));
        let deriv = derivative(data, s, h, opts.stencil);
        let t = data.sample(s);
        for i in 0..3 {
            let lhs = &deriv[i];
            let rhs = linalg::commutator(&t[(i + 1) % 3], &t[(i + 2) % 3]);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// Largest power of two not above `x`, so that `s + j h` is exact.
fn power_of_two_below(x: f64) -> f64 {
    2f64.powi(x.log2().floor() as i32)
}

fn derivative(data: &NahmData, s: f64, h: f64, stencil: Stencil) -> Triple {
    let k = data.k();
    let mut out: Triple = std::array::from_fn(|_| CMatrix::zeros(k, k));
    for &(off, w) in stencil.weights() {
        let fwd = data.sample(s + off * h);
        let bwd = data.sample(s - off * h);
        for i in 0..3 {
            out[i] += (&fwd[i] - &bwd[i]) * C64::new(w / h, 0.0);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Minus,
    Plus,
}

impl Endpoint {
    pub fn value(self) -> f64 {
        match self {
            Endpoint::Minus => -1.0,
            Endpoint::Plus => 1.0,
        }
    }
}

/// Residue triple estimated from samples near an endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueFit {
    pub t: Triple,
    /// Eigenvalues of `-i t_3`, descending real part.
    pub spectrum: Vec<C64>,
    /// `max_i |t_i + [t_j, t_m]|_F`.
    pub residue_defect: f64,
    /// Whether the top eigenvector of `-i t_3` generates all of `C^k`.
    pub irreducible: bool,
}

/// Offsets from the endpoint at which `(s - e) T(s)` is sampled.
pub const FIT_OFFSETS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Extrapolates `(s - e) T_i(s)` to `s = e` from the offsets in
/// [`FIT_OFFSETS`] (Neville's scheme on the quadratic through them).
pub fn residue_fit(data: &NahmData, endpoint: Endpoint) -> Result<ResidueFit> {
    let e = endpoint.value();
    let samples: Vec<Triple> = FIT_OFFSETS
        .iter()
        .map(|&d| {
            let s = e - e * d;
            let t = data.sample(s);
            t.map(|m| m * C64::new(s - e, 0.0))
        })
        .collect();
    let t: Triple = std::array::from_fn(|i| {
        let vals: Vec<CMatrix> = samples.iter().map(|tr| tr[i].clone()).collect();
        neville_at_zero(&FIT_OFFSETS, vals)
    });
    if !t.iter().all(linalg::all_finite) {
        return Err(Error::NonFinite("residue fit"));
    }
    let size = t.iter().map(linalg::max_abs).fold(0.0, f64::max);
    if size < 1e-8 {
        return Err(Error::NoPole { endpoint: e });
    }
    let spectrum = spectrum_of_minus_i_t3(&t[2])?;
    let minus_i_t3 = &t[2] * C64::new(0.0, -1.0);
    let top = top_eigenvector(&minus_i_t3, spectrum[0].re)?;
    let irreducible = linalg::invariant_span_dim(&top, &[&t[0], &t[1], &t[2]], 1e-6) == data.k();
    Ok(ResidueFit { residue_defect: residue_equation_defect(&t), t, spectrum, irreducible })
}

fn neville_at_zero(x: &[f64], mut p: Vec<CMatrix>) -> CMatrix {
    let n = x.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (x[i], x[i + level]);
            // Value at 0 of the interpolant through nodes i..=i+level.
            p[i] = (&p[i] * C64::new(-xj, 0.0) + &p[i + 1] * C64::new(xi, 0.0)) / C64::new(xi - xj, 0.0);
        }
    }
    p.swap_remove(0)
}
