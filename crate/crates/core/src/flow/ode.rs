//! Dormand-Prince 5(4) for complex linear systems `u' = M(s) u`.

use crate::{CMatrix, CVector, Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    /// Mixed absolute/relative local error tolerance.
    pub tol: f64,
    /// Steps never exceed `max_step_fraction * (1 - |s|)`.
    pub max_step_fraction: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates from `s0` to `s1 > s0` and returns `u(s1)`. `stops` are
/// visited exactly and their values written to `out` in order.
pub fn integrate<F>(
    rhs: F,
    s0: f64,
    s1: f64,
    u0: CVector,
    ctl: &StepControl,
    stops: &[f64],
    out: &mut Vec<CVector>,
) -> Result<(CVector, Stats)>
where
    F: Fn(f64) -> CMatrix,
{
    let mut s = s0;
    let mut u = u0;
    let mut stats = Stats::default();
    let mut h = ctl.max_step_fraction * (1.0 - s.abs()).max(f64::EPSILON);
    let mut next_stop = stops.iter().copied().filter(|&x| x > s0 && x <= s1).peekable();
    let mut k: [CVector; 7] = std::array::from_fn(|_| CVector::zeros(u.len()));
    k[0] = rhs(s) * &u;
    while s < s1 {
        if stats.accepted + stats.rejected > MAX_STEPS {
            return Err(Error::StepFailure { s });
        }
        let target = next_stop.peek().copied().unwrap_or(s1);
        let hmax = ctl.max_step_fraction * (1.0 - s.abs());
        h = h.min(hmax).min(target - s);
        if h <= 1e-15 * s.abs().max(1.0) && target - s > h {
            return Err(Error::StepFailure { s });
        }
        for stage in 1..7 {
            let mut y = u.clone();
            for (j, kj) in k.iter().enumerate().take(stage) {
                if A[stage][j] != 0.0 {
                    y.axpy((A[stage][j] * h).into(), kj, 1.0.into());
                }
            }
            k[stage] = rhs(s + C[stage] * h) * y;
        }
        let mut unew = u.clone();
        let mut err = CVector::zeros(u.len());
        for j in 0..7 {
            unew.axpy((B5[j] * h).into(), &k[j], 1.0.into());
            err.axpy(((B5[j] - B4[j]) * h).into(), &k[j], 1.0.into());
        }
        let mut e2 = 0.0;
        for i in 0..u.len() {
            let sc = ctl.tol * (1.0 + u[i].norm().max(unew[i].norm()));
            e2 += (err[i].norm() / sc).powi(2);
        }
        let enorm = (e2 / u.len() as f64).sqrt();
        if !enorm.is_finite() {
            return Err(Error::StepFailure { s });
        }
        if enorm <= 1.0 {
            s = if (target - s - h).abs() <= 1e-15 * target.abs().max(1.0) { target } else { s + h };
            u = unew;
            k[0] = k[6].clone();
            stats.accepted += 1;
            if next_stop.peek() == Some(&s) {
                out.push(u.clone());
                next_stop.next();
            }
        } else {
            stats.rejected += 1;
        }
        let factor = if enorm == 0.0 { 5.0 } else { (0.9 * enorm.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    Ok((u, stats))
}
