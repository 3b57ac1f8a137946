//! Jacobi elliptic functions by the arithmetic-geometric mean and descending
//! Landen transformation, parameter convention `m = k^2`.

use std::f64::consts::PI;

use crate::{Error, Result};

const MAX_AGM_STEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiValues {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

fn check_modulus(m: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::InvalidModulus(m));
    }
    Ok(())
}

/// AGM scale sequence `(a_n, c_n)` starting from `(1, sqrt(1-m), sqrt(m))`.
fn agm_sequence(m: f64) -> (Vec<f64>, Vec<f64>) {
    let mut a = vec![1.0];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    for _ in 0..MAX_AGM_STEPS {
        let (an, cn) = (*a.last().unwrap(), *c.last().unwrap());
        if cn.abs() <= f64::EPSILON * an {
            break;
        }
        let next_a = 0.5 * (an + b);
        let next_c = 0.5 * (an - b);
        b = (an * b).sqrt();
        a.push(next_a);
        c.push(next_c);
    }
    (a, c)
}

/// Complete elliptic integral of the first kind, `K(1) = inf`.
pub fn complete_k(m: f64) -> Result<f64> {
    check_modulus(m)?;
    if m == 1.0 {
        return Ok(f64::INFINITY);
    }
    let (a, _) = agm_sequence(m);
    Ok(PI / (2.0 * a.last().unwrap()))
}

/// `(sn, cn, dn)(u | m)` for `0 <= m <= 1`.
pub fn jacobi_elliptic(u: f64, m: f64) -> Result<JacobiValues> {
    check_modulus(m)?;
    if !u.is_finite() {
        return Err(Error::NonFinite("elliptic argument"));
    }
    if m == 0.0 {
        return Ok(JacobiValues { sn: u.sin(), cn: u.cos(), dn: 1.0 });
    }
    if m == 1.0 {
        let sech = 1.0 / u.cosh();
        return Ok(JacobiValues { sn: u.tanh(), cn: sech, dn: sech });
    }
    let (a, c) = agm_sequence(m);
    let n = a.len() - 1;
    let quarter = PI / (2.0 * a[n]);
    // sn and cn have real period 4K.
    let period = 4.0 * quarter;
    let u = u - period * (u / period).round();
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // dn^2 = 1 - m sn^2 = (1 - m) + m cn^2, the latter free of cancellation.
    let dn = ((1.0 - m) + m * cn * cn).sqrt();
    Ok(JacobiValues { sn, cn, dn })
}
