use std::ops::{Add, Mul, Sub};

use crate::{linalg, CMatrix, Error, Result, C64};

/// Complex polynomial with coefficients in ascending degree order.
///
/// Trailing zero coefficients are stripped on construction, so the leading
/// coefficient is nonzero unless the polynomial is identically zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Monic polynomial `prod (z - r)`.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut c = vec![C64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
            for (j, &a) in c.iter().enumerate() {
                next[j + 1] += a;
                next[j] -= a * r;
            }
            c = next;
        }
        Polynomial::new(c)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `z^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> C64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<C64> {
        self.coeffs.last().copied()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `sum |a_j| r^j`, the natural scale for rounding error in [`Self::eval`].
    pub fn eval_scale(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: C64) -> Self {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_max(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |a, c| a.max(c.norm()))
    }

    /// Drops leading coefficients whose magnitude is below `rel_tol` times
    /// the largest coefficient.
    pub fn trim_relative(&self, rel_tol: f64) -> Self {
        let cut = rel_tol * self.norm_max();
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| x.norm() <= cut) {
            c.pop();
        }
        Polynomial::new(c)
    }

    /// Roots via eigenvalues of the companion matrix, each refined by one
    /// Newton step that is kept only when it reduces `|p|`.
    pub fn roots(&self) -> Result<Vec<C64>> {
        if !self.is_finite() {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        let n = match self.degree() {
            None | Some(0) => return Ok(Vec::new()),
            Some(n) => n,
        };
        let lead = self.coeffs[n];
        if n == 1 {
            return Ok(vec![-self.coeffs[0] / lead]);
        }
        let mut comp = CMatrix::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        for i in 0..n {
            comp[(i, n - 1)] = -self.coeffs[i] / lead;
        }
        let mut roots = linalg::eigenvalues(&comp)?;
        let dp = self.derivative();
        for r in roots.iter_mut() {
            let d = dp.eval(*r);
            if d.norm() == 0.0 {
                continue;
            }
            let cand = *r - self.eval(*r) / d;
            if cand.re.is_finite() && cand.im.is_finite() && self.eval(cand).norm() < self.eval(*r).norm() {
                *r = cand;
            }
        }
        Ok(roots)
    }

    /// Polynomial long division; returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let dd = divisor.degree().ok_or(Error::ZeroDenominator)?;
        let lead = divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Polynomial::zero(), Polynomial::zero()));
        };
        if nd < dd {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut quot = vec![C64::new(0.0, 0.0); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = rem[i + dd] / lead;
            quot[i] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= c * d;
            }
            rem[i + dd] = C64::new(0.0, 0.0);
        }
        rem.truncate(dd);
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }
}

/// Resultant of `p` and `q` as the determinant of their Sylvester matrix.
pub fn resultant(p: &Polynomial, q: &Polynomial) -> C64 {
    let (Some(m), Some(n)) = (p.degree(), q.degree()) else {
        return C64::new(0.0, 0.0);
    };
    if m + n == 0 {
        return C64::new(1.0, 0.0);
    }
    let size = m + n;
    let mut s = CMatrix::zeros(size, size);
    // Rows hold descending coefficients, shifted one column per row.
    for row in 0..n {
        for j in 0..=m {
            s[(row, row + j)] = p.coeffs[m - j];
        }
    }
    for row in 0..m {
        for j in 0..=n {
            s[(n + row, row + j)] = q.coeffs[n - j];
        }
    }
    linalg::det(&s)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn trailing_zeros_stripped() {
        let p = Polynomial::new(vec![c(1.0), c(0.0), c(0.0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(Polynomial::new(vec![c(0.0)]).is_zero());
    }

    #[test]
    fn horner_eval() {
        let p = Polynomial::from_real(&[1.0, -3.0, 2.0]);
        assert_eq!(p.eval(c(2.0)), c(3.0));
    }

    #[test]
    fn roots_of_cubic() {
        let p = Polynomial::from_roots(&[c(1.0), c(-2.0), C64::new(0.5, 1.0)]);
        let mut r = p.roots().unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - c(-2.0)).norm() < 1e-13);
        assert!((r[1] - C64::new(0.5, 1.0)).norm() < 1e-13);
        assert!((r[2] - c(1.0)).norm() < 1e-13);
    }

    #[test]
    fn double_root_does_not_blow_up() {
        let r = Polynomial::from_real(&[0.0, 0.0, 1.0]).roots().unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|z| z.norm() < 1e-7));
    }

    #[test]
    fn resultant_detects_common_root() {
        let p = Polynomial::from_real(&[-1.0, 1.0]);
        let q = Polynomial::from_roots(&[c(1.0), c(2.0)]);
        assert!(resultant(&p, &q).norm() < 1e-14);
        // Res(z - a, q) = q(a) up to sign for monic linear p.
        let p = Polynomial::from_real(&[-3.0, 1.0]);
        assert!((resultant(&p, &q).norm() - q.eval(c(3.0)).norm()).abs() < 1e-12);
    }

    #[test]
    fn division() {
        let q = Polynomial::from_roots(&[c(1.0), c(2.0)]);
        let p = &q * &Polynomial::from_real(&[3.0, 1.0]);
        let (quot, rem) = p.div_rem(&q).unwrap();
        assert!(rem.norm_max() < 1e-14);
        assert!((&quot - &Polynomial::from_real(&[3.0, 1.0])).norm_max() < 1e-14);
    }
}
