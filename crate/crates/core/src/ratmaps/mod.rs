//! Based rational maps `f = p/q` of degree `k` with `f(inf) = 0`.
//!
//! The denominator is stored monic of degree exactly `k` and the numerator
//! has degree at most `k - 1`. Maps whose poles are pairwise distinct form
//! the open subset on which [`PartialFractions`] is available.

mod polynomial;

pub use polynomial::{resultant, Polynomial};

use crate::tolerance::{min_separation, separation_threshold};
use crate::{Error, Result, Tolerances, C64, MAX_DEGREE};

#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalMap {
    /// Builds `num/den` with default tolerances. See [`Self::with_tolerances`].
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        Self::with_tolerances(num, den, &Tolerances::default())
    }

    /// Normalizes `den` to be monic and verifies the degree constraint and
    /// coprimality. The degree-zero map (`num = 0`, constant `den`) is the
    /// only map accepted with a zero numerator.
    pub fn with_tolerances(num: Polynomial, den: Polynomial, tol: &Tolerances) -> Result<Self> {
        if !num.is_finite() || !den.is_finite() {
            return Err(Error::NonFinite("rational map coefficients"));
        }
        let k = den.degree().ok_or(Error::ZeroDenominator)?;
        if k > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(k));
        }
        if let Some(m) = num.degree() {
            if m >= k {
                return Err(Error::DegreeError { numerator: m, denominator: k });
            }
        }
        let lead = den.leading().expect("nonzero denominator");
        let inv = C64::new(1.0, 0.0) / lead;
        let (num, den) = (num.scale(inv), den.scale(inv));
        if k == 0 {
            return Ok(RationalMap { numerator: Polynomial::zero(), denominator: den });
        }
        if num.is_zero() {
            return Err(Error::NotCoprime { common_root: common_root_estimate(&num, &den) });
        }
        match den.roots() {
            // Res(p, q) = prod p(b_i) for monic q: test each factor against
            // the magnitude sum_j |p_j| |b_i|^j of its terms.
            Ok(roots) => {
                for b in roots {
                    if !(num.eval(b).norm() > tol.coprime * num.eval_scale(b.norm())) {
                        return Err(Error::NotCoprime { common_root: b });
                    }
                }
            }
            Err(_) => {
                let m = num.degree().unwrap_or(0) as i32;
                let bound = num.norm2().powi(k as i32) * den.norm2().powi(m);
                if !(resultant(&num, &den).norm() > tol.coprime * bound) {
                    return Err(Error::NotCoprime { common_root: common_root_estimate(&num, &den) });
                }
            }
        }
        Ok(RationalMap { numerator: num, denominator: den })
    }

    /// Skips the coprimality check; the caller guarantees the invariants.
    pub(crate) fn from_parts_unchecked(numerator: Polynomial, denominator: Polynomial) -> Self {
        RationalMap { numerator, denominator }
    }

    /// The zero map of degree zero.
    pub fn zero() -> Self {
        RationalMap { numerator: Polynomial::zero(), denominator: Polynomial::constant(C64::new(1.0, 0.0)) }
    }

    pub fn k(&self) -> usize {
        self.denominator.degree().unwrap_or(0)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn evaluate(&self, z: C64) -> Result<C64> {
        self.evaluate_with(z, &Tolerances::default())
    }

    pub fn evaluate_with(&self, z: C64, tol: &Tolerances) -> Result<C64> {
        let q = self.denominator.eval(z);
        if q.norm() <= tol.pole_hit * self.denominator.eval_scale(z.norm()) {
            return Err(Error::PoleHit { z });
        }
        Ok(self.numerator.eval(z) / q)
    }

    /// Roots of the denominator, sorted by descending real part and then
    /// descending imaginary part.
    pub fn poles(&self) -> Result<Vec<C64>> {
        let mut r = self.denominator.roots()?;
        r.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        Ok(r)
    }

    /// Partial-fraction form `sum r_i / (z - b_i)` with `r_i = p(b_i)/q'(b_i)`.
    pub fn poles_and_residues(&self, tol: &Tolerances) -> Result<PartialFractions> {
        let poles = self.poles()?;
        let sep = min_separation(&poles);
        if sep <= separation_threshold(tol.delta, &poles) {
            return Err(Error::RepeatedPoles { separation: sep });
        }
        let dq = self.denominator.derivative();
        let residues = poles.iter().map(|&b| self.numerator.eval(b) / dq.eval(b)).collect();
        PartialFractions::with_tolerances(poles, residues, tol)
    }

    /// True iff the denominator roots are pairwise separated by more than
    /// `delta * max(diameter, 1)`.
    pub fn is_in_rat0(&self, delta: f64) -> bool {
        match self.poles() {
            Ok(p) => min_separation(&p) > separation_threshold(delta, &p),
            Err(_) => false,
        }
    }

    /// Largest coefficient difference between the two maps (numerators and
    /// denominators compared separately, missing coefficients read as zero).
    pub fn coefficient_distance(&self, other: &RationalMap) -> f64 {
        let diff = |a: &Polynomial, b: &Polynomial| (a - b).norm_max();
        diff(&self.numerator, &other.numerator).max(diff(&self.denominator, &other.denominator))
    }
}

fn common_root_estimate(num: &Polynomial, den: &Polynomial) -> C64 {
    let roots = den.roots().unwrap_or_default();
    roots
        .into_iter()
        .min_by(|a, b| {
            let sa = num.eval(*a).norm() / num.eval_scale(a.norm()).max(f64::MIN_POSITIVE);
            let sb = num.eval(*b).norm() / num.eval_scale(b.norm()).max(f64::MIN_POSITIVE);
            sa.total_cmp(&sb)
        })
        .unwrap_or(C64::new(f64::NAN, f64::NAN))
}

/// `f(z) = sum r_i / (z - b_i)` with distinct poles and nonzero residues.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions {
    poles: Vec<C64>,
    residues: Vec<C64>,
}

impl PartialFractions {
    pub fn new(poles: Vec<C64>, residues: Vec<C64>) -> Result<Self> {
        Self::with_tolerances(poles, residues, &Tolerances::default())
    }

    pub fn with_tolerances(poles: Vec<C64>, residues: Vec<C64>, tol: &Tolerances) -> Result<Self> {
        if poles.len() != residues.len() {
            return Err(Error::SizeMismatch(format!(
                "{} poles but {} residues",
                poles.len(),
                residues.len()
            )));
        }
        if poles.is_empty() || poles.len() > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(poles.len()));
        }
        if poles.iter().chain(&residues).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("partial fractions"));
        }
        let sep = min_separation(&poles);
        if sep <= separation_threshold(tol.delta, &poles) {
            return Err(Error::RepeatedPoles { separation: sep });
        }
        let rmax = residues.iter().fold(1.0f64, |a, r| a.max(r.norm()));
        if let Some(index) = residues.iter().position(|r| r.norm() <= tol.residue * rmax) {
            return Err(Error::ZeroResidue { index });
        }
        Ok(PartialFractions { poles, residues })
    }

    pub fn k(&self) -> usize {
        self.poles.len()
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn residues(&self) -> &[C64] {
        &self.residues
    }

    /// `q = prod (z - b_i)`, `p = sum r_i prod_{j != i} (z - b_j)`.
    pub fn to_map(&self) -> RationalMap {
        let den = Polynomial::from_roots(&self.poles);
        let mut num = Polynomial::zero();
        for (i, &r) in self.residues.iter().enumerate() {
            let others: Vec<C64> =
                self.poles.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &b)| b).collect();
            num = &num + &Polynomial::from_roots(&others).scale(r);
        }
        RationalMap::from_parts_unchecked(num, den)
    }

    /// Evaluates `sum r_i / (z - b_i)` directly.
    pub fn evaluate(&self, z: C64) -> C64 {
        self.poles.iter().zip(&self.residues).map(|(&b, &r)| r / (z - b)).sum()
    }

    /// Index map `m` with `other.poles[m[i]] ~ self.poles[i]` and matching
    /// residues, if the two configurations agree as unordered sets.
    pub fn match_as_set(&self, other: &PartialFractions, tol: f64) -> Option<Vec<usize>> {
        if self.k() != other.k() {
            return None;
        }
        let mut used = vec![false; other.k()];
        let mut map = Vec::with_capacity(self.k());
        for (b, r) in self.poles.iter().zip(&self.residues) {
            let (j, d) = other
                .poles
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, c)| (j, (c - b).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))?;
            let scale = b.norm().max(1.0);
            let rscale = r.norm().max(1.0);
            if d > tol * scale || (other.residues[j] - r).norm() > tol * rscale {
                return None;
            }
            used[j] = true;
            map.push(j);
        }
        Some(map)
    }
}

impl RationalMap {
    /// Inverse of [`RationalMap::poles_and_residues`] up to pole ordering.
    pub fn from_partial_fractions(pf: &PartialFractions) -> Self {
        pf.to_map()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn poly(re: &[f64]) -> Polynomial {
        Polynomial::from_real(re)
    }

    #[test]
    fn minimal_map() {
        let f = RationalMap::new(poly(&[1.0]), poly(&[0.0, 1.0])).unwrap();
        assert_eq!(f.k(), 1);
        assert_eq!(f.evaluate(c(2.0, 0.0)).unwrap(), c(0.5, 0.0));
    }

    #[test]
    fn denominator_made_monic() {
        let f = RationalMap::new(poly(&[2.0]), poly(&[0.0, 2.0])).unwrap();
        assert_eq!(f.denominator().coeffs(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(f.numerator().coeffs(), &[c(1.0, 0.0)]);
    }

    #[test]
    fn odd_map_evaluation_and_pole() {
        let f = RationalMap::new(poly(&[0.0, 2.0]), poly(&[-1.0, 0.0, 1.0])).unwrap();
        assert_eq!(f.k(), 2);
        assert_eq!(f.evaluate(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(matches!(f.evaluate(c(1.0, 0.0)), Err(Error::PoleHit { .. })));
    }

    #[test]
    fn degree_error() {
        let e = RationalMap::new(poly(&[0.0, 1.0]), poly(&[0.0, 1.0])).unwrap_err();
        assert_eq!(e, Error::DegreeError { numerator: 1, denominator: 1 });
        assert_eq!(RationalMap::new(poly(&[1.0]), Polynomial::zero()).unwrap_err(), Error::ZeroDenominator);
    }

    #[test]
    fn common_factor_detected() {
        // 1/z^2 with numerator and denominator multiplied by (z - 1).
        let num = poly(&[-1.0, 1.0]);
        let den = poly(&[0.0, 0.0, -1.0, 1.0]);
        match RationalMap::new(num, den) {
            Err(Error::NotCoprime { common_root }) => assert!((common_root - c(1.0, 0.0)).norm() < 1e-8),
            other => panic!("expected NotCoprime, got {other:?}"),
        }
    }

    #[test]
    fn residues_of_simple_maps() {
        let tol = Tolerances::default();
        let f = RationalMap::new(poly(&[1.0]), poly(&[0.0, 1.0])).unwrap();
        let pf = f.poles_and_residues(&tol).unwrap();
        assert_eq!(pf.poles(), &[c(0.0, 0.0)]);
        assert_eq!(pf.residues(), &[c(1.0, 0.0)]);

        let f = RationalMap::new(poly(&[0.0, 2.0]), poly(&[-1.0, 0.0, 1.0])).unwrap();
        let pf = f.poles_and_residues(&tol).unwrap();
        assert!((pf.poles()[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((pf.poles()[1] - c(-1.0, 0.0)).norm() < 1e-14);
        for r in pf.residues() {
            assert!((r - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn repeated_poles() {
        let f = RationalMap::new(poly(&[1.0]), poly(&[0.0, 0.0, 1.0])).unwrap();
        assert!(matches!(f.poles_and_residues(&Tolerances::default()), Err(Error::RepeatedPoles { .. })));
        assert!(!f.is_in_rat0(1e-6));
        let g = RationalMap::new(poly(&[0.0, 2.0]), poly(&[-1.0, 0.0, 1.0])).unwrap();
        assert!(g.is_in_rat0(1e-6));
    }

    #[test]
    fn from_partial_fractions_examples() {
        let f = PartialFractions::new(vec![c(0.0, 0.0)], vec![c(1.0, 0.0)]).unwrap().to_map();
        assert_eq!(f.numerator().coeffs(), &[c(1.0, 0.0)]);
        assert_eq!(f.denominator().coeffs(), &[c(0.0, 0.0), c(1.0, 0.0)]);

        let f = PartialFractions::new(vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![c(1.0, 0.0); 2]).unwrap().to_map();
        assert_eq!(f.numerator(), &poly(&[0.0, 2.0]));
        assert_eq!(f.denominator(), &poly(&[-1.0, 0.0, 1.0]));

        // Hand expansion: 1/z - 1/(z-1) = ((z-1) - z)/(z(z-1)) = -1/(z^2 - z).
        let f = PartialFractions::new(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(-1.0, 0.0)])
            .unwrap()
            .to_map();
        assert_eq!(f.numerator(), &poly(&[-1.0]));
        assert_eq!(f.denominator(), &poly(&[0.0, -1.0, 1.0]));
    }

    #[test]
    fn partial_fraction_invariants() {
        assert!(matches!(
            PartialFractions::new(vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0); 2]),
            Err(Error::RepeatedPoles { .. })
        ));
        assert_eq!(
            PartialFractions::new(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap_err(),
            Error::ZeroResidue { index: 1 }
        );
    }

    #[test]
    fn zero_map() {
        let f = RationalMap::new(Polynomial::zero(), poly(&[3.0])).unwrap();
        assert_eq!(f.k(), 0);
        assert!(matches!(
            RationalMap::new(Polynomial::zero(), poly(&[0.0, 1.0])),
            Err(Error::NotCoprime { .. })
        ));
    }
}
