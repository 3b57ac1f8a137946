use std::f64::consts::PI;

use crate::ratmaps::PartialFractions;
use crate::tolerance::{min_separation, separation_threshold};
use crate::{Error, Result, Tolerances, C64};

/// Generator of the fundamental group of the space of maps with distinct
/// poles. Indices are one-based: `Braid(j)` exchanges base poles `j` and
/// `j + 1`, `Wind(i)` winds residue `i` once around zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Braid(usize),
    Wind(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub inverse: bool,
}

impl Generator {
    pub fn braid(j: usize) -> Self {
        Generator { kind: GeneratorKind::Braid(j), inverse: false }
    }

    pub fn wind(i: usize) -> Self {
        Generator { kind: GeneratorKind::Wind(i), inverse: false }
    }

    pub fn inverted(self) -> Self {
        Generator { inverse: !self.inverse, ..self }
    }

    fn validate(&self, k: usize) -> Result<()> {
        match self.kind {
            GeneratorKind::Braid(j) if j == 0 || j >= k => Err(Error::InvalidGenerator { index: j, k }),
            GeneratorKind::Wind(i) if i == 0 || i > k => Err(Error::InvalidGenerator { index: i, k }),
            _ => Ok(()),
        }
    }
}

/// One piece of a loop, parameterized over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Generator(Generator),
    /// Piecewise-linear path `base -> frames[0] -> ... -> frames[last]`,
    /// run backwards when `reversed`.
    Keyframes { frames: Vec<PartialFractions>, reversed: bool },
}

impl Segment {
    fn inverted(&self) -> Segment {
        match self {
            Segment::Generator(g) => Segment::Generator(g.inverted()),
            Segment::Keyframes { frames, reversed } => Segment::Keyframes { frames: frames.clone(), reversed: !reversed },
        }
    }

    /// Poles and residues at local time `t`, listed in the index order of
    /// the base (list order carries no meaning for continuation).
    fn config_at(&self, base: &PartialFractions, t: f64) -> (Vec<C64>, Vec<C64>) {
        let mut poles = base.poles().to_vec();
        let mut res = base.residues().to_vec();
        match self {
            Segment::Generator(g) => {
                let t = if g.inverse { 1.0 - t } else { t };
                match g.kind {
                    GeneratorKind::Braid(j) => {
                        let (a, b) = (j - 1, j);
                        let mid = (poles[a] + poles[b]) * 0.5;
                        let rot = C64::from_polar(1.0, PI * t);
                        let (ra, rb) = (res[a], res[b]);
                        poles[a] = mid + (poles[a] - mid) * rot;
                        poles[b] = mid + (poles[b] - mid) * rot;
                        res[a] = ra * ((rb / ra).ln() * t).exp();
                        res[b] = rb * ((ra / rb).ln() * t).exp();
                    }
                    GeneratorKind::Wind(i) => {
                        res[i - 1] *= C64::from_polar(1.0, 2.0 * PI * t);
                    }
                }
            }
            Segment::Keyframes { frames, reversed } => {
                let t = if *reversed { 1.0 - t } else { t };
                let m = frames.len() as f64;
                let x = (t * m).clamp(0.0, m);
                let n = (x.floor() as usize).min(frames.len() - 1);
                let s = x - n as f64;
                let (p0, r0) = if n == 0 {
                    (base.poles(), base.residues())
                } else {
                    (frames[n - 1].poles(), frames[n - 1].residues())
                };
                let (p1, r1) = (frames[n].poles(), frames[n].residues());
                for i in 0..poles.len() {
                    poles[i] = p0[i] + (p1[i] - p0[i]) * s;
                    res[i] = r0[i] + (r1[i] - r0[i]) * s;
                }
            }
        }
        (poles, res)
    }
}

/// Closed path in the space of (distinct poles, nonzero residues) based at
/// `base`, a concatenation of [`Segment`]s traversed in order.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSpec {
    base: PartialFractions,
    segments: Vec<Segment>,
    samples: usize,
    tol: Tolerances,
}

/// Upper bound on the per-segment step count accepted from input.
pub const MAX_SAMPLES: usize = 1 << 20;

impl LoopSpec {
    /// Loop given as a word in the generators; an empty word is the constant loop.
    pub fn word(base: PartialFractions, word: &[Generator], samples: usize, tol: &Tolerances) -> Result<Self> {
        check_samples(samples)?;
        for g in word {
            g.validate(base.k())?;
            if let GeneratorKind::Braid(j) = g.kind {
                check_braid_clearance(&base, j, tol)?;
            }
        }
        Ok(LoopSpec {
            base,
            segments: word.iter().map(|&g| Segment::Generator(g)).collect(),
            samples,
            tol: *tol,
        })
    }

    /// Counterclockwise half-turn of base poles `j` and `j + 1` about their
    /// midpoint. Each residue travels with its pole, moving multiplicatively
    /// (principal logarithm) from its own value to its partner's; with equal
    /// residues the residues stay constant.
    pub fn braid(j: usize, base: PartialFractions, samples: usize, tol: &Tolerances) -> Result<Self> {
        Self::word(base, &[Generator::braid(j)], samples, tol)
    }

    /// `r_i(t) = r_i exp(2 pi i t)`, all else fixed.
    pub fn wind(i: usize, base: PartialFractions, samples: usize, tol: &Tolerances) -> Result<Self> {
        Self::word(base, &[Generator::wind(i)], samples, tol)
    }

    /// Piecewise-linear loop through `frames`; the last frame must agree
    /// with `base` as an unordered configuration.
    pub fn keyframes(
        base: PartialFractions,
        frames: Vec<PartialFractions>,
        samples: usize,
        tol: &Tolerances,
    ) -> Result<Self> {
        check_samples(samples)?;
        let last = frames.last().ok_or_else(|| Error::InvalidLoop("no keyframes".into()))?;
        if frames.iter().any(|f| f.k() != base.k()) {
            return Err(Error::InvalidLoop("keyframe size differs from base".into()));
        }
        if last.match_as_set(&base, 1e-9).is_none() {
            return Err(Error::InvalidLoop("last keyframe does not close up on the base".into()));
        }
        Ok(LoopSpec {
            base,
            segments: vec![Segment::Keyframes { frames, reversed: false }],
            samples,
            tol: *tol,
        })
    }

    pub fn k(&self) -> usize {
        self.base.k()
    }

    pub fn base(&self) -> &PartialFractions {
        &self.base
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn with_samples(&self, samples: usize) -> Result<Self> {
        check_samples(samples)?;
        Ok(LoopSpec { samples, ..self.clone() })
    }

    /// The generator word, when every segment is a generator.
    pub fn generator_word(&self) -> Option<Vec<Generator>> {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Generator(g) => Some(*g),
                Segment::Keyframes { .. } => None,
            })
            .collect()
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> LoopSpec {
        LoopSpec {
            segments: self.segments.iter().rev().map(Segment::inverted).collect(),
            ..self.clone()
        }
    }

    /// `self` followed by `other`; both must share the base.
    pub fn concat(&self, other: &LoopSpec) -> Result<LoopSpec> {
        if self.base != other.base {
            return Err(Error::InvalidLoop("concatenated loops have different bases".into()));
        }
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        Ok(LoopSpec { segments, samples: self.samples.max(other.samples), ..self.clone() })
    }

    /// Configuration at global time `t in [0, 1]`.
    pub fn config_at(&self, t: f64) -> (Vec<C64>, Vec<C64>) {
        let n = self.segments.len();
        if n == 0 {
            return (self.base.poles().to_vec(), self.base.residues().to_vec());
        }
        let x = (t.clamp(0.0, 1.0) * n as f64).min(n as f64);
        let seg = (x.floor() as usize).min(n - 1);
        self.segments[seg].config_at(&self.base, x - seg as f64)
    }

    pub(crate) fn segment_config(&self, seg: usize, t: f64) -> (Vec<C64>, Vec<C64>) {
        self.segments[seg].config_at(&self.base, t)
    }

    /// Checks a sampled configuration against the loop invariants.
    pub(crate) fn check_config(&self, poles: &[C64], res: &[C64], t: f64) -> Result<()> {
        let thr = separation_threshold(self.tol.delta, poles);
        if min_separation(poles) <= thr {
            return Err(Error::InvalidLoop(format!("poles collide at t = {t}")));
        }
        let rmax = res.iter().fold(1.0f64, |a, r| a.max(r.norm()));
        if res.iter().any(|r| r.norm() <= self.tol.residue * rmax) {
            return Err(Error::InvalidLoop(format!("a residue vanishes at t = {t}")));
        }
        if poles.iter().chain(res).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidLoop(format!("non-finite configuration at t = {t}")));
        }
        Ok(())
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 || samples > MAX_SAMPLES {
        return Err(Error::InvalidLoop(format!("sample count {samples} outside 1..={MAX_SAMPLES}")));
    }
    Ok(())
}

/// The rotating pair must stay more than twice the pole margin apart, and
/// every other pole must lie outside the swept disc plus the margin.
fn check_braid_clearance(base: &PartialFractions, j: usize, tol: &Tolerances) -> Result<()> {
    let poles = base.poles();
    let thr = separation_threshold(tol.delta, poles);
    let (a, b) = (poles[j - 1], poles[j]);
    if (a - b).norm() <= 2.0 * thr {
        return Err(Error::CollisionRisk);
    }
    let mid = (a + b) * 0.5;
    let radius = (a - mid).norm();
    for (i, p) in poles.iter().enumerate() {
        if i != j - 1 && i != j && (p - mid).norm() < radius + thr {
            return Err(Error::CollisionRisk);
        }
    }
    Ok(())
}

/// Image of a generator word under the natural surjection onto signed
/// permutations: braids map to transpositions, windings to sign flips, and
/// the word is multiplied left to right.
pub fn expected_image(k: usize, word: &[Generator]) -> Result<super::SignedPermutation> {
    use super::SignedPermutation;
    let mut acc = SignedPermutation::identity(k);
    for g in word {
        g.validate(k)?;
        let img = match g.kind {
            GeneratorKind::Braid(j) => SignedPermutation::transposition(k, j - 1, j),
            GeneratorKind::Wind(i) => SignedPermutation::flip(k, i - 1),
        };
        acc = acc.compose(&img)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn base2() -> PartialFractions {
        PartialFractions::new(vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![c(1.0, 0.0); 2]).unwrap()
    }

    fn roots_of_unity(k: usize) -> PartialFractions {
        let poles = (0..k).map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64)).collect();
        PartialFractions::new(poles, vec![c(1.0, 0.0); k]).unwrap()
    }

    #[test]
    fn braid_half_turn_swaps_poles() {
        let l = LoopSpec::braid(1, base2(), 16, &Tolerances::default()).unwrap();
        let (p, _) = l.config_at(1.0);
        assert!((p[0] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((p[1] - c(1.0, 0.0)).norm() < 1e-15);
        // Counterclockwise: pole 1 passes through +i.
        let (p, _) = l.config_at(0.5);
        assert!((p[0] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn third_pole_untouched() {
        let base = roots_of_unity(3);
        let l = LoopSpec::braid(1, base.clone(), 16, &Tolerances::default()).unwrap();
        for t in [0.1, 0.5, 0.9] {
            assert_eq!(l.config_at(t).0[2], base.poles()[2]);
        }
    }

    #[test]
    fn collision_risk() {
        let delta = 1e-6;
        let base = PartialFractions::new(vec![c(1.0, 0.0), c(1.0 + 1.5 * delta, 0.0)], vec![c(1.0, 0.0); 2]).unwrap();
        assert_eq!(LoopSpec::braid(1, base, 16, &Tolerances::default()).unwrap_err(), Error::CollisionRisk);
        // A pole inside the swept disc.
        let base = PartialFractions::new(vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.2)], vec![c(1.0, 0.0); 3]).unwrap();
        assert_eq!(LoopSpec::braid(1, base, 16, &Tolerances::default()).unwrap_err(), Error::CollisionRisk);
    }

    #[test]
    fn wind_loop_shape() {
        let base = PartialFractions::new(vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![c(2.0, 1.0), c(1.0, 0.0)]).unwrap();
        let l = LoopSpec::wind(1, base.clone(), 32, &Tolerances::default()).unwrap();
        let (p1, r1) = l.config_at(1.0);
        assert!((r1[0] - base.residues()[0]).norm() < 1e-14);
        assert_eq!(p1, base.poles());
        let (_, rh) = l.config_at(0.5);
        assert!((rh[0] + base.residues()[0]).norm() < 1e-14);
        for t in [0.13, 0.37, 0.71] {
            assert!((l.config_at(t).1[0].norm() - base.residues()[0].norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_generators() {
        let tol = Tolerances::default();
        assert!(matches!(LoopSpec::braid(2, base2(), 8, &tol), Err(Error::InvalidGenerator { .. })));
        assert!(matches!(LoopSpec::wind(0, base2(), 8, &tol), Err(Error::InvalidGenerator { .. })));
        assert!(matches!(LoopSpec::wind(1, base2(), 0, &tol), Err(Error::InvalidLoop(_))));
    }

    #[test]
    fn expected_images() {
        assert!(expected_image(3, &[]).unwrap().is_identity());
        let w = Generator::wind(2);
        assert!(expected_image(3, &[w, w]).unwrap().is_identity());
        let (s1, s2) = (Generator::braid(1), Generator::braid(2));
        assert_eq!(expected_image(3, &[s1, s2, s1]).unwrap(), expected_image(3, &[s2, s1, s2]).unwrap());
    }

    #[test]
    fn keyframes_must_close() {
        let tol = Tolerances::default();
        let mid = PartialFractions::new(vec![c(0.0, 1.0), c(0.0, -1.0)], vec![c(1.0, 0.0); 2]).unwrap();
        let swapped = PartialFractions::new(vec![c(-1.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0); 2]).unwrap();
        assert!(LoopSpec::keyframes(base2(), vec![mid.clone(), swapped], 8, &tol).is_ok());
        assert!(matches!(LoopSpec::keyframes(base2(), vec![mid], 8, &tol), Err(Error::InvalidLoop(_))));
    }
}
