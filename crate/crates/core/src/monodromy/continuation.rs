use std::fmt::Write as _;

use super::{LoopSpec, SignedPermutation};
use crate::bwpairs::{principal_sqrt, relate, BWPair};
use crate::tolerance::min_separation;
use crate::{Error, Result, C64};

/// Maximum number of step halvings below one base step.
pub const MAX_REFINEMENT: u32 = 20;

/// One accepted continuation step.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSample {
    /// Global loop parameter in `[0, 1]`.
    pub t: f64,
    /// Tracked pole positions, indexed by the base label.
    pub poles: Vec<C64>,
    /// Tracked square roots of the residues.
    pub w: Vec<C64>,
    /// `+1` when `w[i]` is the principal root of its residue, `-1` otherwise.
    pub branches: Vec<i8>,
    /// `assignment[i]` is the index, in the sampled configuration, of the
    /// point matched to tracked pole `i`.
    pub assignment: Vec<usize>,
    /// Largest pole displacement of this step.
    pub max_displacement: f64,
    /// Minimum pairwise pole distance before the step.
    pub min_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationTrace {
    pub steps: usize,
    pub samples: Vec<TraceSample>,
    pub result: SignedPermutation,
}

impl ContinuationTrace {
    /// CSV with columns `t`, `b{i}_re`, `b{i}_im` for each pole, then
    /// `w{i}_re`, `w{i}_im` for each root; 17 significant digits.
    pub fn to_csv(&self) -> String {
        let k = self.result.k();
        let mut out = String::from("t");
        for i in 1..=k {
            write!(out, ",b{i}_re,b{i}_im").unwrap();
        }
        for i in 1..=k {
            write!(out, ",w{i}_re,w{i}_im").unwrap();
        }
        out.push('\n');
        for s in &self.samples {
            write!(out, "{:.16e}", s.t).unwrap();
            for z in s.poles.iter().chain(&s.w) {
                write!(out, ",{:.16e},{:.16e}", z.re, z.im).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

struct State {
    poles: Vec<C64>,
    res: Vec<C64>,
    w: Vec<C64>,
}

/// Continues the diagonal lift of the base along the loop and returns the
/// signed permutation `g` with `g . (lift at start) = (lift at end)`.
///
/// Each base step `1/samples` of every segment is bisected until every pole
/// moves less than half the current minimum pole distance and every residue
/// changes by less than half its modulus, both at the end and at the
/// midpoint of the step. The square root of each residue is
/// continued by picking whichever of `+-sqrt(r)` is nearest the previous one.
pub fn continue_loop(spec: &LoopSpec) -> Result<(SignedPermutation, ContinuationTrace)> {
    let base = spec.base();
    let k = base.k();
    let start = BWPair::lift_partial_fractions(base);
    let mut state = State {
        poles: base.poles().to_vec(),
        res: base.residues().to_vec(),
        w: start.w().iter().copied().collect(),
    };
    let mut samples = vec![TraceSample {
        t: 0.0,
        poles: state.poles.clone(),
        w: state.w.clone(),
        branches: vec![1; k],
        assignment: (0..k).collect(),
        max_displacement: 0.0,
        min_distance: min_separation(&state.poles),
    }];
    let nseg = spec.segments().len();
    let n = spec.samples();
    for seg in 0..nseg {
        for step in 0..n {
            let t0 = step as f64 / n as f64;
            let t1 = (step + 1) as f64 / n as f64;
            advance(spec, seg, nseg, t0, t1, 0, &mut state, &mut samples)?;
        }
    }
    let end = BWPair::diagonal(&state.poles, &state.w)?;
    let g = relate(&start, &end, spec.tolerances())
        .map_err(|e| Error::InvalidLoop(format!("loop does not close on the base fibre: {e}")))?;
    let trace = ContinuationTrace { steps: samples.len() - 1, samples, result: g.clone() };
    Ok((g, trace))
}

#[allow(clippy::too_many_arguments)]
fn advance(
    spec: &LoopSpec,
    seg: usize,
    nseg: usize,
    t0: f64,
    t1: f64,
    depth: u32,
    state: &mut State,
    trace: &mut Vec<TraceSample>,
) -> Result<()> {
    let global = |t: f64| (seg as f64 + t) / nseg as f64;
    let (poles, res) = spec.segment_config(seg, t1);
    spec.check_config(&poles, &res, global(t1))?;
    let min_dist = min_separation(&state.poles);
    let mid = 0.5 * (t0 + t1);
    let (mid_poles, mid_res) = spec.segment_config(seg, mid);
    let mid_ok = try_match(state, &mid_poles, &mid_res, min_dist).is_some();
    if let Some((assignment, max_disp)) = try_match(state, &poles, &res, min_dist).filter(|_| mid_ok) {
        let mut branches = Vec::with_capacity(poles.len());
        for (i, &j) in assignment.iter().enumerate() {
            let root = principal_sqrt(res[j]);
            let (w, b) = if (root - state.w[i]).norm() <= (root + state.w[i]).norm() { (root, 1) } else { (-root, -1) };
            state.w[i] = w;
            state.poles[i] = poles[j];
            state.res[i] = res[j];
            branches.push(b);
        }
        trace.push(TraceSample {
            t: global(t1),
            poles: state.poles.clone(),
            w: state.w.clone(),
            branches,
            assignment,
            max_displacement: max_disp,
            min_distance: min_dist,
        });
        return Ok(());
    }
    if depth >= MAX_REFINEMENT {
        return Err(Error::RefinementExhausted { t: global(t0) });
    }
    advance(spec, seg, nseg, t0, mid, depth + 1, state, trace)?;
    advance(spec, seg, nseg, mid, t1, depth + 1, state, trace)
}

/// Nearest-point assignment from tracked poles to the sampled configuration,
/// accepted only if it is a bijection with every displacement below half
/// the minimum distance and every residue change below half its modulus.
fn try_match(state: &State, poles: &[C64], res: &[C64], min_dist: f64) -> Option<(Vec<usize>, f64)> {
    let k = poles.len();
    let mut used = vec![false; k];
    let mut assignment = Vec::with_capacity(k);
    let mut max_disp: f64 = 0.0;
    for (i, b) in state.poles.iter().enumerate() {
        let (j, d) = poles
            .iter()
            .enumerate()
            .map(|(j, c)| (j, (c - b).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        if used[j] || !(d < 0.5 * min_dist) {
            return None;
        }
        if !((res[j] - state.res[i]).norm() < 0.5 * state.res[i].norm()) {
            return None;
        }
        used[j] = true;
        max_disp = max_disp.max(d);
        assignment.push(j);
    }
    Some((assignment, max_disp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::Generator;
    use crate::ratmaps::PartialFractions;
    use crate::Tolerances;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn roots_of_unity(k: usize) -> PartialFractions {
        let poles = (0..k).map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64)).collect();
        PartialFractions::new(poles, vec![c(1.0, 0.0); k]).unwrap()
    }

    #[test]
    fn constant_loop_is_identity() {
        let l = LoopSpec::word(roots_of_unity(3), &[], 8, &Tolerances::default()).unwrap();
        let (g, trace) = continue_loop(&l).unwrap();
        assert!(g.is_identity());
        assert_eq!(trace.steps, 0);
    }

    #[test]
    fn wind_flips_one_sign() {
        for i in 1..=3 {
            let l = LoopSpec::wind(i, roots_of_unity(3), 16, &Tolerances::default()).unwrap();
            let (g, _) = continue_loop(&l).unwrap();
            assert_eq!(g, SignedPermutation::flip(3, i - 1));
        }
    }

    #[test]
    fn braid_is_plain_transposition() {
        for j in 1..=2 {
            let l = LoopSpec::braid(j, roots_of_unity(3), 16, &Tolerances::default()).unwrap();
            let (g, trace) = continue_loop(&l).unwrap();
            assert_eq!(g, SignedPermutation::transposition(3, j - 1, j));
            for s in &trace.samples[1..] {
                assert!(s.max_displacement < 0.5 * s.min_distance);
            }
        }
    }

    #[test]
    fn coarse_sampling_is_refined() {
        let l = LoopSpec::wind(1, roots_of_unity(2), 1, &Tolerances::default()).unwrap();
        let (g, trace) = continue_loop(&l).unwrap();
        assert_eq!(g, SignedPermutation::flip(2, 0));
        assert!(trace.steps > 1);
    }

    #[test]
    fn braid_with_unequal_residues_closes() {
        let base = PartialFractions::new(vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![c(1.0, 0.0), c(4.0, 0.0)]).unwrap();
        let l = LoopSpec::braid(1, base, 16, &Tolerances::default()).unwrap();
        let (g, _) = continue_loop(&l).unwrap();
        assert_eq!(g.pi(), &[1, 0]);
    }

    #[test]
    fn csv_layout() {
        let l = LoopSpec::word(roots_of_unity(2), &[Generator::wind(1)], 4, &Tolerances::default()).unwrap();
        let (_, trace) = continue_loop(&l).unwrap();
        let csv = trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,b1_re,b1_im,b2_re,b2_im,w1_re,w1_im,w2_re,w2_im");
        assert_eq!(lines.count(), trace.samples.len());
    }
}
