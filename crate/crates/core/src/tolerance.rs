//! Numerical thresholds shared by the modules.

use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative pole separation; see [`separation_threshold`].
    pub delta: f64,
    /// Resultant threshold relative to the Hadamard bound of the Sylvester matrix.
    pub coprime: f64,
    /// Residues below `residue * max(1, max |r|)` count as zero.
    pub residue: f64,
    /// `|q(z)|` below `pole_hit * sum |q_j| |z|^j` counts as a pole.
    pub pole_hit: f64,
    /// Krylov determinant threshold relative to the product of column norms.
    pub cyclic: f64,
    /// Relative singular-value cutoff for numerical rank.
    pub rank: f64,
    /// Allowed deviation of `W2/W1` from `+-1`.
    pub sign_match: f64,
    /// Relative asymmetry allowed in `B`.
    pub symmetry: f64,
    /// Allowed defect `max |Q^t Q - I|`.
    pub orthogonal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            delta: 1e-6,
            coprime: 1e-10,
            residue: 1e-12,
            pole_hit: 1e-14,
            cyclic: 1e-8,
            rank: 1e-9,
            sign_match: 1e-8,
            symmetry: 1e-10,
            orthogonal: 1e-12,
        }
    }
}

/// Absolute separation below which two points of `points` count as equal:
/// `delta * diameter`, or `delta` when the diameter is below one.
pub fn separation_threshold(delta: f64, points: &[C64]) -> f64 {
    delta * diameter(points).max(1.0)
}

pub fn diameter(points: &[C64]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Smallest pairwise distance, `+inf` for fewer than two points.
pub fn min_separation(points: &[C64]) -> f64 {
    let mut d = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.min((a - b).norm());
        }
    }
    d
}
