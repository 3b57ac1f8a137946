use crate::C64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("numerator degree {numerator} must be below denominator degree {denominator}")]
    DegreeError { numerator: usize, denominator: usize },
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("numerator and denominator share a root near {common_root}")]
    NotCoprime { common_root: C64 },
    #[error("evaluation point {z} is a pole")]
    PoleHit { z: C64 },
    #[error("poles are not distinct (minimum separation {separation:e})")]
    RepeatedPoles { separation: f64 },
    #[error("residue {index} vanishes")]
    ZeroResidue { index: usize },
    #[error("polynomial root finding did not converge")]
    RootFinding,
    #[error("dimension mismatch: {0}")]
    SizeMismatch(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("degree {0} outside the supported range")]
    DegreeOutOfRange(usize),

    #[error("B is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is not orthogonal (defect {defect:e})")]
    NotOrthogonal { defect: f64 },
    #[error("pair is not diagonal with distinct entries and nonzero W")]
    NotDiagonal,
    #[error("diagonal entries do not match: {0}")]
    NoMatch(String),
    #[error("W components are not related by signs: {0}")]
    NotSignRelated(String),

    #[error("invalid su(2) residues: {0}")]
    InvalidResidues(String),
    #[error("grid point {s} lies within 1e-3 of an endpoint or outside (-1, 1)")]
    GridOutOfRange { s: f64 },
    #[error("no pole at s = {endpoint}")]
    NoPole { endpoint: f64 },
    #[error("invalid Nahm data: {0}")]
    InvalidNahm(String),
    #[error("elliptic modulus {0} outside the supported range")]
    InvalidModulus(f64),

    #[error("invalid flow parameter: {0}")]
    InvalidFlowParameter(String),
    #[error("integrator failed to meet tolerance at s = {s}")]
    StepFailure { s: f64 },
    #[error("A0 diverges at the s = 1 endpoint; no pair extracted")]
    DivergentEndpoint,

    #[error("signed permutations of different sizes ({0} and {1})")]
    GroupSizeMismatch(usize, usize),
    #[error("invalid signed permutation: {0}")]
    InvalidPermutation(String),
    #[error("braid generator would pass within the collision margin of a pole")]
    CollisionRisk,
    #[error("invalid generator index {index} for k = {k}")]
    InvalidGenerator { index: usize, k: usize },
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error("step refinement exhausted at t = {t}")]
    RefinementExhausted { t: f64 },

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// Stable identifier used in command-line diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DegreeError { .. } => "DegreeError",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::PoleHit { .. } => "PoleHit",
            Error::RepeatedPoles { .. } => "RepeatedPoles",
            Error::ZeroResidue { .. } => "ZeroResidue",
            Error::RootFinding => "RootFinding",
            Error::SizeMismatch(_) => "SizeMismatch",
            Error::NonFinite(_) => "NonFinite",
            Error::DegreeOutOfRange(_) => "DegreeOutOfRange",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NotOrthogonal { .. } => "NotOrthogonal",
            Error::NotDiagonal => "NotDiagonal",
            Error::NoMatch(_) => "NoMatch",
            Error::NotSignRelated(_) => "NotSignRelated",
            Error::InvalidResidues(_) => "InvalidResidues",
            Error::GridOutOfRange { .. } => "GridOutOfRange",
            Error::NoPole { .. } => "NoPole",
            Error::InvalidNahm(_) => "InvalidNahm",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::InvalidFlowParameter(_) => "InvalidFlowParameter",
            Error::StepFailure { .. } => "StepFailure",
            Error::DivergentEndpoint => "DivergentEndpoint",
            Error::GroupSizeMismatch(..) => "SizeMismatch",
            Error::InvalidPermutation(_) => "InvalidPermutation",
            Error::CollisionRisk => "CollisionRisk",
            Error::InvalidGenerator { .. } => "InvalidGenerator",
            Error::InvalidLoop(_) => "InvalidLoop",
            Error::RefinementExhausted { .. } => "RefinementExhausted",
            Error::Format(_) => "Format",
        }
    }

    /// True for errors caused by unreadable input rather than by the mathematics.
    pub fn is_format(&self) -> bool {
        matches!(self, Error::Format(_))
    }
}
