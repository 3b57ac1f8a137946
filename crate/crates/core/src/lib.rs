//! Nahm data, Donaldson pairs `(B, W)` and based rational maps.
//!
//! The crate follows the chain
//!
//! ```text
//! Nahm data T_i(s) --flow--> (B, W) --project--> f(z) = W^t (zI - B)^{-1} W
//! ```
//!
//! and, over maps with distinct poles, the reduction of the `O(k)` fibre to
//! signed permutations together with the monodromy of that reduction along
//! loops of pole/residue configurations.
//!
//! Modules:
//! - [`ratmaps`]: polynomials, based rational maps, partial fractions.
//! - [`bwpairs`]: symmetric pairs `(B, W)`, projection, cyclicity, `O(k)` action,
//!   the diagonal lift and the signed-permutation relation between lifts.
//! - [`nahm`]: `su(2)` residues, Jacobi elliptic functions, built-in and
//!   tabulated Nahm data, residual and residue checks.
//! - [`flow`]: the scattering ODE producing `(B, W)` from Nahm data.
//! - [`monodromy`]: the hyperoctahedral group, loops and path continuation.
//! - [`json`]: the JSON file formats shared with the command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bwpairs;
pub mod error;
pub mod flow;
pub mod json;
pub mod linalg;
pub mod monodromy;
pub mod nahm;
pub mod ratmaps;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

pub use num_complex::Complex64 as C64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

/// Largest degree accepted from external input.
pub const MAX_DEGREE: usize = 64;
