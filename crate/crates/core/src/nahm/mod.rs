//! Nahm data on `(-1, 1)`: `dT_1/ds = [T_2, T_3]` and cyclic permutations,
//! with simple poles at both endpoints whose residues form an irreducible
//! `su(2)` representation.

mod data;
pub mod elliptic;
mod residues;
mod verify;

pub use data::{NahmData, NahmKind, Tabulated, Triple};
pub use elliptic::{complete_k, jacobi_elliptic, JacobiValues};
pub use residues::{residue_equation_defect, spectrum_of_minus_i_t3, su2_residues, SU2Residues};
pub use verify::{
    interior_grid, nahm_residual, nahm_residual_with, residue_fit, Endpoint, ResidualOptions, ResidueFit, Stencil,
    ENDPOINT_MARGIN, FIT_OFFSETS,
};
