//! Signed permutations, loops of pole/residue configurations and the
//! monodromy of the diagonal lift along them.
//!
//! Conventions: loops compose by concatenation (first loop traversed first)
//! and the monodromy satisfies `mono(a ++ b) = mono(a).compose(mono(b))`,
//! i.e. the matrix of the first loop stands on the left.

mod continuation;
mod group;
mod loops;

pub use continuation::{continue_loop, ContinuationTrace, TraceSample, MAX_REFINEMENT};
pub use group::SignedPermutation;
pub use loops::{expected_image, Generator, GeneratorKind, LoopSpec, Segment, MAX_SAMPLES};
