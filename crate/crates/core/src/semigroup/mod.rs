//! Finitely generated semigroups of nonnegative matrices: enumeration,
//! indecomposability, sup functions, domination certificates and
//! diagonal rescaling.

mod analysis;
mod binary;
mod closure;

pub use analysis::{
    bounded_semigroup_scaling, entrywise_bound_report, indecomposability_witness,
    is_indecomposable, matrix_like_check, matrix_like_defect, rescale_by, rescale_matrix,
    semigroup_scaling, sup_function, BoundReport, DominationCertificate, SupFunction, Verification,
};
pub use binary::{binary_diagonal_rescale, binary_diagonal_rescale_default, BinaryRescaling};
pub use closure::{
    generate_closure, ClosureOptions, ClosureStatus, CompositionRule, SemigroupClosure,
    DEFAULT_CAP, DEFAULT_DEDUP_TOL,
};
