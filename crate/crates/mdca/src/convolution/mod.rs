//! Forms on Σ[sL] with values in A: cup product, the operators `D_j`,
//! descent to A-multilinear forms and the multi derivation structure.

mod descent;
mod forms;
mod mdca;
mod operators;

pub use descent::{
    ambient_basis, bigrade_check, descent_check, is_a_multilinear, project_word, square_check, BigradeViolation,
    DescendedSpace, Projection, DescentReport, MultilinearityWitness, SquareResidual,
};
pub use forms::{Form, FormSpace};
pub use mdca::{cohomology_ranks, CohomologyEntry, CohomologyError, DerivationFailure, DescendedResidual, MdcaStructure};
pub use operators::{
    build_d, hom_differential, hom_differential_op, partial_bra, partial_bra_op, partial_t, partial_t_op,
    AmbientOperators, TwistingCochain,
};
