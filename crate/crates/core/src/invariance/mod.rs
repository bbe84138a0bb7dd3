//! Minimal `su(2^N)` generating sets, commutants and central projections, and
//! the overlap and dimension-growth indices built on them.

mod builders;
mod commutant;
mod indices;

pub use builders::{build_su4_minimal, build_sun_generators, SuNVariant};
pub use commutant::{
    center_of_commutant, central_projection_matrix, commutant, dedup_up_to_scalar,
    doubled_commutant_dim, CenterBasis, CommutantBasis, COMMUTANT_DIM_LIMIT, DOUBLED_DIM_LIMIT,
    GRAM_KERNEL_TOL,
};
pub use indices::{
    analyze_overlap, overlap_from_vectors, percentage_change, percentage_change_from_dims,
    projection_overlap, simulability_check, OverlapOptions, OverlapReport,
};
