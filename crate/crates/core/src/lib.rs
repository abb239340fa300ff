//! Minimum-error discrimination of quantum state ensembles with and without
//! post-measurement information about a partition of the labels.

pub mod compat;
pub mod discrimination;
pub mod ensemble;
pub mod error;
pub mod gallery;
pub mod io;
pub mod label;
pub mod linalg;
pub mod measurement;
pub mod operator;
pub mod post_info;
pub mod qubit;
pub mod random;
pub mod tol;

pub use ensemble::{subensemble, Partition, StateEnsemble};
pub use error::{Error, Result};
pub use label::{cartesian_product, Label};
pub use measurement::{marginal, push_forward, Measurement};
pub use operator::{largest_eigenpair, DensityOperator, EigenPair, Effect, HermitianOperator};
pub use discrimination::{
    compose_partition_value, guess_prob, is_optimal_measurement, optimality_certificate, solve,
    solve_closed_form, solve_numeric, spectral_profile, Method, SolveOptions, SolveResult,
    SpectralProfile, Uniqueness,
};
pub use post_info::{
    auxiliary_ensemble, baseline_from_standard, compatibility_gap, diagonal_for_problem,
    diagonal_from_standard, p_post, p_post_with, p_prior, realize_strategy, strategy_value,
    AuxiliaryEnsemble, CompatibilityReport, PostInfoProblem, Verdict,
};
pub use compat::{
    cloning_bound, cloning_factor, cloning_observable, jmd, jointly_measurable, noisy_version,
    post_lower_bound_jmd, qubit_symmetrize, JmdEstimate, JointMeasurability, NoiseKind, NoiseModel,
    NoiseSearch,
};
pub use gallery::GalleryCase;
