//! Loss-dependent uncertainty, entropy and information on finite probability
//! spaces.
//!
//! Knowledge is a partition of a finite atom set. For a loss `l`, the optimal
//! risk under a partition is the expected loss of the best action that may
//! depend only on the block of the realized atom; uncertainty reduction is
//! the drop in optimal risk between two partitions. Entropy, information and
//! their conditional forms are special cases. The [`continuous`] module
//! covers one- and two-dimensional grid densities.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

/// Engine version reported by front ends.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod continuous;
pub mod error;
pub mod extended;
pub mod losses;
pub mod partition;
pub mod space;
pub mod uncertainty;

pub use error::{Error, Result};
pub use extended::{sum_extended, ExtendedReal};
pub use losses::{
    bayes_act, bregman_divergence, expected_loss, pointwise_min_loss, scoring_divergence,
    ActionSpace, BayesActResult, ConvexGenerator, ExponentialSum, Loss, LossModel, NegativeEntropy,
    PointwiseMin, SolveMethod, SquaredNorm, WeightedStates,
};
pub use partition::{
    enumerate_partitions, is_refinement, partition_join, trivial_partition, Partition,
};
pub use space::{
    conditional_expectation, expectation, law, one_hot, partition_of_element, ElementKind,
    RandomElement, SampleSpace,
};
pub use uncertainty::{
    belief_decomposition, bregman_information, check_pythagoras, check_telescope,
    conditional_entropy, conditional_entropy_as_divergence, conditional_information,
    conditional_information_as_divergence, entropy, entropy_as_divergence, information,
    information_as_divergence, lattice_sweep, optimal_risk, uncertainty_reduction,
    BeliefDecomposition, LatticeSummary, LatticeSweep, Quantity, UncertaintyReport,
};
