//! Densities on uniform grids: log-loss and Hyvärinen information by
//! quadrature, and witness sequences for the (infinite) entropies.

mod density_loss;
mod grid;
mod information;
mod witness;

pub use density_loss::{DensityLoss, DensityLossKind};
pub use grid::{Grid, GridDensity, JointGridDensity, DENSITY_TOLERANCE};
pub use information::{
    conditional_score, continuous_information, hyvarinen_information, MARGINAL_FLOOR,
};
pub use witness::{
    check_witness_normalization, continuous_entropy, default_witness_step,
    demonstrate_entropy_divergence, hyvarinen_witness_laplacian, hyvarinen_witness_loss,
    hyvarinen_witness_score, logloss_witness_quadrature, logloss_witness_value, max_witness_step,
    reference_density, witness_density, ContinuousEntropy, WitnessFamily, WitnessPoint,
    NORMALIZATION_HALF_WIDTH, REFERENCE_HALF_WIDTH,
};
