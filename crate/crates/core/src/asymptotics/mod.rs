//! Weak asymptotics: statistics of semigroups over cubic neighborhoods
//! `N * base + j` of a base vector, with exact integer sums and a reduction
//! order that does not depend on the thread count.

mod density;
mod estimators;
mod neighborhood;

pub use density::{coprime_density, fill_density, zeta, DensityReport, FillBin, FillReport, MIN_DENSITY_SAMPLES};
pub use estimators::{
    k_estimator, k_lower_bound, p_q_estimators, symmetric_fraction, uw_sweep, EstimatorReport, SymmetricFraction,
};
pub use neighborhood::{
    admissible_points, AdmissiblePoints, LatticeBase, NeighborhoodSpec, SamplingMode, EXHAUSTIVE_BUDGET,
};
