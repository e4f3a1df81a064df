//! Simulation lab: test densities, samplers, the convolution-KDE baseline,
//! and Monte Carlo risk measurement.

mod baseline;
mod bump;
mod phi;
mod risk;

pub use baseline::{
    boundary_bias_table, convolution_kde, epanechnikov, epanechnikov_cdf, BiasRow,
};
pub use bump::{BumpDensity, BumpFamilyParams, Density, UniformDensity};
pub use phi::{bump_profile, mollifier, PROFILE_SUP_BOUND};
pub use risk::{
    fit_rate_slope, monte_carlo_risk, oracle_study, rejection_sample, replicate_rng, risk_curve,
    OracleRow, RiskEntry, RiskReport,
};
