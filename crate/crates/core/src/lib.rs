//! Boundary-corrected kernel density estimation on the unit cube.
//!
//! The estimator flips a one-sided product kernel toward the interior of
//! [0, 1]^d at every evaluation point, so no kernel mass ever leaves the
//! support and the boundary bias of convolution estimators disappears. On
//! top of the estimator family sit two data-driven selection rules of
//! Goldenshluger-Lepski type: an isotropic one that picks the kernel order
//! and a scalar bandwidth jointly, and an anisotropic one that picks a
//! bandwidth vector under a fixed kernel.
//!
//! Module map:
//! - [`kernels`]: the minimal-L2 kernels w_m built from shifted Legendre
//!   polynomials, with their exact norm and moment identities.
//! - [`boundary`]: the flipped tensor kernel and the density estimator on
//!   points and grids.
//! - [`family`]: enumeration of the isotropic/anisotropic candidate sets.
//! - [`lp`]: quadrant quadrature, L_p norms of gridded functions, and the
//!   empirical majorants of the selection rule.
//! - [`selection`]: the selection rule itself.
//! - [`sim`]: test densities, seeded samplers, the convolution baseline,
//!   and Monte Carlo risk studies.

pub mod boundary;
pub mod error;
pub mod family;
pub mod kernels;
pub mod lp;
pub mod quad;
pub mod selection;
pub mod sim;

pub use boundary::{flip_sign, ProductKernelSpec, SampleSet, TensorGrid};
pub use error::{Error, Result};
pub use family::{
    bandwidth_ceiling, family_levels, level_in_family, member_spec, order_for_level, FamilyConfig,
    FamilyIndex, Mode,
};
pub use kernels::{hilbert_coeffs, legendre_poly, shifted_legendre, OrderedKernel};
pub use lp::{
    deviation_constant, estimate_on_cube, majorant, majorant_for, pair_majorant,
    rosenthal_constant, second_moment_term, CubeGrid, QuadrantGrid, QuadratureConfig,
};
pub use selection::{select, select_on, SelectionConfig, SelectionOutcome, SelectionTrace};
