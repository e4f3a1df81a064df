//! Test densities: the uniform density and the lattice bump family.
//!
//! The bump family places scaled copies of the odd profile on the regular
//! lattice with centers (2r_i + 1) h_i, one per cell of side 2h_i:
//!
//! f(x) = 1 + rho * sum_r w(r) prod_i profile((x_i - c_i(r)) / h_i).
//!
//! Each bump integrates to zero, so f is a density; rho < (e/2)^d keeps it
//! positive. The amplitude and half-width here are free simulation knobs:
//! the minimax proofs tie them to n, but visible desk-scale signal needs
//! fixed values.

use super::phi::{bump_profile, PROFILE_SUP_BOUND};
use crate::error::{Error, Result};

/// A probability density on the unit cube that can be sampled by rejection.
pub trait Density: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
    /// An upper bound on the density, used as the rejection envelope.
    fn sup_bound(&self) -> f64;
}

/// The uniform density on [0, 1]^d.
#[derive(Debug, Clone, Copy)]
pub struct UniformDensity {
    pub dim: usize,
}

impl Density for UniformDensity {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, _x: &[f64]) -> f64 {
        1.0
    }

    fn sup_bound(&self) -> f64 {
        1.0
    }
}

/// Parameters of the lattice bump family.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpFamilyParams {
    pub dim: usize,
    /// Half-width per coordinate; 1/(2 h_i) must be an integer (the lattice
    /// cell count R_i).
    pub half_width: Vec<f64>,
    /// Amplitude rho >= 0, strictly below (e/2)^d.
    pub amplitude: f64,
    /// One activation bit per lattice cell, row-major (last coordinate
    /// fastest), length prod_i R_i.
    pub bits: Vec<bool>,
}

impl BumpFamilyParams {
    /// d = 1 convenience: alternating bits 1, 0, 1, 0, ...
    pub fn alternating_1d(half_width: f64, amplitude: f64) -> Result<Self> {
        let params = BumpFamilyParams {
            dim: 1,
            half_width: vec![half_width],
            amplitude,
            bits: Vec::new(),
        };
        let r = params.lattice_counts()?[0];
        Ok(BumpFamilyParams {
            bits: (0..r).map(|i| i % 2 == 0).collect(),
            ..params
        })
    }

    /// Cell counts R_i = 1/(2 h_i).
    pub fn lattice_counts(&self) -> Result<Vec<usize>> {
        if self.dim == 0 || self.half_width.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: self.half_width.len(),
            });
        }
        self.half_width
            .iter()
            .map(|&h| {
                if !(h > 0.0 && h < 0.5) {
                    return Err(Error::InvalidConfig(format!(
                        "bump half-width must lie in (0, 1/2), got {h}"
                    )));
                }
                let r = 1.0 / (2.0 * h);
                if (r - r.round()).abs() > 1e-9 {
                    return Err(Error::InvalidConfig(format!(
                        "1/(2h) = {r} is not an integer lattice count"
                    )));
                }
                Ok(r.round() as usize)
            })
            .collect()
    }

    pub fn positivity_bound(&self) -> f64 {
        (std::f64::consts::E / 2.0).powi(self.dim as i32)
    }

    pub fn validate(&self) -> Result<()> {
        let counts = self.lattice_counts()?;
        let cells: usize = counts.iter().product();
        if self.bits.len() != cells {
            return Err(Error::InvalidConfig(format!(
                "expected {cells} activation bits, got {}",
                self.bits.len()
            )));
        }
        if !(self.amplitude >= 0.0) || self.amplitude >= self.positivity_bound() {
            return Err(Error::InvalidAmplitude {
                rho: self.amplitude,
                bound: self.positivity_bound(),
            });
        }
        Ok(())
    }

    /// Center of the lattice cell r: c_i = (2 r_i + 1) h_i.
    pub fn center(&self, r: &[usize]) -> Vec<f64> {
        r.iter()
            .zip(&self.half_width)
            .map(|(&ri, &h)| (2 * ri + 1) as f64 * h)
            .collect()
    }
}

/// The bump density; construct through [`BumpDensity::new`] so the
/// parameters are validated once.
#[derive(Debug, Clone)]
pub struct BumpDensity {
    params: BumpFamilyParams,
    counts: Vec<usize>,
}

impl BumpDensity {
    pub fn new(params: BumpFamilyParams) -> Result<Self> {
        params.validate()?;
        let counts = params.lattice_counts()?;
        Ok(BumpDensity { params, counts })
    }

    pub fn params(&self) -> &BumpFamilyParams {
        &self.params
    }

    fn bit_at(&self, cell: &[usize]) -> bool {
        let mut flat = 0;
        for (i, &c) in cell.iter().enumerate() {
            flat = flat * self.counts[i] + c;
        }
        self.params.bits[flat]
    }
}

impl Density for BumpDensity {
    fn dim(&self) -> usize {
        self.params.dim
    }

    /// Bumps on distinct cells have disjoint supports, so only the cell
    /// containing x can contribute.
    fn eval(&self, x: &[f64]) -> f64 {
        let mut cell = Vec::with_capacity(self.params.dim);
        for (i, &xi) in x.iter().enumerate() {
            let width = 2.0 * self.params.half_width[i];
            let c = ((xi / width) as usize).min(self.counts[i] - 1);
            cell.push(c);
        }
        if !self.bit_at(&cell) {
            return 1.0;
        }
        let center = self.params.center(&cell);
        let mut prod = 1.0;
        for i in 0..self.params.dim {
            prod *= bump_profile((x[i] - center[i]) / self.params.half_width[i]);
        }
        1.0 + self.params.amplitude * prod
    }

    fn sup_bound(&self) -> f64 {
        1.0 + self.params.amplitude * PROFILE_SUP_BOUND.powi(self.params.dim as i32)
    }
}
