//! Enumeration of the candidate estimator families.
//!
//! A level l encodes the bandwidth h = e^{-l}. Admissible bandwidths lie in
//! (0, h_n*]^d with h_n* = exp(-sqrt(log n)) and must keep n V_h >= (log n)^c.
//! The isotropic family uses a common level in every coordinate and ties the
//! kernel order to the level through m(l) = floor(log n / (2l) + 1/2); the
//! anisotropic family keeps a fixed kernel per coordinate and varies the
//! level vector.

use crate::boundary::ProductKernelSpec;
use crate::error::{Error, Result};
use crate::kernels::OrderedKernel;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Iso,
    Ani,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Iso => write!(f, "iso"),
            Mode::Ani => write!(f, "ani"),
        }
    }
}

/// Parameters that pin down one candidate family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub n: usize,
    pub dim: usize,
    /// Exponent of the (log n)^c volume floor.
    pub c: f64,
    pub mode: Mode,
    /// Kernel orders of the fixed anisotropic kernel; defaults to 2 in each
    /// coordinate. Ignored in isotropic mode.
    pub base_orders: Option<Vec<usize>>,
}

impl FamilyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!(
                "sample size must be at least 2, got {}",
                self.n
            )));
        }
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dimension must be at least 1".into()));
        }
        if !(self.c > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "the volume floor exponent must be positive, got {}",
                self.c
            )));
        }
        if self.mode == Mode::Ani {
            if let Some(orders) = &self.base_orders {
                if orders.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        got: orders.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Kernel orders used by the anisotropic family.
    pub fn effective_orders(&self) -> Vec<usize> {
        self.base_orders
            .clone()
            .unwrap_or_else(|| vec![2; self.dim])
    }

    fn log_n(&self) -> f64 {
        (self.n as f64).ln()
    }

    /// (log n)^c, the floor for n V_h.
    pub fn volume_floor(&self) -> f64 {
        self.log_n().powf(self.c)
    }
}

/// Largest admissible bandwidth h_n* = exp(-sqrt(log n)).
pub fn bandwidth_ceiling(n: usize) -> f64 {
    (-(n as f64).ln().sqrt()).exp()
}

/// Kernel order tied to an isotropic level: m(l) = floor(log n/(2l) + 1/2).
pub fn order_for_level(n: usize, level: usize) -> usize {
    assert!(level >= 1);
    ((n as f64).ln() / (2.0 * level as f64) + 0.5).floor() as usize
}

/// Index of one candidate estimator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyIndex {
    Iso(usize),
    Ani(Vec<usize>),
}

impl FamilyIndex {
    /// Per-coordinate levels, expanded to the given dimension for iso.
    pub fn levels(&self, dim: usize) -> Vec<usize> {
        match self {
            FamilyIndex::Iso(l) => vec![*l; dim],
            FamilyIndex::Ani(v) => v.clone(),
        }
    }

    /// Coordinatewise minimum of two indices of the same kind.
    pub fn meet(&self, other: &FamilyIndex) -> FamilyIndex {
        match (self, other) {
            (FamilyIndex::Iso(a), FamilyIndex::Iso(b)) => FamilyIndex::Iso(*a.min(b)),
            (FamilyIndex::Ani(a), FamilyIndex::Ani(b)) => {
                assert_eq!(a.len(), b.len());
                FamilyIndex::Ani(a.iter().zip(b).map(|(&x, &y)| x.min(y)).collect())
            }
            _ => panic!("cannot meet indices from different families"),
        }
    }
}

impl fmt::Display for FamilyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyIndex::Iso(l) => write!(f, "{l}"),
            FamilyIndex::Ani(v) => {
                let parts: Vec<String> = v.iter().map(|l| l.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// Does the index satisfy both bandwidth bounds for this configuration?
pub fn level_in_family(cfg: &FamilyConfig, idx: &FamilyIndex) -> bool {
    let h_max = bandwidth_ceiling(cfg.n);
    let floor = cfg.volume_floor();
    let levels = match (cfg.mode, idx) {
        (Mode::Iso, FamilyIndex::Iso(l)) => vec![*l; cfg.dim],
        (Mode::Ani, FamilyIndex::Ani(v)) if v.len() == cfg.dim => v.clone(),
        _ => return false,
    };
    if levels.iter().any(|&l| l < 1) {
        return false;
    }
    let bandwidths: Vec<f64> = levels.iter().map(|&l| (-(l as f64)).exp()).collect();
    let volume: f64 = bandwidths.iter().product();
    bandwidths.iter().all(|&h| h <= h_max) && cfg.n as f64 * volume >= floor
}

fn empty_family_error(cfg: &FamilyConfig) -> Error {
    Error::EmptyFamily {
        h_max: bandwidth_ceiling(cfg.n),
        floor: cfg.volume_floor(),
    }
}

/// All admissible indices, ascending (iso) or lexicographic (ani).
pub fn family_levels(cfg: &FamilyConfig) -> Result<Vec<FamilyIndex>> {
    cfg.validate()?;
    // n V_h >= (log n)^c forces sum_i l_i <= log n - c log log n; one more
    // level on top of that bound is a safe per-coordinate cap. (The second
    // term matters for n = 2 with large c, where log log n is negative.)
    let sum_cap = cfg.log_n() - cfg.c * cfg.log_n().ln();
    let cap = sum_cap.ceil().max(1.0) as usize + 1;
    let out = match cfg.mode {
        Mode::Iso => (1..=cap)
            .map(FamilyIndex::Iso)
            .filter(|idx| level_in_family(cfg, idx))
            .collect::<Vec<_>>(),
        Mode::Ani => {
            let mut out = Vec::new();
            let mut stack = vec![Vec::with_capacity(cfg.dim)];
            while let Some(prefix) = stack.pop() {
                if prefix.len() == cfg.dim {
                    let idx = FamilyIndex::Ani(prefix);
                    if level_in_family(cfg, &idx) {
                        out.push(idx);
                    }
                    continue;
                }
                // Push in reverse so the stack pops in ascending order.
                for l in (1..=cap).rev() {
                    let mut next = prefix.clone();
                    next.push(l);
                    stack.push(next);
                }
            }
            out
        }
    };
    if out.is_empty() {
        return Err(empty_family_error(cfg));
    }
    Ok(out)
}

/// The (kernels, bandwidth) pair of one family member.
pub fn member_spec(cfg: &FamilyConfig, idx: &FamilyIndex) -> Result<ProductKernelSpec> {
    cfg.validate()?;
    if !level_in_family(cfg, idx) {
        return Err(Error::IndexNotInFamily(idx.to_string()));
    }
    let levels = idx.levels(cfg.dim);
    let bandwidth: Vec<f64> = levels.iter().map(|&l| (-(l as f64)).exp()).collect();
    let kernels: Vec<OrderedKernel> = match cfg.mode {
        Mode::Iso => {
            let m = order_for_level(cfg.n, levels[0]);
            let k = OrderedKernel::of_order(m)?;
            vec![k; cfg.dim]
        }
        Mode::Ani => cfg
            .effective_orders()
            .into_iter()
            .map(OrderedKernel::of_order)
            .collect::<Result<_>>()?,
    };
    ProductKernelSpec::new(kernels, bandwidth)
}
