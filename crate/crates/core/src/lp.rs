//! L_p quadrature over the quadrant decomposition of the unit cube, and the
//! empirical majorant entering the selection rule.
//!
//! The cube splits into 2^d half-open quadrants indexed by a bit vector eps,
//! each carrying a composite Gauss-Legendre tensor grid. All candidate
//! estimators are evaluated once on the shared full-cube grid so pairwise
//! difference norms reduce to weighted sums of cached vectors.
//!
//! For p <= 2 the per-quadrant deviation bound is the data-free constant
//! 2^{-d(2-p)/(2p)} ||W||_2; for p > 2 it is C_p (Lambda_eps + 2 ||W||_p)
//! with the Rosenthal constant C_p = 14.7 p / log p and the empirical
//! second-moment term
//!
//! Lambda_eps = sqrt(V_h) ( int_quadrant ((1/n) sum_j K^2(t, X_j))^{p/2} )^{1/p}.

use crate::boundary::{ProductKernelSpec, SampleSet, TensorGrid};
use crate::error::{Error, Result};
use crate::family::{member_spec, FamilyConfig, FamilyIndex};
use crate::quad::{composite_rule, GaussRule};

/// Composite Gauss-Legendre resolution per dimension.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureConfig {
    pub panels: usize,
    pub nodes: usize,
}

impl QuadratureConfig {
    /// Defaults matched to the cost of tensorizing: 32x8 in one dimension,
    /// 16x4 in two, 8x4 beyond.
    pub fn default_for_dim(dim: usize) -> Self {
        match dim {
            0 | 1 => QuadratureConfig {
                panels: 32,
                nodes: 8,
            },
            2 => QuadratureConfig {
                panels: 16,
                nodes: 4,
            },
            _ => QuadratureConfig { panels: 8, nodes: 4 },
        }
    }
}

/// One quadrature axis: nodes strictly inside an interval with positive
/// weights summing to its length.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Tensor quadrature grid over one quadrant prod_i (eps_i/2, (1+eps_i)/2).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrantGrid {
    eps: Vec<u8>,
    axes: Vec<Axis1D>,
}

impl QuadrantGrid {
    pub fn new(eps: Vec<u8>, cfg: &QuadratureConfig) -> Self {
        assert!(!eps.is_empty() && eps.iter().all(|&e| e <= 1));
        let rule = GaussRule::new(cfg.nodes);
        let axes = eps
            .iter()
            .map(|&e| {
                let a = e as f64 / 2.0;
                let b = (1 + e) as f64 / 2.0;
                let (nodes, weights) = composite_rule(&rule, a, b, cfg.panels);
                Axis1D { nodes, weights }
            })
            .collect();
        QuadrantGrid { eps, axes }
    }

    pub fn dim(&self) -> usize {
        self.eps.len()
    }

    pub fn eps(&self) -> &[u8] {
        &self.eps
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.nodes.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The node locations as a tensor grid (weights dropped).
    pub fn tensor_grid(&self) -> TensorGrid {
        TensorGrid::new(self.axes.iter().map(|a| a.nodes.clone()).collect())
    }

    /// Flattened tensor weights, aligned with [`TensorGrid`] flat order.
    pub fn flat_weights(&self) -> Vec<f64> {
        let mut out = vec![1.0];
        for axis in &self.axes {
            let mut next = Vec::with_capacity(out.len() * axis.weights.len());
            for &acc in &out {
                for &w in &axis.weights {
                    next.push(acc * w);
                }
            }
            out = next;
        }
        out
    }
}

/// The full-cube grid: all 2^d quadrant grids, eps-lexicographic, flattened.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeGrid {
    dim: usize,
    quadrants: Vec<QuadrantGrid>,
    offsets: Vec<usize>,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl CubeGrid {
    pub fn new(dim: usize, cfg: &QuadratureConfig) -> Self {
        assert!(dim >= 1);
        let mut quadrants = Vec::with_capacity(1 << dim);
        for code in 0..(1usize << dim) {
            let eps: Vec<u8> = (0..dim)
                .map(|i| ((code >> (dim - 1 - i)) & 1) as u8)
                .collect();
            quadrants.push(QuadrantGrid::new(eps, cfg));
        }
        let mut offsets = Vec::with_capacity(quadrants.len() + 1);
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut total = 0;
        for q in &quadrants {
            offsets.push(total);
            total += q.len();
            let grid = q.tensor_grid();
            for flat in 0..grid.len() {
                points.extend(grid.point(flat));
            }
            weights.extend(q.flat_weights());
        }
        offsets.push(total);
        CubeGrid {
            dim,
            quadrants,
            offsets,
            points,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn quadrants(&self) -> &[QuadrantGrid] {
        &self.quadrants
    }

    /// Flat index range of one quadrant inside the cube vectors.
    pub fn quadrant_range(&self, qi: usize) -> std::ops::Range<usize> {
        self.offsets[qi]..self.offsets[qi + 1]
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k * self.dim..(k + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Evaluate a function on every node.
    pub fn eval<F: Fn(&[f64]) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.len()).map(|k| f(self.point(k))).collect()
    }

    /// ( sum_k w_k |v_k|^p )^{1/p} over the whole cube.
    pub fn lp_norm(&self, values: &[f64], p: f64) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::GridMismatch {
                expected: self.len(),
                got: values.len(),
            });
        }
        assert!(p >= 1.0, "L_p norm needs p >= 1, got {p}");
        let mut acc = 0.0;
        for (v, w) in values.iter().zip(&self.weights) {
            acc += w * v.abs().powf(p);
        }
        Ok(acc.powf(1.0 / p))
    }
}

/// Evaluate the boundary estimator on the full-cube grid, quadrant by
/// quadrant (deterministic flat order).
pub fn estimate_on_cube(
    spec: &ProductKernelSpec,
    sample: &SampleSet,
    cube: &CubeGrid,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(cube.len());
    for q in cube.quadrants() {
        out.extend(spec.estimate_grid(sample, &q.tensor_grid())?);
    }
    Ok(out)
}

/// Best known constant in the Rosenthal inequality, C_p = 14.7 p / log p.
pub fn rosenthal_constant(p: f64) -> f64 {
    14.7 * p / p.ln()
}

/// Empirical second-moment term Lambda_eps(W, h, p) on one quadrant.
/// Only defined for p > 2 (the selection rule never needs it below).
pub fn second_moment_term(
    spec: &ProductKernelSpec,
    sample: &SampleSet,
    p: f64,
    quadrant: &QuadrantGrid,
) -> Result<f64> {
    assert!(p > 2.0, "the second-moment term is only used for p > 2");
    let mean_sq = spec.mean_square_kernel_grid(sample, &quadrant.tensor_grid())?;
    let weights = quadrant.flat_weights();
    let mut acc = 0.0;
    for (s, w) in mean_sq.iter().zip(&weights) {
        acc += w * s.powf(0.5 * p);
    }
    Ok(spec.volume().sqrt() * acc.powf(1.0 / p))
}

/// Per-quadrant deviation bound Gamma_eps(W, h, p).
pub fn deviation_constant(
    spec: &ProductKernelSpec,
    sample: &SampleSet,
    p: f64,
    quadrant: &QuadrantGrid,
) -> Result<f64> {
    assert!(p >= 1.0);
    let d = spec.dim() as f64;
    if p <= 2.0 {
        let scale = 2f64.powf(-d * (2.0 - p) / (2.0 * p));
        Ok(scale * spec.product_lp_norm(2.0))
    } else {
        let lambda = second_moment_term(spec, sample, p, quadrant)?;
        Ok(rosenthal_constant(p) * (lambda + 2.0 * spec.product_lp_norm(p)))
    }
}

/// Stochastic majorant M_p = (n V_h)^{-1/2} sum_eps Gamma_eps for a given
/// member spec.
pub fn majorant(
    spec: &ProductKernelSpec,
    sample: &SampleSet,
    p: f64,
    cube: &CubeGrid,
) -> Result<f64> {
    let mut sum = 0.0;
    for q in cube.quadrants() {
        sum += deviation_constant(spec, sample, p, q)?;
    }
    Ok(sum / (sample.len() as f64 * spec.volume()).sqrt())
}

/// M_p(l) for a family index.
pub fn majorant_for(
    cfg: &FamilyConfig,
    idx: &FamilyIndex,
    sample: &SampleSet,
    p: f64,
    cube: &CubeGrid,
) -> Result<f64> {
    let spec = member_spec(cfg, idx)?;
    majorant(&spec, sample, p, cube)
}

/// Pairwise majorant M_p(l, l') = M_p(l') + M_p(l /\ l').
///
/// The coordinatewise minimum always satisfies both bandwidth bounds when
/// its operands do (the volume only grows), so membership of the meet is a
/// structural invariant rather than a user-facing error.
pub fn pair_majorant(
    cfg: &FamilyConfig,
    idx: &FamilyIndex,
    other: &FamilyIndex,
    sample: &SampleSet,
    p: f64,
    cube: &CubeGrid,
) -> Result<f64> {
    let meet = idx.meet(other);
    debug_assert!(
        crate::family::level_in_family(cfg, &meet),
        "meet of two family members left the family"
    );
    Ok(majorant_for(cfg, other, sample, p, cube)? + majorant_for(cfg, &meet, sample, p, cube)?)
}
