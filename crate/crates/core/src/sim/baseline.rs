//! The classical convolution KDE baseline and the boundary-bias comparison.
//!
//! The naive estimator (1/(n V_h)) sum_j prod_i K((t_i - X_{j,i})/h_i) keeps
//! its kernel shape at the edges, so part of its mass leaves the cube and a
//! bias of order h^{1/p} appears in the integrated L_p sense on the uniform
//! density. The boundary estimator's expectation stays identically 1 there.
//! Both bias curves are computed analytically (expectation integrals, no
//! sampling).

use crate::boundary::{ProductKernelSpec, SampleSet};
use crate::error::{Error, Result};
use crate::kernels::OrderedKernel;
use crate::quad::{composite_integrate, GaussRule};

/// Epanechnikov kernel 0.75 (1 - u^2) on [-1, 1].
pub fn epanechnikov(u: f64) -> f64 {
    if !(-1.0..=1.0).contains(&u) {
        return 0.0;
    }
    0.75 * (1.0 - u * u)
}

/// int_{-1}^a of the Epanechnikov kernel.
pub fn epanechnikov_cdf(a: f64) -> f64 {
    if a <= -1.0 {
        return 0.0;
    }
    if a >= 1.0 {
        return 1.0;
    }
    0.5 + 0.75 * (a - a * a * a / 3.0)
}

/// Convolution kernel density estimate with the Epanechnikov kernel; no
/// boundary correction.
pub fn convolution_kde(bandwidth: &[f64], sample: &SampleSet, t: &[f64]) -> Result<f64> {
    let d = bandwidth.len();
    if sample.dim() != d || t.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: sample.dim().max(t.len()),
        });
    }
    let volume: f64 = bandwidth.iter().product();
    let mut acc = 0.0;
    for j in 0..sample.len() {
        let mut prod = 1.0;
        for i in 0..d {
            prod *= epanechnikov((t[i] - sample.coord(j, i)) / bandwidth[i]);
        }
        acc += prod;
    }
    Ok(acc / (sample.len() as f64 * volume))
}

/// One row of the bias comparison: integrated L_p bias of both estimators
/// at bandwidth h on the uniform density over [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct BiasRow {
    pub h: f64,
    pub naive: f64,
    pub boundary: f64,
}

/// Exact expectation of the naive Epanechnikov KDE on the uniform density:
/// E fhat_h(t) = int_{(t-1)/h}^{t/h} K.
fn naive_expectation(t: f64, h: f64) -> f64 {
    epanechnikov_cdf(t / h) - epanechnikov_cdf((t - 1.0) / h)
}

/// Integrated bias curves for a list of bandwidths.
///
/// `grid_res` controls the composite panels of the outer t-integral;
/// `boundary_order` picks the w_m kernel of the boundary estimator (whose
/// expectation is computed by an exact-degree inner quadrature rather than
/// assumed to be 1).
pub fn boundary_bias_table(
    p: f64,
    bandwidths: &[f64],
    grid_res: usize,
    boundary_order: usize,
) -> Result<Vec<BiasRow>> {
    if !(p >= 1.0) {
        return Err(Error::InvalidConfig(format!("p must be >= 1, got {p}")));
    }
    let kernel = OrderedKernel::of_order(boundary_order)?;
    let inner = GaussRule::new(boundary_order + 2);
    let outer = GaussRule::new(8);
    let panels = grid_res.max(8);
    let mut rows = Vec::with_capacity(bandwidths.len());
    for &h in bandwidths {
        if !(h > 0.0 && h < 0.5) {
            return Err(Error::InvalidBandwidth { coord: 0, value: h });
        }
        // Naive column: |E fhat - 1| vanishes on [h, 1-h] and is symmetric,
        // so integrate the two edge strips.
        let edge = |a: f64, b: f64| {
            composite_integrate(&outer, a, b, panels, |t| {
                (naive_expectation(t, h) - 1.0).abs().powf(p)
            })
        };
        let naive = (edge(0.0, h) + edge(1.0 - h, 1.0)).powf(1.0 / p);

        // Boundary column: expectation from the inner quadrature over the
        // kernel's x-support, then the same outer norm.
        let spec = ProductKernelSpec::new(vec![kernel.clone()], vec![h])?;
        let expectation = |t: f64| {
            let (lo, hi) = if t > 0.5 { (t - h, t) } else { (t, t + h) };
            inner.integrate(lo.max(0.0), hi.min(1.0), |x| {
                spec.kernel_at(&[t], &[x]).expect("dimensions fixed")
            })
        };
        let boundary = composite_integrate(&outer, 0.0, 1.0, panels, |t| {
            (expectation(t) - 1.0).abs().powf(p)
        })
        .powf(1.0 / p);

        rows.push(BiasRow { h, naive, boundary });
    }
    Ok(rows)
}
