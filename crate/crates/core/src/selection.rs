//! The Goldenshluger-Lepski selection rule.
//!
//! Every candidate estimator is evaluated once on the shared full-cube grid.
//! For each index l the empirical bias proxy is
//!
//! B(l) = max_{l'} { || fhat_{l /\ l'} - fhat_{l'} ||_p - (1+tau) M(l, l') }_+
//!
//! and the selected index minimizes B(l) + (1+tau) M(l). Ties go to the
//! first index in enumeration order (the smoothest candidate).

use crate::boundary::{ProductKernelSpec, SampleSet};
use crate::error::Result;
use crate::family::{family_levels, level_in_family, member_spec, FamilyConfig, FamilyIndex};
use crate::lp::{estimate_on_cube, majorant, CubeGrid, QuadratureConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Parameters of one selection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    /// Norm exponent used by the rule.
    pub p: f64,
    /// Risk exponent; recorded in the trace, never used by selection.
    pub q: f64,
    /// Penalty multiplier tau > 0.
    pub tau: f64,
    pub family: FamilyConfig,
    pub quad: QuadratureConfig,
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if !(self.p >= 1.0) {
            return Err(crate::error::Error::InvalidConfig(format!(
                "p must be at least 1, got {}",
                self.p
            )));
        }
        if !(self.q >= 1.0) {
            return Err(crate::error::Error::InvalidConfig(format!(
                "q must be at least 1, got {}",
                self.q
            )));
        }
        if !(self.tau > 0.0) {
            return Err(crate::error::Error::InvalidConfig(format!(
                "tau must be positive, got {}",
                self.tau
            )));
        }
        Ok(())
    }
}

/// Per-candidate quantities recorded by a selection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub index: FamilyIndex,
    pub majorant: f64,
    pub bias_proxy: f64,
    pub objective: f64,
}

/// Full account of a selection run.
///
/// `pairwise_norms[i][j]` holds || fhat_{l_i /\ l_j} - fhat_{l_j} ||_p for
/// the i-th and j-th enumerated indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub records: Vec<TraceRecord>,
    pub pairwise_norms: Vec<Vec<f64>>,
    pub chosen: FamilyIndex,
}

/// Output of [`select`]: the trace plus the cached member estimates on the
/// shared grid (indexed like `indices`).
#[derive(Debug, Clone)]
pub struct SelectionOutcome {
    pub trace: SelectionTrace,
    pub chosen_spec: ProductKernelSpec,
    pub chosen_pos: usize,
    pub indices: Vec<FamilyIndex>,
    pub member_estimates: Vec<Vec<f64>>,
}

impl SelectionOutcome {
    /// Grid values of the selected estimator.
    pub fn selected_estimate(&self) -> &[f64] {
        &self.member_estimates[self.chosen_pos]
    }
}

/// Run the selection rule on a sample.
pub fn select(sample: &SampleSet, cfg: &SelectionConfig) -> Result<SelectionOutcome> {
    cfg.validate()?;
    let cube = CubeGrid::new(cfg.family.dim, &cfg.quad);
    select_on(sample, cfg, &cube)
}

/// Selection against a caller-supplied grid (shared across replicates in
/// simulation studies).
pub fn select_on(
    sample: &SampleSet,
    cfg: &SelectionConfig,
    cube: &CubeGrid,
) -> Result<SelectionOutcome> {
    cfg.validate()?;
    if sample.len() != cfg.family.n {
        return Err(crate::error::Error::InvalidConfig(format!(
            "the family is enumerated for n = {} but the sample has {} points",
            cfg.family.n,
            sample.len()
        )));
    }
    let indices = family_levels(&cfg.family)?;
    let specs: Vec<ProductKernelSpec> = indices
        .iter()
        .map(|idx| member_spec(&cfg.family, idx))
        .collect::<Result<_>>()?;

    // Candidate estimates and majorants, parallel across the family.
    let estimates: Vec<Vec<f64>> = specs
        .par_iter()
        .map(|spec| estimate_on_cube(spec, sample, cube))
        .collect::<Result<_>>()?;
    let majorants: Vec<f64> = specs
        .par_iter()
        .map(|spec| majorant(spec, sample, cfg.p, cube))
        .collect::<Result<_>>()?;

    // Position of every needed meet; both meets of family members and the
    // members themselves are guaranteed enumerated.
    let pos_of = |idx: &FamilyIndex| -> usize {
        debug_assert!(level_in_family(&cfg.family, idx));
        indices
            .iter()
            .position(|j| j == idx)
            .expect("meet of two family members is itself enumerated")
    };

    let k = indices.len();
    let mut pairwise = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            let meet = indices[i].meet(&indices[j]);
            let mi = pos_of(&meet);
            if mi == j {
                // fhat_{l /\ l'} = fhat_{l'}: the norm is exactly zero.
                pairwise[i][j] = 0.0;
                continue;
            }
            let diff: Vec<f64> = estimates[mi]
                .iter()
                .zip(&estimates[j])
                .map(|(a, b)| a - b)
                .collect();
            pairwise[i][j] = cube.lp_norm(&diff, cfg.p)?;
        }
    }

    let penalty = 1.0 + cfg.tau;
    let mut records = Vec::with_capacity(k);
    for i in 0..k {
        let mut proxy = 0.0f64;
        for j in 0..k {
            let meet = indices[i].meet(&indices[j]);
            let pair_m = majorants[j] + majorants[pos_of(&meet)];
            proxy = proxy.max(pairwise[i][j] - penalty * pair_m);
        }
        let b = proxy.max(0.0);
        records.push(TraceRecord {
            index: indices[i].clone(),
            majorant: majorants[i],
            bias_proxy: b,
            objective: b + penalty * majorants[i],
        });
    }

    let chosen_pos = records
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            a.objective
                .partial_cmp(&b.objective)
                .expect("objectives are finite")
        })
        .map(|(i, _)| i)
        .expect("family is nonempty");

    let trace = SelectionTrace {
        records,
        pairwise_norms: pairwise,
        chosen: indices[chosen_pos].clone(),
    };
    Ok(SelectionOutcome {
        trace,
        chosen_spec: specs[chosen_pos].clone(),
        chosen_pos,
        indices,
        member_estimates: estimates,
    })
}

/// The empirical bias proxy of one index, recomputed from scratch. Slower
/// than the cached path inside [`select_on`]; exposed for cross-checking.
pub fn bias_proxy(
    idx: &FamilyIndex,
    sample: &SampleSet,
    cfg: &SelectionConfig,
    cube: &CubeGrid,
) -> Result<f64> {
    cfg.validate()?;
    let indices = family_levels(&cfg.family)?;
    let penalty = 1.0 + cfg.tau;
    let mut best = 0.0f64;
    for other in &indices {
        let meet = idx.meet(other);
        let est_meet = estimate_on_cube(&member_spec(&cfg.family, &meet)?, sample, cube)?;
        let est_other = estimate_on_cube(&member_spec(&cfg.family, other)?, sample, cube)?;
        let diff: Vec<f64> = est_meet
            .iter()
            .zip(&est_other)
            .map(|(a, b)| a - b)
            .collect();
        let norm = cube.lp_norm(&diff, cfg.p)?;
        let pair_m = crate::lp::pair_majorant(&cfg.family, idx, other, sample, cfg.p, cube)?;
        best = best.max(norm - penalty * pair_m);
    }
    Ok(best.max(0.0))
}
