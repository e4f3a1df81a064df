//! Seeded rejection sampling, Monte Carlo risk estimation, and the oracle
//! ratio study.
//!
//! Reproducibility contract: replicate k draws from a ChaCha stream that is
//! a pure function of (master seed, k), so runs are bit-identical for any
//! thread partitioning; reductions over replicates happen in replicate
//! order.

use super::bump::Density;
use crate::boundary::SampleSet;
use crate::error::{Error, Result};
use crate::family::FamilyIndex;
use crate::lp::CubeGrid;
use crate::selection::{select_on, SelectionConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// The RNG of one replicate: stream k of the master-seeded generator.
pub fn replicate_rng(master_seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replicate);
    rng
}

/// Draw n points from `density` by rejection against the uniform proposal.
///
/// Each proposal consumes d coordinates and one acceptance uniform, in that
/// order. Fails with `BadEnvelope` if the density ever exceeds the envelope.
pub fn rejection_sample<D: Density + ?Sized>(
    density: &D,
    n: usize,
    envelope: f64,
    rng: &mut impl Rng,
) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if !(envelope > 0.0) {
        return Err(Error::BadEnvelope {
            value: f64::NAN,
            envelope,
        });
    }
    let d = density.dim();
    let mut data = Vec::with_capacity(n * d);
    let mut accepted = 0;
    let mut proposal = vec![0.0; d];
    while accepted < n {
        for slot in proposal.iter_mut() {
            *slot = rng.gen::<f64>();
        }
        let f = density.eval(&proposal);
        if f > envelope * (1.0 + 1e-12) {
            return Err(Error::BadEnvelope {
                value: f,
                envelope,
            });
        }
        let u: f64 = rng.gen();
        if u * envelope <= f {
            data.extend_from_slice(&proposal);
            accepted += 1;
        }
    }
    SampleSet::from_flat(d, data)
}

/// Monte Carlo risk of one estimator at one sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskEntry {
    pub n: usize,
    pub replicates: usize,
    /// ( mean of ||fhat - f||_p^q )^{1/q}.
    pub risk: f64,
    /// Delta-method standard error of the risk.
    pub std_err: f64,
}

/// Risk across sample sizes with the fitted log-log slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub entries: Vec<RiskEntry>,
    pub slope: Option<f64>,
}

/// Estimate the risk R_n = (E ||fhat - f||_p^q)^{1/q} by `replicates`
/// independent samples of size n.
pub fn monte_carlo_risk<F>(
    estimator: &F,
    density: &dyn Density,
    n: usize,
    p: f64,
    q: f64,
    replicates: usize,
    master_seed: u64,
    cube: &CubeGrid,
) -> Result<RiskEntry>
where
    F: Fn(&SampleSet, &CubeGrid) -> Result<Vec<f64>> + Sync,
{
    if replicates < 2 {
        return Err(Error::InvalidConfig(format!(
            "risk estimation needs at least 2 replicates, got {replicates}"
        )));
    }
    let f_grid = cube.eval(|x| density.eval(x));
    let envelope = density.sup_bound();
    let errors: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let mut rng = replicate_rng(master_seed, k as u64);
            let sample = rejection_sample(density, n, envelope, &mut rng)?;
            let est = estimator(&sample, cube)?;
            let diff: Vec<f64> = est.iter().zip(&f_grid).map(|(a, b)| a - b).collect();
            cube.lp_norm(&diff, p)
        })
        .collect::<Result<_>>()?;

    let r = replicates as f64;
    let moments: Vec<f64> = errors.iter().map(|e| e.powf(q)).collect();
    let mean = moments.iter().sum::<f64>() / r;
    let var = moments.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / (r - 1.0);
    let risk = mean.powf(1.0 / q);
    // d(mu^{1/q})/dmu = (1/q) mu^{1/q - 1}
    let std_err = if mean > 0.0 {
        (1.0 / q) * mean.powf(1.0 / q - 1.0) * (var / r).sqrt()
    } else {
        0.0
    };
    Ok(RiskEntry {
        n,
        replicates,
        risk,
        std_err,
    })
}

/// Risk over several sample sizes plus the fitted slope. Entry i uses an
/// independent master seed derived from (master_seed, i).
pub fn risk_curve<F>(
    estimator: &F,
    density: &dyn Density,
    sample_sizes: &[usize],
    p: f64,
    q: f64,
    replicates: usize,
    master_seed: u64,
    cube: &CubeGrid,
) -> Result<RiskReport>
where
    F: Fn(&SampleSet, &CubeGrid) -> Result<Vec<f64>> + Sync,
{
    let mut entries = Vec::with_capacity(sample_sizes.len());
    for (i, &n) in sample_sizes.iter().enumerate() {
        let seed = master_seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        entries.push(monte_carlo_risk(
            estimator, density, n, p, q, replicates, seed, cube,
        )?);
    }
    let slope = if entries.len() >= 2 {
        let pts: Vec<(f64, f64)> = entries.iter().map(|e| (e.n as f64, e.risk)).collect();
        Some(fit_rate_slope(&pts)?)
    } else {
        None
    };
    Ok(RiskReport { entries, slope })
}

/// Ordinary least squares slope of log y against log x.
pub fn fit_rate_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InsufficientPoints(points.len()));
    }
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "log-log fit needs positive coordinates, got ({x}, {y})"
            )));
        }
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

/// One replicate of the oracle comparison: the selected estimator's error
/// against the best error achievable inside the family on the same data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub replicate: usize,
    pub selected: FamilyIndex,
    pub best: FamilyIndex,
    pub selected_err: f64,
    pub best_err: f64,
    pub ratio: f64,
}

/// Run the selection rule on seeded replicates and report per-replicate
/// selected-vs-best L_p errors.
pub fn oracle_study(
    cfg: &SelectionConfig,
    density: &dyn Density,
    replicates: usize,
    master_seed: u64,
) -> Result<Vec<OracleRow>> {
    cfg.validate()?;
    let cube = CubeGrid::new(cfg.family.dim, &cfg.quad);
    let f_grid = cube.eval(|x| density.eval(x));
    let envelope = density.sup_bound();
    let n = cfg.family.n;
    (0..replicates)
        .into_par_iter()
        .map(|k| -> Result<OracleRow> {
            let mut rng = replicate_rng(master_seed, k as u64);
            let sample = rejection_sample(density, n, envelope, &mut rng)?;
            let outcome = select_on(&sample, cfg, &cube)?;
            let mut best_pos = 0;
            let mut best_err = f64::INFINITY;
            let mut errs = Vec::with_capacity(outcome.indices.len());
            for (pos, est) in outcome.member_estimates.iter().enumerate() {
                let diff: Vec<f64> = est.iter().zip(&f_grid).map(|(a, b)| a - b).collect();
                let e = cube.lp_norm(&diff, cfg.p)?;
                if e < best_err {
                    best_err = e;
                    best_pos = pos;
                }
                errs.push(e);
            }
            let selected_err = errs[outcome.chosen_pos];
            let ratio = if best_err > 0.0 {
                selected_err / best_err
            } else if selected_err == 0.0 {
                1.0
            } else {
                f64::INFINITY
            };
            Ok(OracleRow {
                replicate: k,
                selected: outcome.indices[outcome.chosen_pos].clone(),
                best: outcome.indices[best_pos].clone(),
                selected_err,
                best_err,
                ratio,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::bump::{BumpDensity, BumpFamilyParams, UniformDensity};
    use crate::family::{FamilyConfig, Mode};
    use crate::lp::{estimate_on_cube, QuadratureConfig};

    fn cube1() -> CubeGrid {
        CubeGrid::new(1, &QuadratureConfig { panels: 32, nodes: 8 })
    }

    #[test]
    fn rejection_sampling_is_seed_deterministic() {
        let f = UniformDensity { dim: 2 };
        let mut a_rng = replicate_rng(42, 3);
        let mut b_rng = replicate_rng(42, 3);
        let a = rejection_sample(&f, 50, 1.0, &mut a_rng).unwrap();
        let b = rejection_sample(&f, 50, 1.0, &mut b_rng).unwrap();
        assert_eq!(a, b);
        let mut c_rng = replicate_rng(42, 4);
        let c = rejection_sample(&f, 50, 1.0, &mut c_rng).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn uniform_proposals_are_all_accepted() {
        // envelope 1 on the uniform density accepts every proposal, and a
        // one-sample KS test against U(0,1) should not reject.
        let f = UniformDensity { dim: 1 };
        let mut rng = replicate_rng(7, 0);
        let n = 10_000;
        let sample = rejection_sample(&f, n, 1.0, &mut rng).unwrap();
        let mut xs: Vec<f64> = (0..n).map(|j| sample.coord(j, 0)).collect();
        xs.sort_by(|a, b| a.total_cmp(b));
        let mut d_stat = 0.0f64;
        for (i, &x) in xs.iter().enumerate() {
            let hi = (i + 1) as f64 / n as f64 - x;
            let lo = x - i as f64 / n as f64;
            d_stat = d_stat.max(hi.max(lo));
        }
        // asymptotic Kolmogorov p-value
        let lambda = (n as f64).sqrt() * d_stat;
        let p_value: f64 = 2.0
            * (1..=100)
                .map(|k| {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    sign * (-2.0 * (k as f64 * lambda).powi(2)).exp()
                })
                .sum::<f64>();
        assert!(p_value > 0.01, "KS p-value {p_value}, D = {d_stat}");
    }

    #[test]
    fn bump_acceptance_rate_matches_the_envelope() {
        // Acceptance probability is 1/envelope since f integrates to 1.
        let f = BumpDensity::new(BumpFamilyParams::alternating_1d(0.125, 0.5).unwrap()).unwrap();
        let envelope = f.sup_bound();
        assert!((envelope - 1.3679).abs() < 1e-4);
        let mut rng = replicate_rng(11, 0);
        let trials = 40_000;
        let mut accepted = 0usize;
        for _ in 0..trials {
            let x: f64 = rng.gen();
            let fv = f.eval(&[x]);
            let u: f64 = rng.gen();
            if u * envelope <= fv {
                accepted += 1;
            }
        }
        let rate = accepted as f64 / trials as f64;
        let expect = 1.0 / envelope;
        let se = (expect * (1.0 - expect) / trials as f64).sqrt();
        assert!(
            (rate - expect).abs() < 3.0 * se,
            "rate {rate} vs {expect} (se {se})"
        );
    }

    #[test]
    fn bad_envelope_is_detected() {
        let f = BumpDensity::new(BumpFamilyParams::alternating_1d(0.125, 0.5).unwrap()).unwrap();
        let mut rng = replicate_rng(1, 0);
        let err = rejection_sample(&f, 100, 1.01, &mut rng);
        assert!(matches!(err, Err(Error::BadEnvelope { .. })));
    }

    #[test]
    fn perfect_estimator_has_zero_risk() {
        let f = UniformDensity { dim: 1 };
        let cube = cube1();
        let perfect =
            |_s: &SampleSet, g: &CubeGrid| -> Result<Vec<f64>> { Ok(vec![1.0; g.len()]) };
        let entry =
            monte_carlo_risk(&perfect, &f, 100, 2.0, 1.0, 4, 5, &cube).unwrap();
        assert_eq!(entry.risk, 0.0);
        assert_eq!(entry.std_err, 0.0);
    }

    #[test]
    fn risk_decreases_with_n_for_the_boundary_estimator() {
        // Uniform density, fixed spec: zero bias, stochastic term only.
        let f = UniformDensity { dim: 1 };
        let cube = cube1();
        let cfg = FamilyConfig {
            n: 2000,
            dim: 1,
            c: 1.0,
            mode: Mode::Iso,
            base_orders: None,
        };
        let spec = crate::family::member_spec(&cfg, &FamilyIndex::Iso(3)).unwrap();
        let est = move |s: &SampleSet, g: &CubeGrid| estimate_on_cube(&spec, s, g);
        let report =
            risk_curve(&est, &f, &[500, 2000, 8000], 2.0, 1.0, 50, 99, &cube).unwrap();
        assert!(report.entries[0].risk > report.entries[1].risk);
        assert!(report.entries[1].risk > report.entries[2].risk);
        let slope = report.slope.unwrap();
        assert!((-0.75..=-0.25).contains(&slope), "slope {slope}");
    }

    #[test]
    fn q_powers_respect_the_moment_inequality() {
        let f = UniformDensity { dim: 1 };
        let cube = cube1();
        let cfg = FamilyConfig {
            n: 500,
            dim: 1,
            c: 1.0,
            mode: Mode::Iso,
            base_orders: None,
        };
        let spec = crate::family::member_spec(&cfg, &FamilyIndex::Iso(3)).unwrap();
        let est = move |s: &SampleSet, g: &CubeGrid| estimate_on_cube(&spec, s, g);
        let r1 = monte_carlo_risk(&est, &f, 500, 2.0, 1.0, 40, 123, &cube).unwrap();
        let r2 = monte_carlo_risk(&est, &f, 500, 2.0, 2.0, 40, 123, &cube).unwrap();
        assert!(r2.risk >= r1.risk, "{} < {}", r2.risk, r1.risk);
    }

    #[test]
    fn monte_carlo_risk_is_replay_stable() {
        let f = UniformDensity { dim: 1 };
        let cube = cube1();
        let est = |s: &SampleSet, g: &CubeGrid| -> Result<Vec<f64>> {
            let spec = crate::boundary::ProductKernelSpec::new(
                vec![crate::kernels::OrderedKernel::of_order(1).unwrap()],
                vec![0.1],
            )
            .unwrap();
            estimate_on_cube(&spec, s, g)
        };
        let a = monte_carlo_risk(&est, &f, 200, 2.0, 1.0, 8, 77, &cube).unwrap();
        let b = monte_carlo_risk(&est, &f, 200, 2.0, 1.0, 8, 77, &cube).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn slope_fit_reference_values() {
        let s = fit_rate_slope(&[(1000.0, 0.1), (4000.0, 0.05)]).unwrap();
        assert!((s + 0.5).abs() < 1e-12);
        let pts: Vec<(f64, f64)> = [1000.0f64, 5000.0, 20_000.0]
            .iter()
            .map(|&n| (n, n.powf(-0.4)))
            .collect();
        let s = fit_rate_slope(&pts).unwrap();
        assert!((s + 0.4).abs() < 1e-12);
        let s = fit_rate_slope(&[(10.0, 0.3), (100.0, 0.3), (1000.0, 0.3)]).unwrap();
        assert!(s.abs() < 1e-12);
        assert!(matches!(
            fit_rate_slope(&[(10.0, 0.5)]),
            Err(Error::InsufficientPoints(1))
        ));
    }

    #[test]
    fn oracle_rows_are_consistent() {
        let cfg = SelectionConfig {
            p: 2.0,
            q: 1.0,
            tau: 1.0,
            family: FamilyConfig {
                n: 500,
                dim: 1,
                c: 1.0,
                mode: Mode::Iso,
                base_orders: None,
            },
            quad: QuadratureConfig { panels: 32, nodes: 8 },
        };
        let f = UniformDensity { dim: 1 };
        let rows = oracle_study(&cfg, &f, 6, 31).unwrap();
        assert_eq!(rows.len(), 6);
        for (k, row) in rows.iter().enumerate() {
            assert_eq!(row.replicate, k);
            assert!(row.best_err <= row.selected_err + 1e-15);
            assert!(row.ratio >= 1.0 - 1e-12);
        }
    }
}
