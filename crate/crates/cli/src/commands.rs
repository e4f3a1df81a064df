//! Implementations behind the subcommands.

use crate::args::{BiasArgs, Command, DensityArg, ModeArg, OracleArgs, RiskArgs, SimCommand};
use crate::error::{CliError, CliResult};
use crate::io::{emit, read_csv, render_csv};
use crate::model::{ModelConfig, ModelFile, SCHEMA_VERSION};
use boundkde::sim::{
    boundary_bias_table, oracle_study, risk_curve, BumpDensity, BumpFamilyParams, Density,
    UniformDensity,
};
use boundkde::{
    estimate_on_cube, family_levels, member_spec, order_for_level, select, select_on, CubeGrid,
    FamilyConfig, FamilyIndex, Mode, OrderedKernel, ProductKernelSpec, QuadratureConfig,
    SampleSet, SelectionConfig, TensorGrid,
};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

pub fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Kernels {
            order,
            samples,
            out,
        } => run_kernels(order, samples, out.as_deref()),
        Command::Family {
            n,
            d,
            c,
            mode,
            orders,
            out,
        } => run_family(n, d, c, mode, orders, out.as_deref()),
        Command::Fit {
            input,
            mode,
            p,
            q,
            tau,
            c,
            orders,
            quad_panels,
            quad_nodes,
            out,
        } => run_fit(
            &input,
            mode,
            p,
            q,
            tau,
            c,
            orders,
            quad_panels,
            quad_nodes,
            &out,
        ),
        Command::Eval {
            model,
            grid_res,
            clip_negative,
            out,
        } => run_eval(&model, grid_res, clip_negative, &out),
        Command::Simulate { study } => match study {
            SimCommand::Bias(args) => run_simulate_bias(args),
            SimCommand::Risk(args) => run_simulate_risk(args),
            SimCommand::Oracle(args) => run_simulate_oracle(args),
        },
    }
}

fn quad_config(dim: usize, panels: Option<usize>, nodes: Option<usize>) -> QuadratureConfig {
    let def = QuadratureConfig::default_for_dim(dim);
    QuadratureConfig {
        panels: panels.unwrap_or(def.panels),
        nodes: nodes.unwrap_or(def.nodes),
    }
}

fn load_config_file<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

pub fn run_kernels(order: usize, samples: usize, out: Option<&Path>) -> CliResult<()> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let kernel = OrderedKernel::of_order(order)?;
    let rows: Vec<Vec<f64>> = (0..=samples)
        .map(|i| {
            let u = i as f64 / samples as f64;
            vec![u, kernel.eval(u)]
        })
        .collect();
    emit(out, &render_csv("u,w", &rows))
}

pub fn run_family(
    n: usize,
    d: usize,
    c: f64,
    mode: ModeArg,
    orders: Option<Vec<usize>>,
    out: Option<&Path>,
) -> CliResult<()> {
    let cfg = FamilyConfig {
        n,
        dim: d,
        c,
        mode: mode.into(),
        base_orders: orders,
    };
    let levels = family_levels(&cfg)?;
    let (header, rows) = match cfg.mode {
        Mode::Iso => {
            let rows: Vec<Vec<f64>> = levels
                .iter()
                .map(|idx| match idx {
                    FamilyIndex::Iso(l) => vec![
                        *l as f64,
                        order_for_level(n, *l) as f64,
                        (-(*l as f64)).exp(),
                    ],
                    _ => unreachable!(),
                })
                .collect();
            ("ell,m,h".to_string(), rows)
        }
        Mode::Ani => {
            let ord = cfg.effective_orders();
            let mut header = String::new();
            for i in 1..=d {
                let _ = write!(header, "ell_{i},");
            }
            for i in 1..=d {
                let _ = write!(header, "m_{i},");
            }
            for i in 1..=d {
                let _ = write!(header, "h_{i}");
                if i < d {
                    header.push(',');
                }
            }
            let rows: Vec<Vec<f64>> = levels
                .iter()
                .map(|idx| match idx {
                    FamilyIndex::Ani(v) => {
                        let mut row: Vec<f64> = v.iter().map(|&l| l as f64).collect();
                        row.extend(ord.iter().map(|&m| m as f64));
                        row.extend(v.iter().map(|&l| (-(l as f64)).exp()));
                        row
                    }
                    _ => unreachable!(),
                })
                .collect();
            (header, rows)
        }
    };
    emit(out, &render_csv(&header, &rows))
}

#[allow(clippy::too_many_arguments)]
pub fn run_fit(
    input: &Path,
    mode: ModeArg,
    p: f64,
    q: f64,
    tau: f64,
    c: f64,
    orders: Option<Vec<usize>>,
    quad_panels: Option<usize>,
    quad_nodes: Option<usize>,
    out: &Path,
) -> CliResult<()> {
    let sample = read_csv(input)?;
    let dim = sample.dim();
    let quad = quad_config(dim, quad_panels, quad_nodes);
    let cfg = SelectionConfig {
        p,
        q,
        tau,
        family: FamilyConfig {
            n: sample.len(),
            dim,
            c,
            mode: mode.into(),
            base_orders: orders.clone(),
        },
        quad,
    };
    let outcome = select(&sample, &cfg)?;
    let model = ModelFile {
        schema_version: SCHEMA_VERSION,
        config: ModelConfig {
            mode: mode.into(),
            p,
            q,
            tau,
            c,
            orders,
            quad_panels: quad.panels,
            quad_nodes: quad.nodes,
        },
        n: sample.len(),
        dim,
        chosen: outcome.trace.chosen.clone(),
        kernels: outcome.chosen_spec.kernels().to_vec(),
        bandwidth: outcome.chosen_spec.bandwidth().to_vec(),
        trace: outcome.trace,
        sample: sample.rows(),
    };
    model.save(out)
}

pub fn run_eval(model_path: &Path, grid_res: usize, clip: bool, out: &Path) -> CliResult<()> {
    if grid_res < 2 {
        return Err(CliError::Usage("--grid-res must be at least 2".into()));
    }
    let model = ModelFile::load(model_path)?;
    let spec = ProductKernelSpec::new(model.kernels.clone(), model.bandwidth.clone())?;
    let sample = SampleSet::from_rows(&model.sample)?;
    let grid = TensorGrid::equispaced(model.dim, grid_res);
    let mut values = spec.estimate_grid(&sample, &grid)?;
    if clip {
        clip_and_renormalize(&mut values, &grid);
    }
    let mut header = String::new();
    for i in 1..=model.dim {
        let _ = write!(header, "t_{i},");
    }
    header.push_str("fhat");
    let rows: Vec<Vec<f64>> = (0..grid.len())
        .map(|flat| {
            let mut row = grid.point(flat);
            row.push(values[flat]);
            row
        })
        .collect();
    emit(Some(out), &render_csv(&header, &rows))
}

/// Presentation-only post-processing: truncate at zero and rescale so the
/// trapezoidal mass over the grid is one.
fn clip_and_renormalize(values: &mut [f64], grid: &TensorGrid) {
    let d = grid.dim();
    let mut mass = 0.0;
    for (flat, v) in values.iter_mut().enumerate() {
        if *v < 0.0 {
            *v = 0.0;
        }
        let multi = grid.multi_index(flat);
        let mut w = 1.0;
        for (i, &k) in multi.iter().enumerate().take(d) {
            let len = grid.axis(i).len();
            let step = 1.0 / (len - 1) as f64;
            let edge = k == 0 || k == len - 1;
            w *= if edge { 0.5 * step } else { step };
        }
        mass += w * *v;
    }
    if mass > 0.0 {
        for v in values.iter_mut() {
            *v /= mass;
        }
    }
}

pub fn run_simulate_bias(args: BiasArgs) -> CliResult<()> {
    let args = match &args.config {
        Some(path) => load_config_file::<BiasArgs>(path)?,
        None => args,
    };
    let rows = boundary_bias_table(args.p, &args.h_list, args.grid_res, args.order)?;
    let table: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| vec![r.h, r.naive, r.boundary])
        .collect();
    emit(
        args.out.as_deref(),
        &render_csv("h,bias_naive,bias_boundary", &table),
    )
}

fn build_density(
    density: DensityArg,
    dim: usize,
    rho: f64,
    bump_h: f64,
    bump_w: &str,
) -> CliResult<Box<dyn Density>> {
    match density {
        DensityArg::Uniform => Ok(Box::new(UniformDensity { dim })),
        DensityArg::Bump => {
            if dim != 1 {
                return Err(CliError::Usage(
                    "the bump density is univariate on the command line; use d=1".into(),
                ));
            }
            let params = match bump_w {
                "alt" => BumpFamilyParams::alternating_1d(bump_h, rho)?,
                "ones" => {
                    let base = BumpFamilyParams {
                        dim: 1,
                        half_width: vec![bump_h],
                        amplitude: rho,
                        bits: Vec::new(),
                    };
                    let cells = base.lattice_counts()?[0];
                    BumpFamilyParams {
                        bits: vec![true; cells],
                        ..base
                    }
                }
                pattern => {
                    let bits: Option<Vec<bool>> = pattern
                        .chars()
                        .map(|c| match c {
                            '0' => Some(false),
                            '1' => Some(true),
                            _ => None,
                        })
                        .collect();
                    let bits = bits.ok_or_else(|| {
                        CliError::Usage(format!(
                            "--bump-w must be 'alt', 'ones', or a 0/1 string, got '{pattern}'"
                        ))
                    })?;
                    BumpFamilyParams {
                        dim: 1,
                        half_width: vec![bump_h],
                        amplitude: rho,
                        bits,
                    }
                }
            };
            Ok(Box::new(BumpDensity::new(params)?))
        }
    }
}

pub fn run_simulate_risk(args: RiskArgs) -> CliResult<()> {
    let args = match &args.config {
        Some(path) => load_config_file::<RiskArgs>(path)?,
        None => args,
    };
    let dim = args.d;
    let density = build_density(args.density, dim, args.rho, args.bump_h, &args.bump_w)?;
    let quad = quad_config(dim, args.quad_panels, args.quad_nodes);
    let cube = CubeGrid::new(dim, &quad);
    let mode: Mode = args.mode.into();
    let fixed_index = match &args.fixed_ell {
        None => None,
        Some(levels) => Some(parse_fixed_index(mode, dim, levels)?),
    };
    let family_for = |n: usize| FamilyConfig {
        n,
        dim,
        c: args.c,
        mode,
        base_orders: args.orders.clone(),
    };
    let estimator = |s: &SampleSet, g: &CubeGrid| -> boundkde::Result<Vec<f64>> {
        let family = family_for(s.len());
        match &fixed_index {
            Some(idx) => {
                let spec = member_spec(&family, idx)?;
                estimate_on_cube(&spec, s, g)
            }
            None => {
                let cfg = SelectionConfig {
                    p: args.p,
                    q: args.q,
                    tau: args.tau,
                    family,
                    quad,
                };
                Ok(select_on(s, &cfg, g)?.selected_estimate().to_vec())
            }
        }
    };
    let report = risk_curve(
        &estimator,
        density.as_ref(),
        &args.n_list,
        args.p,
        args.q,
        args.reps,
        args.seed,
        &cube,
    )?;
    let slope = report.slope.unwrap_or(f64::NAN);
    let rows: Vec<Vec<f64>> = report
        .entries
        .iter()
        .map(|e| {
            vec![
                e.n as f64,
                e.replicates as f64,
                e.risk,
                e.std_err,
                slope,
            ]
        })
        .collect();
    emit(
        args.out.as_deref(),
        &render_csv("n,replicates,risk,stderr,slope", &rows),
    )
}

fn parse_fixed_index(mode: Mode, dim: usize, levels: &[usize]) -> CliResult<FamilyIndex> {
    match mode {
        Mode::Iso => {
            if levels.len() != 1 {
                return Err(CliError::Usage(
                    "--fixed-ell takes exactly one level in iso mode".into(),
                ));
            }
            Ok(FamilyIndex::Iso(levels[0]))
        }
        Mode::Ani => {
            if levels.len() != dim {
                return Err(CliError::Usage(format!(
                    "--fixed-ell needs {dim} levels in ani mode, got {}",
                    levels.len()
                )));
            }
            Ok(FamilyIndex::Ani(levels.to_vec()))
        }
    }
}

fn index_label(idx: &FamilyIndex) -> String {
    match idx {
        FamilyIndex::Iso(l) => l.to_string(),
        FamilyIndex::Ani(v) => v
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join("|"),
    }
}

pub fn run_simulate_oracle(args: OracleArgs) -> CliResult<()> {
    let args = match &args.config {
        Some(path) => load_config_file::<OracleArgs>(path)?,
        None => args,
    };
    let dim = args.d;
    let density = build_density(args.density, dim, args.rho, args.bump_h, &args.bump_w)?;
    let quad = quad_config(dim, args.quad_panels, args.quad_nodes);
    let cfg = SelectionConfig {
        p: args.p,
        q: args.q,
        tau: args.tau,
        family: FamilyConfig {
            n: args.n,
            dim,
            c: args.c,
            mode: args.mode.into(),
            base_orders: args.orders.clone(),
        },
        quad,
    };
    let rows = oracle_study(&cfg, density.as_ref(), args.reps, args.seed)?;
    let mut text = String::from("replicate,selected,best,selected_err,best_err,ratio\n");
    for row in &rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{}",
            row.replicate,
            index_label(&row.selected),
            index_label(&row.best),
            row.selected_err,
            row.best_err,
            row.ratio
        );
    }
    emit(args.out.as_deref(), &text)
}
