//! Command-line surface.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "boundkde",
    version,
    about = "Boundary-corrected kernel density estimation on [0,1]^d with data-driven selection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Iso,
    Ani,
}

impl From<ModeArg> for boundkde::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Iso => boundkde::Mode::Iso,
            ModeArg::Ani => boundkde::Mode::Ani,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityArg {
    Uniform,
    Bump,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the kernel w_m on an equispaced grid (CSV: u,w)
    Kernels {
        /// Kernel order m
        #[arg(long)]
        order: usize,
        /// Number of grid steps; the table has samples+1 rows
        #[arg(long)]
        samples: usize,
        /// Output file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the candidate family table (CSV: levels, orders, bandwidths)
    Family {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_enum, default_value = "iso")]
        mode: ModeArg,
        /// Kernel orders for ani mode, comma separated (default 2 per axis)
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit: run the selection rule on a CSV sample and persist the model
    Fit {
        /// Input CSV of observations in [0,1]^d
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "iso")]
        mode: ModeArg,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
        /// Quadrature panels per dimension (default depends on d)
        #[arg(long)]
        quad_panels: Option<usize>,
        /// Quadrature nodes per panel (default depends on d)
        #[arg(long)]
        quad_nodes: Option<usize>,
        /// Output model path
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a fitted model on an equispaced grid (CSV: t_1..t_d,fhat)
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// Grid points per dimension (including both endpoints)
        #[arg(long)]
        grid_res: usize,
        /// Truncate negative values at 0 and renormalize (presentation only)
        #[arg(long, default_value_t = false)]
        clip_negative: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulation studies
    Simulate {
        #[command(subcommand)]
        study: SimCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum SimCommand {
    /// Exact integrated-bias comparison of the naive and boundary estimators
    Bias(BiasArgs),
    /// Monte Carlo risk across sample sizes
    Risk(RiskArgs),
    /// Per-replicate selected-vs-best-in-family error ratios
    Oracle(OracleArgs),
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BiasArgs {
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [0.02, 0.04, 0.08, 0.16])]
    pub h_list: Vec<f64>,
    /// Panels of the outer bias integral
    #[arg(long, default_value_t = 64)]
    pub grid_res: usize,
    /// Order of the boundary kernel column
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with these fields; overrides the flags above
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Default for BiasArgs {
    fn default() -> Self {
        BiasArgs {
            p: 2.0,
            h_list: vec![0.02, 0.04, 0.08, 0.16],
            grid_res: 64,
            order: 2,
            out: None,
            config: None,
        }
    }
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RiskArgs {
    #[arg(long, value_enum, default_value = "uniform")]
    pub density: DensityArg,
    #[arg(long, value_enum, default_value = "iso")]
    pub mode: ModeArg,
    #[arg(long, value_delimiter = ',', default_values_t = [500usize, 2000, 8000])]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Dimension of the uniform density (bump density is univariate)
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<usize>>,
    /// Skip selection and use the fixed family member at these levels
    /// (one value for iso, d values for ani)
    #[arg(long, value_delimiter = ',')]
    pub fixed_ell: Option<Vec<usize>>,
    /// Bump amplitude rho
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    /// Bump half-width (1/(2h) must be an integer)
    #[arg(long, default_value_t = 0.125)]
    pub bump_h: f64,
    /// Bump activation pattern: "alt", "ones", or a 0/1 string per cell
    #[arg(long, default_value = "alt")]
    pub bump_w: String,
    #[arg(long)]
    pub quad_panels: Option<usize>,
    #[arg(long)]
    pub quad_nodes: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with these fields; overrides the flags above
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Default for RiskArgs {
    fn default() -> Self {
        RiskArgs {
            density: DensityArg::Uniform,
            mode: ModeArg::Iso,
            n_list: vec![500, 2000, 8000],
            reps: 50,
            seed: 0,
            p: 2.0,
            q: 1.0,
            tau: 1.0,
            c: 1.0,
            d: 1,
            orders: None,
            fixed_ell: None,
            rho: 0.5,
            bump_h: 0.125,
            bump_w: "alt".into(),
            quad_panels: None,
            quad_nodes: None,
            out: None,
            config: None,
        }
    }
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value = "bump")]
    pub density: DensityArg,
    #[arg(long, value_enum, default_value = "iso")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.125)]
    pub bump_h: f64,
    #[arg(long, default_value = "alt")]
    pub bump_w: String,
    #[arg(long)]
    pub quad_panels: Option<usize>,
    #[arg(long)]
    pub quad_nodes: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with these fields; overrides the flags above
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Default for OracleArgs {
    fn default() -> Self {
        OracleArgs {
            density: DensityArg::Bump,
            mode: ModeArg::Iso,
            n: 2000,
            reps: 100,
            seed: 0,
            p: 2.0,
            q: 1.0,
            tau: 1.0,
            c: 1.0,
            d: 1,
            orders: None,
            rho: 0.5,
            bump_h: 0.125,
            bump_w: "alt".into(),
            quad_panels: None,
            quad_nodes: None,
            out: None,
            config: None,
        }
    }
}
