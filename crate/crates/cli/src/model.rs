//! The persisted model file.
//!
//! A fit is self-contained: the JSON carries the configuration echo, the
//! selection trace, the chosen kernel/bandwidth pair, and the sample itself
//! (the kernel estimator is data-dependent at evaluation time). Numbers are
//! serialized in shortest round-trip form, so parse(serialize(m)) == m holds
//! field for field.

use crate::error::{CliError, CliResult};
use boundkde::{FamilyIndex, Mode, OrderedKernel, SelectionTrace};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Echo of the fit configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub mode: Mode,
    pub p: f64,
    pub q: f64,
    pub tau: f64,
    pub c: f64,
    pub orders: Option<Vec<usize>>,
    pub quad_panels: usize,
    pub quad_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    pub config: ModelConfig,
    pub n: usize,
    pub dim: usize,
    pub chosen: FamilyIndex,
    pub kernels: Vec<OrderedKernel>,
    pub bandwidth: Vec<f64>,
    pub trace: SelectionTrace,
    /// Embedded observations, row-major.
    pub sample: Vec<Vec<f64>>,
}

impl ModelFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let model: ModelFile = serde_json::from_str(text)
            .map_err(|e| CliError::Data(format!("invalid model file: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_json())
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Data(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.kernels.len() != self.dim || self.bandwidth.len() != self.dim {
            return Err(CliError::Data(
                "kernel/bandwidth vectors do not match the model dimension".into(),
            ));
        }
        if self.sample.len() != self.n {
            return Err(CliError::Data(
                "embedded sample does not match the recorded n".into(),
            ));
        }
        // The monomial coefficients must belong to the declared orders.
        for k in &self.kernels {
            let rebuilt = OrderedKernel::of_order(k.order()).map_err(CliError::from)?;
            let consistent = rebuilt.coeffs().len() == k.coeffs().len()
                && rebuilt
                    .coeffs()
                    .iter()
                    .zip(k.coeffs())
                    .all(|(a, b)| (a - b).abs() <= 1e-9 * a.abs().max(1.0));
            if !consistent {
                return Err(CliError::Data(format!(
                    "kernel coefficients are inconsistent with order {}",
                    k.order()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use boundkde::selection::TraceRecord;

    fn sample_model() -> ModelFile {
        ModelFile {
            schema_version: SCHEMA_VERSION,
            config: ModelConfig {
                mode: Mode::Iso,
                p: 2.0,
                q: 1.0,
                tau: 1.0,
                c: 1.0,
                orders: None,
                quad_panels: 32,
                quad_nodes: 8,
            },
            n: 2,
            dim: 1,
            chosen: FamilyIndex::Iso(3),
            kernels: vec![OrderedKernel::of_order(1).unwrap()],
            bandwidth: vec![(-3f64).exp()],
            trace: SelectionTrace {
                records: vec![TraceRecord {
                    index: FamilyIndex::Iso(3),
                    majorant: 0.5669,
                    bias_proxy: 0.0,
                    objective: 1.1338,
                }],
                pairwise_norms: vec![vec![0.0]],
                chosen: FamilyIndex::Iso(3),
            },
            sample: vec![vec![0.1], vec![0.7]],
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = sample_model();
        let text = m.to_json();
        let back = ModelFile::from_json(&text).unwrap();
        assert_eq!(m, back);
        // and byte-stable under re-serialization
        assert_eq!(text, back.to_json());
    }

    #[test]
    fn schema_version_is_checked() {
        let mut m = sample_model();
        m.schema_version = 2;
        let text = serde_json::to_string(&m).unwrap();
        assert!(ModelFile::from_json(&text).is_err());
    }

    #[test]
    fn kernel_consistency_is_checked() {
        let m = sample_model();
        let text = m.to_json().replace("-6.0", "-5.5");
        assert!(ModelFile::from_json(&text).is_err());
    }
}
