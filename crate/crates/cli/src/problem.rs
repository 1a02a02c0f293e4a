//! Problem files: the JSON description of one joint-intervention instance.

use anyhow::{bail, Context, Result};
use nalgebra::DVector;
use netgame::{GameConfig, JointProblem, Network, SolverOptions};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub phi: f64,
    pub kappa: f64,
    pub wbar: f64,
    #[serde(rename = "C")]
    pub budget: f64,
    pub a_hat: Vec<f64>,
    pub g_hat: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionOverrides>,
}

/// Per-file overrides of the solver defaults; absent fields keep the default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grad_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_init: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_grid: Option<usize>,
}

impl OptionOverrides {
    fn apply(&self, base: &mut SolverOptions) {
        if let Some(v) = self.restarts {
            base.restarts = v;
        }
        if let Some(v) = self.max_iters {
            base.max_iters = v;
        }
        if let Some(v) = self.grad_tol {
            base.grad_tol = v;
        }
        if let Some(v) = self.step_init {
            base.step_init = v;
        }
        if let Some(v) = self.seed {
            base.seed = v;
        }
        if let Some(v) = self.oracle_grid {
            base.oracle_grid = v;
        }
    }
}

/// Parses a problem file; errors carry the offending field path and the
/// line and column reported by the JSON reader.
pub fn parse(text: &str) -> Result<ProblemFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            anyhow::anyhow!("{inner}")
        } else {
            anyhow::anyhow!("field `{path}`: {inner}")
        }
    })
}

pub fn load(path: &Path) -> Result<ProblemFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

impl ProblemFile {
    /// Builds the validated solver instance, merging `cli` over file options.
    pub fn to_problem(&self, cli: &OptionOverrides) -> Result<JointProblem> {
        let n = self.n;
        if self.a_hat.len() != n {
            bail!("field `a_hat`: expected {n} entries, found {}", self.a_hat.len());
        }
        if self.g_hat.len() != n {
            bail!("field `g_hat`: expected {n} rows, found {}", self.g_hat.len());
        }
        for (i, row) in self.g_hat.iter().enumerate() {
            if row.len() != n {
                bail!("field `g_hat[{i}]`: expected {n} entries, found {}", row.len());
            }
        }
        let ghat = Network::from_rows(&self.g_hat, self.wbar).context("field `g_hat`")?;
        let cfg = GameConfig::new(self.phi, DVector::from_vec(self.a_hat.clone()), ghat)?;
        let mut options = SolverOptions::default();
        if let Some(o) = &self.options {
            o.apply(&mut options);
        }
        cli.apply(&mut options);
        Ok(JointProblem::new(cfg, self.kappa, self.budget, options)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{"n": 2, "phi": 0.1, "kappa": 0.5, "wbar": 1, "C": 1,
        "a_hat": [0.1, 0.30000000000000004], "g_hat": [[0, 0.5], [0.5, 0]]}"#;

    #[test]
    fn round_trip_is_exact() {
        let p = parse(SMALL).unwrap();
        let again = parse(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(p, again);
        assert_eq!(again.a_hat[1].to_bits(), (0.1f64 + 0.2).to_bits());
    }

    #[test]
    fn errors_name_the_field() {
        let bad = SMALL.replace("\"kappa\": 0.5", "\"kappa\": \"x\"");
        let msg = parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("kappa") && msg.contains("line 1"), "{msg}");
        let bad = SMALL.replace("[0.5, 0]]", "[0.5, null]]");
        let msg = parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("g_hat[1][1]"), "{msg}");
    }

    #[test]
    fn overrides_layer_in_order() {
        let mut p = parse(SMALL).unwrap();
        p.options = Some(OptionOverrides {
            restarts: Some(3),
            seed: Some(9),
            ..Default::default()
        });
        let cli = OptionOverrides {
            seed: Some(4),
            ..Default::default()
        };
        let jp = p.to_problem(&cli).unwrap();
        assert_eq!((jp.options.restarts, jp.options.seed), (3, 4));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let mut p = parse(SMALL).unwrap();
        p.a_hat.pop();
        let msg = p.to_problem(&OptionOverrides::default()).unwrap_err().to_string();
        assert!(msg.contains("a_hat"));
    }
}
