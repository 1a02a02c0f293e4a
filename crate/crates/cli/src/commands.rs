use crate::output::{write_csv, write_json, SweepRecord};
use crate::problem::{OptionOverrides, ProblemFile};
use anyhow::{bail, Result};
use nalgebra::DVector;
use netgame::{
    balanced_maxcut_exact, balanced_maxcut_heuristic, equilibrium, orient_bipartite,
    solve_joint_from, solve_single, spectrum, theil_index_or_limit, welfare_ratio_limit,
    CutMethod, JointProblem, JointSolution, Network,
};
use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Whether every solve in the command reported convergence.
pub type Converged = bool;

fn rows(g: &Network) -> Vec<Vec<f64>> {
    g.matrix().row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn theil(p: &JointProblem, a: &DVector<f64>, g: &Network) -> Result<f64> {
    let payoffs = equilibrium(p.cfg(), a, g)?.payoffs;
    Ok(theil_index_or_limit(&payoffs, g, p.cfg().phi())?.theil)
}

fn record(p: &JointProblem, joint: &JointSolution) -> Result<SweepRecord> {
    let ghat = p.cfg().ghat();
    let single = solve_single(p.cfg(), ghat, p.budget())?;
    Ok(SweepRecord {
        budget: p.budget(),
        value_joint: joint.value,
        value_single: single.value,
        theil_joint: theil(p, &joint.a_star, &joint.g_star)?,
        theil_single: theil(p, &single.a_star, ghat)?,
        budget_on_g: joint.budget_on_g,
        g_star_entries: joint.g_star.upper(),
        a_star: joint.a_star.iter().copied().collect(),
        converged: joint.converged,
    })
}

#[derive(Serialize)]
struct KktOut {
    stationarity_a: f64,
    max_violation: f64,
    link_residuals: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct SolveOut {
    #[serde(rename = "C")]
    budget: f64,
    value: f64,
    mu_star: f64,
    budget_on_a: f64,
    budget_on_g: f64,
    a_star: Vec<f64>,
    g_star: Vec<Vec<f64>>,
    principal_vector: Vec<f64>,
    theil: f64,
    converged: bool,
    iterations: usize,
    best_restart: usize,
    restart_values: Vec<f64>,
    multiplicity_warning: bool,
    kkt: KktOut,
}

pub fn solve(
    file: &ProblemFile,
    cli: &OptionOverrides,
    format: Format,
    out: &mut impl Write,
) -> Result<Converged> {
    let p = file.to_problem(cli)?;
    let s = solve_joint_from(&p, None)?;
    eprintln!(
        "value {:.6}, budget on g {:.6} of {}, {} after {} iterations, KKT violation {:.2e}",
        s.value,
        s.budget_on_g,
        p.budget(),
        if s.converged { "converged" } else { "NOT converged" },
        s.iterations,
        s.kkt.max_violation,
    );
    match format {
        Format::Csv => write_csv(out, p.cfg().n(), &[record(&p, &s)?])?,
        Format::Json => {
            let u = spectrum(s.g_star.matrix())?.principal_vector(p.cfg().phi());
            let body = SolveOut {
                budget: p.budget(),
                value: s.value,
                mu_star: s.mu_star,
                budget_on_a: s.budget_on_a,
                budget_on_g: s.budget_on_g,
                a_star: s.a_star.iter().copied().collect(),
                g_star: rows(&s.g_star),
                principal_vector: u.iter().copied().collect(),
                theil: theil(&p, &s.a_star, &s.g_star)?,
                converged: s.converged,
                iterations: s.iterations,
                best_restart: s.best_restart,
                restart_values: s.restart_values.clone(),
                multiplicity_warning: s.multiplicity_warning,
                kkt: KktOut {
                    stationarity_a: s.kkt.stationarity_a,
                    max_violation: s.kkt.max_violation,
                    link_residuals: s
                        .kkt
                        .link_residuals
                        .row_iter()
                        .map(|r| r.iter().copied().collect())
                        .collect(),
                },
            };
            write_json(out, &body)?;
        }
    }
    Ok(s.converged)
}

/// Parsed `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl std::str::FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(format!("expected start:stop:step, got `{s}`"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        };
        let r = Range {
            start: num(a)?,
            stop: num(b)?,
            step: num(c)?,
        };
        if r.step <= 0.0 {
            return Err(format!("step must be positive, got {}", r.step));
        }
        Ok(r)
    }
}

impl Range {
    /// `start + k·step` up to `stop`, with slack for rounding in the last point.
    pub fn points(&self) -> Vec<f64> {
        let slack = 1e-9 * self.step;
        (0..)
            .map(|k| self.start + k as f64 * self.step)
            .take_while(|&c| c <= self.stop + slack)
            .collect()
    }
}

pub fn sweep(
    file: &ProblemFile,
    cli: &OptionOverrides,
    range: Range,
    format: Format,
    out: &mut impl Write,
) -> Result<Converged> {
    let base = file.to_problem(cli)?;
    let mut records = Vec::new();
    let mut warm: Option<Network> = None;
    for c in range.points() {
        let p = base.with_budget(c)?;
        let s = solve_joint_from(&p, warm.as_ref())?;
        records.push(record(&p, &s)?);
        warm = Some(s.g_star);
    }
    let converged = records.iter().all(|r| r.converged);
    if !converged {
        eprintln!("warning: some sweep points did not converge");
    }
    match format {
        Format::Csv => write_csv(out, base.cfg().n(), &records)?,
        Format::Json => write_json(out, &records)?,
    }
    Ok(converged)
}

#[derive(Serialize)]
struct CompareOut {
    #[serde(rename = "C")]
    budget: f64,
    value_joint: f64,
    value_single: f64,
    ratio: f64,
    /// `null` when the large-budget limit is undefined for this instance.
    ratio_limit: Option<f64>,
    theil_joint: f64,
    theil_single: f64,
    g_star: Vec<Vec<f64>>,
    converged: bool,
}

pub fn compare(
    file: &ProblemFile,
    cli: &OptionOverrides,
    format: Format,
    out: &mut impl Write,
) -> Result<Converged> {
    let p = file.to_problem(cli)?;
    let s = solve_joint_from(&p, None)?;
    let r = record(&p, &s)?;
    let ratio_limit = match welfare_ratio_limit(p.cfg().ghat(), p.cfg().phi(), file.wbar) {
        Ok(v) => Some(v),
        Err(e) => {
            eprintln!("note: no ratio limit ({e})");
            None
        }
    };
    match format {
        Format::Csv => write_csv(out, p.cfg().n(), &[r])?,
        Format::Json => write_json(
            out,
            &CompareOut {
                budget: p.budget(),
                value_joint: r.value_joint,
                value_single: r.value_single,
                ratio: r.value_joint / r.value_single,
                ratio_limit,
                theil_joint: r.theil_joint,
                theil_single: r.theil_single,
                g_star: rows(&s.g_star),
                converged: s.converged,
            },
        )?,
    }
    Ok(s.converged)
}

#[derive(Serialize)]
struct OrientOut {
    /// 1-based labels of the smaller side.
    side: Vec<usize>,
    weight: f64,
    method: &'static str,
    certified: bool,
    network: Vec<Vec<f64>>,
}

pub fn orient(
    file: &ProblemFile,
    heuristic: bool,
    seed: u64,
    format: Format,
    out: &mut impl Write,
) -> Result<()> {
    if format == Format::Csv {
        bail!("orient writes JSON only");
    }
    let p = file.to_problem(&OptionOverrides::default())?;
    if file.phi >= 0.0 {
        eprintln!(
            "warning: phi = {} is not negative; the orientation only describes large-budget optima under substitutes",
            file.phi
        );
    }
    let g = p.cfg().ghat();
    let cut = if heuristic {
        balanced_maxcut_heuristic(g, seed)
    } else {
        balanced_maxcut_exact(g)?
    };
    let oriented = orient_bipartite(&cut.side, g.n(), g.wbar())?;
    write_json(
        out,
        &OrientOut {
            side: cut.side.iter().map(|v| v + 1).collect(),
            weight: cut.weight,
            method: match cut.method {
                CutMethod::Exact => "exact",
                CutMethod::Heuristic => "heuristic",
            },
            certified: cut.certified,
            network: rows(&oriented),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_points() {
        let r: Range = "0:1:0.25".parse().unwrap();
        assert_eq!(r.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let r: Range = "0:8:0.1".parse().unwrap();
        assert_eq!(r.points().len(), 81);
        let r: Range = "2:1:0.5".parse().unwrap();
        assert!(r.points().is_empty());
        assert!("0:1:0".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
        assert!("0:x:1".parse::<Range>().is_err());
    }
}
