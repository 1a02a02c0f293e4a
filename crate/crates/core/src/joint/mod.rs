//! The joint problem: choose the network and the standalone utilities
//! together under `κ‖g − ĝ‖² + ‖a − â‖² ≤ C`.
//!
//! The problem is solved in two stages. For a candidate network the optimal
//! utilities come from [`crate::single`] at the remaining budget, leaving a
//! nonconvex problem over link weights alone. That outer problem is solved
//! by projected gradient ascent from several starting networks, using the
//! envelope gradient of [`objective_and_gradient`] and exact projection
//! onto the feasible link set.

mod asymptotics;
mod gradient;
mod kkt;
mod oracle;
mod projection;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use asymptotics::{small_budget_asymptotics, SmallBudgetLimits};
pub use gradient::objective_and_gradient;
pub use kkt::{check_sign_structure, KktReport, RatioCheck, SignStructureReport};
use kkt::kkt_report;
pub use oracle::oracle_joint;

use crate::error::{Error, Result};
use crate::game::{welfare, GameConfig};
use crate::network::{link_pairs, Network};
use crate::single::InnerSolution;
use gradient::{evaluate, link_gradient};
use projection::{dist, FeasibleSet};

/// Fraction of the budget kept away from the link ball so the inner problem
/// never runs on an empty budget.
pub const BUDGET_RESERVE: f64 = 1e-9;

const ARMIJO_SIGMA: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MIN_STEP: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub step_init: f64,
    pub seed: u64,
    /// Grid points per link for [`oracle_joint`].
    pub oracle_grid: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            restarts: 16,
            max_iters: 10_000,
            grad_tol: 1e-8,
            step_init: 0.1,
            seed: 0,
            oracle_grid: 21,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if self.restarts == 0 {
            return bad("restarts must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive");
        }
        if !(self.grad_tol > 0.0) {
            return bad("grad_tol must be positive");
        }
        if !(self.step_init > 0.0 && self.step_init.is_finite()) {
            return bad("step_init must be positive");
        }
        if self.oracle_grid < 2 {
            return bad("oracle_grid must be at least 2");
        }
        Ok(())
    }
}

/// A full joint-intervention instance.
#[derive(Debug, Clone)]
pub struct JointProblem {
    cfg: GameConfig,
    kappa: f64,
    budget: f64,
    pub options: SolverOptions,
}

impl JointProblem {
    pub fn new(cfg: GameConfig, kappa: f64, budget: f64, options: SolverOptions) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kappa must be positive and finite, got {kappa}"
            )));
        }
        if !(budget >= 0.0 && budget.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "budget must be finite and nonnegative, got {budget}"
            )));
        }
        options.validate()?;
        Ok(JointProblem {
            cfg,
            kappa,
            budget,
            options,
        })
    }

    pub fn cfg(&self) -> &GameConfig {
        &self.cfg
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    /// The same instance at another budget.
    pub fn with_budget(&self, budget: f64) -> Result<Self> {
        JointProblem::new(self.cfg.clone(), self.kappa, budget, self.options.clone())
    }

    fn feasible_set(&self) -> FeasibleSet {
        let usable = self.budget * (1.0 - BUDGET_RESERVE);
        FeasibleSet {
            center: self.cfg.ghat().upper(),
            radius: (usable / (2.0 * self.kappa)).sqrt(),
            wbar: self.cfg.ghat().wbar(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct JointSolution {
    pub a_star: DVector<f64>,
    pub g_star: Network,
    pub mu_star: f64,
    pub value: f64,
    /// `κ‖g* − ĝ‖²`.
    pub budget_on_g: f64,
    /// `‖a* − â‖²`.
    pub budget_on_a: f64,
    pub kkt: KktReport,
    /// Final objective of each restart, in restart order.
    pub restart_values: Vec<f64>,
    /// Index into `restart_values` of the returned solution.
    pub best_restart: usize,
    /// False when no restart met `grad_tol` within `max_iters`.
    pub converged: bool,
    pub iterations: usize,
    /// Principal eigenvalue of `φg*` is numerically repeated.
    pub multiplicity_warning: bool,
}

/// Solves the joint problem from the default starting networks.
pub fn solve_joint(p: &JointProblem) -> Result<JointSolution> {
    solve_joint_from(p, None)
}

/// Solves the joint problem, adding `warm` (projected to feasibility) as an
/// extra start after the default ones.
pub fn solve_joint_from(p: &JointProblem, warm: Option<&Network>) -> Result<JointSolution> {
    let cfg = p.cfg();
    let ghat = cfg.ghat();
    if p.budget == 0.0 {
        let inner = evaluate(p, ghat)?;
        debug_assert!((inner.single.value - welfare(cfg, cfg.ahat(), ghat)?).abs() < 1e-9);
        return Ok(finish(p, ghat.clone(), inner, vec![], 0, true, 0));
    }

    let set = p.feasible_set();
    let mut starts = starting_points(p, &set)?;
    if let Some(w) = warm {
        if w.n() != cfg.n() {
            return Err(Error::DimensionMismatch {
                expected: cfg.n(),
                found: w.n(),
            });
        }
        starts.push(set.project(&w.upper()));
    }

    let runs: Vec<Result<Ascent>> = starts
        .par_iter()
        .map(|x0| ascend(p, &set, x0.clone()))
        .collect();
    let runs: Vec<Ascent> = runs.into_iter().collect::<Result<_>>()?;

    let mut best = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = r;
        }
    }
    let restart_values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let converged = runs.iter().any(|r| r.converged);
    let run = &runs[best];
    let g = Network::from_upper(cfg.n(), ghat.wbar(), &run.x);
    let inner = evaluate(p, &g)?;
    Ok(finish(
        p,
        g,
        inner,
        restart_values,
        best,
        converged,
        run.iterations,
    ))
}

fn finish(
    p: &JointProblem,
    g: Network,
    inner: InnerSolution,
    restart_values: Vec<f64>,
    best_restart: usize,
    converged: bool,
    iterations: usize,
) -> JointSolution {
    let kkt = kkt_report(p, &g, &inner);
    let budget_on_g = p.kappa * g.distance_sq(p.cfg.ghat());
    let multiplicity_warning = inner.spectrum.principal_is_degenerate(p.cfg.phi());
    JointSolution {
        a_star: inner.single.a_star,
        mu_star: inner.single.mu_star,
        value: inner.single.value,
        budget_on_g,
        budget_on_a: inner.single.budget_used,
        g_star: g,
        kkt,
        restart_values,
        best_restart,
        converged,
        iterations,
        multiplicity_warning,
    }
}

/// Restart 0 at `ĝ`; restart 1 at the large-budget guess; the rest at
/// seeded perturbations of `ĝ`. All projected onto the feasible set.
fn starting_points(p: &JointProblem, set: &FeasibleSet) -> Result<Vec<Vec<f64>>> {
    let cfg = p.cfg();
    let ghat = cfg.ghat();
    let n = cfg.n();
    let wbar = ghat.wbar();
    let center = ghat.upper();
    let mut starts = vec![center.clone()];
    if p.options.restarts >= 2 {
        let guess: Vec<f64> = if cfg.phi() > 0.0 {
            vec![wbar; center.len()]
        } else if cfg.phi() < 0.0 {
            let spec = crate::spectrum::spectrum(ghat.matrix())?;
            let u = spec.principal_vector(cfg.phi());
            link_pairs(n)
                .map(|(i, j)| if (u[i] < 0.0) != (u[j] < 0.0) { wbar } else { 0.0 })
                .collect()
        } else {
            center.clone()
        };
        starts.push(set.project(&guess));
    }
    for r in 2..p.options.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(p.options.seed.wrapping_add(r as u64));
        let y: Vec<f64> = center
            .iter()
            .map(|c| c + rng.random_range(-wbar..wbar))
            .collect();
        starts.push(set.project(&y));
    }
    Ok(starts)
}

struct Ascent {
    x: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

/// Projected gradient ascent with Armijo backtracking from `x0`.
fn ascend(p: &JointProblem, set: &FeasibleSet, x0: Vec<f64>) -> Result<Ascent> {
    let n = p.cfg.n();
    let wbar = p.cfg.ghat().wbar();
    let opts = &p.options;
    let eval = |x: &[f64]| -> Result<(f64, Vec<f64>)> {
        let g = Network::from_upper(n, wbar, x);
        let inner = evaluate(p, &g)?;
        let grad = link_gradient(p, &g, &inner);
        Ok((inner.single.value, grad))
    };

    let mut x = x0;
    let (mut f, mut grad) = eval(&x)?;
    for it in 0..opts.max_iters {
        let trial = |step: f64| -> Vec<f64> {
            let y: Vec<f64> = x.iter().zip(&grad).map(|(a, d)| a + step * d).collect();
            set.project(&y)
        };
        let mut step = opts.step_init;
        let mut y = trial(step);
        if dist(&y, &x) / step < opts.grad_tol {
            return Ok(Ascent {
                x,
                value: f,
                iterations: it,
                converged: true,
            });
        }
        // Rounding floor for comparing objective values near the optimum.
        let noise = 1e-13 * f.abs().max(1.0);
        let accepted = loop {
            let (fy, gy) = eval(&y)?;
            let predicted: f64 = grad.iter().zip(y.iter().zip(&x)).map(|(d, (a, b))| d * (a - b)).sum();
            if fy >= f + ARMIJO_SIGMA * predicted - noise {
                break Some((fy, gy));
            }
            step *= BACKTRACK;
            if step < MIN_STEP {
                break None;
            }
            y = trial(step);
        };
        match accepted {
            Some((fy, gy)) => {
                x = y;
                f = fy;
                grad = gy;
            }
            None => {
                return Ok(Ascent {
                    x,
                    value: f,
                    iterations: it,
                    converged: false,
                })
            }
        }
    }
    Ok(Ascent {
        x,
        value: f,
        iterations: opts.max_iters,
        converged: false,
    })
}
