//! First-order optimality checks at a returned joint solution.

use nalgebra::{DMatrix, DVector};

use super::gradient::gradient_matrix;
use super::{JointProblem, JointSolution};
use crate::error::{Error, Result};
use crate::game::interaction_matrix;
use crate::network::{link_pairs, Network};
use crate::single::InnerSolution;
use crate::spectrum::spectrum;

/// Relative distance to a bound under which a link counts as at the corner.
const CORNER_TOL: f64 = 1e-9;

/// Residuals of the multiplier conditions at `(a*, g*)`.
#[derive(Debug, Clone)]
pub struct KktReport {
    /// `‖(I − φg*)⁻²a* − μ*(a* − â)‖`; zero when the budget is empty.
    pub stationarity_a: f64,
    /// Interior links: `|L_ij|`; links at 0: `max(L_ij, 0)`; links at `wbar`:
    /// `max(−L_ij, 0)`, where `L_ij` is the link gradient.
    pub link_residuals: DMatrix<f64>,
    pub max_violation: f64,
}

pub(crate) fn kkt_report(p: &JointProblem, g: &Network, inner: &InnerSolution) -> KktReport {
    let cfg = p.cfg();
    let n = g.n();
    let s = &inner.single;
    let stationarity_a = if s.mu_star.is_finite() && s.budget_used > 0.0 {
        let lu = interaction_matrix(cfg.phi(), g).lu();
        let once = lu.solve(&s.a_star).unwrap_or_else(|| DVector::zeros(n));
        let twice = lu.solve(&once).unwrap_or_else(|| DVector::zeros(n));
        (twice - (&s.a_star - cfg.ahat()) * s.mu_star).norm()
    } else {
        0.0
    };

    let grad = gradient_matrix(p, g, inner);
    let wbar = g.wbar();
    let mut link_residuals = DMatrix::zeros(n, n);
    for (i, j) in link_pairs(n) {
        let l = grad[(i, j)];
        let w = g.weight(i, j);
        let r = if w <= CORNER_TOL * wbar {
            l.max(0.0)
        } else if w >= wbar * (1.0 - CORNER_TOL) {
            (-l).max(0.0)
        } else {
            l.abs()
        };
        link_residuals[(i, j)] = r;
        link_residuals[(j, i)] = r;
    }
    let max_violation = link_residuals.amax().max(stationarity_a);
    KktReport {
        stationarity_a,
        link_residuals,
        max_violation,
    }
}

/// One instance of `(g*_ij − ĝ_ij)/(g*_ik − ĝ_ik) = u_j/u_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCheck {
    pub vertex: usize,
    pub j: usize,
    pub k: usize,
    pub observed: f64,
    pub predicted: f64,
}

/// Agreement of a zero-`â` solution with link changes proportional to
/// products of principal eigenvector entries.
#[derive(Debug, Clone)]
pub struct SignStructureReport {
    /// `φ‖a*‖² / (κ(1 − λ₁(φg*)))`.
    pub scale: f64,
    /// `u¹(φg*)` under the sign convention.
    pub eigenvector: DVector<f64>,
    /// Interior links: `(g* − ĝ)_ij − scale·uᵢuⱼ`. Corner links: the amount
    /// by which the corner inequality is violated (zero when it holds).
    pub link_residuals: DMatrix<f64>,
    pub max_interior_residual: f64,
    pub max_corner_violation: f64,
    pub ratios: Vec<RatioCheck>,
    /// Complements: every interior link increased. Substitutes: interior
    /// links across the sign partition increased and links within it
    /// decreased.
    pub sign_pattern_holds: bool,
    pub multiplicity_warning: bool,
}

pub fn check_sign_structure(p: &JointProblem, s: &JointSolution) -> Result<SignStructureReport> {
    let cfg = p.cfg();
    if cfg.ahat().iter().any(|&x| x != 0.0) {
        return Err(Error::PreconditionViolated(
            "eigenvector structure of link changes needs a_hat = 0".into(),
        ));
    }
    let phi = cfg.phi();
    let g = &s.g_star;
    let ghat = cfg.ghat();
    let n = g.n();
    let wbar = g.wbar();
    let spec = spectrum(g.matrix())?;
    let lambda1 = spec.principal_value(phi);
    let u = spec.principal_vector(phi);
    let scale = phi * s.a_star.norm_squared() / (p.kappa() * (1.0 - lambda1));

    let mut link_residuals = DMatrix::zeros(n, n);
    let mut max_interior_residual: f64 = 0.0;
    let mut max_corner_violation: f64 = 0.0;
    let mut sign_pattern_holds = true;
    let interior = |i: usize, j: usize| {
        let w = g.weight(i, j);
        w > CORNER_TOL * wbar && w < wbar * (1.0 - CORNER_TOL)
    };
    for (i, j) in link_pairs(n) {
        let change = g.weight(i, j) - ghat.weight(i, j);
        let predicted = scale * u[i] * u[j];
        let w = g.weight(i, j);
        let r = if interior(i, j) {
            let r = change - predicted;
            max_interior_residual = max_interior_residual.max(r.abs());
            let prod = u[i] * u[j];
            if prod.abs() > 1e-10 {
                let expect_up = phi * prod > 0.0;
                if (change > 0.0) != expect_up || change == 0.0 {
                    sign_pattern_holds = false;
                }
            }
            r
        } else {
            let v = if w <= CORNER_TOL * wbar {
                (predicted - change).max(0.0)
            } else {
                (change - predicted).max(0.0)
            };
            max_corner_violation = max_corner_violation.max(v);
            v
        };
        link_residuals[(i, j)] = r;
        link_residuals[(j, i)] = r;
    }

    let mut ratios = Vec::new();
    for v in 0..n {
        for j in 0..n {
            for k in 0..n {
                if j == v || k == v || j == k || !interior(v, j) || !interior(v, k) {
                    continue;
                }
                if u[k].abs() <= 1e-10 {
                    continue;
                }
                let den = g.weight(v, k) - ghat.weight(v, k);
                if den == 0.0 {
                    continue;
                }
                ratios.push(RatioCheck {
                    vertex: v,
                    j,
                    k,
                    observed: (g.weight(v, j) - ghat.weight(v, j)) / den,
                    predicted: u[j] / u[k],
                });
            }
        }
    }

    Ok(SignStructureReport {
        scale,
        eigenvector: u,
        link_residuals,
        max_interior_residual,
        max_corner_violation,
        ratios,
        sign_pattern_holds,
        multiplicity_warning: spec.principal_is_degenerate(phi),
    })
}
