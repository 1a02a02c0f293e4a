//! The outer objective `F(g) = V*_single(g, â, C − κ‖g − ĝ‖²)` and its
//! envelope gradient.

use nalgebra::DMatrix;

use super::JointProblem;
use crate::error::{Error, Result};
use crate::network::{link_pairs, Network};
use crate::single::{solve_inner, InnerSolution};

/// Value of the outer objective at `g` and its gradient with respect to the
/// Frobenius inner product on symmetric zero-diagonal matrices:
///
/// `grad = φ·(M + Mᵀ) − 2μ*κ(g − ĝ)`, `M = (I − φg)⁻¹a*a*ᵀ(I − φg)⁻²`,
///
/// with `(a*, μ*)` the inner solution at the remaining budget. Moving the
/// single link `{i, j}` by `t` changes the value at rate `2·grad[i][j]`.
pub fn objective_and_gradient(p: &JointProblem, g: &Network) -> Result<(f64, DMatrix<f64>)> {
    let inner = evaluate(p, g)?;
    Ok((inner.single.value, gradient_matrix(p, g, &inner)))
}

/// Inner solution at `g`, after checking the link budget.
pub(crate) fn evaluate(p: &JointProblem, g: &Network) -> Result<InnerSolution> {
    let cfg = p.cfg();
    if g.n() != cfg.n() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n(),
            found: g.n(),
        });
    }
    let link_cost = p.kappa() * g.distance_sq(cfg.ghat());
    let mut remaining = p.budget() - link_cost;
    if remaining < 0.0 {
        // Projection rounding may overshoot the ball by a few ulps.
        if remaining < -1e-12 * p.budget().max(1.0) {
            return Err(Error::BudgetExhausted {
                overshoot: -remaining,
            });
        }
        remaining = 0.0;
    }
    solve_inner(cfg.phi(), cfg.ahat(), g, remaining)
}

pub(crate) fn gradient_matrix(p: &JointProblem, g: &Network, inner: &InnerSolution) -> DMatrix<f64> {
    let n = g.n();
    let phi = p.cfg().phi();
    let mu = inner.single.mu_star;
    let scale = 2.0 * mu * p.kappa();
    let ghat = p.cfg().ghat();
    let mut grad = DMatrix::zeros(n, n);
    for (i, j) in link_pairs(n) {
        let benefit = phi * (inner.x[i] * inner.x2[j] + inner.x[j] * inner.x2[i]);
        let diff = g.weight(i, j) - ghat.weight(i, j);
        let cost = if diff == 0.0 { 0.0 } else { scale * diff };
        grad[(i, j)] = benefit - cost;
        grad[(j, i)] = benefit - cost;
    }
    grad
}

/// Derivative of `F` with respect to each upper-triangle link weight.
pub(crate) fn link_gradient(p: &JointProblem, g: &Network, inner: &InnerSolution) -> Vec<f64> {
    let grad = gradient_matrix(p, g, inner);
    link_pairs(g.n()).map(|(i, j)| 2.0 * grad[(i, j)]).collect()
}
