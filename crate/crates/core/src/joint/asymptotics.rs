use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::game::GameConfig;
use crate::network::link_pairs;
use crate::spectrum::spectrum;

/// Small-budget limits of the joint solution around an interior `ĝ`.
#[derive(Debug, Clone)]
pub struct SmallBudgetLimits {
    /// `γ = φ²(1 − Σ ûᵢ⁴) / (1 − λ₁(φĝ))²`; the link budget `κ‖g* − ĝ‖²`
    /// grows like `(γ/κ)·C²`.
    pub gamma: f64,
    /// `lim (g*_ij − ĝ_ij)/C = φûᵢûⱼ / (κ(1 − λ₁(φĝ)))`.
    pub link_rates: DMatrix<f64>,
}

/// Limits of the link changes and the link budget as `C → 0` for `â = 0`.
pub fn small_budget_asymptotics(cfg: &GameConfig, kappa: f64) -> Result<SmallBudgetLimits> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!("kappa = {kappa}")));
    }
    if cfg.ahat().iter().any(|&x| x != 0.0) {
        return Err(Error::PreconditionViolated(
            "small-budget limits are derived for a_hat = 0".into(),
        ));
    }
    let ghat = cfg.ghat();
    let n = ghat.n();
    let phi = cfg.phi();
    let wbar = ghat.wbar();
    for (i, j) in link_pairs(n) {
        let w = ghat.weight(i, j);
        if w <= 0.0 || w >= wbar {
            return Err(Error::BoundaryGhat { i, j });
        }
    }
    if phi == 0.0 {
        return Ok(SmallBudgetLimits {
            gamma: 0.0,
            link_rates: DMatrix::zeros(n, n),
        });
    }
    let spec = spectrum(ghat.matrix())?;
    if spec.principal_is_degenerate(phi) {
        return Err(Error::DegenerateEigenvalue);
    }
    let lambda1 = spec.principal_value(phi);
    let u = spec.principal_vector(phi);
    let margin = 1.0 - lambda1;
    let fourth: f64 = u.iter().map(|x| x.powi(4)).sum();
    let gamma = phi * phi / (margin * margin) * (1.0 - fourth);
    let mut link_rates = DMatrix::zeros(n, n);
    for (i, j) in link_pairs(n) {
        let r = phi * u[i] * u[j] / (kappa * margin);
        link_rates[(i, j)] = r;
        link_rates[(j, i)] = r;
    }
    Ok(SmallBudgetLimits { gamma, link_rates })
}
