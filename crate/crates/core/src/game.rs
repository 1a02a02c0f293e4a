//! The linear-quadratic game: equilibrium actions, payoffs and welfare.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::network::Network;
use crate::spectrum::spectrum;

/// Margin below 1 that `λ₁(φg)` must respect for the resolvent to count as
/// well-posed.
pub const REGULARITY_TOL: f64 = 1e-10;

/// Interaction strength and the pre-intervention instance `(â, ĝ)`.
#[derive(Debug, Clone)]
pub struct GameConfig {
    phi: f64,
    ahat: DVector<f64>,
    ghat: Network,
}

impl GameConfig {
    pub fn new(phi: f64, ahat: DVector<f64>, ghat: Network) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidParameter(format!("phi = {phi}")));
        }
        if ahat.len() != ghat.n() {
            return Err(Error::DimensionMismatch {
                expected: ghat.n(),
                found: ahat.len(),
            });
        }
        if ahat.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("a_hat must be finite".into()));
        }
        check_regular(phi, &ghat)?;
        Ok(GameConfig { phi, ahat, ghat })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn ahat(&self) -> &DVector<f64> {
        &self.ahat
    }

    pub fn ghat(&self) -> &Network {
        &self.ghat
    }

    pub fn n(&self) -> usize {
        self.ghat.n()
    }

    /// Same game with a different initial network.
    pub fn with_ghat(&self, ghat: Network) -> Result<Self> {
        GameConfig::new(self.phi, self.ahat.clone(), ghat)
    }

    /// Same game with different initial standalone utilities.
    pub fn with_ahat(&self, ahat: DVector<f64>) -> Result<Self> {
        GameConfig::new(self.phi, ahat, self.ghat.clone())
    }
}

/// Equilibrium actions, payoffs `½xᵢ²`, and welfare `Σxᵢ²`.
#[derive(Debug, Clone)]
pub struct EquilibriumResult {
    pub x: DVector<f64>,
    pub payoffs: DVector<f64>,
    pub welfare: f64,
}

/// `I − φg`.
pub fn interaction_matrix(phi: f64, g: &Network) -> DMatrix<f64> {
    let n = g.n();
    DMatrix::identity(n, n) - g.matrix() * phi
}

/// `λ₁(φg)`, the largest eigenvalue of `φg`.
pub fn principal_eigenvalue(phi: f64, g: &Network) -> Result<f64> {
    if phi == 0.0 {
        return Ok(0.0);
    }
    Ok(spectrum(g.matrix())?.principal_value(phi))
}

fn check_regular(phi: f64, g: &Network) -> Result<f64> {
    let lambda = principal_eigenvalue(phi, g)?;
    if lambda >= 1.0 - REGULARITY_TOL {
        return Err(Error::SingularSystem { lambda });
    }
    Ok(lambda)
}

/// Solves `(I − φg)x = a` for the equilibrium profile.
pub fn equilibrium(cfg: &GameConfig, a: &DVector<f64>, g: &Network) -> Result<EquilibriumResult> {
    equilibrium_raw(cfg.phi, a, g)
}

pub(crate) fn equilibrium_raw(phi: f64, a: &DVector<f64>, g: &Network) -> Result<EquilibriumResult> {
    if a.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: a.len(),
        });
    }
    check_regular(phi, g)?;
    let m = interaction_matrix(phi, g);
    let x = m
        .lu()
        .solve(a)
        .ok_or(Error::SingularSystem { lambda: f64::NAN })?;
    let payoffs = x.map(|v| 0.5 * v * v);
    let welfare = x.norm_squared();
    Ok(EquilibriumResult {
        x,
        payoffs,
        welfare,
    })
}

/// `aᵀ(I − φg)⁻²a`.
pub fn welfare(cfg: &GameConfig, a: &DVector<f64>, g: &Network) -> Result<f64> {
    Ok(equilibrium_raw(cfg.phi, a, g)?.welfare)
}

/// Strict upper bound on `wbar` under which every network in the box is
/// regular for interaction strength `phi`.
pub fn regular_wbar_bound(phi: f64, n: usize) -> Result<f64> {
    if phi == 0.0 {
        return Err(Error::PhiZero);
    }
    if n < 2 {
        return Err(Error::BadSize(format!("need n >= 2, got {n}")));
    }
    let nf = n as f64;
    Ok(if phi > 0.0 {
        1.0 / (phi * (nf - 1.0))
    } else if n % 2 == 0 {
        2.0 / (-phi * nf)
    } else {
        2.0 / (-phi * (nf * nf - 1.0).sqrt())
    })
}

/// Whether `wbar` is strictly below [`regular_wbar_bound`].
pub fn wbar_keeps_regular(phi: f64, n: usize, wbar: f64) -> bool {
    regular_wbar_bound(phi, n).is_ok_and(|b| wbar < b)
}

/// `1 − λ₁(φg)`; positive exactly when `g` is regular.
pub fn regularity_margin(cfg: &GameConfig, g: &Network) -> f64 {
    let lambda = principal_eigenvalue(cfg.phi, g).unwrap_or(f64::NAN);
    1.0 - lambda
}
