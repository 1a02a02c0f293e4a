//! Optimal intervention on standalone utilities for a fixed network.
//!
//! In the eigenbasis of `g`, with `βˡ = (1 − φλˡ)⁻²` and `âˡ = ⟨uˡ, â⟩`, the
//! maximizer of `aᵀ(I − φg)⁻²a` over `‖a − â‖² ≤ c` has components
//! `aˡ = μâˡ / (μ − βˡ)` where the shadow price `μ > max βˡ` makes the
//! budget bind. When `â` has no mass on the top eigenspace and the other
//! components cannot absorb the budget, `μ = max βˡ` and the remainder goes
//! along the principal eigenvector.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::game::{interaction_matrix, GameConfig, REGULARITY_TOL};
use crate::network::Network;
use crate::spectrum::{spectrum, Spectrum};

/// Top-eigenspace mass of `â` below this counts as zero.
pub const TOP_MASS_TOL: f64 = 1e-12;

const ROOT_MAX_ITERS: usize = 500;

#[derive(Debug, Clone)]
pub struct SingleSolution {
    pub a_star: DVector<f64>,
    /// Infinite when `c = 0` and `â ≠ 0`: no finite multiplier exists.
    pub mu_star: f64,
    pub value: f64,
    pub budget_used: f64,
    /// `|⟨a*/‖a*‖, u¹(φg)⟩|`, zero when `a* = 0`.
    pub alignment: f64,
    pub degenerate_top: bool,
}

/// Inner solution plus the quantities the outer problem differentiates.
#[derive(Debug, Clone)]
pub(crate) struct InnerSolution {
    pub single: SingleSolution,
    /// `(I − φg)⁻¹a*`, the equilibrium actions.
    pub x: DVector<f64>,
    /// `(I − φg)⁻²a*`.
    pub x2: DVector<f64>,
    pub spectrum: Spectrum,
}

/// Solves the fixed-network problem on the game's own `â` and network `g`.
pub fn solve_single(cfg: &GameConfig, g: &Network, c: f64) -> Result<SingleSolution> {
    Ok(solve_inner(cfg.phi(), cfg.ahat(), g, c)?.single)
}

/// `(1 − λ₁(φg))⁻²`, the large-budget limit of the shadow price.
pub fn shadow_price_limit(cfg: &GameConfig, g: &Network) -> f64 {
    let lambda = crate::game::principal_eigenvalue(cfg.phi(), g).unwrap_or(f64::NAN);
    (1.0 - lambda).powi(-2)
}

/// The equal-payoff intervention `a = k(I − φĝ)z`, `z = 1/√n`, spending the
/// whole budget, and its welfare `c / ‖(I − φĝ)z‖²`.
pub fn equal_payoff_single(cfg: &GameConfig, c: f64) -> Result<(DVector<f64>, f64)> {
    if cfg.phi() <= 0.0 {
        return Err(Error::PreconditionViolated(
            "equal-payoff intervention needs phi > 0".into(),
        ));
    }
    if cfg.ahat().iter().any(|&x| x != 0.0) {
        return Err(Error::PreconditionViolated(
            "equal-payoff intervention needs a_hat = 0".into(),
        ));
    }
    check_budget(c)?;
    let n = cfg.n();
    let z = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let dir = interaction_matrix(cfg.phi(), cfg.ghat()) * z;
    let norm = dir.norm();
    let k = c.sqrt() / norm;
    Ok((dir * k, c / (norm * norm)))
}

fn check_budget(c: f64) -> Result<()> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "budget must be finite and nonnegative, got {c}"
        )));
    }
    Ok(())
}

/// Residual `R(t) = Σ (βˡâˡ / (t + δˡ))²` with `δˡ = β_max − βˡ`.
struct Residual<'a> {
    weights: &'a [f64],
    gaps: &'a [f64],
}

impl Residual<'_> {
    fn value(&self, t: f64) -> f64 {
        self.weights
            .iter()
            .zip(self.gaps)
            .map(|(w, d)| (w / (t + d)).powi(2))
            .sum()
    }

    /// `R(t)` and `Σ w² / (t + δ)³`.
    fn value_and_slope(&self, t: f64) -> (f64, f64) {
        let mut r = 0.0;
        let mut s = 0.0;
        for (w, d) in self.weights.iter().zip(self.gaps) {
            let q = w / (t + d);
            r += q * q;
            s += q * q / (t + d);
        }
        (r, s)
    }

    /// Finds `t > 0` with `R(t) = c`, given `R(0⁺) > c`.
    fn solve(&self, c: f64, t_start_hi: f64) -> Result<f64> {
        let mut hi = t_start_hi.max(f64::MIN_POSITIVE);
        let mut iters = 0;
        while self.value(hi) > c {
            hi *= 2.0;
            iters += 1;
            if iters > 2000 {
                return Err(Error::NonConvergence { iterations: iters });
            }
        }
        let mut lo = hi;
        while self.value(lo) <= c {
            lo *= 0.5;
            iters += 1;
            if iters > 4000 || lo == 0.0 {
                return Err(Error::NonConvergence { iterations: iters });
            }
        }
        // Newton on f(t) = R^{-1/2} − c^{-1/2}, increasing and nearly linear.
        let target = c.sqrt().recip();
        let mut t = 0.5 * (lo + hi);
        for k in 0..ROOT_MAX_ITERS {
            let (r, slope) = self.value_and_slope(t);
            let f = r.sqrt().recip() - target;
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let deriv = slope / (r * r.sqrt());
            let mut next = t - f / deriv;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = if hi / lo > 4.0 {
                    (lo * hi).sqrt()
                } else {
                    0.5 * (lo + hi)
                };
            }
            if (next - t).abs() <= 1e-15 * t || hi - lo <= 1e-15 * lo {
                return Ok(next);
            }
            t = next;
            if k + 1 == ROOT_MAX_ITERS {
                break;
            }
        }
        Err(Error::NonConvergence {
            iterations: ROOT_MAX_ITERS,
        })
    }
}

pub(crate) fn solve_inner(
    phi: f64,
    ahat: &DVector<f64>,
    g: &Network,
    c: f64,
) -> Result<InnerSolution> {
    let n = g.n();
    if ahat.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: ahat.len(),
        });
    }
    check_budget(c)?;
    let spec = spectrum(g.matrix())?;
    let lambda1 = if phi == 0.0 {
        0.0
    } else {
        spec.principal_value(phi)
    };
    if lambda1 >= 1.0 - REGULARITY_TOL {
        return Err(Error::SingularSystem { lambda: lambda1 });
    }

    let u = &spec.eigenvectors;
    let denom: Vec<f64> = spec.eigenvalues.iter().map(|&l| 1.0 - phi * l).collect();
    let beta: Vec<f64> = denom.iter().map(|d| d.powi(-2)).collect();
    let coords: Vec<f64> = (0..n).map(|l| u.column(l).dot(ahat)).collect();
    let beta_max = beta.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let in_top: Vec<bool> = beta
        .iter()
        .map(|&b| b >= beta_max * (1.0 - 1e-12))
        .collect();
    let top_mass = (0..n)
        .filter(|&l| in_top[l])
        .map(|l| coords[l] * coords[l])
        .sum::<f64>()
        .sqrt();
    let principal = {
        let p = spec.principal_index(phi);
        if in_top[p] {
            p
        } else {
            (0..n).find(|&l| in_top[l]).unwrap_or(0)
        }
    };

    // a* − â in the eigenbasis.
    let mut step = vec![0.0; n];
    let mut degenerate_top = false;
    let mu_star;
    let mut e1_extra = None;

    if c == 0.0 {
        mu_star = if coords.iter().all(|&x| x == 0.0) {
            beta_max
        } else {
            f64::INFINITY
        };
    } else {
        let gaps: Vec<f64> = beta.iter().map(|&b| (beta_max - b).max(0.0)).collect();
        let top_negligible = top_mass <= TOP_MASS_TOL;
        let rest_at_zero: f64 = (0..n)
            .filter(|&l| !in_top[l])
            .map(|l| (beta[l] * coords[l] / gaps[l]).powi(2))
            .sum();

        if top_negligible && rest_at_zero <= c {
            degenerate_top = true;
            mu_star = beta_max;
            for l in 0..n {
                if !in_top[l] {
                    step[l] = beta[l] * coords[l] / gaps[l];
                }
            }
            let extra = (c - rest_at_zero).sqrt();
            if phi == 0.0 {
                // Every direction is optimal; use the first basis vector.
                e1_extra = Some(extra);
            } else {
                step[principal] = extra;
            }
        } else {
            let weights: Vec<f64> = (0..n)
                .map(|l| {
                    if top_negligible && in_top[l] {
                        0.0
                    } else {
                        beta[l] * coords[l]
                    }
                })
                .collect();
            let res = Residual {
                weights: &weights,
                gaps: &gaps,
            };
            let t_hi = weights.iter().map(|w| w.abs()).sum::<f64>() / c.sqrt();
            let t = res.solve(c, t_hi)?;
            mu_star = beta_max + t;
            step = (0..n).map(|l| weights[l] / (t + gaps[l])).collect();
            let norm = step.iter().map(|s| s * s).sum::<f64>().sqrt();
            let fix = c.sqrt() / norm;
            for s in step.iter_mut() {
                *s *= fix;
            }
        }
    }

    let a_star = match e1_extra {
        Some(extra) => {
            let mut a = ahat.clone();
            a[0] += extra;
            a
        }
        None if c == 0.0 => ahat.clone(),
        None => ahat + u * DVector::from_vec(step),
    };

    // Recover everything in the eigenbasis of the final a*.
    let a_eig: Vec<f64> = (0..n).map(|l| u.column(l).dot(&a_star)).collect();
    let value: f64 = (0..n).map(|l| beta[l] * a_eig[l] * a_eig[l]).sum();
    let x = u * DVector::from_iterator(n, (0..n).map(|l| a_eig[l] / denom[l]));
    let x2 = u * DVector::from_iterator(n, (0..n).map(|l| a_eig[l] * beta[l]));
    let budget_used = (&a_star - ahat).norm_squared();
    let a_norm = a_star.norm();
    let alignment = if a_norm > 0.0 {
        (spec.vector(principal).dot(&a_star) / a_norm).abs().min(1.0)
    } else {
        0.0
    };

    Ok(InnerSolution {
        single: SingleSolution {
            a_star,
            mu_star,
            value,
            budget_used,
            alignment,
            degenerate_top,
        },
        x,
        x2,
        spectrum: spec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{make_complete, make_complete_bipartite};

    fn zero_cfg(phi: f64, g: &Network) -> GameConfig {
        GameConfig::new(phi, DVector::zeros(g.n()), g.clone()).unwrap()
    }

    #[test]
    fn zero_ahat_follows_principal_vector() {
        let g = Network::from_rows(
            &[
                vec![0.0, 0.6, 0.7, 0.7],
                vec![0.6, 0.0, 0.7, 0.3],
                vec![0.7, 0.7, 0.0, 0.3],
                vec![0.7, 0.3, 0.3, 0.0],
            ],
            1.0,
        )
        .unwrap();
        for phi in [0.2, -0.2] {
            let cfg = zero_cfg(phi, &g);
            let s = solve_single(&cfg, &g, 2.0).unwrap();
            let spec = spectrum(g.matrix()).unwrap();
            let u = spec.principal_vector(phi);
            let mu = (1.0 - spec.principal_value(phi)).powi(-2);
            assert!((&s.a_star - &u * 2f64.sqrt()).amax() < 1e-12);
            assert!((s.mu_star - mu).abs() < 1e-12);
            assert!((s.value - 2.0 * mu).abs() < 1e-10);
            assert!(s.degenerate_top);
            assert!((shadow_price_limit(&cfg, &g) - mu).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_budget_keeps_ahat() {
        let g = make_complete(3, 0.5).unwrap();
        let cfg = GameConfig::new(0.3, DVector::from_vec(vec![0.1, 0.2, 0.3]), g.clone()).unwrap();
        let s = solve_single(&cfg, &g, 0.0).unwrap();
        assert_eq!(&s.a_star, cfg.ahat());
        assert_eq!(s.budget_used, 0.0);
        assert!(s.mu_star.is_infinite());
    }

    #[test]
    fn stationarity_and_binding_budget() {
        let g = Network::from_rows(
            &[
                vec![0.0, 0.3, 0.5],
                vec![0.3, 0.0, 0.7],
                vec![0.5, 0.7, 0.0],
            ],
            1.0,
        )
        .unwrap();
        let ahat = DVector::from_vec(vec![0.4, 0.2, 0.6]);
        for phi in [0.2, -0.2] {
            let cfg = GameConfig::new(phi, ahat.clone(), g.clone()).unwrap();
            for c in [1e-6, 0.01, 1.0, 5.0, 1e4] {
                let s = solve_single(&cfg, &g, c).unwrap();
                assert!((s.budget_used - c).abs() <= 1e-9 * c.max(1.0), "c={c}");
                let m = interaction_matrix(phi, &g);
                let lu = m.lu();
                let x2 = lu.solve(&lu.solve(&s.a_star).unwrap()).unwrap();
                let resid = (x2 - (&s.a_star - &ahat) * s.mu_star).norm();
                assert!(resid <= 1e-8 * s.a_star.norm(), "phi={phi} c={c} resid={resid}");
                let spec = spectrum(g.matrix()).unwrap();
                let bmax = (1.0 - spec.principal_value(phi)).powi(-2);
                assert!(s.mu_star > bmax - 1e-12);
            }
        }
    }

    #[test]
    fn no_interaction_scales_ahat() {
        let g = make_complete(3, 1.0).unwrap();
        let ahat = DVector::from_vec(vec![3.0, 0.0, 4.0]);
        let cfg = GameConfig::new(0.0, ahat.clone(), g.clone()).unwrap();
        let s = solve_single(&cfg, &g, 4.0).unwrap();
        let expect = &ahat * (1.0 + 2.0 / 5.0);
        assert!((&s.a_star - expect).amax() < 1e-12);

        let zero = zero_cfg(0.0, &g);
        let s = solve_single(&zero, &g, 4.0).unwrap();
        assert!(s.degenerate_top);
        assert_eq!(s.a_star, DVector::from_vec(vec![2.0, 0.0, 0.0]));
    }

    #[test]
    fn degenerate_branch_with_partial_mass() {
        // â orthogonal to the principal eigenvector of K₃, tiny budget is
        // absorbed by the other eigenspace, large budget spills onto u¹.
        let g = make_complete(3, 1.0).unwrap();
        let ahat = DVector::from_vec(vec![1.0, -1.0, 0.0]) * 0.01;
        let cfg = GameConfig::new(0.2, ahat.clone(), g.clone()).unwrap();
        let small = solve_single(&cfg, &g, 1e-8).unwrap();
        assert!(!small.degenerate_top);
        let big = solve_single(&cfg, &g, 10.0).unwrap();
        assert!(big.degenerate_top);
        assert!((big.mu_star - (1.0f64 - 0.4).powi(-2)).abs() < 1e-12);
        assert!((big.budget_used - 10.0).abs() < 1e-9);
        assert!(big.alignment > 0.99);
    }

    #[test]
    fn equal_payoff_on_regular_network() {
        let g = make_complete(4, 0.5).unwrap();
        let cfg = zero_cfg(0.2, &g);
        let (a, v) = equal_payoff_single(&cfg, 3.0).unwrap();
        assert!((v - 3.0 / (1.0f64 - 0.2 * 1.5).powi(2)).abs() < 1e-12);
        assert!((a.norm_squared() - 3.0).abs() < 1e-12);
        let single = solve_single(&cfg, &g, 3.0).unwrap();
        assert!((single.value - v).abs() < 1e-10);
        let (a0, v0) = equal_payoff_single(&cfg, 0.0).unwrap();
        assert_eq!(v0, 0.0);
        assert!(a0.iter().all(|&x| x == 0.0));
        let neg = zero_cfg(-0.2, &make_complete_bipartite(2, 2, 1.0).unwrap());
        assert!(equal_payoff_single(&neg, 1.0).is_err());
    }
}
