//! Inequality and limiting-welfare diagnostics.

use log::warn;
use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::game::{interaction_matrix, principal_eigenvalue, wbar_keeps_regular, REGULARITY_TOL};
use crate::network::Network;
use crate::spectrum::spectrum;

/// Entries of the principal eigenvector with magnitude at most this count
/// as zero.
pub const SIGN_TOL: f64 = 1e-10;

/// How a Theil index was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// From the payoffs themselves.
    Direct,
    /// All payoffs were zero; the `C → 0⁺` limit, which depends only on the
    /// principal eigenvector, was reported instead.
    EigencentralityLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub theil: f64,
    /// `πᵢ / Σπ`.
    pub payoff_shares: DVector<f64>,
    pub convention_used: Convention,
}

fn xlnx_over(share: f64, n: f64) -> f64 {
    // share·ln(n·share) with 0·ln 0 = 0.
    if share == 0.0 {
        0.0
    } else {
        share * (n * share).ln()
    }
}

/// Theil T index `(1/n) Σ (πᵢ/π̄) ln(πᵢ/π̄)`.
///
/// ```
/// use nalgebra::DVector;
/// let r = netgame::theil_index(&DVector::from_vec(vec![1.0, 0.0, 0.0])).unwrap();
/// assert!((r.theil - 3f64.ln()).abs() < 1e-15);
/// ```
pub fn theil_index(payoffs: &DVector<f64>) -> Result<InequalityReport> {
    if payoffs.is_empty() {
        return Err(Error::BadSize("no payoffs".into()));
    }
    if let Some(p) = payoffs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "payoffs must be finite and nonnegative, got {p}"
        )));
    }
    let total: f64 = payoffs.sum();
    if total == 0.0 {
        return Err(Error::AllZeroWithoutContext);
    }
    let shares = payoffs / total;
    Ok(InequalityReport {
        theil: entropy_of_shares(&shares),
        payoff_shares: shares,
        convention_used: Convention::Direct,
    })
}

// Σ sᵢ ln(n sᵢ) equals T when sᵢ = πᵢ/Σπ. Clamped at zero against rounding.
fn entropy_of_shares(shares: &DVector<f64>) -> f64 {
    let n = shares.len() as f64;
    shares.iter().map(|&s| xlnx_over(s, n)).sum::<f64>().max(0.0)
}

/// As [`theil_index`], but all-zero payoffs are reported as the small-budget
/// limit [`eigencentrality_entropy`] of `(g, phi)`.
pub fn theil_index_or_limit(payoffs: &DVector<f64>, g: &Network, phi: f64) -> Result<InequalityReport> {
    match theil_index(payoffs) {
        Err(Error::AllZeroWithoutContext) => {
            if g.n() != payoffs.len() {
                return Err(Error::DimensionMismatch {
                    expected: payoffs.len(),
                    found: g.n(),
                });
            }
            let u = principal(g, phi);
            let shares = u.map(|x| x * x);
            Ok(InequalityReport {
                theil: entropy_of_shares(&shares),
                payoff_shares: shares,
                convention_used: Convention::EigencentralityLimit,
            })
        }
        other => other,
    }
}

fn principal(g: &Network, phi: f64) -> DVector<f64> {
    let spec = spectrum(g.matrix()).expect("validated networks are symmetric");
    if spec.principal_is_degenerate(phi) {
        warn!("principal eigenvalue is repeated; eigenvector entropy depends on the basis chosen");
    }
    spec.principal_vector(phi)
}

/// `Σ (u¹ᵢ)² ln(n (u¹ᵢ)²)` for `u¹ = u¹(φg)`: the Theil index of payoffs
/// proportional to squared eigenvector centrality.
pub fn eigencentrality_entropy(g: &Network, phi: f64) -> f64 {
    entropy_of_shares(&principal(g, phi).map(|x| x * x))
}

/// Which intervention a welfare limit refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WelfareMode {
    Joint,
    Single,
}

fn balanced_product(n: usize) -> f64 {
    ((n / 2) as f64 * n.div_ceil(2) as f64).sqrt()
}

/// `lim V*/C` as `C → ∞`.
///
/// Single intervention: `(1 − λ₁(φĝ))⁻²`, which needs `ghat`. Joint
/// intervention: `(1 − (n−1)φw̄)⁻²` for `φ > 0` and
/// `(1 + φw̄√(⌊n/2⌋⌈n/2⌉))⁻²` for `φ < 0`, valid when `wbar` is within the
/// regularity bound for `(phi, n)`.
pub fn welfare_limit(
    n: usize,
    phi: f64,
    wbar: f64,
    mode: WelfareMode,
    ghat: Option<&Network>,
) -> Result<f64> {
    match mode {
        WelfareMode::Single => {
            let g = ghat.ok_or(Error::MissingGhat)?;
            if g.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.n(),
                });
            }
            let lambda = principal_eigenvalue(phi, g)?;
            if lambda >= 1.0 - REGULARITY_TOL {
                return Err(Error::SingularSystem { lambda });
            }
            Ok((1.0 - lambda).powi(-2))
        }
        WelfareMode::Joint => {
            if n < 2 {
                return Err(Error::BadSize(format!("need n >= 2, got {n}")));
            }
            if phi != 0.0 && !wbar_keeps_regular(phi, n, wbar) {
                return Err(Error::PreconditionViolated(format!(
                    "wbar = {wbar} admits singular networks at phi = {phi}, n = {n}"
                )));
            }
            Ok(joint_limit(n, phi, wbar))
        }
    }
}

fn joint_limit(n: usize, phi: f64, wbar: f64) -> f64 {
    let lambda = if phi > 0.0 {
        (n - 1) as f64 * phi * wbar
    } else {
        -phi * wbar * balanced_product(n)
    };
    (1.0 - lambda).powi(-2)
}

/// Large-budget ratio of joint to single welfare,
/// `((1 − λ₁(φĝ)) / (1 − λ₁(φg*∞)))²` where `g*∞` is the complete or the
/// balanced complete bipartite network.
pub fn welfare_ratio_limit(ghat: &Network, phi: f64, wbar: f64) -> Result<f64> {
    let n = ghat.n();
    let joint = welfare_limit(n, phi, wbar, WelfareMode::Joint, None)?;
    let single = welfare_limit(n, phi, wbar, WelfareMode::Single, Some(ghat))?;
    Ok(joint / single)
}

/// Vertices split by the sign of the principal eigenvector entry (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPartition {
    pub s_plus: Vec<usize>,
    pub s_minus: Vec<usize>,
    pub zeros: Vec<usize>,
}

/// Splits vertices by the sign of `uⁿ(g)`, the principal eigenvector under
/// strategic substitutes.
pub fn sign_partition(g: &Network, phi: f64) -> Result<SignPartition> {
    if phi >= 0.0 {
        return Err(Error::PreconditionViolated(
            "sign partition is defined for phi < 0".into(),
        ));
    }
    let u = principal(g, phi);
    let mut part = SignPartition {
        s_plus: vec![],
        s_minus: vec![],
        zeros: vec![],
    };
    for (i, &x) in u.iter().enumerate() {
        if x > SIGN_TOL {
            part.s_plus.push(i);
        } else if x < -SIGN_TOL {
            part.s_minus.push(i);
        } else {
            part.zeros.push(i);
        }
    }
    Ok(part)
}

/// `−w̄(n−1)/2`: the smallest eigenvalue attainable in the box by networks
/// whose smallest eigenvector has entries of equal magnitude, `n ≥ 5` odd.
pub fn equal_magnitude_bound(n: usize, wbar: f64) -> Result<f64> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::BadSize(format!("need odd n >= 5, got {n}")));
    }
    Ok(-wbar * (n - 1) as f64 / 2.0)
}

/// Welfare of the best single intervention that equalizes payoffs,
/// `C / ‖(I − φĝ)z‖²` with `z = 1/√n`, for `â = 0` and `φ > 0`.
pub fn equal_payoff_welfare_bound(ghat: &Network, phi: f64, c: f64) -> Result<f64> {
    if phi <= 0.0 {
        return Err(Error::PreconditionViolated(
            "equal-payoff bound needs phi > 0".into(),
        ));
    }
    if !wbar_keeps_regular(phi, ghat.n(), ghat.wbar()) {
        return Err(Error::PreconditionViolated(format!(
            "wbar = {} admits singular networks at phi = {phi}",
            ghat.wbar()
        )));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("budget = {c}")));
    }
    let n = ghat.n();
    let z = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let d = interaction_matrix(phi, ghat) * z;
    Ok(c / d.norm_squared())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{make_complete, make_complete_bipartite};

    #[test]
    fn theil_basics() {
        let eq = theil_index(&DVector::from_element(4, 2.5)).unwrap();
        assert!(eq.theil.abs() < 1e-15);
        assert_eq!(eq.convention_used, Convention::Direct);
        let mut one = DVector::zeros(6);
        one[2] = 1.0;
        let r = theil_index(&one).unwrap();
        assert!((r.theil - 6f64.ln()).abs() < 1e-14);
        assert_eq!(
            theil_index(&DVector::zeros(3)).unwrap_err(),
            Error::AllZeroWithoutContext
        );
        assert!(theil_index(&DVector::from_vec(vec![1.0, -1.0])).is_err());
    }

    #[test]
    fn zero_payoffs_fall_back_to_limit() {
        let g = make_complete_bipartite(2, 3, 1.0).unwrap();
        let r = theil_index_or_limit(&DVector::zeros(5), &g, -0.2).unwrap();
        assert_eq!(r.convention_used, Convention::EigencentralityLimit);
        let expected = 5f64.ln() - (2.0 * 6f64.sqrt()).ln();
        assert!((r.theil - expected).abs() < 1e-12);
        assert!((r.payoff_shares.sum() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn welfare_limits() {
        let j = welfare_limit(4, 0.2, 1.0, WelfareMode::Joint, None).unwrap();
        assert!((j - 6.25).abs() < 1e-12);
        let k22 = make_complete_bipartite(2, 2, 1.0).unwrap();
        let s = welfare_limit(4, 0.2, 1.0, WelfareMode::Single, Some(&k22)).unwrap();
        assert!((s - 1.0 / 0.36).abs() < 1e-12);
        assert_eq!(
            welfare_limit(4, 0.2, 1.0, WelfareMode::Single, None).unwrap_err(),
            Error::MissingGhat
        );
        assert!(welfare_limit(4, 0.5, 1.0, WelfareMode::Joint, None).is_err());
        let r = welfare_ratio_limit(&k22, 0.2, 1.0).unwrap();
        assert!((r - 2.25).abs() < 1e-12);
        let k4 = make_complete(4, 1.0).unwrap();
        assert!((welfare_ratio_limit(&k4, 0.2, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sign_partition_of_bipartite_network() {
        let g = make_complete_bipartite(2, 3, 1.0).unwrap();
        let p = sign_partition(&g, -0.1).unwrap();
        assert_eq!(p.s_minus.len() + p.s_plus.len(), 5);
        let (small, large) = if p.s_plus.len() == 2 {
            (&p.s_plus, &p.s_minus)
        } else {
            (&p.s_minus, &p.s_plus)
        };
        assert_eq!(small, &vec![0, 1]);
        assert_eq!(large, &vec![2, 3, 4]);
        assert!(sign_partition(&g, 0.1).is_err());
    }

    #[test]
    fn equal_magnitude_values() {
        assert_eq!(equal_magnitude_bound(5, 1.0).unwrap(), -2.0);
        assert_eq!(equal_magnitude_bound(7, 1.0).unwrap(), -3.0);
        assert!(equal_magnitude_bound(6, 1.0).is_err());
        assert!(equal_magnitude_bound(3, 1.0).is_err());
    }

    #[test]
    fn equal_payoff_bound_on_regular_network() {
        let g = make_complete(4, 0.5).unwrap();
        let b = equal_payoff_welfare_bound(&g, 0.2, 3.0).unwrap();
        assert!((b - 3.0 / (1.0 - 0.2 * 1.5f64).powi(2)).abs() < 1e-12);
        assert_eq!(equal_payoff_welfare_bound(&g, 0.2, 0.0).unwrap(), 0.0);
    }
}
