//! Brute-force reference solver for tiny instances.

use super::gradient::evaluate;
use super::JointProblem;
use crate::error::{Error, Result};
use crate::network::{link_count, Network};

const ORACLE_MAX_N: usize = 4;
const REFINE_SEEDS: usize = 8;
const REFINE_MIN_STEP: f64 = 1e-10;

/// Exhaustive grid over feasible link weights followed by coordinate
/// pattern search from the best grid points.
///
/// The grid spans, per link, the intersection of `[0, wbar]` with the
/// budget ball's bounding box, so small budgets are still resolved.
/// Work grows as `oracle_grid^(n(n−1)/2)`.
pub fn oracle_joint(p: &JointProblem) -> Result<(f64, Network)> {
    let cfg = p.cfg();
    let n = cfg.n();
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    let ghat = cfg.ghat();
    let wbar = ghat.wbar();
    let center = ghat.upper();
    let objective = |x: &[f64]| -> Option<f64> {
        let g = Network::from_upper(n, wbar, x);
        evaluate(p, &g).ok().map(|s| s.single.value)
    };
    if p.budget() == 0.0 || n < 2 {
        let v = objective(&center).ok_or(Error::NonConvergence { iterations: 0 })?;
        return Ok((v, ghat.clone()));
    }

    let set = p.feasible_set();
    let m = link_count(n);
    let res = p.options.oracle_grid;
    let lo: Vec<f64> = center.iter().map(|c| (c - set.radius).max(0.0)).collect();
    let hi: Vec<f64> = center.iter().map(|c| (c + set.radius).min(wbar)).collect();
    let spacing: Vec<f64> = (0..m).map(|k| (hi[k] - lo[k]) / (res - 1) as f64).collect();

    let mut seeds: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut keep = |v: f64, x: Vec<f64>| {
        seeds.push((v, x));
        if seeds.len() > 4 * REFINE_SEEDS {
            seeds.sort_by(|a, b| b.0.total_cmp(&a.0));
            seeds.truncate(REFINE_SEEDS);
        }
    };
    if let Some(v) = objective(&center) {
        keep(v, center.clone());
    }
    let total = res.checked_pow(m as u32).ok_or(Error::TooLarge { n, max: 3 })?;
    let mut idx = vec![0usize; m];
    let mut x = lo.clone();
    for _ in 0..total {
        for k in 0..m {
            x[k] = lo[k] + spacing[k] * idx[k] as f64;
        }
        if set.contains(&x, 0.0) {
            if let Some(v) = objective(&x) {
                keep(v, x.clone());
            }
        }
        for k in 0..m {
            idx[k] += 1;
            if idx[k] < res {
                break;
            }
            idx[k] = 0;
        }
    }
    seeds.sort_by(|a, b| b.0.total_cmp(&a.0));
    seeds.truncate(REFINE_SEEDS);

    let mut best: Option<(f64, Vec<f64>)> = None;
    for (v0, x0) in seeds {
        let (v, x) = pattern_search(&objective, &set, x0, v0, &spacing, wbar);
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, x));
        }
    }
    let (v, x) = best.ok_or(Error::NonConvergence { iterations: total })?;
    Ok((v, Network::from_upper(n, wbar, &x)))
}

fn pattern_search(
    objective: &impl Fn(&[f64]) -> Option<f64>,
    set: &super::projection::FeasibleSet,
    mut x: Vec<f64>,
    mut v: f64,
    spacing: &[f64],
    wbar: f64,
) -> (f64, Vec<f64>) {
    let mut h: Vec<f64> = spacing.iter().map(|s| s.max(1e-6)).collect();
    while h.iter().cloned().fold(0.0, f64::max) > REFINE_MIN_STEP {
        let mut improved = false;
        for k in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[k] = (y[k] + dir * h[k]).clamp(0.0, wbar);
                if y[k] == x[k] || !set.contains(&y, 0.0) {
                    continue;
                }
                if let Some(fy) = objective(&y) {
                    if fy > v {
                        x = y;
                        v = fy;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            for s in h.iter_mut() {
                *s *= 0.5;
            }
        }
    }
    (v, x)
}
