//! Balanced max-cut: the bipartition of `ĝ` that is cheapest to rewire into
//! a complete balanced bipartite network.
//!
//! Vertex sets are 0-based, sorted index lists. A cut is reported by its
//! canonical side: the smaller side for odd `n`, the side holding vertex 0
//! for even `n`.

use itertools::Itertools;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{link_pairs, Network};
use crate::spectrum::spectrum;

/// Largest `n` accepted by [`balanced_maxcut_exact`].
pub const EXACT_MAX_N: usize = 22;
/// Random balanced starts used by [`balanced_maxcut_heuristic`] besides the
/// spectral one.
pub const HEURISTIC_RANDOM_STARTS: u64 = 8;

const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutMethod {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    pub side: Vec<usize>,
    pub weight: f64,
    pub method: CutMethod,
    /// Whether `weight` is proven maximal.
    pub certified: bool,
}

fn membership(side: &[usize], n: usize) -> Result<Vec<bool>> {
    let mut inside = vec![false; n];
    for &v in side {
        if v >= n {
            return Err(Error::BadIndex { index: v, n });
        }
        inside[v] = true;
    }
    Ok(inside)
}

/// `Σ_{i∈side, j∉side} gᵢⱼ`. Repeated indices count once.
pub fn cut_weight(g: &Network, side: &[usize]) -> Result<f64> {
    let inside = membership(side, g.n())?;
    Ok(cut_of_mask(g.matrix(), &inside))
}

fn cut_of_mask(w: &DMatrix<f64>, inside: &[bool]) -> f64 {
    link_pairs(inside.len())
        .filter(|&(i, j)| inside[i] != inside[j])
        .map(|(i, j)| w[(i, j)])
        .sum()
}

fn canonical(mut side: Vec<usize>, n: usize) -> Vec<usize> {
    side.sort_unstable();
    let flip = if n % 2 == 1 {
        side.len() > n / 2
    } else {
        side.first() != Some(&0)
    };
    if flip {
        let inside = membership(&side, n).expect("indices already checked");
        side = (0..n).filter(|&v| !inside[v]).collect();
    }
    side
}

/// Exhaustive search over balanced bipartitions, each visited once. Among
/// maximal cuts the lexicographically smallest canonical side wins.
pub fn balanced_maxcut_exact(g: &Network) -> Result<CutResult> {
    let n = g.n();
    if n > EXACT_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: EXACT_MAX_N,
        });
    }
    let w = g.matrix();
    let degree: Vec<f64> = (0..n).map(|i| w.row(i).sum()).collect();
    // Cut(S) = Σ_{i∈S} deg(i) − 2 Σ_{i<j in S} gᵢⱼ.
    let cut = |s: &[usize]| {
        let d: f64 = s.iter().map(|&i| degree[i]).sum();
        let inner: f64 = s
            .iter()
            .tuple_combinations()
            .map(|(&i, &j)| w[(i, j)])
            .sum();
        d - 2.0 * inner
    };
    let k = n / 2;
    let candidates: Box<dyn Iterator<Item = Vec<usize>>> = if n % 2 == 0 && n > 0 {
        Box::new((1..n).combinations(k - 1).map(|rest| {
            let mut s = Vec::with_capacity(k);
            s.push(0);
            s.extend(rest);
            s
        }))
    } else {
        Box::new((0..n).combinations(k))
    };
    let mut best: Option<(f64, Vec<usize>)> = None;
    for s in candidates {
        let v = cut(&s);
        if best.as_ref().is_none_or(|(b, _)| v > b + TIE_TOL * b.abs().max(1.0)) {
            best = Some((v, s));
        }
    }
    let (_, side) = best.expect("at least one balanced side exists");
    Ok(CutResult {
        weight: cut_weight(g, &side)?,
        side,
        method: CutMethod::Exact,
        certified: true,
    })
}

/// Swap local search from the spectral split (the `⌊n/2⌋` most negative
/// entries of the smallest eigenvector) and from
/// [`HEURISTIC_RANDOM_STARTS`] seeded random balanced splits.
pub fn balanced_maxcut_heuristic(g: &Network, seed: u64) -> CutResult {
    let n = g.n();
    let k = n / 2;
    let w = g.matrix();

    let spec = spectrum(w).expect("validated networks are symmetric");
    let u = spec.vector(n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| u[a].total_cmp(&u[b]).then(a.cmp(&b)));
    let mut starts = vec![order[..k].to_vec()];
    for r in 0..HEURISTIC_RANDOM_STARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r));
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        starts.push(perm[..k].to_vec());
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    for s in starts {
        let side = canonical(swap_search(w, s), n);
        let v = cut_weight(g, &side).expect("indices in range");
        let better = match &best {
            None => true,
            Some((b, bs)) => {
                let tol = TIE_TOL * b.abs().max(1.0);
                v > b + tol || ((v - b).abs() <= tol && side < *bs)
            }
        };
        if better {
            best = Some((v, side));
        }
    }
    let (weight, side) = best.expect("the spectral start is always present");
    CutResult {
        side,
        weight,
        method: CutMethod::Heuristic,
        certified: false,
    }
}

/// Best-improvement exchanges of one vertex per side until no swap helps.
fn swap_search(w: &DMatrix<f64>, side: Vec<usize>) -> Vec<usize> {
    let n = w.nrows();
    let mut inside = vec![false; n];
    for &v in &side {
        inside[v] = true;
    }
    loop {
        // own[v]: weight to v's side; other[v]: weight across.
        let mut own = vec![0.0; n];
        let mut other = vec![0.0; n];
        for (i, j) in link_pairs(n) {
            let x = w[(i, j)];
            if inside[i] == inside[j] {
                own[i] += x;
                own[j] += x;
            } else {
                other[i] += x;
                other[j] += x;
            }
        }
        let mut best_gain = TIE_TOL;
        let mut best_swap = None;
        for i in (0..n).filter(|&v| inside[v]) {
            for j in (0..n).filter(|&v| !inside[v]) {
                let gain = own[i] - other[i] + own[j] - other[j] + 2.0 * w[(i, j)];
                if gain > best_gain {
                    best_gain = gain;
                    best_swap = Some((i, j));
                }
            }
        }
        match best_swap {
            Some((i, j)) => {
                inside[i] = false;
                inside[j] = true;
            }
            None => return (0..n).filter(|&v| inside[v]).collect(),
        }
    }
}

/// `wbar` on every link across `side` and its complement, 0 elsewhere.
pub fn orient_bipartite(side: &[usize], n: usize, wbar: f64) -> Result<Network> {
    let inside = membership(side, n)?;
    let size = inside.iter().filter(|&&b| b).count();
    if size != side.len() {
        return Err(Error::InvalidParameter("side lists a vertex twice".into()));
    }
    if size != n / 2 && size != n.div_ceil(2) {
        return Err(Error::BadSize(format!(
            "side of size {size} is not balanced for n = {n}"
        )));
    }
    if !(wbar > 0.0 && wbar.is_finite()) {
        return Err(Error::InvalidParameter(format!("wbar = {wbar}")));
    }
    let links: Vec<f64> = link_pairs(n)
        .map(|(i, j)| if inside[i] != inside[j] { wbar } else { 0.0 })
        .collect();
    Ok(Network::from_upper(n, wbar, &links))
}
