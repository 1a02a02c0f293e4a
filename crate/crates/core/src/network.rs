//! Weighted undirected networks with a box bound on every link.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Tolerance for symmetry and box checks on input weights.
pub const INPUT_TOL: f64 = 1e-12;

/// A symmetric, loop-free adjacency matrix with entries in `[0, wbar]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    w: DMatrix<f64>,
    wbar: f64,
}

/// Validates `w` against the weight box `[0, wbar]` and returns the
/// symmetrized network.
///
/// Entries may exceed the box or miss symmetry by at most [`INPUT_TOL`];
/// the stored matrix is `(w + wᵀ) / 2` clamped to the box.
pub fn validate_network(w: DMatrix<f64>, wbar: f64) -> Result<Network> {
    if !(wbar > 0.0 && wbar.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "box bound must be positive and finite, got {wbar}"
        )));
    }
    let (rows, cols) = w.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Err(Error::BadSize("network needs at least one player".into()));
    }
    for i in 0..rows {
        for j in 0..cols {
            let v = w[(i, j)];
            if !v.is_finite() {
                return Err(Error::OutOfBox {
                    i,
                    j,
                    value: v,
                    wbar,
                });
            }
        }
    }
    for k in 0..rows {
        if w[(k, k)].abs() > INPUT_TOL {
            return Err(Error::NonzeroDiagonal {
                k,
                value: w[(k, k)],
            });
        }
    }
    for i in 0..rows {
        for j in (i + 1)..cols {
            if (w[(i, j)] - w[(j, i)]).abs() > INPUT_TOL {
                return Err(Error::Asymmetric {
                    i,
                    j,
                    upper: w[(i, j)],
                    lower: w[(j, i)],
                });
            }
        }
    }
    for i in 0..rows {
        for j in 0..cols {
            let v = w[(i, j)];
            if v < -INPUT_TOL || v > wbar + INPUT_TOL {
                return Err(Error::OutOfBox {
                    i,
                    j,
                    value: v,
                    wbar,
                });
            }
        }
    }
    let mut sym = (&w + w.transpose()) * 0.5;
    for i in 0..rows {
        sym[(i, i)] = 0.0;
        for j in 0..cols {
            if i != j {
                sym[(i, j)] = sym[(i, j)].clamp(0.0, wbar);
            }
        }
    }
    Ok(Network { w: sym, wbar })
}

impl Network {
    /// Builds a network from row-major nested vectors.
    pub fn from_rows(rows: &[Vec<f64>], wbar: f64) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        let w = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        validate_network(w, wbar)
    }

    /// The empty network on `n` players.
    pub fn empty(n: usize, wbar: f64) -> Result<Self> {
        validate_network(DMatrix::zeros(n, n), wbar)
    }

    /// Rebuilds a network from its strict upper triangle, row by row:
    /// `(0,1), (0,2), …, (0,n-1), (1,2), …`.
    ///
    /// Entries are clamped into the box; callers pass points that are
    /// already feasible up to rounding.
    pub fn from_upper(n: usize, wbar: f64, links: &[f64]) -> Self {
        debug_assert_eq!(links.len(), link_count(n));
        let mut w = DMatrix::zeros(n, n);
        for (k, (i, j)) in link_pairs(n).enumerate() {
            let v = links[k].clamp(0.0, wbar);
            w[(i, j)] = v;
            w[(j, i)] = v;
        }
        Network { w, wbar }
    }

    pub fn n(&self) -> usize {
        self.w.nrows()
    }

    pub fn wbar(&self) -> f64 {
        self.wbar
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.w[(i, j)]
    }

    /// Strict upper triangle in the order used by [`Network::from_upper`].
    pub fn upper(&self) -> Vec<f64> {
        link_pairs(self.n()).map(|(i, j)| self.w[(i, j)]).collect()
    }

    /// Squared Frobenius distance `‖self − other‖²` (both triangles).
    pub fn distance_sq(&self, other: &Network) -> f64 {
        (&self.w - &other.w).norm_squared()
    }

    /// Row sums (weighted degrees).
    pub fn degrees(&self) -> DVector<f64> {
        DVector::from_iterator(self.n(), self.w.row_iter().map(|r| r.sum()))
    }

    /// Applies the vertex relabelling `perm`: vertex `i` of the result is
    /// vertex `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        check_permutation(perm, n)?;
        let w = DMatrix::from_fn(n, n, |i, j| self.w[(perm[i], perm[j])]);
        Ok(Network { w, wbar: self.wbar })
    }

    /// True when every row sum agrees with the first to within `tol`.
    pub fn is_regular(&self, tol: f64) -> bool {
        let d = self.degrees();
        d.iter().all(|x| (x - d[0]).abs() <= tol)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidParameter(format!(
                "not a permutation of 0..{n}: {perm:?}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Number of free link weights, `n(n−1)/2`.
pub fn link_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Index pairs `(i, j)` with `i < j` in row-major order.
pub fn link_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

/// `wbar · K_n`.
pub fn make_complete(n: usize, wbar: f64) -> Result<Network> {
    if n == 0 {
        return Err(Error::BadSize("complete graph needs n >= 1".into()));
    }
    let w = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { wbar });
    validate_network(w, wbar)
}

/// `wbar · K_{p,q}` with the first `p` vertices on one side.
pub fn make_complete_bipartite(p: usize, q: usize, wbar: f64) -> Result<Network> {
    if p == 0 || q == 0 {
        return Err(Error::BadSize(format!(
            "bipartite sides must be nonempty, got ({p}, {q})"
        )));
    }
    let n = p + q;
    let w = DMatrix::from_fn(n, n, |i, j| if (i < p) != (j < p) { wbar } else { 0.0 });
    validate_network(w, wbar)
}

/// The odd-`n` network whose smallest eigenvalue is `−wbar(n−1)/2` with an
/// eigenvector of equal-magnitude entries.
///
/// The first `(n+1)/2` vertices form an independent set, every cross link
/// has weight `wbar`, and the remaining `(n−1)/2` vertices form a clique
/// with weight `wbar · 2/(n−3)`.
pub fn make_equal_magnitude_network(n: usize, wbar: f64) -> Result<Network> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::BadSize(format!("need odd n >= 5, got {n}")));
    }
    let big = n.div_ceil(2);
    let inner = wbar * 2.0 / (n as f64 - 3.0);
    let w = DMatrix::from_fn(n, n, |i, j| {
        if i == j || (i < big && j < big) {
            0.0
        } else if i >= big && j >= big {
            inner
        } else {
            wbar
        }
    });
    validate_network(w, wbar)
}
