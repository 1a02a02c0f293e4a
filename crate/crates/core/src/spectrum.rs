//! Sorted symmetric eigendecomposition with a reproducible sign convention.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Gap below which two extreme eigenvalues are treated as coincident.
pub const GAP_TOL: f64 = 1e-8;

const SYMMETRY_TOL: f64 = 1e-12;

/// Eigenpairs of a symmetric matrix, eigenvalues in descending order.
///
/// Each eigenvector has unit norm and its entry of largest magnitude is
/// positive (first such index on ties).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: DVector<f64>,
    /// Column `l` pairs with `eigenvalues[l]`.
    pub eigenvectors: DMatrix<f64>,
    /// Set when `λ₁` or `λₙ` is within [`GAP_TOL`] of its neighbour.
    pub multiplicity_warning: bool,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn smallest(&self) -> f64 {
        self.eigenvalues[self.len() - 1]
    }

    pub fn vector(&self, l: usize) -> DVector<f64> {
        self.eigenvectors.column(l).into_owned()
    }

    /// Index of the eigenpair that is principal for `phi · g`: the largest
    /// eigenvalue when `phi ≥ 0`, the smallest when `phi < 0`.
    pub fn principal_index(&self, phi: f64) -> usize {
        if phi < 0.0 {
            self.len() - 1
        } else {
            0
        }
    }

    /// `λ₁(φg)`.
    pub fn principal_value(&self, phi: f64) -> f64 {
        phi * self.eigenvalues[self.principal_index(phi)]
    }

    /// `u¹(φg)` under the sign convention.
    pub fn principal_vector(&self, phi: f64) -> DVector<f64> {
        self.vector(self.principal_index(phi))
    }

    /// Whether the principal eigenvalue of `phi · g` is (numerically) repeated.
    pub fn principal_is_degenerate(&self, phi: f64) -> bool {
        let n = self.len();
        if n < 2 {
            return false;
        }
        if phi == 0.0 {
            return true;
        }
        let ev = &self.eigenvalues;
        if phi > 0.0 {
            (ev[0] - ev[1]).abs() < GAP_TOL
        } else {
            (ev[n - 1] - ev[n - 2]).abs() < GAP_TOL
        }
    }
}

/// Eigendecomposition of a symmetric matrix.
pub fn spectrum(g: &DMatrix<f64>) -> Result<Spectrum> {
    let (rows, cols) = g.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let n = rows;
    if n == 0 {
        return Err(Error::BadSize("empty matrix".into()));
    }
    let scale = g.amax().max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if (g[(i, j)] - g[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let sym = (g + g.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&l| eig.eigenvalues[l]));
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(src).into_owned();
        let norm = v.norm();
        if norm > 0.0 {
            v /= norm;
        }
        normalize_sign(&mut v);
        eigenvectors.set_column(dst, &v);
    }

    let multiplicity_warning = n >= 2
        && ((eigenvalues[0] - eigenvalues[1]).abs() < GAP_TOL
            || (eigenvalues[n - 1] - eigenvalues[n - 2]).abs() < GAP_TOL);

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        multiplicity_warning,
    })
}

/// Flips `v` so that its largest-magnitude entry is positive.
pub(crate) fn normalize_sign(v: &mut DVector<f64>) {
    let max = v.amax();
    if max == 0.0 {
        return;
    }
    // Entries within rounding of the maximum count as ties.
    let pivot = v
        .iter()
        .position(|x| x.abs() >= max * (1.0 - 1e-12))
        .unwrap_or(0);
    if v[pivot] < 0.0 {
        v.neg_mut();
    }
}
