//! Euclidean projection onto `[0, wbar]^m ∩ {x : ‖x − x̂‖ ≤ r}` by Dykstra's
//! alternating projections.
//!
//! Link weights are handled as the strict upper triangle, so the matrix
//! Frobenius ball `‖g − ĝ‖² ≤ ρ²` becomes the vector ball of radius `ρ/√2`.

const DYKSTRA_TOL: f64 = 1e-12;
const DYKSTRA_MAX_ITERS: usize = 100_000;

#[derive(Debug, Clone)]
pub(crate) struct FeasibleSet {
    pub center: Vec<f64>,
    pub radius: f64,
    pub wbar: f64,
}

impl FeasibleSet {
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.iter().all(|&v| v >= -tol && v <= self.wbar + tol)
            && dist(x, &self.center) <= self.radius + tol
    }

    fn clamp(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| v.clamp(0.0, self.wbar)).collect()
    }

    fn onto_ball(&self, x: &[f64]) -> Vec<f64> {
        let d = dist(x, &self.center);
        if d <= self.radius {
            return x.to_vec();
        }
        let s = if d > 0.0 { self.radius / d } else { 0.0 };
        x.iter()
            .zip(&self.center)
            .map(|(v, c)| c + (v - c) * s)
            .collect()
    }

    pub fn project(&self, y: &[f64]) -> Vec<f64> {
        let boxed = self.clamp(y);
        if dist(&boxed, &self.center) <= self.radius {
            return boxed;
        }
        let balled = self.onto_ball(y);
        if balled.iter().all(|&v| (0.0..=self.wbar).contains(&v)) {
            return balled;
        }

        let m = y.len();
        let mut x = y.to_vec();
        let mut p = vec![0.0; m];
        let mut q = vec![0.0; m];
        for _ in 0..DYKSTRA_MAX_ITERS {
            let shifted: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + b).collect();
            let b = self.clamp(&shifted);
            for k in 0..m {
                p[k] = shifted[k] - b[k];
            }
            let shifted: Vec<f64> = b.iter().zip(&q).map(|(a, c)| a + c).collect();
            let next = self.onto_ball(&shifted);
            for k in 0..m {
                q[k] = shifted[k] - next[k];
            }
            let moved = dist(&next, &x);
            x = next;
            if moved < DYKSTRA_TOL && dist(&b, &x) < DYKSTRA_TOL {
                break;
            }
        }
        // Land exactly inside both sets: clamp, then pull toward the center,
        // which lies in the box.
        let boxed = self.clamp(&x);
        self.onto_ball(&boxed)
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set() -> FeasibleSet {
        FeasibleSet {
            center: vec![0.2, 0.9, 0.5],
            radius: 0.6,
            wbar: 1.0,
        }
    }

    #[test]
    fn interior_points_are_fixed() {
        let s = set();
        let x = vec![0.3, 0.8, 0.5];
        assert_eq!(s.project(&x), x);
    }

    #[test]
    fn box_only_and_ball_only_cases() {
        let s = set();
        // Clamping alone lands in the ball.
        assert_eq!(s.project(&[0.2, 1.2, 0.5]), vec![0.2, 1.0, 0.5]);
        // Radial shrink alone lands in the box.
        let p = s.project(&[0.9, 0.4, 0.5]);
        assert!((p[0] - (0.2 + 0.7 * 0.6 / 0.74f64.sqrt())).abs() < 1e-15);
        assert!((dist(&p, &s.center) - 0.6).abs() < 1e-15);
    }

    proptest! {
        // The projection satisfies the variational inequality
        // ⟨y − P(y), z − P(y)⟩ ≤ 0 for feasible z.
        #[test]
        fn projection_is_optimal(
            y in prop::collection::vec(-2.0f64..3.0, 3),
            z in prop::collection::vec(0.0f64..1.0, 3),
        ) {
            let s = set();
            let p = s.project(&y);
            prop_assert!(s.contains(&p, 1e-12));
            let zf = s.project(&z);
            let inner: f64 = (0..3).map(|k| (y[k] - p[k]) * (zf[k] - p[k])).sum();
            prop_assert!(inner <= 1e-9, "inner = {}", inner);
        }
    }
}
