//! Synthetic S-curve data.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::data::{Dataset, Points};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SCurve {
    pub data: Dataset,
    /// Curve parameter `t` of each point, usable as a color value.
    pub color: Vec<f64>,
}

/// Noise-free point at curve parameter `t` and height `y`.
pub fn s_curve_point(t: f64, y: f64) -> [f64; 3] {
    let sign = if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    };
    [t.sin(), y, sign * (t.cos() - 1.0)]
}

/// `n` points on the S-shaped surface with `t` uniform in
/// `[-3pi/2, 3pi/2)` and height uniform in `[0, 2)`, plus isotropic
/// Gaussian noise of standard deviation `noise`.
pub fn s_curve(n: usize, seed: u64, noise: f64) -> Result<SCurve> {
    if n == 0 {
        return Err(Error::Config("the S-curve needs at least one point".into()));
    }
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(Error::Config(format!("noise must be finite and >= 0, got {noise}")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let t: Vec<f64> = (0..n).map(|_| 3.0 * PI * (rng.random::<f64>() - 0.5)).collect();
    let heights: Vec<f64> = (0..n).map(|_| 2.0 * rng.random::<f64>()).collect();
    let mut values = Vec::with_capacity(3 * n);
    for (&ti, &yi) in t.iter().zip(&heights) {
        values.extend_from_slice(&s_curve_point(ti, yi));
    }
    if noise > 0.0 {
        for v in values.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *v += noise * z;
        }
    }
    Ok(SCurve {
        data: Points::from_flat(3, values)?,
        color: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn special_parameters() {
        assert_eq!(s_curve_point(0.0, 1.25), [0.0, 1.25, 0.0]);
        let p = s_curve_point(PI / 2.0, 0.5);
        assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p[2], -1.0, epsilon = 1e-15);
        let q = s_curve_point(-PI, 0.0);
        assert_abs_diff_eq!(q[2], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn ranges_without_noise() {
        let s = s_curve(10_000, 3, 0.0).unwrap();
        for (row, &t) in s.data.rows().zip(&s.color) {
            assert!((-1.0..=1.0).contains(&row[0]));
            assert!((0.0..2.0).contains(&row[1]));
            assert!((-2.0..=2.0).contains(&row[2]));
            assert!((-1.5 * PI..1.5 * PI).contains(&t));
            // z carries the sign of t
            assert!(row[2] * t <= 0.0);
        }
    }

    #[test]
    fn seeded() {
        let a = s_curve(50, 11, 0.1).unwrap();
        let b = s_curve(50, 11, 0.1).unwrap();
        assert_eq!(a.data, b.data);
        assert_eq!(a.color, b.color);
        assert_ne!(s_curve(50, 12, 0.1).unwrap().data, a.data);
        assert!(s_curve(0, 1, 0.0).is_err());
        assert!(s_curve(5, 1, -1.0).is_err());
    }
}
