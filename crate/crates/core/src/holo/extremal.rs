use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::lambda_of_m;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `f(z) = (F(z₁), z₂, …, z_n)` with `F′(ξ) = λ(m − ξ) / (m (1 − mξ)^{n+2})`, `F(0) = 0`.
///
/// `λ` is tied to `m` through the extremal profile at `α = 1`, which makes the
/// map prenorm-normalized and saturates the distortion lower bound on `[0, m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalMap {
    m: f64,
    lambda: f64,
    n: usize,
}

impl ExtremalMap {
    pub fn new(m: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "dimension must be at least 1"));
        }
        let lambda = lambda_of_m(m, n)?;
        Ok(Self { m, lambda, n })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `F(ξ) = λ/m² [((1−mξ)^{−n} − 1)/(mn) − (1−m²)((1−mξ)^{−(n+1)} − 1)/(m(n+1))]`.
    pub fn first_component<T: Scalar>(&self, xi: T) -> T {
        let m = self.m;
        let n = self.n as i32;
        let one = T::one();
        let base = (one - xi.scale(Complex64::new(m, 0.0))).recip();
        let p_n = base.powi(n);
        let p_n1 = p_n * base;
        let a = (p_n - one).scale(Complex64::new(1.0 / (m * n as f64), 0.0));
        let b = (p_n1 - one).scale(Complex64::new((1.0 - m * m) / (m * (n + 1) as f64), 0.0));
        (a - b).scale(Complex64::new(self.lambda / (m * m), 0.0))
    }

    /// `F′(ξ)`, which is also `det f′(z)`.
    pub fn first_derivative(&self, xi: Complex64) -> Complex64 {
        let m = self.m;
        let d = Complex64::new(1.0, 0.0) - xi * m;
        (Complex64::new(m, 0.0) - xi) * self.lambda / (m * d.powi(self.n as i32 + 2))
    }

    pub fn second_derivative(&self, xi: Complex64) -> Complex64 {
        let m = self.m;
        let k = self.n as i32 + 2;
        let d = Complex64::new(1.0, 0.0) - xi * m;
        let term = -d.powi(-k) + (Complex64::new(m, 0.0) - xi) * (k as f64 * m) * d.powi(-k - 1);
        term * (self.lambda / m)
    }

    pub fn eval_generic<T: Scalar>(&self, z: &[T]) -> Vec<T> {
        let mut out = z.to_vec();
        out[0] = self.first_component(z[0]);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball_geometry::{integrate, QuadratureSpec};

    #[test]
    fn determinant_at_origin_is_lambda() {
        let f = ExtremalMap::new(0.3, 2).unwrap();
        assert!((f.first_derivative(Complex64::new(0.0, 0.0)).re - f.lambda()).abs() < 1e-15);
        assert_eq!(
            f.first_derivative(Complex64::new(0.3, 0.0)),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            f.first_component(Complex64::new(0.0, 0.0)),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn antiderivative_matches_quadrature() {
        let spec = QuadratureSpec::default().with_tolerance(1e-14);
        for (m, n) in [(1.0 / 3f64.sqrt(), 1usize), (0.2, 2), (0.45, 3)] {
            let f = ExtremalMap::new(m, n).unwrap();
            let x = 0.1;
            let quad = integrate(
                |t| Ok(f.first_derivative(Complex64::new(t, 0.0)).re),
                &[0.0, x],
                &spec,
            )
            .unwrap();
            let closed = f.first_component(Complex64::new(x, 0.0));
            assert!(
                (closed.re - quad).abs() < 1e-12,
                "m={m} n={n}: {} vs {quad}",
                closed.re
            );
            assert!(closed.im.abs() < 1e-15);
        }
    }

    #[test]
    fn antiderivative_matches_quadrature_off_axis() {
        // integrate along the ray ξ = s·z, dξ = z ds
        let f = ExtremalMap::new(0.35, 2).unwrap();
        let z = Complex64::new(-0.3, 0.5);
        let spec = QuadratureSpec::default().with_tolerance(1e-14);
        let re = integrate(
            |s| Ok((f.first_derivative(z * s) * z).re),
            &[0.0, 1.0],
            &spec,
        )
        .unwrap();
        let im = integrate(
            |s| Ok((f.first_derivative(z * s) * z).im),
            &[0.0, 1.0],
            &spec,
        )
        .unwrap();
        let closed = f.first_component(z);
        assert!((closed - Complex64::new(re, im)).norm() < 1e-12);
    }

    #[test]
    fn second_derivative_matches_difference() {
        let f = ExtremalMap::new(0.4, 1).unwrap();
        let z = Complex64::new(0.1, -0.2);
        let h = 1e-6;
        let fd = (f.first_derivative(z + h) - f.first_derivative(z - h)) / (2.0 * h);
        assert!((fd - f.second_derivative(z)).norm() < 1e-7);
    }

    #[test]
    fn parameter_range() {
        assert!(ExtremalMap::new(0.0, 1).is_err());
        assert!(ExtremalMap::new(1.0, 1).is_err());
        assert!(ExtremalMap::new(-0.2, 1).is_err());
        assert!(ExtremalMap::new(0.2, 0).is_err());
    }
}
