//! Involutive automorphisms of the ball and the invariant distances built on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use super::point::{inner_unchecked, norm_sqr, BallPoint};
use crate::error::{Error, Result};
use crate::holo::HoloMap;
use crate::scalar::Scalar;

/// `φ_a(z) = (a − P_a z − s_a Q_a z) / (1 − ⟨z, a⟩)` with `s_a = √(1 − |a|²)`.
///
/// `P_a` projects onto the span of `a` and `Q_a = I − P_a`; `φ_0 = −id`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Automorphism {
    anchor: BallPoint,
}

impl Automorphism {
    pub fn new(anchor: BallPoint) -> Self {
        Self { anchor }
    }

    pub fn anchor(&self) -> &BallPoint {
        &self.anchor
    }

    pub fn dim(&self) -> usize {
        self.anchor.dim()
    }

    fn s(&self) -> f64 {
        (1.0 - self.anchor.norm_sqr()).sqrt()
    }

    /// Coefficient of `⟨z,a⟩ a` in the numerator: `(1 − s)/|a|²`, written
    /// as `1/(1 + s)` to stay accurate for small `|a|`.
    fn projection_coef(&self) -> f64 {
        1.0 / (1.0 + self.s())
    }

    pub fn eval_generic<T: Scalar>(&self, z: &[T]) -> Vec<T> {
        let a = self.anchor.coords();
        if self.anchor.is_origin() {
            return z.iter().map(|&x| -x).collect();
        }
        let s = self.s();
        let coef = self.projection_coef();
        let mut za = T::zero();
        for (x, ak) in z.iter().zip(a) {
            za += x.scale(ak.conj());
        }
        let denom = T::one() - za;
        a.iter()
            .zip(z)
            .map(|(&ak, &x)| {
                (T::from(ak) - x.scale(Complex64::new(s, 0.0)) - za.scale(ak * coef)) / denom
            })
            .collect()
    }

    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.eval_generic(z)
    }

    pub fn jacobian(&self, z: &[Complex64]) -> ComplexMatrix {
        let n = self.dim();
        let a = self.anchor.coords();
        if self.anchor.is_origin() {
            let mut m = ComplexMatrix::identity(n);
            m.scale(Complex64::new(-1.0, 0.0));
            return m;
        }
        let s = self.s();
        let coef = self.projection_coef();
        let za = inner_unchecked(z, a);
        let d = Complex64::new(1.0, 0.0) - za;
        let numer: Vec<Complex64> = (0..n).map(|j| a[j] - z[j] * s - a[j] * za * coef).collect();
        ComplexMatrix::from_fn(n, |j, k| {
            let dn = if j == k {
                Complex64::new(-s, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            } - a[j] * a[k].conj() * coef;
            dn / d + numer[j] * a[k].conj() / (d * d)
        })
    }

    /// `1 − |φ_a(z)|² = (1 − |a|²)(1 − |z|²)/|1 − ⟨z,a⟩|²`.
    pub fn image_weight(&self, z: &[Complex64]) -> f64 {
        let d = Complex64::new(1.0, 0.0) - inner_unchecked(z, self.anchor.coords());
        (1.0 - self.anchor.norm_sqr()) * (1.0 - norm_sqr(z)) / d.norm_sqr()
    }

    /// Ball point image; fails only when rounding pushes the image past the guard.
    pub fn apply(&self, z: &BallPoint) -> Result<BallPoint> {
        BallPoint::new(self.eval(z.coords()))
    }
}

fn check_dims(z: &BallPoint, w: &BallPoint) -> Result<()> {
    if z.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: z.dim(),
            got: w.dim(),
        });
    }
    Ok(())
}

/// `B(z) = ((1 − |z|²) I + z z*) / (1 − |z|²)²`.
pub fn bergman_matrix(z: &BallPoint) -> ComplexMatrix {
    let c = z.coords();
    let w = z.weight();
    let w2 = w * w;
    ComplexMatrix::from_fn(z.dim(), |j, k| {
        let diag = if j == k { w } else { 0.0 };
        (Complex64::new(diag, 0.0) + c[j] * c[k].conj()) / w2
    })
}

/// `⟨B(z) v, v⟩`, the squared Bergman length of a tangent vector at `z`.
pub fn bergman_quadratic_form(z: &[Complex64], v: &[Complex64]) -> f64 {
    let w = 1.0 - norm_sqr(z);
    let zv = inner_unchecked(v, z);
    (w * norm_sqr(v) + zv.norm_sqr()) / (w * w)
}

/// The automorphism exchanging `0` and `a`, as a map of the algebra.
pub fn mobius_auto(a: &BallPoint) -> HoloMap {
    HoloMap::Automorphism(Automorphism::new(a.clone()))
}

/// `|det φ_a′(z)| = ((1 − |φ_a(z)|²)/(1 − |z|²))^{(n+1)/2}`.
pub fn mobius_jacobian_det_modulus(a: &BallPoint, z: &BallPoint) -> Result<f64> {
    check_dims(a, z)?;
    let n = a.dim() as f64;
    let phi = Automorphism::new(a.clone());
    let ratio = phi.image_weight(z.coords()) / z.weight();
    Ok(ratio.powf((n + 1.0) / 2.0))
}

/// `ρ(z, w) = |φ_z(w)|`.
pub fn pseudo_hyperbolic(z: &BallPoint, w: &BallPoint) -> Result<f64> {
    check_dims(z, w)?;
    if z == w {
        return Ok(0.0);
    }
    let image = Automorphism::new(z.clone()).eval(w.coords());
    Ok(norm_sqr(&image).sqrt().min(1.0 - f64::EPSILON))
}

/// `β(z, w) = artanh ρ(z, w)`.
pub fn bergman_distance(z: &BallPoint, w: &BallPoint) -> Result<f64> {
    Ok(pseudo_hyperbolic(z, w)?.atanh())
}
