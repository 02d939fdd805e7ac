use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible norm for points handed to numeric routines.
pub const BALL_LIMIT: f64 = 1.0 - 1e-12;

/// `Σ z_k conj(w_k)`.
pub fn herm_inner(z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            got: w.len(),
        });
    }
    Ok(inner_unchecked(z, w))
}

#[inline]
pub(crate) fn inner_unchecked(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

#[inline]
pub fn norm_sqr(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum()
}

#[inline]
pub fn norm(z: &[Complex64]) -> f64 {
    norm_sqr(z).sqrt()
}

/// A point of the open unit ball in `C^n`, with its norm cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct BallPoint {
    coords: Vec<Complex64>,
    norm: f64,
}

impl BallPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::param("coords", "dimension must be at least 1"));
        }
        let norm = norm(&coords);
        if !norm.is_finite() || norm > BALL_LIMIT {
            return Err(Error::OutOfDomain {
                norm,
                limit: BALL_LIMIT,
            });
        }
        Ok(Self { coords, norm })
    }

    /// Builds a point from real coordinates.
    pub fn real(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Builds a point from interleaved `(re, im)` pairs.
    pub fn from_interleaved(xs: &[f64]) -> Result<Self> {
        if xs.len() % 2 != 0 {
            return Err(Error::param(
                "coords",
                "interleaved coordinates need even length",
            ));
        }
        Self::new(
            xs.chunks_exact(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
        )
    }

    pub fn origin(n: usize) -> Self {
        Self {
            coords: vec![Complex64::new(0.0, 0.0); n],
            norm: 0.0,
        }
    }

    /// `(x, 0, …, 0)` in dimension `n`.
    pub fn on_axis(x: Complex64, n: usize) -> Result<Self> {
        let mut coords = vec![Complex64::new(0.0, 0.0); n];
        coords[0] = x;
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.coords
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn norm_sqr(&self) -> f64 {
        self.norm * self.norm
    }

    /// `1 − |z|²`, computed from the coordinates rather than the cached norm.
    pub fn weight(&self) -> f64 {
        1.0 - norm_sqr(&self.coords)
    }

    pub fn to_interleaved(&self) -> Vec<f64> {
        self.coords.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn is_origin(&self) -> bool {
        self.norm == 0.0
    }
}

impl TryFrom<Vec<Complex64>> for BallPoint {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BallPoint> for Vec<Complex64> {
    fn from(p: BallPoint) -> Self {
        p.coords
    }
}

impl AsRef<[Complex64]> for BallPoint {
    fn as_ref(&self) -> &[Complex64] {
        &self.coords
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_product_examples() {
        let e1 = [c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = [c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(herm_inner(&e1, &e2).unwrap(), c(0.0, 0.0));
        assert_eq!(
            herm_inner(&[c(0.0, 1.0)], &[c(0.0, 1.0)]).unwrap(),
            c(1.0, 0.0)
        );
        let z = [c(1.0, 1.0), c(2.0, 0.0)];
        let w = [c(1.0, 0.0), c(0.0, 1.0)];
        assert_eq!(herm_inner(&z, &w).unwrap(), c(1.0, -1.0));
    }

    #[test]
    fn inner_product_dimension_mismatch() {
        let err = herm_inner(&[c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn membership_guard() {
        assert!(BallPoint::real(&[0.6, 0.79]).is_ok());
        assert!(matches!(
            BallPoint::real(&[1.0]),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(BallPoint::real(&[1.0 - 1e-13]).is_err());
        assert!(BallPoint::new(vec![]).is_err());
    }

    #[test]
    fn cached_norm_matches() {
        let p = BallPoint::new(vec![c(0.3, -0.2), c(0.1, 0.5)]).unwrap();
        let direct = (0.09f64 + 0.04 + 0.01 + 0.25).sqrt();
        assert!((p.norm() - direct).abs() <= 4.0 * f64::EPSILON);
    }
}
