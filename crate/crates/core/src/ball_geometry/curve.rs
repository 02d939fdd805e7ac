//! Parametrized curves in the ball and their Bergman length.

use num_complex::Complex64;

use super::mobius::{bergman_quadratic_form, Automorphism};
use super::point::{norm_sqr, BallPoint, BALL_LIMIT};
use super::quadrature::{integrate, QuadratureSpec};
use crate::error::{Error, Result};

/// A piecewise-smooth path `[0, 1] → B^n`.
pub trait Curve: Send + Sync {
    fn dim(&self) -> usize;

    fn point(&self, t: f64) -> Vec<Complex64>;

    /// `dγ/dt` per unit parameter.
    fn velocity(&self, t: f64) -> Vec<Complex64>;

    /// Parameters where smoothness may fail, including `0` and `1`.
    fn breakpoints(&self) -> Vec<f64> {
        vec![0.0, 1.0]
    }
}

/// `ℓ(γ) = ∫₀¹ ⟨B(γ(t))γ′(t), γ′(t)⟩^{1/2} dt`.
pub fn curve_length<C: Curve + ?Sized>(curve: &C, spec: &QuadratureSpec) -> Result<f64> {
    let integrand = |t: f64| -> Result<f64> {
        let p = curve.point(t);
        let r2 = norm_sqr(&p);
        if !(r2 <= BALL_LIMIT * BALL_LIMIT) {
            return Err(Error::OutOfDomain {
                norm: r2.sqrt(),
                limit: BALL_LIMIT,
            });
        }
        let v = curve.velocity(t);
        Ok(bergman_quadratic_form(&p, &v).max(0.0).sqrt())
    };
    integrate(integrand, &curve.breakpoints(), spec)
}

/// Largest relative gap between `velocity` and a central difference of `point`.
pub fn velocity_defect<C: Curve + ?Sized>(curve: &C, ts: &[f64], h: f64) -> f64 {
    ts.iter()
        .map(|&t| {
            let v = curve.velocity(t);
            let ahead = curve.point(t + h);
            let behind = curve.point(t - h);
            let fd: Vec<Complex64> = ahead
                .iter()
                .zip(&behind)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect();
            let diff: Vec<Complex64> = v.iter().zip(&fd).map(|(a, b)| a - b).collect();
            norm_sqr(&diff).sqrt() / norm_sqr(&v).sqrt().max(1e-300)
        })
        .fold(0.0, f64::max)
}

/// Straight chord `z + t (w − z)`.
#[derive(Debug, Clone)]
pub struct Segment {
    from: Vec<Complex64>,
    delta: Vec<Complex64>,
}

impl Segment {
    pub fn new(from: &BallPoint, to: &BallPoint) -> Result<Self> {
        if from.dim() != to.dim() {
            return Err(Error::DimensionMismatch {
                expected: from.dim(),
                got: to.dim(),
            });
        }
        Ok(Self {
            from: from.coords().to_vec(),
            delta: to
                .coords()
                .iter()
                .zip(from.coords())
                .map(|(b, a)| b - a)
                .collect(),
        })
    }
}

impl Curve for Segment {
    fn dim(&self) -> usize {
        self.from.len()
    }
    fn point(&self, t: f64) -> Vec<Complex64> {
        self.from
            .iter()
            .zip(&self.delta)
            .map(|(a, d)| a + d * t)
            .collect()
    }
    fn velocity(&self, _t: f64) -> Vec<Complex64> {
        self.delta.clone()
    }
}

/// The radius from `0` to `φ_z(w)` carried back by `φ_z`; the geodesic from `z` to `w`.
#[derive(Debug, Clone)]
pub struct GeodesicArc {
    phi: Automorphism,
    direction: Vec<Complex64>,
}

impl GeodesicArc {
    pub fn new(from: &BallPoint, to: &BallPoint) -> Result<Self> {
        if from.dim() != to.dim() {
            return Err(Error::DimensionMismatch {
                expected: from.dim(),
                got: to.dim(),
            });
        }
        let phi = Automorphism::new(from.clone());
        let direction = phi.eval(to.coords());
        Ok(Self { phi, direction })
    }

    fn scaled(&self, t: f64) -> Vec<Complex64> {
        self.direction.iter().map(|c| c * t).collect()
    }
}

impl Curve for GeodesicArc {
    fn dim(&self) -> usize {
        self.direction.len()
    }
    fn point(&self, t: f64) -> Vec<Complex64> {
        self.phi.eval(&self.scaled(t))
    }
    fn velocity(&self, t: f64) -> Vec<Complex64> {
        self.phi.jacobian(&self.scaled(t)).mul_vec(&self.direction)
    }
}

/// Natural cubic spline through knots at uniform parameters `i/(K−1)`.
#[derive(Debug, Clone)]
pub struct SplineCurve {
    knots: Vec<Vec<Complex64>>,
    /// Second derivatives at the knots, per coordinate.
    moments: Vec<Vec<Complex64>>,
}

impl SplineCurve {
    pub fn new(knots: Vec<Vec<Complex64>>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::param("knots", "a spline needs at least two knots"));
        }
        let n = knots[0].len();
        if let Some(bad) = knots.iter().find(|k| k.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        let segments = knots.len() - 1;
        let h = 1.0 / segments as f64;
        let mut moments = vec![vec![Complex64::new(0.0, 0.0); n]; knots.len()];
        if segments >= 2 {
            // Thomas algorithm on the interior rows of the natural-spline system
            // h/6 M_{i-1} + 2h/3 M_i + h/6 M_{i+1} = (y_{i+1} − 2 y_i + y_{i-1})/h.
            let m = segments - 1;
            for c in 0..n {
                let rhs: Vec<Complex64> = (1..segments)
                    .map(|i| {
                        (knots[i + 1][c] - knots[i][c] * 2.0 + knots[i - 1][c]) * (6.0 / (h * h))
                    })
                    .collect();
                // normalized system: M_{i-1} + 4 M_i + M_{i+1} = rhs_i
                let mut cp = vec![0.0; m];
                let mut dp = vec![Complex64::new(0.0, 0.0); m];
                for i in 0..m {
                    let denom = 4.0 - if i > 0 { cp[i - 1] } else { 0.0 };
                    cp[i] = 1.0 / denom;
                    let prev = if i > 0 {
                        dp[i - 1]
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    dp[i] = (rhs[i] - prev) / denom;
                }
                for i in (0..m).rev() {
                    let next = if i + 1 < m {
                        moments[i + 2][c]
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    moments[i + 1][c] = dp[i] - next * cp[i];
                }
            }
        }
        Ok(Self { knots, moments })
    }

    pub fn knots(&self) -> &[Vec<Complex64>] {
        &self.knots
    }

    fn locate(&self, t: f64) -> (usize, f64, f64) {
        let segments = self.knots.len() - 1;
        let h = 1.0 / segments as f64;
        let i = ((t / h).floor() as isize).clamp(0, segments as isize - 1) as usize;
        (i, t - i as f64 * h, h)
    }
}

impl Curve for SplineCurve {
    fn dim(&self) -> usize {
        self.knots[0].len()
    }

    fn point(&self, t: f64) -> Vec<Complex64> {
        let (i, s, h) = self.locate(t);
        let a = (h - s) / h;
        let b = s / h;
        (0..self.dim())
            .map(|c| {
                let (y0, y1) = (self.knots[i][c], self.knots[i + 1][c]);
                let (m0, m1) = (self.moments[i][c], self.moments[i + 1][c]);
                y0 * a + y1 * b + (m0 * (a * a * a - a) + m1 * (b * b * b - b)) * (h * h / 6.0)
            })
            .collect()
    }

    fn velocity(&self, t: f64) -> Vec<Complex64> {
        let (i, s, h) = self.locate(t);
        let a = (h - s) / h;
        let b = s / h;
        (0..self.dim())
            .map(|c| {
                let (y0, y1) = (self.knots[i][c], self.knots[i + 1][c]);
                let (m0, m1) = (self.moments[i][c], self.moments[i + 1][c]);
                (y1 - y0) / h + (m1 * (3.0 * b * b - 1.0) - m0 * (3.0 * a * a - 1.0)) * (h / 6.0)
            })
            .collect()
    }

    fn breakpoints(&self) -> Vec<f64> {
        let segments = self.knots.len() - 1;
        (0..=segments).map(|i| i as f64 / segments as f64).collect()
    }
}

/// Curve given by closures, for ad-hoc paths.
pub struct FnCurve<P, V> {
    dim: usize,
    point: P,
    velocity: V,
    breaks: Vec<f64>,
}

impl<P, V> FnCurve<P, V>
where
    P: Fn(f64) -> Vec<Complex64> + Send + Sync,
    V: Fn(f64) -> Vec<Complex64> + Send + Sync,
{
    pub fn new(dim: usize, point: P, velocity: V) -> Self {
        Self {
            dim,
            point,
            velocity,
            breaks: vec![0.0, 1.0],
        }
    }

    pub fn with_breakpoints(mut self, breaks: Vec<f64>) -> Self {
        self.breaks = breaks;
        self
    }
}

impl<P, V> Curve for FnCurve<P, V>
where
    P: Fn(f64) -> Vec<Complex64> + Send + Sync,
    V: Fn(f64) -> Vec<Complex64> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn point(&self, t: f64) -> Vec<Complex64> {
        (self.point)(t)
    }
    fn velocity(&self, t: f64) -> Vec<Complex64> {
        (self.velocity)(t)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.breaks.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_curve_has_zero_length() {
        let z = BallPoint::real(&[0.3, 0.1]).unwrap();
        let seg = Segment::new(&z, &z).unwrap();
        assert_eq!(curve_length(&seg, &QuadratureSpec::default()).unwrap(), 0.0);
    }

    #[test]
    fn radial_segments_integrate_to_artanh() {
        let spec = QuadratureSpec::default();
        let seg = Segment::new(&BallPoint::origin(1), &BallPoint::real(&[0.5]).unwrap()).unwrap();
        assert!((curve_length(&seg, &spec).unwrap() - 0.549_306_144_334_054_8).abs() < 1e-12);
        let seg = Segment::new(
            &BallPoint::origin(2),
            &BallPoint::real(&[0.5, 0.0]).unwrap(),
        )
        .unwrap();
        assert!((curve_length(&seg, &spec).unwrap() - 0.549_306_144_334_054_8).abs() < 1e-12);
    }

    #[test]
    fn escaping_curve_is_rejected() {
        let curve = FnCurve::new(1, |t| vec![c(1.2 * t, 0.0)], |_| vec![c(1.2, 0.0)]);
        assert!(matches!(
            curve_length(&curve, &QuadratureSpec::default()),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn spline_interpolates_and_differentiates() {
        let knots: Vec<Vec<Complex64>> = (0..6)
            .map(|i| {
                let t = i as f64 / 5.0;
                vec![c(0.5 * t, 0.1 * t * t), c(-0.2 * t, 0.3 * (3.0 * t).sin())]
            })
            .collect();
        let sp = SplineCurve::new(knots.clone()).unwrap();
        for (i, k) in knots.iter().enumerate() {
            let p = sp.point(i as f64 / 5.0);
            assert!(p.iter().zip(k).all(|(a, b)| (a - b).norm() < 1e-14));
        }
        let ts: Vec<f64> = (1..50).map(|i| i as f64 / 50.0 + 0.003).collect();
        assert!(velocity_defect(&sp, &ts, 1e-7) < 1e-6);
    }

    #[test]
    fn geodesic_velocity_matches_finite_difference() {
        let z = BallPoint::new(vec![c(0.2, 0.1), c(-0.3, 0.4)]).unwrap();
        let w = BallPoint::new(vec![c(-0.5, 0.2), c(0.1, -0.1)]).unwrap();
        let g = GeodesicArc::new(&z, &w).unwrap();
        let ts: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
        assert!(velocity_defect(&g, &ts, 1e-6) < 1e-6);
        let end = g.point(1.0);
        assert!(end
            .iter()
            .zip(w.coords())
            .all(|(a, b)| (a - b).norm() < 1e-14));
    }
}
