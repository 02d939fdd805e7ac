//! Seeded streams and low-discrepancy sampling of the ball.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::ball_geometry::{BallPoint, BALL_LIMIT};

/// Independent generator for work item `id`, derived from `seed` by stream splitting.
pub fn stream(seed: u64, id: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

const PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

fn radical_inverse(base: u32, mut i: u64) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut acc = 0.0;
    while i > 0 {
        acc += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    acc
}

/// Halton points in `[0,1)^d` with a seeded Cranley–Patterson shift.
#[derive(Debug, Clone)]
pub struct Halton {
    shift: Vec<f64>,
    index: u64,
}

impl Halton {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "Halton dimension too large");
        let mut rng = stream(seed, 0x4841_4c54);
        Self {
            shift: (0..dim).map(|_| rng.gen::<f64>()).collect(),
            // skip the first points, which are poorly spread
            index: 20,
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn point(&self, i: u64) -> Vec<f64> {
        self.shift
            .iter()
            .zip(PRIMES)
            .map(|(s, p)| (radical_inverse(p, i + self.index) + s).fract())
            .collect()
    }
}

impl Iterator for Halton {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let p = self.point(0);
        self.index += 1;
        Some(p)
    }
}

/// Maps `u ∈ [0,1)^{2n+1}` to the ball of radius `radius` in `C^n`: the first
/// coordinate is inverted through the radial volume law, the rest give a
/// complex Gaussian direction by Box–Muller.
pub fn unit_to_ball(u: &[f64], n: usize, radius: f64) -> BallPoint {
    debug_assert!(u.len() > 2 * n);
    let r = radius.min(BALL_LIMIT) * u[0].powf(1.0 / (2 * n) as f64);
    let dir: Vec<Complex64> = (0..n)
        .map(|k| {
            let u1 = 1.0 - u[1 + 2 * k];
            let u2 = u[2 + 2 * k];
            Complex64::from_polar((-2.0 * u1.ln()).sqrt(), 2.0 * PI * u2)
        })
        .collect();
    let len = dir.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let coords = if len > 0.0 {
        dir.into_iter().map(|c| c * (r / len)).collect()
    } else {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[0] = Complex64::new(r, 0.0);
        v
    };
    BallPoint::new(coords).expect("radius clamped inside the ball")
}

/// `count` quasi-random points of the ball of radius `radius`.
pub fn ball_points(n: usize, count: usize, radius: f64, seed: u64) -> Vec<BallPoint> {
    let h = Halton::new(2 * n + 1, seed);
    (0..count as u64)
        .map(|i| unit_to_ball(&h.point(i), n, radius))
        .collect()
}

/// Uniformly random point of the ball of radius `radius`.
pub fn random_ball_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> BallPoint {
    let u: Vec<f64> = (0..=2 * n).map(|_| rng.gen::<f64>()).collect();
    unit_to_ball(&u, n, radius)
}

/// Points `t·e^{iθ}·e_k` on a polar grid along each coordinate axis.
pub fn axis_grid(n: usize, radii: usize, angles: usize) -> Vec<BallPoint> {
    let mut out = Vec::with_capacity(n * radii * angles + 1);
    out.push(BallPoint::origin(n));
    for k in 0..n {
        for i in 1..=radii {
            let t = 0.995 * i as f64 / radii as f64;
            for j in 0..angles {
                let mut v = vec![Complex64::new(0.0, 0.0); n];
                v[k] = Complex64::from_polar(t, 2.0 * PI * j as f64 / angles as f64);
                out.push(BallPoint::new(v).expect("grid radius below one"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(2, 1), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(2, 3), 0.75);
        assert_eq!(radical_inverse(3, 1), 1.0 / 3.0);
    }

    #[test]
    fn points_fill_the_ball_evenly() {
        let pts = ball_points(2, 20_000, 1.0, 7);
        assert!(pts.iter().all(|p| p.norm() < 1.0));
        // fraction inside radius 1/2 should be (1/2)^4
        let inside = pts.iter().filter(|p| p.norm() < 0.5).count() as f64 / pts.len() as f64;
        assert!((inside - 0.0625).abs() < 0.005, "{inside}");
        // mean of each coordinate near zero
        let mean: Complex64 =
            pts.iter().map(|p| p.coords()[1]).sum::<Complex64>() / pts.len() as f64;
        assert!(mean.norm() < 0.01);
    }

    #[test]
    fn seeded_sequences_are_reproducible() {
        assert_eq!(ball_points(3, 10, 0.9, 42), ball_points(3, 10, 0.9, 42));
        assert_ne!(ball_points(3, 10, 0.9, 42), ball_points(3, 10, 0.9, 43));
        let a: Vec<f64> = (0..4).map(|_| stream(5, 1).gen()).collect();
        let b: Vec<f64> = (0..4).map(|_| stream(5, 2).gen()).collect();
        assert_ne!(a, b);
    }
}
