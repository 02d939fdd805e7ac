use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::ball_geometry::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `coef · z^powers`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: Complex64,
    pub powers: Vec<u32>,
}

/// Polynomial map `C^n → C^n`, one term list per output component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialMap {
    n: usize,
    components: Vec<Vec<Term>>,
}

/// Exponent vectors of `n` variables with total degree at most `degree`, graded.
pub fn monomials(n: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), n, degree, &mut out);
    out.sort_by_key(|p| (p.iter().sum::<u32>(), std::cmp::Reverse(p.clone())));
    out
}

impl PolynomialMap {
    pub fn new(n: usize, components: Vec<Vec<Term>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "dimension must be at least 1"));
        }
        if components.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: components.len(),
            });
        }
        for term in components.iter().flatten() {
            if term.powers.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: term.powers.len(),
                });
            }
        }
        Ok(Self { n, components })
    }

    pub fn identity(n: usize) -> Self {
        let components = (0..n)
            .map(|k| {
                let mut powers = vec![0; n];
                powers[k] = 1;
                vec![Term {
                    coef: Complex64::new(1.0, 0.0),
                    powers,
                }]
            })
            .collect();
        Self { n, components }
    }

    /// `z ↦ M z`.
    pub fn linear(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let components = (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&k| m.get(j, k) != Complex64::new(0.0, 0.0))
                    .map(|k| {
                        let mut powers = vec![0; n];
                        powers[k] = 1;
                        Term {
                            coef: m.get(j, k),
                            powers,
                        }
                    })
                    .collect()
            })
            .collect();
        Self { n, components }
    }

    /// Single-variable polynomial `Σ coeffs[k] z^k`.
    pub fn univariate(coeffs: &[Complex64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(k, &coef)| Term {
                coef,
                powers: vec![k as u32],
            })
            .collect();
        Self {
            n: 1,
            components: vec![terms],
        }
    }

    /// Every monomial of total degree `≤ degree` in every component, with
    /// coefficients drawn from the standard complex Gaussian.
    pub fn random<R: Rng + ?Sized>(n: usize, degree: u32, rng: &mut R) -> Self {
        let monos = monomials(n, degree);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let components = (0..n)
            .map(|_| {
                monos
                    .iter()
                    .map(|p| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Term {
                            coef: Complex64::new(re * s, im * s),
                            powers: p.clone(),
                        }
                    })
                    .collect()
            })
            .collect();
        Self { n, components }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Vec<Term>] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .flatten()
            .map(|t| t.powers.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        for t in self.components.iter_mut().flatten() {
            t.coef *= c;
        }
        self
    }

    /// The matrix of a homogeneous linear map, if this is one.
    pub fn as_linear(&self) -> Option<ComplexMatrix> {
        let mut m = ComplexMatrix::zeros(self.n);
        for (j, comp) in self.components.iter().enumerate() {
            for t in comp {
                if t.coef == Complex64::new(0.0, 0.0) {
                    continue;
                }
                if t.powers.iter().sum::<u32>() != 1 {
                    return None;
                }
                let k = t.powers.iter().position(|&e| e == 1)?;
                m.set(j, k, m.get(j, k) + t.coef);
            }
        }
        Some(m)
    }

    fn powers_table<T: Scalar>(&self, z: &[T]) -> Vec<Vec<T>> {
        let d = self.degree() as usize;
        z.iter()
            .map(|&x| {
                let mut row = Vec::with_capacity(d + 1);
                let mut acc = T::one();
                for _ in 0..=d {
                    row.push(acc);
                    acc *= x;
                }
                row
            })
            .collect()
    }

    pub fn eval_generic<T: Scalar>(&self, z: &[T]) -> Vec<T> {
        let table = self.powers_table(z);
        self.components
            .iter()
            .map(|comp| {
                let mut acc = T::zero();
                for t in comp {
                    let mut m = T::from(t.coef);
                    for (k, &e) in t.powers.iter().enumerate() {
                        if e > 0 {
                            m *= table[k][e as usize];
                        }
                    }
                    acc += m;
                }
                acc
            })
            .collect()
    }

    pub fn jacobian(&self, z: &[Complex64]) -> ComplexMatrix {
        let table = self.powers_table(z);
        let mut jac = ComplexMatrix::zeros(self.n);
        for (j, comp) in self.components.iter().enumerate() {
            for t in comp {
                for k in 0..self.n {
                    let ek = t.powers[k];
                    if ek == 0 {
                        continue;
                    }
                    let mut m = t.coef * ek as f64;
                    for (i, &e) in t.powers.iter().enumerate() {
                        let e = if i == k { e - 1 } else { e };
                        if e > 0 {
                            m *= table[i][e as usize];
                        }
                    }
                    jac.set(j, k, jac.get(j, k) + m);
                }
            }
        }
        jac
    }

    /// `(p, p′, p″)` of a one-variable polynomial.
    pub fn derivatives_1d(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut f, mut d1, mut d2) = (zero, zero, zero);
        for t in &self.components[0] {
            let e = t.powers[0] as i32;
            f += t.coef * z.powi(e);
            if e >= 1 {
                d1 += t.coef * e as f64 * z.powi(e - 1);
            }
            if e >= 2 {
                d2 += t.coef * (e * (e - 1)) as f64 * z.powi(e - 2);
            }
        }
        (f, d1, d2)
    }
}
