use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::extremal::ExtremalMap;
use super::poly::PolynomialMap;
use crate::ball_geometry::{norm_sqr, Automorphism, BallPoint, ComplexMatrix, BALL_LIMIT};
use crate::error::{Error, Result};
use crate::sampling::ball_points;
use crate::scalar::Scalar;

/// Quasi-random points used to sample-check that an inner map sends the ball into itself.
pub const RANGE_CHECK_SAMPLES: usize = 10_000;
const RANGE_CHECK_SEED: u64 = 0x5241_4e47_4543_484b;

/// Holomorphic maps `B^n → C^n` built from a small closed algebra, each kind
/// with an exact differentiation rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HoloMap {
    Polynomial(PolynomialMap),
    Extremal(ExtremalMap),
    Automorphism(Automorphism),
    /// `maps[0] ∘ maps[1] ∘ … ∘ maps[k−1]`; evaluation runs from the last entry.
    Composition {
        maps: Vec<HoloMap>,
    },
    /// Block-diagonal direct sum acting on consecutive coordinate blocks.
    Stack {
        blocks: Vec<HoloMap>,
    },
    /// Multiplies output component `row` by the unit complex `factor`.
    Rotation {
        factor: Complex64,
        row: usize,
        inner: Box<HoloMap>,
    },
    /// Multiplies every output component by `factor`.
    Scaled {
        factor: Complex64,
        inner: Box<HoloMap>,
    },
}

impl HoloMap {
    pub fn identity(n: usize) -> Self {
        HoloMap::Polynomial(PolynomialMap::identity(n))
    }

    pub fn extremal(m: f64, n: usize) -> Result<Self> {
        Ok(HoloMap::Extremal(ExtremalMap::new(m, n)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            HoloMap::Polynomial(p) => p.dim(),
            HoloMap::Extremal(e) => e.dim(),
            HoloMap::Automorphism(a) => a.dim(),
            HoloMap::Composition { maps } => maps[0].dim(),
            HoloMap::Stack { blocks } => blocks.iter().map(HoloMap::dim).sum(),
            HoloMap::Rotation { inner, .. } | HoloMap::Scaled { inner, .. } => inner.dim(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            HoloMap::Polynomial(_) => "poly",
            HoloMap::Extremal(_) => "extremal",
            HoloMap::Automorphism(_) => "auto",
            HoloMap::Composition { .. } => "compose",
            HoloMap::Stack { .. } => "stack",
            HoloMap::Rotation { .. } => "rotate",
            HoloMap::Scaled { .. } => "scale",
        }
    }

    /// Checks internal consistency: dimensions of children and rotation rows.
    pub fn validate(&self) -> Result<()> {
        match self {
            HoloMap::Composition { maps } => {
                if maps.is_empty() {
                    return Err(Error::param("compose", "needs at least one map"));
                }
                let n = maps[0].dim();
                for m in maps {
                    m.validate()?;
                    if m.dim() != n {
                        return Err(Error::DimensionMismatch {
                            expected: n,
                            got: m.dim(),
                        });
                    }
                }
            }
            HoloMap::Stack { blocks } => {
                if blocks.is_empty() {
                    return Err(Error::param("stack", "needs at least one block"));
                }
                for b in blocks {
                    b.validate()?;
                }
            }
            HoloMap::Rotation { factor, row, inner } => {
                inner.validate()?;
                if *row >= inner.dim() {
                    return Err(Error::param("row", format!("row {row} out of range")));
                }
                if (factor.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::param(
                        "factor",
                        "rotation factor must have unit modulus",
                    ));
                }
            }
            HoloMap::Scaled { factor, inner } => {
                inner.validate()?;
                if !(factor.norm() > 0.0) {
                    return Err(Error::param("factor", "scale factor must be nonzero"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Evaluation over any scalar field, without domain checks.
    pub fn eval_generic<T: Scalar>(&self, z: &[T]) -> Vec<T> {
        match self {
            HoloMap::Polynomial(p) => p.eval_generic(z),
            HoloMap::Extremal(e) => e.eval_generic(z),
            HoloMap::Automorphism(a) => a.eval_generic(z),
            HoloMap::Composition { maps } => maps
                .iter()
                .rev()
                .fold(z.to_vec(), |acc, m| m.eval_generic(&acc)),
            HoloMap::Stack { blocks } => {
                let mut out = Vec::with_capacity(z.len());
                let mut offset = 0;
                for b in blocks {
                    let d = b.dim();
                    out.extend(b.eval_generic(&z[offset..offset + d]));
                    offset += d;
                }
                out
            }
            HoloMap::Rotation { factor, row, inner } => {
                let mut v = inner.eval_generic(z);
                v[*row] = v[*row].scale(*factor);
                v
            }
            HoloMap::Scaled { factor, inner } => inner
                .eval_generic(z)
                .into_iter()
                .map(|x| x.scale(*factor))
                .collect(),
        }
    }

    fn check_input(&self, z: &BallPoint) -> Result<()> {
        if z.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: z.dim(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, z: &BallPoint) -> Result<Vec<Complex64>> {
        self.check_input(z)?;
        Ok(self.value_and_jacobian(z.coords(), false)?.0)
    }

    /// Exact holomorphic Jacobian `f′(z)`.
    pub fn jacobian(&self, z: &BallPoint) -> Result<ComplexMatrix> {
        self.check_input(z)?;
        Ok(self.value_and_jacobian(z.coords(), true)?.1)
    }

    pub fn jacobian_det(&self, z: &BallPoint) -> Result<Complex64> {
        Ok(self.jacobian(z)?.determinant())
    }

    /// Value and (when `want_jac`) Jacobian, checking that every inner map of
    /// a composition keeps its image inside the ball.
    fn value_and_jacobian(
        &self,
        z: &[Complex64],
        want_jac: bool,
    ) -> Result<(Vec<Complex64>, ComplexMatrix)> {
        let n = z.len();
        let empty = || ComplexMatrix::zeros(0);
        Ok(match self {
            HoloMap::Polynomial(p) => (
                p.eval_generic(z),
                if want_jac { p.jacobian(z) } else { empty() },
            ),
            HoloMap::Extremal(e) => {
                let jac = if want_jac {
                    let mut j = ComplexMatrix::identity(n);
                    j.set(0, 0, e.first_derivative(z[0]));
                    j
                } else {
                    empty()
                };
                (e.eval_generic(z), jac)
            }
            HoloMap::Automorphism(a) => (a.eval(z), if want_jac { a.jacobian(z) } else { empty() }),
            HoloMap::Composition { maps } => {
                let mut value = z.to_vec();
                let mut jac = if want_jac {
                    ComplexMatrix::identity(n)
                } else {
                    empty()
                };
                let last = maps.len() - 1;
                for (idx, m) in maps.iter().enumerate().rev() {
                    let (v, j) = m.value_and_jacobian(&value, want_jac)?;
                    if idx > 0 {
                        let r2 = norm_sqr(&v);
                        if !(r2 <= BALL_LIMIT * BALL_LIMIT) {
                            return Err(Error::RangeViolation {
                                child: format!(
                                    "compose child {idx} ({}) of {}",
                                    m.kind_name(),
                                    last + 1
                                ),
                                witness: z.to_vec(),
                                image_norm: r2.sqrt(),
                            });
                        }
                    }
                    if want_jac {
                        jac = j.matmul(&jac);
                    }
                    value = v;
                }
                (value, jac)
            }
            HoloMap::Stack { blocks } => {
                let mut value = Vec::with_capacity(n);
                let mut jac = if want_jac {
                    ComplexMatrix::zeros(n)
                } else {
                    empty()
                };
                let mut offset = 0;
                for b in blocks {
                    let d = b.dim();
                    let (v, j) = b.value_and_jacobian(&z[offset..offset + d], want_jac)?;
                    value.extend(v);
                    if want_jac {
                        for r in 0..d {
                            for c in 0..d {
                                jac.set(offset + r, offset + c, j.get(r, c));
                            }
                        }
                    }
                    offset += d;
                }
                (value, jac)
            }
            HoloMap::Rotation { factor, row, inner } => {
                let (mut v, mut j) = inner.value_and_jacobian(z, want_jac)?;
                v[*row] *= factor;
                if want_jac {
                    j.scale_row(*row, *factor);
                }
                (v, j)
            }
            HoloMap::Scaled { factor, inner } => {
                let (v, mut j) = inner.value_and_jacobian(z, want_jac)?;
                if want_jac {
                    j.scale(*factor);
                }
                (v.into_iter().map(|x| x * factor).collect(), j)
            }
        })
    }

    /// `(f(z), f′(z), f″(z))` for maps of the disk.
    pub fn derivatives_1d(&self, z: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
        if self.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: self.dim(),
            });
        }
        let one = Complex64::new(1.0, 0.0);
        Ok(match self {
            HoloMap::Polynomial(p) => p.derivatives_1d(z),
            HoloMap::Extremal(e) => (
                e.first_component(z),
                e.first_derivative(z),
                e.second_derivative(z),
            ),
            HoloMap::Automorphism(a) => {
                // (a − z)/(1 − ā z)
                let a = a.anchor().coords()[0];
                let d = one - a.conj() * z;
                let k = a.norm_sqr() - 1.0;
                ((a - z) / d, k / (d * d), a.conj() * (2.0 * k) / (d * d * d))
            }
            HoloMap::Composition { maps } => {
                let (mut f, mut d1, mut d2) = (z, one, Complex64::new(0.0, 0.0));
                for (idx, m) in maps.iter().enumerate().rev() {
                    let (g, g1, g2) = m.derivatives_1d(f)?;
                    if idx > 0 && !(g.norm() <= BALL_LIMIT) {
                        return Err(Error::RangeViolation {
                            child: format!("compose child {idx} ({})", m.kind_name()),
                            witness: vec![z],
                            image_norm: g.norm(),
                        });
                    }
                    d2 = g2 * d1 * d1 + g1 * d2;
                    d1 *= g1;
                    f = g;
                }
                (f, d1, d2)
            }
            HoloMap::Stack { blocks } => blocks[0].derivatives_1d(z)?,
            HoloMap::Rotation { factor, inner, .. } | HoloMap::Scaled { factor, inner } => {
                let (f, d1, d2) = inner.derivatives_1d(z)?;
                (f * factor, d1 * factor, d2 * factor)
            }
        })
    }

    /// A point `z` with `f(z) = w` when one is cheaply available
    /// (automorphisms, invertible linear maps, and their combinations).
    pub fn inverse_hint(&self, w: &[Complex64]) -> Option<Vec<Complex64>> {
        match self {
            HoloMap::Automorphism(a) => Some(a.eval(w)),
            HoloMap::Polynomial(p) => {
                let m = p.as_linear()?;
                let lu = m.as_inner().clone().lu();
                let sol = lu.solve(&nalgebra::DVector::from_column_slice(w))?;
                Some(sol.iter().copied().collect())
            }
            HoloMap::Composition { maps } => maps
                .iter()
                .try_fold(w.to_vec(), |acc, m| m.inverse_hint(&acc)),
            HoloMap::Stack { blocks } => {
                let mut out = Vec::with_capacity(w.len());
                let mut offset = 0;
                for b in blocks {
                    let d = b.dim();
                    out.extend(b.inverse_hint(&w[offset..offset + d])?);
                    offset += d;
                }
                Some(out)
            }
            HoloMap::Rotation { factor, row, inner } => {
                let mut v = w.to_vec();
                v[*row] /= factor;
                inner.inverse_hint(&v)
            }
            HoloMap::Scaled { factor, inner } => {
                inner.inverse_hint(&w.iter().map(|x| x / factor).collect::<Vec<_>>())
            }
            HoloMap::Extremal(_) => None,
        }
    }

    /// `c · f`, folded into the coefficients when `f` is a polynomial.
    pub fn scaled(self, c: Complex64) -> Self {
        match self {
            HoloMap::Polynomial(p) => HoloMap::Polynomial(p.scaled(c)),
            HoloMap::Scaled { factor, inner } => HoloMap::Scaled {
                factor: factor * c,
                inner,
            },
            other => HoloMap::Scaled {
                factor: c,
                inner: Box::new(other),
            },
        }
    }
}

/// Sample-checks that `phi` sends the ball into itself.
pub fn check_self_map(phi: &HoloMap) -> Result<()> {
    let n = phi.dim();
    for z in ball_points(n, RANGE_CHECK_SAMPLES, BALL_LIMIT, RANGE_CHECK_SEED)
        .into_iter()
        .chain(std::iter::once(BallPoint::origin(n)))
    {
        let v = phi.eval(&z)?;
        let r = norm_sqr(&v).sqrt();
        if !(r <= BALL_LIMIT) {
            return Err(Error::RangeViolation {
                child: phi.kind_name().to_string(),
                witness: z.into_coords(),
                image_norm: r,
            });
        }
    }
    Ok(())
}

/// The pre-composition `C_φ f = f ∘ φ`, after sample-checking that `φ` is a self-map.
pub fn compose(f: &HoloMap, phi: &HoloMap) -> Result<HoloMap> {
    if f.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: phi.dim(),
        });
    }
    check_self_map(phi)?;
    let mut maps = match f {
        HoloMap::Composition { maps } => maps.clone(),
        other => vec![other.clone()],
    };
    match phi {
        HoloMap::Composition { maps: inner } => maps.extend(inner.iter().cloned()),
        other => maps.push(other.clone()),
    }
    Ok(HoloMap::Composition { maps })
}

/// Rotation extracted from `det f′(0) = λ e^{iθ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveDet {
    pub map: HoloMap,
    pub lambda: f64,
    pub theta: f64,
}

/// Multiplies the first component by `e^{−iθ}` so that `det f′(0) = λ > 0`.
///
/// Fails with [`Error::Degenerate`] when `det f′(0) = 0`.
pub fn rotate_to_positive_det(f: &HoloMap) -> Result<PositiveDet> {
    let det = f.jacobian_det(&BallPoint::origin(f.dim()))?;
    let lambda = det.norm();
    if lambda == 0.0 {
        return Err(Error::Degenerate("det f'(0) = 0".into()));
    }
    let mut theta = det.arg();
    if theta < 0.0 {
        theta += std::f64::consts::TAU;
    }
    if theta == 0.0 {
        return Ok(PositiveDet {
            map: f.clone(),
            lambda,
            theta,
        });
    }
    Ok(PositiveDet {
        map: HoloMap::Rotation {
            factor: Complex64::from_polar(1.0, -theta),
            row: 0,
            inner: Box::new(f.clone()),
        },
        lambda,
        theta,
    })
}
