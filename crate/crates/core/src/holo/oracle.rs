//! Jacobians computed without the per-kind differentiation rules, for validation.

use num_complex::Complex64;

use super::HoloMap;
use crate::ball_geometry::{BallPoint, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Bicomplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleScheme {
    /// Evaluate at `z + h·j·e_k` in bicomplex arithmetic and read off the `j` part.
    #[default]
    ComplexStep,
    /// `(f(z + h e_k) − f(z − h e_k)) / 2h`.
    CentralDifference,
}

/// Column-by-column Jacobian estimate of `f` at `z` with step `h ∈ [1e-30, 1e-6]`.
pub fn oracle_jacobian(
    f: &HoloMap,
    z: &BallPoint,
    h: f64,
    scheme: OracleScheme,
) -> Result<ComplexMatrix> {
    if !(1e-30..=1e-6).contains(&h) {
        return Err(Error::param(
            "h",
            format!("step {h:e} outside [1e-30, 1e-6]"),
        ));
    }
    if 1.0 - z.norm() <= h {
        return Err(Error::OutOfDomain {
            norm: z.norm(),
            limit: 1.0 - h,
        });
    }
    let n = f.dim();
    if z.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: z.dim(),
        });
    }
    let mut jac = ComplexMatrix::zeros(n);
    for k in 0..n {
        let column: Vec<Complex64> = match scheme {
            OracleScheme::ComplexStep => {
                let zb: Vec<Bicomplex> = z
                    .coords()
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| {
                        let step = if i == k {
                            Complex64::new(h, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        Bicomplex::new(c, step)
                    })
                    .collect();
                f.eval_generic(&zb).into_iter().map(|v| v.im / h).collect()
            }
            OracleScheme::CentralDifference => {
                let shifted = |s: f64| -> Vec<Complex64> {
                    let mut v = z.coords().to_vec();
                    v[k] += s;
                    f.eval_generic(&v)
                };
                let ahead = shifted(h);
                let behind = shifted(-h);
                ahead
                    .iter()
                    .zip(&behind)
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect()
            }
        };
        for (j, v) in column.into_iter().enumerate() {
            jac.set(j, k, v);
        }
    }
    Ok(jac)
}

/// `max |exact − oracle| / max(1, max |exact|)`.
pub fn jacobian_deviation(exact: &ComplexMatrix, oracle: &ComplexMatrix) -> f64 {
    exact.max_abs_diff(oracle) / exact.max_abs().max(1.0)
}
