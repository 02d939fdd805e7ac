//! Holomorphic maps of the ball into `C^n` with exact Jacobians: polynomials,
//! the extremal family, automorphisms, compositions, diagonal stacks, and
//! row rotations.

mod extremal;
mod map;
mod oracle;
mod poly;
pub mod text;

pub use extremal::ExtremalMap;
pub use map::{
    check_self_map, compose, rotate_to_positive_det, HoloMap, PositiveDet, RANGE_CHECK_SAMPLES,
};
pub use oracle::{jacobian_deviation, oracle_jacobian, OracleScheme};
pub use poly::{monomials, PolynomialMap, Term};

/// The extremal map `f_λ` with parameter `m`.
pub fn extremal_map(m: f64, n: usize) -> crate::Result<HoloMap> {
    HoloMap::extremal(m, n)
}
