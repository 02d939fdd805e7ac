//! Complex-ball primitives: inner products, the Bergman matrix, Möbius
//! automorphisms, pseudo-hyperbolic and Bergman distances, curve lengths and
//! geodesic minimization.

mod curve;
mod geodesic;
mod matrix;
mod mobius;
mod point;
mod quadrature;

pub use curve::{curve_length, velocity_defect, Curve, FnCurve, GeodesicArc, Segment, SplineCurve};
pub use geodesic::{geodesic_infimum, CurveFamily, GeodesicBudget, GeodesicResult};
pub use matrix::ComplexMatrix;
pub use mobius::{
    bergman_distance, bergman_matrix, bergman_quadratic_form, mobius_auto,
    mobius_jacobian_det_modulus, pseudo_hyperbolic, Automorphism,
};
pub use point::{herm_inner, norm, norm_sqr, BallPoint, BALL_LIMIT};
pub use quadrature::{gauss_legendre, integrate, QuadratureMethod, QuadratureSpec, GAUSS_ORDER};
