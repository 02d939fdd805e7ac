//! Pseudo-hyperbolic and Bergman distances, automorphisms, and arc length along the geodesic.

use bergman_bloch::ball_geometry::{
    bergman_distance, bergman_matrix, curve_length, pseudo_hyperbolic, Automorphism, BallPoint,
    GeodesicArc, QuadratureSpec,
};
use num_complex::Complex64;

fn main() -> bergman_bloch::Result<()> {
    let c = Complex64::new;
    let z = BallPoint::new(vec![c(0.3, 0.1), c(-0.2, 0.4)])?;
    let w = BallPoint::new(vec![c(-0.5, 0.2), c(0.1, -0.6)])?;

    let rho = pseudo_hyperbolic(&z, &w)?;
    let beta = bergman_distance(&z, &w)?;
    println!("rho(z, w)  = {rho:.12}");
    println!(
        "beta(z, w) = {beta:.12}  (artanh rho = {:.12})",
        rho.atanh()
    );

    let arc = GeodesicArc::new(&z, &w)?;
    let len = curve_length(&arc, &QuadratureSpec::default())?;
    println!(
        "geodesic length = {len:.12}, deviation {:.1e}",
        (len - beta).abs()
    );

    let phi = Automorphism::new(z.clone());
    let (pz, pw) = (phi.apply(&z)?, phi.apply(&w)?);
    println!("|phi_z(z)| = {:.1e}", pz.norm());
    println!("beta after phi_z = {:.12}", bergman_distance(&pz, &pw)?);

    let b = bergman_matrix(&z);
    println!(
        "det B(z) = {:.9}, (1-|z|^2)^-3 = {:.9}",
        b.determinant().re,
        z.weight().powi(-3)
    );
    Ok(())
}
