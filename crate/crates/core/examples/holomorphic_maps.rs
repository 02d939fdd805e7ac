//! Build maps, write them in the text format, and check exact Jacobians against complex-step differentiation.

use bergman_bloch::ball_geometry::{mobius_auto, BallPoint};
use bergman_bloch::holo::{
    compose, extremal_map, jacobian_deviation, oracle_jacobian, text, HoloMap, OracleScheme,
    PolynomialMap,
};
use bergman_bloch::sampling::{random_ball_point, stream};
use num_complex::Complex64;

fn main() -> bergman_bloch::Result<()> {
    let mut rng = stream(11, 0);
    let poly = HoloMap::Polynomial(PolynomialMap::random(2, 2, &mut rng));
    let auto = mobius_auto(&BallPoint::new(vec![
        Complex64::new(0.2, 0.1),
        Complex64::new(0.0, -0.3),
    ])?);
    let maps = [
        poly.clone(),
        extremal_map(0.4, 2)?,
        compose(&poly, &auto)?,
        text::parse_map("rotate(factor=[0, 1], row=0) { extremal(n=2, m=0.25) }")?,
    ];

    for f in &maps {
        let line = text::to_text(f);
        assert_eq!(&text::parse_map(&line)?, f);
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let z = random_ball_point(&mut rng, 2, 0.95);
            let exact = f.jacobian(&z)?;
            let oracle = oracle_jacobian(f, &z, 1e-20, OracleScheme::ComplexStep)?;
            worst = worst.max(jacobian_deviation(&exact, &oracle));
        }
        println!("{:<12} max deviation {worst:.1e}", f.kind_name());
        println!(
            "  {} lines of text, first: {}",
            line.lines().count(),
            line.lines().next().unwrap_or("")
        );
    }
    Ok(())
}
