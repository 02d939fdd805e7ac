//! Minimize Bergman length over spline and polyline curves and compare with the closed-form distance.

use bergman_bloch::ball_geometry::{
    bergman_distance, geodesic_infimum, CurveFamily, GeodesicBudget,
};
use bergman_bloch::sampling::{random_ball_point, stream};

fn main() -> bergman_bloch::Result<()> {
    let mut rng = stream(7, 0);
    for _ in 0..4 {
        let z = random_ball_point(&mut rng, 2, 0.9);
        let w = random_ball_point(&mut rng, 2, 0.9);
        let d = bergman_distance(&z, &w)?;
        for family in [
            CurveFamily::Polyline { interior: 6 },
            CurveFamily::Spline { interior: 8 },
        ] {
            let res = geodesic_infimum(&z, &w, family, GeodesicBudget::default())?;
            println!(
                "{family:?}: length {:.8} vs {d:.8}, rel gap {:.2e}, {} iterations",
                res.length,
                (res.length - d) / d,
                res.iterations
            );
        }
    }
    Ok(())
}
