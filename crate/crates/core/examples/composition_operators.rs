//! Lower bounds for composition operators: the hypothesis scan and the resulting prenorm comparison.

use bergman_bloch::ball_geometry::{mobius_auto, BallPoint};
use bergman_bloch::bloch::{random_normalized_polynomials, PrenormBudget};
use bergman_bloch::holo::{text, HoloMap};
use bergman_bloch::verify::{
    check_theorem3, hypothesis_scan, k_constant, r_cap, tau, HypothesisBudget, Theorem3Options,
};
use num_complex::Complex64;

fn main() -> bergman_bloch::Result<()> {
    let (r, eps) = (0.1, 0.5);
    println!(
        "k(1, {r}, {eps}) = {:.6}, radius cap {:.6}",
        k_constant(1, r, eps)?,
        r_cap(1)
    );

    let maps: Vec<_> = random_normalized_polynomials(1, 4, 3, 31, &PrenormBudget::default())?
        .into_iter()
        .map(|nm| nm.map)
        .collect();
    let symbols: Vec<(&str, HoloMap)> = vec![
        (
            "automorphism",
            mobius_auto(&BallPoint::new(vec![Complex64::from_polar(0.6, 0.4)])?),
        ),
        (
            "half scale",
            text::parse_map("scale(factor=[0.5, 0]) { identity(n=1) }")?,
        ),
    ];
    for (name, phi) in &symbols {
        let z = BallPoint::new(vec![Complex64::new(0.2, -0.3)])?;
        let hyp = hypothesis_scan(phi, 100, &HypothesisBudget::default(), 1)?;
        println!(
            "{name}: tau(z) = {:.6}, attained r {:.2e}, attained eps {:.4}, hypothesis {}",
            tau(phi, &z)?,
            hyp.r_attained,
            hyp.eps_attained,
            hyp.satisfies(r, eps)
        );
        let report = check_theorem3(
            phi,
            r,
            eps,
            &maps,
            &Theorem3Options {
                wgrid: 100,
                seed: 1,
                ..Default::default()
            },
        )?;
        println!("   applicable {}, pass {}", report.applicable, report.pass);
    }
    Ok(())
}
