//! Gradient and second-derivative estimates on the unit disk, with the equality case at the origin.

use bergman_bloch::bloch::{random_normalized_polynomials, PrenormBudget};
use bergman_bloch::verify::{
    check_theorem2, density_derivatives_disk, disk_extremal, Theorem2Options,
};
use num_complex::Complex64;

fn main() -> bergman_bloch::Result<()> {
    let f = disk_extremal();
    for x in [0.0, 0.2, 0.5] {
        let (dz, dzbar) = density_derivatives_disk(&f, Complex64::new(x, 0.1))?;
        println!("z = {x}+0.1i: dD/dz = {dz:.6}, dD/dzbar = {dzbar:.6}");
    }
    let (_, _, f2) = f.derivatives_1d(Complex64::new(0.0, 0.0))?;
    println!(
        "|f''(0)| = {:.12}, 3*sqrt(3)/2 = {:.12}\n",
        f2.norm(),
        1.5 * 3f64.sqrt()
    );

    let maps: Vec<_> = random_normalized_polynomials(1, 6, 4, 9, &PrenormBudget::default())?
        .into_iter()
        .map(|nm| nm.map)
        .collect();
    let r = check_theorem2(
        &maps,
        &Theorem2Options {
            grid: 2500,
            seed: 4,
            ..Default::default()
        },
    )?;
    for (key, value) in &r.details {
        println!("{key:<32} {value:.3e}");
    }
    println!("pass {}", r.pass);
    Ok(())
}
