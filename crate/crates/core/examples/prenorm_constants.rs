//! Estimate the Bloch-type prenorm of a few maps and print the sharp constants.

use bergman_bloch::bloch::{
    a0, constant_m, normalize, prenorm, BlochParams, PrenormBudget, PRIOR_DISK_CONSTANT,
};
use bergman_bloch::holo::{extremal_map, HoloMap, PolynomialMap};
use bergman_bloch::sampling::stream;

fn main() -> bergman_bloch::Result<()> {
    for n in 1..=4 {
        println!("n={n}: M = {:.10}, a0 = {:.10}", constant_m(n), a0(1.0, n));
    }
    println!("previous disk constant {PRIOR_DISK_CONSTANT}\n");

    let budget = PrenormBudget::default();
    for n in 1..=3 {
        let p = BlochParams::unweighted(n)?;
        let identity = prenorm(&HoloMap::identity(n), &p, &budget, 1)?;
        let ext = prenorm(&extremal_map(0.3, n)?, &p, &budget, 1)?;
        println!(
            "n={n}: identity {:.9}, extremal(0.3) {:.9}",
            identity.value, ext.value
        );

        let f = HoloMap::Polynomial(PolynomialMap::random(n, 3, &mut stream(5, n as u64)));
        let nm = normalize(&f, &p, &budget, 2)?;
        println!(
            "       random cubic: raw prenorm {:.6}, factor {:.6}, argmax |z| = {:.4}",
            nm.estimate.value,
            nm.factor,
            nm.estimate.arg.norm()
        );
    }

    let weighted = BlochParams::new(2, 2.0)?;
    let w = prenorm(&HoloMap::identity(2), &weighted, &budget, 3)?;
    println!("\nalpha=2, n=2 identity prenorm {:.9}", w.value);
    Ok(())
}
