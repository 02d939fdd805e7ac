//! Certify the sharp Lipschitz bound on random normalized maps and watch the extremal family approach it.

use bergman_bloch::bloch::{constant_m, random_normalized_polynomials, PrenormBudget};
use bergman_bloch::verify::{check_theorem1, sharpness_run, Theorem1Options};

fn main() -> bergman_bloch::Result<()> {
    for n in 1..=2 {
        let maps: Vec<_> =
            random_normalized_polynomials(n, 8, 3, 100 + n as u64, &PrenormBudget::default())?
                .into_iter()
                .map(|nm| nm.map)
                .collect();
        let opts = Theorem1Options {
            pairs: 2000,
            seed: 1,
            ..Default::default()
        };
        let r = check_theorem1(&maps, n, &opts)?;
        println!(
            "n={n}: {} maps, max ratio {:.6} <= M {:.6}, violations {}, pass {}",
            maps.len(),
            r.statistics.max_ratio,
            constant_m(n),
            r.violation_count,
            r.pass
        );
    }

    println!();
    for eps in [0.5, 0.1, 0.01, 0.001] {
        let o = sharpness_run(eps, 1)?;
        println!(
            "eps={eps:<6} m={:.6} ratio {:.9} target {:.9} pass {}",
            o.m, o.ratio, o.target, o.pass
        );
    }
    Ok(())
}
