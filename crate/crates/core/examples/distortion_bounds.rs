//! Jacobian determinant distortion bounds around a point where the determinant is small.

use bergman_bloch::bloch::{
    lemma_c_profile, m_root, random_normalized_polynomials, theorem_d_bounds, BlochParams,
    LemmaCProfile, PrenormBudget,
};
use bergman_bloch::verify::{check_theorem_d, TheoremDOptions};

fn main() -> bergman_bloch::Result<()> {
    let profile = LemmaCProfile::new(BlochParams::unweighted(2)?);
    println!("a0 = {:.10}, k = {}", profile.a0(), profile.k());
    for lambda in [0.1, 0.5, 0.9] {
        let m = m_root(lambda, &profile)?;
        let residual = lemma_c_profile(m, &profile)? - lambda;
        println!("lambda={lambda}: m = {m:.15} (residual {residual:.1e})");
        for r in [0.0, 0.1, 0.3] {
            let b = theorem_d_bounds(lambda, r, &profile)?;
            println!(
                "   r={r}: lower {:>12} upper {:>12}  (valid to {:.4} / {:.4})",
                fmt(b.lower),
                fmt(b.upper),
                b.r_low,
                b.r_high
            );
        }
    }

    let maps: Vec<_> = random_normalized_polynomials(2, 4, 3, 21, &PrenormBudget::default())?
        .into_iter()
        .map(|nm| nm.map)
        .collect();
    let opts = TheoremDOptions {
        samples: 400,
        seed: 2,
        ..Default::default()
    };
    let r = check_theorem_d(
        &[0.25, 0.5, 0.75, 1.0],
        BlochParams::unweighted(2)?,
        &maps,
        &opts,
    )?;
    println!(
        "\nbattery check: {} violations, pass {}",
        r.violation_count, r.pass
    );
    for note in &r.notes {
        println!("  note: {note}");
    }
    Ok(())
}

fn fmt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.6}"))
}
