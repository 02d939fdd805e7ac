use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use bergman_bloch::ball_geometry::{
    bergman_distance, bergman_matrix, herm_inner, mobius_auto, mobius_jacobian_det_modulus,
    norm_sqr, pseudo_hyperbolic, Automorphism, BallPoint,
};
use bergman_bloch::bloch::{density, m_root, BlochParams, LemmaCProfile};
use bergman_bloch::holo::{
    compose, jacobian_deviation, oracle_jacobian, text, HoloMap, OracleScheme, PolynomialMap,
};
use bergman_bloch::verify::{lipschitz_ratio, sharpness_run};

fn ball_point(n: usize, max_radius: f64) -> impl Strategy<Value = BallPoint> {
    (
        proptest::collection::vec(-1.0f64..1.0, 2 * n),
        0.0f64..max_radius,
    )
        .prop_filter_map("non-zero direction", move |(v, r)| {
            let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len < 1e-6 {
                return None;
            }
            let scaled: Vec<f64> = v.iter().map(|x| x * r / len).collect();
            BallPoint::from_interleaved(&scaled).ok()
        })
}

fn dim_and_points(count: usize, max_radius: f64) -> impl Strategy<Value = (usize, Vec<BallPoint>)> {
    (1usize..=3).prop_flat_map(move |n| {
        (
            Just(n),
            proptest::collection::vec(ball_point(n, max_radius), count),
        )
    })
}

fn random_poly(n: usize, degree: u32, seed: u64) -> HoloMap {
    HoloMap::Polynomial(PolynomialMap::random(
        n,
        degree,
        &mut ChaCha20Rng::seed_from_u64(seed),
    ))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bergman_matrix_is_hermitian_positive_with_closed_form_det((n, pts) in dim_and_points(1, 0.99)) {
        let z = &pts[0];
        let b = bergman_matrix(z);
        prop_assert!(b.hermitian_defect() < 1e-12 * b.max_abs());
        prop_assert!(b.hermitian_eigenvalues().iter().all(|&e| e > 0.0));
        let expected = z.weight().powi(-(n as i32 + 1));
        prop_assert!((b.determinant().re - expected).abs() <= 1e-9 * expected);
    }

    #[test]
    fn automorphism_is_an_involution_with_norm_identity((_n, pts) in dim_and_points(2, 0.95)) {
        let (a, z) = (&pts[0], &pts[1]);
        let phi = Automorphism::new(a.clone());
        let image = phi.eval(z.coords());
        let back = phi.eval(&image);
        for (x, y) in back.iter().zip(z.coords()) {
            prop_assert!((x - y).norm() < 1e-10);
        }
        let d = Complex64::new(1.0, 0.0) - herm_inner(z.coords(), a.coords()).unwrap();
        let identity = a.weight() * z.weight() / d.norm_sqr();
        prop_assert!((1.0 - norm_sqr(&image) - identity).abs() < 1e-12);
    }

    #[test]
    fn jacobian_modulus_identity((n, pts) in dim_and_points(2, 0.95)) {
        let (a, z) = (&pts[0], &pts[1]);
        let f = mobius_auto(a);
        let det = f.jacobian_det(z).unwrap().norm();
        let closed = mobius_jacobian_det_modulus(a, z).unwrap();
        prop_assert!((det - closed).abs() <= 1e-9 * closed.max(1.0), "n={} {} vs {}", n, det, closed);
    }

    #[test]
    fn distance_is_a_metric((_n, pts) in dim_and_points(3, 0.97)) {
        let (x, y, z) = (&pts[0], &pts[1], &pts[2]);
        let dxy = bergman_distance(x, y).unwrap();
        prop_assert_eq!(bergman_distance(x, x).unwrap(), 0.0);
        prop_assert!((dxy - bergman_distance(y, x).unwrap()).abs() < 1e-9 * dxy.max(1.0));
        let via = bergman_distance(x, z).unwrap() + bergman_distance(z, y).unwrap();
        prop_assert!(dxy <= via + 1e-9);
    }

    #[test]
    fn automorphisms_preserve_distance((_n, pts) in dim_and_points(3, 0.9)) {
        let (a, z, w) = (&pts[0], &pts[1], &pts[2]);
        let phi = Automorphism::new(a.clone());
        let (pz, pw) = (phi.apply(z).unwrap(), phi.apply(w).unwrap());
        let before = pseudo_hyperbolic(z, w).unwrap();
        let after = pseudo_hyperbolic(&pz, &pw).unwrap();
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn chain_rule_for_compositions((n, pts) in dim_and_points(2, 0.9), seed in any::<u64>()) {
        let (a, z) = (&pts[0], &pts[1]);
        let f = random_poly(n, 3, seed);
        let phi = mobius_auto(a);
        let g = compose(&f, &phi).unwrap();
        let inner = phi.jacobian(z).unwrap();
        let outer = f.jacobian(&phi.apply_point(z)).unwrap();
        let expected = outer.matmul(&inner);
        prop_assert!(jacobian_deviation(&expected, &g.jacobian(z).unwrap()) < 1e-10);
    }

    #[test]
    fn exact_jacobian_matches_complex_step((n, pts) in dim_and_points(1, 0.95), seed in any::<u64>()) {
        let f = random_poly(n, 4, seed);
        let exact = f.jacobian(&pts[0]).unwrap();
        let oracle = oracle_jacobian(&f, &pts[0], 1e-20, OracleScheme::ComplexStep).unwrap();
        prop_assert!(jacobian_deviation(&exact, &oracle) < 1e-12);
    }

    #[test]
    fn density_is_invariant_under_automorphisms((n, pts) in dim_and_points(2, 0.9), seed in any::<u64>()) {
        let (a, z) = (&pts[0], &pts[1]);
        let p = BlochParams::unweighted(n).unwrap();
        let f = random_poly(n, 3, seed);
        let phi = mobius_auto(a);
        let g = compose(&f, &phi).unwrap();
        let lhs = density(&g, z, &p).unwrap();
        let rhs = density(&f, &phi.apply_point(z), &p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn lipschitz_ratio_reduces_to_the_origin((n, pts) in dim_and_points(2, 0.9), seed in any::<u64>()) {
        let (z1, z2) = (&pts[0], &pts[1]);
        prop_assume!(pseudo_hyperbolic(z1, z2).unwrap() > 1e-6);
        let f = random_poly(n, 3, seed);
        let phi = mobius_auto(z1);
        let g = compose(&f, &phi).unwrap();
        let direct = lipschitz_ratio(&f, z1, z2, n).unwrap();
        let reduced = lipschitz_ratio(&g, &BallPoint::origin(n), &phi.apply_point(z2), n).unwrap();
        prop_assert!((direct - reduced).abs() <= 1e-9 * direct.max(1e-3), "{} vs {}", direct, reduced);
    }

    #[test]
    fn root_is_monotone_in_lambda(l1 in 0.01f64..1.0, l2 in 0.01f64..1.0, n in 1usize..=3, alpha in 0.5f64..3.0) {
        let profile = LemmaCProfile::new(BlochParams::new(n, alpha).unwrap());
        let (lo, hi) = if l1 < l2 { (l1, l2) } else { (l2, l1) };
        prop_assert!(m_root(lo, &profile).unwrap() <= m_root(hi, &profile).unwrap());
    }

    #[test]
    fn sharpness_improves_as_eps_shrinks(e1 in 0.001f64..0.5, e2 in 0.001f64..0.5, n in 1usize..=3) {
        let (small, large) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let a = sharpness_run(small, n).unwrap();
        let b = sharpness_run(large, n).unwrap();
        prop_assert!(a.pass && b.pass);
        prop_assert!(a.ratio >= b.ratio - 1e-12);
    }

    #[test]
    fn text_round_trip(n in 1usize..=3, seed in any::<u64>()) {
        let f = random_poly(n, 2, seed);
        let parsed = text::parse_map(&text::to_text(&f)).unwrap();
        prop_assert_eq!(parsed, f);
    }
}

trait ApplyPoint {
    fn apply_point(&self, z: &BallPoint) -> BallPoint;
}

impl ApplyPoint for HoloMap {
    fn apply_point(&self, z: &BallPoint) -> BallPoint {
        BallPoint::new(self.eval(z).unwrap()).unwrap()
    }
}
