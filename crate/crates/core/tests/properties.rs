mod common;

use std::path::Path;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{g_quadrature, random_monotone_params, random_params, threshold_h0, Quadrant};
use stefan_thaw::equivalence::round_trip;
use stefan_thaw::special_functions::{erfcx, g2_eval, g_eval, rhs_eval, ConvectiveLhs};
use stefan_thaw::{
    reduce, solve_xi, ConvectiveSolution, Error, PhysicalParams, ReduceOptions, SolveOptions,
};

fn monotone(seed: u64) -> PhysicalParams {
    random_monotone_params(&mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn g_matches_quadrature(p in -2.0f64..3.0, y in 1e-3f64..4.0) {
        let lib = g_eval(p, y).unwrap().value;
        let q = g_quadrature(p, y);
        prop_assert!(((lib - q) / q).abs() <= 1e-10, "p={p} y={y}: {lib} vs {q}");
    }

    #[test]
    fn g_increases_with_y_for_nonnegative_p(p in 0.0f64..3.0, y in 1e-3f64..4.0, dy in 1e-3f64..1.0) {
        prop_assert!(g_eval(p, y + dy).unwrap().value > g_eval(p, y).unwrap().value);
    }

    #[test]
    fn g2_is_reciprocal_erfcx_and_increasing(y in 1e-3f64..40.0, gamma0 in 0.1f64..3.0) {
        let a = g2_eval(y, gamma0).unwrap().value;
        prop_assert!((a * erfcx(gamma0 * y) - 1.0).abs() <= 1e-14);
        prop_assert!(g2_eval(1.01 * y, gamma0).unwrap().value > a);
    }

    #[test]
    fn roots_satisfy_front_equation(seed in any::<u64>(), q in 0usize..4) {
        let phys = random_params(&mut ChaCha8Rng::seed_from_u64(seed), Quadrant::ALL[q]);
        let d = reduce(&phys, ReduceOptions::strict()).unwrap();
        let lhs = ConvectiveLhs::from_params(&d).unwrap();
        match solve_xi(&d, &SolveOptions::default()) {
            Ok((roots, _)) => {
                for &xi in &roots.roots {
                    let r = lhs.eval(xi).unwrap().value - rhs_eval(d.n_par, xi).unwrap();
                    prop_assert!(r.abs() <= 1e-10, "residual {r} at {xi}");
                }
            }
            Err(Error::NoRootFound { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn front_unique_and_increasing_in_h0(seed in any::<u64>(), bump in 1.01f64..10.0) {
        let phys = monotone(seed);
        let d = reduce(&phys, ReduceOptions::strict()).unwrap();
        let (roots, _) = solve_xi(&d, &SolveOptions::default()).unwrap();
        let bound = d.interface_bound().unwrap();
        prop_assert_eq!(roots.in_range(0.0, bound).len(), 1);
        let mut higher = phys.clone();
        higher.h0 = Some(phys.h0.unwrap() * bump);
        let d2 = reduce(&higher, ReduceOptions::strict()).unwrap();
        let (r2, _) = solve_xi(&d2, &SolveOptions::default()).unwrap();
        prop_assert!(r2.principal().unwrap() > roots.principal().unwrap());
    }

    #[test]
    fn below_threshold_has_no_root_in_range(seed in any::<u64>(), f in 0.05f64..0.95) {
        let mut phys = monotone(seed);
        phys.h0 = Some(threshold_h0(&phys) * f);
        let d = reduce(&phys, ReduceOptions::strict()).unwrap();
        let bound = d.interface_bound().unwrap();
        match solve_xi(&d, &SolveOptions::default()) {
            Ok((roots, _)) => prop_assert!(roots.in_range(0.0, bound).is_empty()),
            Err(Error::NoRootFound { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn solution_is_self_similar_and_continuous(seed in any::<u64>(), s in 0.1f64..0.95, t in 0.1f64..10.0, lam in 0.2f64..5.0) {
        let phys = monotone(seed);
        let sol = ConvectiveSolution::solve(&phys, ReduceOptions::strict(), &SolveOptions::default()).unwrap();
        let front = sol.front(t);
        let scale = phys.a_init.max(phys.b_ext.unwrap());
        // the interface sits at the shifted melting temperature A M xi²
        let shifted = phys.a_init * sol.dimless.m_par * sol.xi * sol.xi;
        prop_assert!((sol.u(front, t).unwrap() - shifted).abs() <= 1e-12 * scale);
        prop_assert!((sol.v(front, t).unwrap() - shifted).abs() <= 1e-12 * scale);
        let x = s * front;
        let a = sol.u(x, t).unwrap();
        let b = sol.u(lam * x, lam * lam * t).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * scale);
        let xf = front * (1.0 + s);
        let a = sol.v(xf, t).unwrap();
        let b = sol.v(lam * xf, lam * lam * t).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * scale);
        prop_assert!(a < shifted && a > -phys.a_init);
    }

    #[test]
    fn round_trip_recovers_front_and_h0(seed in any::<u64>()) {
        let phys = monotone(seed);
        let rt = round_trip(&phys, ReduceOptions::strict(), &SolveOptions::default()).unwrap();
        prop_assert!((rt.xi - rt.omega).abs() <= 1e-10);
        prop_assert!((rt.roundtrip_h0 / rt.h0 - 1.0).abs() <= 1e-8);
        prop_assert!(rt.b0 < phys.b_ext.unwrap());
    }

    #[test]
    fn config_text_round_trips(seed in any::<u64>(), q in 0usize..4) {
        let phys = random_params(&mut ChaCha8Rng::seed_from_u64(seed), Quadrant::ALL[q]);
        let text = phys.to_config_string();
        let back = PhysicalParams::from_config_str(&text, Path::new("generated.cfg")).unwrap();
        prop_assert_eq!(back, phys);
    }
}
