//! Property tests over randomised Gaussian chirps and transform parameters.

use num_complex::Complex64;
use proptest::prelude::*;

use olct_core::bounds::{check_identity1, check_identity2, e1_closed_form, e_pf, HpwConfig, SignConvention};
use olct_core::moments::{default_spectrum, default_xi_grid, g_beta, ppr_check_with, time_moment_2p, MomentSpec};
use olct_core::olct::{kernel, kernel_prefactor, olct_forward, olct_inverse, parseval_gap, OlctParams, TransformPath};
use olct_core::signal::{
    exp_weight, gaussian_chirp, integrate, integrate_real, norm_l2, Grid, SampledSignal, WeightFunction,
};
use olct_core::verify::{verify_hpw, verify_hw, verify_shw, AMode, INEQUALITY_TOL};

fn grid() -> Grid {
    Grid::new(-8.0, 8.0, 4097).unwrap()
}

/// `b` from the test matrix (and one negative value), `a` so that the
/// kernel chirp `a/2b` stays within [-6, 6], offsets in [-1, 1].
fn params() -> impl Strategy<Value = OlctParams> {
    (
        prop::sample::select(vec![0.05, 0.5, 1.0, -0.5]),
        -6.0..6.0f64,
        0.2..2.0f64,
        -1.0..1.0f64,
        -1.0..1.0f64,
    )
        .prop_map(|(b, rate, d, tau, eta)| OlctParams::solve_c(2.0 * b * rate, b, d, tau, eta).unwrap())
}

fn signal() -> impl Strategy<Value = (f64, f64)> {
    (1.0..10.0f64, -4.0..4.0f64)
}

fn weight() -> impl Strategy<Value = WeightFunction> {
    prop_oneof![Just(WeightFunction::unit()), (0.5..2.0f64).prop_map(|r| exp_weight(r).unwrap())]
}

fn sample(r: f64, chirp: f64) -> SampledSignal {
    gaussian_chirp(r, chirp).unwrap().sample(&grid()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_exact_for_cubics(c in prop::array::uniform4(-3.0..3.0f64), n in 16usize..400, lo in -5.0..0.0f64, w in 0.5..6.0f64) {
        let g = Grid::new(lo, lo + w, n).unwrap();
        let v: Vec<f64> = g.points().map(|t| c[0] + c[1] * t + c[2] * t * t + c[3] * t * t * t).collect();
        let anti = |t: f64| c[0] * t + c[1] * t * t / 2.0 + c[2] * t.powi(3) / 3.0 + c[3] * t.powi(4) / 4.0;
        let exact = anti(lo + w) - anti(lo);
        let scale = [c[0] * w, c[1] * w * w, c[2] * w.powi(3), c[3] * w.powi(4)].iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        prop_assert!((integrate_real(&g, &v) - exact).abs() <= 1e-12 * scale);
    }

    #[test]
    fn integration_is_linear_and_conjugate_symmetric((r1, c1) in signal(), (r2, c2) in signal(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let (f, g) = (sample(r1, c1), sample(r2, c2));
        let (alpha, beta) = (Complex64::new(a, 0.5), Complex64::new(-0.3, b));
        let lhs = integrate(&f.combine(alpha, &g, beta).unwrap());
        let rhs = alpha * integrate(&f) + beta * integrate(&g);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        prop_assert_eq!(integrate(&f.conj()), integrate(&f).conj());
    }

    #[test]
    fn norm_is_phase_invariant((r, c) in signal(), theta in 0.0..6.3f64) {
        let f = sample(r, c);
        let rotated = f.scale(Complex64::from_polar(1.0, theta));
        prop_assert!((norm_l2(&rotated) - norm_l2(&f)).abs() <= 1e-12 * norm_l2(&f));
    }

    #[test]
    fn kernel_modulus_is_constant(p in params(), pts in prop::collection::vec((-8.0..8.0f64, -20.0..20.0f64), 100)) {
        let expected = kernel_prefactor(p.b()).norm();
        prop_assert!((expected - 1.0 / (2.0 * std::f64::consts::PI * p.b().abs()).sqrt()).abs() < 1e-15);
        for (t, xi) in pts {
            prop_assert!((kernel(t, xi, &p).unwrap().norm() - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn transform_paths_agree_and_preserve_energy((r, c) in signal(), p in params()) {
        let f = sample(r, c);
        let xi = default_xi_grid(&f, &p, 129).unwrap();
        let fast = olct_forward(&f, &p, &xi, TransformPath::ChirpFft).unwrap();
        let direct = olct_forward(&f, &p, &xi, TransformPath::Direct).unwrap();
        prop_assert!(fast.max_abs_diff(&direct).unwrap() <= 1e-6 * direct.max_abs());
        let full = default_spectrum(&f, &p).unwrap();
        prop_assert!(parseval_gap(&f, &full).unwrap() <= 1e-6);
    }

    #[test]
    fn forward_is_linear((r1, c1) in signal(), (r2, c2) in signal(), p in params()) {
        let (f, g) = (sample(r1, c1), sample(r2, c2));
        let xi = default_xi_grid(&f, &p, 1025).unwrap();
        let (alpha, beta) = (Complex64::new(0.7, -1.2), Complex64::new(2.0, 0.3));
        let mixed = olct_forward(&f.combine(alpha, &g, beta).unwrap(), &p, &xi, TransformPath::ChirpFft).unwrap();
        let of = olct_forward(&f, &p, &xi, TransformPath::ChirpFft).unwrap();
        let og = olct_forward(&g, &p, &xi, TransformPath::ChirpFft).unwrap();
        let sum = of.combine(alpha, &og, beta).unwrap();
        prop_assert!(mixed.max_abs_diff(&sum).unwrap() <= 1e-10 * sum.max_abs().max(1.0));
    }

    #[test]
    fn inverse_round_trips((r, c) in (1.0..4.0f64, -2.0..2.0f64), p in params()) {
        let f = sample(r, c);
        let o = default_spectrum(&f, &p).unwrap();
        let back = olct_inverse(&o, &p, f.grid(), TransformPath::ChirpFft).unwrap();
        prop_assert!(back.max_abs_diff(&f).unwrap() <= 1e-5);
    }

    #[test]
    fn ppr_identity_holds((r, c) in signal(), p in params(), order in 0usize..=2, shift in -1.0..1.0f64) {
        let f = sample(r, c);
        let o = default_spectrum(&f, &p).unwrap();
        let check = ppr_check_with(&f, &p, order, p.tau() + shift, &o).unwrap();
        prop_assert!(check.rel_gap <= 1e-4, "{:?}", check);
    }

    #[test]
    fn time_moment_is_chirp_invariant((r, c) in signal(), p in params(), w in weight(), order in 0usize..=2, xi_m in -2.0..2.0f64) {
        let f = sample(r, c);
        let spec = MomentSpec::new(order, 0.1, xi_m, w).unwrap();
        let a = time_moment_2p(&f, &spec).unwrap();
        let b = time_moment_2p(&g_beta(&f, &p, xi_m).unwrap(), &spec).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn first_order_constant_matches_closed_form((r, c) in signal(), p in params(), w in weight(), t_m in -0.5..0.5f64) {
        let f = sample(r, c);
        let cfg = HpwConfig::new(1, t_m, p.tau(), w.clone()).unwrap();
        let generic = e_pf(&f, &p, &cfg).unwrap().e_pf;
        let closed = e1_closed_form(&f, t_m, &w).unwrap();
        prop_assert!((generic.abs() - closed.abs()).abs() <= 1e-6 * closed.abs());
    }

    #[test]
    fn bounds_are_sound_and_ordered((r, c) in signal(), p in params(), w in weight(), order in 1usize..=2, t_m in -0.5..0.5f64, u in -1.0..1.0f64) {
        let f = sample(r, c);
        let cfg = HpwConfig::new(order, t_m, p.tau() + p.b() * u, w).unwrap();
        let hpw = verify_hpw(&f, &p, &cfg, INEQUALITY_TOL).unwrap();
        prop_assert_eq!(hpw.passed.hpw, Some(true));
        for mode in [AMode::Zero, AMode::Gram(None), AMode::Saturating] {
            let rep = verify_shw(&f, &p, &cfg, &mode, INEQUALITY_TOL).unwrap();
            prop_assert_eq!(rep.passed.shw, Some(true));
            prop_assert!(rep.rhs_shw.unwrap() >= rep.rhs_hpw.unwrap());
            if mode == AMode::Zero {
                prop_assert_eq!(rep.rhs_shw, rep.rhs_hpw);
            }
        }
    }

    #[test]
    fn hw_bound_is_sound((r, c) in signal(), p in params(), order in 2usize..=4, t_m in -0.5..0.5f64, u in -1.0..1.0f64) {
        let f = sample(r, c);
        let rep = verify_hw(&f, &p, order, t_m, p.tau() + p.b() * u, INEQUALITY_TOL).unwrap();
        prop_assert_eq!(rep.passed.hw, Some(true));
        let h = rep.holder.unwrap();
        prop_assert!(h.time.passed && h.spectral.passed);
    }

    #[test]
    fn rel_slack_is_scale_invariant((r, c) in signal(), p in params(), kappa in 0.1..10.0f64) {
        let f = sample(r, c);
        let cfg = HpwConfig::unweighted(1, 0.0, p.tau()).unwrap();
        let a = verify_hpw(&f, &p, &cfg, INEQUALITY_TOL).unwrap();
        let b = verify_hpw(&f.scale(Complex64::new(kappa, 0.0)), &p, &cfg, INEQUALITY_TOL).unwrap();
        prop_assert!((a.rel_slack.hpw.unwrap() - b.rel_slack.hpw.unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn identities_hold_on_gaussian_chirps((r, c) in signal(), alpha in -3.0..3.0f64, k in 1usize..=2, q in 0usize..=2) {
        let f = gaussian_chirp(r, c).unwrap();
        prop_assert!(check_identity1(&f, k, &grid()).unwrap() <= 1e-6);
        let c2 = check_identity2(&f, alpha, q, &SignConvention::Alternating, &grid()).unwrap();
        prop_assert!(c2.residual <= 1e-6 && c2.best_residual <= c2.residual);
    }
}
