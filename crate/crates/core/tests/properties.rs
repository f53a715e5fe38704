//! Invariants under rescaling and reshaping, checked with proptest.

use proptest::prelude::*;
use volvol::gof::{bdc_hats, gof_statistic, n_hat_path, GofConfig};
use volvol::spot::{EstimatorConfig, SpotSeries};
use volvol::sum::{rolling, CompensatedSum};
use volvol::volvol::{c_hat, g_stats, t_hat, tau2_series, v_hat, v_hat_path};
use volvol::{SampledPath, Tau2Fn};

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-11 * scale.abs().max(f64::MIN_POSITIVE)
}

/// Random walk with increments in `[-1, 1]` scaled by `vol`, and a window.
fn path_and_window() -> impl Strategy<Value = (Vec<f64>, usize)> {
    (64usize..400, 0.01f64..5.0).prop_flat_map(|(n, vol)| {
        let kmax = n / 4;
        (prop::collection::vec(-1.0f64..1.0, n), Just(vol), 2usize..=kmax).prop_map(|(steps, vol, k)| {
            let mut x = vec![0.0];
            for s in steps {
                x.push(x.last().unwrap() + vol * s / 20.0);
            }
            (x, k)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scale_equivariance((x, k) in path_and_window(), lambda in 0.05f64..20.0) {
        let y: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        let (a, b) = (SpotSeries::with_window(&x, k).unwrap(), SpotSeries::with_window(&y, k).unwrap());
        let (l2, l4, l8) = (lambda.powi(2), lambda.powi(4), lambda.powi(8));
        for i in 0..a.s2.len() {
            prop_assert!(close(b.s2[i], l2 * a.s2[i], l2 * a.s2[i]));
            prop_assert!(close(b.s4[i], l4 * a.s4[i], l4 * a.s4[i]));
        }
        let cfg = EstimatorConfig::with_k(k);
        let ta = tau2_series(&a);
        let tscale: f64 = ta.iter().map(|v| v.abs()).sum::<f64>() + a.s4.iter().sum::<f64>() * 6.0 * a.n as f64 / (k * k) as f64;
        prop_assert!(close(v_hat(&b, &cfg).unwrap(), l4 * v_hat(&a, &cfg).unwrap(), l4 * tscale / a.n as f64));
        let (ga, gb) = (g_stats(&a, &cfg).unwrap(), g_stats(&b, &cfg).unwrap());
        prop_assert!(close(gb.g1, l8 * ga.g1, l8 * ga.g1));
        prop_assert!(close(gb.g3, l8 * ga.g3, l8 * ga.g3));
        let mag = ga.g3 + 15.0 * (a.n as f64 / (k * k) as f64) * ga.g2.abs() + 30.0 * (a.n as f64).powi(2) / (k as f64).powi(4) * ga.g1;
        prop_assert!((c_hat(&gb, a.n, k) - l8 * c_hat(&ga, a.n, k)).abs() <= 1e-9 * l8 * mag);
        prop_assert!((t_hat(&gb, a.n, k) - l8 * t_hat(&ga, a.n, k)).abs() <= 1e-9 * l8 * mag);
    }

    #[test]
    fn powers_of_two_scale_exactly((x, k) in path_and_window(), j in -6i32..6) {
        let lambda = 2f64.powi(j);
        let y: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        let (a, b) = (SpotSeries::with_window(&x, k).unwrap(), SpotSeries::with_window(&y, k).unwrap());
        let cfg = EstimatorConfig::with_k(k);
        prop_assert_eq!(v_hat(&b, &cfg).unwrap(), lambda.powi(4) * v_hat(&a, &cfg).unwrap());
    }

    #[test]
    fn nonnegative_quantities((x, k) in path_and_window()) {
        let s = SpotSeries::with_window(&x, k).unwrap();
        prop_assert!(s.s2.iter().all(|v| *v >= 0.0));
        prop_assert!(s.s4.iter().all(|v| *v >= 0.0));
        let g = g_stats(&s, &EstimatorConfig::with_k(k)).unwrap();
        prop_assert!(g.g1 >= 0.0 && g.g3 >= 0.0);
    }

    #[test]
    fn shift_invariance((x, k) in path_and_window(), shift in -100.0f64..100.0) {
        let y: Vec<f64> = x.iter().map(|v| v + shift).collect();
        let (a, b) = (SpotSeries::with_window(&x, k).unwrap(), SpotSeries::with_window(&y, k).unwrap());
        let cfg = EstimatorConfig::with_k(k);
        let (va, vb) = (v_hat(&a, &cfg).unwrap(), v_hat(&b, &cfg).unwrap());
        // Shifted increments lose up to |shift| / |increment| ulps.
        let scale = a.s4.iter().sum::<f64>() * 6.0 / (k * k) as f64 + va.abs();
        prop_assert!((va - vb).abs() <= 1e-6 * scale);
    }

    #[test]
    fn residual_invariant_under_shape_scaling((x, k) in path_and_window(), lambda in 0.1f64..10.0) {
        let path = SampledPath::from_observations(x.clone()).unwrap();
        let s = SpotSeries::with_window(&x, k).unwrap();
        let tau2 = tau2_series(&s);
        let f = Tau2Fn::custom("1+v", |_, _, v| 1.0 + v);
        let g = f.scaled(lambda);
        let (df, dg) = (bdc_hats(&path, &s, &tau2, &f, 1e-12).unwrap(), bdc_hats(&path, &s, &tau2, &g, 1e-12).unwrap());
        let tscale = tau2.iter().map(|v| v.abs()).sum::<f64>() / s.n as f64 + 1e-300;
        prop_assert!(close(dg.theta_hat() * lambda, df.theta_hat(), df.theta_hat().abs().max(tscale)));
        let vp = v_hat_path(&tau2, s.n, k);
        let (nf, ng) = (n_hat_path(&vp, &df.b_path, df.d_hat, df.c_hat_f), n_hat_path(&vp, &dg.b_path, dg.d_hat, dg.c_hat_f));
        for (a, b) in nf.iter().zip(&ng) {
            prop_assert!((a - b).abs() <= 1e-10 * (tscale + a.abs()));
        }
    }

    #[test]
    fn theta_minimizes_quadratic_criterion((x, k) in path_and_window(), h in -0.5f64..0.5) {
        // theta_hat = C/D is the stationary point of theta^2 D - 2 theta C.
        let path = SampledPath::from_observations(x.clone()).unwrap();
        let s = SpotSeries::with_window(&x, k).unwrap();
        let tau2 = tau2_series(&s);
        let d = bdc_hats(&path, &s, &tau2, &Tau2Fn::custom("1+v", |_, _, v| 1.0 + v), 1e-12).unwrap();
        let q = |t: f64| t * t * d.d_hat - 2.0 * t * d.c_hat_f;
        let th = d.theta_hat();
        let other = th + h * (th.abs() + 1e-3);
        prop_assert!(q(th) <= q(other) + 1e-12 * q(other).abs());
    }

    #[test]
    fn rolling_sums_match_direct(values in prop::collection::vec(-1e3f64..1e3, 1..300), w in 1usize..40) {
        let r = rolling(&values, w);
        prop_assert_eq!(r.len(), if w > values.len() { 0 } else { values.len() - w + 1 });
        for (i, got) in r.iter().enumerate() {
            let want: CompensatedSum = values[i..i + w].iter().copied().collect();
            let mag: f64 = values[i..i + w].iter().map(|v| v.abs()).sum();
            prop_assert!((got - want.value()).abs() <= 1e-13 * mag.max(1.0));
        }
    }

    #[test]
    fn statistic_is_nonnegative_and_finite((x, _k) in path_and_window()) {
        let path = SampledPath::from_observations(x).unwrap();
        let cfg = GofConfig { estimator: EstimatorConfig::with_k(4), t_min: 0.0 };
        if let Ok(s) = gof_statistic(&path, &Tau2Fn::custom("1+v", |_, _, v| 1.0 + v), &cfg) {
            prop_assert!(s.ks.y_n >= 0.0 && s.ks.y_n.is_finite());
        }
    }
}
