use fpower_core::dist::{
    f_cdf_central, f_quantile_central, ChiSquare, NoncentralChiSquare, NoncentralF,
};
use fpower_core::power::{power_at_delta, power_at_sigma, NoncentralityMap, TestDesign};
use fpower_core::specfun::{log_bessel_i, log_gamma, reg_inc_beta, reg_inc_gamma_p};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn beta_complementarity(a in 0.1f64..40.0, b in 0.1f64..40.0, x in 0.0f64..=1.0) {
        let lhs = reg_inc_beta(a, b, x).unwrap() + reg_inc_beta(b, a, 1.0 - x).unwrap();
        prop_assert!((lhs - 1.0).abs() <= 1e-12, "a={a} b={b} x={x}: {lhs}");
    }

    #[test]
    fn bessel_recurrence(order in 0.5f64..10.0, z in 0.1f64..50.0) {
        let mid = log_bessel_i(order, z).unwrap();
        let below = (log_bessel_i(order - 1.0, z).unwrap() - mid).exp();
        let above = (log_bessel_i(order + 1.0, z).unwrap() - mid).exp();
        let rhs = 2.0 * order / z;
        prop_assert!(((below - above) - rhs).abs() <= 1e-8 * rhs, "order={order} z={z}");
    }

    #[test]
    fn log_gamma_recurrence(x in 1e-3f64..60.0) {
        let lhs = log_gamma(x + 1.0).unwrap();
        let rhs = log_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-12, "x={x}: {lhs} vs {rhs}");
    }

    #[test]
    fn incomplete_functions_monotone(s in 0.2f64..50.0, b in 0.2f64..50.0, step in 0.01f64..0.5) {
        let mut prev_gamma = 0.0;
        let mut prev_beta = 0.0;
        for i in 0..=40 {
            let x = i as f64 * step;
            let g = reg_inc_gamma_p(s, x * 4.0).unwrap();
            prop_assert!(g >= prev_gamma && (0.0..=1.0).contains(&g));
            prev_gamma = g;
            let y = (i as f64 / 40.0).min(1.0);
            let bv = reg_inc_beta(s, b, y).unwrap();
            prop_assert!(bv >= prev_beta && (0.0..=1.0).contains(&bv));
            prev_beta = bv;
        }
    }

    #[test]
    fn quantile_round_trips(df in 0.5f64..80.0, df2 in 1.0f64..60.0, p in 0.001f64..0.999) {
        let chi = ChiSquare::new(df).unwrap();
        let x = chi.quantile(p).unwrap();
        prop_assert!((chi.cdf(x).unwrap() - p).abs() <= 1e-10);
        let f = f_quantile_central(df, df2, p).unwrap();
        prop_assert!((f_cdf_central(df, df2, f).unwrap() - p).abs() <= 1e-10);
    }

    #[test]
    fn noncentral_cdfs_stay_in_unit_interval(u in 1.0f64..12.0, v in 1.0f64..40.0, delta in 0.0f64..8.0, x in 0.0f64..60.0) {
        let c = NoncentralChiSquare::new(u, delta).unwrap().cdf(x).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
        let f = NoncentralF::new(u, v, delta).unwrap().cdf(x / 4.0).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn power_strictly_decreasing_in_sigma(lambda in 0.2f64..6.0, ratio in 0.05f64..1.0) {
        // keep δ = λ/σ ≤ 6 so the power is not rounded to 1
        let sigma = lambda / (6.0 * ratio);
        let design = TestDesign::new(2.0, 12.0, 0.05).unwrap();
        let map = NoncentralityMap::new(lambda).unwrap();
        let here = power_at_sigma(&design, &map, sigma).unwrap();
        let wider = power_at_sigma(&design, &map, sigma * 1.1).unwrap();
        prop_assert!(wider < here);
    }
}

#[test]
fn quantile_round_trip_grid() {
    let chi = ChiSquare::new(9.0).unwrap();
    for i in 1..100 {
        let p = i as f64 / 100.0;
        assert!((chi.cdf(chi.quantile(p).unwrap()).unwrap() - p).abs() <= 1e-9);
    }
}

#[test]
fn cdfs_nondecreasing_in_x() {
    for &(u, v, delta) in &[(1.0, 9.0, 2.0), (3.0, 5.0, 0.0), (6.0, 30.0, 4.5)] {
        let nc = NoncentralChiSquare::new(u, delta).unwrap();
        let nf = NoncentralF::new(u, v, delta).unwrap();
        let (mut pc, mut pf) = (0.0, 0.0);
        for i in 0..200 {
            let x = i as f64 * 0.2;
            let c = nc.cdf(x).unwrap();
            let f = nf.cdf(x * 0.1).unwrap();
            assert!(c >= pc && f >= pf, "u={u} delta={delta} x={x}");
            pc = c;
            pf = f;
        }
    }
}

#[test]
fn noncentral_chisq_strictly_decreasing_in_delta() {
    for &u in &[1.0, 2.0, 5.0, 12.0] {
        for &x in &[0.5 * u, u, 2.0 * u + 4.0] {
            let mut prev = NoncentralChiSquare::new(u, 0.0).unwrap().cdf(x).unwrap();
            for i in 1..=50 {
                let delta = 0.1 * i as f64;
                let cur = NoncentralChiSquare::new(u, delta).unwrap().cdf(x).unwrap();
                assert!(cur < prev, "u={u} x={x} delta={delta}");
                prev = cur;
            }
        }
    }
}

#[test]
fn noncentral_f_strictly_decreasing_in_delta() {
    let design = TestDesign::new(3.0, 12.0, 0.05).unwrap();
    let mut prev = power_at_delta(&design, 0.0).unwrap();
    for i in 1..=80 {
        let cur = power_at_delta(&design, 0.05 * i as f64).unwrap();
        assert!(cur > prev);
        prev = cur;
    }
}

#[test]
fn ruben_integral_grid() {
    for &u in &[1.0, 2.0, 3.0, 6.0, 12.0] {
        for &delta in &[0.1, 1.0, 2.0, 5.0] {
            let d = NoncentralChiSquare::new(u, delta).unwrap();
            for &r in &[0.5, 1.0, 2.0, 4.0] {
                let integral = d.cdf_ruben(r).unwrap();
                let series = d.cdf(r * r).unwrap();
                assert!(
                    (integral - series).abs() <= 1e-8,
                    "u={u} delta={delta} r={r}: {integral} vs {series}"
                );
            }
        }
    }
}

#[test]
fn expectation_identity_grid() {
    for &u in &[1.0, 3.0] {
        for &v in &[5.0, 9.0, 30.0] {
            let c = f_quantile_central(u, v, 0.95).unwrap();
            for &delta in &[0.0, 1.0, 3.0] {
                let d = NoncentralF::new(u, v, delta).unwrap();
                for &x in &[0.5, c, 2.0 * c] {
                    let series = d.cdf(x).unwrap();
                    let expectation = d.cdf_by_expectation(x, 16).unwrap();
                    assert!(
                        (series - expectation).abs() <= 1e-7,
                        "u={u} v={v} delta={delta} x={x}"
                    );
                }
            }
        }
    }
}
