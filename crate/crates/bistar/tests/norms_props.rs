//! Norm-estimation properties: rotation invariance and agreement of the
//! closed-form pre-Schwarzian route with plain series differentiation.

mod common;

use std::sync::Arc;

use num_complex::Complex;

use bistar::catalog::AnalyticFunction;
use bistar::grid::GridSpec;
use bistar::norms::norm_estimate;
use bistar::schwarz::{generate_starlike, generate_v, GeneratorConfig, SchwarzFunction};

type F = AnalyticFunction<f64>;
type C64 = Complex<f64>;

/// `e^{-i theta} f(e^{i theta} z)` as a bare evaluator.
fn rotated(f: F, theta: f64) -> F {
    let w = Complex::from_polar(1.0, theta);
    AnalyticFunction::from_eval("rotated", move |z: C64| {
        let (v, d, dd) = f.eval(w * z)?;
        Ok((v * w.conj(), d, dd * w))
    })
}

#[test]
fn rotation_leaves_the_estimate_unchanged() {
    let grid = GridSpec::norms_default();
    for f in [F::koebe(), F::log_map()] {
        let base = norm_estimate(&f, &grid).unwrap().value;
        for theta in [0.37, 2.0 * std::f64::consts::PI * 17.0 / 512.0] {
            let rot = norm_estimate(&rotated(f.clone(), theta), &grid).unwrap().value;
            assert!(
                (base - rot).abs() < 1e-9,
                "{} rotated by {theta}: {base} vs {rot}",
                f.name()
            );
        }
    }
}

/// Wraps the order-4096 Taylor polynomial of `f` as an evaluator bundle, so
/// the norm runs through plain series differentiation instead of the
/// generator's closed-form pre-Schwarzian.
fn series_route(f: &F, order: usize) -> F {
    let s = f.taylor(order).unwrap();
    let d = Arc::new(s.derive());
    let dd = Arc::new(d.derive());
    let s = Arc::new(s);
    AnalyticFunction::from_eval("series-route", move |z: C64| {
        Ok((s.evaluate(z), d.evaluate(z), dd.evaluate(z)))
    })
}

#[test]
fn generated_norms_agree_between_closed_form_and_series_routes() {
    let cfg = GeneratorConfig::default();
    let grid = GridSpec::new(32, 128, 0.99);
    let phi_star =
        SchwarzFunction::new(1, vec![Complex::new(0.3, -0.4)], Complex::new(1.0, 0.0)).unwrap();
    let phi_v =
        SchwarzFunction::new(2, vec![Complex::new(0.3, 0.2)], Complex::new(-1.0, 0.0)).unwrap();

    let cases = [
        generate_starlike(0.2, &phi_star, &cfg).unwrap(),
        generate_v(0.8, &phi_v, &cfg).unwrap(),
    ];
    for f in &cases {
        let closed = norm_estimate(f, &grid).unwrap().value;
        let series = norm_estimate(&series_route(f, 4096), &grid).unwrap().value;
        assert!(
            (closed - series).abs() < 1e-6,
            "{}: closed {closed} vs series {series}",
            f.name()
        );
    }
}
