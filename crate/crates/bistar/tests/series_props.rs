//! Property suite for the series engine: reversion round trips, the
//! triangular-recurrence cross-oracle, and the exp/log inverse pair.

mod common;

use num_complex::Complex;
use proptest::prelude::*;

use bistar::series::TruncatedSeries;
use common::{revert_triangular, Series};

fn normalized_series(order: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), order - 1).prop_map(move |tail| {
        let mut coeffs = vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)];
        coeffs.extend(tail.into_iter().map(|(re, im)| Complex::new(re, im)));
        TruncatedSeries::new(coeffs).unwrap()
    })
}

fn unit_constant_series(order: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), order).prop_map(move |tail| {
        let mut coeffs = vec![Complex::new(1.0, 0.0)];
        coeffs.extend(tail.into_iter().map(|(re, im)| Complex::new(re, im)));
        TruncatedSeries::new(coeffs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn compose_revert_is_identity(s in normalized_series(12)) {
        let inverse = s.revert().unwrap();
        let round = inverse.compose(&s).unwrap();
        let id = TruncatedSeries::identity(12);
        prop_assert!(round.max_coeff_distance(&id) < 1e-10);
    }

    #[test]
    fn revert_is_an_involution(s in normalized_series(12)) {
        let twice = s.revert().unwrap().revert().unwrap();
        prop_assert!(twice.max_coeff_distance(&s) < 1e-10);
    }

    #[test]
    fn revert_matches_triangular_recurrence(s in normalized_series(12)) {
        let newton = s.revert().unwrap();
        let direct = revert_triangular(&s);
        prop_assert!(newton.max_coeff_distance(&direct) < 1e-10);
    }

    #[test]
    fn low_order_reversion_closed_forms(
        (a2re, a2im) in (-1.0f64..1.0, -1.0f64..1.0),
        (a3re, a3im) in (-1.0f64..1.0, -1.0f64..1.0),
        (a4re, a4im) in (-1.0f64..1.0, -1.0f64..1.0),
    ) {
        let a2 = Complex::new(a2re, a2im);
        let a3 = Complex::new(a3re, a3im);
        let a4 = Complex::new(a4re, a4im);
        let f = TruncatedSeries::new(vec![
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
            a2,
            a3,
            a4,
        ])
        .unwrap();
        let g = f.revert().unwrap();
        prop_assert!((g.coeff(2) + a2).norm() < 1e-12);
        prop_assert!((g.coeff(3) - (a2 * a2 * 2.0 - a3)).norm() < 1e-12);
        let b4 = -(a2 * a2 * a2 * 5.0 - a2 * a3 * 5.0 + a4);
        prop_assert!((g.coeff(4) - b4).norm() < 1e-12);
    }

    #[test]
    fn exp_log_round_trip(s in unit_constant_series(16)) {
        let back = s.log().unwrap().exp();
        prop_assert!(back.max_coeff_distance(&s) < 1e-10);
    }

    #[test]
    fn derive_undoes_integrate(s in normalized_series(10)) {
        let back = s.integrate(Complex::new(0.25, -0.5)).derive();
        for n in 0..s.order() {
            prop_assert!((back.coeff(n) - s.coeff(n)).norm() == 0.0);
        }
    }

    #[test]
    fn evaluate_commutes_with_compose(
        outer in normalized_series(10),
        inner in normalized_series(10),
        (zre, zim) in (-0.3f64..0.3, -0.3f64..0.3),
    ) {
        // composed polynomial at z vs nested evaluation, inside a radius
        // where the truncated tail of the composition stays negligible
        let z = Complex::new(zre, zim);
        let composed = outer.compose(&inner).unwrap();
        let direct = outer.evaluate(inner.evaluate(z));
        // both are polynomials; they differ by the truncated tail only
        let tail = (0.3f64 + 0.3).powi(11) * 64.0;
        prop_assert!((composed.evaluate(z) - direct).norm() < tail.max(1e-9));
    }
}

#[test]
fn triangular_oracle_agrees_on_koebe() {
    let k = TruncatedSeries::from_real(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]).unwrap();
    let direct = revert_triangular(&k);
    let expect =
        TruncatedSeries::from_real(&[0.0, 1.0, -2.0, 5.0, -14.0, 42.0, -132.0, 429.0]).unwrap();
    assert!(direct.max_coeff_distance(&expect) < 1e-9);
}
