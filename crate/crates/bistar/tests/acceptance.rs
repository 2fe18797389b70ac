//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured quantities (visible under `--nocapture`).
//!
//! Run with `cargo test --test acceptance -- --nocapture`.

mod common;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bistar::bounds::{audit, bound_value, majorant_sup, AuditConfig, BoundName};
use bistar::catalog::AnalyticFunction;
use bistar::error::Error;
use bistar::grid::GridSpec;
use bistar::membership::{check_bi, FunctionalKind, Verdict};
use bistar::norms::{norm_estimate, norm_estimate_default};
use bistar::schwarz::{
    generate_inverse_starlike, generate_v, GeneratorConfig, SchwarzFunction,
};
use bistar::series::TruncatedSeries;

use common::{disc_samples, random_schwarz, revert_triangular};

type F = AnalyticFunction<f64>;

#[test]
fn criterion_01_reversion_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..200 {
        let a2 = common::random_unit_square(&mut rng);
        let a3 = common::random_unit_square(&mut rng);
        let a4 = common::random_unit_square(&mut rng);
        let f = TruncatedSeries::new(vec![
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
            a2,
            a3,
            a4,
        ])
        .unwrap();
        let g = f.revert().unwrap();
        assert!((g.coeff(2) + a2).norm() < 1e-12);
        assert!((g.coeff(3) - (a2 * a2 * 2.0 - a3)).norm() < 1e-12);
        let b4 = -(a2 * a2 * a2 * 5.0 - a2 * a3 * 5.0 + a4);
        assert!((g.coeff(4) - b4).norm() < 1e-12);
        // Newton path against the independent triangular recurrence
        let direct = revert_triangular(&f);
        assert!(g.max_coeff_distance(&direct) < 1e-12);
    }

    let koebe = TruncatedSeries::from_real(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let inverse = koebe.revert().unwrap();
    let expect = TruncatedSeries::from_real(&[0.0, 1.0, -2.0, 5.0, -14.0, 42.0]).unwrap();
    let err = inverse.max_coeff_distance(&expect);
    assert!(err < 1e-10);
    println!("acceptance 01 reversion-formulas: PASS (koebe coefficient error {err:.2e})");
}

#[test]
fn criterion_02_koebe_norm() {
    let est = norm_estimate_default(&F::koebe()).unwrap();
    assert!(
        est.value >= 5.99 && est.value <= 6.0 + 1e-9,
        "koebe norm {}",
        est.value
    );
    println!("acceptance 02 koebe-norm: PASS (value {})", est.value);
}

#[test]
fn criterion_03_gen_koebe_sharpness() {
    for alpha in [0.0, 0.25, 0.5, 0.75] {
        let f = F::gen_koebe(alpha).unwrap();
        let est = norm_estimate_default(&f).unwrap();
        let target = 6.0 - 4.0 * alpha;
        assert!(
            (est.value - target).abs() <= 0.01,
            "alpha {alpha}: {} vs {target}",
            est.value
        );
        println!(
            "acceptance 03 sharpness alpha={alpha}: PASS (value {}, target {target})",
            est.value
        );
    }
}

#[test]
fn criterion_04_catalog_norms() {
    let f1 = norm_estimate_default(&F::half_plane()).unwrap().value;
    let f2 = norm_estimate_default(&F::log_map()).unwrap().value;
    let id = norm_estimate_default(&F::identity()).unwrap().value;
    assert!((f1 - 4.0).abs() <= 1e-3, "||f1|| = {f1}");
    assert!((f2 - 2.0).abs() <= 1e-3, "||f2|| = {f2}");
    assert!(id == 0.0, "||id|| = {id}");
    println!("acceptance 04 catalog-norms: PASS (f1 {f1}, f2 {f2}, identity {id})");
}

#[test]
fn criterion_05_bi_membership() {
    let f1 = F::half_plane();
    let (fwd, inv) = check_bi(&f1, 0.49, FunctionalKind::Starlike).unwrap();
    assert_eq!(fwd.verdict, Verdict::Member);
    assert_eq!(inv.verdict, Verdict::Member);

    for alpha in [0.0, 0.5, 0.9] {
        let (fwd, inv) = check_bi(&f1, alpha, FunctionalKind::V).unwrap();
        assert_eq!(fwd.verdict, Verdict::Member, "alpha {alpha}");
        assert_eq!(inv.verdict, Verdict::Member, "alpha {alpha}");
        assert!(
            (fwd.empirical_min_re - 1.0).abs() <= 1e-12,
            "forward functional {} at alpha {alpha}",
            fwd.empirical_min_re
        );
        assert!(
            (inv.empirical_min_re - 1.0).abs() <= 1e-12,
            "inverse functional {} at alpha {alpha}",
            inv.empirical_min_re
        );
    }
    println!("acceptance 05 bi-membership: PASS (f1 starlike 0.49 and V-kind functionals = 1)");
}

#[test]
fn criterion_06_theorem_b_refutation() {
    let rows = audit(
        &[F::half_plane()],
        &[0.5, 0.8],
        &AuditConfig::default(),
    )
    .unwrap();

    let at_half = &rows[0];
    assert!(at_half.v.as_ref().unwrap().is_member());
    let norm = at_half.norm.as_ref().unwrap().value;
    assert!((norm - 4.0).abs() < 1e-3);
    assert!((at_half.bounds.rahmatan_b - 2.0).abs() < 1e-12);
    assert!(at_half.violations.iter().any(|v| v == "rahmatan_B"));

    let at_08 = &rows[1];
    assert!(at_08.bounds.rahmatan_b < 0.0);
    assert!(at_08.v.as_ref().unwrap().is_member());
    assert!(at_08.violations.iter().any(|v| v == "rahmatan_B"));

    println!(
        "acceptance 06 theorem-B-refutation: PASS (norm {norm} > bound {} at 0.5; bound {} < 0 at 0.8 with V membership)",
        at_half.bounds.rahmatan_b, at_08.bounds.rahmatan_b
    );
}

#[test]
fn criterion_07_derivation_consistency() {
    let rows = audit(&[F::half_plane()], &[0.45], &AuditConfig::default()).unwrap();
    let row = &rows[0];
    assert!(row.starlike.as_ref().unwrap().is_member());
    let norm = row.norm.as_ref().unwrap().value;
    assert!((norm - 4.0).abs() < 1e-3);
    let case2 = row.bounds.derivation_case2.unwrap();
    assert!((case2 - 2.0 * 0.55 / 0.45).abs() < 1e-12);
    assert!((row.bounds.theorem1_stated - 4.2).abs() < 1e-12);
    assert!(row.derivation_flags.iter().any(|v| v == "derivation_case2"));
    assert!(!row.violations.iter().any(|v| v == "theorem1"));
    println!(
        "acceptance 07 derivation-consistency: PASS (norm {norm} flagged against case-2 value {case2}, stated bound 4.2 not violated)"
    );
}

#[test]
fn criterion_08_majorant_sup_corrections() {
    let (s_half, t_half) = majorant_sup(0.5f64).unwrap();
    assert!((s_half - 2.25).abs() <= 1e-6);
    assert!((t_half - 0.5).abs() <= 1e-4);
    let phi_half = bound_value::<f64>(BoundName::DerivationPhi, 0.5).unwrap();
    assert!(s_half > phi_half);

    let (s_04, _) = majorant_sup(0.4f64).unwrap();
    assert!((3.07..=3.10).contains(&s_04), "sup(0.4) = {s_04}");
    let phi_04 = bound_value::<f64>(BoundName::DerivationPhi, 0.4).unwrap();
    assert!((phi_04 - 3.0).abs() < 1e-12);
    assert!(s_04 > phi_04);

    let (s_75, _) = majorant_sup(0.75f64).unwrap();
    assert!((s_75 - 2.0).abs() <= 1e-6);

    println!(
        "acceptance 08 majorant-sup: PASS (sup(0.5) = {s_half} at t = {t_half}, sup(0.4) = {s_04}, sup(0.75) = {s_75})"
    );
}

#[test]
fn criterion_09_generator_identity_suite() {
    let cfg = GeneratorConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let samples = disc_samples(0.7, 4, 10);

    let mut worst: f64 = 0.0;
    let mut pole_rejections = 0usize;
    for i in 0..50 {
        // even iterations exercise the inverse-starlike chain, odd ones the
        // inverse-condition chain (which needs phi'(0) = 0 and redraws past
        // constructions whose quadrature leaves the class)
        let f = if i % 2 == 0 {
            let alpha = rng.gen_range(0.0..0.95);
            generate_inverse_starlike(alpha, &random_schwarz(&mut rng, 1), &cfg).unwrap()
        } else {
            let (_, _, f, rejected) = common::random_accepted_v(&mut rng, &cfg);
            pole_rejections += rejected;
            f
        };
        let series = f.taylor(128).unwrap();
        let d = series.derive();
        let dd = d.derive();
        let t = f.closed_form_pre_schwarzian().unwrap();
        for &z in &samples {
            let closed = t(z).unwrap();
            let by_series = dd.evaluate(z) / d.evaluate(z);
            let err = (closed - by_series).norm();
            worst = worst.max(err);
            assert!(err < 1e-8, "pair {i} at {z}: residual {err}");
        }
    }

    // phi with a nonzero linear coefficient must be rejected
    let linear = SchwarzFunction::new(1, vec![Complex::new(0.4, 0.1)], Complex::new(1.0, 0.0))
        .unwrap();
    assert!(linear.derivative_at_origin().norm() > 1e-12);
    assert!(matches!(
        generate_v(0.3, &linear, &cfg),
        Err(Error::Precondition(_))
    ));

    println!(
        "acceptance 09 generator-identities: PASS (worst residual {worst:.2e} over 50 pairs, {pole_rejections} pole-bearing draws redrawn)"
    );
}

#[test]
fn criterion_10_schwarz_pick_suite() {
    let grid = GridSpec::<f64>::schwarz_default();
    let radii = grid.radii();
    let angles = grid.angles();
    let mut rng = ChaCha8Rng::seed_from_u64(113);

    for _ in 0..100 {
        let phi = random_schwarz(&mut rng, 1);
        for &r in &radii {
            for &theta in &angles {
                let z = Complex::from_polar(r, theta);
                let (value, _) = phi.eval(z).unwrap();
                assert!(value.norm() <= z.norm() + 1e-12, "{phi} at {z}");
                let residual = phi.schwarz_pick_residual(z).unwrap();
                assert!(residual >= -1e-12, "{phi} at {z}: residual {residual}");
            }
        }
    }

    let identity = SchwarzFunction::<f64>::monomial(1).unwrap();
    for &r in &radii {
        for &theta in &angles {
            let z = Complex::from_polar(r, theta);
            let residual = identity.schwarz_pick_residual(z).unwrap();
            assert!(residual.abs() <= 1e-12, "identity equality fails at {z}");
        }
    }

    println!("acceptance 10 schwarz-pick: PASS (100 random products, identity attains equality)");
}
