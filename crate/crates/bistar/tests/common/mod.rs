//! Shared test oracles, independent of the library's implementation paths.

#![allow(dead_code)]

use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use bistar::catalog::AnalyticFunction;
use bistar::error::Error;
use bistar::schwarz::{generate_v, GeneratorConfig, SchwarzFunction};
use bistar::series::TruncatedSeries;

pub type C64 = Complex<f64>;
pub type Series = TruncatedSeries<f64>;

/// Compositional inverse by the direct triangular recurrence: with
/// `h = f/c_1` normalized, powers `h^k` are built incrementally and
/// `b_n = -sum_{k<n} b_k [z^n] h^k` solves `sum_k b_k h(z)^k = z` term by
/// term. Wholly independent of the Newton path used by `revert`.
pub fn revert_triangular(f: &Series) -> Series {
    assert!(f.coeff(0).norm() == 0.0, "oracle needs c0 = 0");
    let slope = f.coeff(1);
    assert!(slope.norm() > 0.0, "oracle needs c1 != 0");
    let n = f.order();
    let h = f.scale(slope.inv());

    // powers[k] = h^{k+1}
    let mut powers: Vec<Series> = Vec::with_capacity(n);
    powers.push(h.clone());
    for k in 1..n {
        let next = powers[k - 1].mul(&h);
        powers.push(next);
    }

    let mut b = vec![Complex::new(0.0, 0.0); n + 1];
    if n >= 1 {
        b[1] = Complex::new(1.0, 0.0);
    }
    for m in 2..=n {
        let mut acc = Complex::new(0.0, 0.0);
        for k in 1..m {
            acc += b[k] * powers[k - 1].coeff(m);
        }
        b[m] = -acc;
    }
    TruncatedSeries::new(b)
        .unwrap()
        .scale_argument(slope.inv())
}

/// Convergence-radius estimate by the ratio test, averaged over the last
/// eight coefficient ratios.
pub fn ratio_radius(s: &Series) -> f64 {
    let n = s.order();
    let mut acc = 0.0;
    let mut count = 0;
    for k in (n.saturating_sub(8))..n {
        let a = s.coeff(k).norm();
        let b = s.coeff(k + 1).norm();
        if a > 0.0 && b > 0.0 {
            acc += a / b;
            count += 1;
        }
    }
    assert!(count > 0, "ratio test needs nonzero tail coefficients");
    acc / count as f64
}

/// Random Blaschke-form Schwarz function with vanishing order at least
/// `min_power`; zeros stay within `|a| <= 0.75`.
pub fn random_schwarz(rng: &mut ChaCha8Rng, min_power: usize) -> SchwarzFunction<f64> {
    let power = min_power + rng.gen_range(0..2usize);
    let n_zeros = rng.gen_range(0..=3usize);
    let zeros: Vec<C64> = (0..n_zeros)
        .map(|_| {
            let r = 0.75 * rng.gen::<f64>().sqrt();
            let t = std::f64::consts::TAU * rng.gen::<f64>();
            Complex::from_polar(r, t)
        })
        .collect();
    let eta = Complex::from_polar(1.0, std::f64::consts::TAU * rng.gen::<f64>());
    SchwarzFunction::new(power, zeros, eta).expect("parameters in range")
}

/// Uniform complex draw from the square `[-1, 1]^2`.
pub fn random_unit_square(rng: &mut ChaCha8Rng) -> C64 {
    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Draws `(alpha, phi)` pairs until the inverse-condition generator accepts
/// one (the construction legitimately rejects draws whose quadrature puts a
/// pole of `f` inside the scan disc). Returns the accepted triple and the
/// number of rejected draws.
pub fn random_accepted_v(
    rng: &mut ChaCha8Rng,
    cfg: &GeneratorConfig<f64>,
) -> (f64, SchwarzFunction<f64>, AnalyticFunction<f64>, usize) {
    let mut rejected = 0;
    for _ in 0..400 {
        let alpha = rng.gen_range(0.0..0.95);
        let phi = random_schwarz(rng, 2);
        match generate_v(alpha, &phi, cfg) {
            Ok(f) => return (alpha, phi, f, rejected),
            Err(Error::Numeric(msg)) if msg.contains("pole diagnostic") => rejected += 1,
            Err(e) => panic!("unexpected generator failure: {e}"),
        }
    }
    panic!("no accepted inverse-condition construction in 400 draws");
}

/// Derivative oracle: 12-point trapezoidal stencil on a circle of radius
/// `rho` around `z`; geometric accuracy for evaluators analytic nearby.
pub fn stencil_derivative(g: impl Fn(C64) -> C64, z: C64, rho: f64) -> C64 {
    const M: usize = 12;
    let mut acc = Complex::new(0.0, 0.0);
    for k in 0..M {
        let theta = std::f64::consts::TAU * k as f64 / M as f64;
        let w = Complex::from_polar(1.0, theta);
        acc += g(z + w * rho) * Complex::from_polar(1.0, -theta);
    }
    acc / (rho * M as f64)
}

/// Sample points filling `|z| <= r_cap` (away from the origin), used by the
/// identity-residual sweeps.
pub fn disc_samples(r_cap: f64, n_radii: usize, n_angles: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n_radii * n_angles);
    for i in 1..=n_radii {
        let r = r_cap * i as f64 / n_radii as f64;
        for j in 0..n_angles {
            let t = std::f64::consts::TAU * j as f64 / n_angles as f64;
            out.push(Complex::from_polar(r, t));
        }
    }
    out
}
