//! Closed-form evaluator bundles for the named disc functions, their
//! derivatives, and inverses.
//!
//! Every entry is normalized (`f(0) = 0`, `f'(0) = 1`) and locally univalent
//! on the open disc. All powers and logarithms use the principal branch;
//! `1 - z` stays in the right half-plane for `|z| < 1`, so the branch choice
//! is globally consistent for every entry below.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_finite, real, unit, Real};
use crate::series::TruncatedSeries;

type Triple<T> = (Complex<T>, Complex<T>, Complex<T>);
type EvalFn<T> = dyn Fn(Complex<T>) -> Result<Triple<T>> + Send + Sync;
type MapFn<T> = dyn Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync;
type TaylorFn<T> = dyn Fn(usize) -> Vec<Complex<T>> + Send + Sync;

/// Radius of the sampling circle used by the Fourier coefficient fallback.
const FOURIER_RADIUS: f64 = 0.5;

/// Evaluator bundle for an analytic function on the unit disc: `f`, `f'`,
/// `f''`, plus optional closed-form inverse, exact Taylor coefficients, and
/// a closed-form pre-Schwarzian (supplied by the generators).
#[derive(Clone)]
pub struct AnalyticFunction<T: Real> {
    name: String,
    alpha: Option<T>,
    eval: Arc<EvalFn<T>>,
    inverse: Option<Arc<MapFn<T>>>,
    taylor: Option<Arc<TaylorFn<T>>>,
    pre_schwarzian: Option<Arc<MapFn<T>>>,
}

impl<T: Real> std::fmt::Debug for AnalyticFunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("has_inverse", &self.inverse.is_some())
            .field("has_taylor", &self.taylor.is_some())
            .finish()
    }
}

fn guard_finite<T: Real>(name: &str, z: Complex<T>, v: Triple<T>) -> Result<Triple<T>> {
    if is_finite(v.0) && is_finite(v.1) && is_finite(v.2) {
        Ok(v)
    } else {
        Err(Error::Singularity(format!(
            "{name} not finite at z = {}+{}i",
            z.re, z.im
        )))
    }
}

impl<T: Real> AnalyticFunction<T> {
    /// Assembles a function from raw parts. Used by the generators; catalog
    /// entries come from the named constructors below.
    pub fn from_parts(
        name: String,
        alpha: Option<T>,
        eval: Arc<EvalFn<T>>,
        inverse: Option<Arc<MapFn<T>>>,
        taylor: Option<Arc<TaylorFn<T>>>,
        pre_schwarzian: Option<Arc<MapFn<T>>>,
    ) -> Self {
        Self {
            name,
            alpha,
            eval,
            inverse,
            taylor,
            pre_schwarzian,
        }
    }

    /// Wraps a bare evaluator (no inverse, no exact coefficients).
    pub fn from_eval(
        name: &str,
        eval: impl Fn(Complex<T>) -> Result<Triple<T>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            alpha: None,
            eval: Arc::new(eval),
            inverse: None,
            taylor: None,
            pre_schwarzian: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alpha(&self) -> Option<T> {
        self.alpha
    }

    pub fn has_closed_form_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    /// Closed-form pre-Schwarzian `f''/f'` when the constructor supplied one.
    pub fn closed_form_pre_schwarzian(&self) -> Option<&Arc<MapFn<T>>> {
        self.pre_schwarzian.as_ref()
    }

    /// Evaluates `(f, f', f'')` at `z`.
    pub fn eval(&self, z: Complex<T>) -> Result<Triple<T>> {
        (self.eval)(z)
    }

    pub fn f(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self.eval(z)?.0)
    }

    pub fn df(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self.eval(z)?.1)
    }

    /// Evaluates the closed-form inverse `g(w)`.
    pub fn inverse_eval(&self, w: Complex<T>) -> Result<Complex<T>> {
        match &self.inverse {
            Some(g) => g(w),
            None => Err(Error::Unsupported(format!(
                "{} has no closed-form inverse",
                self.name
            ))),
        }
    }

    /// Maclaurin coefficients through order `n`: exact when the entry
    /// provides them, otherwise discrete-Fourier extraction on the circle
    /// `|z| = 1/2`.
    pub fn taylor(&self, n: usize) -> Result<TruncatedSeries<T>> {
        let n = n.max(1);
        if let Some(gen) = &self.taylor {
            return TruncatedSeries::new(gen(n));
        }
        self.taylor_by_sampling(n)
    }

    fn taylor_by_sampling(&self, n: usize) -> Result<TruncatedSeries<T>> {
        // Aliasing error decays like r^m past m sample points; at r = 1/2 a
        // margin of 64 indices puts it below 1e-19.
        let m = (n + 1 + 64).next_power_of_two();
        let r = T::of(FOURIER_RADIUS);
        let tau = T::PI() + T::PI();
        let samples: Vec<Complex<T>> = (0..m)
            .map(|j| {
                let theta = tau * T::from_usize(j).unwrap() / T::from_usize(m).unwrap();
                self.f(unit(theta) * real(r)).map(|v| v)
            })
            .collect::<Result<_>>()?;
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut r_pow = T::one();
        for k in 0..=n {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (j, &s) in samples.iter().enumerate() {
                let theta =
                    -tau * T::from_usize(k * j % m).unwrap() / T::from_usize(m).unwrap();
                acc = acc + s * unit(theta);
            }
            coeffs.push(acc / real(T::from_usize(m).unwrap() * r_pow));
            r_pow = r_pow * r;
        }
        TruncatedSeries::new(coeffs)
    }

    /// Identity map `z`.
    pub fn identity() -> Self {
        Self {
            name: "identity".into(),
            alpha: None,
            eval: Arc::new(|z| {
                Ok((z, real(T::one()), Complex::new(T::zero(), T::zero())))
            }),
            inverse: Some(Arc::new(|w| Ok(w))),
            taylor: Some(Arc::new(|n| {
                let mut c = vec![Complex::new(T::zero(), T::zero()); n + 1];
                c[1] = real(T::one());
                c
            })),
            pre_schwarzian: None,
        }
    }

    /// Koebe function `z/(1-z)^2`, extremal for the univalent norm bound.
    pub fn koebe() -> Self {
        Self {
            name: "koebe".into(),
            alpha: None,
            eval: Arc::new(|z| {
                let one = real(T::one());
                let u = one - z;
                let u2 = u * u;
                let f = z / u2;
                let fp = (one + z) / (u2 * u);
                let fpp = (real(T::of(4.0)) + z * T::of(2.0)) / (u2 * u2);
                guard_finite("koebe", z, (f, fp, fpp))
            }),
            inverse: None,
            taylor: Some(Arc::new(|n| {
                (0..=n)
                    .map(|k| real(T::from_usize(k).unwrap()))
                    .collect()
            })),
            pre_schwarzian: None,
        }
    }

    /// Generalized Koebe function `z/(1-z)^{2(1-alpha)}`, the extremal
    /// starlike function of order `alpha`.
    pub fn gen_koebe(alpha: T) -> Result<Self> {
        check_alpha(alpha)?;
        let beta = T::of(2.0) * (T::one() - alpha);
        Ok(Self {
            name: format!("gen_koebe({alpha})"),
            alpha: Some(alpha),
            eval: Arc::new(move |z| {
                let one = real(T::one());
                let u = one - z;
                // principal branch: u^{-p} = exp(-p ln u)
                let pow = |p: T| (u.ln() * real(-p)).exp();
                let f = z * pow(beta);
                let fp = pow(beta + T::one()) * (one + z * (beta - T::one()));
                let fpp = pow(beta + T::of(2.0))
                    * real(beta)
                    * (real(T::of(2.0)) + z * (beta - T::one()));
                guard_finite("gen_koebe", z, (f, fp, fpp))
            }),
            inverse: None,
            taylor: Some(Arc::new(move |n| {
                // z (1-z)^{-beta}: binomial recurrence b_k = b_{k-1}(beta+k-1)/k
                let mut c = vec![Complex::new(T::zero(), T::zero()); n + 1];
                let mut b = T::one();
                for k in 0..n {
                    c[k + 1] = real(b);
                    let kf = T::from_usize(k + 1).unwrap();
                    b = b * (beta + kf - T::one()) / kf;
                }
                c
            })),
            pre_schwarzian: None,
        })
    }

    /// Right half-plane map `f1(z) = z/(1-z)`.
    pub fn half_plane() -> Self {
        Self {
            name: "f1".into(),
            alpha: None,
            eval: Arc::new(|z| {
                let one = real(T::one());
                let u = one - z;
                let f = z / u;
                let fp = (u * u).inv();
                let fpp = fp * u.inv() * T::of(2.0);
                guard_finite("f1", z, (f, fp, fpp))
            }),
            inverse: Some(Arc::new(|w| {
                let d = real(T::one()) + w;
                if d.norm() < T::of(1e-14) {
                    return Err(Error::Singularity("f1 inverse pole at w = -1".into()));
                }
                Ok(w / d)
            })),
            taylor: Some(Arc::new(|n| {
                let mut c = vec![real(T::one()); n + 1];
                c[0] = Complex::new(T::zero(), T::zero());
                c
            })),
            pre_schwarzian: None,
        }
    }

    /// Logarithmic map `f2(z) = -log(1-z)`.
    pub fn log_map() -> Self {
        Self {
            name: "f2".into(),
            alpha: None,
            eval: Arc::new(|z| {
                let one = real(T::one());
                let u = one - z;
                let f = -u.ln();
                let fp = u.inv();
                let fpp = fp * fp;
                guard_finite("f2", z, (f, fp, fpp))
            }),
            inverse: Some(Arc::new(|w| Ok(real(T::one()) - (-w).exp()))),
            taylor: Some(Arc::new(|n| {
                let mut c = vec![Complex::new(T::zero(), T::zero()); n + 1];
                for (k, item) in c.iter_mut().enumerate().skip(1) {
                    *item = real(T::one() / T::from_usize(k).unwrap());
                }
                c
            })),
            pre_schwarzian: None,
        }
    }

    /// Hyperbolic arctangent map `f3(z) = (1/2) log((1+z)/(1-z))`.
    pub fn atanh_map() -> Self {
        Self {
            name: "f3".into(),
            alpha: None,
            eval: Arc::new(|z| {
                let one = real(T::one());
                let half = real(T::of(0.5));
                let f = ((one + z).ln() - (one - z).ln()) * half;
                let v = one - z * z;
                let fp = v.inv();
                let fpp = z * T::of(2.0) / (v * v);
                guard_finite("f3", z, (f, fp, fpp))
            }),
            inverse: Some(Arc::new(|w| {
                let e = (w * T::of(2.0)).exp();
                let d = e + real(T::one());
                if d.norm() < T::of(1e-14) {
                    return Err(Error::Singularity("f3 inverse pole".into()));
                }
                Ok((e - real(T::one())) / d)
            })),
            taylor: Some(Arc::new(|n| {
                let mut c = vec![Complex::new(T::zero(), T::zero()); n + 1];
                for (k, item) in c.iter_mut().enumerate().skip(1) {
                    if k % 2 == 1 {
                        *item = real(T::one() / T::from_usize(k).unwrap());
                    }
                }
                c
            })),
            pre_schwarzian: None,
        }
    }

    /// Looks an entry up by its stable CLI name. `gen_koebe` takes its
    /// parameter either inline (`gen_koebe:0.25`) or via `alpha`.
    pub fn by_name(name: &str, alpha: Option<T>) -> Result<Self> {
        let (base, inline) = match name.split_once(':') {
            Some((b, a)) => {
                let parsed = a.parse::<f64>().map_err(|_| {
                    Error::Argument(format!("bad parameter in function name '{name}'"))
                })?;
                (b, Some(T::of(parsed)))
            }
            None => (name, None),
        };
        let alpha = inline.or(alpha);
        match base {
            "identity" | "id" => Ok(Self::identity()),
            "koebe" => Ok(Self::koebe()),
            "gen_koebe" => {
                let a = alpha.ok_or_else(|| {
                    Error::Argument("gen_koebe requires alpha (e.g. gen_koebe:0.25)".into())
                })?;
                Self::gen_koebe(a)
            }
            "f1" | "half_plane" => Ok(Self::half_plane()),
            "f2" | "log_map" => Ok(Self::log_map()),
            "f3" | "atanh_map" => Ok(Self::atanh_map()),
            other => Err(Error::Argument(format!("unknown function '{other}'"))),
        }
    }
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha < T::zero() || alpha >= T::one() {
        return Err(Error::Argument(format!(
            "alpha must lie in [0, 1), got {alpha}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = AnalyticFunction<f64>;

    #[test]
    fn koebe_taylor_matches_n_z_to_n() {
        let t = F::koebe().taylor(5).unwrap();
        for n in 0..=5 {
            assert!((t.coeff(n) - real(n as f64)).norm() < 1e-15);
        }
    }

    #[test]
    fn gen_koebe_at_zero_is_koebe() {
        let a = F::gen_koebe(0.0).unwrap().taylor(8).unwrap();
        let b = F::koebe().taylor(8).unwrap();
        assert!(a.max_coeff_distance(&b) < 1e-12);
    }

    #[test]
    fn gen_koebe_at_half_is_half_plane_map() {
        let a = F::gen_koebe(0.5).unwrap().taylor(3).unwrap();
        let b = TruncatedSeries::from_real(&[0.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(a.max_coeff_distance(&b) < 1e-14);
    }

    #[test]
    fn half_plane_derivatives_at_half() {
        let (f, fp, fpp) = F::half_plane().eval(real(0.5)).unwrap();
        assert!((f - real(1.0)).norm() < 1e-14);
        assert!((fp - real(4.0)).norm() < 1e-14);
        assert!((fpp - real(16.0)).norm() < 1e-13);
    }

    #[test]
    fn log_map_taylor_is_harmonic_sequence() {
        let t = F::log_map().taylor(4).unwrap();
        let want = TruncatedSeries::from_real(&[0.0, 1.0, 0.5, 1.0 / 3.0, 0.25]).unwrap();
        assert!(t.max_coeff_distance(&want) < 1e-15);
    }

    #[test]
    fn inverses_round_trip() {
        for f in [F::half_plane(), F::log_map(), F::atanh_map()] {
            for z in [real(0.3), Complex::new(-0.4, 0.5), Complex::new(0.2, -0.7)] {
                let w = f.f(z).unwrap();
                let back = f.inverse_eval(w).unwrap();
                assert!((back - z).norm() < 1e-12, "{} at {z}", f.name());
            }
        }
    }

    #[test]
    fn half_plane_inverse_values() {
        let f1 = F::half_plane();
        assert_eq!(f1.inverse_eval(real(0.0)).unwrap(), real(0.0));
        assert!((f1.inverse_eval(real(1.0)).unwrap() - real(0.5)).norm() < 1e-15);
    }

    #[test]
    fn missing_inverse_is_unsupported() {
        assert!(matches!(
            F::koebe().inverse_eval(real(0.1)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn fourier_fallback_matches_exact_coefficients() {
        let exact = F::koebe().taylor(10).unwrap();
        let bare = F::from_eval("koebe-bare", move |z| F::koebe().eval(z));
        let sampled = bare.taylor(10).unwrap();
        assert!(sampled.max_coeff_distance(&exact) < 1e-10);
    }

    #[test]
    fn by_name_parses_inline_parameter() {
        let f = F::by_name("gen_koebe:0.25", None).unwrap();
        assert_eq!(f.alpha(), Some(0.25));
        assert!(F::by_name("gen_koebe:1.5", None).is_err());
        assert!(F::by_name("nope", None).is_err());
    }

    #[test]
    fn koebe_errors_at_its_pole() {
        assert!(F::koebe().eval(real(1.0)).is_err());
    }
}
