//! Schwarz functions, the half-plane subordination target, the Schwarz-Pick
//! residual, and the generators that build class members from a Schwarz
//! function.
//!
//! A Schwarz function here is `phi(z) = eta z^k B(z)` with `k >= 1`, `B` a
//! finite Blaschke product with zeros inside the disc, and `|eta| = 1`, plus
//! an explicit zero function. This family pins `phi(0) = 0`, `|phi| <= |z|`,
//! and keeps `phi'` in closed form through the product rule, so removable
//! singularities like `phi(z)/z` are evaluated exactly rather than by
//! cancellation-prone division.

use std::sync::Arc;

use num_complex::Complex;

use crate::catalog::AnalyticFunction;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::quad::{integrate_segment, QuadConfig};
use crate::scalar::{real, unit, Real};
use crate::series::TruncatedSeries;

/// Tolerance on `phi'(0)` for the inverse-condition generator precondition.
pub const PHI_PRIME_ORIGIN_TOL: f64 = 1e-12;

/// Grid tolerance for the Schwarz-Pick and `|phi| <= |z|` checks.
pub const SCHWARZ_GRID_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
enum Form<T: Real> {
    /// The constant zero function.
    Zero,
    /// `eta z^power prod_i (z - a_i)/(1 - conj(a_i) z)`.
    Product {
        power: usize,
        zeros: Vec<Complex<T>>,
        rotation: Complex<T>,
    },
}

/// Analytic self-map of the disc fixing the origin, with closed-form
/// derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwarzFunction<T: Real> {
    form: Form<T>,
}

impl<T: Real> SchwarzFunction<T> {
    /// The zero function (the degenerate subordination witness).
    pub fn zero() -> Self {
        Self { form: Form::Zero }
    }

    /// The monomial `z^k`, `k >= 1`.
    pub fn monomial(power: usize) -> Result<Self> {
        Self::new(power, Vec::new(), real(T::one()))
    }

    /// Builds `eta z^power B(z)`. Zeros at the origin are folded into the
    /// monomial factor; the total vanishing order must be >= 1, every
    /// remaining zero must satisfy `|a| < 1`, and `eta` must be unimodular.
    pub fn new(power: usize, zeros: Vec<Complex<T>>, rotation: Complex<T>) -> Result<Self> {
        let eps = T::of(1e-12);
        if (rotation.norm() - T::one()).abs() > eps {
            return Err(Error::Argument(format!(
                "rotation must be unimodular, got |eta| = {}",
                rotation.norm()
            )));
        }
        let mut k = power;
        let mut kept = Vec::with_capacity(zeros.len());
        for a in zeros {
            if a.norm() < eps {
                k += 1;
            } else if a.norm() < T::one() {
                kept.push(a);
            } else {
                return Err(Error::Argument(format!(
                    "Blaschke zero must satisfy |a| < 1, got |a| = {}",
                    a.norm()
                )));
            }
        }
        if k == 0 {
            return Err(Error::Argument(
                "Schwarz function must vanish at the origin (power >= 1)".into(),
            ));
        }
        Ok(Self {
            form: Form::Product {
                power: k,
                zeros: kept,
                rotation,
            },
        })
    }

    /// Vanishing order at the origin (`usize::MAX` for the zero function).
    pub fn origin_order(&self) -> usize {
        match &self.form {
            Form::Zero => usize::MAX,
            Form::Product { power, .. } => *power,
        }
    }

    /// Exact `phi'(0)`.
    pub fn derivative_at_origin(&self) -> Complex<T> {
        match &self.form {
            Form::Zero => Complex::new(T::zero(), T::zero()),
            Form::Product {
                power,
                zeros,
                rotation,
            } => {
                if *power >= 2 {
                    Complex::new(T::zero(), T::zero())
                } else {
                    let mut acc = *rotation;
                    for a in zeros {
                        acc = acc * (-*a);
                    }
                    acc
                }
            }
        }
    }

    fn blaschke_factor(a: Complex<T>, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let denom = real(T::one()) - a.conj() * z;
        let value = (z - a) / denom;
        let deriv = (real(T::one()) - a * a.conj()) / (denom * denom);
        (value, deriv)
    }

    /// Evaluates `(phi(z), phi'(z))` for `|z| < 1`.
    pub fn eval(&self, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        if z.norm() >= T::one() {
            return Err(Error::Domain(format!(
                "Schwarz function evaluated outside the open disc: |z| = {}",
                z.norm()
            )));
        }
        match &self.form {
            Form::Zero => Ok((
                Complex::new(T::zero(), T::zero()),
                Complex::new(T::zero(), T::zero()),
            )),
            Form::Product {
                power,
                zeros,
                rotation,
            } => {
                let k = *power;
                let (values, derivs): (Vec<_>, Vec<_>) = zeros
                    .iter()
                    .map(|&a| Self::blaschke_factor(a, z))
                    .unzip();
                let prod: Complex<T> = values
                    .iter()
                    .fold(real(T::one()), |acc, &v| acc * v);
                let mut zk1 = real(T::one()); // z^{k-1}
                for _ in 1..k {
                    zk1 = zk1 * z;
                }
                let zk = zk1 * z;
                let phi = *rotation * zk * prod;
                // product rule; leave-one-out products avoid dividing by a
                // vanishing factor at z = a_i
                let mut sum = Complex::new(T::zero(), T::zero());
                for i in 0..zeros.len() {
                    let mut rest = real(T::one());
                    for (j, &v) in values.iter().enumerate() {
                        if j != i {
                            rest = rest * v;
                        }
                    }
                    sum = sum + derivs[i] * rest;
                }
                let dphi = *rotation
                    * (zk1 * real(T::from_usize(k).unwrap()) * prod + zk * sum);
                Ok((phi, dphi))
            }
        }
    }

    /// Exact `phi(z)/z^j` for `j` at most the vanishing order; analytic on
    /// the whole disc including the origin.
    pub fn eval_deflated(&self, z: Complex<T>, j: usize) -> Result<Complex<T>> {
        match &self.form {
            Form::Zero => Ok(Complex::new(T::zero(), T::zero())),
            Form::Product {
                power,
                zeros,
                rotation,
            } => {
                if j > *power {
                    return Err(Error::Domain(format!(
                        "cannot deflate by z^{j}: vanishing order is {power}"
                    )));
                }
                let mut acc = *rotation;
                for _ in 0..(*power - j) {
                    acc = acc * z;
                }
                for &a in zeros {
                    acc = acc * Self::blaschke_factor(a, z).0;
                }
                Ok(acc)
            }
        }
    }

    /// Schwarz-Pick residual `(1 - |phi|^2)/(1 - |z|^2) - |phi'|`;
    /// nonnegative (up to roundoff) for every Schwarz function.
    pub fn schwarz_pick_residual(&self, z: Complex<T>) -> Result<T> {
        let (phi, dphi) = self.eval(z)?;
        let bound = (T::one() - phi.norm_sqr()) / (T::one() - z.norm_sqr());
        Ok(bound - dphi.norm())
    }

    /// Grid check of the defining inequalities: `|phi| < 1`,
    /// `|phi(z)| <= |z|`, and the Schwarz-Pick residual, all on `grid`.
    pub fn validate(&self, grid: &GridSpec<T>) -> Result<()> {
        grid.validate()?;
        let tol = T::of(SCHWARZ_GRID_TOL);
        for &r in &grid.radii() {
            for &theta in &grid.angles() {
                let z = unit(theta) * real(r);
                let (phi, _) = self.eval(z)?;
                if phi.norm() >= T::one() {
                    return Err(Error::Precondition(format!(
                        "|phi| >= 1 at z = {}+{}i",
                        z.re, z.im
                    )));
                }
                if phi.norm() > z.norm() + tol {
                    return Err(Error::Precondition(format!(
                        "|phi(z)| > |z| at z = {}+{}i",
                        z.re, z.im
                    )));
                }
                if self.schwarz_pick_residual(z)? < -tol {
                    return Err(Error::Precondition(format!(
                        "Schwarz-Pick violated at z = {}+{}i",
                        z.re, z.im
                    )));
                }
            }
        }
        Ok(())
    }

    /// Maclaurin coefficients through `order`.
    pub fn taylor(&self, order: usize) -> TruncatedSeries<T> {
        match &self.form {
            Form::Zero => TruncatedSeries::constant(Complex::new(T::zero(), T::zero()), order),
            Form::Product {
                power,
                zeros,
                rotation,
            } => {
                let mut acc = TruncatedSeries::constant(*rotation, order);
                for &a in zeros {
                    // (z - a)/(1 - conj(a) z) = -a + (1-|a|^2) sum conj(a)^{n-1} z^n
                    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); order + 1];
                    coeffs[0] = -a;
                    let scale = real(T::one() - a.norm_sqr());
                    let mut p = real(T::one());
                    for c in coeffs.iter_mut().skip(1) {
                        *c = scale * p;
                        p = p * a.conj();
                    }
                    let factor = TruncatedSeries::new(coeffs).expect("finite coefficients");
                    acc = acc.mul(&factor);
                }
                acc.shifted_up(*power).with_order(order)
            }
        }
    }
}

impl<T: Real> std::fmt::Display for SchwarzFunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.form {
            Form::Zero => write!(f, "0"),
            Form::Product {
                power,
                zeros,
                rotation,
            } => {
                if *power == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{power}")?;
                }
                if !zeros.is_empty() {
                    write!(f, "*blaschke:")?;
                    for (i, a) in zeros.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}{:+}i", a.re, a.im)?;
                    }
                }
                let one = real(T::one());
                if (*rotation - one).norm() > T::of(1e-12) {
                    write!(f, ":{}{:+}i", rotation.re, rotation.im)?;
                }
                Ok(())
            }
        }
    }
}

/// Conformal map of the disc onto the half-plane `{Re > alpha}` with
/// `F(0) = 1`: `F(w) = (1 + (1-2 alpha) w)/(1 - w)`.
pub fn halfplane_map<T: Real>(alpha: T, w: Complex<T>) -> Result<Complex<T>> {
    let one = real(T::one());
    let denom = one - w;
    if denom.norm() < T::of(1e-14) {
        return Err(Error::Singularity("half-plane map pole at w = 1".into()));
    }
    Ok((one + w * (T::one() - T::of(2.0) * alpha)) / denom)
}

/// Settings for the class-member generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig<T: Real> {
    pub quad: QuadConfig<T>,
    /// Termwise series integration is used for `|z|` up to this radius when
    /// the truncated tail meets the quadrature tolerance; otherwise the
    /// adaptive rule runs on the segment.
    pub fast_path_radius: T,
    /// Order of the precomputed integrand series backing the fast path.
    pub fast_path_order: usize,
    /// Grid for input validation and the pole scan of the inverse-condition
    /// generator.
    pub validation_grid: GridSpec<T>,
}

impl<T: Real> Default for GeneratorConfig<T> {
    fn default() -> Self {
        Self {
            quad: QuadConfig::default(),
            fast_path_radius: T::of(0.9),
            fast_path_order: 320,
            validation_grid: GridSpec::schwarz_default(),
        }
    }
}

/// Antiderivative along `[0, z]` of an analytic integrand, evaluated through
/// a guarded truncated series inside `fast_path_radius` and adaptive
/// quadrature elsewhere.
struct PathIntegral<T: Real> {
    antiderivative: TruncatedSeries<T>,
    /// `suffix_modulus[n] = max_{k >= n} |c_k|` over the antiderivative.
    suffix_modulus: Vec<T>,
    radius: T,
    quad: QuadConfig<T>,
    integrand: Arc<dyn Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync>,
}

impl<T: Real> PathIntegral<T> {
    fn new(
        integrand_series: &TruncatedSeries<T>,
        integrand: Arc<dyn Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync>,
        cfg: &GeneratorConfig<T>,
    ) -> Self {
        let antiderivative = integrand_series.integrate(Complex::new(T::zero(), T::zero()));
        let n = antiderivative.order();
        let mut suffix = vec![T::zero(); n + 2];
        for k in (0..=n).rev() {
            suffix[k] = suffix[k + 1].max(antiderivative.coeff(k).norm());
        }
        Self {
            antiderivative,
            suffix_modulus: suffix,
            radius: cfg.fast_path_radius,
            quad: cfg.quad,
            integrand,
        }
    }

    /// Termwise evaluation with a running tail bound; `None` when the
    /// truncated series cannot certify the tolerance at this radius.
    fn try_series(&self, z: Complex<T>, tol: T) -> Option<Complex<T>> {
        let r = z.norm();
        if r >= T::one() {
            return None;
        }
        let geo = T::one() / (T::one() - r);
        let order = self.antiderivative.order();
        // Beyond-truncation margin: the last stored coefficients must already
        // be negligible at this radius.
        let cut = order.saturating_sub(8);
        let mut r_cut = T::one();
        for _ in 0..cut {
            r_cut = r_cut * r;
        }
        if self.suffix_modulus[cut] * r_cut * geo >= tol / T::of(8.0) {
            return None;
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut pow = real(T::one());
        for n in 0..=order {
            acc = acc + self.antiderivative.coeff(n) * pow;
            pow = pow * z;
            let tail = self.suffix_modulus[n + 1] * pow.norm() * geo;
            if tail < tol / T::of(8.0) {
                return Some(acc);
            }
        }
        Some(acc)
    }

    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        if z.norm() <= self.radius {
            if let Some(v) = self.try_series(z, self.quad.abs_tol) {
                return Ok(v);
            }
        }
        integrate_segment(|t| (self.integrand)(t), z, &self.quad)
    }
}

fn two_one_minus_alpha<T: Real>(alpha: T) -> T {
    T::of(2.0) * (T::one() - alpha)
}

/// Zero count of an analytic function inside `|z| < radius` by the argument
/// principle: adaptive phase tracking of `g` around the circle. Errors when
/// `g` passes too close to zero on the circle itself.
fn count_zeros_on_circle<T: Real>(
    g: &impl Fn(Complex<T>) -> Result<Complex<T>>,
    radius: T,
) -> Result<i64> {
    const INITIAL_SEGMENTS: usize = 128;
    let tau = T::PI() + T::PI();
    let at = |theta: T| g(unit(theta) * real(radius));
    let mut stack: Vec<(T, Complex<T>, T, Complex<T>, u32)> =
        Vec::with_capacity(INITIAL_SEGMENTS);
    let mut prev_theta = T::zero();
    let mut prev_value = at(prev_theta)?;
    let first = prev_value;
    for k in 1..=INITIAL_SEGMENTS {
        let theta = tau * T::from_usize(k).unwrap() / T::from_usize(INITIAL_SEGMENTS).unwrap();
        let value = if k == INITIAL_SEGMENTS { first } else { at(theta)? };
        stack.push((prev_theta, prev_value, theta, value, 0));
        prev_theta = theta;
        prev_value = value;
    }

    let half_pi = T::PI() / T::of(2.0);
    let mut total = T::zero();
    while let Some((a, va, b, vb, depth)) = stack.pop() {
        if va.norm() < T::of(1e-13) || vb.norm() < T::of(1e-13) {
            return Err(Error::Numeric(
                "argument-principle scan hit a zero on the circle".into(),
            ));
        }
        let step = (vb / va).arg();
        if step.abs() < half_pi {
            total = total + step;
        } else if depth >= 30 {
            return Err(Error::Numeric(
                "argument-principle scan could not resolve the phase near the circle".into(),
            ));
        } else {
            let mid = (a + b) / T::of(2.0);
            let vm = at(mid)?;
            stack.push((a, va, mid, vm, depth + 1));
            stack.push((mid, vm, b, vb, depth + 1));
        }
    }
    Ok((total / tau).round().to_f64().map(|x| x as i64).unwrap_or(0))
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha < T::zero() || alpha >= T::one() {
        return Err(Error::Argument(format!(
            "alpha must lie in [0, 1), got {alpha}"
        )));
    }
    Ok(())
}

/// Shared denominator guard: `1 - phi` and `1 + (1-2 alpha) phi` stay away
/// from zero strictly inside the disc; hitting the guard means the input was
/// not a Schwarz function.
fn guarded_inv<T: Real>(denom: Complex<T>, what: &str, z: Complex<T>) -> Result<Complex<T>> {
    if denom.norm() < T::of(1e-14) {
        return Err(Error::Singularity(format!(
            "{what} vanished at z = {}+{}i",
            z.re, z.im
        )));
    }
    Ok(denom.inv())
}

/// Builds `f` with `z f'/f = F(phi)`, i.e. a starlike function of order
/// `alpha` realized through subordination:
/// `f(z) = z exp( \int_0^z (F(phi(t)) - 1)/t dt )`.
pub fn generate_starlike<T: Real>(
    alpha: T,
    phi: &SchwarzFunction<T>,
    cfg: &GeneratorConfig<T>,
) -> Result<AnalyticFunction<T>> {
    check_alpha(alpha)?;
    phi.validate(&cfg.validation_grid)?;
    let c = two_one_minus_alpha(alpha);
    let lam = T::one() - T::of(2.0) * alpha;

    let phi_for_integrand = phi.clone();
    let integrand: Arc<dyn Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync> =
        Arc::new(move |t| {
            let deflated = phi_for_integrand.eval_deflated(t, 1)?;
            let value = deflated * t;
            let inv = guarded_inv(real(T::one()) - value, "1 - phi", t)?;
            Ok(deflated * inv * c)
        });

    let m = cfg.fast_path_order;
    let phi_series = phi.taylor(m);
    let one = TruncatedSeries::constant(real(T::one()), m);
    let q_series = phi_series
        .shifted_down(1)
        .expect("phi vanishes at the origin")
        .with_order(m)
        .mul(&one.sub(&phi_series).recip().expect("1 - phi(0) = 1"))
        .scale(real(c));
    let integral = Arc::new(PathIntegral::new(&q_series, integrand, cfg));

    let phi_t = phi.clone();
    let pre_schwarzian: Arc<dyn Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync> =
        Arc::new(move |z| {
            let (value, deriv) = phi_t.eval(z)?;
            let deflated = phi_t.eval_deflated(z, 1)?;
            let inv_a = guarded_inv(real(T::one()) - value, "1 - phi", z)?;
            let inv_b = guarded_inv(real(T::one()) + value * lam, "1 + (1-2a) phi", z)?;
            Ok((deflated * inv_a + deriv * inv_a * inv_b) * c)
        });

    let phi_e = phi.clone();
    let ps = Arc::clone(&pre_schwarzian);
    let integral_e = Arc::clone(&integral);
    let eval: Arc<dyn Fn(Complex<T>) -> Result<(Complex<T>, Complex<T>, Complex<T>)> + Send + Sync> =
        Arc::new(move |z| {
            let i = integral_e.eval(z)?;
            let e = i.exp();
            let (value, _) = phi_e.eval(z)?;
            let f = z * e;
            let fp = e * halfplane_map(alpha, value)?;
            let fpp = ps(z)? * fp;
            Ok((f, fp, fpp))
        });

    let phi_s = phi.clone();
    let taylor: Arc<dyn Fn(usize) -> Vec<Complex<T>> + Send + Sync> = Arc::new(move |n| {
        let p = phi_s.taylor(n);
        let one = TruncatedSeries::constant(real(T::one()), n);
        let q = p
            .shifted_down(1)
            .expect("phi vanishes at the origin")
            .with_order(n)
            .mul(&one.sub(&p).recip().expect("1 - phi(0) = 1"))
            .scale(real(c));
        let f = q
            .integrate(Complex::new(T::zero(), T::zero()))
            .exp()
            .shifted_up(1)
            .with_order(n);
        f.coeffs().to_vec()
    });

    Ok(AnalyticFunction::from_parts(
        format!("starlike[alpha={alpha}, phi={phi}]"),
        Some(alpha),
        eval,
        None,
        Some(taylor),
        Some(pre_schwarzian),
    ))
}

/// Builds `f` with `f/(z f') = F(phi)` — the inverse-side starlike
/// condition in subordination form:
/// `f(z) = z exp( -2(1-alpha) \int_0^z phi(t) / (t (1 + (1-2 alpha) phi(t))) dt )`.
pub fn generate_inverse_starlike<T: Real>(
    alpha: T,
    phi: &SchwarzFunction<T>,
    cfg: &GeneratorConfig<T>,
) -> Result<AnalyticFunction<T>> {
    check_alpha(alpha)?;
    phi.validate(&cfg.validation_grid)?;
    let c = two_one_minus_alpha(alpha);
    let lam = T::one() - T::of(2.0) * alpha;

    let phi_for_integrand = phi.clone();
    let integrand: Arc<dyn Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync> =
        Arc::new(move |t| {
            let deflated = phi_for_integrand.eval_deflated(t, 1)?;
            let value = deflated * t;
            let inv = guarded_inv(real(T::one()) + value * lam, "1 + (1-2a) phi", t)?;
            Ok(-deflated * inv * c)
        });

    let m = cfg.fast_path_order;
    let phi_series = phi.taylor(m);
    let one = TruncatedSeries::constant(real(T::one()), m);
    let q_series = phi_series
        .shifted_down(1)
        .expect("phi vanishes at the origin")
        .with_order(m)
        .mul(
            &one.add(&phi_series.scale(real(lam)))
                .recip()
                .expect("denominator is 1 at the origin"),
        )
        .scale(real(-c));
    let integral = Arc::new(PathIntegral::new(&q_series, integrand, cfg));

    // pre-Schwarzian straight from the subordination identity:
    // T_f = 2(alpha-1) [ (phi/z) + phi'/(1-phi) ] / (1 + (1-2 alpha) phi)
    let phi_t = phi.clone();
    let pre_schwarzian: Arc<dyn Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync> =
        Arc::new(move |z| {
            let (value, deriv) = phi_t.eval(z)?;
            let deflated = phi_t.eval_deflated(z, 1)?;
            let inv_a = guarded_inv(real(T::one()) - value, "1 - phi", z)?;
            let inv_b = guarded_inv(real(T::one()) + value * lam, "1 + (1-2a) phi", z)?;
            Ok((deflated * inv_b + deriv * inv_a * inv_b) * (-c))
        });

    let phi_e = phi.clone();
    let ps = Arc::clone(&pre_schwarzian);
    let integral_e = Arc::clone(&integral);
    let eval: Arc<dyn Fn(Complex<T>) -> Result<(Complex<T>, Complex<T>, Complex<T>)> + Send + Sync> =
        Arc::new(move |z| {
            let i = integral_e.eval(z)?;
            let e = i.exp();
            let (value, _) = phi_e.eval(z)?;
            let inv_b = guarded_inv(real(T::one()) + value * lam, "1 + (1-2a) phi", z)?;
            let f = z * e;
            let fp = e * (real(T::one()) - value) * inv_b;
            let fpp = ps(z)? * fp;
            Ok((f, fp, fpp))
        });

    let phi_s = phi.clone();
    let taylor: Arc<dyn Fn(usize) -> Vec<Complex<T>> + Send + Sync> = Arc::new(move |n| {
        let p = phi_s.taylor(n);
        let one = TruncatedSeries::constant(real(T::one()), n);
        let q = p
            .shifted_down(1)
            .expect("phi vanishes at the origin")
            .with_order(n)
            .mul(
                &one.add(&p.scale(real(lam)))
                    .recip()
                    .expect("denominator is 1 at the origin"),
            )
            .scale(real(-c));
        let f = q
            .integrate(Complex::new(T::zero(), T::zero()))
            .exp()
            .shifted_up(1)
            .with_order(n);
        f.coeffs().to_vec()
    });

    Ok(AnalyticFunction::from_parts(
        format!("inv-starlike[alpha={alpha}, phi={phi}]"),
        Some(alpha),
        eval,
        None,
        Some(taylor),
        Some(pre_schwarzian),
    ))
}

/// Builds `f` with `(z/f)^2 f' = F(phi)`. Requires `phi'(0) = 0`: the left
/// side is `1 + (a_3 - a_2^2) z^2 + O(z^3)`, with no linear term, so the
/// subordination witness cannot have one either. The function comes from the
/// exact quadrature `1/f(z) = 1/z - \int_0^z (F(phi(t)) - 1)/t^2 dt`.
pub fn generate_v<T: Real>(
    alpha: T,
    phi: &SchwarzFunction<T>,
    cfg: &GeneratorConfig<T>,
) -> Result<AnalyticFunction<T>> {
    check_alpha(alpha)?;
    let slope = phi.derivative_at_origin().norm();
    if slope > T::of(PHI_PRIME_ORIGIN_TOL) {
        return Err(Error::Precondition(format!(
            "inverse-condition generator needs phi'(0) = 0, got |phi'(0)| = {slope}"
        )));
    }
    phi.validate(&cfg.validation_grid)?;
    let c = two_one_minus_alpha(alpha);
    let lam = T::one() - T::of(2.0) * alpha;

    // R'(t) = (F(phi) - 1)/t^2 = 2(1-alpha) (phi/t^2) / (1 - phi)
    let phi_for_integrand = phi.clone();
    let integrand: Arc<dyn Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync> =
        Arc::new(move |t| {
            let deflated2 = phi_for_integrand.eval_deflated(t, 2)?;
            let value = phi_for_integrand.eval_deflated(t, 1)? * t;
            let inv = guarded_inv(real(T::one()) - value, "1 - phi", t)?;
            Ok(deflated2 * inv * c)
        });

    let m = cfg.fast_path_order;
    let phi_series = phi.taylor(m);
    let one = TruncatedSeries::constant(real(T::one()), m);
    let q_series = phi_series
        .shifted_down(2)
        .expect("phi vanishes to second order")
        .with_order(m)
        .mul(&one.sub(&phi_series).recip().expect("1 - phi(0) = 1"))
        .scale(real(c));
    let integral = Arc::new(PathIntegral::new(&q_series, integrand, cfg));

    // Pole scan: 1/z - R(z) vanishing inside the evaluation set makes f
    // meromorphic there, which puts it outside the class. The zero count
    // comes from the argument principle on the outer scan circle; the
    // construction is rejected if any zero lies inside.
    let scan_radius = cfg.validation_grid.r_max;
    let scan = {
        let integral = Arc::clone(&integral);
        move |z: Complex<T>| Ok(real(T::one()) - z * integral.eval(z)?)
    };
    let zeros = count_zeros_on_circle(&scan, scan_radius)?;
    if zeros != 0 {
        return Err(Error::Numeric(format!(
            "pole diagnostic: 1/z - R(z) has {zeros} zero(s) inside |z| <= {scan_radius}; function rejected"
        )));
    }

    let phi_t = phi.clone();
    let integrand_t = Arc::clone(&integral);
    // T_f assembled from the logarithmic derivative of the defining
    // identity: 2 (f'/f - 1/z) + (1-2a) phi'/(1+(1-2a) phi) + phi'/(1-phi),
    // with f'/f - 1/z = (R + z R')/(1 - z R).
    let pre_schwarzian: Arc<dyn Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync> =
        Arc::new(move |z| {
            let (value, deriv) = phi_t.eval(z)?;
            let rz = integrand_t.eval(z)?;
            let rp = (integrand_t.integrand)(z)?;
            let inv_denom = guarded_inv(real(T::one()) - z * rz, "1 - z R", z)?;
            let inv_a = guarded_inv(real(T::one()) - value, "1 - phi", z)?;
            let inv_b = guarded_inv(real(T::one()) + value * lam, "1 + (1-2a) phi", z)?;
            Ok((rz + z * rp) * inv_denom * T::of(2.0)
                + deriv * inv_b * lam
                + deriv * inv_a)
        });

    let phi_e = phi.clone();
    let ps = Arc::clone(&pre_schwarzian);
    let integral_e = Arc::clone(&integral);
    let eval: Arc<dyn Fn(Complex<T>) -> Result<(Complex<T>, Complex<T>, Complex<T>)> + Send + Sync> =
        Arc::new(move |z| {
            let rz = integral_e.eval(z)?;
            let inv_denom = guarded_inv(real(T::one()) - z * rz, "1 - z R", z)?;
            let (value, _) = phi_e.eval(z)?;
            let f_over_z = inv_denom;
            let f = z * f_over_z;
            let fp = halfplane_map(alpha, value)? * f_over_z * f_over_z;
            let fpp = ps(z)? * fp;
            Ok((f, fp, fpp))
        });

    let phi_s = phi.clone();
    let taylor: Arc<dyn Fn(usize) -> Vec<Complex<T>> + Send + Sync> = Arc::new(move |n| {
        let p = phi_s.taylor(n);
        let one = TruncatedSeries::constant(real(T::one()), n);
        let q = p
            .shifted_down(2)
            .expect("phi vanishes to second order")
            .with_order(n)
            .mul(&one.sub(&p).recip().expect("1 - phi(0) = 1"))
            .scale(real(c));
        let r = q.integrate(Complex::new(T::zero(), T::zero()));
        let denom = one.sub(&r.shifted_up(1).with_order(n));
        let f = denom
            .recip()
            .expect("denominator is 1 at the origin")
            .shifted_up(1)
            .with_order(n);
        f.coeffs().to_vec()
    });

    Ok(AnalyticFunction::from_parts(
        format!("v[alpha={alpha}, phi={phi}]"),
        Some(alpha),
        eval,
        None,
        Some(taylor),
        Some(pre_schwarzian),
    ))
}
