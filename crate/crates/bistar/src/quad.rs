//! Adaptive Gauss-Legendre quadrature along straight segments `[0, z]`.
//!
//! Integrands here are analytic on the open disc, so a fixed-order rule
//! converges geometrically per panel; adaptivity only kicks in close to the
//! boundary. Panels are compared against their two halves and split until
//! the difference meets the absolute tolerance budget.

use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Quadrature order per panel.
const GL_ORDER: usize = 16;

/// Tolerances and limits for segment integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig<T: Real> {
    /// Absolute tolerance on the integral value.
    pub abs_tol: T,
    /// Maximum bisection depth before reporting non-convergence.
    pub max_depth: u32,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::of(1e-12),
            max_depth: 20,
        }
    }
}

/// Gauss-Legendre nodes/weights on `[-1, 1]`, computed once in `f64` by
/// Newton iteration on the Legendre recurrence.
fn gl_nodes_f64() -> &'static [(f64, f64); GL_ORDER] {
    static NODES: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = GL_ORDER;
        let mut out = [(0.0f64, 0.0f64); GL_ORDER];
        for (i, slot) in out.iter_mut().enumerate() {
            // Chebyshev-like initial guess for the i-th root of P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0f64, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

/// One fixed-order panel; returns the estimate and its L1 mass
/// `sum w |f|`, the scale on which integrand roundoff lives.
fn gl_panel<T: Real>(
    f: &impl Fn(Complex<T>) -> Result<Complex<T>>,
    z: Complex<T>,
    a: T,
    b: T,
) -> Result<(Complex<T>, T)> {
    let half = (b - a) / T::of(2.0);
    let mid = (b + a) / T::of(2.0);
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut mass = T::zero();
    for &(x, w) in gl_nodes_f64() {
        let s = mid + half * T::of(x);
        let v = f(z * real(s))? * real(T::of(w));
        acc = acc + v;
        mass = mass + v.norm();
    }
    Ok((acc * real(half), mass * half))
}

fn adaptive<T: Real>(
    f: &impl Fn(Complex<T>) -> Result<Complex<T>>,
    z: Complex<T>,
    a: T,
    b: T,
    whole: Complex<T>,
    tol: T,
    depth: u32,
    cfg: &QuadConfig<T>,
) -> Result<Complex<T>> {
    let mid = (a + b) / T::of(2.0);
    let (left, mass_l) = gl_panel(f, z, a, mid)?;
    let (right, mass_r) = gl_panel(f, z, mid, b)?;
    let refined = left + right;
    // Cancellation inside the integrand puts a noise floor under the panel
    // residual, proportional to the panel's L1 mass, that no subdivision
    // can beat.
    let floor = T::epsilon() * T::of(256.0) * (mass_l + mass_r);
    if (refined - whole).norm() <= tol.max(floor) {
        return Ok(refined);
    }
    if depth >= cfg.max_depth {
        // Depth exhausted. A residual at the square-root-of-epsilon scale of
        // the local mass means the panel converged to what the integrand's
        // conditioning allows; anything larger is genuine non-convergence
        // (e.g. a singularity on the path).
        let achievable = T::epsilon().sqrt() * (T::one() + mass_l + mass_r);
        if (refined - whole).norm() <= achievable {
            return Ok(refined);
        }
        return Err(Error::Numeric(format!(
            "quadrature on [0, {}+{}i] did not converge: panel [{}, {}] residual {} above {} at depth {}",
            z.re,
            z.im,
            a,
            b,
            (refined - whole).norm(),
            tol,
            depth
        )));
    }
    let half_tol = tol / T::of(2.0);
    let l = adaptive(f, z, a, mid, left, half_tol, depth + 1, cfg)?;
    let r = adaptive(f, z, mid, b, right, half_tol, depth + 1, cfg)?;
    Ok(l + r)
}

/// Integrates `f` along the straight segment from `0` to `z`:
/// `\int_0^z f(t) dt = z \int_0^1 f(s z) ds`.
pub fn integrate_segment<T: Real>(
    f: impl Fn(Complex<T>) -> Result<Complex<T>>,
    z: Complex<T>,
    cfg: &QuadConfig<T>,
) -> Result<Complex<T>> {
    if z.norm_sqr() == T::zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let (whole, _) = gl_panel(&f, z, T::zero(), T::one())?;
    let inner = adaptive(&f, z, T::zero(), T::one(), whole, cfg.abs_tol, 0, cfg)?;
    Ok(inner * z)
}
