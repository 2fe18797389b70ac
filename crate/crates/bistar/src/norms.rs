//! Pre-Schwarzian and Schwarzian derivatives, and estimation of the
//! hyperbolically weighted sup `sup_{|z|<1} (1 - |z|^2) |f''(z)/f'(z)|`.
//!
//! The weighted modulus typically peaks at the boundary, so the sweep grid
//! clusters radii geometrically toward `r_max` and the best node is polished
//! by golden-section passes in `r` and `theta`. Estimates are lower bounds
//! for the true sup; no boundary extrapolation is applied unless asked for
//! explicitly via [`richardson_extrapolate`], which is labeled as such.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::AnalyticFunction;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::scalar::{is_finite, real, unit, Real};
use crate::search::golden_max;

/// Points on the derivative stencil circle.
const STENCIL_POINTS: usize = 16;

/// Measured sup of the weighted pre-Schwarzian modulus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate<T: Real> {
    /// Largest weighted modulus found; a lower bound for the true sup.
    pub value: T,
    /// Point attaining `value`.
    pub argmax: Complex<T>,
    pub r_max: T,
    /// `(n_radii, n_angles)` of the sweep grid.
    pub grid: (usize, usize),
    /// Whether the golden-section polish ran after the grid sweep.
    pub refined: bool,
    /// Per-radius restricted maxima `(r, max over theta)`.
    pub profile: Option<Vec<(T, T)>>,
}

/// Pre-Schwarzian derivative `T_f = f''/f'`: the generator-supplied closed
/// form when present, otherwise the exact quotient of the evaluator's
/// derivatives.
pub fn pre_schwarzian<T: Real>(f: &AnalyticFunction<T>, z: Complex<T>) -> Result<Complex<T>> {
    if let Some(t) = f.closed_form_pre_schwarzian() {
        return t(z);
    }
    let (_, fp, fpp) = f.eval(z)?;
    let q = fpp / fp;
    if fp.norm() == T::zero() || !is_finite(q) {
        return Err(Error::LocalUnivalence(format!(
            "f' vanishes at z = {}+{}i",
            z.re, z.im
        )));
    }
    Ok(q)
}

/// Derivative of an analytic evaluator by a trapezoidal stencil on a small
/// circle: `g'(z) ~ (1/(M rho)) sum_m g(z + rho w^m) w^{-m}` with geometric
/// accuracy in the stencil size. Replaces real-axis complex-step tricks,
/// which do not carry over to complex arguments in double precision.
fn circle_stencil_derivative<T: Real>(
    g: &impl Fn(Complex<T>) -> Result<Complex<T>>,
    z: Complex<T>,
) -> Result<Complex<T>> {
    let margin = (T::one() - z.norm()).max(T::of(1e-3));
    let rho = (T::of(0.2) * margin).min(T::of(0.1)).max(T::of(1e-4));
    let tau = T::PI() + T::PI();
    let m = T::from_usize(STENCIL_POINTS).unwrap();
    let mut acc = Complex::new(T::zero(), T::zero());
    for k in 0..STENCIL_POINTS {
        let theta = tau * T::from_usize(k).unwrap() / m;
        let w = unit(theta);
        acc = acc + g(z + w * real(rho))? * unit(-theta);
    }
    Ok(acc / (real(rho) * m))
}

/// Schwarzian derivative `S_f = T_f' - T_f^2 / 2`, with `T_f'` from the
/// circle stencil.
pub fn schwarzian<T: Real>(f: &AnalyticFunction<T>, z: Complex<T>) -> Result<Complex<T>> {
    let t = pre_schwarzian(f, z)?;
    let tp = circle_stencil_derivative(&|u| pre_schwarzian(f, u), z)?;
    Ok(tp - t * t / real(T::of(2.0)))
}

/// Weighted modulus `(1 - |z|^2) |T_f(z)|`.
pub fn weighted_modulus<T: Real>(f: &AnalyticFunction<T>, z: Complex<T>) -> Result<T> {
    Ok((T::one() - z.norm_sqr()) * pre_schwarzian(f, z)?.norm())
}

/// Grid maximum of the weighted modulus with golden-section polish along the
/// best ray and around the best circle. Deterministic for a fixed grid;
/// argmax ties break toward the smallest radius, then the smallest angle.
pub fn norm_estimate<T: Real>(
    f: &AnalyticFunction<T>,
    grid: &GridSpec<T>,
) -> Result<NormEstimate<T>> {
    grid.validate()?;
    let radii = grid.radii();
    let angles = grid.angles();

    let per_radius: Vec<(T, usize)> = radii
        .par_iter()
        .map(|&r| -> Result<(T, usize)> {
            let mut best = (T::neg_infinity(), 0usize);
            for (j, &theta) in angles.iter().enumerate() {
                let v = weighted_modulus(f, unit(theta) * real(r))?;
                if v > best.0 {
                    best = (v, j);
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;

    let mut bi = 0usize;
    for (i, &(v, _)) in per_radius.iter().enumerate() {
        if v > per_radius[bi].0 {
            bi = i;
        }
    }
    let bj = per_radius[bi].1;

    // polish radius along the best ray, then angle on the refined circle
    let theta_star = angles[bj];
    let r_lo = if bi > 0 { radii[bi - 1] } else { radii[0] };
    let r_hi = if bi + 1 < radii.len() {
        radii[bi + 1]
    } else {
        grid.r_max
    };
    let ray = |r: T| match weighted_modulus(f, unit(theta_star) * real(r)) {
        Ok(v) => v,
        Err(_) => T::neg_infinity(),
    };
    let (r_star, _) = golden_max(ray, r_lo, r_hi, T::of(1e-12));

    let tau = T::PI() + T::PI();
    let dtheta = tau / T::from_usize(grid.n_angles).unwrap();
    let circle = |theta: T| match weighted_modulus(f, unit(theta) * real(r_star)) {
        Ok(v) => v,
        Err(_) => T::neg_infinity(),
    };
    let (theta_refined, _) = golden_max(circle, theta_star - dtheta, theta_star + dtheta, T::of(1e-12));

    let mut argmax = unit(angles[bj]) * real(radii[bi]);
    let mut value = weighted_modulus(f, argmax)?;
    let candidate = unit(theta_refined) * real(r_star.min(grid.r_max));
    let cv = weighted_modulus(f, candidate)?;
    if cv > value {
        value = cv;
        argmax = candidate;
    }

    let profile = radii
        .iter()
        .zip(per_radius.iter())
        .map(|(&r, &(v, _))| (r, v))
        .collect();

    Ok(NormEstimate {
        value,
        argmax,
        r_max: grid.r_max,
        grid: (grid.n_radii, grid.n_angles),
        refined: true,
        profile: Some(profile),
    })
}

/// [`norm_estimate`] on the default 64 x 512 grid toward `1 - 1e-6`.
pub fn norm_estimate_default<T: Real>(f: &AnalyticFunction<T>) -> Result<NormEstimate<T>> {
    norm_estimate(f, &GridSpec::norms_default())
}

/// Quadratic Richardson extrapolation of the weighted modulus toward the
/// boundary along the estimate's best ray. The result is an extrapolation,
/// not a measured value, and must be labeled as such by callers.
pub fn richardson_extrapolate<T: Real>(
    f: &AnalyticFunction<T>,
    estimate: &NormEstimate<T>,
) -> Result<T> {
    let theta = estimate.argmax.arg();
    let h0 = T::of(1e-3);
    let mut hs = [T::zero(); 3];
    let mut vs = [T::zero(); 3];
    for k in 0..3 {
        let h = h0 / T::of(2.0).powi(k as i32);
        hs[k] = h;
        vs[k] = weighted_modulus(f, unit(theta) * real(T::one() - h))?;
    }
    // Neville tableau evaluated at h = 0
    let mut p = vs;
    for level in 1..3 {
        for i in 0..(3 - level) {
            let (xi, xj) = (hs[i], hs[i + level]);
            p[i] = ((T::zero() - xj) * p[i] - (T::zero() - xi) * p[i + 1]) / (xi - xj);
        }
    }
    Ok(p[0])
}
