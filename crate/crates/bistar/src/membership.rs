//! Grid-based testers for the defining inequalities of the starlike and
//! inverse-condition classes, in both the forward and inverse directions.
//!
//! The tested quantities are real parts of functions analytic on the disc,
//! so infima sit at the boundary; grids cluster radii there and a short
//! Nelder-Mead polish runs from the worst node. Strict inequalities are
//! tested as `min Re > alpha` with no tolerance cushion: boundary-limit
//! cases report `member` on any finite grid, and callers can read the
//! margin off `empirical_min_re`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::AnalyticFunction;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::scalar::{real, unit, Real};
use crate::search::nelder_mead_min2;

/// Round-trip tolerance defining the validated inverse domain.
pub const ROUND_TRIP_TOL: f64 = 1e-8;

/// Samples per circle in the inverse-domain bisection.
const CIRCLE_SAMPLES: usize = 40;

/// Default reversion order for the inverse-domain probe. The truncated
/// series must round-trip to `ROUND_TRIP_TOL`, and the validated radius
/// approaches the true convergence radius only as the order grows; 256
/// gets slowly-converging inverses (Koebe) within a few percent.
pub const DEFAULT_PROBE_ORDER: usize = 256;

/// Which defining inequality is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalKind {
    /// `Re( z f'/f ) > alpha`
    Starlike,
    /// `Re( (z/f)^2 f' ) > alpha`
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Member,
    NonMember,
    /// Inverse direction only: no violation found, but the inverse is
    /// validated on a disc smaller than the requested grid.
    Indeterminate,
}

/// Outcome of a membership sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport<T: Real> {
    pub kind: FunctionalKind,
    pub direction: Direction,
    pub alpha: T,
    pub empirical_min_re: T,
    pub witness: Complex<T>,
    /// `(n_radii, n_angles, r_max)` actually swept.
    pub grid: (usize, usize, T),
    /// Validated inverse-domain radius; inverse direction only.
    pub inverse_domain_radius: Option<T>,
    pub verdict: Verdict,
}

/// Grid sweep of `Re q(z)` with deterministic lexicographic tie-breaking on
/// the (radius, angle) indices; returns value, witness and node indices.
fn sweep_min_re<T: Real>(
    q: &(impl Fn(Complex<T>) -> Result<T> + Sync),
    grid: &GridSpec<T>,
) -> Result<(T, Complex<T>, (usize, usize))> {
    grid.validate()?;
    let radii = grid.radii();
    let angles = grid.angles();

    let per_radius: Vec<(T, usize)> = radii
        .par_iter()
        .map(|&r| -> Result<(T, usize)> {
            let mut best = (T::infinity(), 0usize);
            for (j, &theta) in angles.iter().enumerate() {
                let v = q(unit(theta) * real(r))?;
                if v < best.0 {
                    best = (v, j);
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;

    let mut best = (T::infinity(), 0usize, 0usize);
    for (i, &(v, j)) in per_radius.iter().enumerate() {
        if v < best.0 {
            best = (v, i, j);
        }
    }
    let z = unit(angles[best.2]) * real(radii[best.1]);
    Ok((best.0, z, (best.1, best.2)))
}

/// One local Nelder-Mead polish in `(r, theta)` from the worst grid node;
/// evaluation failures during the polish count as `+inf` so the simplex
/// backs away from poles. Never worse than the grid minimum.
fn refine_min<T: Real>(
    q: &(impl Fn(Complex<T>) -> Result<T> + Sync),
    grid: &GridSpec<T>,
    grid_min: (T, Complex<T>, (usize, usize)),
) -> (T, Complex<T>) {
    let radii = grid.radii();
    let (value, witness, (i, j)) = grid_min;
    let r0 = radii[i];
    let dr = if i + 1 < radii.len() {
        radii[i + 1] - radii[i]
    } else {
        radii[i] - radii[i - 1]
    };
    let tau = T::PI() + T::PI();
    let dtheta = tau / T::from_usize(grid.n_angles).unwrap();
    let theta0 = tau * T::from_usize(j).unwrap() / T::from_usize(grid.n_angles).unwrap();

    let objective = |r: T, theta: T| match q(unit(theta) * real(r)) {
        Ok(v) => v,
        Err(_) => T::infinity(),
    };
    let ((r_best, t_best), v_best) = nelder_mead_min2(
        objective,
        (r0, theta0),
        (dr, dtheta),
        (T::of(1e-4), theta0 - T::of(8.0) * dtheta),
        (grid.r_max, theta0 + T::of(8.0) * dtheta),
        80,
    );
    if v_best < value && v_best.is_finite() {
        (v_best, unit(t_best) * real(r_best))
    } else {
        (value, witness)
    }
}

fn starlike_functional<T: Real>(f: &AnalyticFunction<T>) -> impl Fn(Complex<T>) -> Result<T> + Sync + '_ {
    move |z| {
        let (v, d, _) = f.eval(z)?;
        if v.norm() < T::of(1e-290) {
            return Err(Error::Numeric(format!(
                "f vanishes at grid point z = {}+{}i",
                z.re, z.im
            )));
        }
        Ok((z * d / v).re)
    }
}

fn v_functional<T: Real>(f: &AnalyticFunction<T>) -> impl Fn(Complex<T>) -> Result<T> + Sync + '_ {
    move |z| {
        let (v, d, _) = f.eval(z)?;
        if v.norm() < T::of(1e-290) {
            return Err(Error::Numeric(format!(
                "f vanishes at grid point z = {}+{}i",
                z.re, z.im
            )));
        }
        let ratio = z / v;
        Ok((ratio * ratio * d).re)
    }
}

/// Minimum of the class functional over the grid plus one local refinement;
/// returns the value and the minimizing point.
pub fn min_re_functional<T: Real>(
    f: &AnalyticFunction<T>,
    kind: FunctionalKind,
    grid: &GridSpec<T>,
) -> Result<(T, Complex<T>)> {
    match kind {
        FunctionalKind::Starlike => {
            let q = starlike_functional(f);
            let node = sweep_min_re(&q, grid)?;
            Ok(refine_min(&q, grid, node))
        }
        FunctionalKind::V => {
            let q = v_functional(f);
            let node = sweep_min_re(&q, grid)?;
            Ok(refine_min(&q, grid, node))
        }
    }
}

fn round_trip_ok<T: Real>(
    f: &AnalyticFunction<T>,
    g: &impl Fn(Complex<T>) -> Result<Complex<T>>,
    rho: T,
) -> bool {
    let tau = T::PI() + T::PI();
    let tol = T::of(ROUND_TRIP_TOL);
    for j in 0..CIRCLE_SAMPLES {
        let w = unit(tau * T::from_usize(j).unwrap() / T::from_usize(CIRCLE_SAMPLES).unwrap())
            * real(rho);
        let back = match g(w).and_then(|u| f.f(u)) {
            Ok(v) => v,
            Err(_) => return false,
        };
        if (back - w).norm() >= tol {
            return false;
        }
    }
    true
}

/// Largest validated radius of the inverse domain, up to 0.999.
///
/// Entries with a closed-form inverse are validated directly on the 0.999
/// circle. Otherwise the Maclaurin series is reverted at `order` and the
/// radius is bisected on the round-trip criterion
/// `|f(g(w)) - w| < 1e-8` over circles of 40 samples. The result is a
/// truncation-limited lower estimate of the true convergence radius.
pub fn inverse_domain_radius_with_order<T: Real>(
    f: &AnalyticFunction<T>,
    order: usize,
) -> Result<T> {
    let cap = T::of(0.999);
    if f.has_closed_form_inverse() {
        let g = |w: Complex<T>| f.inverse_eval(w);
        if round_trip_ok(f, &g, cap) {
            return Ok(cap);
        }
        return Err(Error::Numeric(
            "closed-form inverse failed round-trip validation on |w| = 0.999".into(),
        ));
    }
    let series = f.taylor(order)?;
    let inverse = series.revert()?;
    let g = |w: Complex<T>| Ok(inverse.evaluate(w));
    if round_trip_ok(f, &g, cap) {
        return Ok(cap);
    }
    let mut lo = T::zero();
    let mut hi = cap;
    for _ in 0..60 {
        let mid = (lo + hi) / T::of(2.0);
        if round_trip_ok(f, &g, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// [`inverse_domain_radius_with_order`] at the default probe order.
pub fn inverse_domain_radius<T: Real>(f: &AnalyticFunction<T>) -> Result<T> {
    inverse_domain_radius_with_order(f, DEFAULT_PROBE_ORDER)
}

/// Tests both defining conditions of the bi-class: the forward condition on
/// `f` over `grid`, and the inverse condition on `g = f^{-1}` over the disc
/// validated by [`inverse_domain_radius`]. When that disc is smaller than
/// the grid and no violation is found inside it, the inverse verdict is
/// `indeterminate` rather than extrapolated.
pub fn check_bi_with<T: Real>(
    f: &AnalyticFunction<T>,
    alpha: T,
    kind: FunctionalKind,
    grid: &GridSpec<T>,
    probe_order: usize,
) -> Result<(MembershipReport<T>, MembershipReport<T>)> {
    if alpha < T::zero() || alpha >= T::one() {
        return Err(Error::Argument(format!(
            "alpha must lie in [0, 1), got {alpha}"
        )));
    }
    let (fwd_min, fwd_witness) = min_re_functional(f, kind, grid)?;
    let forward = MembershipReport {
        kind,
        direction: Direction::Forward,
        alpha,
        empirical_min_re: fwd_min,
        witness: fwd_witness,
        grid: (grid.n_radii, grid.n_angles, grid.r_max),
        inverse_domain_radius: None,
        verdict: if fwd_min > alpha {
            Verdict::Member
        } else {
            Verdict::NonMember
        },
    };

    let rho = inverse_domain_radius_with_order(f, probe_order)?;
    let r_max = rho.min(grid.r_max);
    let inv_grid = GridSpec {
        r_max,
        r_inner: grid.r_inner.min(r_max / T::of(2.0)),
        ..*grid
    };

    let (inv_min, inv_witness) = if f.has_closed_form_inverse() {
        let q = |w: Complex<T>| -> Result<T> {
            let u = f.inverse_eval(w)?;
            let du = f.df(u)?;
            if du.norm() < T::of(1e-290) {
                return Err(Error::LocalUnivalence(format!(
                    "f' vanishes at g(w), w = {}+{}i",
                    w.re, w.im
                )));
            }
            let g = u;
            let gp = du.inv();
            if g.norm() < T::of(1e-290) {
                return Err(Error::Numeric(format!(
                    "inverse vanishes at grid point w = {}+{}i",
                    w.re, w.im
                )));
            }
            match kind {
                FunctionalKind::Starlike => Ok((w * gp / g).re),
                FunctionalKind::V => {
                    let ratio = w / g;
                    Ok((ratio * ratio * gp).re)
                }
            }
        };
        let node = sweep_min_re(&q, &inv_grid)?;
        refine_min(&q, &inv_grid, node)
    } else {
        let series = f.taylor(probe_order)?;
        let inverse = series.revert()?;
        let dinverse = inverse.derive();
        let q = |w: Complex<T>| -> Result<T> {
            let g = inverse.evaluate(w);
            let gp = dinverse.evaluate(w);
            if g.norm() < T::of(1e-290) {
                return Err(Error::Numeric(format!(
                    "inverse vanishes at grid point w = {}+{}i",
                    w.re, w.im
                )));
            }
            match kind {
                FunctionalKind::Starlike => Ok((w * gp / g).re),
                FunctionalKind::V => {
                    let ratio = w / g;
                    Ok((ratio * ratio * gp).re)
                }
            }
        };
        let node = sweep_min_re(&q, &inv_grid)?;
        refine_min(&q, &inv_grid, node)
    };

    let verdict = if inv_min <= alpha {
        Verdict::NonMember
    } else if rho < grid.r_max {
        Verdict::Indeterminate
    } else {
        Verdict::Member
    };
    let inverse_report = MembershipReport {
        kind,
        direction: Direction::Inverse,
        alpha,
        empirical_min_re: inv_min,
        witness: inv_witness,
        grid: (inv_grid.n_radii, inv_grid.n_angles, inv_grid.r_max),
        inverse_domain_radius: Some(rho),
        verdict,
    };
    Ok((forward, inverse_report))
}

/// [`check_bi_with`] on the default membership grid and probe order.
pub fn check_bi<T: Real>(
    f: &AnalyticFunction<T>,
    alpha: T,
    kind: FunctionalKind,
) -> Result<(MembershipReport<T>, MembershipReport<T>)> {
    check_bi_with(
        f,
        alpha,
        kind,
        &GridSpec::membership_default(),
        DEFAULT_PROBE_ORDER,
    )
}

/// Half-plane subordination test for an evaluator with `q(0) = 1`: because
/// the target is a conformal map onto `{Re > alpha}` fixing 1, subordination
/// is equivalent to `q(grid) \subset {Re > alpha}`. Plain grid sweep, no
/// refinement; reported under the starlike kind, forward direction.
pub fn subordination_check<T: Real>(
    q: impl Fn(Complex<T>) -> Result<Complex<T>> + Sync,
    alpha: T,
    grid: &GridSpec<T>,
) -> Result<MembershipReport<T>> {
    let re = |z: Complex<T>| Ok(q(z)?.re);
    let (min_re, witness, _) = sweep_min_re(&re, grid)?;
    Ok(MembershipReport {
        kind: FunctionalKind::Starlike,
        direction: Direction::Forward,
        alpha,
        empirical_min_re: min_re,
        witness,
        grid: (grid.n_radii, grid.n_angles, grid.r_max),
        inverse_domain_radius: None,
        verdict: if min_re > alpha {
            Verdict::Member
        } else {
            Verdict::NonMember
        },
    })
}
