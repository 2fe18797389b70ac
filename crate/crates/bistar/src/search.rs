//! One- and two-dimensional local search: golden-section on an interval and
//! a small Nelder-Mead simplex for witness refinement.

use crate::scalar::Real;

/// Golden-section maximization of `f` on `[a, b]` down to interval width
/// `tol`. Returns `(argmax, max)`; the endpoints are also candidates.
pub fn golden_max<T: Real>(f: impl Fn(T) -> T, a: T, b: T, tol: T) -> (T, T) {
    debug_assert!(a <= b);
    let inv_phi = T::of(0.618_033_988_749_894_9);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut guard = 0usize;
    while hi - lo > tol && guard < 200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
        guard += 1;
    }
    let mid = (lo + hi) / T::of(2.0);
    let mut best = (mid, f(mid));
    for (x, v) in [(a, f(a)), (b, f(b)), (x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Golden-section minimization; see [`golden_max`].
pub fn golden_min<T: Real>(f: impl Fn(T) -> T, a: T, b: T, tol: T) -> (T, T) {
    let (x, v) = golden_max(|x| -f(x), a, b, tol);
    (x, -v)
}

/// Nelder-Mead minimization in two variables with clamping box
/// `[lo.0, hi.0] x [lo.1, hi.1]`. Deterministic for fixed inputs; intended
/// as a short local polish from a grid node, not a global search.
pub fn nelder_mead_min2<T: Real>(
    f: impl Fn(T, T) -> T,
    start: (T, T),
    step: (T, T),
    lo: (T, T),
    hi: (T, T),
    iterations: usize,
) -> ((T, T), T) {
    let clamp = |p: (T, T)| {
        (
            p.0.max(lo.0).min(hi.0),
            p.1.max(lo.1).min(hi.1),
        )
    };
    let eval = |p: (T, T)| f(p.0, p.1);

    let mut simplex = [
        clamp(start),
        clamp((start.0 + step.0, start.1)),
        clamp((start.0, start.1 + step.1)),
    ];
    let mut values = [eval(simplex[0]), eval(simplex[1]), eval(simplex[2])];

    let half = T::of(0.5);
    let two = T::of(2.0);
    for _ in 0..iterations {
        // order best -> worst
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(std::cmp::Ordering::Equal));
        let (b, m, w) = (idx[0], idx[1], idx[2]);

        let centroid = (
            (simplex[b].0 + simplex[m].0) * half,
            (simplex[b].1 + simplex[m].1) * half,
        );
        let reflect = clamp((
            centroid.0 + (centroid.0 - simplex[w].0),
            centroid.1 + (centroid.1 - simplex[w].1),
        ));
        let fr = eval(reflect);

        if fr < values[b] {
            let expand = clamp((
                centroid.0 + two * (centroid.0 - simplex[w].0),
                centroid.1 + two * (centroid.1 - simplex[w].1),
            ));
            let fe = eval(expand);
            if fe < fr {
                simplex[w] = expand;
                values[w] = fe;
            } else {
                simplex[w] = reflect;
                values[w] = fr;
            }
        } else if fr < values[m] {
            simplex[w] = reflect;
            values[w] = fr;
        } else {
            let contract = clamp((
                centroid.0 + half * (simplex[w].0 - centroid.0),
                centroid.1 + half * (simplex[w].1 - centroid.1),
            ));
            let fc = eval(contract);
            if fc < values[w] {
                simplex[w] = contract;
                values[w] = fc;
            } else {
                // shrink toward best
                for i in [m, w] {
                    simplex[i] = clamp((
                        simplex[b].0 + half * (simplex[i].0 - simplex[b].0),
                        simplex[b].1 + half * (simplex[i].1 - simplex[b].1),
                    ));
                    values[i] = eval(simplex[i]);
                }
            }
        }
    }

    let mut best = 0usize;
    for i in 1..3 {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best], values[best])
}
