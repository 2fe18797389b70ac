//! Polar evaluation grids on the unit disc.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Polar grid: `n_radii` circles up to `r_max`, `n_angles` equispaced angles.
///
/// Geometric grids cluster radii toward `r_max` via
/// `r_k = 1 - (1-r_max)^t (1-r_inner)^{1-t}` with `t = k/n_radii`,
/// `k = 1..=n_radii`; doubling `n_radii` or `n_angles` then yields a strict
/// superset of the nodes, so grid minima are monotone under refinement.
/// Uniform grids use `r_k = r_max k/n_radii`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GridSpec<T: Real> {
    pub n_radii: usize,
    pub n_angles: usize,
    pub r_max: T,
    pub r_inner: T,
    pub geometric: bool,
}

impl<T: Real> GridSpec<T> {
    pub fn new(n_radii: usize, n_angles: usize, r_max: T) -> Self {
        Self {
            n_radii,
            n_angles,
            r_max,
            r_inner: T::of(0.5),
            geometric: true,
        }
    }

    /// Membership sweeps: 48 geometric radii toward 0.999, 256 angles.
    pub fn membership_default() -> Self {
        Self::new(48, 256, T::of(0.999))
    }

    /// Norm sweeps: 64 geometric radii toward `1 - 1e-6`, 512 angles.
    pub fn norms_default() -> Self {
        Self::new(64, 512, T::of(1.0 - 1e-6))
    }

    /// Schwarz-function validation: uniform 32 x 64 grid, `r <= 0.99`.
    pub fn schwarz_default() -> Self {
        Self {
            n_radii: 32,
            n_angles: 64,
            r_max: T::of(0.99),
            r_inner: T::zero(),
            geometric: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_radii < 2 || self.n_angles < 4 {
            return Err(Error::Argument(format!(
                "grid too small: {} x {}",
                self.n_radii, self.n_angles
            )));
        }
        if !(self.r_max > T::zero() && self.r_max < T::one()) {
            return Err(Error::Argument("r_max must lie in (0, 1)".into()));
        }
        if self.geometric && !(self.r_inner > T::zero() && self.r_inner < self.r_max) {
            return Err(Error::Argument(
                "geometric grid needs 0 < r_inner < r_max".into(),
            ));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<T> {
        let n = self.n_radii;
        (1..=n)
            .map(|k| {
                let t = T::from_usize(k).unwrap() / T::from_usize(n).unwrap();
                if self.geometric {
                    let one = T::one();
                    one - (one - self.r_max).powf(t) * (one - self.r_inner).powf(one - t)
                } else {
                    self.r_max * t
                }
            })
            .collect()
    }

    pub fn angles(&self) -> Vec<T> {
        let n = self.n_angles;
        let tau = T::PI() + T::PI();
        (0..n)
            .map(|j| tau * T::from_usize(j).unwrap() / T::from_usize(n).unwrap())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_radii_hit_both_ends() {
        let g: GridSpec<f64> = GridSpec::norms_default();
        let r = g.radii();
        assert_eq!(r.len(), 64);
        assert!(r[0] > 0.5 && r[0] < 0.7);
        assert!((r[63] - (1.0 - 1e-6)).abs() < 1e-15);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn doubling_radii_is_a_superset() {
        let coarse: GridSpec<f64> = GridSpec::membership_default();
        let fine = GridSpec {
            n_radii: 96,
            ..coarse
        };
        let rc = coarse.radii();
        let rf = fine.radii();
        for r in rc {
            assert!(rf.iter().any(|&x| (x - r).abs() < 1e-14));
        }
    }

    #[test]
    fn rejects_bad_bounds() {
        let mut g: GridSpec<f64> = GridSpec::membership_default();
        g.r_max = 1.0;
        assert!(g.validate().is_err());
    }
}
