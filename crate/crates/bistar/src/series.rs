//! Truncated complex power series: arithmetic, composition, reversion, and
//! the series exponential/logarithm.
//!
//! A [`TruncatedSeries`] stores Maclaurin coefficients `c_0..c_N` for a fixed
//! order `N >= 1`. Every operation truncates silently back to the working
//! order; the discarded tail is never an error. Binary operations pad the
//! shorter operand with zeros so both sides share the larger order.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_finite, real, Real};

/// Maclaurin polynomial `c_0 + c_1 z + ... + c_N z^N` of fixed order `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<T: Real> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> TruncatedSeries<T> {
    /// Builds a series from coefficients `c_0..c_N`. Requires at least two
    /// coefficients (order >= 1), all finite.
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Argument(format!(
                "series needs order >= 1, got {} coefficients",
                coeffs.len()
            )));
        }
        if let Some(k) = coeffs.iter().position(|c| !is_finite(*c)) {
            return Err(Error::Argument(format!(
                "non-finite coefficient at index {k}"
            )));
        }
        Ok(Self { coeffs })
    }

    /// Builds a series from real coefficients.
    pub fn from_real(coeffs: &[T]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| real(x)).collect())
    }

    /// The identity series `z` at the given order.
    pub fn identity(order: usize) -> Self {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); order.max(1) + 1];
        coeffs[1] = real(T::one());
        Self { coeffs }
    }

    /// The constant series `c` at the given order.
    pub fn constant(c: Complex<T>, order: usize) -> Self {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); order.max(1) + 1];
        coeffs[0] = c;
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient `c_n`, zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex<T> {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Pads with zeros or truncates to the requested order (>= 1).
    pub fn with_order(&self, order: usize) -> Self {
        let order = order.max(1);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex::new(T::zero(), T::zero()));
        Self { coeffs }
    }

    fn zero_like(order: usize) -> Vec<Complex<T>> {
        vec![Complex::new(T::zero(), T::zero()); order + 1]
    }

    /// Coefficient-wise sum at the common (max) order.
    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().max(other.order());
        let mut coeffs = Self::zero_like(order);
        for (n, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeff(n) + other.coeff(n);
        }
        Self { coeffs }
    }

    /// Coefficient-wise difference at the common (max) order.
    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().max(other.order());
        let mut coeffs = Self::zero_like(order);
        for (n, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeff(n) - other.coeff(n);
        }
        Self { coeffs }
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// Cauchy product truncated to the common (max) order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().max(other.order());
        let mut coeffs = Self::zero_like(order);
        for i in 0..=self.order().min(order) {
            let a = self.coeff(i);
            if a.norm_sqr() == T::zero() {
                continue;
            }
            for j in 0..=other.order().min(order - i) {
                coeffs[i + j] = coeffs[i + j] + a * other.coeff(j);
            }
        }
        Self { coeffs }
    }

    /// Termwise derivative; keeps the order by padding the top with zero.
    pub fn derive(&self) -> Self {
        let order = self.order();
        let mut coeffs = Self::zero_like(order);
        for n in 1..=order {
            coeffs[n - 1] = self.coeff(n) * real(T::from_usize(n).unwrap());
        }
        Self { coeffs }
    }

    /// Termwise antiderivative with given constant term; keeps the order
    /// (the top input coefficient falls off the truncated tail).
    pub fn integrate(&self, constant: Complex<T>) -> Self {
        let order = self.order();
        let mut coeffs = Self::zero_like(order);
        coeffs[0] = constant;
        for n in 1..=order {
            coeffs[n] = self.coeff(n - 1) / real(T::from_usize(n).unwrap());
        }
        Self { coeffs }
    }

    /// Multiplies by `z^k`, extending the order by `k`.
    pub fn shifted_up(&self, k: usize) -> Self {
        let mut coeffs = Self::zero_like(self.order() + k);
        for (n, &c) in self.coeffs.iter().enumerate() {
            coeffs[n + k] = c;
        }
        Self { coeffs }
    }

    /// Divides by `z^k`; the dropped low-order coefficients must be zero.
    pub fn shifted_down(&self, k: usize) -> Result<Self> {
        for n in 0..k.min(self.coeffs.len()) {
            if self.coeff(n).norm_sqr() != T::zero() {
                return Err(Error::Domain(format!(
                    "cannot divide by z^{k}: coefficient c_{n} is nonzero"
                )));
            }
        }
        let order = self.order().saturating_sub(k).max(1);
        let mut coeffs = Self::zero_like(order);
        for (n, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeff(n + k);
        }
        Ok(Self { coeffs })
    }

    /// Substitutes `z -> s z`, i.e. `c_n -> c_n s^n`.
    pub fn scale_argument(&self, s: Complex<T>) -> Self {
        let mut coeffs = self.coeffs.clone();
        let mut p = real(T::one());
        for c in coeffs.iter_mut() {
            *c = *c * p;
            p = p * s;
        }
        Self { coeffs }
    }

    /// Composition `self ∘ inner` via series Horner. The inner series must
    /// have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.coeff(0).norm_sqr() != T::zero() {
            return Err(Error::Domain(
                "composition requires inner constant term = 0".into(),
            ));
        }
        let order = self.order().max(inner.order());
        let inner = inner.with_order(order);
        let mut acc = Self::constant(self.coeff(self.order()), order);
        for n in (0..self.order()).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0] + self.coeff(n);
        }
        Ok(acc)
    }

    /// Series quotient `self / other`; requires `other` to have nonzero
    /// constant term.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let b0 = other.coeff(0);
        if b0.norm_sqr() == T::zero() {
            return Err(Error::Domain(
                "series division by zero constant term".into(),
            ));
        }
        let order = self.order().max(other.order());
        let mut coeffs = Self::zero_like(order);
        for n in 0..=order {
            let mut acc = self.coeff(n);
            for k in 1..=n {
                acc = acc - other.coeff(k) * coeffs[n - k];
            }
            coeffs[n] = acc / b0;
        }
        Ok(Self { coeffs })
    }

    /// Series reciprocal `1 / self`.
    pub fn recip(&self) -> Result<Self> {
        Self::constant(real(T::one()), self.order()).div(self)
    }

    /// Compositional inverse: `R` with `self(R(w)) = w` through the working
    /// order. Requires `c_0 = 0` and `c_1 != 0`; for `c_1 != 1` the input is
    /// pre-scaled to unit slope and the result post-scaled back.
    ///
    /// Newton iteration on series with order doubling: starting from the
    /// identity, each step composes at twice the previously correct order.
    pub fn revert(&self) -> Result<Self> {
        if self.coeff(0).norm_sqr() != T::zero() {
            return Err(Error::Domain(
                "reversion requires zero constant term".into(),
            ));
        }
        let slope = self.coeff(1);
        if slope.norm_sqr() == T::zero() {
            return Err(Error::Domain(
                "reversion requires nonzero linear coefficient".into(),
            ));
        }
        let order = self.order();
        let normalized = self.scale(slope.inv());

        let mut correct = 1usize;
        let mut inverse = Self::identity(1);
        while correct < order {
            let working = (2 * correct).min(order);
            inverse = inverse.with_order(working);
            let truncated = normalized.with_order(working);
            let composed = truncated.compose(&inverse)?;
            let slope_at = truncated.derive().compose(&inverse)?;
            let residual = composed.sub(&Self::identity(working));
            inverse = inverse.sub(&residual.div(&slope_at)?);
            correct = working;
        }
        // f = c1 * h with h of unit slope gives f^{-1}(w) = h^{-1}(w / c1).
        Ok(inverse.scale_argument(slope.inv()))
    }

    /// Series exponential. The constant term is lifted through the scalar
    /// exponential; higher terms follow the recurrence from `E' = S' E`.
    pub fn exp(&self) -> Self {
        let order = self.order();
        let mut coeffs = Self::zero_like(order);
        coeffs[0] = self.coeff(0).exp();
        for n in 1..=order {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 1..=n {
                acc = acc + self.coeff(k) * real(T::from_usize(k).unwrap()) * coeffs[n - k];
            }
            coeffs[n] = acc / real(T::from_usize(n).unwrap());
        }
        Self { coeffs }
    }

    /// Series logarithm (principal branch on the constant term). Requires a
    /// nonzero constant term; the recurrence comes from `S L' = S'`.
    pub fn log(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.norm_sqr() == T::zero() {
            return Err(Error::Domain(
                "series logarithm requires nonzero constant term".into(),
            ));
        }
        let order = self.order();
        let mut coeffs = Self::zero_like(order);
        coeffs[0] = c0.ln();
        for n in 1..=order {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 1..n {
                acc = acc + coeffs[k] * real(T::from_usize(k).unwrap()) * self.coeff(n - k);
            }
            coeffs[n] = (self.coeff(n) - acc / real(T::from_usize(n).unwrap())) / c0;
        }
        Ok(Self { coeffs })
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn evaluate(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Largest coefficient modulus of `self - other`, over the common order.
    pub fn max_coeff_distance(&self, other: &Self) -> T {
        let order = self.order().max(other.order());
        let mut worst = T::zero();
        for n in 0..=order {
            worst = worst.max((self.coeff(n) - other.coeff(n)).norm());
        }
        worst
    }
}

impl<T: Real> std::fmt::Display for TruncatedSeries<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}+{}i", c.re, c.im)?;
        }
        write!(f, "]")
    }
}
