use serde::Serialize;

use crate::error::{QError, Result};
use crate::scalar::{lit, Scalar};
use crate::scaled::Scaled;

/// Point `x = B^{h/2} (1 + δ)` relative to a base `B`.
///
/// Keeping the half-exponent separate from the small correction lets products such as
/// `(x² B^s; B)_∞` hit their zero factors exactly instead of through rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LatticePoint<T> {
    pub h: i32,
    pub delta: T,
}

impl<T: Scalar> LatticePoint<T> {
    pub fn exact(h: i32) -> Self {
        LatticePoint {
            h,
            delta: T::zero(),
        }
    }

    pub fn new(h: i32, delta: T) -> Self {
        LatticePoint { h, delta }
    }

    /// Nearest lattice decomposition of a positive real.
    pub fn from_value(x: T, base: T) -> Result<Self> {
        if !(x > T::zero()) || !x.is_finite() {
            return Err(QError::DomainError(format!(
                "lattice decomposition needs a positive finite value, got {x}"
            )));
        }
        let two: T = lit(2.0);
        let h = (two * x.ln() / base.ln()).round();
        let h = h
            .to_i32()
            .ok_or_else(|| QError::DomainError(format!("value {x} too far from 1")))?;
        let delta = x / half_power(base, h) - T::one();
        Ok(LatticePoint { h, delta })
    }

    pub fn value(&self, base: T) -> T {
        half_power(base, self.h) * (T::one() + self.delta)
    }

    /// Lattice point of the product `self · other`.
    pub fn mul(&self, other: &LatticePoint<T>) -> Self {
        LatticePoint {
            h: self.h + other.h,
            delta: self.delta + other.delta + self.delta * other.delta,
        }
    }

    /// `(1 + δ)^p`.
    pub fn correction_pow(&self, p: T) -> T {
        (T::one() + self.delta).powf(p)
    }

    /// Factor `1 − x² B^s`, exact when `h + s = 0`.
    pub fn factor(&self, base: T, s: i32) -> T {
        let e = self.h + s;
        if e == 0 {
            -self.delta * (lit::<T>(2.0) + self.delta)
        } else {
            let u = T::one() + self.delta;
            T::one() - u * u * base.powi(e)
        }
    }

    /// `(x² B^s; B)_∞` evaluated factor by factor.
    pub fn shifted_product(&self, base: T, s: i32, tol: T, max_terms: usize) -> Result<T> {
        self.shifted_product_scaled(base, s, tol, max_terms)
            .map(Scaled::value)
    }

    pub(crate) fn shifted_product_scaled(
        &self,
        base: T,
        s: i32,
        tol: T,
        max_terms: usize,
    ) -> Result<Scaled<T>> {
        let u = T::one() + self.delta;
        let u2 = u * u;
        let mut p = Scaled::new(T::one());
        let mut i = 0usize;
        let budget = max_terms + (-(self.h + s)).max(0) as usize;
        loop {
            let e = self.h + s + i as i32;
            p = p.mul(self.factor(base, s + i as i32));
            if p.is_zero() {
                return Ok(p);
            }
            i += 1;
            if e >= 0 && i >= 8 && u2 * base.powi(e + 1) / (T::one() - base) < tol {
                return Ok(p);
            }
            if i > budget {
                return Err(QError::non_convergence(max_terms, "lattice q-product"));
            }
        }
    }
}

/// `B^{h/2}`.
pub(crate) fn half_power<T: Scalar>(base: T, h: i32) -> T {
    if h % 2 == 0 {
        base.powi(h / 2)
    } else {
        base.powi((h - 1) / 2) * base.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_value() {
        let b = 0.25f64;
        for x in [0.01, 0.3, 1.0, 1.9, 2.0, 7.5, 123.0] {
            let p = LatticePoint::from_value(x, b).unwrap();
            assert!((p.value(b) - x).abs() < 1e-14 * x);
            assert!(p.delta.abs() <= 0.5);
        }
    }

    #[test]
    fn zero_factor_is_exact() {
        let p = LatticePoint::<f64>::exact(-3);
        assert_eq!(p.factor(0.5, 3), 0.0);
        assert_eq!(p.shifted_product(0.5, 1, 1e-16, 64).unwrap(), 0.0);
        let near = LatticePoint::new(-3, 1e-20f64);
        assert!((near.factor(0.5, 3) + 2e-20).abs() < 1e-35);
    }

    #[test]
    fn product_matches_direct_evaluation() {
        let b = 0.5f64;
        let p = LatticePoint::from_value(0.8, b).unwrap();
        let direct: f64 = (0..200).map(|i| 1.0 - 0.64 * b.powi(i)).product();
        assert!((p.shifted_product(b, 0, 1e-17, 512).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn multiplication_adds_exponents() {
        let a = LatticePoint::new(3, 0.01f64);
        let b = LatticePoint::new(-1, -0.02);
        let c = a.mul(&b);
        assert_eq!(c.h, 2);
        assert!((c.value(0.3) - a.value(0.3) * b.value(0.3)).abs() < 1e-15);
    }
}
