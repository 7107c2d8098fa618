use serde::Serialize;

use crate::error::{QError, Result};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_TERMS: usize = 512;

/// Base `q`, relative truncation tolerance and term budget shared by all routines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QParams<T> {
    q: T,
    tol: T,
    max_terms: usize,
}

impl<T: Scalar> QParams<T> {
    pub fn new(q: T, tol: T, max_terms: usize) -> Result<Self> {
        if !(q > T::zero() && q < T::one()) {
            return Err(QError::InvalidParams(format!("q = {q} is outside (0, 1)")));
        }
        if !(tol > T::zero()) || !tol.is_finite() {
            return Err(QError::InvalidParams(format!(
                "tol = {tol} must be positive"
            )));
        }
        if max_terms < 8 {
            return Err(QError::InvalidParams(format!(
                "max_terms = {max_terms} must be at least 8"
            )));
        }
        Ok(QParams { q, tol, max_terms })
    }

    /// Parameters with tolerance at machine precision and the default term budget.
    pub fn with_q(q: T) -> Result<Self> {
        Self::new(q, T::epsilon(), DEFAULT_MAX_TERMS)
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Same tolerance and budget with a different base.
    pub fn with_base(&self, base: T) -> Result<Self> {
        Self::new(base, self.tol, self.max_terms)
    }

    pub fn with_tol(&self, tol: T) -> Result<Self> {
        Self::new(self.q, tol, self.max_terms)
    }

    pub fn with_max_terms(&self, max_terms: usize) -> Result<Self> {
        Self::new(self.q, self.tol, max_terms)
    }

    /// Parameters for base `q²`.
    pub fn squared(&self) -> Self {
        QParams {
            q: self.q * self.q,
            ..*self
        }
    }
}

/// Measure for norms and Gram matrices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureSpec<T> {
    /// Jackson measure on `(0, a)`.
    QInterval { a: T },
    /// Jackson measure on `(0, ∞)`.
    QHalfLine,
    /// Lebesgue measure on `(0, 1)` with Gauss–Legendre quadrature.
    Lebesgue { quadrature_order: usize },
}

impl<T: Scalar> MeasureSpec<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MeasureSpec::QInterval { a } if !(a > T::zero() && a.is_finite()) => Err(
                QError::InvalidSpec(format!("interval end a = {a} must be positive")),
            ),
            MeasureSpec::Lebesgue { quadrature_order } if quadrature_order < 4 => {
                Err(QError::InvalidSpec(format!(
                    "quadrature order {quadrature_order} must be at least 4"
                )))
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_q_outside_unit_interval() {
        for q in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(
                QParams::new(q, 1e-12, 64),
                Err(QError::InvalidParams(_))
            ));
        }
    }

    #[test]
    fn rejects_small_budget_and_bad_tol() {
        assert!(QParams::new(0.5, 1e-12, 7).is_err());
        assert!(QParams::new(0.5, 0.0, 64).is_err());
        assert!(QParams::new(0.5f32, 1e-6, 8).is_ok());
    }

    #[test]
    fn squared_keeps_budget() {
        let p = QParams::with_q(0.5f64).unwrap().squared();
        assert_eq!(p.q(), 0.25);
        assert_eq!(p.max_terms(), DEFAULT_MAX_TERMS);
    }

    #[test]
    fn measure_validation() {
        assert!(MeasureSpec::QInterval { a: 0.0 }.validate().is_err());
        assert!(MeasureSpec::<f64>::Lebesgue {
            quadrature_order: 3
        }
        .validate()
        .is_err());
        assert!(MeasureSpec::<f64>::QHalfLine.validate().is_ok());
    }
}
