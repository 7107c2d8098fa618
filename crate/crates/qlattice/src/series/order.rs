use serde::Serialize;

use crate::error::{QError, Result};
use crate::linalg::{lstsq, Matrix};
use crate::scalar::{from_u, lit, Scalar};

const RATIO_THRESHOLD: f64 = 0.1;

fn fit_points<T: Scalar>(ln_coeffs: &[T], n_max: usize) -> Result<Vec<(T, T)>> {
    if n_max < 16 {
        return Err(QError::InvalidSpec(format!(
            "N = {n_max} must be at least 16"
        )));
    }
    if ln_coeffs.len() <= n_max {
        return Err(QError::InvalidSpec(format!(
            "need coefficients up to index {n_max}, got {}",
            ln_coeffs.len()
        )));
    }
    let pts: Vec<(T, T)> = (n_max / 2..=n_max)
        .filter(|&m| m >= 2 && ln_coeffs[m].is_finite())
        .map(|m| (from_u(m), -ln_coeffs[m]))
        .collect();
    if pts.len() < 3 {
        return Err(QError::DomainError(
            "fewer than three nonzero coefficients in the upper half of the range".into(),
        ));
    }
    Ok(pts)
}

/// Order of `Σ c_m z^m` from `ln |c_m|`, `m = 0..=n_max`.
///
/// Fits `log(1/|c_m|) ≈ A m log m + B m + C` over `m ∈ [n_max/2, n_max]` and returns `1/A`.
/// Zero coefficients (`−∞`) are skipped. Returns `+∞` when the fitted `A` is not positive.
pub fn estimate_order_ln<T: Scalar>(ln_coeffs: &[T], n_max: usize) -> Result<T> {
    let pts = fit_points(ln_coeffs, n_max)?;
    let scale: T = from_u(n_max);
    let s1 = scale * scale.ln();
    let a = Matrix::from_fn(pts.len(), 3, |i, j| {
        let m = pts[i].0;
        match j {
            0 => m * m.ln() / s1,
            1 => m / scale,
            _ => T::one(),
        }
    });
    let b: Vec<T> = pts.iter().map(|p| p.1 / s1).collect();
    let sol = lstsq(&a, &b, lit(1e-14))?;
    let slope = sol.x[0];
    if slope > T::zero() {
        Ok(T::one() / slope)
    } else {
        Ok(T::infinity())
    }
}

/// Order estimate from Taylor coefficients `c_0..=c_n_max`; zero and subnormal entries are skipped.
pub fn estimate_order<T: Scalar>(coeffs: &[T], n_max: usize) -> Result<T> {
    let ln: Vec<T> = coeffs
        .iter()
        .map(|c| {
            if c.abs() >= T::min_positive_value() {
                c.abs().ln()
            } else {
                T::neg_infinity()
            }
        })
        .collect();
    estimate_order_ln(&ln, n_max)
}

/// `max_{m ∈ [n_max/2, n_max]} m log m / log(1/|c_m|)`, the finite-N version of the limsup formula.
///
/// Biased upward at practical N because of the lower-order terms of `log(1/|c_m|)`.
pub fn limsup_order_bound<T: Scalar>(ln_coeffs: &[T], n_max: usize) -> Result<T> {
    let pts = fit_points(ln_coeffs, n_max)?;
    Ok(pts
        .iter()
        .filter(|p| p.1 > T::zero())
        .map(|&(m, l)| m * m.ln() / l)
        .fold(T::neg_infinity(), T::max))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport<T> {
    pub ratios: Vec<T>,
    pub tends_to_zero: bool,
}

fn verdict<T: Scalar>(ratios: &[T]) -> bool {
    let quarter = ratios.len() / 4;
    if quarter == 0 {
        return false;
    }
    let first_min = ratios[..quarter]
        .iter()
        .copied()
        .fold(T::infinity(), T::min);
    let last_max = ratios[ratios.len() - quarter..]
        .iter()
        .copied()
        .fold(T::neg_infinity(), T::max);
    last_max < first_min && last_max < lit(RATIO_THRESHOLD)
}

/// Ratios `a_n / b_n` for `n ≤ n_max` with a monotone-tail verdict.
pub fn ratio_condition<T: Scalar>(a: &[T], b: &[T], n_max: usize) -> Result<RatioReport<T>> {
    if a.len() <= n_max || b.len() <= n_max {
        return Err(QError::InvalidSpec(format!(
            "need sequences up to index {n_max}"
        )));
    }
    let mut ratios = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if b[n] == T::zero() {
            return Err(QError::DomainError(format!("b_{n} = 0")));
        }
        ratios.push(a[n] / b[n]);
    }
    let tends_to_zero = verdict(&ratios);
    Ok(RatioReport {
        ratios,
        tends_to_zero,
    })
}

/// [`ratio_condition`] from logarithms `ln a_n`, `ln b_n`, for sequences that underflow.
pub fn ratio_condition_ln<T: Scalar>(
    ln_a: &[T],
    ln_b: &[T],
    n_max: usize,
) -> Result<RatioReport<T>> {
    if ln_a.len() <= n_max || ln_b.len() <= n_max {
        return Err(QError::InvalidSpec(format!(
            "need sequences up to index {n_max}"
        )));
    }
    let mut ratios = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if ln_b[n] == T::neg_infinity() {
            return Err(QError::DomainError(format!("b_{n} = 0")));
        }
        ratios.push((ln_a[n] - ln_b[n]).exp());
    }
    let tends_to_zero = verdict(&ratios);
    Ok(RatioReport {
        ratios,
        tends_to_zero,
    })
}
