use crate::compensated::DWord;
use crate::error::{QError, Result};
use crate::qcore::QParams;
use crate::scalar::Scalar;

/// Finite product `(a; q)_n = ∏_{k<n} (1 − a q^k)`.
pub fn qpochhammer<T: Scalar>(a: T, q: T, n: usize) -> T {
    let mut p = DWord::one();
    let mut qk = DWord::one();
    for _ in 0..n {
        p = p * (DWord::one() - qk.mul_scalar(a));
        qk = qk.mul_scalar(q);
    }
    p.value()
}

pub(crate) fn poch_inf_dw<T: Scalar>(a: T, q: T, tol: T, max_terms: usize) -> Result<DWord<T>> {
    let mut p = DWord::one();
    let mut qk = DWord::one();
    for k in 0..max_terms {
        let aqk = qk.mul_scalar(a);
        p = p * (DWord::one() - aqk);
        if p.hi == T::zero() {
            return Ok(p);
        }
        qk = qk.mul_scalar(q);
        if k + 1 >= 8 && (qk.hi * a).abs() / (T::one() - q) < tol {
            return Ok(p);
        }
    }
    Err(QError::non_convergence(
        max_terms,
        format!("infinite q-Pochhammer with a = {a}, q = {q}"),
    ))
}

/// Infinite product `(a; q)_∞` in base `params.q()`, accumulated in double-word arithmetic.
pub fn qpochhammer_inf<T: Scalar>(a: T, params: &QParams<T>) -> Result<T> {
    qpochhammer_inf_base(a, params.q(), params)
}

/// `(a; base)_∞` using the tolerance and budget of `params`.
pub fn qpochhammer_inf_base<T: Scalar>(a: T, base: T, params: &QParams<T>) -> Result<T> {
    if !(base > T::zero() && base < T::one()) {
        return Err(QError::InvalidParams(format!(
            "base {base} is outside (0, 1)"
        )));
    }
    poch_inf_dw(a, base, params.tol(), params.max_terms()).map(DWord::value)
}

pub(crate) fn euler_series_dw<T: Scalar>(x: T, q: T, terms: usize) -> DWord<T> {
    let mut sum = DWord::zero();
    let mut term = DWord::one();
    let mut qn = DWord::one();
    for _ in 0..terms {
        sum = sum + term;
        let denom = DWord::one() - qn.mul_scalar(q);
        term = (term * qn.mul_scalar(-x)) / denom;
        qn = qn.mul_scalar(q);
    }
    sum
}

/// Partial sum `Σ_{n<terms} (−1)^n q^{n(n−1)/2} x^n / (q; q)_n` of the Euler expansion of `(x; q)_∞`.
pub fn euler_series<T: Scalar>(x: T, q: T, terms: usize) -> T {
    euler_series_dw(x, q, terms).value()
}

/// `|(x; q)_∞ − Σ_{n<terms} (−1)^n q^{n(n−1)/2} x^n/(q; q)_n|`.
pub fn euler_identity_residual<T: Scalar>(x: T, params: &QParams<T>, terms: usize) -> Result<T> {
    let prod = poch_inf_dw(x, params.q(), params.tol(), params.max_terms())?;
    let series = euler_series_dw(x, params.q(), terms);
    Ok((prod - series).value().abs())
}
