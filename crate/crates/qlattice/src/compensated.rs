use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{QError, Result};
use crate::qcore::QParams;
use crate::scalar::Scalar;

/// Unevaluated sum `hi + lo` carrying roughly twice the working precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DWord<T> {
    pub hi: T,
    pub lo: T,
}

#[inline]
fn two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod<T: Scalar>(a: T, b: T) -> (T, T) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl<T: Scalar> DWord<T> {
    pub fn new(x: T) -> Self {
        DWord {
            hi: x,
            lo: T::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::new(T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one())
    }

    pub fn value(self) -> T {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < T::zero() {
            -self
        } else {
            self
        }
    }

    pub fn mul_scalar(self, b: T) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = fast_two_sum(p, e + self.lo * b);
        DWord { hi, lo }
    }
}

impl<T: Scalar> Add for DWord<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        DWord { hi, lo }
    }
}

impl<T: Scalar> Neg for DWord<T> {
    type Output = Self;
    fn neg(self) -> Self {
        DWord {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl<T: Scalar> Sub for DWord<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Scalar> Mul for DWord<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = fast_two_sum(p, e);
        DWord { hi, lo }
    }
}

impl<T: Scalar> Div for DWord<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o.mul_scalar(q1);
        let q2 = r.hi / o.hi;
        let r = r - o.mul_scalar(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = fast_two_sum(q1, q2);
        DWord { hi, lo } + DWord::new(q3)
    }
}

/// Alternating sum `Σ_{k≥k0} t_k` driven by a double-word ratio `t_{k+1}/t_k`.
pub(crate) fn alternating_sum<T: Scalar>(
    first: DWord<T>,
    mut ratio: impl FnMut(usize) -> DWord<T>,
    params: &QParams<T>,
    what: &str,
) -> Result<T> {
    let mut term = first;
    let mut sum = first;
    if first.hi == T::zero() {
        return Ok(T::zero());
    }
    let mut prev = first.hi.abs();
    for n in 0..params.max_terms() {
        term = term * ratio(n);
        sum = sum + term;
        let a = term.hi.abs();
        if n + 1 >= 8 && a <= prev && a <= params.tol() * sum.hi.abs() {
            return Ok(sum.value());
        }
        if a == T::zero() {
            return Ok(sum.value());
        }
        prev = a;
    }
    Err(QError::non_convergence(
        params.max_terms(),
        what.to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_third_squared_beats_plain_arithmetic() {
        let third = DWord::one() / DWord::new(3.0f64);
        let back = third * DWord::new(3.0);
        assert!((back - DWord::one()).value().abs() < 1e-30);
    }

    #[test]
    fn sum_recovers_lost_low_bits() {
        let big = DWord::new(1.0e16f64);
        let s = big + DWord::new(1.0) + DWord::new(1.0) - big;
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn product_is_exact_for_representable_result() {
        let a = DWord::new(1.0f64 + f64::EPSILON);
        let p = a * a;
        assert_eq!(p.hi, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(p.lo, f64::EPSILON * f64::EPSILON);
    }
}
