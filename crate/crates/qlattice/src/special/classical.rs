use crate::error::{QError, Result};
use crate::scalar::{from_u, is_integer, lit, Scalar};
use crate::special::gamma::ln_gamma;

fn series<T: Scalar>(nu: T, x: T) -> T {
    let half_x = x * lit(0.5);
    let mut term = (nu * half_x.ln() - ln_gamma(nu + T::one())).exp();
    let y = -half_x * half_x;
    let mut sum = term;
    for k in 1..200usize {
        let kt: T = from_u(k);
        term = term * y / (kt * (nu + kt));
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    sum
}

fn miller<T: Scalar>(nu: T, x: T) -> T {
    let xf = x.to_f64().unwrap_or(0.0);
    let n = (xf + 30.0 + 2.0 * (40.0 * xf).sqrt()).ceil() as usize;
    let n = n + n % 2;
    let mut c = vec![T::one(); n / 2 + 1];
    let mut r = T::one();
    for (j, cj) in c.iter_mut().enumerate().skip(1) {
        let jt: T = from_u(j);
        if j > 1 {
            r = r * (nu + jt - T::one()) / jt;
        }
        *cj = (nu + jt + jt) * r;
    }
    let big = T::max_value().sqrt().sqrt();
    let mut f_next = T::zero();
    let mut f = T::min_positive_value().sqrt().sqrt();
    let mut norm = T::zero();
    for k in (0..=n).rev() {
        if k % 2 == 0 {
            norm = norm + c[k / 2] * f;
        }
        if k == 0 {
            break;
        }
        let mu = nu + from_u::<T>(k);
        let f_prev = (lit::<T>(2.0) * mu / x) * f - f_next;
        f_next = f;
        f = f_prev;
        if f.abs() > big {
            f = f / big;
            f_next = f_next / big;
            norm = norm / big;
        }
    }
    let scale = (nu * (x * lit(0.5)).ln() - ln_gamma(nu + T::one())).exp();
    f * scale / norm
}

/// Classical Bessel function of the first kind `J_ν(x)`.
pub fn bessel_j<T: Scalar>(nu: T, x: T) -> Result<T> {
    if !nu.is_finite() || !x.is_finite() {
        return Err(QError::DomainError("non-finite Bessel argument".into()));
    }
    if is_integer(nu) && nu < T::zero() {
        let v = bessel_j(-nu, x)?;
        let odd = (-nu).to_i64().unwrap_or(0) % 2 == 1;
        return Ok(if odd { -v } else { v });
    }
    if x < T::zero() {
        if !is_integer(nu) {
            return Err(QError::DomainError(format!(
                "J_ν at x = {x} < 0 needs integer order, got ν = {nu}"
            )));
        }
        let v = bessel_j(nu, -x)?;
        let odd = nu.to_i64().unwrap_or(0) % 2 == 1;
        return Ok(if odd { -v } else { v });
    }
    if nu <= -T::one() {
        return Err(QError::DomainError(format!(
            "non-integer order ν = {nu} ≤ −1 is not supported"
        )));
    }
    if x == T::zero() {
        if nu == T::zero() {
            return Ok(T::one());
        }
        if nu > T::zero() {
            return Ok(T::zero());
        }
        return Err(QError::DomainError(format!(
            "J_ν(0) is singular for ν = {nu}"
        )));
    }
    if x <= lit(2.0) {
        Ok(series(nu, x))
    } else {
        Ok(miller(nu, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_closed_form() {
        for &x in &[0.1f64, 1.0, 2.5, 10.0, 37.0, 120.0] {
            let exact = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin();
            assert!((bessel_j(0.5, x).unwrap() - exact).abs() < 1e-14, "x={x}");
            let exact = (2.0 / (std::f64::consts::PI * x)).sqrt() * (x.sin() / x - x.cos());
            assert!((bessel_j(1.5, x).unwrap() - exact).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn integer_order_reference_values() {
        assert!((bessel_j(0.0f64, 1.0).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(1.0f64, 5.0).unwrap() + 0.327_579_137_591_465_2).abs() < 1e-15);
        assert!((bessel_j(0.0f64, 2.404_825_557_695_773).unwrap()).abs() < 1e-15);
        assert!((bessel_j(-1.0f64, 5.0).unwrap() - 0.327_579_137_591_465_2).abs() < 1e-15);
    }

    #[test]
    fn origin_and_domain() {
        assert_eq!(bessel_j(0.0f64, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(2.0f64, 0.0).unwrap(), 0.0);
        assert!(bessel_j(0.5f64, -1.0).is_err());
        assert!((bessel_j(1.0f64, -1.0).unwrap() + bessel_j(1.0, 1.0).unwrap()).abs() < 1e-16);
    }

    #[test]
    fn negative_fractional_order() {
        for &x in &[0.7f64, 3.0, 15.0] {
            let exact = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.cos();
            assert!((bessel_j(-0.5, x).unwrap() - exact).abs() < 1e-14, "x={x}");
        }
    }
}
