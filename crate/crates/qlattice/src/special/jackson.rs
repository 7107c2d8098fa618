use serde::{Deserialize, Serialize};

use crate::compensated::{alternating_sum, DWord};
use crate::error::{QError, Result};
use crate::qcore::pochhammer::poch_inf_dw;
use crate::qcore::{LatticePoint, QParams};
use crate::scalar::{is_integer, Scalar};
use crate::scaled::Scaled;
use crate::special::{LatticeFunction, RealFunction};

/// Exponent convention for the second Jackson q-Bessel function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Jackson2Variant {
    /// `q^{n(n+ν)}`: entire of order zero.
    #[default]
    Quadratic,
    /// `q^{n(ν+1)}`: finite radius of convergence.
    AsPrinted,
}

fn power_with_order<T: Scalar>(x: T, nu: T, extra: i32) -> Result<T> {
    if is_integer(nu) {
        let n = nu
            .to_i32()
            .ok_or_else(|| QError::DomainError("order too large".into()))?;
        return Ok(x.powi(n + extra));
    }
    if x <= T::zero() {
        return Err(QError::DomainError(format!(
            "x^ν with non-integer ν = {nu} needs x > 0, got x = {x}"
        )));
    }
    Ok(x.powf(nu) * x.powi(extra))
}

fn base_power<T: Scalar>(base: T, e: T) -> T {
    if is_integer(e) {
        e.to_i32().map_or_else(|| base.powf(e), |n| base.powi(n))
    } else {
        base.powf(e)
    }
}

/// Third Jackson (Hahn–Exton) q-Bessel function `J_ν^{(3)}(x; B)` with base `B = params.q()`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HahnExton<T> {
    nu: T,
    params: QParams<T>,
}

impl<T: Scalar> HahnExton<T> {
    pub fn new(nu: T, params: QParams<T>) -> Result<Self> {
        if !nu.is_finite() {
            return Err(QError::InvalidSpec(format!(
                "order ν = {nu} must be finite"
            )));
        }
        Ok(HahnExton { nu, params })
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn params(&self) -> &QParams<T> {
        &self.params
    }

    /// Power series; valid for every real order, including negative integers.
    pub fn eval_series(&self, x: T) -> Result<T> {
        let b = self.params.q();
        let nu = self.nu;
        let k0 = if is_integer(nu) && nu < T::zero() {
            (-nu).to_usize().unwrap_or(0)
        } else {
            0
        };
        let k0i = k0 as i32;
        let xpow = power_with_order(x, nu, 2 * k0i)?;
        if xpow == T::zero() {
            return Ok(T::zero());
        }
        let tol = self.params.tol();
        let max = self.params.max_terms();
        let start = base_power(b, nu + T::one() + T::from_usize(k0).unwrap_or_else(T::zero));
        let p_k0 = poch_inf_dw(start, b, tol, max)?;
        let bb = poch_inf_dw(b, b, tol, max)?;
        let mut bk_fin = DWord::one();
        let mut bk = DWord::one();
        for _ in 0..k0 {
            bk = bk.mul_scalar(b);
            bk_fin = bk_fin * (DWord::one() - bk);
        }
        let tri = b.powi(k0i * (k0i + 1) / 2);
        let sign = if k0 % 2 == 1 { -T::one() } else { T::one() };
        let first = (p_k0.mul_scalar(tri * xpow * sign)) / (bb * bk_fin);
        let x2 = x * x;
        let mut bk1 = DWord::new(b).mul_scalar(b.powi(k0i));
        let mut bnu = DWord::new(start);
        alternating_sum(
            first,
            |_| {
                let r = bk1.mul_scalar(-x2) / ((DWord::one() - bk1) * (DWord::one() - bnu));
                bk1 = bk1.mul_scalar(b);
                bnu = bnu.mul_scalar(b);
                r
            },
            &self.params,
            "Hahn-Exton series",
        )
    }

    /// Product expansion for `x > 1`:
    /// `x^ν/(B;B)_∞ Σ_n (−1)^n B^{n(n−1)/2 + (ν+1)n}/(B;B)_n (x² B^{n+1}; B)_∞`.
    fn eval_product(&self, p: &LatticePoint<T>) -> Result<T> {
        let b = self.params.q();
        let nu = self.nu;
        let tol = self.params.tol();
        let max = self.params.max_terms();
        let bnu1 = b.powf(nu + T::one());
        let turn = (-p.h).max(0) as usize;
        let mut coef = Scaled::new(T::one());
        let mut terms = Vec::new();
        let mut max_log = T::neg_infinity();
        let log_tol = tol.log2();
        for n in 0..max + turn {
            let r = p.shifted_product_scaled(b, n as i32 + 1, tol, max)?;
            let mut t = coef.mul_scaled(r);
            if n % 2 == 1 {
                t = t.mul(-T::one());
            }
            if !t.is_zero() {
                let lg = t.m.abs().log2() + T::from_i32(t.e).unwrap_or_else(T::zero);
                if lg > max_log {
                    max_log = lg;
                }
                terms.push(t);
                if n > turn + 8 && lg < max_log + log_tol {
                    let s = Scaled::sum(&terms);
                    return self.finish_product(p, s);
                }
            }
            let bn1 = b.powi(n as i32 + 1);
            coef = coef.mul(b.powi(n as i32) * bnu1 / (T::one() - bn1));
            if coef.is_zero() {
                let s = Scaled::sum(&terms);
                return self.finish_product(p, s);
            }
        }
        Err(QError::non_convergence(max, "Hahn-Exton product expansion"))
    }

    fn finish_product(&self, p: &LatticePoint<T>, s: Scaled<T>) -> Result<T> {
        let b = self.params.q();
        let bb = poch_inf_dw(b, b, self.params.tol(), self.params.max_terms())?.value();
        let hp = crate::qcore::lattice::half_power(b, p.h);
        let direct = hp.powf(self.nu);
        let xnu = if direct.is_finite() && direct > T::zero() {
            Scaled::new(direct)
        } else {
            let two = T::one() + T::one();
            Scaled::exp2(self.nu * T::from_i32(p.h).unwrap_or_else(T::zero) / two * b.log2())
        };
        Ok(s.mul_scaled(xnu)
            .mul(p.correction_pow(self.nu) / bb)
            .value())
    }
}

impl<T: Scalar> RealFunction<T> for HahnExton<T> {
    fn eval(&self, x: T) -> Result<T> {
        if x > T::one() && (self.nu > -T::one() || is_integer(self.nu)) {
            let p = LatticePoint::from_value(x, self.params.q())?;
            return self.eval_lattice(&p);
        }
        self.eval_series(x)
    }
}

impl<T: Scalar> LatticeFunction<T> for HahnExton<T> {
    fn base(&self) -> T {
        self.params.q()
    }

    fn eval_lattice(&self, p: &LatticePoint<T>) -> Result<T> {
        let large = p.h < 0 || (p.h == 0 && p.delta > T::zero());
        if large && self.nu <= -T::one() && is_integer(self.nu) {
            // J_{−n}(x) = (−1)^n B^{n/2} J_n(x B^{n/2})
            let n = (-self.nu).to_i32().unwrap_or(0);
            let reflected = HahnExton {
                nu: -self.nu,
                params: self.params,
            };
            let v = reflected.eval_lattice(&LatticePoint::new(p.h + n, p.delta))?;
            let sign = if n % 2 == 1 { -T::one() } else { T::one() };
            return Ok(sign * self.params.q().sqrt().powi(n) * v);
        }
        if large && self.nu > -T::one() {
            self.eval_product(p)
        } else {
            self.eval_series(p.value(self.params.q()))
        }
    }
}

/// Second Jackson q-Bessel function `J_ν^{(2)}(x; Q)` with base `Q = params.q()`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jackson2<T> {
    nu: T,
    params: QParams<T>,
    variant: Jackson2Variant,
}

impl<T: Scalar> Jackson2<T> {
    pub fn new(nu: T, params: QParams<T>, variant: Jackson2Variant) -> Result<Self> {
        if !(nu > -T::one()) || !nu.is_finite() {
            return Err(QError::InvalidSpec(format!(
                "order ν = {nu} must exceed −1"
            )));
        }
        Ok(Jackson2 {
            nu,
            params,
            variant,
        })
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn variant(&self) -> Jackson2Variant {
        self.variant
    }
}

impl<T: Scalar> RealFunction<T> for Jackson2<T> {
    fn eval(&self, x: T) -> Result<T> {
        let q = self.params.q();
        let nu = self.nu;
        let xpow = power_with_order(x, nu, 0)?;
        let tol = self.params.tol();
        let max = self.params.max_terms();
        let qnu1 = q.powf(nu + T::one());
        let pre = poch_inf_dw(qnu1, q, tol, max)? / poch_inf_dw(q, q, tol, max)?;
        let first = pre.mul_scalar(xpow);
        let x2 = x * x;
        let qnu = q.powf(nu);
        let mut qn = DWord::new(q);
        let variant = self.variant;
        alternating_sum(
            first,
            |n| {
                let num = match variant {
                    Jackson2Variant::Quadratic => qn.mul_scalar(qnu).mul_scalar(q.powi(n as i32)),
                    Jackson2Variant::AsPrinted => DWord::new(qnu1),
                };
                let r = num.mul_scalar(-x2)
                    / ((DWord::one() - qn.mul_scalar(qnu)) * (DWord::one() - qn));
                qn = qn.mul_scalar(q);
                r
            },
            &self.params,
            "second Jackson q-Bessel series",
        )
    }
}
