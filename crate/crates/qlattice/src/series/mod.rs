mod checks;
mod order;

pub use checks::{check_generating_function, check_j3_bound, J3BoundReport};
pub use order::{
    estimate_order, estimate_order_ln, limsup_order_bound, ratio_condition, ratio_condition_ln,
    RatioReport,
};

use serde::{Deserialize, Serialize};

use crate::compensated::{alternating_sum, DWord};
use crate::error::{QError, Result};
use crate::qcore::pochhammer::poch_inf_dw;
use crate::qcore::{LatticePoint, QParams};
use crate::scalar::{from_u, is_integer, lit, Scalar};
use crate::special::{
    gamma, ln_gamma, ClassicalBessel, EulerProduct, HahnExton, Jackson2, Jackson2Variant,
    LatticeFunction, RealFunction,
};

/// Nonnegative coefficients `a_n` of `Σ (−1)^n a_n x^{2n}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Coefficients<T> {
    List {
        values: Vec<T>,
    },
    Classical {
        nu: T,
    },
    Jackson2 {
        nu: T,
        q: T,
        variant: Jackson2Variant,
    },
    Jackson3 {
        nu: T,
        q: T,
    },
    /// Expansion of `(c x²; q)_∞`.
    Euler {
        q: T,
        c: T,
    },
}

/// Multiplicative factor in front of the even series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Prefactor<T> {
    Unity,
    /// `constant · x^ν`.
    Power {
        nu: T,
        constant: T,
    },
}

impl<T: Scalar> Prefactor<T> {
    pub fn eval(&self, x: T) -> Result<T> {
        match *self {
            Prefactor::Unity => Ok(T::one()),
            Prefactor::Power { nu, constant } => {
                if is_integer(nu) {
                    Ok(constant * x.powi(nu.to_i32().unwrap_or(0)))
                } else if x > T::zero() {
                    Ok(constant * x.powf(nu))
                } else {
                    Err(QError::DomainError(format!(
                        "x^ν with non-integer ν = {nu} needs x > 0, got x = {x}"
                    )))
                }
            }
        }
    }
}

/// Even entire function `prefactor(x) · Σ (−1)^n a_n x^{2n}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvenEntireSeries<T> {
    pub coeffs: Coefficients<T>,
    pub prefactor: Prefactor<T>,
    pub label: String,
}

struct Powers<T> {
    q: T,
    qn: DWord<T>,
}

impl<T: Scalar> EvenEntireSeries<T> {
    pub fn from_list(values: Vec<T>, label: impl Into<String>) -> Result<Self> {
        if values.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
            return Err(QError::InvalidSpec(
                "coefficients must be finite and nonnegative".into(),
            ));
        }
        Ok(EvenEntireSeries {
            coeffs: Coefficients::List { values },
            prefactor: Prefactor::Unity,
            label: label.into(),
        })
    }

    /// `(c x²; q)_∞` as an even series.
    pub fn euler(q: T, c: T) -> Result<Self> {
        if !(q > T::zero() && q < T::one()) || !(c > T::zero()) {
            return Err(QError::InvalidSpec(format!(
                "need 0 < q < 1 and c > 0, got q = {q}, c = {c}"
            )));
        }
        Ok(EvenEntireSeries {
            coeffs: Coefficients::Euler { q, c },
            prefactor: Prefactor::Unity,
            label: format!("euler-product(q={q}, c={c})"),
        })
    }

    fn first(&self) -> T {
        match &self.coeffs {
            Coefficients::List { values } => values.first().copied().unwrap_or_else(T::zero),
            Coefficients::Classical { nu } => {
                T::one() / (lit::<T>(2.0).powf(*nu) * gamma(*nu + T::one()))
            }
            _ => T::one(),
        }
    }

    fn base(&self) -> T {
        match self.coeffs {
            Coefficients::Jackson2 { q, .. }
            | Coefficients::Jackson3 { q, .. }
            | Coefficients::Euler { q, .. } => q,
            _ => lit(0.5),
        }
    }

    /// `a_n / a_{n−1}` for `n ≥ 1`; `pw.qn` holds `q^n`.
    fn ratio(&self, n: usize, pw: &Powers<T>) -> DWord<T> {
        let one = DWord::one();
        let nt: T = from_u(n);
        match &self.coeffs {
            Coefficients::List { values } => {
                let a = values.get(n).copied().unwrap_or_else(T::zero);
                let b = values.get(n - 1).copied().unwrap_or_else(T::zero);
                if b == T::zero() {
                    DWord::zero()
                } else {
                    DWord::new(a) / DWord::new(b)
                }
            }
            Coefficients::Classical { nu } => {
                one / (DWord::new(lit::<T>(4.0) * nt) * DWord::new(*nu + nt))
            }
            Coefficients::Jackson3 { nu, .. } => {
                let qnu = pw.q.powf(*nu);
                pw.qn / ((one - pw.qn.mul_scalar(qnu)) * (one - pw.qn))
            }
            Coefficients::Jackson2 { nu, variant, .. } => {
                let qnu = pw.q.powf(*nu);
                let num = match variant {
                    Jackson2Variant::Quadratic => pw.qn.mul_scalar(qnu) * pw.qn / DWord::new(pw.q),
                    Jackson2Variant::AsPrinted => DWord::new(qnu * pw.q),
                };
                num / ((one - pw.qn.mul_scalar(qnu)) * (one - pw.qn))
            }
            Coefficients::Euler { c, .. } => {
                (pw.qn / DWord::new(pw.q)).mul_scalar(*c) / (one - pw.qn)
            }
        }
    }

    fn for_each_ratio(&self, n_max: usize, mut f: impl FnMut(usize, DWord<T>)) {
        let q = self.base();
        let mut pw = Powers {
            q,
            qn: DWord::one(),
        };
        for n in 1..=n_max {
            pw.qn = pw.qn.mul_scalar(q);
            f(n, self.ratio(n, &pw));
        }
    }

    /// `a_0, …, a_{n_max}` (entries past the end of a finite list are zero).
    pub fn coefficients(&self, n_max: usize) -> Vec<T> {
        let mut out = Vec::with_capacity(n_max + 1);
        if let Coefficients::List { values } = &self.coeffs {
            for n in 0..=n_max {
                out.push(values.get(n).copied().unwrap_or_else(T::zero));
            }
            return out;
        }
        let mut a = DWord::new(self.first());
        out.push(a.value());
        self.for_each_ratio(n_max, |_, r| {
            a = a * r;
            out.push(a.value());
        });
        out
    }

    /// `ln a_0, …, ln a_{n_max}` computed without underflow (`−∞` for zero coefficients).
    pub fn ln_coefficients(&self, n_max: usize) -> Vec<T> {
        match &self.coeffs {
            Coefficients::List { values } => (0..=n_max)
                .map(|n| values.get(n).map_or(T::neg_infinity(), |v| v.ln()))
                .collect(),
            Coefficients::Classical { nu } => (0..=n_max)
                .map(|n| {
                    let nt: T = from_u(n);
                    -(nt + nt + *nu) * lit::<T>(2.0).ln()
                        - ln_gamma(nt + T::one())
                        - ln_gamma(*nu + nt + T::one())
                })
                .collect(),
            _ => {
                let mut out = Vec::with_capacity(n_max + 1);
                let mut acc = self.first().ln();
                out.push(acc);
                self.for_each_ratio(n_max, |_, r| {
                    acc = acc + r.hi.ln() + r.lo / r.hi;
                    out.push(acc);
                });
                out
            }
        }
    }

    pub fn eval(&self, x: T, params: &QParams<T>) -> Result<T> {
        eval_even_series(self, x, params)
    }

    /// Order estimate from `a_0..=a_n_max`, treated as Taylor coefficients of `x^{2n}`.
    pub fn estimate_order(&self, n_max: usize) -> Result<T> {
        let ln = self.ln_coefficients(n_max);
        let mut taylor = vec![T::neg_infinity(); 2 * n_max + 1];
        for (n, v) in ln.into_iter().enumerate() {
            taylor[2 * n] = v;
        }
        estimate_order_ln(&taylor, 2 * n_max)
    }

    /// Whether the coefficients are nonincreasing from some index on within `0..=n_max`.
    pub fn eventually_decreasing(&self, n_max: usize) -> bool {
        let ln = self.ln_coefficients(n_max);
        let tail = &ln[n_max / 2..];
        tail.windows(2).all(|w| w[1] <= w[0])
    }
}

/// `prefactor(x) · Σ (−1)^n a_n x^{2n}`, stopping by the alternating tail bound.
pub fn eval_even_series<T: Scalar>(
    s: &EvenEntireSeries<T>,
    x: T,
    params: &QParams<T>,
) -> Result<T> {
    let pre = s.prefactor.eval(x)?;
    let x2 = x * x;
    let sum = match &s.coeffs {
        Coefficients::List { values } => {
            let mut acc = DWord::zero();
            let mut xp = DWord::one();
            for (n, &a) in values.iter().enumerate() {
                let t = xp.mul_scalar(a);
                acc = if n % 2 == 0 { acc + t } else { acc - t };
                xp = xp.mul_scalar(x2);
            }
            acc.value()
        }
        _ => {
            let q = s.base();
            let mut pw = Powers {
                q,
                qn: DWord::one(),
            };
            alternating_sum(
                DWord::new(s.first()),
                |n| {
                    pw.qn = pw.qn.mul_scalar(q);
                    s.ratio(n + 1, &pw).mul_scalar(-x2)
                },
                params,
                &s.label,
            )?
        }
    };
    Ok(pre * sum)
}

/// Family of even entire functions used as generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BesselFamily {
    Classical,
    Jackson2(Jackson2Variant),
    Jackson3,
    EulerProduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BesselSpec<T> {
    pub family: BesselFamily,
    pub nu: T,
    pub q: T,
}

impl<T: Scalar> BesselSpec<T> {
    pub fn new(family: BesselFamily, nu: T, q: T) -> Result<Self> {
        let s = BesselSpec { family, nu, q };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > -T::one()) || !self.nu.is_finite() {
            return Err(QError::InvalidSpec(format!(
                "order ν = {} must exceed −1",
                self.nu
            )));
        }
        if self.family != BesselFamily::Classical && !(self.q > T::zero() && self.q < T::one()) {
            return Err(QError::InvalidSpec(format!(
                "base q = {} is outside (0, 1)",
                self.q
            )));
        }
        Ok(())
    }

    /// Numerically robust evaluator for this function.
    pub fn function(&self, params: &QParams<T>) -> Result<SpecialFunction<T>> {
        self.validate()?;
        let p = if self.family == BesselFamily::Classical {
            *params
        } else {
            params.with_base(self.q)?
        };
        Ok(match self.family {
            BesselFamily::Classical => SpecialFunction::Classical(ClassicalBessel { nu: self.nu }),
            BesselFamily::Jackson2(v) => SpecialFunction::Jackson2(Jackson2::new(self.nu, p, v)?),
            BesselFamily::Jackson3 => SpecialFunction::Jackson3(HahnExton::new(self.nu, p)?),
            BesselFamily::EulerProduct => SpecialFunction::Euler(EulerProduct::new(p, 0)),
        })
    }
}

/// Coefficient sequence and prefactor of a Bessel-type function.
pub fn coeffs_for<T: Scalar>(spec: &BesselSpec<T>) -> Result<EvenEntireSeries<T>> {
    spec.validate()?;
    let (nu, q) = (spec.nu, spec.q);
    let jackson_constant = || -> Result<T> {
        let tol = T::epsilon();
        Ok(
            (poch_inf_dw(q.powf(nu + T::one()), q, tol, 4096)? / poch_inf_dw(q, q, tol, 4096)?)
                .value(),
        )
    };
    Ok(match spec.family {
        BesselFamily::Classical => EvenEntireSeries {
            coeffs: Coefficients::Classical { nu },
            prefactor: Prefactor::Power {
                nu,
                constant: T::one(),
            },
            label: format!("classical(nu={nu})"),
        },
        BesselFamily::Jackson3 => EvenEntireSeries {
            coeffs: Coefficients::Jackson3 { nu, q },
            prefactor: Prefactor::Power {
                nu,
                constant: jackson_constant()?,
            },
            label: format!("jackson3(nu={nu}, q={q})"),
        },
        BesselFamily::Jackson2(variant) => EvenEntireSeries {
            coeffs: Coefficients::Jackson2 { nu, q, variant },
            prefactor: Prefactor::Power {
                nu,
                constant: jackson_constant()?,
            },
            label: format!("jackson2(nu={nu}, q={q})"),
        },
        BesselFamily::EulerProduct => EvenEntireSeries::euler(q, T::one())?,
    })
}

/// Evaluator for one of the supported families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpecialFunction<T> {
    Classical(ClassicalBessel<T>),
    Jackson2(Jackson2<T>),
    Jackson3(HahnExton<T>),
    Euler(EulerProduct<T>),
}

impl<T: Scalar> SpecialFunction<T> {
    pub fn as_lattice(&self) -> Option<&dyn LatticeFunction<T>> {
        match self {
            SpecialFunction::Jackson3(f) => Some(f),
            SpecialFunction::Euler(f) => Some(f),
            _ => None,
        }
    }

    pub fn eval_lattice(&self, p: &LatticePoint<T>) -> Option<Result<T>> {
        self.as_lattice().map(|f| f.eval_lattice(p))
    }
}

impl<T: Scalar> RealFunction<T> for SpecialFunction<T> {
    fn eval(&self, x: T) -> Result<T> {
        match self {
            SpecialFunction::Classical(f) => f.eval(x),
            SpecialFunction::Jackson2(f) => f.eval(x),
            SpecialFunction::Jackson3(f) => f.eval(x),
            SpecialFunction::Euler(f) => f.eval(x),
        }
    }
}
