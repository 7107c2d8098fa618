use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{QError, Result};
use crate::qcore::{qpochhammer_inf_base, GridFunction, GridWindow, LatticePoint, QParams};
use crate::qhankel::hankel_q;
use crate::scalar::{from_i, lit, Scalar};
use crate::special::{HahnExton, LatticeFunction};

pub const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport<T> {
    pub eps_t: T,
    pub eps_omega: T,
    pub n_t: i32,
    pub n_omega: i32,
    /// `n_T + n_Ω`.
    pub lhs: i32,
    /// `2 log_q[(q²; q²)_∞² (1 − ε_T − ε_Ω)]`; NaN when vacuous.
    pub rhs: T,
    /// `log_q[(q; q²)_∞² (1 − ε_T − ε_Ω)]`; NaN when vacuous.
    pub rhs_proof: T,
    /// `lhs ≤ rhs`, the direction that follows from the kernel-norm estimate; true when vacuous.
    pub satisfied: bool,
    /// `lhs ≥ rhs`; true when vacuous.
    pub printed_direction_holds: bool,
    pub vacuous: bool,
    /// Norm of the kernel restricted to `(0, q^{n_T}] × (0, q^{n_Ω}]`.
    pub kernel_norm: T,
    /// `kernel_norm − (1 − ε_T − ε_Ω)`, non-negative by the de Jeu inequality.
    pub de_jeu_slack: T,
}

fn check_normalized<T: Scalar>(f: &GridFunction<T>) -> Result<()> {
    let n = f.norm();
    if (n - T::one()).abs() > lit(NORMALIZATION_TOL) {
        return Err(QError::NotNormalized(n.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// Mass of `f` outside `T = {q^{n + n_T}}_{n ≥ 0}`, the smallest `ε_T` for which `f` is concentrated in `T`.
pub fn concentration<T: Scalar>(f: &GridFunction<T>, n_t: i32) -> Result<T> {
    check_normalized(f)?;
    let q = f.q();
    let s: T = f
        .nonzero()
        .filter(|&(k, _)| k < n_t)
        .map(|(k, v)| v * v * q.powi(k))
        .sum();
    Ok(((T::one() - q) * s).sqrt())
}

/// `L²_q × L²_q` norm of `(xt)^{1/2} J_ν^{(3)}(xt; q²)` on `(0, q^{n_T}] × (0, q^{n_Ω}]`.
///
/// With `M = n_T + n_Ω` the squared norm is `Σ_{m ≥ M} (m − M + 1) q^m K(m)²`; the tail is cut
/// once its bound from `|J_ν^{(3)}(q^m; q²)| ≤ q^{mν} / (q; q²)_∞²` drops below `tol`.
pub fn kernel_truncated_norm<T: Scalar>(
    nu: T,
    n_t: i32,
    n_omega: i32,
    params: &QParams<T>,
) -> Result<T> {
    if !(nu > -T::one()) {
        return Err(QError::InvalidSpec(format!(
            "order ν = {nu} must exceed −1"
        )));
    }
    let q = params.q();
    let j = HahnExton::new(nu, params.squared())?;
    let c = {
        let p = qpochhammer_inf_base(q, q * q, params)?;
        T::one() / (p * p * p * p)
    };
    let r = q.powf(lit::<T>(2.0) * nu + lit(2.0));
    let one = T::one();
    let big_m = n_t + n_omega;
    let mut sum = T::zero();
    for i in 0..params.max_terms() {
        let m = big_m + i as i32;
        let km = q.powi(m).sqrt() * j.eval_lattice(&LatticePoint::exact(m))?;
        let weight = from_i::<T>(i as i64 + 1);
        sum = sum + weight * q.powi(m) * km * km;
        let rm = r.powi(m + 1);
        let tail = c * rm * (from_i::<T>(i as i64 + 2) / (one - r) + r / ((one - r) * (one - r)));
        if i >= 8 && tail <= params.tol() * sum {
            return Ok(sum.sqrt());
        }
    }
    Err(QError::non_convergence(
        params.max_terms(),
        "truncated kernel norm",
    ))
}

/// Output window wide enough to carry `Hf` to working precision.
pub fn transform_window<T: Scalar>(
    f: &GridFunction<T>,
    nu: T,
    params: &QParams<T>,
) -> Result<GridWindow> {
    let q = params.q();
    let lnq = -q.ln();
    let eps = params.tol().max(T::epsilon());
    let left = (lit::<T>(-2.0) * eps.ln() / lnq)
        .sqrt()
        .ceil()
        .to_i32()
        .unwrap_or(64)
        + 4;
    let right = (-eps.ln() / ((nu + T::one()) * lnq))
        .ceil()
        .to_i32()
        .unwrap_or(64)
        + 8;
    GridWindow::new(-f.window().k_max() - left, -f.window().k_min() + right)
}

/// Uncertainty diagnostics for a unit-norm `f`, reusing `Hf` and kernel norms across a sweep.
#[derive(Clone, Debug)]
pub struct UncertaintyContext<T> {
    f: GridFunction<T>,
    hf: GridFunction<T>,
    nu: T,
    params: QParams<T>,
    c_statement: T,
    c_proof: T,
    kernel_norms: BTreeMap<i32, T>,
}

impl<T: Scalar> UncertaintyContext<T> {
    pub fn new(f: &GridFunction<T>, nu: T, params: &QParams<T>) -> Result<Self> {
        check_normalized(f)?;
        let window = transform_window(f, nu, params)?;
        let hf = hankel_q(f, nu, window, params)?;
        let q = params.q();
        let a = qpochhammer_inf_base(q * q, q * q, params)?;
        let b = qpochhammer_inf_base(q, q * q, params)?;
        Ok(UncertaintyContext {
            f: f.clone(),
            hf,
            nu,
            params: *params,
            c_statement: a * a,
            c_proof: b * b,
            kernel_norms: BTreeMap::new(),
        })
    }

    pub fn transform(&self) -> &GridFunction<T> {
        &self.hf
    }

    fn kernel_norm(&mut self, m: i32) -> Result<T> {
        if let Some(&v) = self.kernel_norms.get(&m) {
            return Ok(v);
        }
        let v = kernel_truncated_norm(self.nu, m, 0, &self.params)?;
        self.kernel_norms.insert(m, v);
        Ok(v)
    }

    pub fn report(&mut self, n_t: i32, n_omega: i32) -> Result<ConcentrationReport<T>> {
        let eps_t = concentration(&self.f, n_t)?;
        let eps_omega = concentration(&self.hf, n_omega)?;
        let kernel_norm = self.kernel_norm(n_t + n_omega)?;
        let q = self.params.q();
        let mass = T::one() - eps_t - eps_omega;
        let vacuous = mass <= T::zero();
        let lhs = n_t + n_omega;
        let (rhs, rhs_proof) = if vacuous {
            (T::nan(), T::nan())
        } else {
            let logq = |x: T| x.ln() / q.ln();
            (
                lit::<T>(2.0) * logq(self.c_statement * mass),
                logq(self.c_proof * mass),
            )
        };
        let l = from_i::<T>(lhs as i64);
        Ok(ConcentrationReport {
            eps_t,
            eps_omega,
            n_t,
            n_omega,
            lhs,
            rhs,
            rhs_proof,
            satisfied: vacuous || l <= rhs,
            printed_direction_holds: vacuous || l >= rhs,
            vacuous,
            kernel_norm,
            de_jeu_slack: kernel_norm - mass,
        })
    }

    /// Reports for every `(n_T, n_Ω)` in the square `range × range`, ordered by `n_T` then `n_Ω`.
    pub fn sweep(&mut self, lo: i32, hi: i32) -> Result<Vec<ConcentrationReport<T>>> {
        if lo > hi {
            return Err(QError::InvalidSpec(format!(
                "empty sweep range [{lo}, {hi}]"
            )));
        }
        let mut out = Vec::with_capacity(((hi - lo + 1) * (hi - lo + 1)) as usize);
        for n_t in lo..=hi {
            for n_omega in lo..=hi {
                out.push(self.report(n_t, n_omega)?);
            }
        }
        Ok(out)
    }
}

pub fn theorem4_report<T: Scalar>(
    f: &GridFunction<T>,
    nu: T,
    n_t: i32,
    n_omega: i32,
    params: &QParams<T>,
) -> Result<ConcentrationReport<T>> {
    UncertaintyContext::new(f, nu, params)?.report(n_t, n_omega)
}

pub fn sweep<T: Scalar>(
    f: &GridFunction<T>,
    nu: T,
    lo: i32,
    hi: i32,
    params: &QParams<T>,
) -> Result<Vec<ConcentrationReport<T>>> {
    UncertaintyContext::new(f, nu, params)?.sweep(lo, hi)
}
