use serde::Serialize;

use crate::compensated::DWord;
use crate::error::{QError, Result};
use crate::qcore::pochhammer::poch_inf_dw;
use crate::qcore::{LatticePoint, QParams};
use crate::scalar::{from_i, Scalar};
use crate::special::{HahnExton, LatticeFunction};

/// `|(q x/t; q)_∞ / (x t; q)_∞ − Σ_{n=−N}^{N} J_n^{(3)}(x; q) t^n|`.
pub fn check_generating_function<T: Scalar>(
    x: T,
    t: T,
    n: usize,
    params: &QParams<T>,
) -> Result<T> {
    if t == T::zero() {
        return Err(QError::DomainError("t must be nonzero".into()));
    }
    if !((x * t).abs() < T::one()) {
        return Err(QError::DomainError(format!(
            "|x t| = {} must be below 1",
            (x * t).abs()
        )));
    }
    let q = params.q();
    let num = poch_inf_dw(q * x / t, q, params.tol(), params.max_terms())?;
    let den = poch_inf_dw(x * t, q, params.tol(), params.max_terms())?;
    let lhs = num / den;
    let ni = n as i64;
    let mut rhs = DWord::zero();
    for k in -ni..=ni {
        let j = HahnExton::new(from_i::<T>(k), *params)?.eval_series(x)?;
        rhs = rhs + DWord::new(j).mul_scalar(t.powi(k as i32));
    }
    Ok((lhs - rhs).value().abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct J3BoundReport<T> {
    pub abs_j: T,
    pub bound: T,
    pub holds: bool,
}

/// Compares `|J_ν^{(3)}(q^k; q)|` with `q^{kν} / (q; q²)_∞²`.
pub fn check_j3_bound<T: Scalar>(
    nu: T,
    q: T,
    k: i32,
    params: &QParams<T>,
) -> Result<J3BoundReport<T>> {
    if !(nu >= T::zero()) {
        return Err(QError::InvalidSpec(format!(
            "order ν = {nu} must be nonnegative"
        )));
    }
    let p = params.with_base(q)?;
    let j = HahnExton::new(nu, p)?.eval_lattice(&LatticePoint::exact(2 * k))?;
    let c = poch_inf_dw(q, q * q, p.tol(), p.max_terms())?.value();
    let bound = q.powf(from_i::<T>(k as i64) * nu) / (c * c);
    Ok(J3BoundReport {
        abs_j: j.abs(),
        bound,
        holds: j.abs() <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_origin() {
        let p = QParams::with_q(0.5f64).unwrap();
        assert!(check_generating_function(0.0, 0.5, 12, &p).unwrap() < 1e-12);
    }

    #[test]
    fn small_product_grid() {
        let p = QParams::with_q(0.5f64).unwrap();
        for (x, t) in [(0.2, 0.5), (0.3, 0.25), (0.1, -0.5)] {
            let r = check_generating_function(x, t, 12, &p).unwrap();
            assert!(r < 1e-10, "x={x} t={t}: {r}");
        }
    }

    #[test]
    fn rejects_outside_disc() {
        let p = QParams::with_q(0.5f64).unwrap();
        assert!(matches!(
            check_generating_function(2.0, 0.5, 12, &p),
            Err(QError::DomainError(_))
        ));
        assert!(check_generating_function(0.2, 0.0, 12, &p).is_err());
    }

    #[test]
    fn bound_examples() {
        let p = QParams::with_q(0.5f64).unwrap();
        let r = check_j3_bound(0.0, 0.5, 0, &p).unwrap();
        assert!(r.holds && r.bound > 1.0);
        assert!(check_j3_bound(1.0, 0.5, 5, &p).unwrap().holds);
        assert!(check_j3_bound(0.5, 0.3, -3, &p).unwrap().holds);
    }
}
