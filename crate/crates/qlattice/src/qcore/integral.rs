use crate::error::{QError, Result};
use crate::qcore::{GridFunction, MeasureSpec, QParams};
use crate::quadrature::gauss_legendre_unit;
use crate::scalar::{lit, Scalar};

/// Integrand accepted by [`qnorm`].
pub enum Integrand<'a, T> {
    Grid(&'a GridFunction<T>),
    Function(&'a dyn Fn(T) -> Result<T>),
}

const RECENT: usize = 8;

/// Jackson integral `∫_0^a f d_qx = (1 − q) a Σ_n f(a q^n) q^n`.
pub fn qintegral_0a<T: Scalar>(
    mut f: impl FnMut(T) -> Result<T>,
    a: T,
    params: &QParams<T>,
) -> Result<T> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(QError::DomainError(format!(
            "upper limit a = {a} must be positive"
        )));
    }
    let q = params.q();
    let mut sum = T::zero();
    let mut qn = T::one();
    let mut recent = [T::zero(); RECENT];
    for n in 0..params.max_terms() {
        let v = f(a * qn)?;
        if !v.is_finite() {
            return Err(QError::DomainError(format!(
                "integrand is not finite at x = {}",
                a * qn
            )));
        }
        sum = sum + v * qn;
        recent[n % RECENT] = v.abs();
        qn = qn * q;
        if n + 1 >= RECENT {
            let m = recent.iter().fold(T::zero(), |m, &r| m.max(r));
            if m * qn / (T::one() - q) <= params.tol() * sum.abs() {
                return Ok((T::one() - q) * a * sum);
            }
        }
    }
    Err(QError::non_convergence(
        params.max_terms(),
        "Jackson integral on (0, a)",
    ))
}

/// Jackson integral over `(0, ∞)` of a grid function: `(1 − q) Σ_k f(q^k) q^k`.
pub fn qintegral_0inf<T: Scalar>(f: &GridFunction<T>) -> T {
    let q = f.q();
    let s: T = f.nonzero().map(|(k, v)| v * q.powi(k)).sum();
    (T::one() - q) * s
}

/// `∫_0^{q^i} f d_qt` for a grid function.
pub fn qintegral_0x_grid<T: Scalar>(f: &GridFunction<T>, i: i32) -> T {
    let q = f.q();
    let s: T = f
        .nonzero()
        .filter(|&(k, _)| k >= i)
        .map(|(k, v)| v * q.powi(k))
        .sum();
    (T::one() - q) * s
}

/// Jackson q-difference `(f(x) − f(qx)) / ((1 − q) x)`.
pub fn qdiff<T: Scalar>(mut f: impl FnMut(T) -> Result<T>, x: T, params: &QParams<T>) -> Result<T> {
    if x == T::zero() {
        return Err(QError::DomainError("q-difference at x = 0".into()));
    }
    let q = params.q();
    Ok((f(x)? - f(q * x)?) / ((T::one() - q) * x))
}

fn grid_exponent<T: Scalar>(a: T, q: T) -> Result<i32> {
    let k = (a.ln() / q.ln()).round();
    let ki = k
        .to_i32()
        .ok_or_else(|| QError::DomainError(format!("interval end {a} not on the grid")))?;
    if (q.powi(ki) - a).abs() > lit::<T>(64.0) * T::epsilon() * a {
        return Err(QError::DomainError(format!(
            "interval end {a} is not a grid point q^k"
        )));
    }
    Ok(ki)
}

fn lebesgue_integral<T: Scalar>(
    f: &dyn Fn(T) -> Result<T>,
    order: usize,
    params: &QParams<T>,
) -> Result<T> {
    let eval = |n: usize| -> Result<T> {
        let (x, w) = gauss_legendre_unit::<T>(n);
        let mut s = T::zero();
        for (xi, wi) in x.into_iter().zip(w) {
            s = s + wi * f(xi)?;
        }
        Ok(s)
    };
    let cap = params.max_terms().max(order) * 8;
    let mut n = order;
    let mut prev = eval(n)?;
    while n * 2 <= cap {
        n *= 2;
        let cur = eval(n)?;
        let tol = params.tol().max(lit(1e-14));
        if (cur - prev).abs() <= tol * cur.abs().max(T::min_positive_value()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(QError::non_convergence(n, "Gauss-Legendre refinement"))
}

/// `‖f‖_p` with respect to the given measure.
pub fn qnorm<T: Scalar>(
    f: Integrand<'_, T>,
    p: T,
    measure: &MeasureSpec<T>,
    params: &QParams<T>,
) -> Result<T> {
    measure.validate()?;
    if !(p >= T::one()) || !p.is_finite() {
        return Err(QError::InvalidSpec(format!(
            "exponent p = {p} must be at least 1"
        )));
    }
    let q = params.q();
    let integral = match (f, measure) {
        (Integrand::Grid(g), MeasureSpec::QHalfLine) => {
            let s: T = g
                .nonzero()
                .map(|(k, v)| v.abs().powf(p) * g.q().powi(k))
                .sum();
            (T::one() - g.q()) * s
        }
        (Integrand::Grid(g), MeasureSpec::QInterval { a }) => {
            let k0 = grid_exponent(*a, g.q())?;
            let s: T = g
                .nonzero()
                .filter(|&(k, _)| k >= k0)
                .map(|(k, v)| v.abs().powf(p) * g.q().powi(k))
                .sum();
            (T::one() - g.q()) * s
        }
        (Integrand::Grid(_), MeasureSpec::Lebesgue { .. }) => {
            return Err(QError::InvalidSpec(
                "a grid function has no Lebesgue norm".into(),
            ))
        }
        (Integrand::Function(f), MeasureSpec::QInterval { a }) => {
            qintegral_0a(|x| f(x).map(|v| v.abs().powf(p)), *a, params)?
        }
        (Integrand::Function(f), MeasureSpec::QHalfLine) => {
            let lower = qintegral_0a(|x| f(x).map(|v| v.abs().powf(p)), T::one(), params)?;
            let mut upper = T::zero();
            let mut x = T::one() / q;
            let mut converged = false;
            for n in 0..params.max_terms() {
                let t = f(x)?.abs().powf(p) * x;
                upper = upper + t;
                if n + 1 >= RECENT && t <= params.tol() * (upper + lower / (T::one() - q)) {
                    converged = true;
                    break;
                }
                x = x / q;
            }
            if !converged {
                return Err(QError::non_convergence(
                    params.max_terms(),
                    "Jackson integral on (1, ∞)",
                ));
            }
            lower + (T::one() - q) * upper
        }
        (Integrand::Function(f), MeasureSpec::Lebesgue { quadrature_order }) => lebesgue_integral(
            &|x| f(x).map(|v| v.abs().powf(p)),
            *quadrature_order,
            params,
        )?,
    };
    Ok(integral.powf(T::one() / p))
}

/// Residual of q-integration by parts on `(0, 1)`:
/// `∫ G(qx) D_q f(x) d_qx = f(1)G(1) − f(0)G(0) − ∫ f g d_qx` with `G(x) = ∫_0^x g d_qt`.
///
/// `f0` defaults to the value of `f` at the smallest grid point reached by the budget.
pub fn check_qparts<T: Scalar>(
    f: impl Fn(T) -> T,
    g: impl Fn(T) -> T,
    params: &QParams<T>,
    f0: Option<T>,
    g0: Option<T>,
) -> Result<T> {
    let q = params.q();
    let big_g = |x: T| -> Result<T> {
        if x == T::zero() {
            return Ok(g0.unwrap_or_else(T::zero));
        }
        qintegral_0a(|t| Ok(g(t)), x, params)
    };
    let lhs = qintegral_0a(
        |x| {
            let d = (f(x) - f(q * x)) / ((T::one() - q) * x);
            Ok(big_g(q * x)? * d)
        },
        T::one(),
        params,
    )?;
    let f_zero = f0.unwrap_or_else(|| f(q.powi(params.max_terms() as i32)));
    let fg = qintegral_0a(|x| Ok(f(x) * g(x)), T::one(), params)?;
    let rhs = f(T::one()) * big_g(T::one())? - f_zero * g0.unwrap_or_else(T::zero) - fg;
    Ok((lhs - rhs).abs())
}
