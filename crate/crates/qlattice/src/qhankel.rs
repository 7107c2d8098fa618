use serde::Serialize;

use crate::error::{QError, Result};
use crate::linalg::{lstsq, singular_values, svd, Matrix};
use crate::qcore::{qpochhammer_inf_base, GridFunction, GridWindow, LatticePoint, QParams};
use crate::scalar::{from_i, lit, Scalar};
use crate::special::{HahnExton, LatticeFunction, RealFunction};

pub const SPECTRAL_CUTOFF: f64 = 1e-10;
/// Relative truncation, in units of `max |f|`, above which a round trip is refused.
pub const ROUNDTRIP_MARGIN: f64 = 1e-3;
const LEFT_SAFETY: f64 = 10.0;

/// Scaling of the transform.
///
/// `SelfInverse` sums `Σ_k q^k K(j + k) f(q^k)`, which squares to the identity on the grid.
/// `JacksonMeasure` keeps the `(1 − q)` of the Jackson integral, so `H∘H = (1 − q)² I`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    #[default]
    SelfInverse,
    JacksonMeasure,
}

/// Table of `K(m) = (q^m)^{1/2} J_ν^{(3)}(q^m; q²)` over a range of exponents.
#[derive(Clone, Debug)]
pub struct Kernel<T> {
    nu: T,
    q: T,
    m_min: i32,
    values: Vec<T>,
}

impl<T: Scalar> Kernel<T> {
    pub fn new(nu: T, m_min: i32, m_max: i32, params: &QParams<T>) -> Result<Self> {
        if !(nu > -T::one()) {
            return Err(QError::InvalidSpec(format!(
                "order ν = {nu} must exceed −1"
            )));
        }
        let q = params.q();
        let j = HahnExton::new(nu, params.squared())?;
        let sq = q.sqrt();
        let values = (m_min..=m_max)
            .map(|m| Ok(sq.powi(m) * j.eval_lattice(&LatticePoint::exact(m))?))
            .collect::<Result<Vec<T>>>()?;
        Ok(Kernel {
            nu,
            q,
            m_min,
            values,
        })
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn get(&self, m: i32) -> T {
        self.values[(m - self.m_min) as usize]
    }
}

fn transform_with<T: Scalar>(
    f: &GridFunction<T>,
    kernel: &Kernel<T>,
    out_window: GridWindow,
    norm: Normalization,
) -> Result<GridFunction<T>> {
    let q = f.q();
    let c = match norm {
        Normalization::SelfInverse => T::one(),
        Normalization::JacksonMeasure => T::one() - q,
    };
    let terms: Vec<(i32, T)> = f.nonzero().map(|(k, v)| (k, q.powi(k) * v)).collect();
    GridFunction::try_from_fn(q, out_window, |j, _| {
        let s: T = terms.iter().map(|&(k, w)| kernel.get(j + k) * w).sum();
        Ok(c * s)
    })
}

fn kernel_for<T: Scalar>(
    f: &GridFunction<T>,
    nu: T,
    out_window: GridWindow,
    params: &QParams<T>,
) -> Result<Kernel<T>> {
    check_grid(f, params)?;
    Kernel::new(
        nu,
        f.window().k_min() + out_window.k_min(),
        f.window().k_max() + out_window.k_max(),
        params,
    )
}

fn check_grid<T: Scalar>(f: &GridFunction<T>, params: &QParams<T>) -> Result<()> {
    if (f.q() - params.q()).abs() > T::epsilon() * params.q() {
        return Err(QError::InvalidSpec(format!(
            "grid base {} differs from q = {}",
            f.q(),
            params.q()
        )));
    }
    Ok(())
}

/// q-Hankel transform of `f` sampled on `out_window`, in the self-inverse normalization.
pub fn hankel_q<T: Scalar>(
    f: &GridFunction<T>,
    nu: T,
    out_window: GridWindow,
    params: &QParams<T>,
) -> Result<GridFunction<T>> {
    hankel_q_with(f, nu, out_window, params, Normalization::SelfInverse)
}

pub fn hankel_q_with<T: Scalar>(
    f: &GridFunction<T>,
    nu: T,
    out_window: GridWindow,
    params: &QParams<T>,
    norm: Normalization,
) -> Result<GridFunction<T>> {
    let kernel = kernel_for(f, nu, out_window, params)?;
    transform_with(f, &kernel, out_window, norm)
}

/// `1 / (q; q²)_∞²`, the constant in `|J_ν^{(3)}(q^m; q²)| ≤ q^{mν} / (q; q²)_∞²`.
pub(crate) fn kernel_bound_constant<T: Scalar>(params: &QParams<T>) -> Result<T> {
    let p = qpochhammer_inf_base(params.q(), params.q() * params.q(), params)?;
    Ok(T::one() / (p * p))
}

/// Estimated error of `H(Hf)` on `f.window()` caused by truncating the inner transform to `work`.
///
/// The right tail uses the analytic kernel bound; the left tail, where the kernel decays
/// super-exponentially, extrapolates the ratio of the last two retained terms, times a safety factor.
pub fn truncation_estimate<T: Scalar>(
    f: &GridFunction<T>,
    g: &GridFunction<T>,
    kernel: &Kernel<T>,
    params: &QParams<T>,
) -> Result<T> {
    let q = params.q();
    let nu = kernel.nu();
    let c = kernel_bound_constant(params)?;
    let a = g.window().k_min();
    let b = g.window().k_max();
    let e = nu + lit(0.5);
    let s: T = f
        .nonzero()
        .map(|(k, v)| q.powi(k) * q.powf(from_i::<T>(k as i64) * e) * v.abs())
        .sum();
    let k_edge = if e >= T::zero() {
        f.window().k_min()
    } else {
        f.window().k_max()
    };
    let r = lit::<T>(2.0) * nu + lit(2.0);
    let right =
        c * c * s * q.powf(from_i::<T>(k_edge as i64) * e) * q.powf(from_i::<T>(b as i64 + 1) * r)
            / (T::one() - q.powf(r));
    let term = |j: i32, k: i32| (q.powi(j) * kernel.get(j + k) * g.get(j)).abs();
    let left = f
        .window()
        .exponents()
        .map(|k| {
            let last = term(a, k);
            let prev = if a < b { term(a + 1, k) } else { T::zero() };
            let ratio = if prev > last { last / prev } else { T::one() };
            last * ratio
        })
        .fold(T::zero(), T::max);
    Ok(right + lit::<T>(LEFT_SAFETY) * left)
}

/// `max_k |H(Hf)(q^k) − f(q^k)|` over `f.window()`, with `Hf` computed on `work_window`.
pub fn roundtrip_error<T: Scalar>(
    f: &GridFunction<T>,
    nu: T,
    work_window: GridWindow,
    params: &QParams<T>,
) -> Result<T> {
    if !work_window.contains_window(&f.window()) {
        return Err(QError::WindowTooSmall(format!(
            "work window [{}, {}] does not cover the input window [{}, {}]",
            work_window.k_min(),
            work_window.k_max(),
            f.window().k_min(),
            f.window().k_max()
        )));
    }
    let kernel = kernel_for(f, nu, work_window, params)?;
    let g = transform_with(f, &kernel, work_window, Normalization::SelfInverse)?;
    let est = truncation_estimate(f, &g, &kernel, params)?;
    let scale = f.max_abs();
    if est > lit::<T>(ROUNDTRIP_MARGIN) * scale {
        return Err(QError::WindowTooSmall(format!(
            "estimated truncation {est:e} exceeds {ROUNDTRIP_MARGIN:e} max|f| = {:e}",
            lit::<T>(ROUNDTRIP_MARGIN) * scale
        )));
    }
    let h = transform_with(&g, &kernel, f.window(), Normalization::SelfInverse)?;
    Ok(f.window()
        .exponents()
        .map(|k| (h.get(k) - f.get(k)).abs())
        .fold(T::zero(), T::max))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PwReport<T> {
    /// `(Hf)(q^{−n})` for `n = 1..N`.
    pub values: Vec<T>,
    pub max_abs: T,
}

/// Transform values at `q^{−1}, …, q^{−N}`; all zero exactly when `f` lies in the Paley-Wiener space.
pub fn pw_membership<T: Scalar>(
    f: &GridFunction<T>,
    nu: T,
    n: usize,
    params: &QParams<T>,
) -> Result<PwReport<T>> {
    if n == 0 {
        return Err(QError::InvalidSpec("N must be positive".into()));
    }
    let out = GridWindow::new(-(n as i32), -1)?;
    let g = hankel_q(f, nu, out, params)?;
    let values: Vec<T> = (1..=n as i32).map(|k| g.get(-k)).collect();
    let max_abs = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    Ok(PwReport { values, max_abs })
}

/// `f(x) = x^{ν−α+1/2} J_α^{(3)}(x; q²)`, a band-limited function.
#[derive(Clone, Debug)]
pub struct SonineFunction<T> {
    nu: T,
    alpha: T,
    j: HahnExton<T>,
}

impl<T: Scalar> SonineFunction<T> {
    pub fn eval(&self, x: T) -> Result<T> {
        Ok(x.powf(self.nu - self.alpha + lit(0.5)) * self.j.eval(x)?)
    }

    /// Value at `q^k`, using exact lattice arithmetic.
    pub fn eval_grid(&self, k: i32) -> Result<T> {
        let q = self.j.params().q().sqrt();
        let x = q.powi(k);
        Ok(x.powf(self.nu - self.alpha + lit(0.5))
            * self.j.eval_lattice(&LatticePoint::exact(k))?)
    }

    pub fn sample(&self, window: GridWindow) -> Result<GridFunction<T>> {
        let q = self.j.params().q().sqrt();
        GridFunction::try_from_fn(q, window, |k, _| self.eval_grid(k))
    }
}

/// Closed form of the transform of [`SonineFunction`],
/// `t^{ν+1/2} (q^{2α−2ν}; q²)_∞ (t²q²; q²)_∞ / [(q²; q²)_∞ (t²q^{2α−2ν}; q²)_∞]`.
#[derive(Clone, Debug)]
pub struct SonineImage<T> {
    nu: T,
    alpha: T,
    params: QParams<T>,
}

impl<T: Scalar> SonineImage<T> {
    /// Value in the self-inverse normalization of [`hankel_q`].
    pub fn eval(&self, t: T) -> Result<T> {
        let q = self.params.q();
        let b = q * q;
        let s = q.powf(lit::<T>(2.0) * (self.alpha - self.nu));
        let p = &self.params;
        let num = qpochhammer_inf_base(s, b, p)? * qpochhammer_inf_base(t * t * b, b, p)?;
        if num == T::zero() {
            return Ok(T::zero());
        }
        let den = qpochhammer_inf_base(b, b, p)? * qpochhammer_inf_base(t * t * s, b, p)?;
        Ok(t.powf(self.nu + lit(0.5)) * num / den)
    }

    /// Value with the leading `(1 + q)` factor.
    pub fn eval_with_factor(&self, t: T) -> Result<T> {
        Ok((T::one() + self.params.q()) * self.eval(t)?)
    }
}

#[derive(Clone, Debug)]
pub struct SoninePair<T> {
    pub f: SonineFunction<T>,
    pub u: SonineImage<T>,
}

/// Default sampling window for the Sonine function: its left tail is super-exponentially small
/// and its right tail decays like `q^{k(ν+1/2)}`.
pub fn sonine_window() -> GridWindow {
    GridWindow::new(-15, 80).expect("valid window")
}

pub fn sonine_pair<T: Scalar>(nu: T, alpha: T, params: &QParams<T>) -> Result<SoninePair<T>> {
    if !(alpha > nu && nu > lit(-0.5)) {
        return Err(QError::InvalidSpec(format!(
            "need α > ν > −1/2, got α = {alpha}, ν = {nu}"
        )));
    }
    Ok(SoninePair {
        f: SonineFunction {
            nu,
            alpha,
            j: HahnExton::new(alpha, params.squared())?,
        },
        u: SonineImage {
            nu,
            alpha,
            params: *params,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingReport<T> {
    pub n: usize,
    pub constraints: usize,
    pub unknowns: usize,
    pub rank: usize,
    /// Smallest of the `min(constraints, unknowns)` singular values, in `L²_q`-normalized coordinates.
    pub sigma_min: T,
    /// Largest `L²_q` norm on `{q^k : k ≥ 1}` of a unit-norm vector in the numerical null space.
    pub witness_norm_positive_part: T,
}

/// Finite section of the vanishing theorem: impose `f(q^{−n}) = 0` and `(Hf)(q^{−n}) = 0`
/// for `n = 0..=N` on functions supported in `window`.
///
/// Point constraints at exponents outside the window hold trivially and are dropped.
pub fn vanishing_demo<T: Scalar>(
    nu: T,
    n: usize,
    window: GridWindow,
    params: &QParams<T>,
) -> Result<VanishingReport<T>> {
    if !window.contains(0) || window.k_max() < 1 {
        return Err(QError::WindowTooSmall(format!(
            "window [{}, {}] must contain k = 0 and some k ≥ 1",
            window.k_min(),
            window.k_max()
        )));
    }
    let q = params.q();
    let ks: Vec<i32> = window.exponents().collect();
    let kernel = Kernel::new(nu, window.k_min() - n as i32, window.k_max(), params)?;
    let scale: Vec<T> = ks
        .iter()
        .map(|&k| T::one() / ((T::one() - q) * q.powi(k)).sqrt())
        .collect();
    let mut rows = Vec::new();
    for m in 0..=n as i32 {
        if window.contains(-m) {
            rows.push(
                ks.iter()
                    .zip(&scale)
                    .map(|(&k, &s)| if k == -m { s } else { T::zero() })
                    .collect(),
            );
        }
        rows.push(
            ks.iter()
                .zip(&scale)
                .map(|(&k, &s)| q.powi(k) * kernel.get(k - m) * s)
                .collect::<Vec<T>>(),
        );
    }
    let a = Matrix::from_rows(&rows)?;
    let d = svd(&a)?;
    let cutoff = lit::<T>(SPECTRAL_CUTOFF);
    let rank = d.s.iter().filter(|&&s| s > cutoff).count();
    let sigma_min = d.s.iter().copied().fold(T::infinity(), T::min);
    let c = ks.len();
    let projected = Matrix::from_fn(c, c, |i, j| {
        if ks[i] < 1 {
            return T::zero();
        }
        let id = if i == j { T::one() } else { T::zero() };
        let r: T = (0..d.s.len())
            .filter(|&r| d.s[r] > cutoff)
            .map(|r| d.v[(i, r)] * d.v[(j, r)])
            .sum();
        id - r
    });
    let witness = singular_values(&projected)?
        .first()
        .copied()
        .unwrap_or(T::zero());
    Ok(VanishingReport {
        n,
        constraints: rows.len(),
        unknowns: c,
        rank,
        sigma_min,
        witness_norm_positive_part: witness,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryReport<T> {
    #[serde(skip)]
    pub recovered: GridFunction<T>,
    pub erased: Vec<i32>,
    pub constraints: usize,
    pub rank: usize,
    pub max_error: T,
}

/// Tolerance, relative to `‖f‖`, for accepting `f` as band-limited before recovery.
pub const PW_TOLERANCE: f64 = 1e-6;

/// Rebuild erased samples of a band-limited `f` from `(Hf)(q^{−n}) = 0`, `n = 1..N`.
pub fn recovery_demo<T: Scalar>(
    f: &GridFunction<T>,
    erased: &[i32],
    nu: T,
    params: &QParams<T>,
) -> Result<RecoveryReport<T>> {
    let mut erased: Vec<i32> = erased.to_vec();
    erased.sort_unstable_by(|a, b| b.cmp(a));
    erased.dedup();
    if let Some(&k) = erased.iter().find(|&&k| k > 0 || !f.window().contains(k)) {
        return Err(QError::InvalidSpec(format!(
            "erased exponent {k} must be non-positive and inside the input window"
        )));
    }
    let n = (2 * erased.len() + 4).max(12);
    let pw = pw_membership(f, nu, n, params)?;
    let norm = f.norm();
    if pw.max_abs > lit::<T>(PW_TOLERANCE) * norm {
        return Err(QError::DomainError(format!(
            "input is not band-limited: max |Hf(q^-n)| = {:e} vs ‖f‖ = {norm:e}",
            pw.max_abs
        )));
    }
    if erased.is_empty() {
        return Ok(RecoveryReport {
            recovered: f.clone(),
            erased,
            constraints: 0,
            rank: 0,
            max_error: T::zero(),
        });
    }
    let q = params.q();
    let kernel = Kernel::new(
        nu,
        f.window().k_min() - n as i32,
        f.window().k_max() - 1,
        params,
    )?;
    let mut received = f.clone();
    for &k in &erased {
        received.set(k, T::zero())?;
    }
    let a = Matrix::from_fn(n, erased.len(), |r, c| {
        let e = erased[c];
        q.powi(e) * kernel.get(e - (r as i32 + 1))
    });
    let b: Vec<T> = (1..=n as i32)
        .map(|m| {
            let s: T = received
                .nonzero()
                .map(|(k, v)| q.powi(k) * kernel.get(k - m) * v)
                .sum();
            -s
        })
        .collect();
    let sol = lstsq(&a, &b, lit(SPECTRAL_CUTOFF))?;
    if sol.rank < erased.len() {
        return Err(QError::IllConditioned(format!(
            "recovery system has rank {} for {} erased samples",
            sol.rank,
            erased.len()
        )));
    }
    let mut recovered = received;
    let mut max_error = T::zero();
    for (&k, &v) in erased.iter().zip(&sol.x) {
        recovered.set(k, v)?;
        max_error = max_error.max((v - f.get(k)).abs());
    }
    Ok(RecoveryReport {
        recovered,
        erased,
        constraints: n,
        rank: sol.rank,
        max_error,
    })
}

/// `‖Hf‖ / ‖f‖` with `Hf` computed on `out_window`.
pub fn parseval_ratio<T: Scalar>(
    f: &GridFunction<T>,
    nu: T,
    out_window: GridWindow,
    params: &QParams<T>,
) -> Result<T> {
    let g = hankel_q(f, nu, out_window, params)?;
    Ok(g.norm() / f.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> QParams<f64> {
        QParams::with_q(0.5).unwrap()
    }

    fn w(a: i32, b: i32) -> GridWindow {
        GridWindow::new(a, b).unwrap()
    }

    #[test]
    fn zero_function_transforms_to_zero() {
        let f = GridFunction::zeros(0.5, w(-3, 5)).unwrap();
        let g = hankel_q(&f, 0.5, w(-5, 5), &params()).unwrap();
        assert!(g.is_zero());
        assert_eq!(
            roundtrip_error(&f, 0.5, w(-10, 25), &params()).unwrap(),
            0.0
        );
    }

    #[test]
    fn spike_is_a_single_kernel_term() {
        let p = params();
        let mut f = GridFunction::zeros(0.5, w(-2, 4)).unwrap();
        f.set(3, 2.5).unwrap();
        let g = hankel_q_with(&f, 0.5, w(-4, 4), &p, Normalization::JacksonMeasure).unwrap();
        let j = HahnExton::new(0.5, p.squared()).unwrap();
        for k in -4..=4 {
            let x: f64 = 0.5f64.powi(k + 3);
            let expected = 0.5 * 0.125 * x.sqrt() * j.eval(x).unwrap() * 2.5;
            assert!(
                (g.get(k) - expected).abs() <= 1e-14 * expected.abs().max(1e-300),
                "{k}"
            );
        }
    }

    #[test]
    fn spike_round_trip() {
        let p = params();
        let f = GridFunction::spike(0.5, w(-3, 8), 2).unwrap();
        assert!(roundtrip_error(&f, 0.5, w(-8, 20), &p).unwrap() < 1e-6);
        assert!(roundtrip_error(&f, 0.5, w(-10, 25), &p).unwrap() < 1e-6);
    }

    #[test]
    fn narrow_work_window_is_refused() {
        let p = params();
        let f = GridFunction::spike(0.5, w(-3, 8), 2).unwrap();
        assert!(matches!(
            roundtrip_error(&f, 0.5, w(-3, 9), &p),
            Err(QError::WindowTooSmall(_))
        ));
        assert!(matches!(
            roundtrip_error(&f, 0.5, w(0, 30), &p),
            Err(QError::WindowTooSmall(_))
        ));
    }

    #[test]
    fn sonine_image_vanishes_on_negative_exponents() {
        let pair = sonine_pair(0.5, 1.5, &params()).unwrap();
        assert_eq!(pair.u.eval(2.0).unwrap(), 0.0);
        assert_eq!(pair.u.eval(32.0).unwrap(), 0.0);
        assert!(sonine_pair(1.5, 0.5, &params()).is_err());
    }

    #[test]
    fn sonine_transform_matches_closed_form() {
        let p = params();
        let pair = sonine_pair(0.5, 1.5, &p).unwrap();
        let f = pair.f.sample(sonine_window()).unwrap();
        let g = hankel_q(&f, 0.5, w(-10, 6), &p).unwrap();
        for k in 1..=3 {
            let u = pair.u.eval(0.5f64.powi(k)).unwrap();
            assert!(
                ((g.get(k) - u) / u).abs() < 1e-6,
                "{k}: {} vs {u}",
                g.get(k)
            );
        }
        let pw = pw_membership(&f, 0.5, 8, &p).unwrap();
        assert!(pw.max_abs < 1e-6 * f.norm());
    }

    #[test]
    fn vanishing_overdetermined_and_vacuous() {
        let p = params();
        let r = vanishing_demo(0.5, 0, w(-12, 25), &p).unwrap();
        assert!(r.witness_norm_positive_part > 0.99);
        let r = vanishing_demo(0.5, 30, w(-12, 25), &p).unwrap();
        assert!(r.witness_norm_positive_part < 1e-6);
        assert!(matches!(
            vanishing_demo(0.5, 4, w(1, 10), &p),
            Err(QError::WindowTooSmall(_))
        ));
    }

    #[test]
    fn recovery_of_erased_samples() {
        let p = params();
        let pair = sonine_pair(0.5, 1.5, &p).unwrap();
        let f = pair.f.sample(sonine_window()).unwrap();
        let n = f.norm();
        assert_eq!(recovery_demo(&f, &[], 0.5, &p).unwrap().max_error, 0.0);
        assert!(recovery_demo(&f, &[0], 0.5, &p).unwrap().max_error < 1e-5 * n);
        assert!(recovery_demo(&f, &[0, -1, -2], 0.5, &p).unwrap().max_error < 1e-4 * n);
        assert!(recovery_demo(&f, &[1], 0.5, &p).is_err());
    }
}
