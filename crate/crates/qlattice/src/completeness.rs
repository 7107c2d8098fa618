use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::linalg::{lstsq, Matrix};
use crate::qcore::{GridFunction, LatticePoint, MeasureSpec, QParams};
use crate::quadrature::gauss_legendre_unit;
use crate::scalar::{from_u, lit, Scalar};
use crate::series::{BesselFamily, BesselSpec, SpecialFunction};
use crate::special::{
    ClassicalBessel, EulerProduct, HahnExton, Jackson2, Jackson2Variant, RealFunction,
};
use crate::zeros::{find_lattice_zeros, zeros_of, ZeroList};

pub const SPECTRAL_CUTOFF: f64 = 1e-10;
const MAX_QUADRATURE_ORDER: usize = 4096;

/// Weight multiplying every system element.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Weight<T> {
    One,
    /// `x^p`.
    Power {
        p: T,
    },
}

impl<T: Scalar> Weight<T> {
    fn eval(&self, x: T) -> T {
        match *self {
            Weight::One => T::one(),
            Weight::Power { p } => x.powf(p),
        }
    }

    fn exponent(&self) -> T {
        match *self {
            Weight::One => T::zero(),
            Weight::Power { p } => p,
        }
    }
}

/// Elements `x ↦ w(x) f(c λ_n x)` with generator `f`, argument scale `c` and multipliers `λ_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSystem<T> {
    pub generator: SpecialFunction<T>,
    pub arg_scale: T,
    pub multipliers: ZeroList<T>,
    pub weight: Weight<T>,
    pub measure: MeasureSpec<T>,
    pub label: String,
}

/// Systems of the worked examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Example {
    Ex1,
    Ex2a,
    Ex2b,
    Ex3a,
    Ex3b,
    Ex4,
}

impl std::str::FromStr for Example {
    type Err = QError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex1" => Ok(Example::Ex1),
            "ex2a" => Ok(Example::Ex2a),
            "ex2b" => Ok(Example::Ex2b),
            "ex3a" => Ok(Example::Ex3a),
            "ex3b" => Ok(Example::Ex3b),
            "ex4" => Ok(Example::Ex4),
            _ => Err(QError::InvalidSpec(format!("unknown example '{s}'"))),
        }
    }
}

impl<T: Scalar> FunctionSystem<T> {
    pub fn with_weight(mut self, weight: Weight<T>) -> Self {
        self.weight = weight;
        self
    }

    pub fn len(&self) -> usize {
        self.multipliers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multipliers.is_empty()
    }

    fn validate(&self) -> Result<()> {
        self.measure.validate()?;
        if matches!(self.measure, MeasureSpec::QHalfLine) {
            return Err(QError::InvalidSpec(
                "function systems live on (0, a) or (0, 1)".into(),
            ));
        }
        if !(lit::<T>(2.0) * self.weight.exponent() + T::one() > T::zero()) {
            return Err(QError::InvalidSpec(
                "weight is not square integrable".into(),
            ));
        }
        Ok(())
    }

    /// `w(x) f(c λ_n x)`, using exact lattice arithmetic when the node is `q^i` on the generator's lattice.
    fn element(&self, n: usize, x: T, node: Option<LatticePoint<T>>) -> Result<T> {
        let w = self.weight.eval(x);
        if self.arg_scale == T::one() {
            if let (Some(lf), Some(lat), Some(node)) =
                (self.generator.as_lattice(), &self.multipliers.lattice, node)
            {
                if lat.base == lf.base() {
                    return Ok(w * lf.eval_lattice(&lat.points[n].mul(&node))?);
                }
            }
        }
        Ok(w * self
            .generator
            .eval(self.arg_scale * self.multipliers.values[n] * x)?)
    }
}

struct Discretization<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
    lattice: Vec<Option<LatticePoint<T>>>,
}

fn q_nodes<T: Scalar>(q: T, a: T, base: Option<T>, params: &QParams<T>) -> Discretization<T> {
    let m =
        ((params.tol().ln() / q.ln()).ceil().to_usize().unwrap_or(64) + 28).min(params.max_terms());
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    let mut lattice = Vec::with_capacity(m);
    let step = match base {
        Some(b) if a == T::one() && b == q => Some(2),
        Some(b) if a == T::one() && b == q * q => Some(1),
        _ => None,
    };
    for i in 0..m {
        let x = a * q.powi(i as i32);
        nodes.push(x);
        weights.push((T::one() - q) * x);
        lattice.push(step.map(|s| LatticePoint::exact(s * i as i32)));
    }
    Discretization {
        nodes,
        weights,
        lattice,
    }
}

fn gl_nodes<T: Scalar>(order: usize) -> Discretization<T> {
    let (nodes, weights) = gauss_legendre_unit::<T>(order);
    let lattice = vec![None; nodes.len()];
    Discretization {
        nodes,
        weights,
        lattice,
    }
}

fn sample_matrix<T: Scalar>(
    s: &FunctionSystem<T>,
    n: usize,
    d: &Discretization<T>,
) -> Result<Matrix<T>> {
    let mut a = Matrix::zeros(d.nodes.len(), n);
    for (i, (&x, &w)) in d.nodes.iter().zip(&d.weights).enumerate() {
        let sw = w.sqrt();
        for j in 0..n {
            a[(i, j)] = sw * s.element(j, x, d.lattice[i])?;
        }
    }
    Ok(a)
}

fn gram_from_samples<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    let n = a.cols();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: T = (0..a.rows()).map(|r| a[(r, i)] * a[(r, j)]).sum();
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

fn discretize<T: Scalar>(
    s: &FunctionSystem<T>,
    n: usize,
    params: &QParams<T>,
) -> Result<(Discretization<T>, Matrix<T>)> {
    s.validate()?;
    if n == 0 || n > s.len() {
        return Err(QError::InvalidSpec(format!(
            "N = {n} must be between 1 and the {} available multipliers",
            s.len()
        )));
    }
    match s.measure {
        MeasureSpec::QInterval { a } => {
            let base = s.generator.as_lattice().map(|l| l.base());
            let d = q_nodes(params.q(), a, base, params);
            let m = sample_matrix(s, n, &d)?;
            Ok((d, m))
        }
        MeasureSpec::Lebesgue { quadrature_order } => {
            let tol = params.tol().max(lit(1e-13));
            let mut order = quadrature_order;
            let mut d = gl_nodes(order);
            let mut m = sample_matrix(s, n, &d)?;
            let mut g = gram_from_samples(&m);
            while order * 2 <= MAX_QUADRATURE_ORDER {
                let d2 = gl_nodes(order * 2);
                let m2 = sample_matrix(s, n, &d2)?;
                let g2 = gram_from_samples(&m2);
                let diff = (0..n * n)
                    .map(|k| (g.as_slice()[k] - g2.as_slice()[k]).abs())
                    .fold(T::zero(), T::max);
                order *= 2;
                d = d2;
                m = m2;
                if diff <= tol * g2.max_abs() {
                    return Ok((d, m));
                }
                g = g2;
            }
            Err(QError::non_convergence(
                order,
                "Gauss-Legendre refinement of the Gram matrix",
            ))
        }
        MeasureSpec::QHalfLine => unreachable!("rejected by validate"),
    }
}

/// `G[n][m] = ∫ w f(λ_n x) · w f(λ_m x) dμ` for the first `n` elements.
pub fn gram_matrix<T: Scalar>(
    s: &FunctionSystem<T>,
    n: usize,
    params: &QParams<T>,
) -> Result<Matrix<T>> {
    let (_, a) = discretize(s, n, params)?;
    Ok(gram_from_samples(&a))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LsResidual<T> {
    pub residual: T,
    pub rank: usize,
    pub ill_conditioned: bool,
}

/// Distance in `L²(μ)` from `target` to the span of the first `n` elements.
///
/// Solved through the SVD of the weighted sample matrix, dropping singular values below
/// `1e−10 σ_max`; `ill_conditioned` reports whether the cutoff removed anything.
pub fn ls_residual<T: Scalar>(
    target: &dyn Fn(T) -> T,
    s: &FunctionSystem<T>,
    n: usize,
    params: &QParams<T>,
) -> Result<LsResidual<T>> {
    let (d, a) = discretize(s, n, params)?;
    let b: Vec<T> = d
        .nodes
        .iter()
        .zip(&d.weights)
        .map(|(&x, &w)| w.sqrt() * target(x))
        .collect();
    let sol = lstsq(&a, &b, lit(SPECTRAL_CUTOFF))?;
    let fit = a.mul_vec(&sol.x);
    let r: T = fit.iter().zip(&b).map(|(&f, &t)| (f - t) * (f - t)).sum();
    Ok(LsResidual {
        residual: r.sqrt(),
        rank: sol.rank,
        ill_conditioned: sol.truncated(),
    })
}

/// System of one of the worked examples with its natural multipliers and measure.
pub fn build_system<T: Scalar>(
    example: Example,
    nu: T,
    alpha: T,
    count: usize,
    params: &QParams<T>,
) -> Result<FunctionSystem<T>> {
    let q = params.q();
    if !(nu > -T::one()) {
        return Err(QError::InvalidSpec(format!(
            "order ν = {nu} must exceed −1"
        )));
    }
    if matches!(example, Example::Ex2a | Example::Ex3a) && !(alpha > -T::one()) {
        return Err(QError::InvalidSpec(format!("α = {alpha} must exceed −1")));
    }
    if example == Example::Ex4 && !(alpha > T::zero() && alpha < nu) {
        return Err(QError::InvalidSpec(format!(
            "need 0 < α < ν, got α = {alpha}, ν = {nu}"
        )));
    }
    let q2 = params.squared();
    let unit = MeasureSpec::QInterval { a: T::one() };
    let half_steps = |sign: i32, step: i32, base: T| {
        let pts: Vec<LatticePoint<T>> = (0..count as i32)
            .map(|n| LatticePoint::exact(sign * step * n))
            .collect();
        ZeroList::from_lattice(base, pts, "geometric")
    };
    let system = match example {
        Example::Ex1 => FunctionSystem {
            generator: SpecialFunction::Euler(EulerProduct::new(*params, 1)),
            arg_scale: T::one(),
            multipliers: half_steps(-1, 1, q)?,
            weight: Weight::One,
            measure: unit,
            label: format!("ex1(q={q})"),
        },
        Example::Ex2a => {
            let g = HahnExton::new(alpha, q2)?;
            let z = find_lattice_zeros(&g, count, 1, &q2, format!("j3 zeros (alpha={alpha})"))?;
            FunctionSystem {
                generator: SpecialFunction::Jackson3(HahnExton::new(nu, q2)?),
                arg_scale: T::one(),
                multipliers: z.scaled_by_lattice(LatticePoint::exact(1)),
                weight: Weight::One,
                measure: unit,
                label: format!("ex2a(nu={nu}, alpha={alpha}, q={q})"),
            }
        }
        Example::Ex2b => FunctionSystem {
            generator: SpecialFunction::Jackson3(HahnExton::new(nu, q2)?),
            arg_scale: T::one(),
            multipliers: half_steps(-1, 1, q * q)?,
            weight: Weight::One,
            measure: unit,
            label: format!("ex2b(nu={nu}, q={q})"),
        },
        Example::Ex3a | Example::Ex3b => {
            let multipliers = if example == Example::Ex3a {
                let spec = BesselSpec::new(
                    BesselFamily::Jackson2(Jackson2Variant::Quadratic),
                    alpha,
                    q * q,
                )?;
                zeros_of(&spec, count, params)?
            } else {
                let v: Vec<T> = (0..count)
                    .map(|n| q.powf(-from_u::<T>(n) / lit(2.0)))
                    .collect();
                ZeroList::from_values(v, "q^(-n/2)")?
            };
            FunctionSystem {
                generator: SpecialFunction::Jackson2(Jackson2::new(
                    nu,
                    q2,
                    Jackson2Variant::Quadratic,
                )?),
                arg_scale: q,
                multipliers,
                weight: Weight::One,
                measure: unit,
                label: format!("{example:?}(nu={nu}, alpha={alpha}, q={q})").to_lowercase(),
            }
        }
        Example::Ex4 => {
            let spec = BesselSpec::new(BesselFamily::Classical, alpha, q)?;
            FunctionSystem {
                generator: SpecialFunction::Classical(ClassicalBessel { nu }),
                arg_scale: T::one(),
                multipliers: zeros_of(&spec, count, params)?,
                weight: Weight::One,
                measure: MeasureSpec::Lebesgue {
                    quadrature_order: 32,
                },
                label: format!("ex4(nu={nu}, alpha={alpha})"),
            }
        }
    };
    Ok(system)
}

/// `x^{1/2} J_ν^{(3)}(q j_{nν} x; q²)`, orthogonal in `L²_q(0, 1)` for distinct `n`.
pub fn orthogonal_system<T: Scalar>(
    nu: T,
    count: usize,
    params: &QParams<T>,
) -> Result<FunctionSystem<T>> {
    Ok(build_system(Example::Ex2a, nu, nu, count, params)?
        .with_weight(Weight::Power { p: lit(0.5) }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lemma1Report<T> {
    /// `∫_0^1 y(x) x^{−ν} J_ν^{(2)}(λqx; q²) d_qx`.
    pub lhs: T,
    /// `q^ν [Y(1) J_ν^{(2)}(λ; q²) + λ q^{ν+1}/(1−q) ∫_0^1 Y(x) x^{−ν} J_{ν+1}^{(2)}(λqx; q²) d_qx]`, `Y(x) = ∫_0^x y d_qt`.
    pub rhs: T,
    pub residual: T,
    /// Right-hand side in the form `q^{ν+1} λ ∫ x^{−ν−1} J_{ν+1}^{(2)}(qλx; q²) [x ∫_0^x (qλt)^ν y(t) d_qt] d_qx`.
    pub printed_rhs: T,
    pub printed_residual: T,
}

/// Both sides of the integration-by-parts identity for `y` supported on grid points of `(0, 1]`.
pub fn lemma1_identity_residual<T: Scalar>(
    nu: T,
    lambda: T,
    y: &GridFunction<T>,
    params: &QParams<T>,
) -> Result<Lemma1Report<T>> {
    if !(nu > -T::one()) || !(lambda > T::zero()) {
        return Err(QError::InvalidSpec("need ν > −1 and λ > 0".into()));
    }
    if y.window().k_min() < 0 {
        return Err(QError::DomainError("y must be supported in (0, 1]".into()));
    }
    let q = params.q();
    if (y.q() - q).abs() > T::epsilon() * q {
        return Err(QError::InvalidSpec("grid base differs from q".into()));
    }
    let q2 = params.squared();
    let j_nu = Jackson2::new(nu, q2, Jackson2Variant::Quadratic)?;
    let j_nu1 = Jackson2::new(nu + T::one(), q2, Jackson2Variant::Quadratic)?;
    let one_q = T::one() - q;
    let top = y.window().k_max();
    let cum = |i: i32, scale: &dyn Fn(i32) -> T| -> T {
        let s: T = (i..=top).map(|n| q.powi(n) * scale(n) * y.get(n)).sum();
        one_q * s
    };
    let mut lhs = T::zero();
    let mut tail = T::zero();
    let mut printed = T::zero();
    for i in 0..=top {
        let qi = q.powi(i);
        let xnu = qi.powf(-nu);
        let arg = lambda * q * qi;
        let jn1 = j_nu1.eval(arg)?;
        lhs = lhs + qi * y.get(i) * xnu * j_nu.eval(arg)?;
        tail = tail + qi * cum(i, &|_| T::one()) * xnu * jn1;
        let inner = cum(i, &|n| (q * lambda * q.powi(n)).powf(nu));
        printed = printed + qi * qi.powf(-nu - T::one()) * jn1 * qi * inner;
    }
    let lhs = one_q * lhs;
    let y1 = cum(0, &|_| T::one());
    let rhs = q.powf(nu) * (y1 * j_nu.eval(lambda)? + lambda * q.powf(nu + T::one()) * tail);
    let printed_rhs = q.powf(nu + T::one()) * lambda * one_q * printed;
    Ok(Lemma1Report {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        printed_rhs,
        printed_residual: (lhs - printed_rhs).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiffuncReport<T> {
    /// `D_q[x^{−ν} J_ν^{(2)}(λx; q²)]` at `x = q^k`.
    pub derivative: T,
    /// `|derivative + λ x^{−ν} q^{ν+1} J_{ν+1}^{(2)}(λxq; q²) / (1 − q)|`.
    pub residual: T,
    /// Same comparison without the `1/(1 − q)` factor.
    pub printed_residual: T,
}

/// Pointwise check of the q-difference rule for `x^{−ν} J_ν^{(2)}(λx; q²)` at `x = q^k`.
pub fn diffunc_residual<T: Scalar>(
    nu: T,
    lambda: T,
    k: i32,
    params: &QParams<T>,
) -> Result<DiffuncReport<T>> {
    let q = params.q();
    let q2 = params.squared();
    let j_nu = Jackson2::new(nu, q2, Jackson2Variant::Quadratic)?;
    let j_nu1 = Jackson2::new(nu + T::one(), q2, Jackson2Variant::Quadratic)?;
    let x = q.powi(k);
    let phi = |t: T| -> Result<T> { Ok(t.powf(-nu) * j_nu.eval(lambda * t)?) };
    let derivative = crate::qcore::qdiff(phi, x, params)?;
    let rhs = -lambda * x.powf(-nu) * q.powf(nu + T::one()) * j_nu1.eval(lambda * x * q)?;
    Ok(DiffuncReport {
        derivative,
        residual: (derivative - rhs / (T::one() - q)).abs(),
        printed_residual: (derivative - rhs).abs(),
    })
}
