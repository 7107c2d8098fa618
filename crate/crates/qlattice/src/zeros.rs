use serde::Serialize;

use crate::error::{QError, Result};
use crate::qcore::{LatticePoint, QParams};
use crate::scalar::{from_u, lit, Scalar};
use crate::series::{BesselFamily, BesselSpec, SpecialFunction};
use crate::special::{LatticeFunction, RealFunction};

pub const REFINEMENT_TOL: f64 = 1e-12;
const LATTICE_SUBDIVISIONS: usize = 8;

/// Positive zeros in ascending order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroList<T> {
    pub values: Vec<T>,
    /// Lattice decomposition of each zero when it was refined on a lattice.
    pub lattice: Option<LatticeZeros<T>>,
    pub source: String,
    pub refinement_tol: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeZeros<T> {
    pub base: T,
    pub points: Vec<LatticePoint<T>>,
}

impl<T: Scalar> ZeroList<T> {
    /// Explicit multipliers, e.g. `q^{−n/2}`.
    pub fn from_values(values: Vec<T>, source: impl Into<String>) -> Result<Self> {
        if values.iter().any(|v| !(*v > T::zero()) || !v.is_finite())
            || values.windows(2).any(|w| !(w[0] < w[1]))
        {
            return Err(QError::InvalidSpec(
                "zero list must be positive and strictly increasing".into(),
            ));
        }
        Ok(ZeroList {
            values,
            lattice: None,
            source: source.into(),
            refinement_tol: T::zero(),
        })
    }

    /// Exact lattice multipliers `B^{h/2}` for the given half-exponents.
    pub fn from_lattice(
        base: T,
        points: Vec<LatticePoint<T>>,
        source: impl Into<String>,
    ) -> Result<Self> {
        let values: Vec<T> = points.iter().map(|p| p.value(base)).collect();
        let mut z = Self::from_values(values, source)?;
        z.lattice = Some(LatticeZeros { base, points });
        Ok(z)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every zero multiplied by `c`, keeping the lattice form when `c = B^{h/2}`.
    pub fn scaled_by_lattice(&self, c: LatticePoint<T>) -> Self {
        let lattice = self.lattice.as_ref().map(|l| LatticeZeros {
            base: l.base,
            points: l.points.iter().map(|p| p.mul(&c)).collect(),
        });
        let values = match &lattice {
            Some(l) => l.points.iter().map(|p| p.value(l.base)).collect(),
            None => self.values.clone(),
        };
        ZeroList {
            values,
            lattice,
            source: self.source.clone(),
            refinement_tol: self.refinement_tol,
        }
    }

    pub fn truncated(&self, n: usize) -> Self {
        ZeroList {
            values: self.values.iter().take(n).copied().collect(),
            lattice: self.lattice.as_ref().map(|l| LatticeZeros {
                base: l.base,
                points: l.points.iter().take(n).copied().collect(),
            }),
            source: self.source.clone(),
            refinement_tol: self.refinement_tol,
        }
    }
}

/// Scan used to bracket sign changes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScanStrategy<T> {
    Geometric { start: T, ratio: T },
    Linear { start: T, step: T },
}

impl<T: Scalar> ScanStrategy<T> {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            ScanStrategy::Geometric { start, ratio } => start > T::zero() && ratio > T::one(),
            ScanStrategy::Linear { start, step } => start >= T::zero() && step > T::zero(),
        };
        if ok {
            Ok(())
        } else {
            Err(QError::InvalidSpec(format!("invalid scan {self:?}")))
        }
    }

    fn point(&self, i: usize) -> T {
        match *self {
            ScanStrategy::Geometric { start, ratio } => start * ratio.powi(i as i32),
            ScanStrategy::Linear { start, step } => start + step * from_u(i),
        }
    }
}

fn bisect<T: Scalar>(f: &dyn RealFunction<T>, mut a: T, mut fa: T, mut b: T, tol: T) -> Result<T> {
    loop {
        let m = a + (b - a) * lit(0.5);
        if m <= a || m >= b || (b - a) <= tol * m.abs() {
            return Ok(m);
        }
        let fm = f.eval(m)?;
        if fm == T::zero() {
            return Ok(m);
        }
        if (fm < T::zero()) == (fa < T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
}

/// First `count` positive zeros of `f` located by scanning for sign changes and bisecting.
pub fn find_zeros<T: Scalar>(
    f: &dyn RealFunction<T>,
    count: usize,
    scan: ScanStrategy<T>,
    params: &QParams<T>,
    source: impl Into<String>,
) -> Result<ZeroList<T>> {
    scan.validate()?;
    let tol: T = lit(REFINEMENT_TOL);
    let mut zeros = Vec::with_capacity(count);
    let mut prev: Option<(T, T)> = None;
    for i in 0..params.max_terms() {
        if zeros.len() >= count {
            break;
        }
        let x = scan.point(i);
        let fx = f.eval(x)?;
        if fx == T::zero() {
            if x > T::zero() {
                zeros.push(x);
            }
            prev = None;
            continue;
        }
        if let Some((a, fa)) = prev {
            if (fa < T::zero()) != (fx < T::zero()) {
                zeros.push(bisect(f, a, fa, x, tol)?);
            }
        }
        prev = Some((x, fx));
    }
    if zeros.len() < count {
        return Err(QError::ScanExhausted {
            found: zeros.len(),
            requested: count,
            steps: params.max_terms(),
        });
    }
    zeros.truncate(count);
    Ok(ZeroList {
        values: zeros,
        lattice: None,
        source: source.into(),
        refinement_tol: tol,
    })
}

/// Scan points between `B^{h/2}` and `B^{(h−1)/2}`, each anchored at the nearer lattice point.
fn cell_points<T: Scalar>(base: T, h: i32, sub: usize) -> Vec<LatticePoint<T>> {
    let two_s: T = from_u(2 * sub);
    (0..sub)
        .map(|s| {
            if 2 * s <= sub {
                let e = -from_u::<T>(s) / two_s;
                LatticePoint::new(h, base.powf(e) - T::one())
            } else {
                let e = from_u::<T>(sub - s) / two_s;
                LatticePoint::new(h - 1, base.powf(e) - T::one())
            }
        })
        .collect()
}

fn to_anchor<T: Scalar>(p: &LatticePoint<T>, h: i32, base: T) -> T {
    if p.h == h {
        p.delta
    } else {
        let shift = crate::qcore::lattice::half_power(base, p.h - h);
        (T::one() + p.delta) * shift - T::one()
    }
}

fn bisect_lattice<T: Scalar>(
    f: &dyn LatticeFunction<T>,
    a: &LatticePoint<T>,
    fa: T,
    b: &LatticePoint<T>,
) -> Result<LatticePoint<T>> {
    let base = f.base();
    let h = if a.delta.abs() <= b.delta.abs() {
        a.h
    } else {
        b.h
    };
    let mut lo = to_anchor(a, h, base);
    let mut hi = to_anchor(b, h, base);
    let mut flo = fa;
    loop {
        let m = lo + (hi - lo) * lit(0.5);
        if m == lo || m == hi {
            return Ok(LatticePoint::new(h, m));
        }
        let fm = f.eval_lattice(&LatticePoint::new(h, m))?;
        if fm == T::zero() {
            return Ok(LatticePoint::new(h, m));
        }
        if (fm < T::zero()) == (flo < T::zero()) {
            lo = m;
            flo = fm;
        } else {
            hi = m;
        }
    }
}

/// First `count` positive zeros of a lattice function, scanning upward from `B^{start_h/2}`.
///
/// Zeros are returned in lattice form, refined in `δ` to full working precision, so that
/// zeros lying extremely close to lattice points keep their tiny offsets.
pub fn find_lattice_zeros<T: Scalar>(
    f: &dyn LatticeFunction<T>,
    count: usize,
    start_h: i32,
    params: &QParams<T>,
    source: impl Into<String>,
) -> Result<ZeroList<T>> {
    let base = f.base();
    let mut found: Vec<LatticePoint<T>> = Vec::with_capacity(count);
    let mut prev: Option<(LatticePoint<T>, T)> = None;
    let mut steps = 0usize;
    let mut h = start_h;
    'scan: while found.len() < count {
        for p in cell_points(base, h, LATTICE_SUBDIVISIONS) {
            if steps >= params.max_terms() {
                break 'scan;
            }
            steps += 1;
            let fp = f.eval_lattice(&p)?;
            if fp == T::zero() {
                found.push(p);
                prev = None;
            } else {
                if let Some((a, fa)) = prev {
                    if (fa < T::zero()) != (fp < T::zero()) {
                        found.push(bisect_lattice(f, &a, fa, &p)?);
                    }
                }
                prev = Some((p, fp));
            }
            if found.len() >= count {
                break 'scan;
            }
        }
        h -= 1;
    }
    if found.len() < count {
        return Err(QError::ScanExhausted {
            found: found.len(),
            requested: count,
            steps,
        });
    }
    let mut z = ZeroList::from_lattice(base, found, source)?;
    z.refinement_tol = T::epsilon();
    Ok(z)
}

/// `true` iff `a[n] ≤ b[n]` on the common prefix.
pub fn check_interlacing<T: Scalar>(a: &ZeroList<T>, b: &ZeroList<T>) -> bool {
    a.values.iter().zip(&b.values).all(|(x, y)| x <= y)
}

/// Zeros of a supported family with the default scan for that family.
pub fn zeros_of<T: Scalar>(
    spec: &BesselSpec<T>,
    count: usize,
    params: &QParams<T>,
) -> Result<ZeroList<T>> {
    let f = spec.function(params)?;
    let label = format!("{:?}(nu={})", spec.family, spec.nu);
    match (&f, spec.family) {
        (SpecialFunction::Jackson3(j), _) => find_lattice_zeros(j, count, 1, params, label),
        (SpecialFunction::Euler(e), _) => find_lattice_zeros(e, count, 1, params, label),
        (_, BesselFamily::Classical) => {
            let step = T::FRAC_PI_4();
            find_zeros(
                &f,
                count,
                ScanStrategy::Linear {
                    start: step / lit(8.0),
                    step,
                },
                params,
                label,
            )
        }
        _ => find_zeros(
            &f,
            count,
            ScanStrategy::Geometric {
                start: spec.q,
                ratio: T::one() / spec.q.sqrt().sqrt(),
            },
            params,
            label,
        ),
    }
}
