use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{QError, Result};
use crate::scalar::Scalar;

/// Inclusive range of grid exponents `k_min..=k_max` for points `q^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GridWindow {
    k_min: i32,
    k_max: i32,
}

impl GridWindow {
    pub fn new(k_min: i32, k_max: i32) -> Result<Self> {
        if k_min > k_max {
            return Err(QError::InvalidSpec(format!(
                "empty window: k_min = {k_min} > k_max = {k_max}"
            )));
        }
        Ok(GridWindow { k_min, k_max })
    }

    pub fn k_min(&self) -> i32 {
        self.k_min
    }

    pub fn k_max(&self) -> i32 {
        self.k_max
    }

    pub fn len(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, k: i32) -> bool {
        self.k_min <= k && k <= self.k_max
    }

    pub fn contains_window(&self, other: &GridWindow) -> bool {
        self.k_min <= other.k_min && other.k_max <= self.k_max
    }

    pub fn exponents(&self) -> impl DoubleEndedIterator<Item = i32> {
        self.k_min..=self.k_max
    }

    pub fn union(&self, other: &GridWindow) -> GridWindow {
        GridWindow {
            k_min: self.k_min.min(other.k_min),
            k_max: self.k_max.max(other.k_max),
        }
    }
}

/// Function sampled on the geometric grid `q^k`, zero outside its window.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    q: T,
    window: GridWindow,
    samples: BTreeMap<i32, T>,
}

impl<T: Scalar> GridFunction<T> {
    pub fn zeros(q: T, window: GridWindow) -> Result<Self> {
        if !(q > T::zero() && q < T::one()) {
            return Err(QError::InvalidParams(format!("q = {q} is outside (0, 1)")));
        }
        Ok(GridFunction {
            q,
            window,
            samples: BTreeMap::new(),
        })
    }

    pub fn from_fn(q: T, window: GridWindow, mut f: impl FnMut(i32, T) -> T) -> Result<Self> {
        let mut g = Self::zeros(q, window)?;
        for k in window.exponents() {
            let x = g.point(k);
            g.set(k, f(k, x))?;
        }
        Ok(g)
    }

    pub fn try_from_fn(
        q: T,
        window: GridWindow,
        mut f: impl FnMut(i32, T) -> Result<T>,
    ) -> Result<Self> {
        let mut g = Self::zeros(q, window)?;
        for k in window.exponents() {
            let x = g.point(k);
            g.set(k, f(k, x)?)?;
        }
        Ok(g)
    }

    /// Unit spike at exponent `k`.
    pub fn spike(q: T, window: GridWindow, k: i32) -> Result<Self> {
        let mut g = Self::zeros(q, window)?;
        g.set(k, T::one())?;
        Ok(g)
    }

    pub fn set(&mut self, k: i32, value: T) -> Result<()> {
        if !self.window.contains(k) {
            return Err(QError::DomainError(format!(
                "exponent {k} outside window [{}, {}]",
                self.window.k_min, self.window.k_max
            )));
        }
        if !value.is_finite() {
            return Err(QError::InvalidSpec(format!("non-finite sample at k = {k}")));
        }
        if value == T::zero() {
            self.samples.remove(&k);
        } else {
            self.samples.insert(k, value);
        }
        Ok(())
    }

    pub fn get(&self, k: i32) -> T {
        self.samples.get(&k).copied().unwrap_or_else(T::zero)
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn window(&self) -> GridWindow {
        self.window
    }

    pub fn point(&self, k: i32) -> T {
        self.q.powi(k)
    }

    /// Nonzero samples in increasing `k`.
    pub fn nonzero(&self) -> impl Iterator<Item = (i32, T)> + '_ {
        self.samples.iter().map(|(&k, &v)| (k, v))
    }

    /// All samples in the window in increasing `k`, zeros included.
    pub fn samples(&self) -> impl Iterator<Item = (i32, T)> + '_ {
        self.window.exponents().map(move |k| (k, self.get(k)))
    }

    pub fn is_zero(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn max_abs(&self) -> T {
        self.samples.values().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Norm in the Jackson space `L²_q(0, ∞)`.
    pub fn norm(&self) -> T {
        let s: T = self
            .samples
            .iter()
            .map(|(&k, &v)| v * v * self.q.powi(k))
            .sum();
        ((T::one() - self.q) * s).sqrt()
    }

    /// Inner product in `L²_q(0, ∞)`; both functions must share `q`.
    pub fn inner(&self, other: &GridFunction<T>) -> T {
        let s: T = self
            .samples
            .iter()
            .map(|(&k, &v)| v * other.get(k) * self.q.powi(k))
            .sum();
        (T::one() - self.q) * s
    }

    pub fn scaled(&self, c: T) -> Self {
        let mut g = GridFunction {
            q: self.q,
            window: self.window,
            samples: BTreeMap::new(),
        };
        for (&k, &v) in &self.samples {
            let w = v * c;
            if w != T::zero() {
                g.samples.insert(k, w);
            }
        }
        g
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == T::zero() {
            return Err(QError::DomainError(
                "cannot normalize the zero function".into(),
            ));
        }
        Ok(self.scaled(T::one() / n))
    }

    /// Copy onto a different window, dropping samples that fall outside it.
    pub fn restricted(&self, window: GridWindow) -> Self {
        GridFunction {
            q: self.q,
            window,
            samples: self
                .samples
                .range(window.k_min..=window.k_max)
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }
}
