mod classical;
mod euler;
pub mod gamma;
mod jackson;

pub use classical::bessel_j;
pub use euler::EulerProduct;
pub use gamma::{gamma, ln_gamma};
pub use jackson::{HahnExton, Jackson2, Jackson2Variant};

use crate::error::Result;
use crate::qcore::LatticePoint;
use crate::scalar::Scalar;

/// Real function of one real variable with fallible evaluation.
pub trait RealFunction<T: Scalar>: Send + Sync {
    fn eval(&self, x: T) -> Result<T>;
}

/// Function that can be evaluated exactly on the lattice `B^{h/2}(1 + δ)` of its base.
pub trait LatticeFunction<T: Scalar>: RealFunction<T> {
    fn base(&self) -> T;
    fn eval_lattice(&self, p: &LatticePoint<T>) -> Result<T>;
}

/// Adapter turning a closure into a [`RealFunction`].
pub struct FnFunction<F>(pub F);

impl<T: Scalar, F: Fn(T) -> Result<T> + Send + Sync> RealFunction<T> for FnFunction<F> {
    fn eval(&self, x: T) -> Result<T> {
        (self.0)(x)
    }
}

/// Classical Bessel function `J_ν` as a [`RealFunction`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalBessel<T> {
    pub nu: T,
}

impl<T: Scalar> RealFunction<T> for ClassicalBessel<T> {
    fn eval(&self, x: T) -> Result<T> {
        bessel_j(self.nu, x)
    }
}
