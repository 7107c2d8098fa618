use crate::error::Result;
use crate::qcore::qpochhammer_inf;
use crate::qcore::{LatticePoint, QParams};
use crate::scalar::Scalar;
use crate::special::{LatticeFunction, RealFunction};

/// `x ↦ (q^c x²; q)_∞`, an even entire function of order zero with zeros `± q^{−(c+n)/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerProduct<T> {
    params: QParams<T>,
    shift: i32,
}

impl<T: Scalar> EulerProduct<T> {
    pub fn new(params: QParams<T>, shift: i32) -> Self {
        EulerProduct { params, shift }
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }
}

impl<T: Scalar> RealFunction<T> for EulerProduct<T> {
    fn eval(&self, x: T) -> Result<T> {
        let q = self.params.q();
        qpochhammer_inf(q.powi(self.shift) * x * x, &self.params)
    }
}

impl<T: Scalar> LatticeFunction<T> for EulerProduct<T> {
    fn base(&self) -> T {
        self.params.q()
    }

    fn eval_lattice(&self, p: &LatticePoint<T>) -> Result<T> {
        p.shifted_product(
            self.params.q(),
            self.shift,
            self.params.tol(),
            self.params.max_terms(),
        )
    }
}
