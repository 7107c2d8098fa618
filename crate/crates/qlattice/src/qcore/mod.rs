mod grid;
mod integral;
pub(crate) mod lattice;
mod params;
pub(crate) mod pochhammer;

pub use grid::{GridFunction, GridWindow};
pub use integral::{
    check_qparts, qdiff, qintegral_0a, qintegral_0inf, qintegral_0x_grid, qnorm, Integrand,
};
pub use lattice::LatticePoint;
pub use params::{MeasureSpec, QParams};
pub use pochhammer::{
    euler_identity_residual, euler_series, qpochhammer, qpochhammer_inf, qpochhammer_inf_base,
};
