#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical toolkit for q-Bessel functions on geometric grids.

pub mod compensated;
pub mod completeness;
pub mod error;
pub mod io;
pub mod linalg;
pub mod qcore;
pub mod qhankel;
pub mod quadrature;
mod scalar;
mod scaled;
pub mod series;
pub mod special;
pub mod uncertainty;
pub mod zeros;

pub use error::{QError, Result};
pub use scalar::Scalar;

pub type QParams64 = qcore::QParams<f64>;
pub type QParams32 = qcore::QParams<f32>;
pub type GridFunction64 = qcore::GridFunction<f64>;
pub type GridFunction32 = qcore::GridFunction<f32>;
pub type ZeroList64 = zeros::ZeroList<f64>;
pub type FunctionSystem64 = completeness::FunctionSystem<f64>;
pub type BesselSpec64 = series::BesselSpec<f64>;
pub type ConcentrationReport64 = uncertainty::ConcentrationReport<f64>;
