//! Similarity solutions of a one-dimensional two-phase thawing problem in a
//! porous medium with a density jump at the free boundary, a convective or
//! prescribed-temperature condition at `x = 0`, and the bridge between the
//! two.
//!
//! Typical use: read [`PhysicalParams`], [`reduce`] them, solve the front
//! equation with [`solve_xi`] or [`solve_omega`], build a
//! [`ConvectiveSolution`] or [`TemperatureSolution`] and check it with the
//! [`verification`] module.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod equivalence;
pub mod error;
pub mod model;
mod numfmt;
pub mod profiles;
pub mod solver;
pub mod special_functions;
pub mod verification;

pub use error::{Error, Result};
pub use model::{reduce, DimensionlessParams, PhysicalParams, ReduceOptions};
pub use profiles::{ConvectiveSolution, Region, TemperatureSolution};
pub use solver::{
    classify, critical_h0, solve_omega, solve_xi, RegimeReport, RootSet, SolveOptions,
};
pub use verification::{verify_convective, verify_temperature, ResidualReport, VerifyConfig};
