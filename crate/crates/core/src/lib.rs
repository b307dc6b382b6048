//! Numerical laboratory for the infinite Brownian loop on rank-one
//! hyperbolic spaces: heat kernels, the ground-state Doob transform, long-time
//! convergence of the relativized heat semigroup, and Monte Carlo of the loop.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix `f64`.

// `!(x > 0)` deliberately rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod doob;
pub mod error;
pub mod evolve;
pub mod hkernel;
pub mod loopmc;
pub mod quad;
pub mod rootsys;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type RootDatum64 = rootsys::RootDatum<f64>;
pub type HyperbolicModel64 = hkernel::HyperbolicModel<f64>;
pub type SpacePoint64 = hkernel::SpacePoint<f64>;
pub type RelativizedSpace64 = doob::RelativizedSpace<f64>;
pub type InitialData64 = evolve::InitialData<f64>;
pub type MCConfig64 = loopmc::MCConfig<f64>;
pub type EmpiricalSample64 = loopmc::EmpiricalSample<f64>;
