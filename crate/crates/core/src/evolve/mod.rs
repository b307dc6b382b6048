//! The relativized heat semigroup `u(t,·) = ∫ h̃_t(·,y) f(y) dμ̃(y)` acting on
//! initial data, the mass function `M̃`, and the long-time distances between
//! `u(t,·)` and `M̃ h̃_t`.
//!
//! Radial data go through a one-dimensional rule after averaging the kernel
//! over rotations; axially symmetric data use a tensor Gauss–Legendre rule
//! centered on the data.

mod data;
mod distance;
mod report;
mod solve;

pub use data::{DataKind, InitialData, Symmetry};
pub use distance::{
    concentration_outside_omega, difference_field, l1_distance, linf_outside_r,
    linf_scaled_distance, lp_scaled_distance, sup_exponent, Concentration, DifferenceField,
};
pub use report::{run_convergence_experiment, ConvergenceReport, ConvergenceRow};
pub use solve::{
    admissibility_check, effective_radius, evolve, harnack_constant, mass_constant_radial,
    mass_function, mass_function_many, normalize_unit_mass, total_mass, Admissibility, Evolution,
};

#[cfg(test)]
mod tests;
