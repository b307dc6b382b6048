use std::time::Instant;

use crate::doob::RelativizedSpace;
use crate::error::{Error, Result};
use crate::rootsys::EpsilonSchedule;
use crate::scalar::{loglog_slope, Real};

use super::data::InitialData;
use super::distance::{difference_field, linf_scaled_distance, lp_scaled};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow<T> {
    pub t: T,
    /// `M̃(o)`; constant in `t` for radial data.
    pub mass: T,
    pub l1: T,
    pub l1_tail_bound: T,
    pub linf_scaled: T,
    /// `(p, t^{(ν+n)/(4p′)} L^p distance)`.
    pub lp: Vec<(T, T)>,
    pub wall_clock_s: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceReport<T> {
    pub rows: Vec<ConvergenceRow<T>>,
}

impl<T: Real> ConvergenceReport<T> {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    fn slope(&self, pick: impl Fn(&ConvergenceRow<T>) -> T) -> Option<T> {
        if self.rows.len() < 2 {
            return None;
        }
        let ts: Vec<T> = self.rows.iter().map(|r| r.t).collect();
        let ys: Vec<T> = self.rows.iter().map(pick).collect();
        if ys.iter().any(|y| !(*y > T::zero())) {
            return None;
        }
        Some(loglog_slope(&ts, &ys))
    }

    /// Least-squares slope of `ln L¹` against `ln t`.
    pub fn l1_slope(&self) -> Option<T> {
        self.slope(|r| r.l1)
    }

    pub fn linf_slope(&self) -> Option<T> {
        self.slope(|r| r.linf_scaled)
    }

    pub fn l1_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].l1 < w[0].l1)
    }

    pub fn linf_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].linf_scaled < w[0].linf_scaled)
    }
}

/// One row per `t`: L¹, scaled L^∞ and scaled L^p distances to `M̃ h̃_t`.
pub fn run_convergence_experiment<T: Real>(
    space: &RelativizedSpace<T>,
    f: &InitialData<T>,
    t_grid: &[T],
    p_list: &[T],
    eps: &EpsilonSchedule<T>,
) -> Result<ConvergenceReport<T>> {
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("t grid must be strictly increasing"));
    }
    for &p in p_list {
        if !(p > T::one()) || !p.is_finite() {
            return Err(Error::invalid(format!("p = {p} must satisfy 1 < p < inf")));
        }
    }
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let clock = Instant::now();
        let field = difference_field(space, f, t)?;
        let linf = linf_scaled_distance(space, f, t, eps)?;
        rows.push(ConvergenceRow {
            t,
            mass: field.mass_at_origin,
            l1: field.l1(),
            l1_tail_bound: field.tail_bound,
            linf_scaled: linf,
            lp: p_list.iter().map(|&p| (p, lp_scaled(space, &field, p))).collect(),
            wall_clock_s: clock.elapsed().as_secs_f64(),
        });
    }
    Ok(ConvergenceReport { rows })
}
