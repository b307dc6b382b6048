use rayon::prelude::*;

use crate::doob::{gaussian_tail_bound, RelativizedSpace};
use crate::error::{Error, Result};
use crate::hkernel::{ModelDim, SpacePoint};
use crate::quad::{pairwise_sum, GaussLegendre};
use crate::rootsys::{EpsilonSchedule, RegionRadii};
use crate::scalar::Real;

use super::data::{InitialData, Symmetry};
use super::solve::{effective_radius, Evolution};

/// `u − M̃ h̃_t` sampled on a `μ̃`-quadrature grid over `|g| ≤ r_max`.
#[derive(Debug, Clone)]
pub struct DifferenceField<T> {
    pub t: T,
    pub r_max: T,
    /// Bound on the mass of `u` and `M̃ h̃_t` beyond `r_max` (for `f ≥ 0`).
    pub tail_bound: T,
    /// `M̃(o)`.
    pub mass_at_origin: T,
    weights: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> DifferenceField<T> {
    /// `∫ |u − M̃ h̃_t| dμ̃`.
    pub fn l1(&self) -> T {
        pairwise_sum(
            &self
                .weights
                .iter()
                .zip(&self.values)
                .map(|(w, v)| *w * v.abs())
                .collect::<Vec<_>>(),
        )
    }

    /// `(∫ |u − M̃ h̃_t|^p dμ̃)^{1/p}`.
    pub fn lp(&self, p: T) -> T {
        let s = pairwise_sum(
            &self
                .weights
                .iter()
                .zip(&self.values)
                .map(|(w, v)| *w * v.abs().powf(p))
                .collect::<Vec<_>>(),
        );
        s.powf(T::one() / p)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn radial_breaks<T: Real>(top: T, core: T, fine: T, coarse: T) -> Vec<T> {
    let mut breaks = vec![T::zero()];
    let mut x = T::zero();
    let core = core.min(top);
    while x < core {
        x = (x + fine).min(core);
        breaks.push(x);
    }
    while x < top {
        x = (x + coarse).min(top);
        breaks.push(x);
    }
    breaks
}

/// Samples the difference on `r ≤ 6√t + ξ` (and the polar angle for axial
/// data in the `μ̃` product rule).
pub fn difference_field<T: Real>(
    space: &RelativizedSpace<T>,
    f: &InitialData<T>,
    t: T,
) -> Result<DifferenceField<T>> {
    if !(t > T::zero()) {
        return Err(Error::NonPositive("t"));
    }
    let xi = effective_radius(space, f)?;
    let st = t.sqrt();
    let r_max = T::lit(6.0) * st + xi;
    let ev = Evolution::new(space, f, t, r_max)?;
    let m = (space.model().quadrature().node_count / 2).max(8);
    let gl = GaussLegendre::<T>::new(m);
    let fine = T::lit(0.5).min(st / T::lit(2.0));
    let coarse = fine.max(st / T::lit(2.0));
    let r_pts = gl.piecewise_points(&radial_breaks(r_max, T::lit(2.0) * xi, fine, coarse));
    let dim = space.dim();
    let mut cells: Vec<(SpacePoint<T>, T)> = Vec::new();
    match f.symmetry() {
        Symmetry::Radial => {
            for &(r, w) in &r_pts {
                cells.push((SpacePoint::on_pole(r), w * space.weight(r)));
            }
        }
        Symmetry::Axial => {
            let th = gl.composite_points(T::zero(), T::PI(), 1);
            for &(r, w) in &r_pts {
                let wr = w * space.weight(r);
                for &(theta, wt) in &th {
                    let ang = match dim {
                        ModelDim::H3 => wt * theta.sin() / T::lit(2.0),
                        ModelDim::H2 => wt / T::PI(),
                    };
                    cells.push((SpacePoint::polar(r, theta), wr * ang));
                }
            }
        }
        Symmetry::General => {
            return Err(Error::Unsupported(
                "distances for non-axial data are not implemented".into(),
            ))
        }
    }
    let values: Vec<(T, T)> = cells
        .par_iter()
        .map(|(g, _)| {
            let (_, m, d) = ev.difference(g);
            (m, d)
        })
        .collect();
    let mass_sup = values.iter().fold(T::zero(), |a, v| a.max(v.0.abs()));
    let scale = match dim {
        ModelDim::H3 => T::one(),
        ModelDim::H2 => space.model().kernel_envelope_constants().upper,
    };
    // for f ≥ 0 both ‖u‖₁ and the mass are at most sup M̃
    let tail_bound = T::lit(2.0) * mass_sup * scale * gaussian_tail_bound(r_max - xi, t);
    Ok(DifferenceField {
        t,
        r_max,
        tail_bound,
        mass_at_origin: ev.mass(&SpacePoint::origin()),
        weights: cells.iter().map(|c| c.1).collect(),
        values: values.iter().map(|v| v.1).collect(),
    })
}

/// `‖u(t,·) − M̃ h̃_t‖_{L¹(μ̃)}`.
pub fn l1_distance<T: Real>(space: &RelativizedSpace<T>, f: &InitialData<T>, t: T) -> Result<T> {
    Ok(difference_field(space, f, t)?.l1())
}

/// `(ν + n)/4`.
pub fn sup_exponent<T: Real>(space: &RelativizedSpace<T>) -> T {
    let d = space.model().datum().dimensions();
    T::from_u32(d.nu + d.n).unwrap() / T::lit(4.0)
}

/// `t^{(ν+n)/(4p′)} ‖u − M̃ h̃_t‖_{L^p(μ̃)}`, `1 < p < ∞`.
pub fn lp_scaled_distance<T: Real>(
    space: &RelativizedSpace<T>,
    f: &InitialData<T>,
    t: T,
    p: T,
) -> Result<T> {
    check_p(p)?;
    let field = difference_field(space, f, t)?;
    Ok(lp_scaled(space, &field, p))
}

fn check_p<T: Real>(p: T) -> Result<()> {
    if !(p > T::one()) || !p.is_finite() {
        return Err(Error::invalid(format!("p = {p} must satisfy 1 < p < inf")));
    }
    Ok(())
}

pub(crate) fn lp_scaled<T: Real>(space: &RelativizedSpace<T>, field: &DifferenceField<T>, p: T) -> T {
    let conj = p / (p - T::one());
    field.t.powf(sup_exponent(space) / conj) * field.lp(p)
}

/// Evaluation grid for sup-norms: logarithmic in `r` up to `1.5√t/ε`,
/// plus a linear window of width `4√t` at the kernel mode.
fn sup_grid<T: Real>(t: T, eps: &EpsilonSchedule<T>, mode: T) -> Result<Vec<T>> {
    let st = t.sqrt();
    let top = T::lit(1.5) * st / eps.eval(t).min(T::one());
    let lo = T::lit(1e-3).min(top / T::lit(10.0));
    let n = 160;
    let ratio = (top / lo).ln() / T::from_usize_lossy(n - 1);
    let mut rs = vec![T::zero()];
    rs.extend((0..n).map(|i| lo * (ratio * T::from_usize_lossy(i)).exp()));
    let a = (mode - T::lit(2.0) * st).max(T::zero());
    rs.extend((0..=160).map(|i| a + T::lit(4.0) * st * T::from_usize_lossy(i) / T::lit(160.0)));
    rs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    rs.dedup();
    Ok(rs)
}

/// `t^{(ν+n)/4} max |u − M̃ h̃_t|` over the sup grid.
pub fn linf_scaled_distance<T: Real>(
    space: &RelativizedSpace<T>,
    f: &InitialData<T>,
    t: T,
    eps: &EpsilonSchedule<T>,
) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::NonPositive("t"));
    }
    let (mode, _) = space.sup_norm(t)?;
    let rs = sup_grid(t, eps, mode)?;
    let g_max = rs.last().copied().unwrap_or(T::zero());
    let ev = Evolution::new(space, f, t, g_max)?;
    let points: Vec<SpacePoint<T>> = match f.symmetry() {
        Symmetry::Radial => rs.iter().map(|&r| SpacePoint::on_pole(r)).collect(),
        Symmetry::Axial => {
            let k = 16;
            rs.iter()
                .flat_map(|&r| {
                    (0..=k).map(move |j| {
                        SpacePoint::polar(r, T::PI() * T::from_usize_lossy(j) / T::from_usize_lossy(k))
                    })
                })
                .collect()
        }
        Symmetry::General => {
            return Err(Error::Unsupported(
                "distances for non-axial data are not implemented".into(),
            ))
        }
    };
    let sup = points
        .par_iter()
        .map(|g| ev.difference(g).2.abs())
        .reduce(|| T::zero(), T::max);
    Ok(t.powf(sup_exponent(space)) * sup)
}

/// Mass of the loop law outside the annulus `[ε√t, √t/ε]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Concentration<T> {
    pub value: T,
    /// The annulus is empty (`ε ≥ 1`); `value` is then 1.
    pub degenerate: bool,
    pub radii: RegionRadii<T>,
}

/// `∫_{r ∉ [ε√t, √t/ε]} h̃_t(o, r) w(r) dr`.
pub fn concentration_outside_omega<T: Real>(
    space: &RelativizedSpace<T>,
    t: T,
    eps: &EpsilonSchedule<T>,
) -> Result<Concentration<T>> {
    let radii = eps.radii(t)?;
    if radii.is_degenerate() {
        return Ok(Concentration {
            value: T::one(),
            degenerate: true,
            radii,
        });
    }
    let gl = GaussLegendre::<T>::new(space.model().quadrature().node_count);
    let width = (t.sqrt() / T::lit(4.0)).max(T::lit(0.5)).min(T::lit(5.0));
    let piece = |a: T, b: T| -> Result<T> {
        if !(b > a) {
            return Ok(T::zero());
        }
        let panels = ((b - a) / width).ceil().to_usize().unwrap_or(1).max(1);
        let terms: Result<Vec<T>> = gl
            .composite_points(a, b, panels)
            .par_iter()
            .map(|&(r, w)| Ok(w * space.relativized_kernel_origin(t, r)? * space.weight(r)))
            .collect();
        Ok(pairwise_sum(&terms?))
    };
    let top = space.default_r_max(t).max(radii.outer);
    let value = piece(T::zero(), radii.inner)? + piece(radii.outer, top)?;
    Ok(Concentration {
        value,
        degenerate: false,
        radii,
    })
}

/// `t^{(ν+n)/4} sup_{r > √t/ε} h̃_t(o, r)`; the bound is `√t` when the
/// schedule is degenerate.
pub fn linf_outside_r<T: Real>(space: &RelativizedSpace<T>, t: T, eps: &EpsilonSchedule<T>) -> Result<T> {
    let radii = eps.radii(t)?;
    let start = if radii.is_degenerate() { t.sqrt() } else { radii.outer };
    // h̃_t(o,·) decreases past its mode, so a short window past the
    // boundary suffices and stays where the spectral kernel is accurate
    let span = T::lit(2.0) * t.sqrt();
    let mut sup = space.relativized_kernel_origin(t, start)?;
    for i in 1..=100 {
        let r = start + span * T::from_usize_lossy(i) / T::lit(100.0);
        sup = sup.max(space.relativized_kernel_origin(t, r)?);
    }
    Ok(t.powf(sup_exponent(space)) * sup)
}
