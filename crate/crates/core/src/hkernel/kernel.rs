//! Heat kernels, their global envelope and the ratio gap.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{x_over_sinh, Real};

use super::spherical::{phi_h3, plancherel_shape, PHASE_PER_PANEL};
use super::{HyperbolicModel, KernelPath, ModelDim, SpacePoint};

pub(crate) fn check_time<T: Real>(t: T) -> Result<()> {
    if t > T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive("t"))
    }
}

fn check_radius<T: Real>(r: T) -> Result<()> {
    if r >= T::zero() && r.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("radius {r} must be finite and >= 0")))
    }
}

impl<T: Real> HyperbolicModel<T> {
    /// Spectral cutoff at time `t`. A configured cutoff is checked against
    /// the Gaussian tail bound `e^{−tλ²}(1 + tλ²)`.
    pub fn lambda_max(&self, t: T) -> Result<T> {
        check_time(t)?;
        match self.quad.lambda_max {
            Some(l) => {
                let x = t * l * l;
                let bound = (-x).exp() * (T::one() + x);
                if bound > self.quad.tolerance {
                    return Err(Error::Quadrature {
                        tolerance: self.quad.tolerance.as_f64(),
                        estimate: bound.as_f64(),
                    });
                }
                Ok(l)
            }
            None => {
                let by_tol = (-self.quad.tolerance.ln()).sqrt() + T::lit(2.0);
                Ok(by_tol.max(T::lit(8.0)) / t.sqrt())
            }
        }
    }

    /// `h_t(r)`.
    pub fn heat_kernel(&self, t: T, r: T) -> Result<T> {
        Ok(self.heat_kernel_shifted(t, r)? * (-self.rho_sq * t).exp())
    }

    /// `e^{ρ²t} h_t(r)` along the configured path.
    pub fn heat_kernel_shifted(&self, t: T, r: T) -> Result<T> {
        match self.path {
            KernelPath::ClosedForm => self.heat_kernel_closed_shifted(t, r),
            KernelPath::Spectral => self.heat_kernel_spectral_shifted(t, r),
        }
    }

    /// `(4πt)^{−3/2} (r/sinh r) e^{−r²/4t}`; `H³` only.
    pub fn heat_kernel_closed_shifted(&self, t: T, r: T) -> Result<T> {
        check_time(t)?;
        check_radius(r)?;
        if self.dim != ModelDim::H3 {
            return Err(Error::Unsupported("closed-form kernel exists only on H3".into()));
        }
        Ok(closed_h3_shifted(t, r))
    }

    /// `C ∫₀^{λ_max} P(λ) φ_λ(r) e^{−tλ²} dλ`.
    pub fn heat_kernel_spectral_shifted(&self, t: T, r: T) -> Result<T> {
        check_time(t)?;
        check_radius(r)?;
        let lmax = self.lambda_max(t)?;
        let by_phase = (lmax * r / T::lit(PHASE_PER_PANEL)).ceil().to_usize().unwrap_or(1);
        let by_width = (lmax / T::lit(2.0)).ceil().to_usize().unwrap_or(1);
        let panels = by_phase.max(by_width).max(4);
        let lams = self.gl.composite_points(T::zero(), lmax, panels);
        let sum = match self.dim {
            ModelDim::H3 => lams.iter().fold(T::zero(), |acc, &(l, w)| {
                acc + w * l * l * phi_h3(l, r) * (-t * l * l).exp()
            }),
            ModelDim::H2 => {
                let nodes = self.abel_nodes(r, lmax * r, 1);
                lams.iter().fold(T::zero(), |acc, &(l, w)| {
                    let phi = nodes
                        .iter()
                        .fold(T::zero(), |s, &(u, a)| s + a * (l * u).cos());
                    acc + w * plancherel_shape(self.dim, l) * phi * (-t * l * l).exp()
                })
            }
        };
        Ok(self.normalization * sum)
    }

    /// `t^{−n/2} (1+t+r)^{(m_α+m_2α)/2−1} φ₀(r) e^{−r²/4t}`, the shape of the
    /// global estimate without the `e^{−ρ²t}` factor.
    pub fn envelope_shape_shifted(&self, t: T, r: T) -> T {
        let n = T::from_u32(self.dim.n()).unwrap();
        let k = self.datum.kernel_exponents()[0];
        t.powf(-n / T::lit(2.0))
            * (T::one() + t + r).powf(k)
            * self.phi0_fast(r)
            * (-r * r / (T::lit(4.0) * t)).exp()
    }

    /// Calibrated two-sided global estimate of `h_t(r)`.
    pub fn heat_kernel_envelope(&self, t: T, r: T) -> Result<(T, T)> {
        check_time(t)?;
        check_radius(r)?;
        let s = self.envelope_shape_shifted(t, r) * (-self.rho_sq * t).exp();
        Ok((self.kernel_env.lower * s, self.kernel_env.upper * s))
    }

    /// `h_t(d(g,y))/h_t(|g|) − φ₀(d(g,y))/φ₀(|g|)`.
    pub fn ratio_gap(&self, t: T, g: &SpacePoint<T>, y: &SpacePoint<T>) -> Result<T> {
        check_time(t)?;
        let d = self.distance(g, y);
        let kr = self.heat_kernel_shifted(t, d)? / self.heat_kernel_shifted(t, g.r)?;
        let pr = (self.ln_phi0(d) - self.ln_phi0(g.r)).exp();
        Ok(kr - pr)
    }

    /// `max |ratio_gap|` over `|g| ≤ r_g`, `|y| ≤ xi` on a polar grid
    /// (9 radii for `g`, 4 for `y`, 9 relative angles in `[0, π]`).
    pub fn ratio_gap_sup(&self, t: T, r_g: T, xi: T) -> Result<T> {
        check_time(t)?;
        if !(r_g >= T::zero()) || !(xi > T::zero()) {
            return Err(Error::invalid("ratio gap grid needs r_g >= 0 and xi > 0"));
        }
        let mut sup = T::zero();
        for i in 0..=8 {
            let g = SpacePoint::on_pole(r_g * T::from_usize_lossy(i) / T::lit(8.0));
            for j in 1..=4 {
                for k in 0..=8 {
                    let y = SpacePoint::polar(
                        xi * T::from_usize_lossy(j) / T::lit(4.0),
                        T::PI() * T::from_usize_lossy(k) / T::lit(8.0),
                    );
                    sup = sup.max(self.ratio_gap(t, &g, &y)?.abs());
                }
            }
        }
        Ok(sup)
    }

    /// Shifted kernel at time `t`, ready for many evaluations on `[0, r_max]`.
    /// `H³` uses the closed form; `H²` samples the spectral integral.
    pub fn shifted_kernel(&self, t: T, r_max: T) -> Result<ShiftedKernel<T>> {
        check_time(t)?;
        match (self.dim, self.path) {
            (ModelDim::H3, KernelPath::ClosedForm) => Ok(ShiftedKernel::Closed { t }),
            _ => Ok(ShiftedKernel::Table(self.kernel_profile(t, r_max)?)),
        }
    }

    /// Samples `ln H_t` on a uniform grid over `[0, min(r_max, 8√t)]`.
    /// The spectral integral carries a relative error of order
    /// `ε e^{r²/4t}`, so farther out the profile continues analytically.
    pub fn kernel_profile(&self, t: T, r_max: T) -> Result<KernelProfile<T>> {
        check_time(t)?;
        if !(r_max > T::zero()) {
            return Err(Error::NonPositive("r_max"));
        }
        let step = T::lit(0.05).min(t.sqrt() / T::lit(16.0));
        let top = r_max.min(T::lit(8.0) * t.sqrt());
        let count = (top / step).ceil().to_usize().unwrap_or(1) + 4;
        let vals: Result<Vec<T>> = (0..count)
            .into_par_iter()
            .map(|i| {
                let v = self.heat_kernel_spectral_shifted(t, step * T::from_usize_lossy(i))?;
                Ok(v.max(T::min_positive_value()).ln())
            })
            .collect();
        Ok(KernelProfile {
            t,
            step,
            ln_values: vals?,
        })
    }
}

pub(crate) fn closed_h3_shifted<T: Real>(t: T, r: T) -> T {
    let four_pi_t = T::lit(4.0) * T::PI() * t;
    four_pi_t.powf(T::lit(-1.5)) * x_over_sinh(r) * (-r * r / (T::lit(4.0) * t)).exp()
}

/// Radial profile `r ↦ ln H_t(r)` on a uniform grid, evaluated by
/// four-point Lagrange interpolation.
#[derive(Debug, Clone)]
pub struct KernelProfile<T> {
    t: T,
    step: T,
    ln_values: Vec<T>,
}

impl<T: Real> KernelProfile<T> {
    pub fn t(&self) -> T {
        self.t
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn r_max(&self) -> T {
        self.step * T::from_usize_lossy(self.ln_values.len() - 1)
    }

    pub fn ln_eval(&self, r: T) -> T {
        let n = self.ln_values.len();
        let x = r / self.step;
        let last = T::from_usize_lossy(n - 1);
        if x >= last {
            // Gaussian continuation past the sampled range
            let a = self.ln_values[n - 1];
            let slope = (a - self.ln_values[n - 2]) / self.step;
            let d = r - self.r_max();
            return a + slope * d - d * d / (T::lit(4.0) * self.t);
        }
        let i = x.floor().to_usize().unwrap_or(0);
        let base = i.saturating_sub(1).min(n - 4);
        let mut acc = T::zero();
        for j in 0..4 {
            let xj = T::from_usize_lossy(base + j);
            let mut lj = T::one();
            for k in 0..4 {
                if k != j {
                    let xk = T::from_usize_lossy(base + k);
                    lj = lj * (x - xk) / (xj - xk);
                }
            }
            acc = acc + lj * self.ln_values[base + j];
        }
        acc
    }

    pub fn eval(&self, r: T) -> T {
        self.ln_eval(r).exp()
    }
}

/// The shifted kernel `H_t` at a fixed time.
#[derive(Debug, Clone)]
pub enum ShiftedKernel<T> {
    Closed { t: T },
    Table(KernelProfile<T>),
}

impl<T: Real> ShiftedKernel<T> {
    pub fn t(&self) -> T {
        match self {
            ShiftedKernel::Closed { t } => *t,
            ShiftedKernel::Table(p) => p.t(),
        }
    }

    pub fn eval(&self, r: T) -> T {
        match self {
            ShiftedKernel::Closed { t } => closed_h3_shifted(*t, r),
            ShiftedKernel::Table(p) => p.eval(r),
        }
    }
}
