//! Spherical functions, Plancherel densities and heat kernels on `H²`, `H³`.
//!
//! Heat kernels are mostly handled in the shifted form `H_t = e^{ρ²t} h_t`,
//! which stays representable at large `t` and is what the relativized kernel
//! and the bridge densities consume.

mod geometry;
mod kernel;
mod spherical;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

pub use geometry::{busemann, distance, SpacePoint};
pub(crate) use geometry::{distance_from_parts, exp_at, half_angle_sin_sq, log_at};
pub use kernel::{KernelProfile, ShiftedKernel};

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::rootsys::{DatumFamily, EnvelopeConstants, RootDatum};
use crate::scalar::Real;

/// Which hyperbolic space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelDim {
    H2,
    H3,
}

impl ModelDim {
    pub fn n(self) -> u32 {
        match self {
            ModelDim::H2 => 2,
            ModelDim::H3 => 3,
        }
    }

    pub fn from_n(n: u32) -> Result<Self> {
        match n {
            2 => Ok(ModelDim::H2),
            3 => Ok(ModelDim::H3),
            _ => Err(Error::Unsupported(format!("kernel numerics for H^{n}"))),
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "h2" => Ok(ModelDim::H2),
            "h3" => Ok(ModelDim::H3),
            other => Err(Error::Unsupported(format!(
                "model '{other}' has no kernel numerics (use h2 or h3)"
            ))),
        }
    }

    /// Area of the unit sphere `S^{n−1}`.
    pub fn sphere_area<T: Real>(self) -> T {
        match self {
            ModelDim::H2 => T::TAU(),
            ModelDim::H3 => T::lit(4.0) * T::PI(),
        }
    }
}

impl std::fmt::Display for ModelDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelDim::H2 => "h2",
            ModelDim::H3 => "h3",
        })
    }
}

/// Node counts, truncations and target tolerance for all quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    /// Gauss–Legendre nodes per panel and axis.
    pub node_count: usize,
    /// Spectral cutoff; `None` picks `λ_max` from `t` and the tolerance.
    pub lambda_max: Option<T>,
    /// Spatial cutoff; `None` uses the per-operation default.
    pub r_max: Option<T>,
    pub tolerance: T,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            node_count: 32,
            lambda_max: None,
            r_max: None,
            tolerance: T::lit(1e-10),
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 16 {
            return Err(Error::invalid(format!(
                "node_count {} below 16",
                self.node_count
            )));
        }
        if let Some(l) = self.lambda_max {
            if !(l > T::zero()) {
                return Err(Error::NonPositive("lambda_max"));
            }
        }
        if let Some(r) = self.r_max {
            if !(r > T::zero()) {
                return Err(Error::NonPositive("r_max"));
            }
        }
        if !(self.tolerance > T::zero() && self.tolerance <= T::lit(1e-4)) {
            return Err(Error::invalid(format!(
                "tolerance {} outside (0, 1e-4]",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// How `heat_kernel` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelPath {
    /// `(4πt)^{-3/2} (r/sinh r) e^{-t-r²/4t}`; `H³` only.
    ClosedForm,
    /// Spherical inversion integral.
    Spectral,
}

#[derive(Debug, Clone, Copy)]
struct Calibration {
    normalization: f64,
    phi0_env: (f64, f64),
    kernel_env: (f64, f64),
}

type CalKey = (ModelDim, usize, u64, u64, usize);

fn calibration_cache() -> &'static Mutex<HashMap<CalKey, Calibration>> {
    static CACHE: OnceLock<Mutex<HashMap<CalKey, Calibration>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Curvature −1 model of `H^n`, `n ∈ {2, 3}`.
#[derive(Debug, Clone)]
pub struct HyperbolicModel<T: Real> {
    dim: ModelDim,
    datum: RootDatum<T>,
    rho: T,
    rho_sq: T,
    quad: QuadratureSpec<T>,
    normalization: T,
    phi0_env: EnvelopeConstants<T>,
    kernel_env: EnvelopeConstants<T>,
    path: KernelPath,
    gl: GaussLegendre<T>,
}

impl<T: Real> HyperbolicModel<T> {
    /// Builds and calibrates a model. Calibrations are cached per
    /// `(dim, quadrature, scalar type)` for the lifetime of the process.
    pub fn new(dim: ModelDim, quad: QuadratureSpec<T>) -> Result<Self> {
        quad.validate()?;
        let mut m = Self::uncalibrated(dim, quad)?;
        let key: CalKey = (
            dim,
            quad.node_count,
            quad.tolerance.as_f64().to_bits(),
            quad.lambda_max.map(|l| l.as_f64().to_bits()).unwrap_or(0),
            std::mem::size_of::<T>(),
        );
        let cached = calibration_cache().lock().unwrap().get(&key).copied();
        let cal = match cached {
            Some(c) => c,
            None => {
                let c = m.calibrate()?;
                calibration_cache().lock().unwrap().insert(key, c);
                c
            }
        };
        m.normalization = T::lit(cal.normalization);
        m.phi0_env = EnvelopeConstants {
            lower: T::lit(cal.phi0_env.0),
            upper: T::lit(cal.phi0_env.1),
        };
        m.kernel_env = EnvelopeConstants {
            lower: T::lit(cal.kernel_env.0),
            upper: T::lit(cal.kernel_env.1),
        };
        Ok(m)
    }

    pub fn h2() -> Result<Self> {
        Self::new(ModelDim::H2, QuadratureSpec::default())
    }

    pub fn h3() -> Result<Self> {
        Self::new(ModelDim::H3, QuadratureSpec::default())
    }

    /// Model with normalization 1 and unit envelope constants.
    pub fn uncalibrated(dim: ModelDim, quad: QuadratureSpec<T>) -> Result<Self> {
        quad.validate()?;
        let datum = RootDatum::build(DatumFamily::Hyperbolic(dim.n()))?;
        let rho = datum.rho()[0];
        Ok(Self {
            dim,
            rho,
            rho_sq: rho * rho,
            datum,
            quad,
            normalization: T::one(),
            phi0_env: EnvelopeConstants::unit(),
            kernel_env: EnvelopeConstants::unit(),
            path: match dim {
                ModelDim::H2 => KernelPath::Spectral,
                ModelDim::H3 => KernelPath::ClosedForm,
            },
            gl: GaussLegendre::new(quad.node_count),
        })
    }

    /// Switches the evaluation path of `heat_kernel`.
    pub fn with_path(mut self, path: KernelPath) -> Result<Self> {
        if path == KernelPath::ClosedForm && self.dim != ModelDim::H3 {
            return Err(Error::Unsupported("closed-form kernel exists only on H3".into()));
        }
        self.path = path;
        Ok(self)
    }

    fn calibrate(&self) -> Result<Calibration> {
        let normalization = T::one() / self.mass_integral(T::one(), true)?;
        let phi0_env = self.calibrate_phi0_envelope();
        let mut scaled = self.clone();
        scaled.normalization = normalization;
        let kernel_env = scaled.calibrate_kernel_envelope()?;
        Ok(Calibration {
            normalization: normalization.as_f64(),
            phi0_env: (phi0_env.lower.as_f64(), phi0_env.upper.as_f64()),
            kernel_env: (kernel_env.lower.as_f64(), kernel_env.upper.as_f64()),
        })
    }

    /// `∫ h_t dμ` along the configured kernel path.
    pub fn spatial_mass(&self, t: T) -> Result<T> {
        self.mass_integral(t, false)
    }

    /// The mass of `h_t δ` sits near `r = 2ρt`, where the spectral integral
    /// loses relative accuracy like `e^{ρr}` through cancellation; the
    /// truncation is therefore as tight as the tolerance allows, and large
    /// `t` is out of reach on the spectral path.
    fn mass_integral(&self, t: T, spectral: bool) -> Result<T> {
        if !(t > T::zero()) {
            return Err(Error::NonPositive("t"));
        }
        let margin = T::lit(2.0) * (t * (-self.quad.tolerance.ln())).sqrt() + T::lit(2.0);
        let r_max = T::lit(2.0) * self.rho * t + margin;
        let panels = r_max.ceil().to_usize().unwrap_or(1).max(4);
        let pts = self.gl.composite_points(T::zero(), r_max, panels);
        let area = self.dim.sphere_area::<T>();
        let n1 = T::from_u32(self.dim.n() - 1).unwrap();
        let mut terms = Vec::with_capacity(pts.len());
        for (r, w) in pts {
            let k = if spectral {
                self.heat_kernel_spectral_shifted(t, r)?
            } else {
                self.heat_kernel_shifted(t, r)?
            };
            let log_weight = n1 * crate::scalar::ln_sinh(r) - self.rho_sq * t;
            terms.push(w * k * log_weight.exp() * area);
        }
        Ok(crate::quad::pairwise_sum(&terms))
    }

    fn calibrate_phi0_envelope(&self) -> EnvelopeConstants<T> {
        let ratios = (0..=600).map(|i| {
            let r = T::lit(0.05) * T::from_usize_lossy(i);
            self.phi0_fast(r) / self.phi0_shape(r)
        });
        EnvelopeConstants::from_ratios(ratios, T::lit(1e-9))
    }

    fn calibrate_kernel_envelope(&self) -> Result<EnvelopeConstants<T>> {
        let mut ratios = Vec::new();
        for i in 0..=40 {
            let t = T::lit(100.0).powf(T::from_usize_lossy(i) / T::lit(40.0));
            let top = T::lit(4.0) * t.sqrt();
            for j in 0..=80 {
                let r = top * T::from_usize_lossy(j) / T::lit(80.0);
                let k = self.heat_kernel_shifted(t, r)?;
                ratios.push(k / self.envelope_shape_shifted(t, r));
            }
        }
        Ok(EnvelopeConstants::from_ratios(ratios, T::lit(1e-3)))
    }

    pub fn dim(&self) -> ModelDim {
        self.dim
    }

    pub fn n(&self) -> u32 {
        self.dim.n()
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn rho_sq(&self) -> T {
        self.rho_sq
    }

    pub fn datum(&self) -> &RootDatum<T> {
        &self.datum
    }

    pub fn quadrature(&self) -> &QuadratureSpec<T> {
        &self.quad
    }

    pub fn normalization_constant(&self) -> T {
        self.normalization
    }

    pub fn phi0_envelope_constants(&self) -> EnvelopeConstants<T> {
        self.phi0_env
    }

    pub fn kernel_envelope_constants(&self) -> EnvelopeConstants<T> {
        self.kernel_env
    }

    pub fn path(&self) -> KernelPath {
        self.path
    }

    /// `(1 + r) e^{−ρr}`.
    pub fn phi0_shape(&self, r: T) -> T {
        (T::one() + r) * (-self.rho * r).exp()
    }

    /// `δ(r) = sinh^{n−1} r`.
    pub fn haar_density(&self, r: T) -> T {
        r.sinh().powi(self.dim.n() as i32 - 1)
    }

    pub fn distance(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> T {
        distance(self.dim, p, q)
    }

    /// `⟨ρ, A(p)⟩ = ρ·B(p)` with the Busemann function of the pole.
    pub fn busemann_rho(&self, p: &SpacePoint<T>) -> T {
        self.rho * busemann(self.dim, p)
    }

    /// Rotational average of `φ₀(d(x, k·y))` over `k ∈ K`, minus
    /// `φ₀(|x|)φ₀(|y|)`.
    ///
    /// The average only sees the angle `α` between `k·y` and `x`, so it is a
    /// single integral in `α`, on panels graded toward `α = 0` where the
    /// integrand peaks with width about `e^{−(|x|+|y|)/2}`.
    pub fn phi0_product_check(&self, x: &SpacePoint<T>, y: &SpacePoint<T>) -> Result<T> {
        if y.r == T::zero() || x.r == T::zero() {
            return Ok(T::zero());
        }
        let mut breaks = vec![T::zero()];
        for k in (0..=16).rev() {
            breaks.push(T::PI() / T::from_u32(1 << k).unwrap());
        }
        let mut terms = Vec::new();
        for (a, w) in self.gl.piecewise_points(&breaks) {
            let half = (a / T::lit(2.0)).sin();
            let d = distance_from_parts(x.r, y.r, half * half);
            let jac = match self.dim {
                ModelDim::H2 => T::one() / T::PI(),
                ModelDim::H3 => a.sin() / T::lit(2.0),
            };
            terms.push(w * jac * self.phi0(d)?);
        }
        let avg = crate::quad::pairwise_sum(&terms);
        Ok(avg - self.phi0(x.r)? * self.phi0(y.r)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_spec_validation() {
        let ok = QuadratureSpec::<f64>::default();
        assert!(ok.validate().is_ok());
        let mut bad = ok;
        bad.node_count = 8;
        assert!(bad.validate().is_err());
        let mut bad = ok;
        bad.tolerance = 1e-3;
        assert!(bad.validate().is_err());
        let mut bad = ok;
        bad.lambda_max = Some(0.0);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn model_constants() {
        let m = HyperbolicModel::<f64>::h3().unwrap();
        assert_eq!(m.n(), 3);
        assert_eq!(m.rho(), 1.0);
        assert_eq!(m.rho_sq(), m.rho() * m.rho());
        assert!(m.normalization_constant() > 0.0);
        let m2 = HyperbolicModel::<f64>::h2().unwrap();
        assert_eq!(m2.rho(), 0.5);
        assert_eq!(m2.rho_sq(), 0.25);
        assert!(m2.clone().with_path(KernelPath::ClosedForm).is_err());
    }

    #[test]
    fn calibrated_normalization_matches_known_plancherel_constants() {
        // h_t = (1/2π²) ∫ λ² φ_λ e^{-t(λ²+1)} on H³ and (1/2π) ∫ λ tanh(πλ) φ_λ ... on H²
        let m3 = HyperbolicModel::<f64>::h3().unwrap();
        let c3 = 0.5 / std::f64::consts::PI.powi(2);
        assert!((m3.normalization_constant() / c3 - 1.0).abs() < 1e-9);
        let m2 = HyperbolicModel::<f64>::h2().unwrap();
        let c2 = 0.5 / std::f64::consts::PI;
        assert!((m2.normalization_constant() / c2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn total_mass_is_one_at_other_times() {
        for m in [HyperbolicModel::<f64>::h2().unwrap(), HyperbolicModel::<f64>::h3().unwrap()] {
            let mass = m.spatial_mass(10.0).unwrap();
            assert!((mass - 1.0).abs() < 1e-6, "{} {mass}", m.dim());
        }
    }

    #[test]
    fn phi0_product_identity() {
        let m3 = HyperbolicModel::<f64>::h3().unwrap();
        let x = SpacePoint::new(1.0, 0.4, 1.0).unwrap();
        let y = SpacePoint::new(2.0, 2.1, 0.3).unwrap();
        assert!(m3.phi0_product_check(&x, &y).unwrap().abs() < 1e-8);
        assert_eq!(m3.phi0_product_check(&x, &SpacePoint::origin()).unwrap(), 0.0);
        let m2 = HyperbolicModel::<f64>::h2().unwrap();
        let x = SpacePoint::polar(1.0, 0.3);
        let y = SpacePoint::polar(1.0, 4.0);
        assert!(m2.phi0_product_check(&x, &y).unwrap().abs() < 1e-8);
    }

    #[test]
    fn busemann_below_rho_r() {
        let m = HyperbolicModel::<f64>::h3().unwrap();
        assert_eq!(m.busemann_rho(&SpacePoint::origin()), 0.0);
        assert!((m.busemann_rho(&SpacePoint::on_pole(2.0)) - 2.0).abs() < 1e-15);
        let p = SpacePoint::new(2.0, 1.0, 0.5).unwrap();
        assert!(m.busemann_rho(&p) <= 2.0);
    }

    #[test]
    fn model_names() {
        assert_eq!(ModelDim::from_name("H3").unwrap(), ModelDim::H3);
        assert!(ModelDim::from_name("a2").is_err());
        assert!(ModelDim::from_n(4).is_err());
        assert_eq!(ModelDim::H2.sphere_area::<f64>(), std::f64::consts::TAU);
    }
}
