use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hkernel::{distance, ModelDim, SpacePoint};
use crate::scalar::Real;

/// Symmetry class of initial data about the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Radial,
    /// Invariant under rotations fixing the pole axis.
    Axial,
    General,
}

/// The three built-in data families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    /// Radial Gaussian bump, `σ = 1/2`, cut off at `r = 4`.
    Radial,
    /// Smooth bump of radius 1 centered at distance 1 on the pole axis.
    OffCenter,
    /// `e^{−2ρr}(1+r)^{−4}`, noncompact support.
    Decaying,
}

impl DataKind {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "radial" => Ok(Self::Radial),
            "offcenter" => Ok(Self::OffCenter),
            "decaying" => Ok(Self::Decaying),
            other => Err(Error::invalid(format!(
                "unknown data '{other}' (use radial, offcenter or decaying)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Radial => "radial",
            Self::OffCenter => "offcenter",
            Self::Decaying => "decaying",
        }
    }
}

type RadialFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone)]
enum Profile<T> {
    Zero,
    Gaussian { sigma: T, cutoff: T },
    Bump { center: SpacePoint<T>, radius: T },
    Decaying { a: T, p: T },
    Exponential { a: T },
    Constant,
    Custom(RadialFn<T>),
}

/// Initial datum `f`. Every profile is a function of the distance to its
/// center: the origin, except for the off-center bump.
#[derive(Clone)]
pub struct InitialData<T> {
    profile: Profile<T>,
    amplitude: T,
    support: T,
    symmetry: Symmetry,
}

impl<T: Real> fmt::Debug for InitialData<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match &self.profile {
            Profile::Zero => "zero",
            Profile::Gaussian { .. } => "gaussian",
            Profile::Bump { .. } => "bump",
            Profile::Decaying { .. } => "decaying",
            Profile::Exponential { .. } => "exponential",
            Profile::Constant => "constant",
            Profile::Custom(_) => "custom",
        };
        f.debug_struct("InitialData")
            .field("profile", &name)
            .field("amplitude", &self.amplitude)
            .field("support", &self.support)
            .field("symmetry", &self.symmetry)
            .finish()
    }
}

impl<T: Real> InitialData<T> {
    pub fn zero() -> Self {
        Self {
            profile: Profile::Zero,
            amplitude: T::zero(),
            support: T::zero(),
            symmetry: Symmetry::Radial,
        }
    }

    /// `e^{−r²/2σ²} − e^{−ξ²/2σ²}` on `r < ξ`, zero beyond.
    pub fn radial_gaussian(sigma: T, cutoff: T) -> Result<Self> {
        if !(sigma > T::zero()) {
            return Err(Error::NonPositive("sigma"));
        }
        if !(cutoff > T::zero()) || !cutoff.is_finite() {
            return Err(Error::NonPositive("cutoff"));
        }
        Ok(Self {
            profile: Profile::Gaussian { sigma, cutoff },
            amplitude: T::one(),
            support: cutoff,
            symmetry: Symmetry::Radial,
        })
    }

    /// `exp(1 − 1/(1 − (d/a)²))` for `d = d(y, center) < a`.
    pub fn bump(center: SpacePoint<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::NonPositive("radius"));
        }
        let symmetry = if center.r == T::zero() {
            Symmetry::Radial
        } else if center.theta == T::zero() {
            Symmetry::Axial
        } else {
            Symmetry::General
        };
        Ok(Self {
            support: center.r + radius,
            profile: Profile::Bump { center, radius },
            amplitude: T::one(),
            symmetry,
        })
    }

    /// `e^{−ar}(1+r)^{−p}`.
    pub fn decaying(a: T, p: T) -> Result<Self> {
        if !(a >= T::zero()) || !(p >= T::zero()) {
            return Err(Error::invalid("decaying data needs a >= 0 and p >= 0"));
        }
        Ok(Self {
            profile: Profile::Decaying { a, p },
            amplitude: T::one(),
            support: T::infinity(),
            symmetry: Symmetry::Radial,
        })
    }

    /// `e^{ar}`.
    pub fn exponential(a: T) -> Self {
        Self {
            profile: Profile::Exponential { a },
            amplitude: T::one(),
            support: T::infinity(),
            symmetry: Symmetry::Radial,
        }
    }

    pub fn constant(c: T) -> Self {
        Self {
            profile: Profile::Constant,
            amplitude: c,
            support: T::infinity(),
            symmetry: Symmetry::Radial,
        }
    }

    /// Radial data from a closure, truncated at `support` (may be infinite).
    /// Rejects closures that jump on a fine grid or fail to vanish at a
    /// finite support radius.
    pub fn radial_fn<F>(f: F, support: T) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        if !(support > T::zero()) {
            return Err(Error::NonPositive("support"));
        }
        let top = if support.is_finite() { support } else { T::lit(50.0) };
        let step = T::lit(1e-3);
        let count = (top / step).ceil().to_usize().unwrap_or(1);
        let mut prev = f(T::zero());
        let mut scale = prev.abs();
        let mut jump = T::zero();
        for i in 1..=count {
            let v = f((step * T::from_usize_lossy(i)).min(top));
            if !v.is_finite() {
                return Err(Error::invalid("initial data is not finite on its support"));
            }
            jump = jump.max((v - prev).abs());
            scale = scale.max(v.abs());
            prev = v;
        }
        let scale = scale.max(T::min_positive_value());
        if jump > T::lit(0.05) * scale {
            return Err(Error::invalid(format!(
                "initial data is not continuous: jump {jump} on a grid of step 1e-3"
            )));
        }
        if support.is_finite() && prev.abs() > T::lit(1e-8) * scale {
            return Err(Error::invalid("initial data does not vanish at its support radius"));
        }
        Ok(Self {
            profile: Profile::Custom(Arc::new(f)),
            amplitude: T::one(),
            support,
            symmetry: Symmetry::Radial,
        })
    }

    /// Built-in family with unit amplitude; see [`DataKind`].
    pub fn standard(kind: DataKind, dim: ModelDim) -> Result<Self> {
        match kind {
            DataKind::Radial => Self::radial_gaussian(T::lit(0.5), T::lit(4.0)),
            DataKind::OffCenter => Self::bump(SpacePoint::on_pole(T::one()), T::one()),
            DataKind::Decaying => {
                let rho = match dim {
                    ModelDim::H2 => T::lit(0.5),
                    ModelDim::H3 => T::one(),
                };
                Self::decaying(T::lit(2.0) * rho, T::lit(4.0))
            }
        }
    }

    pub fn scaled(mut self, factor: T) -> Self {
        self.amplitude = self.amplitude * factor;
        self
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    /// `ξ`: `f` vanishes outside the ball of this radius about the origin.
    pub fn support_radius(&self) -> T {
        self.support
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.profile, Profile::Zero) || self.amplitude == T::zero()
    }

    pub fn is_compact(&self) -> bool {
        self.support.is_finite()
    }

    /// Noncompact data must pass the `e^{ρr}`-weighted admissibility test.
    pub fn needs_weight_check(&self) -> bool {
        !self.is_compact()
    }

    pub fn center(&self) -> SpacePoint<T> {
        match &self.profile {
            Profile::Bump { center, .. } => *center,
            _ => SpacePoint::origin(),
        }
    }

    /// Radius of the ball about [`Self::center`] holding the support.
    pub fn local_radius(&self) -> T {
        match &self.profile {
            Profile::Bump { radius, .. } => *radius,
            _ => self.support,
        }
    }

    /// Value at distance `s` from the center.
    pub fn local_value(&self, s: T) -> T {
        let one = T::one();
        let shape = match &self.profile {
            Profile::Zero => return T::zero(),
            Profile::Gaussian { sigma, cutoff } => {
                if s >= *cutoff {
                    return T::zero();
                }
                let two_var = T::lit(2.0) * *sigma * *sigma;
                (-s * s / two_var).exp() - (-*cutoff * *cutoff / two_var).exp()
            }
            Profile::Bump { radius, .. } => {
                let u = s / *radius;
                if u >= one {
                    return T::zero();
                }
                (one - one / (one - u * u)).exp()
            }
            Profile::Decaying { a, p } => (-*a * s).exp() * (one + s).powf(-*p),
            Profile::Exponential { a } => (*a * s).exp(),
            Profile::Constant => one,
            Profile::Custom(f) => {
                if s > self.support {
                    return T::zero();
                }
                f(s)
            }
        };
        self.amplitude * shape
    }

    /// `ln|f|` at distance `s` from the center; finite where `f` itself
    /// under- or overflows for the exponential families.
    pub fn ln_abs_local(&self, s: T) -> T {
        let ln_a = self.amplitude.abs().ln();
        match &self.profile {
            Profile::Decaying { a, p } => ln_a - *a * s - *p * s.ln_1p(),
            Profile::Exponential { a } => ln_a + *a * s,
            Profile::Constant => ln_a,
            _ => self.local_value(s).abs().ln(),
        }
    }

    /// `f(r)` for radial data.
    pub fn radial_value(&self, r: T) -> Option<T> {
        (self.symmetry == Symmetry::Radial && self.center().r == T::zero())
            .then(|| self.local_value(r))
    }

    pub fn eval(&self, dim: ModelDim, p: &SpacePoint<T>) -> T {
        let c = self.center();
        if c.r == T::zero() {
            self.local_value(p.r)
        } else {
            self.local_value(distance(dim, &c, p))
        }
    }

    /// The same datum with its center rotated to polar angles `(θ, φ)`;
    /// radial data are returned unchanged.
    pub fn rotated_center(&self, theta: T, phi: T) -> Result<Self> {
        match &self.profile {
            Profile::Bump { center, radius } => {
                let moved = SpacePoint::new(center.r, theta, phi)?;
                let mut out = Self::bump(moved, *radius)?;
                out.amplitude = self.amplitude;
                Ok(out)
            }
            _ => Ok(self.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_vanishes_at_cutoff_and_is_positive_inside() {
        let f = InitialData::radial_gaussian(0.5_f64, 4.0).unwrap();
        assert_eq!(f.local_value(4.0), 0.0);
        assert_eq!(f.local_value(7.0), 0.0);
        assert!(f.local_value(3.99) > 0.0);
        assert!((f.local_value(0.0) - (1.0 - (-32.0_f64).exp())).abs() < 1e-15);
        assert_eq!(f.symmetry(), Symmetry::Radial);
    }

    #[test]
    fn bump_is_axial_on_the_pole_and_general_elsewhere() {
        let f = InitialData::bump(SpacePoint::on_pole(1.0_f64), 1.0).unwrap();
        assert_eq!(f.symmetry(), Symmetry::Axial);
        assert_eq!(f.support_radius(), 2.0);
        assert!((f.eval(ModelDim::H3, &SpacePoint::on_pole(1.0)) - 1.0).abs() < 1e-15);
        assert_eq!(f.eval(ModelDim::H3, &SpacePoint::origin()), 0.0);
        let g = f.rotated_center(0.7, 0.2).unwrap();
        assert_eq!(g.symmetry(), Symmetry::General);
    }

    #[test]
    fn custom_data_checks_continuity_and_support() {
        assert!(InitialData::radial_fn(|r: f64| (1.0 - r).max(0.0), 1.0).is_ok());
        let jump = InitialData::radial_fn(|r: f64| if r < 0.5 { 1.0 } else { 0.0 }, 1.0);
        assert!(jump.is_err());
        let no_vanish = InitialData::radial_fn(|_r: f64| 1.0, 1.0);
        assert!(no_vanish.is_err());
    }

    #[test]
    fn zero_data_is_zero() {
        let f = InitialData::<f64>::zero();
        assert!(f.is_zero());
        assert_eq!(f.eval(ModelDim::H2, &SpacePoint::polar(0.3, 1.0)), 0.0);
    }

    #[test]
    fn kinds_round_trip() {
        for k in [DataKind::Radial, DataKind::OffCenter, DataKind::Decaying] {
            assert_eq!(DataKind::from_name(k.name()).unwrap(), k);
        }
        assert!(DataKind::from_name("spiky").is_err());
    }
}
