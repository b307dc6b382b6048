//! Points of `H²`/`H³` in geodesic polar coordinates around the origin.
//!
//! Directions are carried as unit vectors of `R³`; `H²` lives in the plane
//! `z = 0`. The polar angle `θ` is measured from the pole, which is the
//! `z`-axis in `H³` and the `x`-axis in `H²`, and which is also the reference
//! boundary direction for Busemann functions.

use crate::error::{Error, Result};
use crate::scalar::{ln_sinh, Real};

use super::ModelDim;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacePoint<T> {
    pub r: T,
    /// Polar angle from the pole. In `H²` this is the full angle in `[0, 2π)`.
    pub theta: T,
    /// Azimuth, `H³` only.
    pub phi: T,
}

impl<T: Real> SpacePoint<T> {
    pub fn origin() -> Self {
        Self {
            r: T::zero(),
            theta: T::zero(),
            phi: T::zero(),
        }
    }

    pub fn new(r: T, theta: T, phi: T) -> Result<Self> {
        if !(r >= T::zero()) || !r.is_finite() {
            return Err(Error::invalid(format!("radius {r} must be finite and >= 0")));
        }
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::invalid("angles must be finite"));
        }
        Ok(Self { r, theta, phi })
    }

    /// Point on the pole ray at distance `r`.
    pub fn on_pole(r: T) -> Self {
        Self {
            r,
            theta: T::zero(),
            phi: T::zero(),
        }
    }

    pub fn polar(r: T, theta: T) -> Self {
        Self {
            r,
            theta,
            phi: T::zero(),
        }
    }

    /// Unit direction in `R³` (arbitrary at the origin).
    pub fn direction(&self, dim: ModelDim) -> [T; 3] {
        match dim {
            ModelDim::H2 => [self.theta.cos(), self.theta.sin(), T::zero()],
            ModelDim::H3 => {
                let (st, ct) = self.theta.sin_cos();
                let (sp, cp) = self.phi.sin_cos();
                [st * cp, st * sp, ct]
            }
        }
    }

    /// Rebuilds polar coordinates from a radius and an `R³` direction.
    pub fn from_direction(dim: ModelDim, r: T, dir: [T; 3]) -> Self {
        match dim {
            ModelDim::H2 => {
                let mut th = dir[1].atan2(dir[0]);
                if th < T::zero() {
                    th = th + T::TAU();
                }
                Self::polar(r, th)
            }
            ModelDim::H3 => {
                let ct = dir[2].max(-T::one()).min(T::one());
                let th = ct.acos();
                let mut ph = dir[1].atan2(dir[0]);
                if ph < T::zero() {
                    ph = ph + T::TAU();
                }
                Self { r, theta: th, phi: ph }
            }
        }
    }
}

pub(crate) fn pole<T: Real>(dim: ModelDim) -> [T; 3] {
    match dim {
        ModelDim::H2 => [T::one(), T::zero(), T::zero()],
        ModelDim::H3 => [T::zero(), T::zero(), T::one()],
    }
}

/// `sin²(γ/2)` for the angle `γ` between unit vectors, from the chord length.
pub(crate) fn half_angle_sin_sq<T: Real>(u: &[T; 3], v: &[T; 3]) -> T {
    let d0 = u[0] - v[0];
    let d1 = u[1] - v[1];
    let d2 = u[2] - v[2];
    ((d0 * d0 + d1 * d1 + d2 * d2) / T::lit(4.0)).min(T::one())
}

/// Distance between points at radii `a`, `b` separated by angle `γ`, through
/// `sinh²(d/2) = sinh²((a−b)/2) + sinh a sinh b sin²(γ/2)`.
pub(crate) fn distance_from_parts<T: Real>(a: T, b: T, sin_half_sq: T) -> T {
    let two = T::lit(2.0);
    let sh = ((a - b) / two).sinh();
    let q = sh * sh + a.sinh() * b.sinh() * sin_half_sq;
    two * q.max(T::zero()).sqrt().asinh()
}

pub fn distance<T: Real>(dim: ModelDim, p: &SpacePoint<T>, q: &SpacePoint<T>) -> T {
    if p.r == T::zero() {
        return q.r;
    }
    if q.r == T::zero() {
        return p.r;
    }
    let s2 = half_angle_sin_sq(&p.direction(dim), &q.direction(dim));
    distance_from_parts(p.r, q.r, s2)
}

/// `B(p) = −ln(cosh r − sinh r cos θ)`: the Busemann function of the pole's
/// boundary point, normalized to vanish at the origin. It is the horospherical
/// height `ln z` in the upper half-space picture and equals `⟨α, A(p)⟩`.
pub fn busemann<T: Real>(dim: ModelDim, p: &SpacePoint<T>) -> T {
    if p.r == T::zero() {
        return T::zero();
    }
    let s2 = half_angle_sin_sq(&p.direction(dim), &pole(dim));
    busemann_from_parts(p.r, s2)
}

/// `−ln(e^{−r} + 2 sinh r · s2)` where `s2 = sin²(θ/2)`.
pub(crate) fn busemann_from_parts<T: Real>(r: T, s2: T) -> T {
    if s2 == T::zero() {
        return r;
    }
    let two = T::lit(2.0);
    let ln_b = (two * s2).ln() + ln_sinh(r);
    let ln_a = -r;
    // ln(e^{ln_a} + e^{ln_b})
    let (hi, lo) = if ln_a > ln_b { (ln_a, ln_b) } else { (ln_b, ln_a) };
    -(hi + (lo - hi).exp().ln_1p())
}

/// Lorentz vector `(x₀, x)` of the hyperboloid model.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Lorentz<T> {
    x0: T,
    x: [T; 3],
}

impl<T: Real> Lorentz<T> {
    pub(crate) fn from_polar(r: T, dir: [T; 3]) -> Self {
        let s = r.sinh();
        Self {
            x0: r.cosh(),
            x: [s * dir[0], s * dir[1], s * dir[2]],
        }
    }

    /// Transvection by distance `a` along the geodesic through the origin
    /// with unit direction `u`; it maps the origin to `(a, u)`.
    pub(crate) fn transvect(&self, a: T, u: &[T; 3]) -> Self {
        let xu = self.x[0] * u[0] + self.x[1] * u[1] + self.x[2] * u[2];
        let (sa, ca) = (a.sinh(), a.cosh());
        let x0 = ca * self.x0 + sa * xu;
        let k = (ca - T::one()) * xu + sa * self.x0;
        Self {
            x0,
            x: [
                self.x[0] + k * u[0],
                self.x[1] + k * u[1],
                self.x[2] + k * u[2],
            ],
        }
    }

    /// Radius and unit direction.
    pub(crate) fn to_polar(self) -> (T, [T; 3]) {
        let nrm = (self.x[0] * self.x[0] + self.x[1] * self.x[1] + self.x[2] * self.x[2]).sqrt();
        if nrm == T::zero() {
            return (T::zero(), [T::zero(), T::zero(), T::one()]);
        }
        (
            nrm.asinh(),
            [self.x[0] / nrm, self.x[1] / nrm, self.x[2] / nrm],
        )
    }
}

/// The point at distance `s` from `center` in direction `dir`, where `dir` is
/// a unit vector of the tangent space at the origin carried to `center` by
/// the transvection from the origin.
pub(crate) fn exp_at<T: Real>(
    dim: ModelDim,
    center: &SpacePoint<T>,
    s: T,
    dir: [T; 3],
) -> (T, [T; 3]) {
    let local = Lorentz::from_polar(s, dir);
    if center.r == T::zero() {
        return local.to_polar();
    }
    local.transvect(center.r, &center.direction(dim)).to_polar()
}

/// Inverse of [`exp_at`]: distance from `center` to `p` and the direction
/// of `p` in the tangent frame carried from the origin.
pub(crate) fn log_at<T: Real>(dim: ModelDim, center: &SpacePoint<T>, p: &SpacePoint<T>) -> (T, [T; 3]) {
    let v = Lorentz::from_polar(p.r, p.direction(dim));
    if center.r == T::zero() {
        return v.to_polar();
    }
    v.transvect(-center.r, &center.direction(dim)).to_polar()
}
