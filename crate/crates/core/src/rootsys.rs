//! Structural constants of a symmetric space of noncompact type and the
//! critical regions in its closed positive chamber.
//!
//! A [`RootDatum`] lists the reduced positive roots `α` together with the
//! multiplicities `m_α` and `m_2α`. Everything else (dimension, dimension at
//! infinity, `ρ`, Haar density) is derived from that list.
//!
//! Hyperbolic spaces are normalized to curvature −1: a single reduced root of
//! unit length with `m_α = n − 1`, which gives `ρ = (n − 1)/2`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A reduced positive root with the multiplicities of `α` and `2α`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveRoot<T> {
    pub vector: Vec<T>,
    pub mult: u32,
    pub mult_double: u32,
}

impl<T: Real> PositiveRoot<T> {
    pub fn new(vector: Vec<T>, mult: u32, mult_double: u32) -> Self {
        Self {
            vector,
            mult,
            mult_double,
        }
    }

    fn pair(&self, h: &[T]) -> T {
        dot(&self.vector, h)
    }
}

/// Named families understood by [`RootDatum::build`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatumFamily {
    /// Real hyperbolic space `H^n`, `n ≥ 2`.
    Hyperbolic(u32),
    /// `SL(3, R)/SO(3)`: root system `A₂`, all multiplicities one.
    A2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dimensions {
    /// Manifold dimension.
    pub n: u32,
    /// Dimension at infinity (pseudo-dimension).
    pub nu: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootDatum<T> {
    name: String,
    rank: usize,
    roots: Vec<PositiveRoot<T>>,
    rho: Vec<T>,
    dims: Dimensions,
}

impl<T: Real> RootDatum<T> {
    pub fn build(family: DatumFamily) -> Result<Self> {
        match family {
            DatumFamily::Hyperbolic(n) => {
                if n < 2 {
                    return Err(Error::invalid(format!("hyperbolic dimension {n} < 2")));
                }
                let root = PositiveRoot::new(vec![T::one()], n - 1, 0);
                Self::from_roots(format!("h{n}"), 1, vec![root])
            }
            DatumFamily::A2 => {
                let s = T::lit(3.0).sqrt() / T::lit(2.0);
                let half = T::lit(0.5);
                let roots = vec![
                    PositiveRoot::new(vec![T::one(), T::zero()], 1, 0),
                    PositiveRoot::new(vec![-half, s], 1, 0),
                    PositiveRoot::new(vec![half, s], 1, 0),
                ];
                Self::from_roots("a2", 2, roots)
            }
        }
    }

    /// Parses `h2`, `h3`, ..., `a2`.
    pub fn from_name(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        if lower == "a2" {
            return Self::build(DatumFamily::A2);
        }
        if let Some(rest) = lower.strip_prefix('h') {
            if let Ok(n) = rest.parse::<u32>() {
                return Self::build(DatumFamily::Hyperbolic(n));
            }
        }
        Err(Error::invalid(format!("unknown root datum '{name}'")))
    }

    /// Explicit list of reduced positive roots.
    pub fn from_roots(
        name: impl Into<String>,
        rank: usize,
        roots: Vec<PositiveRoot<T>>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("rank must be at least one"));
        }
        if roots.is_empty() {
            return Err(Error::EmptyRoots);
        }
        for (i, r) in roots.iter().enumerate() {
            if r.vector.len() != rank {
                return Err(Error::RankMismatch {
                    index: i,
                    got: r.vector.len(),
                    rank,
                });
            }
            if r.vector.iter().all(|x| *x == T::zero()) {
                return Err(Error::ZeroRoot(i));
            }
            if r.mult == 0 {
                return Err(Error::ZeroMultiplicity(i));
            }
            for (j, other) in roots.iter().enumerate().take(i) {
                if other.vector == r.vector {
                    return Err(Error::DuplicateRoot(j, i));
                }
            }
        }
        Ok(Self::assemble(name.into(), rank, roots))
    }

    /// Euclidean space of dimension `rank`: no roots at all.
    pub fn flat(rank: usize) -> Self {
        Self::assemble(format!("r{rank}"), rank, Vec::new())
    }

    fn assemble(name: String, rank: usize, roots: Vec<PositiveRoot<T>>) -> Self {
        let mut rho = vec![T::zero(); rank];
        let mut n = rank as u32;
        for r in &roots {
            // 2α contributes m_2α · 2α / 2 = m_2α · α
            let w = T::lit(0.5) * T::from_u32(r.mult).unwrap() + T::from_u32(r.mult_double).unwrap();
            for (acc, a) in rho.iter_mut().zip(&r.vector) {
                *acc = *acc + w * *a;
            }
            n += r.mult + r.mult_double;
        }
        let nu = rank as u32 + 2 * roots.len() as u32;
        Self {
            name,
            rank,
            roots,
            rho,
            dims: Dimensions { n, nu },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[PositiveRoot<T>] {
        &self.roots
    }

    pub fn dimensions(&self) -> Dimensions {
        self.dims
    }

    pub fn rho(&self) -> &[T] {
        &self.rho
    }

    pub fn rho_norm_sq(&self) -> T {
        dot(&self.rho, &self.rho)
    }

    /// Exponent `(m_α + m_2α)/2 − 1` of each reduced root in the heat kernel
    /// estimate.
    pub fn kernel_exponents(&self) -> Vec<T> {
        self.roots
            .iter()
            .map(|r| T::lit(0.5) * T::from_u32(r.mult + r.mult_double).unwrap() - T::one())
            .collect()
    }

    /// `δ(H) = Π (sinh⟨α,H⟩)^{m_α} (sinh⟨2α,H⟩)^{m_2α}`.
    pub fn haar_density(&self, h: &ChamberPoint<T>) -> T {
        self.roots.iter().fold(T::one(), |acc, r| {
            let a = r.pair(h.coords());
            let two = T::lit(2.0);
            acc * a.sinh().powi(r.mult as i32) * (two * a).sinh().powi(r.mult_double as i32)
        })
    }

    /// `Π (⟨α,H⟩/(1+⟨α,H⟩))^{m_α} · e^{2⟨ρ,H⟩}`, the shape that `δ` is
    /// comparable to.
    pub fn haar_envelope(&self, h: &ChamberPoint<T>) -> T {
        let poly = self.roots.iter().fold(T::one(), |acc, r| {
            let a = r.pair(h.coords());
            let a2 = T::lit(2.0) * a;
            acc * (a / (T::one() + a)).powi(r.mult as i32)
                * (a2 / (T::one() + a2)).powi(r.mult_double as i32)
        });
        poly * (T::lit(2.0) * dot(&self.rho, h.coords())).exp()
    }

    /// `Π_{α reduced} (1 + ⟨α,H⟩) · e^{−⟨ρ,H⟩}`.
    pub fn phi0_shape(&self, h: &ChamberPoint<T>) -> T {
        let poly = self
            .roots
            .iter()
            .fold(T::one(), |acc, r| acc * (T::one() + r.pair(h.coords())));
        poly * (-dot(&self.rho, h.coords())).exp()
    }

    /// Two-sided envelope of the ground spherical function.
    pub fn phi0_envelope(&self, h: &ChamberPoint<T>, c: EnvelopeConstants<T>) -> (T, T) {
        let s = self.phi0_shape(h);
        (c.lower * s, c.upper * s)
    }

    /// `μ(H) = min_α ⟨α, H⟩` over all positive roots.
    pub fn mu_min(&self, h: &ChamberPoint<T>) -> Result<T> {
        if self.roots.is_empty() {
            return Err(Error::EmptyRoots);
        }
        let mut m = T::infinity();
        for r in &self.roots {
            let a = r.pair(h.coords());
            m = m.min(a);
            if r.mult_double > 0 {
                m = m.min(T::lit(2.0) * a);
            }
        }
        Ok(m.max(T::zero()))
    }

    /// Membership in `Ω_t = {ε√t ≤ |H| ≤ √t/ε, μ(H) ≥ ε√t}`.
    pub fn in_omega_t(&self, h: &ChamberPoint<T>, t: T, eps: &EpsilonSchedule<T>) -> Result<bool> {
        let radii = eps.radii(t)?;
        let norm = h.norm();
        if norm < radii.inner || norm > radii.outer {
            return Ok(false);
        }
        Ok(self.mu_min(h)? >= radii.inner)
    }

    /// Membership in the shrunken region built from `ε'' = 2ε`.
    pub fn in_omega_double_prime(
        &self,
        h: &ChamberPoint<T>,
        t: T,
        eps: &EpsilonSchedule<T>,
    ) -> Result<bool> {
        self.in_omega_t(h, t, &eps.scaled(T::lit(2.0)))
    }

    /// Membership in `R_t = {|H| ≤ √t/ε}`.
    pub fn in_r_t(&self, h: &ChamberPoint<T>, t: T, eps: &EpsilonSchedule<T>) -> Result<bool> {
        Ok(h.norm() <= eps.radii(t)?.outer)
    }

    /// Builds a chamber point checked against this datum.
    pub fn chamber_point(&self, coords: Vec<T>) -> Result<ChamberPoint<T>> {
        ChamberPoint::new(self, coords)
    }

    /// Point at distance `r` along the direction of `ρ` (rank one: the chamber ray).
    pub fn along_rho(&self, r: T) -> ChamberPoint<T> {
        let norm = dot(&self.rho, &self.rho).sqrt();
        let coords = if norm > T::zero() {
            self.rho.iter().map(|x| *x / norm * r).collect()
        } else {
            let mut v = vec![T::zero(); self.rank];
            v[0] = r;
            v
        };
        ChamberPoint { coords }
    }
}

/// A vector of the closed positive chamber.
#[derive(Debug, Clone, PartialEq)]
pub struct ChamberPoint<T> {
    coords: Vec<T>,
}

impl<T: Real> ChamberPoint<T> {
    pub fn new(datum: &RootDatum<T>, coords: Vec<T>) -> Result<Self> {
        if coords.len() != datum.rank {
            return Err(Error::RankMismatch {
                index: 0,
                got: coords.len(),
                rank: datum.rank,
            });
        }
        let scale = coords.iter().fold(T::one(), |m, x| m.max(x.abs()));
        let slack = T::lit(64.0) * T::epsilon() * scale;
        for r in &datum.roots {
            if r.pair(&coords) < -slack {
                return Err(Error::OutsideChamber);
            }
        }
        Ok(Self { coords })
    }

    /// Rank-one point at distance `r ≥ 0`.
    pub fn radial(r: T) -> Result<Self> {
        if !(r >= T::zero()) {
            return Err(Error::OutsideChamber);
        }
        Ok(Self { coords: vec![r] })
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn norm(&self) -> T {
        dot(&self.coords, &self.coords).sqrt()
    }
}

/// Lower and upper constants of a two-sided estimate `c₁·shape ≤ f ≤ c₂·shape`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeConstants<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> EnvelopeConstants<T> {
    pub fn unit() -> Self {
        Self {
            lower: T::one(),
            upper: T::one(),
        }
    }

    /// Min/max of `ratios`, widened by a relative `margin`.
    pub fn from_ratios(ratios: impl IntoIterator<Item = T>, margin: T) -> Self {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for q in ratios {
            lo = lo.min(q);
            hi = hi.max(q);
        }
        Self {
            lower: lo * (T::one() - margin),
            upper: hi * (T::one() + margin),
        }
    }

    pub fn brackets(&self, shape: T, value: T) -> bool {
        self.lower * shape <= value && value <= self.upper * shape
    }
}

/// The schedule `ε(t) = scale · t^{−γ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonSchedule<T> {
    gamma: T,
    scale: T,
}

/// Radii `ε√t` and `√t/ε` at a given time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionRadii<T> {
    pub eps: T,
    pub inner: T,
    pub outer: T,
}

impl<T: Real> RegionRadii<T> {
    /// The annulus is empty when `ε ≥ 1`.
    pub fn is_degenerate(&self) -> bool {
        self.inner > self.outer
    }
}

impl<T: Real> Default for EpsilonSchedule<T> {
    fn default() -> Self {
        Self {
            gamma: T::lit(0.25),
            scale: T::one(),
        }
    }
}

impl<T: Real> EpsilonSchedule<T> {
    /// Power family; requires `0 < γ < 1/2` so that `ε → 0` and `ε√t → ∞`.
    pub fn power(gamma: T) -> Result<Self> {
        if !(gamma > T::zero() && gamma < T::lit(0.5)) {
            return Err(Error::invalid(format!(
                "epsilon exponent {gamma} outside (0, 1/2)"
            )));
        }
        Ok(Self {
            gamma,
            scale: T::one(),
        })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            gamma: self.gamma,
            scale: self.scale * factor,
        }
    }

    pub fn eval(&self, t: T) -> T {
        self.scale * t.powf(-self.gamma)
    }

    pub fn radii(&self, t: T) -> Result<RegionRadii<T>> {
        if !(t > T::zero()) {
            return Err(Error::NonPositive("t"));
        }
        let eps = self.eval(t);
        let st = t.sqrt();
        Ok(RegionRadii {
            eps,
            inner: eps * st,
            outer: st / eps,
        })
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}
