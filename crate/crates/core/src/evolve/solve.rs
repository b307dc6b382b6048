use rayon::prelude::*;

use crate::doob::RelativizedSpace;
use crate::error::{Error, Result};
use crate::hkernel::{exp_at, half_angle_sin_sq, log_at, ModelDim, ShiftedKernel, SpacePoint};
use crate::quad::{pairwise_sum, GaussLegendre};
use crate::scalar::{ln_sinh, Real};

use super::data::InitialData;

/// Outcome of the weighted integrability test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility<T> {
    pub admissible: bool,
    /// `∫|f| φ₀ e^{ρ|y|} dμ` (truncated, plus the extrapolated tail).
    pub value: T,
    /// False when the tail test could not decide; such data count as inadmissible.
    pub conclusive: bool,
}

/// Quadrature nodes `y_j` with coefficients `c_j = w_j f(y_j) φ₀(|y_j|) J_j`,
/// so that `∫ f φ₀ k dμ ≈ Σ c_j k(y_j)`.
#[derive(Debug, Clone)]
pub(crate) struct SupportNodes<T> {
    pub r: Vec<T>,
    pub sinh_r: Vec<T>,
    /// Empty for the radially reduced rule.
    pub dir: Vec<[T; 3]>,
    pub coef: Vec<T>,
}

impl<T: Real> SupportNodes<T> {
    fn empty() -> Self {
        Self {
            r: Vec::new(),
            sinh_r: Vec::new(),
            dir: Vec::new(),
            coef: Vec::new(),
        }
    }

    fn push(&mut self, r: T, dir: Option<[T; 3]>, coef: T) {
        if coef == T::zero() {
            return;
        }
        self.r.push(r);
        self.sinh_r.push(r.sinh());
        if let Some(d) = dir {
            self.dir.push(d);
        }
        self.coef.push(coef);
    }

    pub fn len(&self) -> usize {
        self.coef.len()
    }

    fn is_radial(&self) -> bool {
        self.dir.is_empty()
    }
}

/// `sinh²(d/2) = sinh²((a−b)/2) + sinh a sinh b sin²(γ/2)` with the
/// hyperbolic sines precomputed.
#[inline]
fn dist<T: Real>(a: T, b: T, sa: T, sb: T, s2: T) -> T {
    let two = T::lit(2.0);
    let sh = ((a - b) / two).sinh();
    two * (sh * sh + sa * sb * s2).max(T::zero()).sqrt().asinh()
}

/// Node rule in the rotation angle `γ ∈ [0, π]` with the normalized
/// measure of `K`-averages folded in: `sin γ/2` in `H³`, `1/π` in `H²`.
fn gamma_rule<T: Real>(dim: ModelDim, gl: &GaussLegendre<T>, panels: usize) -> Vec<(T, T)> {
    gl.composite_points(T::zero(), T::PI(), panels)
        .into_iter()
        .map(|(g, w)| {
            let s = (g / T::lit(2.0)).sin();
            let w = match dim {
                ModelDim::H3 => w * g.sin() / T::lit(2.0),
                ModelDim::H2 => w / T::PI(),
            };
            (s * s, w)
        })
        .collect()
}

fn sinh_pow<T: Real>(dim: ModelDim, r: T) -> T {
    match dim {
        ModelDim::H2 => r.sinh(),
        ModelDim::H3 => {
            let s = r.sinh();
            s * s
        }
    }
}

/// Radius beyond which `∫|f| w` is negligible (the support radius for
/// compact data). Fails when the integrand does not die out by `r = 400`.
pub fn effective_radius<T: Real>(space: &RelativizedSpace<T>, f: &InitialData<T>) -> Result<T> {
    if f.is_compact() {
        return Ok(f.support_radius());
    }
    let Some(_) = f.radial_value(T::zero()) else {
        return Err(Error::Unsupported("noncompact data must be radial".into()));
    };
    let gl = GaussLegendre::<T>::new(16);
    let mut total = T::zero();
    let mut quiet = 0;
    for k in 0..400 {
        let lo = T::from_usize_lossy(k);
        let piece = gl.integrate(lo, lo + T::one(), |r| {
            f.local_value(r).abs() * space.weight(r)
        });
        if !piece.is_finite() {
            break;
        }
        total = total + piece;
        if k >= 5 && piece <= T::lit(1e-15) * total {
            quiet += 1;
            if quiet >= 3 {
                return Ok(lo + T::one());
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Inadmissible("|f| is not integrable against dμ̃".into()))
}

/// `∫|f(y)| φ₀(|y|) e^{ρ|y|} dμ(y)` with a geometric tail test over doubling
/// shells `[10·2^k, 10·2^{k+1}]`.
pub fn admissibility_check<T: Real>(space: &RelativizedSpace<T>, f: &InitialData<T>) -> Admissibility<T> {
    let model = space.model();
    let rho = model.rho();
    let dim = model.dim();
    if f.is_zero() {
        return Admissibility {
            admissible: true,
            value: T::zero(),
            conclusive: true,
        };
    }
    if f.is_compact() {
        let nodes = tensor_nodes(space, f, model.quadrature().node_count / 2);
        let value = pairwise_sum(
            &nodes
                .r
                .iter()
                .zip(&nodes.coef)
                .map(|(r, c)| c.abs() * (rho * *r).exp())
                .collect::<Vec<_>>(),
        );
        return Admissibility {
            admissible: value.is_finite(),
            value,
            conclusive: true,
        };
    }
    if f.radial_value(T::zero()).is_none() {
        return Admissibility {
            admissible: false,
            value: T::nan(),
            conclusive: false,
        };
    }
    let gl = GaussLegendre::<T>::new(32);
    let area = dim.sphere_area::<T>();
    let n1 = T::from_u32(dim.n() - 1).unwrap();
    let integrand = |r: T| {
        if r == T::zero() {
            return T::zero();
        }
        let log_w = model.ln_phi0(r) + n1 * ln_sinh(r) + rho * r;
        (f.ln_abs_local(r) + log_w).exp() * area
    };
    let mut value = gl.composite(T::zero(), T::lit(10.0), 20, integrand);
    let mut shells = Vec::new();
    let mut lo = T::lit(10.0);
    for _ in 0..7 {
        let hi = lo * T::lit(2.0);
        let panels = (hi - lo).to_usize().unwrap_or(1).max(1);
        let piece = gl.composite(lo, hi, panels, integrand);
        if !piece.is_finite() {
            return Admissibility {
                admissible: false,
                value: T::infinity(),
                conclusive: true,
            };
        }
        value = value + piece;
        shells.push(piece);
        lo = hi;
    }
    let n = shells.len();
    let ratio = |a: T, b: T| if a == T::zero() { T::zero() } else { b / a };
    let q1 = ratio(shells[n - 3], shells[n - 2]);
    let q2 = ratio(shells[n - 2], shells[n - 1]);
    let q = q1.max(q2);
    if q < T::lit(0.6) {
        let tail = shells[n - 1] * q / (T::one() - q);
        Admissibility {
            admissible: true,
            value: value + tail,
            conclusive: true,
        }
    } else {
        Admissibility {
            admissible: false,
            value,
            conclusive: q > T::one(),
        }
    }
}

fn require_admissible<T: Real>(space: &RelativizedSpace<T>, f: &InitialData<T>) -> Result<()> {
    if f.is_compact() {
        return Ok(());
    }
    let a = admissibility_check(space, f);
    if a.admissible {
        Ok(())
    } else {
        Err(Error::Inadmissible(format!(
            "∫|f| φ₀ e^(ρr) dμ {} (partial value {})",
            if a.conclusive { "diverges" } else { "is inconclusive" },
            a.value
        )))
    }
}

/// Tensor rule centered on the data center in geodesic polar coordinates
/// there: `m` Gauss–Legendre nodes per unit panel in the distance, `m` in
/// the polar angle (`H³`) and `2m` trapezoid nodes in the periodic angle.
pub(crate) fn tensor_nodes<T: Real>(
    space: &RelativizedSpace<T>,
    f: &InitialData<T>,
    m: usize,
) -> SupportNodes<T> {
    let mut out = SupportNodes::empty();
    if f.is_zero() {
        return out;
    }
    let model = space.model();
    let dim = model.dim();
    let extent = if f.is_compact() {
        f.local_radius()
    } else {
        match effective_radius(space, f) {
            Ok(r) => r,
            Err(_) => return out,
        }
    };
    let gl = GaussLegendre::<T>::new(m.max(4));
    let panels = extent.ceil().to_usize().unwrap_or(1).max(1);
    let s_pts = gl.composite_points(T::zero(), extent, panels);
    let nb = 2 * m.max(4);
    let db = T::TAU() / T::from_usize_lossy(nb);
    let center = f.center();
    match dim {
        ModelDim::H2 => {
            for &(s, ws) in &s_pts {
                let fs = f.local_value(s);
                let js = ws * s.sinh() * fs;
                for k in 0..nb {
                    let b = db * T::from_usize_lossy(k);
                    let (sb, cb) = b.sin_cos();
                    let (r, dir) = exp_at(dim, &center, s, [cb, sb, T::zero()]);
                    out.push(r, Some(dir), js * db * model.phi0_fast(r));
                }
            }
        }
        ModelDim::H3 => {
            let a_pts = gl.composite_points(T::zero(), T::PI(), 1);
            for &(s, ws) in &s_pts {
                let fs = f.local_value(s);
                let sh = s.sinh();
                let js = ws * sh * sh * fs;
                for &(a, wa) in &a_pts {
                    let (sa, ca) = a.sin_cos();
                    for k in 0..nb {
                        let b = db * T::from_usize_lossy(k);
                        let (sb, cb) = b.sin_cos();
                        let (r, dir) = exp_at(dim, &center, s, [sa * cb, sa * sb, ca]);
                        out.push(r, Some(dir), js * wa * sa * db * model.phi0_fast(r));
                    }
                }
            }
        }
    }
    out
}

/// Radially reduced rule on `[0, top]`: panels of width `fine` up to `core`
/// and `coarse` beyond, `c_i = w_i f(r_i) φ₀(r_i) sinh^{n−1} r_i |S^{n−1}|`.
fn radial_nodes<T: Real>(
    space: &RelativizedSpace<T>,
    f: &InitialData<T>,
    top: T,
    core: T,
    fine: T,
    coarse: T,
    m: usize,
) -> SupportNodes<T> {
    let mut out = SupportNodes::empty();
    if f.is_zero() {
        return out;
    }
    let model = space.model();
    let dim = model.dim();
    let gl = GaussLegendre::<T>::new(m);
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
    let area = dim.sphere_area::<T>();
    for (r, w) in gl.piecewise_points(&breaks) {
        let c = w * f.local_value(r) * model.phi0_fast(r) * sinh_pow(dim, r) * area;
        out.push(r, None, c);
    }
    out
}

/// `M̃(g) = φ₀(|g|)^{−1} ∫ f(y) φ₀(|y|) φ₀(d(y,g)) dμ(y)` by tensor
/// quadrature over the support.
pub fn mass_function<T: Real>(
    space: &RelativizedSpace<T>,
    f: &InitialData<T>,
    g: &SpacePoint<T>,
) -> Result<T> {
    Ok(mass_function_many(space, f, std::slice::from_ref(g))?[0])
}

/// [`mass_function`] at several points, sharing one node set.
pub fn mass_function_many<T: Real>(
    space: &RelativizedSpace<T>,
    f: &InitialData<T>,
    points: &[SpacePoint<T>],
) -> Result<Vec<T>> {
    require_admissible(space, f)?;
    if f.is_zero() {
        return Ok(vec![T::zero(); points.len()]);
    }
    let model = space.model();
    let extent = if f.is_compact() { f.local_radius() } else { effective_radius(space, f)? };
    let m = model.quadrature().node_count;
    Ok(points
        .par_iter()
        .map(|g| {
            let nodes = aligned_nodes(space, f, g, extent, m);
            sum_against(space.dim(), &nodes, g, |d| model.phi0_fast(d)) / model.phi0_fast(g.r)
        })
        .collect())
}

/// Unit vectors completing `v` to an orthonormal frame.
fn complete_frame<T: Real>(v: [T; 3]) -> ([T; 3], [T; 3]) {
    let pick = if v[0].abs() < T::lit(0.9) {
        [T::one(), T::zero(), T::zero()]
    } else {
        [T::zero(), T::one(), T::zero()]
    };
    let d = pick[0] * v[0] + pick[1] * v[1] + pick[2] * v[2];
    let mut e1 = [pick[0] - d * v[0], pick[1] - d * v[1], pick[2] - d * v[2]];
    let n = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1 = [e1[0] / n, e1[1] / n, e1[2] / n];
    let e2 = [
        v[1] * e1[2] - v[2] * e1[1],
        v[2] * e1[0] - v[0] * e1[2],
        v[0] * e1[1] - v[1] * e1[0],
    ];
    (e1, e2)
}

/// Tensor rule around the data center whose polar axis points at `g`.
/// `φ₀(d(y, g))` varies on an angular scale that shrinks like `e^{−ξ/2}`
/// near that axis, so the polar panels are graded geometrically toward it.
fn aligned_nodes<T: Real>(
    space: &RelativizedSpace<T>,
    f: &InitialData<T>,
    g: &SpacePoint<T>,
    extent: T,
    m: usize,
) -> SupportNodes<T> {
    let model = space.model();
    let dim = model.dim();
    let center = f.center();
    let (_, axis) = log_at(dim, &center, g);
    let axis = match dim {
        ModelDim::H2 if g.r == center.r && axis[2] != T::zero() => [T::one(), T::zero(), T::zero()],
        _ => axis,
    };
    let gl = GaussLegendre::<T>::new(m);
    let gh = GaussLegendre::<T>::new((m / 2).max(8));
    let panels = extent.ceil().to_usize().unwrap_or(1).max(1);
    let s_pts = gl.composite_points(T::zero(), extent, panels);
    let mut breaks = vec![T::zero()];
    for k in (0..=10).rev() {
        breaks.push(T::PI() / T::lit(2.0).powi(k));
    }
    let a_pts = gh.piecewise_points(&breaks);
    let mut out = SupportNodes::empty();
    match dim {
        ModelDim::H2 => {
            let perp = [-axis[1], axis[0], T::zero()];
            for &(s, ws) in &s_pts {
                let js = ws * s.sinh() * f.local_value(s);
                if js == T::zero() {
                    continue;
                }
                for &(a, wa) in &a_pts {
                    let (sa, ca) = a.sin_cos();
                    for sign in [T::one(), -T::one()] {
                        let dir = [
                            ca * axis[0] + sign * sa * perp[0],
                            ca * axis[1] + sign * sa * perp[1],
                            T::zero(),
                        ];
                        let (r, d) = exp_at(dim, &center, s, dir);
                        out.push(r, Some(d), js * wa * model.phi0_fast(r));
                    }
                }
            }
        }
        ModelDim::H3 => {
            let (e1, e2) = complete_frame(axis);
            let nb = 2 * gh.len();
            let db = T::TAU() / T::from_usize_lossy(nb);
            for &(s, ws) in &s_pts {
                let sh = s.sinh();
                let js = ws * sh * sh * f.local_value(s);
                if js == T::zero() {
                    continue;
                }
                for &(a, wa) in &a_pts {
                    let (sa, ca) = a.sin_cos();
                    for k in 0..nb {
                        let (sb, cb) = (db * T::from_usize_lossy(k)).sin_cos();
                        let dir = [
                            ca * axis[0] + sa * (cb * e1[0] + sb * e2[0]),
                            ca * axis[1] + sa * (cb * e1[1] + sb * e2[1]),
                            ca * axis[2] + sa * (cb * e1[2] + sb * e2[2]),
                        ];
                        let (r, d) = exp_at(dim, &center, s, dir);
                        out.push(r, Some(d), js * wa * sa * db * model.phi0_fast(r));
                    }
                }
            }
        }
    }
    out
}

/// `Σ_j c_j k(d(g, y_j))` over a tensor rule.
fn sum_against<T: Real, K: Fn(T) -> T>(
    dim: ModelDim,
    nodes: &SupportNodes<T>,
    g: &SpacePoint<T>,
    k: K,
) -> T {
    let a = g.r;
    let sa = a.sinh();
    let gd = g.direction(dim);
    let mut acc = T::zero();
    for j in 0..nodes.len() {
        let s2 = half_angle_sin_sq(&gd, &nodes.dir[j]);
        let d = dist(a, nodes.r[j], sa, nodes.sinh_r[j], s2);
        acc = acc + nodes.coef[j] * k(d);
    }
    acc
}

/// `∫₀^∞ f(r) w(r) dr` for radial data.
pub fn mass_constant_radial<T: Real>(space: &RelativizedSpace<T>, f: &InitialData<T>) -> Result<T> {
    if f.radial_value(T::zero()).is_none() {
        return Err(Error::Unsupported("mass_constant_radial needs radial data".into()));
    }
    if f.is_zero() {
        return Ok(T::zero());
    }
    let top = effective_radius(space, f)?;
    let gl = GaussLegendre::<T>::new(space.model().quadrature().node_count);
    let panels = (top * T::lit(2.0)).ceil().to_usize().unwrap_or(1).max(2);
    let terms: Vec<T> = gl
        .composite_points(T::zero(), top, panels)
        .into_iter()
        .map(|(r, w)| w * f.local_value(r) * space.weight(r))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `∫ f dμ̃` for any data, radial or not.
pub fn total_mass<T: Real>(space: &RelativizedSpace<T>, f: &InitialData<T>) -> Result<T> {
    if f.radial_value(T::zero()).is_some() {
        return mass_constant_radial(space, f);
    }
    let nodes = tensor_nodes(space, f, space.model().quadrature().node_count);
    let model = space.model();
    Ok(pairwise_sum(
        &nodes
            .r
            .iter()
            .zip(&nodes.coef)
            .map(|(r, c)| *c * model.phi0_fast(*r))
            .collect::<Vec<_>>(),
    ))
}

/// Rescales `f` to unit `μ̃`-mass.
pub fn normalize_unit_mass<T: Real>(
    space: &RelativizedSpace<T>,
    f: InitialData<T>,
) -> Result<InitialData<T>> {
    let m = total_mass(space, &f)?;
    if !(m.abs() > T::zero()) || !m.is_finite() {
        return Err(Error::invalid("initial data has zero or infinite mass"));
    }
    Ok(f.scaled(T::one() / m))
}

/// Harnack constant on the ball of radius `xi`: the smallest `c` with
/// `φ₀(d(g,y))/φ₀(|g|) ∈ [1/c, c]` whenever `|y| ≤ xi`.
pub fn harnack_constant<T: Real>(space: &RelativizedSpace<T>, xi: T) -> T {
    let model = space.model();
    let mut c = T::one();
    for i in 0..=1200 {
        let r = T::lit(0.05) * T::from_usize_lossy(i);
        let p = model.ln_phi0(r);
        let near = model.ln_phi0((r - xi).abs());
        let far = model.ln_phi0(r + xi);
        c = c.max((near - p).exp()).max((p - far).exp());
    }
    c
}

/// The solution `u(t, ·)` of the relativized heat equation at a fixed time,
/// with its quadrature rule and kernel prepared for many evaluations.
pub struct Evolution<'a, T: Real> {
    space: &'a RelativizedSpace<T>,
    t: T,
    kernel: ShiftedKernel<T>,
    nodes: SupportNodes<T>,
    mass: Option<T>,
    gl: GaussLegendre<T>,
}

impl<'a, T: Real> Evolution<'a, T> {
    /// Prepares evaluation at points with `|g| ≤ g_max`.
    pub fn new(space: &'a RelativizedSpace<T>, f: &InitialData<T>, t: T, g_max: T) -> Result<Self> {
        if !(t > T::zero()) {
            return Err(Error::NonPositive("t"));
        }
        require_admissible(space, f)?;
        let model = space.model();
        let st = t.sqrt();
        let m = (model.quadrature().node_count / 2).max(8);
        let radial = f.radial_value(T::zero()).is_some();
        let (nodes, reach) = if radial {
            let xi = effective_radius(space, f)?;
            let top = if f.is_compact() { xi } else { xi + T::lit(8.0) * st };
            let fine = T::lit(0.5).min(st / T::lit(2.0));
            let coarse = fine.max(st / T::lit(2.0));
            (radial_nodes(space, f, top, xi.min(T::lit(10.0)).max(fine), fine, coarse, m), top)
        } else {
            (tensor_nodes(space, f, m), f.support_radius())
        };
        let kernel = model.shifted_kernel(t, g_max + reach + T::one())?;
        let mass = if radial { Some(mass_constant_radial(space, f)?) } else { None };
        Ok(Self {
            space,
            t,
            kernel,
            nodes,
            mass,
            gl: GaussLegendre::new(m),
        })
    }

    pub fn t(&self) -> T {
        self.t
    }

    /// Constant mass for radial data.
    pub fn radial_mass(&self) -> Option<T> {
        self.mass
    }

    /// Radial fast path: `Σ_i c_i ⟨k(d(g, k·y_i))⟩_K`.
    fn radial_sum<K: Fn(T) -> T>(&self, a: T, k: K) -> T {
        let dim = self.space.dim();
        let n = &self.nodes;
        if a == T::zero() {
            return (0..n.len()).fold(T::zero(), |acc, i| acc + n.coef[i] * k(n.r[i]));
        }
        let panels = (T::lit(2.0) * a / self.t.sqrt())
            .ceil()
            .to_usize()
            .unwrap_or(1)
            .clamp(1, 128);
        let rule = gamma_rule(dim, &self.gl, panels);
        let sa = a.sinh();
        let mut acc = T::zero();
        for i in 0..n.len() {
            let (b, sb) = (n.r[i], n.sinh_r[i]);
            let avg = rule
                .iter()
                .fold(T::zero(), |s, &(s2, w)| s + w * k(dist(a, b, sa, sb, s2)));
            acc = acc + n.coef[i] * avg;
        }
        acc
    }

    /// `u(t, g) = ∫ h̃_t(g, y) f(y) dμ̃(y)`.
    pub fn u(&self, g: &SpacePoint<T>) -> T {
        let phi_g = self.space.model().phi0_fast(g.r);
        let sum = if self.nodes.is_radial() {
            self.radial_sum(g.r, |d| self.kernel.eval(d))
        } else {
            sum_against(self.space.dim(), &self.nodes, g, |d| self.kernel.eval(d))
        };
        sum / phi_g
    }

    /// `M̃(g)` from the same rule.
    pub fn mass(&self, g: &SpacePoint<T>) -> T {
        if let Some(m) = self.mass {
            return m;
        }
        let model = self.space.model();
        sum_against(self.space.dim(), &self.nodes, g, |d| model.phi0_fast(d)) / model.phi0_fast(g.r)
    }

    /// `h̃_t(o, g)`.
    pub fn kernel_at(&self, g: &SpacePoint<T>) -> T {
        self.kernel.eval(g.r) / self.space.model().phi0_fast(g.r)
    }

    /// `(u, M̃, u − M̃ h̃_t)` at `g`, sharing distance evaluations.
    pub fn difference(&self, g: &SpacePoint<T>) -> (T, T, T) {
        let model = self.space.model();
        let phi_g = model.phi0_fast(g.r);
        let (u, m) = if self.nodes.is_radial() {
            (self.radial_sum(g.r, |d| self.kernel.eval(d)) / phi_g, self.mass.unwrap_or(T::zero()))
        } else {
            let dim = self.space.dim();
            let n = &self.nodes;
            let (a, sa, gd) = (g.r, g.r.sinh(), g.direction(dim));
            let mut su = T::zero();
            let mut sm = T::zero();
            for j in 0..n.len() {
                let s2 = half_angle_sin_sq(&gd, &n.dir[j]);
                let d = dist(a, n.r[j], sa, n.sinh_r[j], s2);
                su = su + n.coef[j] * self.kernel.eval(d);
                sm = sm + n.coef[j] * model.phi0_fast(d);
            }
            (su / phi_g, sm / phi_g)
        };
        (u, m, u - m * self.kernel.eval(g.r) / phi_g)
    }
}

/// `u(t, g)` at each point.
pub fn evolve<T: Real>(
    space: &RelativizedSpace<T>,
    f: &InitialData<T>,
    t: T,
    points: &[SpacePoint<T>],
) -> Result<Vec<T>> {
    let g_max = points.iter().fold(T::zero(), |m, p| m.max(p.r));
    let ev = Evolution::new(space, f, t, g_max)?;
    Ok(points.par_iter().map(|g| ev.u(g)).collect())
}
