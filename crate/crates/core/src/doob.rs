//! Ground-state Doob transform: the measure `dμ̃ = φ₀² dμ`, the relativized
//! kernel `h̃_t = e^{ρ²t} h_t / (φ₀ ⊗ φ₀)` and the transformed generator.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hkernel::{HyperbolicModel, KernelPath, ModelDim, SpacePoint};
use crate::quad::pairwise_sum;
use crate::scalar::{coth, ln_sinh, x_over_sinh, Real};

#[derive(Debug, Clone)]
pub struct RelativizedSpace<T: Real> {
    model: HyperbolicModel<T>,
}

/// Result of [`RelativizedSpace::check_normalization`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationCheck<T> {
    pub value: T,
    pub r_max: T,
    /// Gaussian bound on the mass beyond `r_max`.
    pub tail_bound: T,
}

/// Uniform radial grid `r_i = r_min + i·dr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid<T> {
    pub r_min: T,
    pub dr: T,
    pub len: usize,
}

impl<T: Real> RadialGrid<T> {
    pub fn new(r_min: T, r_max: T, len: usize) -> Result<Self> {
        if len < 3 || !(r_max > r_min) || r_min < T::zero() {
            return Err(Error::invalid("radial grid needs r_max > r_min >= 0 and 3+ nodes"));
        }
        Ok(Self {
            r_min,
            dr: (r_max - r_min) / T::from_usize_lossy(len - 1),
            len,
        })
    }

    pub fn at(&self, i: usize) -> T {
        self.r_min + self.dr * T::from_usize_lossy(i)
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.len).map(|i| self.at(i)).collect()
    }
}

/// Both finite-difference evaluations of the relativized generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorCheck<T> {
    /// `(1/φ₀)(Δ + ρ²)(φ₀ f)`.
    pub path_a: Vec<T>,
    /// `f″ + [(n−1) coth r + 2 (ln φ₀)′] f′`.
    pub path_b: Vec<T>,
    /// Max `|A − B|` over interior nodes.
    pub max_discrepancy: T,
}

impl<T: Real> RelativizedSpace<T> {
    pub fn new(model: HyperbolicModel<T>) -> Self {
        Self { model }
    }

    pub fn model(&self) -> &HyperbolicModel<T> {
        &self.model
    }

    pub fn dim(&self) -> ModelDim {
        self.model.dim()
    }

    /// `w(r) = φ₀(r)² δ(r) |S^{n−1}|`, the radial density of `μ̃`.
    pub fn weight(&self, r: T) -> T {
        let area = self.dim().sphere_area::<T>();
        if r == T::zero() {
            return T::zero();
        }
        match self.dim() {
            ModelDim::H3 if r < T::lit(300.0) => {
                let q = x_over_sinh(r) * r.sinh();
                area * q * q
            }
            _ => {
                let n1 = T::from_u32(self.model.n() - 1).unwrap();
                area * (T::lit(2.0) * self.model.ln_phi0(r) + n1 * ln_sinh(r)).exp()
            }
        }
    }

    /// `h̃_t(x, y)`.
    pub fn relativized_kernel(&self, t: T, x: &SpacePoint<T>, y: &SpacePoint<T>) -> Result<T> {
        let d = self.model.distance(x, y);
        let ln_k = self.ln_shifted_kernel(t, d)?;
        Ok((ln_k - self.model.ln_phi0(x.r) - self.model.ln_phi0(y.r)).exp())
    }

    /// `h̃_t(o, r)`.
    pub fn relativized_kernel_origin(&self, t: T, r: T) -> Result<T> {
        Ok((self.ln_shifted_kernel(t, r)? - self.model.ln_phi0(r)).exp())
    }

    /// `ln H_t(r)`; the closed form stays finite where `H_t` underflows.
    fn ln_shifted_kernel(&self, t: T, r: T) -> Result<T> {
        if self.dim() == ModelDim::H3 && self.model.path() == KernelPath::ClosedForm {
            if !(t > T::zero()) {
                return Err(Error::NonPositive("t"));
            }
            let four_pi_t = T::lit(4.0) * T::PI() * t;
            return Ok(-T::lit(1.5) * four_pi_t.ln() + self.model.ln_phi0(r) - r * r / (T::lit(4.0) * t));
        }
        let k = self.model.heat_kernel_shifted(t, r)?;
        Ok(if k > T::zero() { k.ln() } else { T::neg_infinity() })
    }

    /// Smallest accepted spatial truncation, `6√t + 10`.
    pub fn min_r_max(t: T) -> T {
        T::lit(6.0) * t.sqrt() + T::lit(10.0)
    }

    /// Default truncation: the floor, widened until the Gaussian tail bound
    /// drops below the quadrature tolerance.
    pub fn default_r_max(&self, t: T) -> T {
        let x = (-self.model.quadrature().tolerance.ln() + T::lit(4.0)).sqrt();
        Self::min_r_max(t).max(T::lit(2.0) * t.sqrt() * x + T::lit(2.0))
    }

    /// `∫₀^{r_max} h̃_t(o, r) w(r) dr`.
    pub fn check_normalization(&self, t: T) -> Result<NormalizationCheck<T>> {
        if !(t > T::zero()) {
            return Err(Error::NonPositive("t"));
        }
        let floor = Self::min_r_max(t);
        let r_max = self.model.quadrature().r_max.unwrap_or(self.default_r_max(t));
        if r_max < floor {
            return Err(Error::invalid(format!(
                "r_max {r_max} below 6*sqrt(t)+10 = {floor}"
            )));
        }
        let panels = r_max.ceil().to_usize().unwrap_or(1);
        let gl = crate::quad::GaussLegendre::<T>::new(self.model.quadrature().node_count);
        let pts = gl.composite_points(T::zero(), r_max, panels);
        let terms: Result<Vec<T>> = pts
            .par_iter()
            .map(|&(r, w)| Ok(w * self.relativized_kernel_origin(t, r)? * self.weight(r)))
            .collect();
        Ok(NormalizationCheck {
            value: pairwise_sum(&terms?),
            r_max,
            tail_bound: gaussian_tail_bound(r_max, t),
        })
    }

    /// `(1/φ₀)(Δ + ρ²)(φ₀ f)` and `f″ + [(n−1)coth r + 2(ln φ₀)′] f′` by
    /// second-order finite differences on `grid`.
    pub fn relativized_generator_apply(
        &self,
        f: &[T],
        grid: &RadialGrid<T>,
    ) -> Result<GeneratorCheck<T>> {
        if f.len() != grid.len {
            return Err(Error::invalid("sample length differs from grid length"));
        }
        if grid.len < 66 {
            return Err(Error::GridTooCoarse(grid.len.saturating_sub(2)));
        }
        if !(grid.r_min > T::zero()) {
            return Err(Error::invalid("generator grid must start at r_min > 0"));
        }
        let n1 = T::from_u32(self.model.n() - 1).unwrap();
        let rs = grid.points();
        let phi: Vec<T> = rs.iter().map(|&r| self.model.phi0_fast(r)).collect();
        let g: Vec<T> = f.iter().zip(&phi).map(|(a, b)| *a * *b).collect();
        let (g1, g2) = derivatives(&g, grid.dr);
        let (f1, f2) = derivatives(f, grid.dr);
        let mut path_a = Vec::with_capacity(grid.len);
        let mut path_b = Vec::with_capacity(grid.len);
        for i in 0..grid.len {
            let r = rs[i];
            let c = n1 * coth(r);
            path_a.push((g2[i] + c * g1[i] + self.model.rho_sq() * g[i]) / phi[i]);
            let drift = c + T::lit(2.0) * self.model.log_phi0_derivative(r);
            path_b.push(f2[i] + drift * f1[i]);
        }
        let max_discrepancy = (1..grid.len - 1)
            .map(|i| (path_a[i] - path_b[i]).abs())
            .fold(T::zero(), T::max);
        Ok(GeneratorCheck {
            path_a,
            path_b,
            max_discrepancy,
        })
    }

    /// `|∫ h̃_t(o,y) f dμ̃ − e^{ρ²t} φ₀(o)^{−1} ∫ h_t(o,y) φ₀ f dμ|` for a radial
    /// `f` supported in `[0, support]`.
    pub fn semigroup_identity_check<F>(&self, t: T, f: F, support: T) -> Result<T>
    where
        F: Fn(T) -> T + Sync,
    {
        if !(t > T::zero()) {
            return Err(Error::NonPositive("t"));
        }
        if !(support > T::zero()) {
            return Err(Error::NonPositive("support"));
        }
        let gl = crate::quad::GaussLegendre::<T>::new(self.model.quadrature().node_count);
        let panels = support.ceil().to_usize().unwrap_or(1).max(2) * 2;
        let pts = gl.composite_points(T::zero(), support, panels);
        let area = self.dim().sphere_area::<T>();
        let n1 = self.model.n() as i32 - 1;
        let phi_o = self.model.phi0(T::zero())?;
        let pairs: Result<Vec<(T, T)>> = pts
            .par_iter()
            .map(|&(r, w)| {
                let fr = f(r);
                let lhs = w * self.relativized_kernel_origin(t, r)? * fr * self.weight(r);
                let phi = self.model.phi0_fast(r);
                let rhs = w
                    * self.model.heat_kernel(t, r)?
                    * phi
                    * fr
                    * r.sinh().powi(n1)
                    * area;
                Ok((lhs, rhs))
            })
            .collect();
        let pairs = pairs?;
        let lhs: Vec<T> = pairs.iter().map(|p| p.0).collect();
        let rhs: Vec<T> = pairs.iter().map(|p| p.1).collect();
        let rhs = (self.model.rho_sq() * t).exp() / phi_o * pairwise_sum(&rhs);
        Ok((pairwise_sum(&lhs) - rhs).abs())
    }

    /// `(argmax, max)` of `r ↦ h̃_t(o, r)`.
    pub fn sup_norm(&self, t: T) -> Result<(T, T)> {
        if !(t > T::zero()) {
            return Err(Error::NonPositive("t"));
        }
        let top = T::lit(4.0) * t.sqrt() + T::one();
        let steps = 200;
        let mut best = (T::zero(), self.relativized_kernel_origin(t, T::zero())?);
        for i in 1..=steps {
            let r = top * T::from_usize_lossy(i) / T::from_usize_lossy(steps);
            let v = self.relativized_kernel_origin(t, r)?;
            if v > best.1 {
                best = (r, v);
            }
        }
        if best.0 == T::zero() {
            // check the right-hand slope at the origin before refining
            let h = top / T::from_usize_lossy(steps);
            if self.relativized_kernel_origin(t, h / T::lit(64.0))? <= best.1 {
                return Ok(best);
            }
        }
        // golden-section refinement around the grid maximum
        let h = top / T::from_usize_lossy(steps);
        let mut a = (best.0 - h).max(T::zero());
        let mut b = best.0 + h;
        let g = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
        for _ in 0..60 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if self.relativized_kernel_origin(t, c)? > self.relativized_kernel_origin(t, d)? {
                b = d;
            } else {
                a = c;
            }
        }
        let r = (a + b) / T::lit(2.0);
        let v = self.relativized_kernel_origin(t, r)?;
        Ok(if v > best.1 { (r, v) } else { best })
    }
}

/// Upper bound `e^{−x²}(1 + 2x/√π)`, `x = R/(2√t)`, on the mass of the
/// three-dimensional Gaussian law `4πr²(4πt)^{−3/2}e^{−r²/4t}` beyond `R`.
pub fn gaussian_tail_bound<T: Real>(r: T, t: T) -> T {
    let x = r / (T::lit(2.0) * t.sqrt());
    (-x * x).exp() * (T::one() + T::lit(2.0) * x / T::PI().sqrt())
}

/// First and second derivatives by central differences, with second-order
/// one-sided stencils at both ends.
fn derivatives<T: Real>(y: &[T], h: T) -> (Vec<T>, Vec<T>) {
    let n = y.len();
    let two = T::lit(2.0);
    let mut d1 = vec![T::zero(); n];
    let mut d2 = vec![T::zero(); n];
    for i in 1..n - 1 {
        d1[i] = (y[i + 1] - y[i - 1]) / (two * h);
        d2[i] = (y[i + 1] - two * y[i] + y[i - 1]) / (h * h);
    }
    let (three, four, five) = (T::lit(3.0), T::lit(4.0), T::lit(5.0));
    d1[0] = (-three * y[0] + four * y[1] - y[2]) / (two * h);
    d1[n - 1] = (three * y[n - 1] - four * y[n - 2] + y[n - 3]) / (two * h);
    if n >= 4 {
        d2[0] = (two * y[0] - five * y[1] + four * y[2] - y[3]) / (h * h);
        d2[n - 1] = (two * y[n - 1] - five * y[n - 2] + four * y[n - 3] - y[n - 4]) / (h * h);
    }
    (d1, d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{tensor3, GaussLegendre};

    fn h3() -> RelativizedSpace<f64> {
        RelativizedSpace::new(HyperbolicModel::h3().unwrap())
    }

    fn h2() -> RelativizedSpace<f64> {
        RelativizedSpace::new(HyperbolicModel::h2().unwrap())
    }

    #[test]
    fn h3_weight_is_euclidean() {
        let s = h3();
        for &r in &[1e-6, 0.3, 1.0, 7.0, 40.0, 299.0, 400.0] {
            let want = 4.0 * std::f64::consts::PI * r * r;
            assert!(((s.weight(r) - want) / want).abs() < 1e-13, "r={r}");
        }
        assert_eq!(s.weight(0.0), 0.0);
        // H²: w(r)/r → 2π
        let w = h2().weight(1e-4) / 1e-4;
        assert!((w - std::f64::consts::TAU).abs() < 1e-6);
    }

    #[test]
    fn h3_kernel_collapses_to_gaussian() {
        let s = h3();
        let o = SpacePoint::origin();
        for &t in &[0.5_f64, 1.0, 10.0, 100.0] {
            for i in 0..50 {
                let r = 20.0 * i as f64 / 49.0;
                let y = SpacePoint::new(r, 1.0, 2.0).unwrap();
                let k = s.relativized_kernel(t, &o, &y).unwrap();
                let g = k * (4.0 * std::f64::consts::PI * t).powf(1.5) * (r * r / (4.0 * t)).exp();
                assert!((g - 1.0).abs() < 1e-12, "t={t} r={r}");
            }
        }
        let k = s.relativized_kernel(1.0, &o, &o).unwrap();
        assert!((k - 0.02244839026564582).abs() < 1e-16);
    }

    #[test]
    fn kernel_symmetry_and_rotation() {
        for s in [h3(), h2()] {
            let x = SpacePoint::new(1.2, 0.5, 0.1).unwrap();
            let y = SpacePoint::new(0.4, 2.5, 4.0).unwrap();
            let a = s.relativized_kernel(2.0, &x, &y).unwrap();
            let b = s.relativized_kernel(2.0, &y, &x).unwrap();
            assert!(((a - b) / a).abs() < 1e-14);
        }
        let s = h3();
        let o = SpacePoint::origin();
        let base = s.relativized_kernel(3.0, &o, &SpacePoint::on_pole(2.0)).unwrap();
        for &(th, ph) in &[(0.3, 1.0), (2.0, 5.0), (3.1, 0.2)] {
            let v = s
                .relativized_kernel(3.0, &o, &SpacePoint::new(2.0, th, ph).unwrap())
                .unwrap();
            assert_eq!(v, base);
        }
    }

    #[test]
    fn normalization_both_models() {
        for &t in &[1.0, 100.0] {
            let c = h3().check_normalization(t).unwrap();
            assert!((c.value - 1.0).abs() < 1e-10, "h3 t={t} {}", c.value);
            assert!(c.tail_bound < 1e-10);
            let c = h2().check_normalization(t).unwrap();
            assert!((c.value - 1.0).abs() < 1e-6, "h2 t={t} {}", c.value);
        }
    }

    #[test]
    fn normalization_rejects_short_truncation() {
        let q = crate::hkernel::QuadratureSpec {
            r_max: Some(5.0),
            ..Default::default()
        };
        let m = HyperbolicModel::new(ModelDim::H3, q).unwrap();
        let s = RelativizedSpace::new(m);
        assert!(s.check_normalization(1.0).is_err());
    }

    #[test]
    fn generator_examples() {
        let s = h3();
        for &r in &[0.5, 1.0, 5.0] {
            let drift = 2.0 * coth(r) + 2.0 * s.model().log_phi0_derivative(r);
            assert!((drift - 2.0 / r).abs() < 1e-8);
        }
        let grid = RadialGrid::new(1e-3, 4.0, 201).unwrap();
        let ones = vec![1.0; grid.len];
        for sp in [h3(), h2()] {
            let out = sp.relativized_generator_apply(&ones, &grid).unwrap();
            let worst = out.path_a[1..grid.len - 1].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            assert!(worst < 1e-3, "{worst}");
            assert!(out.path_b.iter().all(|v| *v == 0.0));
        }
        let sq: Vec<f64> = grid.points().iter().map(|r| r * r).collect();
        let out = s.relativized_generator_apply(&sq, &grid).unwrap();
        for v in &out.path_b[1..grid.len - 1] {
            assert!((v - 6.0).abs() < 1e-6);
        }
        for v in &out.path_a[1..grid.len - 1] {
            assert!((v - 6.0).abs() < 1e-2);
        }
    }

    #[test]
    fn generator_discrepancy_is_second_order() {
        for sp in [h3(), h2()] {
            let f = |r: f64| (-r * r).exp();
            let coarse = RadialGrid::new(1e-3, 5.0, 201).unwrap();
            let fine = RadialGrid::new(1e-3, 5.0, 401).unwrap();
            let fc: Vec<f64> = coarse.points().into_iter().map(f).collect();
            let ff: Vec<f64> = fine.points().into_iter().map(f).collect();
            let a = sp.relativized_generator_apply(&fc, &coarse).unwrap();
            let b = sp.relativized_generator_apply(&ff, &fine).unwrap();
            let ratio = a.max_discrepancy / b.max_discrepancy;
            assert!((3.5..=4.5).contains(&ratio), "{} ratio {ratio}", sp.dim());
        }
    }

    #[test]
    fn generator_rejects_coarse_grid() {
        let grid = RadialGrid::new(1e-3, 1.0, 40).unwrap();
        let f = vec![0.0; 40];
        assert_eq!(
            h3().relativized_generator_apply(&f, &grid),
            Err(Error::GridTooCoarse(38))
        );
    }

    #[test]
    fn semigroup_identity() {
        let bump = |r: f64| if r < 2.0 { (1.0 - 1.0 / (1.0 - r * r / 4.0)).exp() } else { 0.0 };
        for s in [h3(), h2()] {
            for &t in &[1.0, 10.0] {
                let res = s.semigroup_identity_check(t, bump, 2.0).unwrap();
                assert!(res < 1e-8, "{} t={t} {res}", s.dim());
            }
            assert_eq!(s.semigroup_identity_check(1.0, |_| 0.0, 2.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn chapman_kolmogorov_h3() {
        // ∫ h̃_1(o,z) h̃_1(z,y) dμ̃(z) = h̃_2(o,y) by a 3-D product rule
        let s = h3();
        let o = SpacePoint::origin();
        let y = SpacePoint::new(1.5, 0.7, 0.0).unwrap();
        let gl = GaussLegendre::<f64>::new(32);
        let rs = gl.composite_points(0.0, 14.0, 8);
        let th = gl.composite_points(0.0, std::f64::consts::PI, 2);
        let ph = gl.composite_points(0.0, std::f64::consts::TAU, 2);
        let total: f64 = tensor3(&rs, &th, &ph)
            .par_iter()
            .map(|(p, w)| {
                let z = SpacePoint::new(p[0], p[1], p[2]).unwrap();
                let dmu = s.weight(p[0]) / (4.0 * std::f64::consts::PI) * p[1].sin();
                w * dmu
                    * s.relativized_kernel(1.0, &o, &z).unwrap()
                    * s.relativized_kernel(1.0, &z, &y).unwrap()
            })
            .sum();
        let want = s.relativized_kernel(2.0, &o, &y).unwrap();
        assert!(((total - want) / want).abs() < 1e-5, "{total} {want}");
    }

    #[test]
    fn sup_norm_law_h3() {
        let s = h3();
        for &t in &[10.0, 100.0, 1000.0] {
            let (r, v) = s.sup_norm(t).unwrap();
            assert_eq!(r, 0.0);
            let scaled = t.powf(1.5) * v;
            assert!((scaled - (4.0 * std::f64::consts::PI).powf(-1.5)).abs() < 1e-8);
        }
    }

    #[test]
    fn tail_bound_dominates_exact_tail() {
        // exact: erfc(x) + (2/√π) x e^{-x²}
        for &(r, t) in &[(10.0, 1.0), (30.0, 10.0)] {
            let x: f64 = r / (2.0 * f64::sqrt(t));
            let exact = libm::erfc(x) + 2.0 / std::f64::consts::PI.sqrt() * x * (-x * x).exp();
            let b = gaussian_tail_bound(r, t);
            assert!(b >= exact && b < 2.0 * exact);
        }
    }
}
