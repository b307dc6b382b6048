//! Spherical functions `φ_λ` and the ground state `φ₀`.
//!
//! On `H²` the integral over the circle is evaluated in the Iwasawa height
//! `u = ⟨α, A(k·x)⟩`, and then in `s = √(r − u)`:
//!
//! `φ_λ(r) = (2/π) ∫₀^{√r} s cos(λ(r − s²)) / √(sinh(r − s²/2) sinh(s²/2)) ds`.
//!
//! The integrand is smooth (it tends to `√2` at `s = 0`), so Gauss–Legendre
//! panels converge spectrally. The direct average over the circle is kept as
//! [`HyperbolicModel::spherical_phi_k_average`].

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quad::pairwise_sum;
use crate::scalar::{coth, ln_sinh, sinc, x_over_sinh, Real};

use super::geometry::busemann_from_parts;
use super::{HyperbolicModel, ModelDim};

/// Radian phase handled by one Gauss–Legendre panel.
pub(crate) const PHASE_PER_PANEL: f64 = 10.0;

impl<T: Real> HyperbolicModel<T> {
    /// `φ_λ(r)`; even in `λ`.
    pub fn spherical_phi(&self, lambda: T, r: T) -> Result<T> {
        check_radius(r)?;
        let lambda = lambda.abs();
        match self.dim {
            ModelDim::H3 => Ok(phi_h3(lambda, r)),
            ModelDim::H2 => {
                if r == T::zero() {
                    return Ok(T::one());
                }
                let coarse = self.abel_sum(lambda, r, 1);
                let fine = self.abel_sum(lambda, r, 2);
                let err = (fine.0 - coarse.0).abs();
                let tol = self.quad.tolerance * fine.1;
                if err > tol {
                    return Err(Error::Quadrature {
                        tolerance: tol.as_f64(),
                        estimate: err.as_f64(),
                    });
                }
                Ok(fine.0)
            }
        }
    }

    /// Value and `Σ|terms|` of the Abel-form quadrature.
    fn abel_sum(&self, lambda: T, r: T, refine: usize) -> (T, T) {
        let nodes = self.abel_nodes(r, lambda * r, refine);
        let terms: Vec<T> = nodes.iter().map(|&(u, a)| a * (lambda * u).cos()).collect();
        let abs: Vec<T> = nodes.iter().map(|&(_, a)| a.abs()).collect();
        (pairwise_sum(&terms), pairwise_sum(&abs))
    }

    /// Nodes `(u_j, a_j)` with `φ_λ(r) ≈ Σ a_j cos(λ u_j)` on `H²`, accurate
    /// for `|λ| r ≤ phase`.
    pub(crate) fn abel_nodes(&self, r: T, phase: T, refine: usize) -> Vec<(T, T)> {
        if r < T::lit(1e-12) {
            return vec![(r, T::one())];
        }
        let top = r.sqrt();
        let by_phase = (phase.abs() / T::lit(PHASE_PER_PANEL)).ceil().to_usize().unwrap_or(1);
        let by_size = top.ceil().to_usize().unwrap_or(1);
        let panels = by_phase.max(by_size).max(2) * refine.max(1);
        let two = T::lit(2.0);
        let c = two / T::PI();
        self.gl
            .composite_points(T::zero(), top, panels)
            .into_iter()
            .map(|(s, w)| {
                let half = s * s / two;
                let a = r - half;
                let amp = if a > T::lit(20.0) {
                    s * (-(ln_sinh(a) + ln_sinh(half)) / two).exp()
                } else {
                    s / (a.sinh() * half.sinh()).sqrt()
                };
                (r - s * s, c * w * amp)
            })
            .collect()
    }

    /// `φ_λ(r)` as the direct average of `e^{(ρ+iλ)⟨α,A(k·x)⟩}` over the
    /// sphere of directions, with `panels` Gauss–Legendre panels in the polar
    /// angle. Only practical for moderate `r`.
    pub fn spherical_phi_k_average(&self, lambda: T, r: T, panels: usize) -> T {
        let pts = self.gl.composite_points(T::zero(), T::PI(), panels);
        let two = T::lit(2.0);
        let terms: Vec<T> = pts
            .iter()
            .map(|&(th, w)| {
                let s = (th / two).sin();
                let b = busemann_from_parts(r, s * s);
                let v = (self.rho * b).exp() * (lambda * b).cos();
                match self.dim {
                    ModelDim::H2 => w * v,
                    ModelDim::H3 => w * v * th.sin(),
                }
            })
            .collect();
        let sum = pairwise_sum(&terms);
        match self.dim {
            ModelDim::H2 => sum / T::PI(),
            ModelDim::H3 => sum / two,
        }
    }

    /// Ground spherical function `φ₀(r)`.
    pub fn phi0(&self, r: T) -> Result<T> {
        check_radius(r)?;
        match self.dim {
            ModelDim::H3 => Ok(x_over_sinh(r)),
            ModelDim::H2 => self.spherical_phi(T::zero(), r),
        }
    }

    /// `φ₀(r)` from the closed form (`H³`) or the tabulated ODE solution
    /// (`H²`). Used on hot paths; agrees with [`Self::phi0`] to ~1e-12.
    pub fn phi0_fast(&self, r: T) -> T {
        match self.dim {
            ModelDim::H3 => x_over_sinh(r),
            ModelDim::H2 => T::lit(phi0_table(2).eval(r.as_f64()).0.exp()),
        }
    }

    /// `ln φ₀(r)`, finite for all `r ≥ 0`.
    pub fn ln_phi0(&self, r: T) -> T {
        match self.dim {
            ModelDim::H3 => {
                if r > T::lit(20.0) {
                    r.ln() - ln_sinh(r)
                } else {
                    x_over_sinh(r).ln()
                }
            }
            ModelDim::H2 => T::lit(phi0_table(2).eval(r.as_f64()).0),
        }
    }

    /// `(ln φ₀)′(r)`.
    pub fn log_phi0_derivative(&self, r: T) -> T {
        match self.dim {
            ModelDim::H3 => {
                if r < T::lit(1e-3) {
                    -r / T::lit(3.0) + r * r * r / T::lit(45.0)
                } else {
                    T::one() / r - coth(r)
                }
            }
            ModelDim::H2 => T::lit(phi0_table(2).eval(r.as_f64()).1),
        }
    }

    /// Plancherel density including the calibrated normalization:
    /// `C λ²` on `H³`, `C λ tanh(πλ)` on `H²`.
    pub fn plancherel_density(&self, lambda: T) -> T {
        self.normalization * plancherel_shape(self.dim, lambda)
    }
}

pub(crate) fn plancherel_shape<T: Real>(dim: ModelDim, lambda: T) -> T {
    match dim {
        ModelDim::H3 => lambda * lambda,
        ModelDim::H2 => lambda * (T::PI() * lambda).tanh(),
    }
}

/// `sin(λr)/(λ sinh r)` with both limits handled.
pub(crate) fn phi_h3<T: Real>(lambda: T, r: T) -> T {
    sinc(lambda * r) * x_over_sinh(r)
}

fn check_radius<T: Real>(r: T) -> Result<()> {
    if r >= T::zero() && r.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("radius {r} must be finite and >= 0")))
    }
}

/// `φ₀ = ₂F₁(ρ/2, ρ/2; n/2; −sinh² r)` and its derivative, for `r ≤ 0.5`.
fn phi0_series(n: u32, r: f64) -> (f64, f64) {
    let rho = (n as f64 - 1.0) / 2.0;
    let a = rho / 2.0;
    let c = n as f64 / 2.0;
    let z = -r.sinh().powi(2);
    let dz = -(2.0 * r).sinh();
    let mut coef = 1.0;
    let mut zk = 1.0;
    let mut val = 1.0;
    let mut der = 0.0;
    for k in 0..80 {
        let kf = k as f64;
        // coef_{k+1} = coef_k (a+k)²/((c+k)(k+1))
        let next = coef * (a + kf) * (a + kf) / ((c + kf) * (kf + 1.0));
        der += next * (kf + 1.0) * zk;
        zk *= z;
        val += next * zk;
        coef = next;
        if (next * zk).abs() < 1e-18 {
            break;
        }
    }
    (val, der * dz)
}

/// `ln φ₀` and `ψ = (ln φ₀)′` tabulated on a uniform grid, from the Riccati
/// equation `ψ′ = −ψ² − (n−1) coth r ψ − ρ²` started off the hypergeometric
/// series. Cubic Hermite interpolation in between.
pub(crate) struct Phi0Table {
    h: f64,
    rho: f64,
    ln_phi: Vec<f64>,
    psi: Vec<f64>,
    dpsi: Vec<f64>,
}

const TABLE_END: f64 = 260.0;
const TABLE_STEP: f64 = 1.0 / 256.0;
const SERIES_END: f64 = 0.5;

pub(crate) fn phi0_table(n: u32) -> &'static Phi0Table {
    static H2: OnceLock<Phi0Table> = OnceLock::new();
    static H3: OnceLock<Phi0Table> = OnceLock::new();
    match n {
        2 => H2.get_or_init(|| Phi0Table::build(2)),
        _ => H3.get_or_init(|| Phi0Table::build(3)),
    }
}

impl Phi0Table {
    fn build(n: u32) -> Self {
        let h = TABLE_STEP;
        let rho = (n as f64 - 1.0) / 2.0;
        let nm1 = n as f64 - 1.0;
        let len = (TABLE_END / h).round() as usize + 1;
        let rhs = |r: f64, psi: f64| -> f64 {
            if r == 0.0 {
                // ψ ≈ 2ar with a = −ρ²/(2n); ψ′(0) = 2a
                -rho * rho / n as f64
            } else {
                -psi * psi - nm1 * coth(r) * psi - rho * rho
            }
        };
        let mut ln_phi = Vec::with_capacity(len);
        let mut psi = Vec::with_capacity(len);
        let mut dpsi = Vec::with_capacity(len);
        let switch = (SERIES_END / h).round() as usize;
        for i in 0..=switch {
            let r = i as f64 * h;
            let (v, d) = phi0_series(n, r);
            ln_phi.push(v.ln());
            psi.push(d / v);
            dpsi.push(rhs(r, d / v));
        }
        let (mut y0, mut y1) = (ln_phi[switch], psi[switch]);
        for i in switch..len - 1 {
            let r = i as f64 * h;
            let f = |r: f64, p: f64| (p, rhs(r, p));
            let k1 = f(r, y1);
            let k2 = f(r + h / 2.0, y1 + h / 2.0 * k1.1);
            let k3 = f(r + h / 2.0, y1 + h / 2.0 * k2.1);
            let k4 = f(r + h, y1 + h * k3.1);
            y0 += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            y1 += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            ln_phi.push(y0);
            psi.push(y1);
            dpsi.push(rhs(r + h, y1));
        }
        Self {
            h,
            rho,
            ln_phi,
            psi,
            dpsi,
        }
    }

    /// `(ln φ₀(r), ψ(r))`.
    pub(crate) fn eval(&self, r: f64) -> (f64, f64) {
        let last = self.ln_phi.len() - 1;
        let r_end = last as f64 * self.h;
        if r >= r_end {
            // φ₀ ~ c r e^{−ρr}
            let lp = self.ln_phi[last] + (r / r_end).ln() - self.rho * (r - r_end);
            return (lp, 1.0 / r - self.rho);
        }
        let x = r.max(0.0) / self.h;
        let i = (x.floor() as usize).min(last - 1);
        let s = x - i as f64;
        let h = self.h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let lp = h00 * self.ln_phi[i]
            + h10 * h * self.psi[i]
            + h01 * self.ln_phi[i + 1]
            + h11 * h * self.psi[i + 1];
        let ps = h00 * self.psi[i]
            + h10 * h * self.dpsi[i]
            + h01 * self.psi[i + 1]
            + h11 * h * self.dpsi[i + 1];
        (lp, ps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hkernel::QuadratureSpec;

    /// `φ₀` on `H²` is the Legendre function `P_{−1/2}(cosh r)
    /// = 2K(tanh(r/2)) / (π cosh(r/2))`; `K` via the arithmetic–geometric mean.
    fn phi0_h2_oracle(r: f64) -> f64 {
        let (mut a, mut b) = (1.0_f64, 1.0 / (r / 2.0).cosh());
        for _ in 0..60 {
            let an = (a + b) / 2.0;
            b = (a * b).sqrt();
            a = an;
        }
        let big_k = std::f64::consts::PI / (2.0 * a);
        2.0 * big_k / (std::f64::consts::PI * (r / 2.0).cosh())
    }

    fn h2() -> HyperbolicModel<f64> {
        HyperbolicModel::uncalibrated(ModelDim::H2, QuadratureSpec::default()).unwrap()
    }

    fn h3() -> HyperbolicModel<f64> {
        HyperbolicModel::uncalibrated(ModelDim::H3, QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn value_at_origin_is_one() {
        for lam in [0.0, 1.0, 7.5] {
            assert_eq!(h3().spherical_phi(lam, 0.0).unwrap(), 1.0);
            assert_eq!(h2().spherical_phi(lam, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn h3_closed_form_examples() {
        let m = h3();
        assert!((m.spherical_phi(0.0, 2.0).unwrap() - 0.5514411295435664).abs() < 1e-15);
        assert!((m.phi0(3.0).unwrap() - 0.29946470900646815).abs() < 1e-15);
        assert!((m.phi0(3.0).unwrap() - 3.0 / 3.0_f64.sinh()).abs() < 1e-15);
        // cross-check by quadrature of the integral representation
        for &(lam, r) in &[(0.0, 2.0), (1.3, 0.7), (4.0, 2.5)] {
            let q = m.spherical_phi_k_average(lam, r, 16);
            assert!((q - m.spherical_phi(lam, r).unwrap()).abs() < 1e-11, "{lam} {r}");
        }
    }

    #[test]
    fn even_in_lambda() {
        for m in [h2(), h3()] {
            let a = m.spherical_phi(1.7, 2.2).unwrap();
            let b = m.spherical_phi(-1.7, 2.2).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn h2_ground_state_matches_elliptic_oracle() {
        let m = h2();
        for &r in &[1e-6, 0.01, 0.5, 1.0, 3.0, 5.0, 10.0, 25.0, 60.0] {
            let want = phi0_h2_oracle(r);
            let got = m.phi0(r).unwrap();
            assert!(((got - want) / want).abs() < 1e-10, "r={r} got={got} want={want}");
            let fast = m.phi0_fast(r);
            assert!(((fast - want) / want).abs() < 1e-10, "fast r={r}");
        }
    }

    #[test]
    fn h2_abel_form_matches_circle_average() {
        let m = h2();
        for &(lam, r) in &[(0.0, 1.0), (1.0, 1.0), (2.5, 0.5), (0.7, 2.0)] {
            let direct = m.spherical_phi_k_average(lam, r, 64);
            let abel = m.spherical_phi(lam, r).unwrap();
            assert!((direct - abel).abs() < 1e-9, "{lam} {r}: {direct} vs {abel}");
        }
    }

    #[test]
    fn h2_self_oracle_at_four_times_nodes() {
        let m = h2();
        let fine = HyperbolicModel::<f64>::uncalibrated(
            ModelDim::H2,
            QuadratureSpec {
                node_count: 128,
                ..QuadratureSpec::default()
            },
        )
        .unwrap();
        let a = m.spherical_phi(1.0, 1.0).unwrap();
        let b = fine.spherical_phi(1.0, 1.0).unwrap();
        assert!(((a - b) / b).abs() < 1e-8);
    }

    #[test]
    fn negative_radius_rejected() {
        assert!(h3().phi0(-1.0).is_err());
        assert!(h2().spherical_phi(1.0, f64::NAN).is_err());
    }

    #[test]
    fn h3_table_reproduces_closed_form() {
        // the ODE table is only used on H², this exercises the same integrator
        let t = phi0_table(3);
        for &r in &[0.0, 0.1, 0.5, 0.77, 2.0, 10.0, 100.0, 250.0] {
            let (lp, ps) = t.eval(r);
            let want = x_over_sinh(r).ln();
            assert!((lp - want).abs() < 1e-10, "r={r}");
            let dwant = if r == 0.0 { 0.0 } else { 1.0 / r - coth(r) };
            assert!((ps - dwant).abs() < 1e-10, "r={r}");
        }
    }

    #[test]
    fn h2_log_derivative_limits() {
        let m = h2();
        assert!(m.log_phi0_derivative(0.0).abs() < 1e-14);
        // (ln φ₀)' → −ρ with a 1/r correction
        let far = m.log_phi0_derivative(200.0);
        assert!((far + 0.5).abs() < 0.01);
        // finite differences of ln φ₀
        for &r in &[0.3, 1.0, 4.0] {
            let h = 1e-5;
            let fd = (m.ln_phi0(r + h) - m.ln_phi0(r - h)) / (2.0 * h);
            assert!((fd - m.log_phi0_derivative(r)).abs() < 1e-8);
        }
    }

    #[test]
    fn plancherel_shapes() {
        assert_eq!(plancherel_shape(ModelDim::H3, 0.0_f64), 0.0);
        assert_eq!(plancherel_shape(ModelDim::H2, 0.0_f64), 0.0);
        let big = plancherel_shape(ModelDim::H2, 50.0_f64) / 50.0;
        assert!((big - 1.0).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn phi0_positive_and_bounded(r in 0.0_f64..80.0) {
                for m in [h2(), h3()] {
                    let v = m.phi0(r).unwrap();
                    prop_assert!(v > 0.0 && v <= 1.0);
                    prop_assert!(m.spherical_phi(3.0, r).unwrap().abs() <= v * (1.0 + 1e-9));
                }
            }
        }
    }
}
