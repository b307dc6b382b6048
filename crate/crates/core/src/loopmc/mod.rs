//! Monte Carlo of the radial part of the infinite Brownian loop, and the
//! Brownian bridge of length `L` it arises from.
//!
//! The loop started at the origin has radial generator
//! `d²/dr² + ((n−1) coth r + 2(ln φ₀)′) d/dr`; on `H³` the drift is `2/r`
//! and the radial part is a 3-dimensional Bessel process.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::doob::RelativizedSpace;
use crate::error::{Error, Result};
use crate::hkernel::{HyperbolicModel, ModelDim};
use crate::quad::{pairwise_sum, GaussLegendre};
use crate::scalar::{coth, Real};


/// Simulation settings. Output is a function of `(seed, worker_count)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCConfig<T> {
    pub n_paths: usize,
    pub dt: T,
    pub t_end: T,
    pub r0: T,
    pub seed: u64,
    pub worker_count: usize,
}

impl<T: Real> Default for MCConfig<T> {
    fn default() -> Self {
        Self {
            n_paths: 100_000,
            dt: T::lit(1e-3),
            t_end: T::one(),
            r0: T::zero(),
            seed: 0x5eed,
            worker_count: 1,
        }
    }
}

impl<T: Real> MCConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 1000 {
            return Err(Error::invalid(format!("n_paths = {} is below 1000", self.n_paths)));
        }
        if !(self.dt > T::zero()) {
            return Err(Error::NonPositive("dt"));
        }
        if self.dt > T::lit(1e-2) {
            return Err(Error::invalid(format!("dt = {} exceeds 1e-2", self.dt)));
        }
        if !(self.t_end > T::zero()) || !self.t_end.is_finite() {
            return Err(Error::NonPositive("t_end"));
        }
        if !(self.r0 >= T::zero()) || !self.r0.is_finite() {
            return Err(Error::invalid(format!("r0 = {} must be finite and >= 0", self.r0)));
        }
        if self.worker_count == 0 {
            return Err(Error::NonPositive("worker_count"));
        }
        Ok(())
    }

    /// Number of Euler steps, `round(t_end/dt)`, at least one.
    pub fn steps(&self) -> usize {
        steps_to(self.t_end, self.dt)
    }
}

fn steps_to<T: Real>(t: T, dt: T) -> usize {
    (t / dt).round().to_usize().unwrap_or(0).max(1)
}

/// Radii at one time, with the reflection count of the run.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample<T> {
    pub t: T,
    radii: Vec<T>,
    sorted: Vec<T>,
    /// Steps that started inside `r < √(2dt)` and were taken as a
    /// Euclidean `n`-dimensional increment.
    pub pole_steps: u64,
    /// Euler steps that crossed `r = 0` and were reflected.
    pub reflections: u64,
}

impl<T: Real> EmpiricalSample<T> {
    pub fn from_radii(t: T, radii: Vec<T>) -> Self {
        let mut sorted = radii.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        Self {
            t,
            radii,
            sorted,
            pole_steps: 0,
            reflections: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Radii in path order.
    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    /// `mean(r^k)`.
    pub fn moment(&self, k: i32) -> T {
        if self.radii.is_empty() {
            return T::nan();
        }
        let v: Vec<T> = self.radii.iter().map(|r| r.powi(k)).collect();
        pairwise_sum(&v) / T::from_usize_lossy(v.len())
    }

    /// Standard error of `mean(r^k)`.
    pub fn moment_stderr(&self, k: i32) -> T {
        let n = self.radii.len();
        if n < 2 {
            return T::nan();
        }
        let m = self.moment(k);
        let v: Vec<T> = self.radii.iter().map(|r| (r.powi(k) - m).powi(2)).collect();
        let var = pairwise_sum(&v) / T::from_usize_lossy(n - 1);
        (var / T::from_usize_lossy(n)).sqrt()
    }

    /// Fraction of radii `≤ x`.
    pub fn ecdf(&self, x: T) -> T {
        if self.sorted.is_empty() {
            return T::nan();
        }
        let k = self.sorted.partition_point(|r| *r <= x);
        T::from_usize_lossy(k) / T::from_usize_lossy(self.sorted.len())
    }

    /// `bins` equal cells on `[0, r_max]` as `(lo, hi, count)`; radii past
    /// `r_max` are not counted.
    pub fn histogram(&self, bins: usize, r_max: T) -> Vec<(T, T, usize)> {
        let bins = bins.max(1);
        let w = r_max / T::from_usize_lossy(bins);
        let mut counts = vec![0usize; bins];
        for &r in &self.radii {
            if r >= T::zero() && r <= r_max {
                let i = (r / w).floor().to_usize().unwrap_or(0).min(bins - 1);
                counts[i] += 1;
            }
        }
        counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let lo = w * T::from_usize_lossy(i);
                (lo, lo + w, c)
            })
            .collect()
    }
}

/// `(n−1) coth r + 2 (ln φ₀)′(r)`; `2/r` on `H³`.
pub fn loop_drift<T: Real>(m: &HyperbolicModel<T>, r: T) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::invalid(format!("drift is singular at r = {r}; reflect at the pole")));
    }
    Ok(drift(m, Process::Loop, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Process {
    /// The `φ₀`-relativized motion.
    Loop,
    /// Radial part of plain Brownian motion, drift `(n−1) coth r`.
    Plain,
}

fn drift<T: Real>(m: &HyperbolicModel<T>, process: Process, r: T) -> T {
    let n1 = T::from_u32(m.n() - 1).unwrap();
    match (process, m.dim()) {
        (Process::Loop, ModelDim::H3) => T::lit(2.0) / r,
        (Process::Loop, _) => n1 * coth(r) + T::lit(2.0) * m.log_phi0_derivative(r),
        (Process::Plain, _) => n1 * coth(r),
    }
}

struct WorkerOutput<T> {
    snapshots: Vec<Vec<T>>,
    pole_steps: u64,
    reflections: u64,
    drift_sum: T,
    drift_count: u64,
}

/// Runs one worker's block of paths. `stops` are step indices, ascending.
fn run_worker<T: Real>(
    m: &HyperbolicModel<T>,
    cfg: &MCConfig<T>,
    process: Process,
    worker: usize,
    paths: usize,
    stops: &[usize],
    drift_above: Option<T>,
) -> WorkerOutput<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(worker as u64);
    let n = m.n() as usize;
    let dt = cfg.dt;
    let sd = (T::lit(2.0) * dt).sqrt();
    let last = stops.last().copied().unwrap_or(0);
    let mut out = WorkerOutput {
        snapshots: vec![Vec::with_capacity(paths); stops.len()],
        pole_steps: 0,
        reflections: 0,
        drift_sum: T::zero(),
        drift_count: 0,
    };
    let normal = |rng: &mut ChaCha8Rng| T::lit(rng.sample::<f64, _>(StandardNormal));
    for _ in 0..paths {
        let mut r = cfg.r0;
        let mut next = 0;
        while next < stops.len() && stops[next] == 0 {
            out.snapshots[next].push(r);
            next += 1;
        }
        for k in 1..=last {
            if r < sd {
                // near the pole the radial law is that of |x| for x a
                // Euclidean motion in R^n
                let mut s = T::zero();
                for i in 0..n {
                    let z = sd * normal(&mut rng) + if i == 0 { r } else { T::zero() };
                    s = s + z * z;
                }
                r = s.sqrt();
                out.pole_steps += 1;
            } else {
                let b = drift(m, process, r);
                if let Some(th) = drift_above {
                    if r > th {
                        out.drift_sum = out.drift_sum + b;
                        out.drift_count += 1;
                    }
                }
                r = r + b * dt + sd * normal(&mut rng);
                if r < T::zero() {
                    r = -r;
                    out.reflections += 1;
                }
            }
            while next < stops.len() && stops[next] == k {
                out.snapshots[next].push(r);
                next += 1;
            }
        }
    }
    out
}

fn run<T: Real>(
    m: &HyperbolicModel<T>,
    cfg: &MCConfig<T>,
    process: Process,
    stops: &[usize],
    drift_above: Option<T>,
) -> Vec<WorkerOutput<T>> {
    let w = cfg.worker_count;
    let base = cfg.n_paths / w;
    let extra = cfg.n_paths % w;
    (0..w)
        .into_par_iter()
        .map(|i| {
            let paths = base + usize::from(i < extra);
            run_worker(m, cfg, process, i, paths, stops, drift_above)
        })
        .collect()
}

/// Radii of the loop at each of `times` (each a multiple of `dt` after
/// rounding, and at most `t_end`).
pub fn simulate_loop_at<T: Real>(
    m: &HyperbolicModel<T>,
    cfg: &MCConfig<T>,
    times: &[T],
) -> Result<Vec<EmpiricalSample<T>>> {
    simulate_process_at(m, cfg, Process::Loop, times)
}

/// As [`simulate_loop_at`] for either process.
pub fn simulate_process_at<T: Real>(
    m: &HyperbolicModel<T>,
    cfg: &MCConfig<T>,
    process: Process,
    times: &[T],
) -> Result<Vec<EmpiricalSample<T>>> {
    cfg.validate()?;
    if times.is_empty() {
        return Err(Error::invalid("no sampling times"));
    }
    let mut order: Vec<usize> = (0..times.len()).collect();
    for &t in times {
        if !(t >= T::zero()) || t > cfg.t_end * (T::one() + T::lit(1e-12)) {
            return Err(Error::invalid(format!("sampling time {t} outside [0, t_end]")));
        }
    }
    order.sort_by(|&a, &b| times[a].partial_cmp(&times[b]).unwrap());
    let stops: Vec<usize> = order
        .iter()
        .map(|&i| (times[i] / cfg.dt).round().to_usize().unwrap_or(0))
        .collect();
    let outs = run(m, cfg, process, &stops, None);
    let pole: u64 = outs.iter().map(|o| o.pole_steps).sum();
    let refl: u64 = outs.iter().map(|o| o.reflections).sum();
    let mut samples: Vec<Option<EmpiricalSample<T>>> = vec![None; times.len()];
    for (j, &i) in order.iter().enumerate() {
        let radii: Vec<T> = outs.iter().flat_map(|o| o.snapshots[j].iter().copied()).collect();
        let mut s = EmpiricalSample::from_radii(T::from_usize_lossy(stops[j]) * cfg.dt, radii);
        s.pole_steps = pole;
        s.reflections = refl;
        samples[i] = Some(s);
    }
    Ok(samples.into_iter().map(|s| s.unwrap()).collect())
}

/// Terminal radii of the loop at `t_end`.
pub fn simulate_loop<T: Real>(m: &HyperbolicModel<T>, cfg: &MCConfig<T>) -> Result<EmpiricalSample<T>> {
    cfg.validate()?;
    let mut v = simulate_loop_at(m, cfg, &[T::from_usize_lossy(cfg.steps()) * cfg.dt])?;
    Ok(v.pop().unwrap())
}

/// Mean drift seen along simulated paths while `r > threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftSignature<T> {
    pub threshold: T,
    pub loop_mean: T,
    pub plain_mean: T,
    pub loop_samples: u64,
    pub plain_samples: u64,
}

/// Simulates the loop and plain Brownian motion with the same settings and
/// averages the drift over steps taken beyond `threshold`.
pub fn drift_signature<T: Real>(
    m: &HyperbolicModel<T>,
    cfg: &MCConfig<T>,
    threshold: T,
) -> Result<DriftSignature<T>> {
    cfg.validate()?;
    let stops = [cfg.steps()];
    let mean = |process| {
        let outs = run(m, cfg, process, &stops, Some(threshold));
        let s = outs.iter().fold(T::zero(), |a, o| a + o.drift_sum);
        let c: u64 = outs.iter().map(|o| o.drift_count).sum();
        (if c > 0 { s / T::from_u64(c).unwrap() } else { T::nan() }, c)
    };
    let (loop_mean, loop_samples) = mean(Process::Loop);
    let (plain_mean, plain_samples) = mean(Process::Plain);
    Ok(DriftSignature {
        threshold,
        loop_mean,
        plain_mean,
        loop_samples,
        plain_samples,
    })
}

/// `h̃_t(o, r) w(r)`, the radial law of the loop at time `t`.
pub fn loop_marginal_density<T: Real>(s: &RelativizedSpace<T>, t: T, r: T) -> Result<T> {
    if r < T::zero() {
        return Err(Error::invalid(format!("radius {r} is negative")));
    }
    if r == T::zero() {
        if !(t > T::zero()) {
            return Err(Error::NonPositive("t"));
        }
        return Ok(T::zero());
    }
    Ok(s.relativized_kernel_origin(t, r)? * s.weight(r))
}

/// Cumulative distribution of a radial density, tabulated on cells and
/// interpolated by cubic Hermite segments.
#[derive(Debug, Clone)]
pub struct RadialCdf<T> {
    r: Vec<T>,
    cdf: Vec<T>,
    pdf: Vec<T>,
}

impl<T: Real> RadialCdf<T> {
    /// Tabulates `∫₀^r density` on `cells` equal cells of `[0, r_max]`.
    pub fn tabulate<F>(density: F, r_max: T, cells: usize) -> Result<Self>
    where
        F: Fn(T) -> Result<T> + Sync,
    {
        if !(r_max > T::zero()) {
            return Err(Error::NonPositive("r_max"));
        }
        let cells = cells.max(1);
        let h = r_max / T::from_usize_lossy(cells);
        let gl = GaussLegendre::<T>::new(8);
        let r: Vec<T> = (0..=cells).map(|i| h * T::from_usize_lossy(i)).collect();
        let pdf: Result<Vec<T>> = r.par_iter().map(|&x| density(x)).collect();
        let pieces: Result<Vec<T>> = (0..cells)
            .into_par_iter()
            .map(|i| {
                let mut s = T::zero();
                for (x, w) in gl.composite_points(r[i], r[i + 1], 1) {
                    s = s + w * density(x)?;
                }
                Ok(s)
            })
            .collect();
        let mut cdf = Vec::with_capacity(cells + 1);
        let mut acc = T::zero();
        cdf.push(acc);
        for p in pieces? {
            acc = acc + p;
            cdf.push(acc);
        }
        Ok(Self { r, cdf, pdf: pdf? })
    }

    /// Mass captured on `[0, r_max]`.
    pub fn total(&self) -> T {
        *self.cdf.last().unwrap()
    }

    pub fn eval(&self, x: T) -> T {
        if !(x > T::zero()) {
            return T::zero();
        }
        let last = self.r.len() - 1;
        if x >= self.r[last] {
            return self.total().min(T::one());
        }
        let h = self.r[1] - self.r[0];
        let i = (x / h).floor().to_usize().unwrap_or(0).min(last - 1);
        let s = (x - self.r[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = three * s2 - two * s3;
        let h11 = s3 - s2;
        let v = h00 * self.cdf[i] + h10 * h * self.pdf[i] + h01 * self.cdf[i + 1] + h11 * h * self.pdf[i + 1];
        v.max(T::zero()).min(T::one())
    }

    /// Smallest tabulated `r` with `F(r) ≥ u`, by bisection.
    pub fn quantile(&self, u: T) -> T {
        let last = self.r.len() - 1;
        let k = self.cdf.partition_point(|c| *c < u);
        if k == 0 {
            return T::zero();
        }
        if k > last {
            return self.r[last];
        }
        let (mut lo, mut hi) = (self.r[k - 1], self.r[k]);
        for _ in 0..60 {
            let mid = (lo + hi) / T::lit(2.0);
            if self.eval(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) / T::lit(2.0)
    }
}

/// Tabulated CDF of [`loop_marginal_density`] on `[0, default_r_max(t)]`.
pub fn loop_marginal_cdf<T: Real>(s: &RelativizedSpace<T>, t: T) -> Result<RadialCdf<T>> {
    if !(t > T::zero()) {
        return Err(Error::NonPositive("t"));
    }
    let r_max = s.default_r_max(t);
    let cells = (r_max / T::lit(0.02)).ceil().to_usize().unwrap_or(1).clamp(200, 2000);
    RadialCdf::tabulate(|r| loop_marginal_density(s, t, r), r_max, cells)
}

/// `h_t(r) h_{L−t}(r) / h_L(0) · δ(r) |S^{n−1}|`, the radial law at time
/// `t` of the bridge of length `L` from the origin back to itself.
pub fn bridge_radial_density<T: Real>(m: &HyperbolicModel<T>, l: T, t: T, r: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::NonPositive("t"));
    }
    if !(t < l) {
        return Err(Error::invalid(format!("bridge time t = {t} must be below L = {l}")));
    }
    if r < T::zero() {
        return Err(Error::invalid(format!("radius {r} is negative")));
    }
    if r == T::zero() {
        return Ok(T::zero());
    }
    // the e^{ρ²·} factors of the shifted kernels cancel
    let num = m.heat_kernel_shifted(t, r)? * m.heat_kernel_shifted(l - t, r)?;
    let den = m.heat_kernel_shifted(l, T::zero())?;
    Ok(num / den * m.haar_density(r) * m.dim().sphere_area::<T>())
}

/// `∫₀^R` of the bridge density, with `R` past the bridge's Gaussian scale.
pub fn bridge_mass<T: Real>(m: &HyperbolicModel<T>, l: T, t: T) -> Result<T> {
    if !(t > T::zero()) || !(t < l) {
        return bridge_radial_density(m, l, t, T::one());
    }
    let tau = t * (l - t) / l;
    let r_max = T::lit(12.0) * tau.sqrt() + T::lit(10.0);
    let panels = (r_max / T::lit(0.5)).ceil().to_usize().unwrap_or(1);
    let gl = GaussLegendre::<T>::new(m.quadrature().node_count.max(8));
    let terms: Result<Vec<T>> = gl
        .composite_points(T::zero(), r_max, panels)
        .par_iter()
        .map(|&(r, w)| Ok(w * bridge_radial_density(m, l, t, r)?))
        .collect();
    Ok(pairwise_sum(&terms?))
}

/// For each `L`, `sup_r |bridge − loop|` over `[0, r_max]` on a 401-point
/// grid; `r_max` defaults to `5 + 4√t`.
pub fn bridge_to_loop_gap<T: Real>(
    s: &RelativizedSpace<T>,
    l_grid: &[T],
    t: T,
    r_max: Option<T>,
) -> Result<Vec<(T, T)>> {
    if !(t > T::zero()) {
        return Err(Error::NonPositive("t"));
    }
    let top = r_max.unwrap_or(T::lit(5.0) + T::lit(4.0) * t.sqrt());
    if !(top > T::zero()) {
        return Err(Error::NonPositive("r_max"));
    }
    let rs: Vec<T> = (0..=400).map(|i| top * T::from_usize_lossy(i) / T::lit(400.0)).collect();
    let looped: Vec<T> = rs
        .par_iter()
        .map(|&r| loop_marginal_density(s, t, r))
        .collect::<Result<_>>()?;
    l_grid
        .iter()
        .map(|&l| {
            let gap = rs
                .par_iter()
                .zip(&looped)
                .map(|(&r, &q)| Ok((bridge_radial_density(s.model(), l, t, r)? - q).abs()))
                .collect::<Result<Vec<T>>>()?
                .into_iter()
                .fold(T::zero(), T::max);
            Ok((l, gap))
        })
        .collect()
}

/// Kolmogorov–Smirnov distance `sup_x |F_n(x) − F(x)|`.
pub fn ks_distance<T: Real, F: Fn(T) -> T>(e: &EmpiricalSample<T>, cdf: F) -> Result<T> {
    let xs = e.sorted();
    if xs.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = T::from_usize_lossy(xs.len());
    let mut d = T::zero();
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let above = T::from_usize_lossy(i + 1) / n - f;
        let below = f - T::from_usize_lossy(i) / n;
        d = d.max(above).max(below);
    }
    Ok(d.min(T::one()))
}
