//! Gauss–Legendre rules, composite panels and tensor products.

use crate::scalar::Real;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds an `n`-point rule. Nodes are found by Newton iteration on the
    /// Legendre recurrence in `f64` and then cast.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0_f64; n];
        let mut weights = vec![0.0_f64; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Single-panel integral over `[a, b]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + *w * f(mid + half * *x);
        }
        acc * half
    }

    /// Composite rule with `panels` equal panels on `[a, b]`.
    pub fn composite<F: FnMut(T) -> T>(&self, a: T, b: T, panels: usize, mut f: F) -> T {
        let panels = panels.max(1);
        let h = (b - a) / T::from_usize_lossy(panels);
        let mut acc = T::zero();
        for p in 0..panels {
            let lo = a + h * T::from_usize_lossy(p);
            acc = acc + self.integrate(lo, lo + h, &mut f);
        }
        acc
    }

    /// Node/weight pairs of the composite rule, in increasing abscissa.
    pub fn composite_points(&self, a: T, b: T, panels: usize) -> Vec<(T, T)> {
        let panels = panels.max(1);
        let h = (b - a) / T::from_usize_lossy(panels);
        let half = h / T::lit(2.0);
        let mut out = Vec::with_capacity(panels * self.len());
        for p in 0..panels {
            let mid = a + h * (T::from_usize_lossy(p) + T::lit(0.5));
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                out.push((mid + half * *x, *w * half));
            }
        }
        out
    }

    /// Node/weight pairs over consecutive break points.
    pub fn piecewise_points(&self, breaks: &[T]) -> Vec<(T, T)> {
        let mut out = Vec::with_capacity(breaks.len().saturating_sub(1) * self.len());
        for win in breaks.windows(2) {
            if win[1] > win[0] {
                out.extend(self.composite_points(win[0], win[1], 1));
            }
        }
        out
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor product of one-dimensional point sets; weights multiply.
pub fn tensor2<T: Real>(a: &[(T, T)], b: &[(T, T)]) -> Vec<([T; 2], T)> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &(x, wx) in a {
        for &(y, wy) in b {
            out.push(([x, y], wx * wy));
        }
    }
    out
}

pub fn tensor3<T: Real>(a: &[(T, T)], b: &[(T, T)], c: &[(T, T)]) -> Vec<([T; 3], T)> {
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for &(x, wx) in a {
        for &(y, wy) in b {
            for &(z, wz) in c {
                out.push(([x, y, z], wx * wy * wz));
            }
        }
    }
    out
}

/// Pairwise (cascade) summation; the order depends only on the slice length.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    if xs.len() <= 32 {
        return xs.iter().copied().fold(T::zero(), |a, b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
