//! One-dimensional harmonic-oscillator basis and the composite Gauss–Legendre
//! quadrature used for every integral over it.

use std::f64::consts::PI;

use faer::Mat;

use crate::error::{invalid, Result};

/// Composite Gauss–Legendre quadrature on `[-half_width, half_width]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Truncation of the real line, in effective Bohr radii.
    pub half_width: f64,
    /// Interior panel edges; must be strictly increasing and inside the interval.
    pub panel_breakpoints: Vec<f64>,
    pub nodes_per_panel: usize,
    /// Panels wider than this are split into equal sub-panels.
    pub max_panel_width: f64,
}

impl QuadratureSpec {
    pub const DEFAULT_NODES_PER_PANEL: usize = 96;
    pub const DEFAULT_MAX_PANEL_WIDTH: f64 = 8.0;

    /// Cutoff that covers both wells (`4d`) and twice the classical turning
    /// point of the highest basis function, rounded up to a multiple of 5.
    pub fn default_half_width(n_basis: usize, omega: f64, d: f64) -> f64 {
        let top = n_basis.saturating_sub(1);
        let turning = ((2 * top + 1) as f64 / omega).sqrt();
        let raw = (4.0 * d).max(8.0 / omega.sqrt()).max(2.0 * turning);
        (raw / 5.0).ceil() * 5.0
    }

    pub fn new(half_width: f64) -> Self {
        QuadratureSpec {
            half_width,
            panel_breakpoints: Vec::new(),
            nodes_per_panel: Self::DEFAULT_NODES_PER_PANEL,
            max_panel_width: Self::DEFAULT_MAX_PANEL_WIDTH,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(invalid(format!("half_width must be positive, got {}", self.half_width)));
        }
        if self.nodes_per_panel < 2 {
            return Err(invalid("nodes_per_panel must be at least 2"));
        }
        if self.max_panel_width.is_nan() || self.max_panel_width <= 0.0 {
            return Err(invalid("max_panel_width must be positive"));
        }
        check_breakpoints(&self.panel_breakpoints, self.half_width)
    }

    /// Same rule with twice the nodes per panel; used for convergence checks.
    pub fn doubled(&self) -> Self {
        QuadratureSpec { nodes_per_panel: 2 * self.nodes_per_panel, ..self.clone() }
    }

    /// Grid on this spec's own breakpoints merged with `extra`.
    ///
    /// Extra points outside the interval are dropped and points closer than
    /// `1e-9` to an existing edge are merged, so callers may pass raw feature
    /// locations of a potential.
    pub fn grid_with(&self, extra: &[f64]) -> Result<QuadratureGrid> {
        let merged = merge_breakpoints(&self.panel_breakpoints, extra, self.half_width);
        build_quadrature_panels(self, &merged)
    }

    pub fn grid(&self) -> Result<QuadratureGrid> {
        self.grid_with(&[])
    }
}

/// Harmonic-oscillator basis `n_0 .. n_{N-1}` at angular frequency `omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    pub n_basis: usize,
    pub omega: f64,
    pub quadrature: QuadratureSpec,
}

impl BasisSpec {
    pub const DEFAULT_N: usize = 50;
    pub const DEFAULT_N_SOFT_COULOMB: usize = 30;
    pub const DEFAULT_OMEGA: f64 = 0.25;

    /// Basis with the default quadrature for wells at `±d`.
    pub fn new(n_basis: usize, omega: f64, d: f64) -> Result<Self> {
        let spec = BasisSpec {
            n_basis,
            omega,
            quadrature: QuadratureSpec::new(QuadratureSpec::default_half_width(
                n_basis,
                omega.max(f64::MIN_POSITIVE),
                d,
            )),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_basis < 1 {
            return Err(invalid("n_basis must be at least 1"));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(invalid(format!("omega must be positive, got {}", self.omega)));
        }
        self.quadrature.validate()
    }

    /// Pair-space dimension `N(N+1)/2` of the exchange-symmetric sector.
    pub fn symmetric_dim(&self) -> usize {
        self.n_basis * (self.n_basis + 1) / 2
    }
}

/// Nodes and weights of a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Value of the `n`-th orthonormal oscillator eigenfunction at `x`.
///
/// Uses the normalized three-term recurrence
/// `n_{k+1} = sqrt(2/(k+1)) ξ n_k - sqrt(k/(k+1)) n_{k-1}` with `ξ = sqrt(ω) x`,
/// carrying a separate exponent so neither the polynomial part nor the
/// Gaussian factor can overflow or underflow on their own.
pub fn eval_ho_function(n: usize, x: f64, omega: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(invalid(format!("position must be finite, got {x}")));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(invalid(format!("omega must be positive, got {omega}")));
    }
    let mut row = vec![0.0; n + 1];
    ho_row(x, omega, &mut row);
    Ok(row[n])
}

/// Fills `out[k] = n_k(x)` for `k < out.len()`.
pub(crate) fn ho_row(x: f64, omega: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    const RESCALE: f64 = 1e150;
    let xi = omega.sqrt() * x;
    let gauss_log = -0.5 * xi * xi;
    let mut log_scale = 0.0f64;

    // Unnormalized by exp(gauss_log + log_scale) until the end.
    let mut prev = 0.0;
    let mut cur = (omega / PI).powf(0.25);
    let mut raw = Vec::with_capacity(out.len());
    let mut scales = Vec::with_capacity(out.len());
    raw.push(cur);
    scales.push(log_scale);
    for k in 0..out.len() - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
        }
        raw.push(cur);
        scales.push(log_scale);
    }
    for ((o, r), s) in out.iter_mut().zip(raw).zip(scales) {
        *o = r * (gauss_log + s).exp();
    }
}

/// Matrix `values[(q, j)] = n_j(xs[q])`.
pub fn basis_values(n_basis: usize, omega: f64, xs: &[f64]) -> Mat<f64> {
    let mut m = Mat::zeros(xs.len(), n_basis);
    let mut row = vec![0.0; n_basis];
    for (q, &x) in xs.iter().enumerate() {
        ho_row(x, omega, &mut row);
        for (j, &v) in row.iter().enumerate() {
            m[(q, j)] = v;
        }
    }
    m
}

/// Kinetic energy `<n_m| -1/2 d²/dx² |n_n>` from ladder-operator algebra.
pub fn kinetic_matrix(spec: &BasisSpec) -> Mat<f64> {
    let n = spec.n_basis;
    let w = spec.omega;
    let mut t = Mat::zeros(n, n);
    for k in 0..n {
        t[(k, k)] = w * (2 * k + 1) as f64 / 4.0;
        if k + 2 < n {
            let off = -w * (((k + 1) * (k + 2)) as f64).sqrt() / 4.0;
            t[(k, k + 2)] = off;
            t[(k + 2, k)] = off;
        }
    }
    t
}

/// Matrix of `x²` in the oscillator basis.
pub fn position_squared_matrix(spec: &BasisSpec) -> Mat<f64> {
    let n = spec.n_basis;
    let inv = 1.0 / (2.0 * spec.omega);
    let mut m = Mat::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = (2 * k + 1) as f64 * inv;
        if k + 2 < n {
            let off = (((k + 1) * (k + 2)) as f64).sqrt() * inv;
            m[(k, k + 2)] = off;
            m[(k + 2, k)] = off;
        }
    }
    m
}

/// Composite Gauss–Legendre grid over `[-X_max, X_max]` split at `breakpoints`.
///
/// `breakpoints` must be strictly increasing and strictly inside the interval;
/// coincident points would create a zero-width panel and are rejected.
pub fn build_quadrature(spec: &BasisSpec, breakpoints: &[f64]) -> Result<QuadratureGrid> {
    spec.validate()?;
    build_quadrature_panels(&spec.quadrature, breakpoints)
}

fn check_breakpoints(breakpoints: &[f64], half_width: f64) -> Result<()> {
    for &b in breakpoints {
        if !b.is_finite() || b <= -half_width || b >= half_width {
            return Err(invalid(format!("breakpoint {b} outside (-{half_width}, {half_width})")));
        }
    }
    for pair in breakpoints.windows(2) {
        if pair[1] < pair[0] {
            return Err(invalid("breakpoints must be sorted"));
        }
        if pair[1] == pair[0] {
            return Err(invalid(format!("degenerate panel at {}", pair[0])));
        }
    }
    Ok(())
}

fn build_quadrature_panels(q: &QuadratureSpec, breakpoints: &[f64]) -> Result<QuadratureGrid> {
    q.validate()?;
    check_breakpoints(breakpoints, q.half_width)?;
    let (ref_nodes, ref_weights) = gauss_legendre(q.nodes_per_panel);

    let mut edges = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(-q.half_width);
    edges.extend_from_slice(breakpoints);
    edges.push(q.half_width);

    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let pieces = ((b - a) / q.max_panel_width).ceil().max(1.0) as usize;
        let step = (b - a) / pieces as f64;
        for piece in 0..pieces {
            let lo = a + piece as f64 * step;
            let hi = if piece + 1 == pieces { b } else { lo + step };
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (t, w) in ref_nodes.iter().zip(&ref_weights) {
                nodes.push(mid + half * t);
                weights.push(half * w);
            }
        }
    }
    Ok(QuadratureGrid { nodes, weights })
}

fn merge_breakpoints(base: &[f64], extra: &[f64], half_width: f64) -> Vec<f64> {
    const MERGE: f64 = 1e-9;
    let mut all: Vec<f64> = base
        .iter()
        .chain(extra)
        .copied()
        .filter(|b| b.is_finite() && b.abs() < half_width - MERGE)
        .collect();
    all.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(all.len());
    for b in all {
        match out.last() {
            Some(&last) if b - last < MERGE => {}
            _ => out.push(b),
        }
    }
    out
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`, by Newton
/// iteration on `P_n` from Chebyshev-like initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
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
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
