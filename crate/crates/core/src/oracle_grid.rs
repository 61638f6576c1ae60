//! Brute-force real-space validator.
//!
//! Both coordinates live on the same uniform grid of `M` points with
//! spacing `h`; the kinetic energy is the three-point stencil, the potential
//! is sampled pointwise and the contact interaction is `1/h` on grid points
//! with `x1 = x2`. Nothing here touches the oscillator basis.
//!
//! The lowest exchange-symmetric state is found by Davidson iteration in the
//! eigenbasis of the one-body grid operator, where the non-interacting part
//! is diagonal and doubles as an exact preconditioner. A state is an `M x M`
//! symmetric coefficient matrix `C` with `ψ = Φ C Φᵀ`.

use faer::{Mat, Side};

use crate::confinement::Confinement;
use crate::error::{invalid, Error, Result};
use crate::interactions::{soft_coulomb_kernel, InteractionKind};

pub const MAX_POINTS: usize = 401;
const MAX_ITERATIONS: usize = 400;
const MAX_SUBSPACE: usize = 24;
const RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GridOracleSpec {
    pub half_width: f64,
    /// Points per axis, odd so that `x = 0` is a node.
    pub point_count: usize,
    pub confinement: Confinement,
    pub kind: InteractionKind,
    /// Scales the two-body term; zero gives the separable limit.
    pub interaction_strength: f64,
}

impl GridOracleSpec {
    pub fn new(confinement: Confinement, kind: InteractionKind) -> Self {
        GridOracleSpec { half_width: 20.0, point_count: MAX_POINTS, confinement, kind, interaction_strength: 1.0 }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.point_count - 1) as f64
    }

    pub fn axis(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.point_count).map(|i| -self.half_width + h * i as f64).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(invalid(format!("half_width must be positive, got {}", self.half_width)));
        }
        if self.point_count < 3 || self.point_count.is_multiple_of(2) || self.point_count > MAX_POINTS {
            return Err(invalid(format!("point_count must be odd in 3..={MAX_POINTS}, got {}", self.point_count)));
        }
        if !self.interaction_strength.is_finite() {
            return Err(invalid("interaction strength must be finite"));
        }
        if let Some(p) = self.confinement.params() {
            p.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub energy: f64,
    pub linear_entropy: f64,
    pub axis: Vec<f64>,
    /// `Ψ(x_i, x_j)`, normalized so that `h² Σ |Ψ|² = 1`.
    pub wavefunction: Mat<f64>,
    pub iterations: usize,
    pub residual: f64,
}

struct GridOperator {
    /// One-body eigenvectors as columns.
    phi: Mat<f64>,
    eps: Vec<f64>,
    /// Two-body term sampled on the grid, already scaled.
    u: Mat<f64>,
}

impl GridOperator {
    fn build(spec: &GridOracleSpec) -> Result<Self> {
        let m = spec.point_count;
        let h = spec.spacing();
        let axis = spec.axis();
        let t = 1.0 / (h * h);
        let one_body = Mat::<f64>::from_fn(m, m, |i, j| {
            if i == j {
                t + spec.confinement.value(axis[i])
            } else if i.abs_diff(j) == 1 {
                -0.5 * t
            } else {
                0.0
            }
        });
        let evd = one_body.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
        let eps = evd.S().column_vector().iter().copied().collect();
        let g = spec.interaction_strength;
        let u = match spec.kind {
            InteractionKind::Contact => Mat::from_fn(m, m, |i, j| if i == j { g / h } else { 0.0 }),
            InteractionKind::SoftCoulomb => Mat::from_fn(m, m, |i, j| g * soft_coulomb_kernel(axis[i] - axis[j])),
        };
        Ok(GridOperator { phi: evd.U().to_owned(), eps, u })
    }

    fn diagonal(&self, a: usize, b: usize) -> f64 {
        self.eps[a] + self.eps[b]
    }

    fn apply(&self, c: &Mat<f64>) -> Mat<f64> {
        let m = c.nrows();
        let psi = &self.phi * c * self.phi.transpose();
        let upsi = Mat::from_fn(m, m, |i, j| self.u[(i, j)] * psi[(i, j)]);
        let mut out = self.phi.transpose() * &upsi * &self.phi;
        for a in 0..m {
            for b in 0..m {
                out[(a, b)] += self.diagonal(a, b) * c[(a, b)];
            }
        }
        symmetrize(&mut out);
        out
    }
}

fn symmetrize(c: &mut Mat<f64>) {
    for a in 0..c.nrows() {
        for b in a + 1..c.ncols() {
            let v = 0.5 * (c[(a, b)] + c[(b, a)]);
            c[(a, b)] = v;
            c[(b, a)] = v;
        }
    }
}

fn dot(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let mut s = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            s += a[(i, j)] * b[(i, j)];
        }
    }
    s
}

fn axpy(y: &mut Mat<f64>, alpha: f64, x: &Mat<f64>) {
    for j in 0..y.ncols() {
        for i in 0..y.nrows() {
            y[(i, j)] += alpha * x[(i, j)];
        }
    }
}

fn combine(basis: &[Mat<f64>], coeffs: &[f64]) -> Mat<f64> {
    let mut out = Mat::zeros(basis[0].nrows(), basis[0].ncols());
    for (v, &y) in basis.iter().zip(coeffs) {
        axpy(&mut out, y, v);
    }
    out
}

/// Gram-Schmidt against `basis` twice; `None` if nothing new remains.
fn orthonormalize(mut t: Mat<f64>, basis: &[Mat<f64>]) -> Option<Mat<f64>> {
    for _ in 0..2 {
        for v in basis {
            let c = dot(v, &t);
            axpy(&mut t, -c, v);
        }
    }
    let norm = t.norm_l2();
    if norm < 1e-12 {
        return None;
    }
    Some(Mat::from_fn(t.nrows(), t.ncols(), |i, j| t[(i, j)] / norm))
}

/// Lowest exchange-symmetric eigenpair of the discretized two-electron problem.
pub fn oracle_ground(spec: &GridOracleSpec) -> Result<OracleResult> {
    spec.validate()?;
    let op = GridOperator::build(spec)?;
    let m = spec.point_count;

    let mut start = Mat::zeros(m, m);
    start[(0, 0)] = 1.0;
    let mut basis = vec![start];
    let mut images = vec![op.apply(&basis[0])];
    let mut residual_norm = f64::INFINITY;
    let mut theta = f64::NAN;
    let mut ritz = basis[0].clone();

    for iteration in 1..=MAX_ITERATIONS {
        let k = basis.len();
        let g = Mat::<f64>::from_fn(k, k, |i, j| 0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i])));
        let evd = g.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
        theta = evd.S().column_vector()[0];
        let y: Vec<f64> = (0..k).map(|i| evd.U()[(i, 0)]).collect();
        ritz = combine(&basis, &y);
        let mut r = combine(&images, &y);
        axpy(&mut r, -theta, &ritz);
        residual_norm = r.norm_l2();
        let scale = theta.abs().max(1.0);
        if residual_norm < RESIDUAL_TOLERANCE * scale {
            return Ok(finish(spec, &op, ritz, theta, iteration, residual_norm));
        }
        let correction = Mat::from_fn(m, m, |a, b| {
            let denom = op.diagonal(a, b) - theta;
            let denom = if denom.abs() < 1e-10 { 1e-10f64.copysign(denom) } else { denom };
            -r[(a, b)] / denom
        });
        if basis.len() >= MAX_SUBSPACE {
            // Thick restart on the two lowest Ritz vectors.
            let y2: Vec<f64> = (0..k).map(|i| evd.U()[(i, 1)]).collect();
            let second = combine(&basis, &y2);
            let second_image = combine(&images, &y2);
            let first_image = combine(&images, &y);
            basis = vec![ritz.clone(), second];
            images = vec![first_image, second_image];
        }
        let Some(mut next) = orthonormalize(correction, &basis) else {
            return Ok(finish(spec, &op, ritz, theta, iteration, residual_norm));
        };
        symmetrize(&mut next);
        images.push(op.apply(&next));
        basis.push(next);
    }
    let _ = (theta, ritz);
    Err(Error::NotConverged { iterations: MAX_ITERATIONS, residual: residual_norm })
}

fn finish(spec: &GridOracleSpec, op: &GridOperator, c: Mat<f64>, energy: f64, iterations: usize, residual: f64) -> OracleResult {
    let norm = c.norm_l2();
    let c = Mat::from_fn(c.nrows(), c.ncols(), |i, j| c[(i, j)] / norm);
    // ψ is ℓ²-normalized, so the reduced density matrix is ψ ψᵀ and its
    // purity is |C²|_F² in the one-body eigenbasis.
    let c2 = &c * &c;
    let linear_entropy = 1.0 - c2.squared_norm_l2();
    let h = spec.spacing();
    let psi = &op.phi * &c * op.phi.transpose();
    let mut wavefunction = Mat::from_fn(psi.nrows(), psi.ncols(), |i, j| psi[(i, j)] / h);
    // Same sign convention as the basis solver: largest amplitude positive.
    let (mut best, mut sign) = (0.0, 1.0);
    for j in 0..wavefunction.ncols() {
        for i in 0..wavefunction.nrows() {
            let v: f64 = wavefunction[(i, j)];
            if v.abs() > best {
                best = v.abs();
                sign = v.signum();
            }
        }
    }
    if sign < 0.0 {
        wavefunction = Mat::from_fn(psi.nrows(), psi.ncols(), |i, j| -wavefunction[(i, j)]);
    }
    OracleResult { energy, linear_entropy, axis: spec.axis(), wavefunction, iterations, residual }
}

/// Order-2 Richardson extrapolation from results at spacings `h` and `h/2`.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}
