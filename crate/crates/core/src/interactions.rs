//! Two-body interaction kernels and their matrix elements over the
//! oscillator product basis.
//!
//! Element convention: `(j1, j2, k1, k2)` is
//! `∫∫ n_j1(x1) n_k1(x1) U(x1, x2) n_j2(x2) n_k2(x2) dx1 dx2`,
//! i.e. `<j1 j2|U|k1 k2>` with the first index of each pair on particle 1.

use std::fmt;
use std::str::FromStr;

use faer::Mat;

use crate::basis::{basis_values, ho_row, BasisSpec, QuadratureGrid};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InteractionKind {
    /// `δ(x1 - x2)`
    Contact,
    /// `1 / sqrt(1 + (x1 - x2)²)`
    SoftCoulomb,
}

impl InteractionKind {
    pub fn label(self) -> &'static str {
        match self {
            InteractionKind::Contact => "contact",
            InteractionKind::SoftCoulomb => "soft_coulomb",
        }
    }

    /// Basis size used by default for this interaction.
    pub fn default_basis_size(self) -> usize {
        match self {
            InteractionKind::Contact => BasisSpec::DEFAULT_N,
            InteractionKind::SoftCoulomb => BasisSpec::DEFAULT_N_SOFT_COULOMB,
        }
    }
}

impl fmt::Display for InteractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InteractionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contact" => Ok(InteractionKind::Contact),
            "soft_coulomb" => Ok(InteractionKind::SoftCoulomb),
            other => Err(invalid(format!("unknown interaction {other:?} (contact | soft_coulomb)"))),
        }
    }
}

pub fn soft_coulomb_kernel(separation: f64) -> f64 {
    1.0 / (1.0 + separation * separation).sqrt()
}

/// Largest basis for which the soft-Coulomb tensor is materialized.
pub const SOFT_COULOMB_MAX_BASIS: usize = 40;

/// Rank-Q factorization of the contact tensor: `U_{j1 j2 k1 k2} = Σ_q B_{q j1} B_{q j2} B_{q k1} B_{q k2}`.
#[derive(Debug, Clone)]
pub struct ContactFactorization {
    pub grid: QuadratureGrid,
    /// `n_j(x_q) · w_q^{1/4}`
    pub node_values: Mat<f64>,
}

/// Dense soft-Coulomb tensor, `values[(j1·N + k1, j2·N + k2)]`.
#[derive(Debug, Clone)]
pub struct SoftCoulombTensor {
    pub n_basis: usize,
    pub values: Mat<f64>,
}

#[derive(Debug, Clone)]
pub enum TwoBodyFactorization {
    Contact(ContactFactorization),
    SoftCoulomb(SoftCoulombTensor),
}

const DOUBLING_TOLERANCE: f64 = 1e-9;

impl TwoBodyFactorization {
    /// Builds the interaction on the basis's own (potential-free) grid and
    /// verifies it against a grid with twice the nodes per panel.
    pub fn build(spec: &BasisSpec, kind: InteractionKind) -> Result<Self> {
        spec.validate()?;
        let grid = spec.quadrature.grid()?;
        let fine = spec.quadrature.doubled().grid()?;
        match kind {
            InteractionKind::Contact => {
                let coarse = pair_density_gram(spec, &grid);
                let refined = pair_density_gram(spec, &fine);
                check_doubling("contact pair densities", &coarse, &refined)?;
                let mut b = basis_values(spec.n_basis, spec.omega, &grid.nodes);
                for (q, w) in grid.weights.iter().enumerate() {
                    let s = w.powf(0.25);
                    for j in 0..spec.n_basis {
                        b[(q, j)] *= s;
                    }
                }
                Ok(TwoBodyFactorization::Contact(ContactFactorization { grid, node_values: b }))
            }
            InteractionKind::SoftCoulomb => {
                if spec.n_basis > SOFT_COULOMB_MAX_BASIS {
                    return Err(invalid(format!(
                        "soft Coulomb tensor limited to n_basis <= {SOFT_COULOMB_MAX_BASIS}, got {}",
                        spec.n_basis
                    )));
                }
                let coarse = soft_coulomb_diagonal(spec, &grid);
                let refined = soft_coulomb_diagonal(spec, &fine);
                check_doubling("soft Coulomb densities", &coarse, &refined)?;
                Ok(TwoBodyFactorization::SoftCoulomb(soft_coulomb_tensor(spec, &grid)))
            }
        }
    }

    pub fn kind(&self) -> InteractionKind {
        match self {
            TwoBodyFactorization::Contact(_) => InteractionKind::Contact,
            TwoBodyFactorization::SoftCoulomb(_) => InteractionKind::SoftCoulomb,
        }
    }

    pub fn n_basis(&self) -> usize {
        match self {
            TwoBodyFactorization::Contact(c) => c.node_values.ncols(),
            TwoBodyFactorization::SoftCoulomb(t) => t.n_basis,
        }
    }

    pub fn element(&self, j1: usize, j2: usize, k1: usize, k2: usize) -> f64 {
        match self {
            TwoBodyFactorization::Contact(c) => {
                let b = &c.node_values;
                (0..b.nrows()).map(|q| b[(q, j1)] * b[(q, j2)] * b[(q, k1)] * b[(q, k2)]).sum()
            }
            TwoBodyFactorization::SoftCoulomb(t) => {
                let n = t.n_basis;
                t.values[(j1 * n + k1, j2 * n + k2)]
            }
        }
    }
}

fn check_doubling(what: &'static str, coarse: &[f64], fine: &[f64]) -> Result<()> {
    let diff: f64 = coarse.iter().zip(fine).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = fine.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let rel = diff / norm;
    if rel > DOUBLING_TOLERANCE {
        return Err(Error::Convergence { what, relative_change: rel, tolerance: DOUBLING_TOLERANCE });
    }
    Ok(())
}

/// `∫ n_a² n_b²` for all `a, b`; a representative slice of the contact tensor.
fn pair_density_gram(spec: &BasisSpec, grid: &QuadratureGrid) -> Vec<f64> {
    let n = spec.n_basis;
    let b = basis_values(n, spec.omega, &grid.nodes);
    let mut out = vec![0.0; n * n];
    for (q, w) in grid.weights.iter().enumerate() {
        for a in 0..n {
            let wa = w * b[(q, a)] * b[(q, a)];
            for c in 0..n {
                out[a * n + c] += wa * b[(q, c)] * b[(q, c)];
            }
        }
    }
    out
}

/// Soft-Coulomb elements `(a, b, a, b)` for all `a, b`.
fn soft_coulomb_diagonal(spec: &BasisSpec, grid: &QuadratureGrid) -> Vec<f64> {
    let n = spec.n_basis;
    let b = basis_values(n, spec.omega, &grid.nodes);
    let q = grid.len();
    let dens = Mat::<f64>::from_fn(q, n, |i, a| grid.weights[i] * b[(i, a)] * b[(i, a)]);
    let kernel = Mat::<f64>::from_fn(q, q, |i, k| soft_coulomb_kernel(grid.nodes[i] - grid.nodes[k]));
    let m = dens.transpose() * (&kernel * &dens);
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for c in 0..n {
            out.push(m[(a, c)]);
        }
    }
    out
}

fn soft_coulomb_tensor(spec: &BasisSpec, grid: &QuadratureGrid) -> SoftCoulombTensor {
    let n = spec.n_basis;
    let b = basis_values(n, spec.omega, &grid.nodes);
    let q = grid.len();
    let f = Mat::<f64>::from_fn(q, n * n, |i, jk| {
        let (j, k) = (jk / n, jk % n);
        grid.weights[i] * b[(i, j)] * b[(i, k)]
    });
    let kernel = Mat::<f64>::from_fn(q, q, |i, k| soft_coulomb_kernel(grid.nodes[i] - grid.nodes[k]));
    let mut values = f.transpose() * (&kernel * &f);
    // Exact symmetry W[(jk),(lm)] = W[(lm),(jk)]; remove roundoff asymmetry.
    for r in 0..n * n {
        for c in r + 1..n * n {
            let avg = 0.5 * (values[(r, c)] + values[(c, r)]);
            values[(r, c)] = avg;
            values[(c, r)] = avg;
        }
    }
    SoftCoulombTensor { n_basis: n, values }
}

fn check_indices(spec: &BasisSpec, idx: [usize; 4]) -> Result<()> {
    if let Some(bad) = idx.iter().find(|&&i| i >= spec.n_basis) {
        return Err(invalid(format!("basis index {bad} out of range (n_basis = {})", spec.n_basis)));
    }
    Ok(())
}

/// `∫ n_j1 n_j2 n_k1 n_k2 dx` by direct quadrature on the basis grid.
pub fn contact_element(j1: usize, j2: usize, k1: usize, k2: usize, spec: &BasisSpec) -> Result<f64> {
    check_indices(spec, [j1, j2, k1, k2])?;
    let grid = spec.quadrature.grid()?;
    let top = j1.max(j2).max(k1).max(k2) + 1;
    let mut row = vec![0.0; top];
    Ok(grid.integrate(|x| {
        ho_row(x, spec.omega, &mut row);
        row[j1] * row[j2] * row[k1] * row[k2]
    }))
}

/// Soft-Coulomb element by tensor-product quadrature over the basis grid.
pub fn soft_coulomb_element(j1: usize, j2: usize, k1: usize, k2: usize, spec: &BasisSpec) -> Result<f64> {
    check_indices(spec, [j1, j2, k1, k2])?;
    let grid = spec.quadrature.grid()?;
    let top = j1.max(j2).max(k1).max(k2) + 1;
    let mut row = vec![0.0; top];
    let mut one = Vec::with_capacity(grid.len());
    let mut two = Vec::with_capacity(grid.len());
    for (&x, &w) in grid.nodes.iter().zip(&grid.weights) {
        ho_row(x, spec.omega, &mut row);
        one.push(w * row[j1] * row[k1]);
        two.push(w * row[j2] * row[k2]);
    }
    let mut total = 0.0;
    for (a, &xa) in grid.nodes.iter().enumerate() {
        let inner: f64 =
            grid.nodes.iter().zip(&two).map(|(&xb, &t)| soft_coulomb_kernel(xa - xb) * t).sum();
        total += one[a] * inner;
    }
    Ok(total)
}

pub(crate) fn check_normalized(coeffs: &Mat<f64>) -> Result<()> {
    let norm = coeffs.norm_l2();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::Unnormalized { norm });
    }
    Ok(())
}

/// `<Ψ|U|Ψ>` for `Ψ = Σ A_jk n_j(x1) n_k(x2)`.
///
/// For the contact kind this is the quadrature of `|Ψ(x, x)|²`.
pub fn coulomb_expectation(coeffs: &Mat<f64>, tensor: &TwoBodyFactorization) -> Result<f64> {
    let n = tensor.n_basis();
    if coeffs.nrows() != n || coeffs.ncols() != n {
        return Err(invalid(format!(
            "coefficient matrix is {}x{}, interaction built for n_basis = {n}",
            coeffs.nrows(),
            coeffs.ncols()
        )));
    }
    check_normalized(coeffs)?;
    match tensor {
        TwoBodyFactorization::Contact(c) => {
            let b = &c.node_values;
            let ba = b * coeffs;
            let mut total = 0.0;
            for q in 0..b.nrows() {
                let diag: f64 = (0..n).map(|k| ba[(q, k)] * b[(q, k)]).sum();
                total += diag * diag;
            }
            Ok(total)
        }
        TwoBodyFactorization::SoftCoulomb(t) => {
            let mut total = 0.0;
            for j1 in 0..n {
                for k1 in 0..n {
                    let r = j1 * n + k1;
                    let mut inner = 0.0;
                    for j2 in 0..n {
                        let a = coeffs[(j1, j2)];
                        if a == 0.0 {
                            continue;
                        }
                        for k2 in 0..n {
                            inner += a * coeffs[(k1, k2)] * t.values[(r, j2 * n + k2)];
                        }
                    }
                    total += inner;
                }
            }
            Ok(total)
        }
    }
}
