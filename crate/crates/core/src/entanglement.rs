//! Reduced density matrix, Schmidt spectrum and linear entropy.
//!
//! Everything is computed in coefficient space. For
//! `Ψ(x1, x2) = Σ A_jk n_j(x1) n_k(x2)` over an orthonormal basis the
//! one-particle reduced density matrix is exactly `ρ = A Aᵀ`.

use faer::{Mat, Side};

use crate::basis::{basis_values, BasisSpec};
use crate::error::{invalid, Error, Result};
use crate::interactions::check_normalized;

const TRACE_TOLERANCE: f64 = 1e-8;
const NEGATIVE_CLIP: f64 = 1e-12;
/// Smallest fraction of a reference state's norm the basis must capture.
pub const MIN_NORM_CAPTURE: f64 = 0.999;

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    /// `L = 1 - Tr ρ²`.
    pub linear_entropy: f64,
    /// Eigenvalues of `ρ`, descending, tiny negatives clipped to zero.
    pub schmidt_values: Vec<f64>,
    pub purity: f64,
}

/// `ρ = A Aᵀ` for a normalized coefficient matrix.
pub fn reduced_density_from_coeffs(coeffs: &Mat<f64>) -> Result<Mat<f64>> {
    if coeffs.nrows() != coeffs.ncols() {
        return Err(invalid(format!("coefficient matrix must be square, got {}x{}", coeffs.nrows(), coeffs.ncols())));
    }
    check_normalized(coeffs)?;
    let rho = coeffs * coeffs.transpose();
    // Symmetrize away rounding so the eigensolver sees an exactly symmetric input.
    Ok(Mat::from_fn(rho.nrows(), rho.ncols(), |i, j| 0.5 * (rho[(i, j)] + rho[(j, i)])))
}

pub fn linear_entropy(rho: &Mat<f64>) -> Result<EntanglementReport> {
    if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
        return Err(invalid("density matrix must be square and non-empty"));
    }
    let trace: f64 = (0..rho.nrows()).map(|i| rho[(i, i)]).sum();
    if (trace - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::TraceDeviation { trace });
    }
    let mut values = rho
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    for v in values.iter_mut() {
        if *v < -NEGATIVE_CLIP {
            return Err(Error::NegativeEigenvalue { value: *v });
        }
        *v = v.max(0.0);
    }
    values.sort_by(|a, b| b.total_cmp(a));
    let purity: f64 = values.iter().map(|v| v * v).sum();
    Ok(EntanglementReport { linear_entropy: 1.0 - purity, schmidt_values: values, purity })
}

/// Shorthand for `linear_entropy(reduced_density_from_coeffs(A))`.
pub fn entanglement_of(coeffs: &Mat<f64>) -> Result<EntanglementReport> {
    linear_entropy(&reduced_density_from_coeffs(coeffs)?)
}

/// Analytic two-electron states used as entanglement references.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceState {
    /// `exp(-α x1²) exp(-α x2²)`, an exact product state.
    FactorizedGaussian { alpha: f64 },
    /// `g(x1-c) g(x2+c) + g(x1+c) g(x2-c)` with `g(x) = exp(-α x²)`.
    TripletGaussian { center: f64, alpha: f64 },
}

impl ReferenceState {
    /// `exp(-2x1²) exp(-2x2²)`.
    pub fn factorized() -> Self {
        ReferenceState::FactorizedGaussian { alpha: 2.0 }
    }

    /// Unit-width Gaussians, `exp(-(x∓c)²/2)`, at `±center`.
    pub fn triplet(center: f64) -> Self {
        ReferenceState::TripletGaussian { center, alpha: 0.5 }
    }

    fn validate(&self) -> Result<()> {
        let (alpha, center) = match *self {
            ReferenceState::FactorizedGaussian { alpha } => (alpha, 0.0),
            ReferenceState::TripletGaussian { center, alpha } => (alpha, center),
        };
        if !(alpha > 0.0 && alpha.is_finite()) || !center.is_finite() {
            return Err(invalid(format!("invalid reference state {self:?}")));
        }
        Ok(())
    }

    /// `<g_a|g_b>` for `g_a(x) = exp(-α (x-a)²)`.
    fn overlap(alpha: f64, a: f64, b: f64) -> f64 {
        (std::f64::consts::PI / (2.0 * alpha)).sqrt() * (-0.5 * alpha * (a - b).powi(2)).exp()
    }

    /// Exact squared norm of the unnormalized state.
    pub fn norm_squared(&self) -> f64 {
        match *self {
            ReferenceState::FactorizedGaussian { alpha } => Self::overlap(alpha, 0.0, 0.0).powi(2),
            ReferenceState::TripletGaussian { center, alpha } => {
                let same = Self::overlap(alpha, center, center);
                let cross = Self::overlap(alpha, center, -center);
                2.0 * (same * same + cross * cross)
            }
        }
    }

    /// Exact linear entropy of the normalized state.
    ///
    /// With normalized orbitals of overlap `s`, the triplet-type state has
    /// Schmidt weights proportional to `(1 ± s)²`.
    pub fn exact_linear_entropy(&self) -> f64 {
        match *self {
            ReferenceState::FactorizedGaussian { .. } => 0.0,
            ReferenceState::TripletGaussian { center, alpha } => {
                let s = Self::overlap(alpha, center, -center) / Self::overlap(alpha, center, center);
                let (p, m) = ((1.0 + s).powi(2), (1.0 - s).powi(2));
                let (lp, lm) = (p / (p + m), m / (p + m));
                1.0 - lp * lp - lm * lm
            }
        }
    }

    /// Unnormalized expansion coefficients `A_jk = <n_j n_k|Ψ>`.
    pub fn project(&self, spec: &BasisSpec) -> Result<Mat<f64>> {
        self.validate()?;
        spec.validate()?;
        let grid = spec.quadrature.grid()?;
        let b = basis_values(spec.n_basis, spec.omega, &grid.nodes);
        let orbital = |alpha: f64, c: f64| -> Vec<f64> {
            (0..spec.n_basis)
                .map(|j| {
                    grid.nodes
                        .iter()
                        .zip(&grid.weights)
                        .enumerate()
                        .map(|(q, (&x, &w))| w * b[(q, j)] * (-alpha * (x - c).powi(2)).exp())
                        .sum()
                })
                .collect()
        };
        let n = spec.n_basis;
        Ok(match *self {
            ReferenceState::FactorizedGaussian { alpha } => {
                let c = orbital(alpha, 0.0);
                Mat::from_fn(n, n, |j, k| c[j] * c[k])
            }
            ReferenceState::TripletGaussian { center, alpha } => {
                let l = orbital(alpha, -center);
                let r = orbital(alpha, center);
                Mat::from_fn(n, n, |j, k| r[j] * l[k] + l[j] * r[k])
            }
        })
    }
}

/// Linear entropy of a reference state after projection onto the basis.
pub fn entropy_of_reference(state: &ReferenceState, spec: &BasisSpec) -> Result<f64> {
    let mut a = state.project(spec)?;
    let captured = a.squared_norm_l2() / state.norm_squared();
    if captured < MIN_NORM_CAPTURE {
        return Err(Error::BasisInsufficient { captured });
    }
    let norm = a.norm_l2();
    a = Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] / norm);
    Ok(entanglement_of(&a)?.linear_entropy)
}
