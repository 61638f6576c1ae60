//! Dense symmetric eigensolution of the assembled Hamiltonian.

use faer::{Mat, Side};

use crate::assembly::{HamiltonianMatrix, Parity};
use crate::basis::{position_squared_matrix, BasisSpec};
use crate::confinement::Confinement;
use crate::error::{invalid, Error, Result};
use crate::interactions::InteractionKind;

/// Gaps below this are reported as near-degenerate.
pub const NEAR_DEGENERATE_GAP: f64 = 1e-8;
const RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct GroundStateSolution {
    pub energy: f64,
    /// Symmetric coefficient matrix `A` with `|A|_F = 1`.
    pub coeffs: Mat<f64>,
    /// `E_1 - E_0` within the symmetric subspace (both parities).
    pub gap: f64,
    pub parity: Parity,
    pub residual: f64,
    pub near_degenerate: bool,
    /// `sqrt(<x1²>)`; compared against a quarter of the quadrature cutoff.
    pub rms_position: f64,
    pub spread_exceeds_box: bool,
    pub basis: BasisSpec,
    pub confinement: Confinement,
    pub kind: InteractionKind,
}

#[derive(Debug, Clone)]
pub struct Eigenstate {
    pub energy: f64,
    pub coeffs: Mat<f64>,
    pub parity: Parity,
}

struct BlockEigen {
    values: Vec<f64>,
    vectors: Option<Mat<f64>>,
}

fn block_eigen(m: &Mat<f64>, vectors: bool) -> Result<BlockEigen> {
    if m.nrows() == 0 {
        return Ok(BlockEigen { values: Vec::new(), vectors: None });
    }
    if vectors {
        let evd = m.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
        let values = evd.S().column_vector().iter().copied().collect();
        Ok(BlockEigen { values, vectors: Some(evd.U().to_owned()) })
    } else {
        let values = m.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
        Ok(BlockEigen { values, vectors: None })
    }
}

/// Flips the vector so its largest-magnitude entry of `A` is positive.
fn fix_sign(h: &HamiltonianMatrix, parity: Parity, v: &mut [f64]) {
    let pairs = h.map.block_pairs(parity);
    let mut best = 0.0;
    let mut sign = 1.0;
    for (&(a, b), &x) in pairs.iter().zip(v.iter()) {
        let mag = (x * crate::assembly::SymmetricSubspaceMap::normalization(a, b)).abs();
        if mag > best {
            best = mag;
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn residual(block: &Mat<f64>, energy: f64, v: &[f64]) -> f64 {
    let n = v.len();
    let mut sum = 0.0;
    for i in 0..n {
        let mut hv = 0.0;
        for j in 0..n {
            hv += block[(i, j)] * v[j];
        }
        sum += (hv - energy * v[i]).powi(2);
    }
    sum.sqrt()
}

fn column(m: &Mat<f64>, j: usize) -> Vec<f64> {
    (0..m.nrows()).map(|i| m[(i, j)]).collect()
}

fn rms_position(basis: &BasisSpec, coeffs: &Mat<f64>) -> f64 {
    let x2 = position_squared_matrix(basis);
    let ax = coeffs.transpose() * &x2;
    let mut tr = 0.0;
    for i in 0..coeffs.ncols() {
        for k in 0..coeffs.nrows() {
            tr += ax[(i, k)] * coeffs[(k, i)];
        }
    }
    tr.max(0.0).sqrt()
}

/// Lowest eigenpair of `H`, unpacked to the coefficient matrix.
pub fn solve_ground(h: &HamiltonianMatrix) -> Result<GroundStateSolution> {
    let even = block_eigen(&h.even, true)?;
    let odd = block_eigen(&h.odd, false)?;

    let even_low = even.values.first().copied().unwrap_or(f64::INFINITY);
    let odd_low = odd.values.first().copied().unwrap_or(f64::INFINITY);
    let (parity, energy) = if odd_low < even_low { (Parity::Odd, odd_low) } else { (Parity::Even, even_low) };
    if !energy.is_finite() {
        return Err(Error::Eigensolver("no eigenvalues".into()));
    }
    let mut candidates: Vec<f64> = even.values.iter().take(2).chain(odd.values.iter().take(2)).copied().collect();
    candidates.sort_by(f64::total_cmp);
    let gap = candidates.get(1).map_or(f64::INFINITY, |e| e - energy).max(0.0);

    let vectors = match parity {
        Parity::Even => even.vectors.expect("requested"),
        Parity::Odd => block_eigen(&h.odd, true)?.vectors.expect("requested"),
    };
    let mut v = column(&vectors, 0);
    fix_sign(h, parity, &mut v);
    let block = h.block(parity);
    let res = residual(block, energy, &v);
    if res > RESIDUAL_TOLERANCE * h.frobenius_norm() {
        return Err(Error::Eigensolver(format!("residual {res:.3e} too large")));
    }
    let near_degenerate = gap < NEAR_DEGENERATE_GAP;
    if near_degenerate {
        log::warn!("near-degenerate ground state: gap {gap:.3e}; keeping the lower state");
    }
    let coeffs = h.map.unpack(parity, &v);
    let rms = rms_position(&h.basis, &coeffs);
    Ok(GroundStateSolution {
        energy,
        gap,
        parity,
        residual: res,
        near_degenerate,
        rms_position: rms,
        spread_exceeds_box: rms > h.basis.quadrature.half_width / 4.0,
        coeffs,
        basis: h.basis.clone(),
        confinement: h.confinement,
        kind: h.kind,
    })
}

/// The `k` lowest eigenpairs across both parity blocks, ascending; ties keep
/// even parity first.
pub fn spectrum_slice(h: &HamiltonianMatrix, k: usize) -> Result<Vec<Eigenstate>> {
    if k == 0 || k > h.dim() {
        return Err(invalid(format!("k must be in 1..={}, got {k}", h.dim())));
    }
    let blocks = [
        (Parity::Even, block_eigen(&h.even, true)?),
        (Parity::Odd, block_eigen(&h.odd, true)?),
    ];
    let mut order: Vec<(f64, usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(b, (_, e))| e.values.iter().enumerate().map(move |(j, &v)| (v, b, j)))
        .collect();
    // Stable sort keeps even-block entries first on exact ties.
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    order.truncate(k);
    let norm = h.frobenius_norm();
    order
        .into_iter()
        .map(|(energy, b, j)| {
            let (parity, e) = &blocks[b];
            let mut v = column(e.vectors.as_ref().expect("requested"), j);
            fix_sign(h, *parity, &mut v);
            let res = residual(h.block(*parity), energy, &v);
            if res > RESIDUAL_TOLERANCE * norm {
                return Err(Error::Eigensolver(format!("residual {res:.3e} too large")));
            }
            Ok(Eigenstate { energy, coeffs: h.map.unpack(*parity, &v), parity: *parity })
        })
        .collect()
}
