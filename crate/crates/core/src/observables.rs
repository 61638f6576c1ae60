//! Position-space views of a ground state: the full `Ψ(x1, x2)` on a grid,
//! the diagonal and antidiagonal cuts, and the origin density `|Ψ(0,0)|²`.

use faer::Mat;

use crate::basis::{basis_values, BasisSpec};
use crate::error::{invalid, Result};
use crate::spectral::GroundStateSolution;

pub const DEFAULT_AXIS_HALF_WIDTH: f64 = 20.0;
pub const DEFAULT_AXIS_POINTS: usize = 801;

/// `count` equally spaced points over `[-half_width, half_width]`.
pub fn uniform_axis(half_width: f64, count: usize) -> Result<Vec<f64>> {
    if !(half_width > 0.0 && half_width.is_finite()) || count < 2 {
        return Err(invalid(format!("axis needs half_width > 0 and >= 2 points, got {half_width}, {count}")));
    }
    let step = 2.0 * half_width / (count - 1) as f64;
    Ok((0..count).map(|i| -half_width + step * i as f64).collect())
}

/// 801 points over `[-20, 20]`.
pub fn default_axis() -> Vec<f64> {
    uniform_axis(DEFAULT_AXIS_HALF_WIDTH, DEFAULT_AXIS_POINTS).expect("constant axis is valid")
}

fn check_axis(axis: &[f64], basis: &BasisSpec) -> Result<()> {
    let hw = basis.quadrature.half_width;
    if axis.is_empty() {
        return Err(invalid("axis is empty"));
    }
    if let Some(x) = axis.iter().find(|x| !x.is_finite() || x.abs() > hw) {
        return Err(invalid(format!("axis point {x} lies outside [-{hw}, {hw}]")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct WavefunctionGrid {
    pub axis: Vec<f64>,
    /// `values[(i, j)] = Ψ(axis[i], axis[j])`.
    pub values: Mat<f64>,
    pub energy: f64,
}

impl WavefunctionGrid {
    /// Trapezoid integral of `|Ψ|²`; needs a uniform axis.
    pub fn norm_squared(&self) -> f64 {
        let w = trapezoid_weights(&self.axis);
        let mut total = 0.0;
        for (i, wi) in w.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                total += wi * wj * self.values[(i, j)].powi(2);
            }
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutProfile {
    pub positions: Vec<f64>,
    /// `|Ψ(x, x)|²`.
    pub diag_density: Vec<f64>,
    /// `|Ψ(x, -x)|²`.
    pub antidiag_density: Vec<f64>,
    /// `|Ψ(0, 0)|²`, from the expansion rather than the grid.
    pub origin_density: f64,
}

fn trapezoid_weights(axis: &[f64]) -> Vec<f64> {
    let n = axis.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let h = axis[i + 1] - axis[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    w
}

/// `Ψ = B A Bᵀ` with `B[(i, j)] = n_j(axis[i])`.
pub fn evaluate_wavefunction(sol: &GroundStateSolution, axis: &[f64]) -> Result<WavefunctionGrid> {
    check_axis(axis, &sol.basis)?;
    let b = basis_values(sol.basis.n_basis, sol.basis.omega, axis);
    let values = &b * &sol.coeffs * b.transpose();
    Ok(WavefunctionGrid { axis: axis.to_vec(), values, energy: sol.energy })
}

/// `Ψ(x, x)` and `Ψ(x, -x)` along `axis`, using `n_k(-x) = (-1)^k n_k(x)`.
fn cut_amplitudes(coeffs: &Mat<f64>, basis: &BasisSpec, axis: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let b = basis_values(basis.n_basis, basis.omega, axis);
    let ba = &b * coeffs;
    let mut diag = Vec::with_capacity(axis.len());
    let mut anti = Vec::with_capacity(axis.len());
    for i in 0..axis.len() {
        let (mut d, mut a) = (0.0, 0.0);
        for k in 0..basis.n_basis {
            let t = ba[(i, k)] * b[(i, k)];
            d += t;
            a += if k % 2 == 0 { t } else { -t };
        }
        diag.push(d);
        anti.push(a);
    }
    (diag, anti)
}

/// `Ψ(0, 0) = Σ A_jk n_j(0) n_k(0)`; only even indices contribute.
pub fn origin_amplitude(coeffs: &Mat<f64>, basis: &BasisSpec) -> f64 {
    let b = basis_values(basis.n_basis, basis.omega, &[0.0]);
    let n = basis.n_basis;
    let mut total = 0.0;
    for j in (0..n).step_by(2) {
        for k in (0..n).step_by(2) {
            total += b[(0, j)] * coeffs[(j, k)] * b[(0, k)];
        }
    }
    total
}

pub fn origin_density(sol: &GroundStateSolution) -> f64 {
    origin_amplitude(&sol.coeffs, &sol.basis).powi(2)
}

pub fn cuts(sol: &GroundStateSolution, axis: &[f64]) -> Result<CutProfile> {
    check_axis(axis, &sol.basis)?;
    let (diag, anti) = cut_amplitudes(&sol.coeffs, &sol.basis, axis);
    Ok(CutProfile {
        positions: axis.to_vec(),
        diag_density: diag.iter().map(|v| v * v).collect(),
        antidiag_density: anti.iter().map(|v| v * v).collect(),
        origin_density: origin_density(sol),
    })
}

/// Contact `<U> = ∫ |Ψ(x, x)|² dx` by the trapezoid rule on `axis`.
///
/// Independent of the quadrature used to build the Hamiltonian; a uniform
/// axis spanning the whole cutoff makes it converge spectrally.
pub fn contact_energy_from_cut(sol: &GroundStateSolution, axis: &[f64]) -> Result<f64> {
    check_axis(axis, &sol.basis)?;
    let (diag, _) = cut_amplitudes(&sol.coeffs, &sol.basis, axis);
    Ok(trapezoid_weights(axis).iter().zip(&diag).map(|(w, d)| w * d * d).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginRank {
    /// Position in the input list.
    pub index: usize,
    pub origin_density: f64,
    pub linear_entropy: f64,
}

/// Solutions ranked by `|Ψ(0,0)|²`, largest first, each with its `L`.
pub fn origin_density_ordering(solutions: &[&GroundStateSolution]) -> Result<Vec<OriginRank>> {
    if solutions.is_empty() {
        return Err(invalid("need at least one solution"));
    }
    let mut ranks = solutions
        .iter()
        .enumerate()
        .map(|(index, s)| {
            Ok(OriginRank {
                index,
                origin_density: origin_density(s),
                linear_entropy: crate::entanglement::entanglement_of(&s.coeffs)?.linear_entropy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ranks.sort_by(|a, b| b.origin_density.total_cmp(&a.origin_density).then(a.index.cmp(&b.index)));
    Ok(ranks)
}

/// True when ordering by origin density (descending) is ordering by `L`
/// ascending, i.e. the two rankings are exact reverses.
pub fn ranking_is_reversed(ranks: &[OriginRank]) -> bool {
    ranks.windows(2).all(|w| w[0].linear_entropy < w[1].linear_entropy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::Assembler;
    use crate::confinement::PotentialParams;
    use crate::interactions::{coulomb_expectation, InteractionKind};
    use crate::spectral::solve_ground;
    use crate::Parity;

    fn solve(n: usize, r: f64, p: f64) -> GroundStateSolution {
        let spec = BasisSpec::new(n, 0.25, 8.0).unwrap();
        let asm = Assembler::new(&spec, InteractionKind::Contact).unwrap();
        solve_ground(&asm.assemble(&PotentialParams::with_shape(r, p).unwrap()).unwrap()).unwrap()
    }

    fn product_state(n: usize) -> GroundStateSolution {
        let mut sol = solve(n, 4.0, 2.0);
        sol.coeffs = Mat::zeros(n, n);
        sol.coeffs[(0, 0)] = 1.0;
        sol.parity = Parity::Even;
        sol
    }

    #[test]
    fn axis_construction() {
        let a = default_axis();
        assert_eq!(a.len(), 801);
        assert_eq!(a[0], -20.0);
        assert!((a[400]).abs() < 1e-14);
        assert!((a[800] - 20.0).abs() < 1e-12);
        assert!(uniform_axis(0.0, 5).is_err());
        assert!(uniform_axis(1.0, 1).is_err());
    }

    #[test]
    fn product_state_is_gaussian_blob() {
        let sol = product_state(6);
        let axis = uniform_axis(5.0, 11).unwrap();
        let wf = evaluate_wavefunction(&sol, &axis).unwrap();
        for (i, &x) in axis.iter().enumerate() {
            for (j, &y) in axis.iter().enumerate() {
                let want = crate::basis::eval_ho_function(0, x, 0.25).unwrap()
                    * crate::basis::eval_ho_function(0, y, 0.25).unwrap();
                assert!((wf.values[(i, j)] - want).abs() < 1e-14);
            }
        }
        let c = cuts(&sol, &axis).unwrap();
        let n00 = (0.25 / std::f64::consts::PI).sqrt();
        assert!((c.origin_density - n00 * n00).abs() < 1e-14);
    }

    #[test]
    fn rejects_axis_outside_cutoff() {
        let sol = product_state(4);
        assert!(evaluate_wavefunction(&sol, &[0.0, 41.0]).is_err());
        assert!(cuts(&sol, &[]).is_err());
    }

    #[test]
    fn grid_is_symmetric_and_normalized() {
        let sol = solve(24, 15.0, 7.0);
        let axis = uniform_axis(20.0, 201).unwrap();
        let wf = evaluate_wavefunction(&sol, &axis).unwrap();
        for i in 0..axis.len() {
            for j in 0..axis.len() {
                assert!((wf.values[(i, j)] - wf.values[(j, i)]).abs() < 1e-12);
            }
        }
        assert!((wf.norm_squared() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn cuts_are_even_and_match_grid() {
        let sol = solve(24, 12.0, 7.0);
        let axis = uniform_axis(20.0, 81).unwrap();
        let c = cuts(&sol, &axis).unwrap();
        let wf = evaluate_wavefunction(&sol, &axis).unwrap();
        let n = axis.len();
        for i in 0..n {
            assert!((c.diag_density[i] - c.diag_density[n - 1 - i]).abs() < 1e-10);
            assert!((c.antidiag_density[i] - c.antidiag_density[n - 1 - i]).abs() < 1e-10);
            assert!((c.diag_density[i] - wf.values[(i, i)].powi(2)).abs() < 1e-12);
            assert!((c.antidiag_density[i] - wf.values[(i, n - 1 - i)].powi(2)).abs() < 1e-12);
        }
        assert!((c.origin_density - wf.values[(n / 2, n / 2)].powi(2)).abs() < 1e-12);
    }

    #[test]
    fn contact_energy_two_paths_agree() {
        for (r, p) in [(12.0, 7.0), (30.0, 2.0)] {
            let sol = solve(30, r, p);
            let spec = sol.basis.clone();
            let fac = crate::interactions::TwoBodyFactorization::build(&spec, InteractionKind::Contact).unwrap();
            let tensor = coulomb_expectation(&sol.coeffs, &fac).unwrap();
            let axis = uniform_axis(spec.quadrature.half_width, 1601).unwrap();
            let grid = contact_energy_from_cut(&sol, &axis).unwrap();
            assert!((tensor - grid).abs() < 1e-6 * tensor, "{tensor} vs {grid}");
        }
    }

    #[test]
    fn ordering_single_and_ties() {
        let a = solve(12, 15.0, 2.0);
        let ranks = origin_density_ordering(&[&a]).unwrap();
        assert_eq!(ranks.len(), 1);
        assert!(ranking_is_reversed(&ranks));
        assert!(origin_density_ordering(&[]).is_err());
    }
}
