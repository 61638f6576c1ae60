//! Browser bindings: potential profile, single-point solve with the
//! wavefunction on a grid, and an `L(R)` curve.

use std::cell::RefCell;
use std::rc::Rc;

use qdent_core::confinement::potential_value;
use qdent_core::observables::{evaluate_wavefunction, uniform_axis};
use qdent_core::sweep::{evaluate_point, r_grid};
use qdent_core::{classify_structure, Assembler, BasisSpec, InteractionKind, PotentialParams};
use wasm_bindgen::prelude::*;

thread_local! {
    // Two-body blocks depend only on (N, kind); rebuilding them dominates a solve.
    static ASSEMBLER: RefCell<Option<(usize, InteractionKind, Rc<Assembler>)>> = const { RefCell::new(None) };
}

fn js(e: qdent_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn assembler(n_basis: usize, interaction: &str) -> Result<Rc<Assembler>, JsError> {
    let kind: InteractionKind = interaction.parse().map_err(js)?;
    ASSEMBLER.with(|slot| {
        let mut slot = slot.borrow_mut();
        if let Some((n, k, asm)) = slot.as_ref() {
            if *n == n_basis && *k == kind {
                return Ok(asm.clone());
            }
        }
        let spec = BasisSpec::new(n_basis, BasisSpec::DEFAULT_OMEGA, PotentialParams::DEFAULT_D).map_err(js)?;
        let asm = Rc::new(Assembler::new(&spec, kind).map_err(js)?);
        *slot = Some((n_basis, kind, asm.clone()));
        Ok(asm)
    })
}

/// `V(x)` at `points` evenly spaced positions in `[-half_width, half_width]`.
#[wasm_bindgen]
pub fn potential_profile(r: f64, p: f64, half_width: f64, points: usize) -> Result<Vec<f64>, JsError> {
    let params = PotentialParams::with_shape(r, p).map_err(js)?;
    let axis = uniform_axis(half_width, points).map_err(js)?;
    Ok(axis.iter().map(|&x| potential_value(&params, x)).collect())
}

#[wasm_bindgen]
pub struct PointView {
    energy: f64,
    gap: f64,
    interaction_energy: f64,
    linear_entropy: f64,
    origin_density: f64,
    structure: String,
    grid_points: usize,
    wavefunction: Vec<f64>,
}

#[wasm_bindgen]
impl PointView {
    #[wasm_bindgen(getter)]
    pub fn energy(&self) -> f64 {
        self.energy
    }
    #[wasm_bindgen(getter)]
    pub fn gap(&self) -> f64 {
        self.gap
    }
    #[wasm_bindgen(getter)]
    pub fn interaction_energy(&self) -> f64 {
        self.interaction_energy
    }
    #[wasm_bindgen(getter)]
    pub fn linear_entropy(&self) -> f64 {
        self.linear_entropy
    }
    #[wasm_bindgen(getter)]
    pub fn origin_density(&self) -> f64 {
        self.origin_density
    }
    #[wasm_bindgen(getter)]
    pub fn structure(&self) -> String {
        self.structure.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn grid_points(&self) -> usize {
        self.grid_points
    }
    /// `Ψ(x1, x2)` row-major, `x1` along rows.
    pub fn wavefunction(&self) -> Vec<f64> {
        self.wavefunction.clone()
    }
}

/// Ground state at `(R, p)` with `Ψ` sampled on a `grid_points²` grid over
/// `[-half_width, half_width]²`.
#[wasm_bindgen]
pub fn solve_point(
    r: f64,
    p: f64,
    n_basis: usize,
    interaction: &str,
    half_width: f64,
    grid_points: usize,
) -> Result<PointView, JsError> {
    let params = PotentialParams::with_shape(r, p).map_err(js)?;
    let asm = assembler(n_basis, interaction)?;
    let res = evaluate_point(&asm, &params).map_err(js)?;
    let axis = uniform_axis(half_width, grid_points).map_err(js)?;
    let grid = evaluate_wavefunction(&res.solution, &axis).map_err(js)?;
    let mut wavefunction = Vec::with_capacity(grid_points * grid_points);
    for i in 0..grid_points {
        for j in 0..grid_points {
            wavefunction.push(grid.values[(i, j)]);
        }
    }
    Ok(PointView {
        energy: res.solution.energy,
        gap: res.solution.gap,
        interaction_energy: res.interaction_energy,
        linear_entropy: res.linear_entropy,
        origin_density: res.origin_density,
        structure: classify_structure(&params).label().to_string(),
        grid_points,
        wavefunction,
    })
}

/// `L` at `R = r_min, r_min + step, ..., r_max`. Points whose solve fails
/// come back as NaN so the curve keeps its shape.
#[wasm_bindgen]
pub fn entropy_curve(p: f64, r_min: f64, r_max: f64, step: f64, n_basis: usize, interaction: &str) -> Result<Vec<f64>, JsError> {
    let rs = r_grid(r_min, r_max, step).map_err(js)?;
    if rs[0] <= 0.0 {
        return Err(JsError::new("r_min must be positive"));
    }
    let asm = assembler(n_basis, interaction)?;
    Ok(rs
        .iter()
        .map(|&r| {
            PotentialParams::with_shape(r, p)
                .and_then(|params| evaluate_point(&asm, &params))
                .map_or(f64::NAN, |res| res.linear_entropy)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_has_two_wells() {
        let v = potential_profile(2.0, 200.0, 16.0, 33).unwrap();
        assert_eq!(v.len(), 33);
        // x = -8 and x = 8 sit at the well centers, x = 0 between them
        assert!(v[8] < -9.9 && v[24] < -9.9);
        assert!(v[16].abs() < 1e-6);
    }

    #[test]
    fn solve_point_matches_core() {
        let view = solve_point(4.0, 200.0, 20, "contact", 16.0, 33).unwrap();
        assert!((view.linear_entropy() - 0.5).abs() < 1e-3);
        assert_eq!(view.wavefunction().len(), 33 * 33);
        assert_eq!(view.structure(), "double_dot");
        let w = view.wavefunction();
        // exchange symmetric
        assert!((w[3 * 33 + 20] - w[20 * 33 + 3]).abs() < 1e-12);
    }

    #[test]
    fn curve_and_cached_assembler() {
        let l = entropy_curve(200.0, 2.0, 3.0, 0.5, 20, "contact").unwrap();
        assert_eq!(l.len(), 3);
        assert!(l.iter().all(|x| (x - 0.5).abs() < 1e-3));
        let a = assembler(20, "contact").unwrap();
        let b = assembler(20, "contact").unwrap();
        assert!(Rc::ptr_eq(&a, &b));
    }
}
