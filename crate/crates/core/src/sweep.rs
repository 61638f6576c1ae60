//! Parameter sweeps over `(R, p)`, derivative scans, extremum and crossing
//! detection, and basis convergence studies.

use std::path::PathBuf;

use faer::Mat;

use crate::assembly::Assembler;
use crate::basis::{basis_values, BasisSpec};
use crate::confinement::{classify_structure, potential_range_derivative, PotentialParams, StructureClass};
use crate::entanglement::{entanglement_of, reduced_density_from_coeffs};
use crate::error::{invalid, Result};
use crate::interactions::{coulomb_expectation, InteractionKind};
use crate::observables::origin_density;
use crate::spectral::{solve_ground, GroundStateSolution};

/// Default derivative step.
pub const DEFAULT_DERIVATIVE_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    Off,
    /// Central differences from extra solves at `R ± step`; forward
    /// differences where `R - step` would not be positive.
    Auxiliary { step: f64 },
    /// Differences between neighbouring sweep points. Endpoints get
    /// one-sided differences only when asked.
    Grid { one_sided_edges: bool },
}

#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub r_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub basis: BasisSpec,
    pub v0: f64,
    pub d: f64,
    pub kind: InteractionKind,
    pub derivative: DerivativeMode,
    /// Worker cap; `None` uses every available core.
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

impl SweepPlan {
    /// Default physics and basis for `kind` over the given grid, no derivatives.
    pub fn new(r_values: Vec<f64>, p_values: Vec<f64>, kind: InteractionKind) -> Result<Self> {
        let basis = BasisSpec::new(kind.default_basis_size(), BasisSpec::DEFAULT_OMEGA, PotentialParams::DEFAULT_D)?;
        let plan = SweepPlan {
            r_values,
            p_values,
            basis,
            v0: PotentialParams::DEFAULT_V0,
            d: PotentialParams::DEFAULT_D,
            kind,
            derivative: DerivativeMode::Off,
            threads: None,
            cache_dir: None,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        self.basis.validate()?;
        if self.r_values.is_empty() || self.p_values.is_empty() {
            return Err(invalid("sweep needs at least one R and one p value"));
        }
        if !self.r_values.iter().all(|r| r.is_finite() && *r > 0.0) {
            return Err(invalid("R values must be positive"));
        }
        if !self.r_values.windows(2).all(|w| w[1] > w[0]) {
            return Err(invalid("R values must be strictly increasing"));
        }
        for &p in &self.p_values {
            PotentialParams::new(self.v0, self.d, self.r_values[0], p)?;
        }
        if let DerivativeMode::Auxiliary { step } = self.derivative {
            let min_spacing = self.r_values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            if !(step > 0.0 && step.is_finite()) || step > min_spacing * (1.0 + 1e-9) {
                return Err(invalid(format!("derivative step must be in (0, {min_spacing}], got {step}")));
            }
        }
        if self.threads == Some(0) {
            return Err(invalid("threads must be at least 1"));
        }
        Ok(())
    }

    fn params(&self, r: f64, p: f64) -> Result<PotentialParams> {
        PotentialParams::new(self.v0, self.d, r, p)
    }
}

/// `count` values `start, start + step, ...` up to `stop` inclusive, rounded
/// to ten decimals so grid points print as their nominal values.
pub fn r_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && start.is_finite() && stop.is_finite() && stop >= start) {
        return Err(invalid(format!("bad grid {start}..{stop} step {step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| ((start + i as f64 * step) * 1e10).round() / 1e10).collect())
}

/// R from 0.1 to 30 in steps of 0.1, with steps of 0.01 inside `[7.5, 9.5]`
/// when `refine` is set (used for hard walls where the minimum is narrow).
pub fn standard_r_values(refine: bool) -> Vec<f64> {
    let mut r = r_grid(0.1, 30.0, 0.1).expect("constant grid");
    if refine {
        r.retain(|&x| !(7.5..=9.5).contains(&x));
        r.extend(r_grid(7.5, 9.5, 0.01).expect("constant grid"));
        r.sort_by(f64::total_cmp);
    }
    r
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecordFlags {
    pub near_degenerate: bool,
    /// Ground-state spread exceeds a quarter of the quadrature cutoff.
    pub spread_exceeds_box: bool,
    /// Solver failure at this point; numeric fields are NaN.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub r: f64,
    pub p: f64,
    pub energy: f64,
    pub gap: f64,
    pub interaction_energy: f64,
    pub linear_entropy: f64,
    pub origin_density: f64,
    pub de_dr: Option<f64>,
    pub dl_dr: Option<f64>,
    pub structure: StructureClass,
    pub flags: RecordFlags,
}

impl SweepRecord {
    pub fn is_ok(&self) -> bool {
        self.flags.error.is_none()
    }
}

/// Observables of a single ground state.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub solution: GroundStateSolution,
    pub interaction_energy: f64,
    pub linear_entropy: f64,
    pub origin_density: f64,
}

pub fn evaluate_point(asm: &Assembler, params: &PotentialParams) -> Result<PointResult> {
    let solution = solve_ground(&asm.assemble(params)?)?;
    let linear_entropy = entanglement_of(&solution.coeffs)?.linear_entropy;
    let interaction_energy = coulomb_expectation(&solution.coeffs, asm.factorization())?;
    let origin_density = origin_density(&solution);
    Ok(PointResult { solution, interaction_energy, linear_entropy, origin_density })
}

/// `dE/dR` from the Hellmann–Feynman theorem, `2 Tr(ρ ∂h/∂R)`.
///
/// Exact within the basis because the basis itself does not depend on `R`.
pub fn hellmann_feynman_de_dr(sol: &GroundStateSolution) -> Result<f64> {
    let params = sol
        .confinement
        .params()
        .ok_or_else(|| invalid("Hellmann-Feynman derivative needs the power-exponential confinement"))?;
    let spec = &sol.basis;
    let grid = spec.quadrature.grid_with(&params.feature_points())?;
    let b = basis_values(spec.n_basis, spec.omega, &grid.nodes);
    let weighted = Mat::<f64>::from_fn(b.nrows(), spec.n_basis, |q, j| {
        grid.weights[q] * potential_range_derivative(params, grid.nodes[q]) * b[(q, j)]
    });
    let dv = b.transpose() * &weighted;
    let rho = reduced_density_from_coeffs(&sol.coeffs)?;
    let mut tr = 0.0;
    for i in 0..spec.n_basis {
        for j in 0..spec.n_basis {
            tr += rho[(i, j)] * dv[(j, i)];
        }
    }
    Ok(2.0 * tr)
}

struct PointOutcome {
    center: std::result::Result<PointResult, String>,
    /// `(R, E, L)` of auxiliary solves, lower then upper.
    aux: Vec<(f64, f64, f64)>,
}

fn solve_task(asm: &Assembler, plan: &SweepPlan, r: f64, p: f64) -> PointOutcome {
    let center = plan.params(r, p).and_then(|prm| evaluate_point(asm, &prm)).map_err(|e| e.to_string());
    let mut aux = Vec::new();
    if let (Ok(_), DerivativeMode::Auxiliary { step }) = (&center, plan.derivative) {
        for rr in [r - step, r + step] {
            if rr <= 0.0 {
                continue;
            }
            match plan.params(rr, p).and_then(|prm| evaluate_point(asm, &prm)) {
                Ok(res) => aux.push((rr, res.solution.energy, res.linear_entropy)),
                Err(e) => log::warn!("auxiliary solve at R={rr}, p={p} failed: {e}"),
            }
        }
    }
    PointOutcome { center, aux }
}

fn map_tasks<F>(tasks: &[(f64, f64)], threads: Option<usize>, f: F) -> Result<Vec<PointOutcome>>
where
    F: Fn(f64, f64) -> PointOutcome + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = || tasks.par_iter().map(|&(r, p)| f(r, p)).collect::<Vec<_>>();
        match threads {
            Some(k) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| invalid(format!("thread pool: {e}")))?;
                Ok(pool.install(run))
            }
            None => Ok(run()),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(tasks.iter().map(|&(r, p)| f(r, p)).collect())
    }
}

fn difference(a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.1 - a.1) / (b.0 - a.0)
}

/// Runs every `(R, p)` point of the plan, ordered p-major then R-minor.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<SweepRecord>> {
    plan.validate()?;
    let asm = Assembler::with_cache(&plan.basis, plan.kind, plan.cache_dir.as_deref())?;
    run_sweep_with(plan, &asm)
}

/// As [`run_sweep`] with a prebuilt assembler, which must match the plan's
/// basis and interaction.
pub fn run_sweep_with(plan: &SweepPlan, asm: &Assembler) -> Result<Vec<SweepRecord>> {
    plan.validate()?;
    if asm.basis() != &plan.basis || asm.kind() != plan.kind {
        return Err(invalid("assembler does not match the sweep plan"));
    }
    let tasks: Vec<(f64, f64)> =
        plan.p_values.iter().flat_map(|&p| plan.r_values.iter().map(move |&r| (r, p))).collect();
    let outcomes = map_tasks(&tasks, plan.threads, |r, p| solve_task(asm, plan, r, p))?;

    let mut records: Vec<SweepRecord> = tasks
        .iter()
        .zip(&outcomes)
        .map(|(&(r, p), out)| {
            let structure = classify_structure(&PotentialParams { v0: plan.v0, d: plan.d, r_range: r, p_exponent: p });
            match &out.center {
                Ok(res) => SweepRecord {
                    r,
                    p,
                    energy: res.solution.energy,
                    gap: res.solution.gap,
                    interaction_energy: res.interaction_energy,
                    linear_entropy: res.linear_entropy,
                    origin_density: res.origin_density,
                    de_dr: None,
                    dl_dr: None,
                    structure,
                    flags: RecordFlags {
                        near_degenerate: res.solution.near_degenerate,
                        spread_exceeds_box: res.solution.spread_exceeds_box,
                        error: None,
                    },
                },
                Err(e) => SweepRecord {
                    r,
                    p,
                    energy: f64::NAN,
                    gap: f64::NAN,
                    interaction_energy: f64::NAN,
                    linear_entropy: f64::NAN,
                    origin_density: f64::NAN,
                    de_dr: None,
                    dl_dr: None,
                    structure,
                    flags: RecordFlags { error: Some(e.clone()), ..Default::default() },
                },
            }
        })
        .collect();

    match plan.derivative {
        DerivativeMode::Off => {}
        DerivativeMode::Auxiliary { .. } => {
            for (rec, out) in records.iter_mut().zip(&outcomes) {
                if !rec.is_ok() {
                    continue;
                }
                let mut pts: Vec<(f64, f64, f64)> = out.aux.clone();
                if pts.len() < 2 {
                    pts.push((rec.r, rec.energy, rec.linear_entropy));
                }
                if pts.len() < 2 {
                    continue;
                }
                pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                let (lo, hi) = (pts[0], pts[pts.len() - 1]);
                rec.de_dr = Some(difference((lo.0, lo.1), (hi.0, hi.1)));
                rec.dl_dr = Some(difference((lo.0, lo.2), (hi.0, hi.2)));
            }
        }
        DerivativeMode::Grid { one_sided_edges } => {
            let n = plan.r_values.len();
            for chunk in records.chunks_mut(n) {
                grid_derivatives(chunk, one_sided_edges);
            }
        }
    }
    Ok(records)
}

fn grid_derivatives(series: &mut [SweepRecord], one_sided_edges: bool) {
    let n = series.len();
    let values: Vec<(f64, f64, f64, bool)> =
        series.iter().map(|r| (r.r, r.energy, r.linear_entropy, r.is_ok())).collect();
    for i in 0..n {
        let (lo, hi) = match (i, n) {
            (_, 0 | 1) => continue,
            (0, _) if one_sided_edges => (0, 1),
            (0, _) => continue,
            (i, n) if i == n - 1 && one_sided_edges => (i - 1, i),
            (i, n) if i == n - 1 => continue,
            (i, _) => (i - 1, i + 1),
        };
        if !(values[lo].3 && values[hi].3 && values[i].3) {
            continue;
        }
        series[i].de_dr = Some(difference((values[lo].0, values[lo].1), (values[hi].0, values[hi].1)));
        series[i].dl_dr = Some(difference((values[lo].0, values[lo].2), (values[hi].0, values[hi].2)));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    InteractionEnergy,
    LinearEntropy,
}

impl Observable {
    pub fn label(self) -> &'static str {
        match self {
            Observable::InteractionEnergy => "interaction_energy",
            Observable::LinearEntropy => "linear_entropy",
        }
    }

    fn of(self, r: &SweepRecord) -> f64 {
        match self {
            Observable::InteractionEnergy => r.interaction_energy,
            Observable::LinearEntropy => r.linear_entropy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Maximum,
    Minimum,
}

/// A local extremum; plateaus are reported as the whole `[r_start, r_end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremum {
    pub p: f64,
    pub observable: Observable,
    pub kind: ExtremumKind,
    pub r_start: f64,
    pub r_end: f64,
    pub value: f64,
}

/// Interval `[r_lo, r_hi]` in which `f(p_a) - f(p_b)` changes sign.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub observable: Observable,
    pub p_a: f64,
    pub p_b: f64,
    pub r_lo: f64,
    pub r_hi: f64,
}

/// Global `argmax <U>` and `argmin L` intervals for one `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coincidence {
    pub p: f64,
    pub max_interaction: (f64, f64),
    pub min_entropy: (f64, f64),
    /// The two intervals are at most one grid step apart.
    pub within_one_step: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepEvents {
    pub extrema: Vec<Extremum>,
    pub crossings: Vec<Crossing>,
    pub coincidences: Vec<Coincidence>,
}

/// Relative tolerance that merges nearly equal neighbours into a plateau.
const PLATEAU_TOLERANCE: f64 = 1e-6;

/// Runs of consecutive equal-within-tolerance values, as index ranges.
fn plateau_runs(values: &[f64]) -> Vec<(usize, usize)> {
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let tol = PLATEAU_TOLERANCE * (hi - lo).max(f64::MIN_POSITIVE);
    let mut runs = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[i] - values[i - 1]).abs() > tol {
            runs.push((start, i - 1));
            start = i;
        }
    }
    runs
}

fn series_by_p(records: &[SweepRecord]) -> Vec<(f64, Vec<&SweepRecord>)> {
    let mut out: Vec<(f64, Vec<&SweepRecord>)> = Vec::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        match out.iter_mut().find(|(p, _)| *p == r.p) {
            Some((_, v)) => v.push(r),
            None => out.push((r.p, vec![r])),
        }
    }
    for (_, v) in out.iter_mut() {
        v.sort_by(|a, b| a.r.total_cmp(&b.r));
    }
    out
}

fn global_interval(series: &[&SweepRecord], obs: Observable, kind: ExtremumKind) -> (usize, usize) {
    let values: Vec<f64> = series.iter().map(|r| obs.of(r)).collect();
    let runs = plateau_runs(&values);
    let better = |a: f64, b: f64| match kind {
        ExtremumKind::Maximum => a > b,
        ExtremumKind::Minimum => a < b,
    };
    let mut best = runs[0];
    for &run in &runs[1..] {
        if better(values[run.0], values[best.0]) {
            best = run;
        }
    }
    best
}

/// Local extrema of `<U>` and `L` per `p`, crossings between `p` curves, and
/// whether the `<U>` maximum and `L` minimum coincide. Failed points are
/// skipped, as are `p` values with fewer than three good points.
pub fn detect_extrema_and_crossings(records: &[SweepRecord]) -> SweepEvents {
    let mut events = SweepEvents::default();
    let by_p: Vec<_> = series_by_p(records).into_iter().filter(|(_, s)| s.len() >= 3).collect();
    for (p, series) in &by_p {
        for obs in [Observable::InteractionEnergy, Observable::LinearEntropy] {
            let values: Vec<f64> = series.iter().map(|r| obs.of(r)).collect();
            let runs = plateau_runs(&values);
            for k in 1..runs.len().saturating_sub(1) {
                let (v, before, after) = (values[runs[k].0], values[runs[k - 1].0], values[runs[k + 1].0]);
                let kind = if v > before && v > after {
                    ExtremumKind::Maximum
                } else if v < before && v < after {
                    ExtremumKind::Minimum
                } else {
                    continue;
                };
                events.extrema.push(Extremum {
                    p: *p,
                    observable: obs,
                    kind,
                    r_start: series[runs[k].0].r,
                    r_end: series[runs[k].1].r,
                    value: v,
                });
            }
        }
        let u = global_interval(series, Observable::InteractionEnergy, ExtremumKind::Maximum);
        let l = global_interval(series, Observable::LinearEntropy, ExtremumKind::Minimum);
        let index_gap = if u.1 < l.0 { l.0 - u.1 } else { u.0.saturating_sub(l.1) };
        events.coincidences.push(Coincidence {
            p: *p,
            max_interaction: (series[u.0].r, series[u.1].r),
            min_entropy: (series[l.0].r, series[l.1].r),
            within_one_step: index_gap <= 1,
        });
    }
    for (i, (pa, sa)) in by_p.iter().enumerate() {
        for (pb, sb) in &by_p[i + 1..] {
            let shared: Vec<(&SweepRecord, &SweepRecord)> =
                sa.iter().filter_map(|a| sb.iter().find(|b| b.r == a.r).map(|b| (*a, *b))).collect();
            for obs in [Observable::InteractionEnergy, Observable::LinearEntropy] {
                let diff: Vec<(f64, f64)> = shared.iter().map(|(a, b)| (a.r, obs.of(a) - obs.of(b))).collect();
                for w in diff.windows(2) {
                    let ((r0, d0), (r1, d1)) = (w[0], w[1]);
                    if d0 == 0.0 || d0.signum() != d1.signum() && d1 != 0.0 {
                        events.crossings.push(Crossing { observable: obs, p_a: *pa, p_b: *pb, r_lo: r0, r_hi: r1 });
                    }
                }
                if let Some(&(r, d)) = diff.last() {
                    if d == 0.0 && diff.len() > 1 {
                        events.crossings.push(Crossing { observable: obs, p_a: *pa, p_b: *pb, r_lo: r, r_hi: r });
                    }
                }
            }
        }
    }
    events
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessRow {
    pub p: f64,
    pub max_abs_dl_dr: f64,
    pub r_at_max_dl_dr: f64,
    pub max_abs_de_dr: f64,
    pub r_at_max_de_dr: f64,
    pub min_gap: f64,
    pub r_at_min_gap: f64,
}

/// Largest `|dL/dR|` and `|dE/dR|` per `p` over `[r_min, r_max]`, sampled
/// every `step` with neighbour differences, plus where the gap is smallest.
#[allow(clippy::too_many_arguments)]
pub fn transition_sharpness_scan(
    asm: &Assembler,
    p_values: &[f64],
    r_min: f64,
    r_max: f64,
    step: f64,
    v0: f64,
    d: f64,
    threads: Option<usize>,
) -> Result<Vec<SharpnessRow>> {
    let plan = SweepPlan {
        r_values: r_grid(r_min, r_max, step)?,
        p_values: p_values.to_vec(),
        basis: asm.basis().clone(),
        v0,
        d,
        kind: asm.kind(),
        derivative: DerivativeMode::Grid { one_sided_edges: true },
        threads,
        cache_dir: None,
    };
    if plan.r_values.len() < 2 {
        return Err(invalid("sharpness window needs at least two points"));
    }
    let records = run_sweep_with(&plan, asm)?;
    Ok(sharpness_from_records(&records))
}

/// Sharpness table from records that already carry derivatives.
pub fn sharpness_from_records(records: &[SweepRecord]) -> Vec<SharpnessRow> {
    series_by_p(records)
        .into_iter()
        .map(|(p, series)| {
            let argmax = |f: &dyn Fn(&SweepRecord) -> Option<f64>| {
                series
                    .iter()
                    .filter_map(|r| f(r).map(|v| (v, r.r)))
                    .fold((f64::NAN, f64::NAN), |best, (v, r)| if best.0.is_nan() || v > best.0 { (v, r) } else { best })
            };
            let (dl, rl) = argmax(&|r| r.dl_dr.map(f64::abs));
            let (de, re) = argmax(&|r| r.de_dr.map(f64::abs));
            let (g, rg) = argmax(&|r| Some(-r.gap));
            SharpnessRow {
                p,
                max_abs_dl_dr: dl,
                r_at_max_dl_dr: rl,
                max_abs_de_dr: de,
                r_at_max_de_dr: re,
                min_gap: -g,
                r_at_min_gap: rg,
            }
        })
        .collect()
}

pub const CONVERGENCE_ENERGY_TOLERANCE: f64 = 1e-3;
pub const CONVERGENCE_ENTROPY_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n_basis: usize,
    pub omega: f64,
    pub energy: f64,
    pub linear_entropy: f64,
    /// Change from the next smaller `N` in the study at the same `ω`.
    pub delta_energy: Option<f64>,
    pub delta_entropy: Option<f64>,
    pub converged: Option<bool>,
}

/// `E` and `L` at one `(R, p)` for every `(N, ω)` combination, ordered by
/// `ω` then `N`.
pub fn convergence_study(
    params: &PotentialParams,
    kind: InteractionKind,
    n_list: &[usize],
    omega_list: &[f64],
) -> Result<Vec<ConvergenceRow>> {
    params.validate()?;
    if n_list.is_empty() || omega_list.is_empty() {
        return Err(invalid("convergence study needs non-empty N and omega lists"));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut rows = Vec::with_capacity(ns.len() * omega_list.len());
    for &omega in omega_list {
        let mut prev: Option<(f64, f64)> = None;
        for &n in &ns {
            let spec = BasisSpec::new(n, omega, params.d)?;
            let asm = Assembler::new(&spec, kind)?;
            let res = evaluate_point(&asm, params)?;
            let (e, l) = (res.solution.energy, res.linear_entropy);
            let (de, dl) = match prev {
                Some((pe, pl)) => (Some(e - pe), Some(l - pl)),
                None => (None, None),
            };
            let converged = de.zip(dl).map(|(de, dl)| {
                de.abs() < CONVERGENCE_ENERGY_TOLERANCE && dl.abs() < CONVERGENCE_ENTROPY_TOLERANCE
            });
            rows.push(ConvergenceRow {
                n_basis: n,
                omega,
                energy: e,
                linear_entropy: l,
                delta_energy: de,
                delta_entropy: dl,
                converged,
            });
            prev = Some((e, l));
        }
    }
    Ok(rows)
}
