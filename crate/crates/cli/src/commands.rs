use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use qdent_core::cache::cache_dir_from_env;
use qdent_core::observables::{cuts, evaluate_wavefunction, uniform_axis};
use qdent_core::oracle_grid::{oracle_ground, GridOracleSpec};
use qdent_core::sweep::{
    convergence_study, detect_extrema_and_crossings, evaluate_point, run_sweep_with, sharpness_from_records,
    DerivativeMode, SweepPlan,
};
use qdent_core::{classify_structure, Assembler};

use crate::config::{Command, DerivativeChoice, RunConfig};
use crate::table::{write_table, Cell, Table};
use crate::CliError;

fn assembler(cfg: &RunConfig) -> Result<Assembler, CliError> {
    let cache = cache_dir_from_env();
    Ok(Assembler::with_cache(&cfg.basis()?, cfg.interaction, cache.as_deref())?)
}

fn output_path(cfg: &RunConfig, command: Command) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| PathBuf::from(command.default_output().unwrap_or("out.csv")))
}

fn emit(cfg: &RunConfig, command: Command, table: &Table, started: Instant, out: &mut dyn Write) -> Result<(), CliError> {
    let path = output_path(cfg, command);
    write_table(table, &path, &cfg.dump(), command.name(), started.elapsed())?;
    writeln!(out, "wrote {} rows to {}", table.rows.len(), path.display())?;
    Ok(())
}

pub fn execute(command: Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let started = Instant::now();
    match command {
        Command::Solve => solve(cfg, out),
        Command::Classify => {
            writeln!(out, "{}", classify_structure(&cfg.params()?))?;
            Ok(())
        }
        Command::Sweep => sweep(cfg, started, out),
        Command::Cuts => {
            let asm = assembler(cfg)?;
            let sol = evaluate_point(&asm, &cfg.params()?)?.solution;
            let axis = positive_axis(cfg)?;
            let c = cuts(&sol, &axis)?;
            let mut table = Table::new(vec!["x", "diag_density", "antidiag_density"]);
            for ((x, d), a) in c.positions.iter().zip(&c.diag_density).zip(&c.antidiag_density) {
                table.push(vec![(*x).into(), (*d).into(), (*a).into()]);
            }
            writeln!(out, "origin_density={:.10}", c.origin_density)?;
            emit(cfg, command, &table, started, out)
        }
        Command::Wavefunction => {
            let asm = assembler(cfg)?;
            let sol = evaluate_point(&asm, &cfg.params()?)?.solution;
            let axis = uniform_axis(cfg.axis_half_width, cfg.axis_points)?;
            let grid = evaluate_wavefunction(&sol, &axis)?;
            let mut table = Table::new(vec!["x1", "x2", "psi"]);
            for (i, &x1) in grid.axis.iter().enumerate() {
                for (j, &x2) in grid.axis.iter().enumerate() {
                    table.push(vec![x1.into(), x2.into(), grid.values[(i, j)].into()]);
                }
            }
            writeln!(out, "E={:.10} norm={:.10}", grid.energy, grid.norm_squared())?;
            emit(cfg, command, &table, started, out)
        }
        Command::Converge => {
            let rows = convergence_study(&cfg.params()?, cfg.interaction, &cfg.n_values, &cfg.omega_values)?;
            let mut table = Table::new(vec!["n_basis", "omega", "E", "L", "delta_E", "delta_L", "converged"]);
            for r in rows {
                table.push(vec![
                    r.n_basis.into(),
                    r.omega.into(),
                    r.energy.into(),
                    r.linear_entropy.into(),
                    r.delta_energy.into(),
                    r.delta_entropy.into(),
                    r.converged.map_or(Cell::Empty, Cell::from),
                ]);
            }
            emit(cfg, command, &table, started, out)
        }
        Command::QptScan => {
            let asm = assembler(cfg)?;
            let records = run_sweep_with(&plan(cfg, DerivativeMode::Grid { one_sided_edges: true })?, &asm)?;
            let failed = records.iter().filter(|r| !r.is_ok()).count();
            if failed > 0 {
                return Err(CliError::Numerical(format!("{failed} scan points failed")));
            }
            let mut table = Table::new(vec![
                "p",
                "max_abs_dL_dR",
                "R_at_max_dL_dR",
                "max_abs_dE_dR",
                "R_at_max_dE_dR",
                "min_gap",
                "R_at_min_gap",
            ]);
            let rows = sharpness_from_records(&records);
            for r in &rows {
                table.push(vec![
                    r.p.into(),
                    r.max_abs_dl_dr.into(),
                    r.r_at_max_dl_dr.into(),
                    r.max_abs_de_dr.into(),
                    r.r_at_max_de_dr.into(),
                    r.min_gap.into(),
                    r.r_at_min_gap.into(),
                ]);
            }
            let increasing = rows.windows(2).all(|w| w[1].max_abs_dl_dr > w[0].max_abs_dl_dr);
            writeln!(out, "max|dL/dR| strictly increasing in p: {increasing}")?;
            emit(cfg, command, &table, started, out)
        }
    }
}

/// `x >= 0` half of the configured axis; cuts are even in `x`.
fn positive_axis(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let count = cfg.axis_points / 2 + 1;
    Ok(uniform_axis(cfg.axis_half_width, 2 * count - 1)?.split_off(count - 1))
}

fn plan(cfg: &RunConfig, derivative: DerivativeMode) -> Result<SweepPlan, CliError> {
    let plan = SweepPlan {
        r_values: cfg.r_values()?,
        p_values: cfg.p_values.clone(),
        basis: cfg.basis()?,
        v0: cfg.v0,
        d: cfg.d,
        kind: cfg.interaction,
        derivative,
        threads: cfg.threads,
        cache_dir: cache_dir_from_env(),
    };
    plan.validate()?;
    Ok(plan)
}

fn solve(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let params = cfg.params()?;
    let res = evaluate_point(&assembler(cfg)?, &params)?;
    let sol = &res.solution;
    writeln!(out, "R={} p={} interaction={} N={} omega={}", cfg.r, cfg.p, cfg.interaction, cfg.n_basis, cfg.omega)?;
    writeln!(out, "E={:.10}", sol.energy)?;
    writeln!(out, "gap={:.10}", sol.gap)?;
    writeln!(out, "U={:.10}", res.interaction_energy)?;
    writeln!(out, "L={:.10}", res.linear_entropy)?;
    writeln!(out, "origin_density={:.10}", res.origin_density)?;
    writeln!(out, "structure={}", classify_structure(&params))?;
    if sol.near_degenerate {
        writeln!(out, "warning: ground state nearly degenerate (gap {:.3e})", sol.gap)?;
    }
    if sol.spread_exceeds_box {
        writeln!(out, "warning: state spread {:.3} is large for the quadrature box; enlarge the basis", sol.rms_position)?;
    }
    if cfg.with_oracle {
        let spec = GridOracleSpec {
            point_count: cfg.oracle_points,
            ..GridOracleSpec::new(params.into(), cfg.interaction)
        };
        let oracle = oracle_ground(&spec)?;
        writeln!(out, "{:<8} {:>16} {:>16} {:>12}", "", "basis", "grid", "difference")?;
        writeln!(out, "{:<8} {:>16.10} {:>16.10} {:>12.3e}", "E", sol.energy, oracle.energy, sol.energy - oracle.energy)?;
        writeln!(
            out,
            "{:<8} {:>16.10} {:>16.10} {:>12.3e}",
            "L",
            res.linear_entropy,
            oracle.linear_entropy,
            res.linear_entropy - oracle.linear_entropy
        )?;
        writeln!(out, "grid: {} points per axis, spacing {:.4}", spec.point_count, spec.spacing())?;
    }
    Ok(())
}

fn sweep(cfg: &RunConfig, started: Instant, out: &mut dyn Write) -> Result<(), CliError> {
    let derivative = match cfg.derivative {
        DerivativeChoice::Off => DerivativeMode::Off,
        DerivativeChoice::Auxiliary => DerivativeMode::Auxiliary { step: cfg.derivative_step },
        DerivativeChoice::Grid => DerivativeMode::Grid { one_sided_edges: cfg.one_sided_edges },
    };
    let plan = plan(cfg, derivative)?;
    let asm = assembler(cfg)?;
    let records = run_sweep_with(&plan, &asm)?;
    let mut table = Table::new(vec![
        "R",
        "p",
        "E",
        "gap",
        "U",
        "L",
        "origin_density",
        "dE_dR",
        "dL_dR",
        "structure",
        "near_degenerate",
        "spread_exceeds_box",
        "error",
    ]);
    for r in &records {
        table.push(vec![
            r.r.into(),
            r.p.into(),
            r.energy.into(),
            r.gap.into(),
            r.interaction_energy.into(),
            r.linear_entropy.into(),
            r.origin_density.into(),
            r.de_dr.into(),
            r.dl_dr.into(),
            r.structure.label().into(),
            r.flags.near_degenerate.into(),
            r.flags.spread_exceeds_box.into(),
            r.flags.error.as_deref().map_or(Cell::Empty, Cell::from),
        ]);
    }
    let failed = records.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        writeln!(out, "warning: {failed} of {} points failed; see the error column", records.len())?;
    }
    let events = detect_extrema_and_crossings(&records);
    for c in &events.coincidences {
        writeln!(
            out,
            "p={}: max U at R in [{}, {}], min L at R in [{}, {}], coincide={}",
            c.p, c.max_interaction.0, c.max_interaction.1, c.min_entropy.0, c.min_entropy.1, c.within_one_step
        )?;
    }
    for c in &events.crossings {
        writeln!(out, "{} curves p={} and p={} cross in R in [{}, {}]", c.observable.label(), c.p_a, c.p_b, c.r_lo, c.r_hi)?;
    }
    emit(cfg, Command::Sweep, &table, started, out)
}
