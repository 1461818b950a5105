//! Command implementations. Each returns the text to print on success;
//! artifacts (CSV, SVG) are written as side effects under the output
//! directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use voltplan::{
    fit_power, fit_vf, frontier, simulate, sweep, AccountingMode, FittedConstants,
    OperatingPlan64, SpeedupModel64, TargetSpec64, Workload64,
};

use crate::config::RunConfig;
use crate::error::{from_core, CliError, CliResult};
use crate::report;
use crate::svg::{emit_svg, ChartAxis};

/// Analytic-versus-trace tolerance for `validate`, relative.
pub const VALIDATE_TOLERANCE: f64 = 1e-9;
/// Parallel fractions exercised by `validate`.
pub const VALIDATE_FRACTIONS: [f64; 4] = [0.5, 0.9, 0.99, 1.0];
/// Performance targets exercised by `validate`.
pub const VALIDATE_TARGETS: [f64; 3] = [0.25, 0.5, 1.0];

/// Flags shared by the plan-producing commands.
#[derive(Debug, Default, Clone)]
pub struct RunOptions {
    /// Overrides the configured output directory.
    pub out_dir: Option<PathBuf>,
    /// Forces SVG emission on top of the configured formats.
    pub svg: bool,
}

struct Emitter {
    dir: PathBuf,
    csv: bool,
    report: bool,
    svg: bool,
}

impl Emitter {
    fn new(cfg: &RunConfig, opts: &RunOptions) -> Emitter {
        Emitter {
            dir: opts.out_dir.clone().unwrap_or_else(|| cfg.output.dir.clone()),
            csv: cfg.output.csv,
            report: cfg.output.report,
            svg: cfg.output.svg || opts.svg,
        }
    }

    fn write(&self, name: &str, contents: &str) -> CliResult<PathBuf> {
        std::fs::create_dir_all(&self.dir)
            .map_err(|e| CliError::Internal(format!("{}: {e}", self.dir.display())))?;
        let path = self.dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?;
        Ok(path)
    }

    fn write_plan_csv(&self, prefix: &str, plan: &OperatingPlan64, out: &mut String) -> CliResult<()> {
        if self.csv {
            let path = self.write(
                &format!("{prefix}_tr_{}.csv", plan.target.t_r),
                &report::plan_to_csv(plan),
            )?;
            let _ = writeln!(out, "wrote {}", path.display());
        }
        Ok(())
    }

    fn write_charts(&self, plans: &[OperatingPlan64], out: &mut String) -> CliResult<()> {
        if !self.svg || plans.iter().all(|p| p.feasible_rows().next().is_none()) {
            return Ok(());
        }
        let energy = render_to(self, plans, ChartAxis::Energy, "energy.svg")?;
        let voltage = render_to(self, plans, ChartAxis::Voltage, "voltage.svg")?;
        let _ = writeln!(out, "wrote {}", energy.display());
        let _ = writeln!(out, "wrote {}", voltage.display());
        Ok(())
    }
}

fn render_to(emitter: &Emitter, plans: &[OperatingPlan64], axis: ChartAxis, name: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(&emitter.dir)
        .map_err(|e| CliError::Internal(format!("{}: {e}", emitter.dir.display())))?;
    let path = emitter.dir.join(name);
    emit_svg(plans, axis, &path)?;
    Ok(path)
}

fn sweep_all_targets(cfg: &RunConfig) -> CliResult<Vec<OperatingPlan64>> {
    let (p_min, p_max) = cfg.effective_p_range();
    cfg.targets
        .iter()
        .map(|&target| {
            sweep(&cfg.chip, &cfg.reference, &cfg.model, target, p_min..=p_max)
                .map_err(from_core)
        })
        .collect()
}

/// `sweep`: one plan CSV per target, optional charts, report to stdout.
/// Exits infeasible (3) when not a single row of any target is feasible;
/// the CSVs are still written first so the boundary is inspectable.
pub fn cmd_sweep(cfg: &RunConfig, opts: &RunOptions) -> CliResult<String> {
    let emitter = Emitter::new(cfg, opts);
    let plans = sweep_all_targets(cfg)?;
    let mut out = String::new();
    for plan in &plans {
        emitter.write_plan_csv("plan", plan, &mut out)?;
        if emitter.report {
            out.push_str(&report::plan_report(plan));
        }
    }
    emitter.write_charts(&plans, &mut out)?;
    if plans.iter().all(|p| p.feasible_rows().next().is_none()) {
        print!("{out}");
        return Err(CliError::Infeasible(
            "every row of every target is infeasible".into(),
        ));
    }
    Ok(out)
}

/// `optimize`: the minimum-energy feasible row per target.
pub fn cmd_optimize(cfg: &RunConfig, opts: &RunOptions) -> CliResult<String> {
    let emitter = Emitter::new(cfg, opts);
    let plans = sweep_all_targets(cfg)?;
    let mut out = String::new();
    for plan in &plans {
        out.push_str(&report::optimal_report(plan));
        if let Some(row) = plan.optimal_point() {
            if emitter.csv {
                let single = OperatingPlan64 {
                    rows: vec![*row],
                    ..plan.clone()
                };
                emitter.write_plan_csv("optimal", &single, &mut out)?;
            }
        }
    }
    if plans.iter().all(|p| p.optimal_p.is_none()) {
        print!("{out}");
        return Err(CliError::Infeasible(
            "no target has a feasible operating point".into(),
        ));
    }
    Ok(out)
}

/// `frontier`: one sweep per target with per-target error reporting; the
/// batch keeps going when a target fails.
pub fn cmd_frontier(cfg: &RunConfig, opts: &RunOptions) -> CliResult<String> {
    let emitter = Emitter::new(cfg, opts);
    let (p_min, p_max) = cfg.effective_p_range();
    let batch = frontier(
        &cfg.chip,
        &cfg.reference,
        &cfg.model,
        &cfg.targets,
        p_min..=p_max,
    );
    let mut out = String::new();
    let mut plans = Vec::new();
    let mut first_error: Option<CliError> = None;
    let _ = writeln!(out, "frontier over p in [{p_min}, {p_max}], model = {}", cfg.model.summary());
    for (target, result) in batch {
        match result {
            Ok(plan) => {
                match plan.optimal_point() {
                    Some(row) => {
                        let _ = writeln!(
                            out,
                            "  t_r = {}: optimal_p = {}, e = {:.6e} J, v_p = {:.5} V, f_p = {:.5e} Hz",
                            target.t_r, row.p, row.e_j, row.v_p, row.f_p
                        );
                    }
                    None => {
                        let _ = writeln!(out, "  t_r = {}: no feasible rows", target.t_r);
                    }
                }
                emitter.write_plan_csv("plan", &plan, &mut out)?;
                plans.push(plan);
            }
            Err(e) => {
                let cli = from_core(e);
                let _ = writeln!(out, "  t_r = {}: error ({}): {cli}", target.t_r, cli.category());
                first_error.get_or_insert(cli);
            }
        }
    }
    emitter.write_charts(&plans, &mut out)?;
    let any_feasible = plans.iter().any(|p| p.feasible_rows().next().is_some());
    if any_feasible {
        Ok(out)
    } else {
        print!("{out}");
        Err(first_error.unwrap_or_else(|| {
            CliError::Infeasible("every row of every target is infeasible".into())
        }))
    }
}

/// `calibrate-vf`: fit `(k2, v_th)` from a `v,f_max` CSV; `h` is taken from
/// the configuration (it is held fixed, not fitted).
pub fn cmd_calibrate_vf(cfg: &RunConfig, samples: &Path) -> CliResult<String> {
    let data = voltplan::calibration::load_vf_samples_path::<f64, _>(samples)
        .map_err(|e| CliError::Data(format!("{}: {e}", samples.display())))?;
    let fit = fit_vf(&data, cfg.chip.h).map_err(from_core)?;
    let FittedConstants::VoltageFrequency { k2, v_th } = fit.constants else {
        return Err(CliError::Internal("fit returned the wrong constants".into()));
    };
    let mut out = String::new();
    let _ = writeln!(out, "frequency/voltage fit over {} samples:", fit.sample_count);
    let _ = writeln!(out, "  k2   = {} Hz (hertz-consistent basis)", report::format_f64(k2));
    let _ = writeln!(out, "  v_th = {} V", report::format_f64(v_th));
    let _ = writeln!(out, "  h    = {} (fixed)", cfg.chip.h);
    let _ = writeln!(out, "  rms residual = {:.6e} Hz", fit.rms_residual);
    Ok(out)
}

/// `calibrate-power`: fit `(dyn_const, i_leak)` from a `v,f,p_w` CSV.
pub fn cmd_calibrate_power(samples: &Path) -> CliResult<String> {
    let data = voltplan::calibration::load_power_samples_path::<f64, _>(samples)
        .map_err(|e| CliError::Data(format!("{}: {e}", samples.display())))?;
    let fit = fit_power(&data).map_err(from_core)?;
    let FittedConstants::Power { dyn_const, i_leak, clamped } = fit.constants else {
        return Err(CliError::Internal("fit returned the wrong constants".into()));
    };
    let mut out = String::new();
    let _ = writeln!(out, "power fit over {} samples:", fit.sample_count);
    let _ = writeln!(out, "  dyn_const = {} W/(V^2*Hz)", report::format_f64(dyn_const));
    let _ = writeln!(out, "  i_leak    = {} A", report::format_f64(i_leak));
    let _ = writeln!(out, "  rms residual = {:.6e} W", fit.rms_residual);
    if clamped {
        let _ = writeln!(
            out,
            "  warning: a negative coefficient was clamped to zero; check the samples"
        );
    }
    Ok(out)
}

/// `validate`: analytic energies versus the trace replay over the standard
/// grid (all parallel fractions and targets below, every core count in the
/// configured range). Feasible cells must agree to 1e-9 relative.
pub fn cmd_validate(cfg: &RunConfig) -> CliResult<String> {
    let (p_min, p_max) = cfg.effective_p_range();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "analytic vs trace energy, p in [{p_min}, {p_max}], tolerance {VALIDATE_TOLERANCE:.0e} relative"
    );
    let _ = writeln!(out, "     f    t_r   cells  skipped   max_rel_err  status");
    let mut checked_cells = 0usize;
    let mut worst: f64 = 0.0;
    let mut failures = 0usize;
    for &f in &VALIDATE_FRACTIONS {
        let model = SpeedupModel64::Amdahl { parallel_fraction: f };
        let workload = Workload64::from_reference(&cfg.reference, f).map_err(from_core)?;
        for &t_r in &VALIDATE_TARGETS {
            let target = TargetSpec64::new(t_r).map_err(from_core)?;
            let plan = sweep(&cfg.chip, &cfg.reference, &model, target, p_min..=p_max)
                .map_err(from_core)?;
            let mut max_rel: f64 = 0.0;
            let mut cells = 0usize;
            let mut skipped = 0usize;
            for row in &plan.rows {
                if !row.is_feasible() {
                    skipped += 1;
                    continue;
                }
                let sim = simulate(
                    &workload,
                    row.p,
                    row.f_p,
                    row.v_p,
                    &cfg.chip,
                    AccountingMode::AllCoresOn,
                )
                .map_err(from_core)?;
                let rel = ((sim.energy_j - row.e_j) / row.e_j).abs();
                max_rel = max_rel.max(rel);
                cells += 1;
            }
            checked_cells += cells;
            worst = worst.max(max_rel);
            let pass = max_rel <= VALIDATE_TOLERANCE;
            if cells > 0 && !pass {
                failures += 1;
            }
            let status = if cells == 0 {
                "skip"
            } else if pass {
                "pass"
            } else {
                "FAIL"
            };
            let _ = writeln!(
                out,
                "  {f:>4}  {t_r:>5}  {cells:>6}  {skipped:>7}  {max_rel:>12.3e}  {status}"
            );
        }
    }
    let _ = writeln!(
        out,
        "validate: {} ({checked_cells} cells checked, worst relative error {worst:.3e})",
        if failures == 0 { "pass" } else { "FAIL" }
    );
    if failures == 0 {
        Ok(out)
    } else {
        print!("{out}");
        Err(CliError::Internal(format!(
            "analytic and trace energies diverge beyond {VALIDATE_TOLERANCE:.0e} in {failures} grid combinations"
        )))
    }
}

/// `--explain-params`: the resolved parameter set with units and the
/// provenance notes, including the stored-unit decision for `k2`.
pub fn explain_params(cfg: &RunConfig) -> String {
    let chip = &cfg.chip;
    let reference = &cfg.reference;
    let cap = chip
        .max_frequency(chip.v_max)
        .map(|f| format!("{f:.6e} Hz"))
        .unwrap_or_else(|e| format!("unavailable ({e})"));
    let mut out = String::new();
    let _ = writeln!(out, "resolved chip parameters (SI base units):");
    let _ = writeln!(out, "  dyn_const = {:.6e} W/(V^2*Hz)  lumped switching constant", chip.dyn_const);
    let _ = writeln!(out, "  i_leak    = {:.6e} A           leakage current per core", chip.i_leak);
    let _ = writeln!(out, "  k2        = {:.6e} Hz basis    frequency/voltage constant", chip.k2);
    let _ = writeln!(out, "  v_th      = {} V             threshold voltage", chip.v_th);
    let _ = writeln!(out, "  h         = {}               technology exponent (fixed in fits)", chip.h);
    let _ = writeln!(out, "  v_min     = {} V             model-validity floor (default v_th + 0.01)", chip.v_min);
    let _ = writeln!(out, "  v_max     = {} V              supply cap (default: reference v_s)", chip.v_max);
    let _ = writeln!(out, "  max_frequency(v_max) = {cap}");
    let _ = writeln!(out, "reference run:");
    let _ = writeln!(out, "  f_s = {:.6e} Hz, v_s = {} V, t_s = {} s, workload = {:.6e} cycles",
        reference.f_s, reference.v_s, reference.t_s, reference.w_cycles);
    let _ = writeln!(out);
    let _ = writeln!(out, "note on k2 units: k2 is stored hertz-consistent; the default is");
    let _ = writeln!(out, "k2 = 4.02e9. Published listings of this parameter set print");
    let _ = writeln!(out, "k2 = 4.02e-9, which with volts and hertz would put the maximum");
    let _ = writeln!(out, "frequency at 1.2 V near 3.2e-9 Hz, contradicting the 3.2 GHz at");
    let _ = writeln!(out, "1.2 V reference pair published alongside it. Configs must supply");
    let _ = writeln!(out, "k2 in the hertz-consistent basis; no conversion is applied on load.");
    out
}

#[cfg(test)]
mod tests {
    use crate::config::{default_config, parse_config};

    use super::*;

    #[test]
    fn validate_passes_on_the_default_grid() {
        let text = cmd_validate(&default_config()).unwrap();
        assert!(text.contains("validate: pass"));
        assert!(!text.contains("FAIL"));
    }

    #[test]
    fn sweep_writes_a_csv_per_target() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config("[sweep]\ntargets = [1.0, 0.5]\np_max = 8\n", dir.path()).unwrap();
        let opts = RunOptions { out_dir: Some(dir.path().to_path_buf()), svg: false };
        let out = cmd_sweep(&cfg, &opts).unwrap();
        assert!(dir.path().join("plan_tr_1.csv").exists());
        assert!(dir.path().join("plan_tr_0.5.csv").exists());
        assert!(out.contains("plan: t_r = 1"));
    }

    #[test]
    fn optimize_names_the_serial_optimum() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config("[speedup]\namdahl_f = 0.0\n", dir.path()).unwrap();
        let opts = RunOptions { out_dir: Some(dir.path().to_path_buf()), svg: false };
        let out = cmd_optimize(&cfg, &opts).unwrap();
        assert!(out.contains("optimal_p = 1"), "{out}");
        // Serial code never beats the single-core reference energy.
        assert!(out.contains("4.8926"), "{out}");
    }

    #[test]
    fn infeasible_sweeps_fail_with_the_infeasible_category() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config("[sweep]\ntargets = [0.01]\n", dir.path()).unwrap();
        let opts = RunOptions { out_dir: Some(dir.path().to_path_buf()), svg: false };
        let err = cmd_sweep(&cfg, &opts).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        // The CSV is still written so the boundary can be inspected.
        assert!(dir.path().join("plan_tr_0.01.csv").exists());
    }

    #[test]
    fn frontier_reports_every_target_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config(
            "[sweep]\ntargets = [1.0, 0.5, 0.25]\n\n[output]\nformats = [\"report\"]\n",
            dir.path(),
        )
        .unwrap();
        let opts = RunOptions { out_dir: Some(dir.path().to_path_buf()), svg: false };
        let out = cmd_frontier(&cfg, &opts).unwrap();
        let i1 = out.find("t_r = 1:").unwrap();
        let i2 = out.find("t_r = 0.5:").unwrap();
        let i3 = out.find("t_r = 0.25:").unwrap();
        assert!(i1 < i2 && i2 < i3);
    }

    #[test]
    fn explain_params_carries_the_units_note() {
        let text = explain_params(&default_config());
        assert!(text.contains("4.02e-9"));
        assert!(text.contains("hertz-consistent"));
        assert!(text.contains("3.2 GHz"));
    }
}
