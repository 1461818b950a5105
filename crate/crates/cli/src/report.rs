//! Plan serialization: the fixed CSV schema and human-readable reports.

use std::fmt::Write as _;

use voltplan::{Feasibility, OperatingPlan64, PlanRow64, PowerBreakdown64};

use crate::error::{CliError, CliResult};

/// Versioned column layout of every emitted plan CSV.
pub const PLAN_CSV_HEADER: &str =
    "p,s_p,f_p_hz,v_p_v,p_dyn_w,p_leak_w,p_total_w,t_p_s,e_j,feasible,reason";

/// 17 significant digits, enough to reproduce any `f64` exactly on re-parse.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders a plan as CSV, one row per core count, infeasible rows included.
pub fn plan_to_csv(plan: &OperatingPlan64) -> String {
    let mut out = String::with_capacity(128 * (plan.rows.len() + 1));
    out.push_str(PLAN_CSV_HEADER);
    out.push('\n');
    for row in &plan.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            row.p,
            format_f64(row.s_p),
            format_f64(row.f_p),
            format_f64(row.v_p),
            format_f64(row.power.dynamic_w),
            format_f64(row.power.leakage_w),
            format_f64(row.power.total_w),
            format_f64(row.t_p),
            format_f64(row.e_j),
            row.is_feasible(),
            row.feasibility,
        );
    }
    out
}

/// Parses CSV in the [`PLAN_CSV_HEADER`] schema back into plan rows.
pub fn parse_plan_csv(text: &str) -> CliResult<Vec<PlanRow64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Data(e.to_string()))?;
    let got = headers.iter().collect::<Vec<_>>().join(",");
    if got != PLAN_CSV_HEADER {
        return Err(CliError::Data(format!(
            "expected header '{PLAN_CSV_HEADER}', got '{got}'"
        )));
    }
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CliError::Data(e.to_string()))?;
        let line = i + 2;
        if record.len() != 11 {
            return Err(CliError::Data(format!(
                "line {line}: expected 11 fields, got {}",
                record.len()
            )));
        }
        let num = |idx: usize| -> CliResult<f64> {
            record[idx].parse().map_err(|_| {
                CliError::Data(format!("line {line}: invalid number '{}'", &record[idx]))
            })
        };
        let p: u32 = record[0]
            .parse()
            .map_err(|_| CliError::Data(format!("line {line}: invalid core count '{}'", &record[0])))?;
        let feasible: bool = record[9]
            .parse()
            .map_err(|_| CliError::Data(format!("line {line}: invalid flag '{}'", &record[9])))?;
        let feasibility: Feasibility = record[10]
            .parse()
            .map_err(|e| CliError::Data(format!("line {line}: {e}")))?;
        if feasible != feasibility.is_feasible() {
            return Err(CliError::Data(format!(
                "line {line}: feasible flag contradicts reason '{feasibility}'"
            )));
        }
        rows.push(PlanRow64 {
            p,
            s_p: num(1)?,
            f_p: num(2)?,
            v_p: num(3)?,
            power: PowerBreakdown64 {
                dynamic_w: num(4)?,
                leakage_w: num(5)?,
                total_w: num(6)?,
            },
            t_p: num(7)?,
            e_j: num(8)?,
            feasibility,
        });
    }
    Ok(rows)
}

fn row_line(out: &mut String, row: &PlanRow64, marker: &str) {
    let _ = writeln!(
        out,
        "{marker}{:>4}  {:>9.4}  {:>12.5e}  {:>8.5}  {:>11.5e}  {:>10.4}  {:>12.5e}  {}",
        row.p,
        row.s_p,
        row.f_p,
        row.v_p,
        row.power.total_w,
        row.t_p,
        row.e_j,
        row.feasibility,
    );
}

const REPORT_COLUMNS: &str =
    "   p        s_p        f_p [Hz]   v_p [V]  p_core [W]    t_p [s]       e [J]  status";

/// Human-readable table of one plan.
pub fn plan_report(plan: &OperatingPlan64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "plan: t_r = {}, model = {}, optimal_p = {}",
        plan.target.t_r,
        plan.model_summary,
        plan.optimal_p.map_or("none".to_string(), |p| p.to_string()),
    );
    let _ = writeln!(out, "{REPORT_COLUMNS}");
    for row in &plan.rows {
        let marker = if Some(row.p) == plan.optimal_p { "*" } else { " " };
        row_line(&mut out, row, marker);
    }
    out
}

/// One-line-per-target summary of the minimum-energy operating points.
pub fn optimal_report(plan: &OperatingPlan64) -> String {
    let mut out = String::new();
    match plan.optimal_point() {
        Some(row) => {
            let _ = writeln!(
                out,
                "optimal point for t_r = {} ({}): optimal_p = {}",
                plan.target.t_r, plan.model_summary, row.p
            );
            let _ = writeln!(out, "{REPORT_COLUMNS}");
            row_line(&mut out, row, "*");
        }
        None => {
            let _ = writeln!(
                out,
                "optimal point for t_r = {} ({}): none (no feasible rows)",
                plan.target.t_r, plan.model_summary
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use voltplan::{sweep, ChipParams64, ReferencePoint64, SpeedupModel64, TargetSpec64};

    use super::*;

    fn sample_plan(t_r: f64) -> OperatingPlan64 {
        sweep(
            &ChipParams64::default(),
            &ReferencePoint64::default(),
            &SpeedupModel64::Amdahl { parallel_fraction: 0.9 },
            TargetSpec64::new(t_r).unwrap(),
            1..=16,
        )
        .unwrap()
    }

    #[test]
    fn csv_rows_reparse_exactly() {
        let plan = sample_plan(1.0);
        let rows = parse_plan_csv(&plan_to_csv(&plan)).unwrap();
        assert_eq!(rows.len(), plan.rows.len());
        for (parsed, original) in rows.iter().zip(&plan.rows) {
            // 17 significant digits make the round-trip bit-exact.
            assert_eq!(parsed, original);
        }
    }

    #[test]
    fn infeasible_rows_survive_the_round_trip() {
        let plan = sample_plan(0.01);
        assert!(plan.rows.iter().all(|r| !r.is_feasible()));
        let rows = parse_plan_csv(&plan_to_csv(&plan)).unwrap();
        assert!(rows.iter().all(|r| !r.is_feasible()));
        assert_eq!(rows, plan.rows);
    }

    #[test]
    fn header_mismatch_is_rejected() {
        assert!(parse_plan_csv("a,b,c\n1,2,3\n").is_err());
    }

    #[test]
    fn contradictory_feasible_flag_is_rejected() {
        let mut text = String::from(PLAN_CSV_HEADER);
        text.push_str("\n1,1.0,3.2e9,1.2,48.8,0.09,48.9,1.0,48.9,false,ok\n");
        let err = parse_plan_csv(&text).unwrap_err();
        assert!(err.to_string().contains("contradicts"));
    }

    #[test]
    fn reports_name_the_optimal_row() {
        let plan = sample_plan(1.0);
        assert_eq!(plan.optimal_p, Some(7));
        let report = plan_report(&plan);
        assert!(report.contains("optimal_p = 7"));
        assert!(report.lines().any(|l| l.starts_with('*')));
        let optimal = optimal_report(&plan);
        assert!(optimal.contains("optimal_p = 7"));
    }

    #[test]
    fn optimal_report_handles_infeasible_plans() {
        let plan = sample_plan(0.01);
        assert!(optimal_report(&plan).contains("none"));
    }
}
