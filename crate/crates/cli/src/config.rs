//! Run configuration: TOML grammar, built-in defaults, validation, and
//! re-emission.
//!
//! Every field is optional; omitted chip and reference fields fall back to
//! the stock parameter set (a 3.2 GHz at 1.2 V reference-class core). All
//! values are SI base units: volts, hertz, seconds, watts, amperes. See the
//! README for the full grammar.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use voltplan::{ChipParams64, ReferencePoint64, SpeedupModel64, TargetSpec64};

use crate::error::{CliError, CliResult};

/// Default parallel fraction when no speedup section is given.
pub const DEFAULT_AMDAHL_FRACTION: f64 = 0.9;
/// Default sweep range.
pub const DEFAULT_P_RANGE: (u32, u32) = (1, 64);

/// How the speedup model was specified, kept for re-emission.
#[derive(Debug, Clone, PartialEq)]
pub enum SpeedupSource {
    Amdahl(f64),
    Table(PathBuf),
}

/// Which artifacts a run emits and where.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub csv: bool,
    pub report: bool,
    pub svg: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("."), csv: true, report: true, svg: false }
    }
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub chip: ChipParams64,
    pub reference: ReferencePoint64,
    pub speedup_source: SpeedupSource,
    /// The loaded model (tables are read at configuration time).
    pub model: SpeedupModel64,
    pub targets: Vec<TargetSpec64>,
    pub p_min: u32,
    pub p_max: u32,
    pub output: OutputConfig,
}

impl RunConfig {
    /// Sweep range after truncation to a measured table's coverage; tables
    /// are never extrapolated.
    pub fn effective_p_range(&self) -> (u32, u32) {
        match self.model.max_p() {
            Some(max_p) => (self.p_min, self.p_max.min(max_p)),
            None => (self.p_min, self.p_max),
        }
    }
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    chip: Option<RawChip>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<RawReference>,
    #[serde(skip_serializing_if = "Option::is_none")]
    speedup: Option<RawSpeedup>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<RawSweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawChip {
    #[serde(skip_serializing_if = "Option::is_none")]
    dyn_const: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    i_leak: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v_th: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v_min: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawReference {
    #[serde(skip_serializing_if = "Option::is_none")]
    f_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_s: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawSpeedup {
    #[serde(skip_serializing_if = "Option::is_none")]
    amdahl_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<String>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    #[serde(skip_serializing_if = "Option::is_none")]
    targets: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_min: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_max: Option<u32>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    dir: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    formats: Option<Vec<String>>,
}

/// Loads and fully validates a configuration file. Relative table paths are
/// resolved against the config file's directory.
pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config(&text, base)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// The configuration produced by an empty file: stock chip and reference,
/// Amdahl f = 0.9, one target at t_r = 1, p in [1, 64], CSV and report
/// output into the working directory.
pub fn default_config() -> RunConfig {
    parse_config("", Path::new(".")).expect("built-in defaults must validate")
}

/// Parses configuration text, applies defaults, and validates everything,
/// reporting all violations at once.
pub fn parse_config(text: &str, base_dir: &Path) -> CliResult<RunConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    resolve(raw, base_dir)
}

fn resolve(raw: RawConfig, base_dir: &Path) -> CliResult<RunConfig> {
    let mut violations: Vec<String> = Vec::new();
    let stock = ChipParams64::default();
    let stock_ref = ReferencePoint64::default();

    let raw_ref = raw.reference.unwrap_or_default();
    let f_s = raw_ref.f_s.unwrap_or(stock_ref.f_s);
    let v_s = raw_ref.v_s.unwrap_or(stock_ref.v_s);
    let t_s = raw_ref.t_s.unwrap_or(stock_ref.t_s);

    let raw_chip = raw.chip.unwrap_or_default();
    let v_th = raw_chip.v_th.unwrap_or(stock.v_th);
    let chip = ChipParams64 {
        dyn_const: raw_chip.dyn_const.unwrap_or(stock.dyn_const),
        i_leak: raw_chip.i_leak.unwrap_or(stock.i_leak),
        k2: raw_chip.k2.unwrap_or(stock.k2),
        v_th,
        h: raw_chip.h.unwrap_or(stock.h),
        // The cap defaults to the reference supply voltage and the validity
        // floor to 0.01 V above threshold.
        v_max: raw_chip.v_max.unwrap_or(v_s),
        v_min: raw_chip.v_min.unwrap_or(if raw_chip.v_th.is_some() {
            v_th + 0.01
        } else {
            stock.v_min
        }),
    };
    if let Err(e) = chip.validate() {
        violations.push(format!("chip: {e}"));
    }

    let reference = match ReferencePoint64::new(f_s, v_s, t_s, &chip) {
        Ok(r) => r,
        Err(e) => {
            violations.push(format!("reference: {e}"));
            ReferencePoint64::default()
        }
    };

    let raw_speedup = raw.speedup.unwrap_or_default();
    let (speedup_source, model) = match (raw_speedup.amdahl_f, raw_speedup.table) {
        (Some(_), Some(_)) => {
            violations.push("speedup: amdahl_f and table are mutually exclusive".into());
            (
                SpeedupSource::Amdahl(DEFAULT_AMDAHL_FRACTION),
                SpeedupModel64::Amdahl { parallel_fraction: DEFAULT_AMDAHL_FRACTION },
            )
        }
        (None, Some(table)) => {
            let path = base_dir.join(&table);
            match SpeedupModel64::table_from_csv_path(&path) {
                Ok(model) => {
                    let report = model.validate();
                    for v in &report.violations {
                        violations.push(format!("speedup.table ({}): {v}", path.display()));
                    }
                    (SpeedupSource::Table(path), model)
                }
                Err(e) => {
                    violations.push(format!("speedup.table ({}): {e}", path.display()));
                    (
                        SpeedupSource::Table(path),
                        SpeedupModel64::Amdahl { parallel_fraction: DEFAULT_AMDAHL_FRACTION },
                    )
                }
            }
        }
        (amdahl_f, None) => {
            let f = amdahl_f.unwrap_or(DEFAULT_AMDAHL_FRACTION);
            let model = SpeedupModel64::Amdahl { parallel_fraction: f };
            for v in &model.validate().violations {
                violations.push(format!("speedup.amdahl_f: {v}"));
            }
            (SpeedupSource::Amdahl(f), model)
        }
    };

    let raw_sweep = raw.sweep.unwrap_or_default();
    let raw_targets = raw_sweep.targets.unwrap_or_else(|| vec![1.0]);
    if raw_targets.is_empty() {
        violations.push("sweep.targets: must not be empty".into());
    }
    let mut targets = Vec::with_capacity(raw_targets.len());
    for (i, &t_r) in raw_targets.iter().enumerate() {
        match TargetSpec64::new(t_r) {
            Ok(t) => targets.push(t),
            Err(e) => violations.push(format!("sweep.targets[{i}]: {e}")),
        }
    }
    let p_min = raw_sweep.p_min.unwrap_or(DEFAULT_P_RANGE.0);
    let p_max = raw_sweep.p_max.unwrap_or(DEFAULT_P_RANGE.1);
    if p_min < 1 {
        violations.push("sweep.p_min: core counts start at 1".into());
    }
    if p_min > p_max {
        violations.push(format!("sweep: p_min = {p_min} exceeds p_max = {p_max}"));
    }

    let raw_output = raw.output.unwrap_or_default();
    let mut output = OutputConfig {
        dir: raw_output.dir.map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".")),
        ..OutputConfig::default()
    };
    if let Some(formats) = raw_output.formats {
        output.csv = false;
        output.report = false;
        output.svg = false;
        for f in formats {
            match f.as_str() {
                "csv" => output.csv = true,
                "report" => output.report = true,
                "svg" => output.svg = true,
                other => violations.push(format!("output.formats: unknown format '{other}'")),
            }
        }
    }

    if violations.is_empty() {
        Ok(RunConfig {
            chip,
            reference,
            speedup_source,
            model,
            targets,
            p_min,
            p_max,
            output,
        })
    } else {
        Err(CliError::Config(violations.join("\n")))
    }
}

/// Serializes a resolved configuration back to TOML with every field
/// explicit. Loading the emitted text yields an identical `RunConfig`.
pub fn to_toml_string(cfg: &RunConfig) -> String {
    let mut formats = Vec::new();
    if cfg.output.csv {
        formats.push("csv".to_string());
    }
    if cfg.output.report {
        formats.push("report".to_string());
    }
    if cfg.output.svg {
        formats.push("svg".to_string());
    }
    let raw = RawConfig {
        chip: Some(RawChip {
            dyn_const: Some(cfg.chip.dyn_const),
            i_leak: Some(cfg.chip.i_leak),
            k2: Some(cfg.chip.k2),
            v_th: Some(cfg.chip.v_th),
            h: Some(cfg.chip.h),
            v_max: Some(cfg.chip.v_max),
            v_min: Some(cfg.chip.v_min),
        }),
        reference: Some(RawReference {
            f_s: Some(cfg.reference.f_s),
            v_s: Some(cfg.reference.v_s),
            t_s: Some(cfg.reference.t_s),
        }),
        speedup: Some(match &cfg.speedup_source {
            SpeedupSource::Amdahl(f) => RawSpeedup { amdahl_f: Some(*f), table: None },
            SpeedupSource::Table(path) => RawSpeedup {
                amdahl_f: None,
                table: Some(path.display().to_string()),
            },
        }),
        sweep: Some(RawSweep {
            targets: Some(cfg.targets.iter().map(|t| t.t_r).collect()),
            p_min: Some(cfg.p_min),
            p_max: Some(cfg.p_max),
        }),
        output: Some(RawOutput {
            dir: Some(cfg.output.dir.display().to_string()),
            formats: Some(formats),
        }),
    };
    toml::to_string_pretty(&raw).expect("config serialization cannot fail")
}
