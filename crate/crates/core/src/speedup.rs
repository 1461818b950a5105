//! Parallel speedup models: analytic Amdahl scaling or a measured table.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::{real_u32, Real};

/// Speedup as a function of core count.
#[derive(Debug, Clone, PartialEq)]
pub enum SpeedupModel<T> {
    /// Amdahl scaling: `s_p = 1 / ((1 - f) + f / p)` for parallel fraction
    /// `f` in `[0, 1]`.
    Amdahl { parallel_fraction: T },
    /// Measured `(p, s_p)` rows sorted by strictly increasing `p`, with
    /// `p = 1` present at `s_1 = 1`. Lookups between rows interpolate
    /// linearly in `p`; lookups beyond the last row are refused rather than
    /// extrapolated.
    Table { rows: Vec<(u32, T)> },
}

/// Outcome of [`SpeedupModel::validate`]: hard violations and non-fatal
/// warnings, both as printable messages.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<T: Real> SpeedupModel<T> {
    /// Speedup at `p` cores.
    ///
    /// Table models return the row value exactly at listed core counts and
    /// interpolate linearly between neighbors; requests outside the table's
    /// `p` range are an error (no extrapolation).
    pub fn speedup_at(&self, p: u32) -> Result<T> {
        if p == 0 {
            return Err(Error::Domain("core counts start at 1".into()));
        }
        match self {
            SpeedupModel::Amdahl { parallel_fraction } => {
                if p == 1 {
                    return Ok(T::one());
                }
                let f = *parallel_fraction;
                Ok(T::one() / ((T::one() - f) + f / real_u32(p)))
            }
            SpeedupModel::Table { rows } => {
                let idx = rows.partition_point(|&(row_p, _)| row_p < p);
                if idx < rows.len() && rows[idx].0 == p {
                    return Ok(rows[idx].1);
                }
                if idx == 0 || idx == rows.len() {
                    let max_p = rows.last().map(|r| r.0).unwrap_or(0);
                    return Err(Error::OutOfRange(format!(
                        "p = {p} is outside the measured table range [1, {max_p}]"
                    )));
                }
                let (p0, s0) = rows[idx - 1];
                let (p1, s1) = rows[idx];
                let t = (real_u32::<T>(p) - real_u32(p0)) / (real_u32::<T>(p1) - real_u32(p0));
                Ok(s0 + (s1 - s0) * t)
            }
        }
    }

    /// Checks the model invariants, reporting every violation. A table whose
    /// speedups dip as `p` grows is legal but gets a warning, since the
    /// planner's voltage-monotonicity property no longer holds for it.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        match self {
            SpeedupModel::Amdahl { parallel_fraction } => {
                let f = *parallel_fraction;
                if !(f >= T::zero() && f <= T::one()) {
                    report
                        .violations
                        .push(format!("parallel fraction {f} is outside [0, 1]"));
                }
            }
            SpeedupModel::Table { rows } => {
                if rows.is_empty() {
                    report.violations.push("table has no rows".into());
                    return report;
                }
                if !rows.windows(2).all(|w| w[0].0 < w[1].0) {
                    report
                        .violations
                        .push("rows are not sorted by strictly increasing p".into());
                }
                match rows.iter().find(|&&(p, _)| p == 1) {
                    Some(&(_, s1)) if s1 == T::one() => {}
                    Some(&(_, s1)) => report
                        .violations
                        .push(format!("s_1 = {s1} but the single-core speedup must be 1")),
                    None => report.violations.push("table is missing the p = 1 row".into()),
                }
                for &(p, s) in rows {
                    if !(s >= T::one() && s.is_finite()) {
                        report
                            .violations
                            .push(format!("s_{p} = {s} must be finite and >= 1"));
                    }
                }
                if rows.windows(2).any(|w| w[1].1 < w[0].1) {
                    report
                        .warnings
                        .push("speedup is not monotone in p; voltage monotonicity across the sweep no longer holds".into());
                }
            }
        }
        report
    }

    /// Largest core count covered by the model, if it is bounded.
    pub fn max_p(&self) -> Option<u32> {
        match self {
            SpeedupModel::Amdahl { .. } => None,
            SpeedupModel::Table { rows } => rows.iter().map(|&(p, _)| p).max(),
        }
    }

    /// Short human-readable description used in reports and plot legends.
    pub fn summary(&self) -> String {
        match self {
            SpeedupModel::Amdahl { parallel_fraction } => {
                format!("amdahl(f={parallel_fraction})")
            }
            SpeedupModel::Table { rows } => {
                let max_p = rows.iter().map(|&(p, _)| p).max().unwrap_or(0);
                format!("table({} rows, p <= {max_p})", rows.len())
            }
        }
    }

    /// Loads a table model from two-column CSV with header `p,s_p`.
    ///
    /// Parsing only; call [`validate`](Self::validate) on the result before
    /// trusting it.
    pub fn table_from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?;
        if headers.len() != 2 || &headers[0] != "p" || &headers[1] != "s_p" {
            return Err(Error::Parse(format!(
                "expected header 'p,s_p', got '{}'",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut rows = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            let line = i + 2;
            if record.len() != 2 {
                return Err(Error::Parse(format!(
                    "line {line}: expected 2 fields, got {}",
                    record.len()
                )));
            }
            let p: u32 = record[0]
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}: invalid core count '{}'", &record[0])))?;
            let s: f64 = record[1]
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}: invalid speedup '{}'", &record[1])))?;
            let s = T::from_f64(s)
                .ok_or_else(|| Error::Parse(format!("line {line}: speedup '{s}' does not fit the scalar type")))?;
            rows.push((p, s));
        }
        Ok(SpeedupModel::Table { rows })
    }

    /// [`table_from_csv`](Self::table_from_csv) reading from a file path.
    pub fn table_from_csv_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())?;
        Self::table_from_csv(file)
    }
}
