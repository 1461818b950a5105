//! Sweeps core counts against performance targets and locates
//! minimum-energy operating points.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::model::{plan_row, ChipParams, PlanRow, ReferencePoint, TargetSpec};
use crate::scalar::Real;
use crate::speedup::SpeedupModel;

/// One energy/voltage curve: a row per core count at a fixed performance
/// target, plus the location of its minimum-energy feasible row.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatingPlan<T> {
    pub target: TargetSpec<T>,
    /// Short description of the speedup model the plan was built from.
    pub model_summary: String,
    /// Rows in strictly increasing core-count order. Infeasible rows are
    /// retained (with their reason) so plots can show the feasibility
    /// boundary.
    pub rows: Vec<PlanRow<T>>,
    /// Core count of the minimum-energy feasible row; ties go to the
    /// smaller count. Absent when no row is feasible.
    pub optimal_p: Option<u32>,
}

impl<T: Real> OperatingPlan<T> {
    /// The minimum-energy feasible row, if any.
    pub fn optimal_point(&self) -> Option<&PlanRow<T>> {
        let p = self.optimal_p?;
        self.rows.iter().find(|row| row.p == p)
    }

    pub fn feasible_rows(&self) -> impl Iterator<Item = &PlanRow<T>> {
        self.rows.iter().filter(|row| row.is_feasible())
    }
}

/// Builds one plan row per core count in `p_range`.
///
/// Rows the chip cannot realize are kept and flagged rather than dropped.
/// Errors only on an empty or zero-started range, or when a table model
/// does not cover the requested counts.
pub fn sweep<T: Real>(
    params: &ChipParams<T>,
    reference: &ReferencePoint<T>,
    model: &SpeedupModel<T>,
    target: TargetSpec<T>,
    p_range: RangeInclusive<u32>,
) -> Result<OperatingPlan<T>> {
    let (start, end) = (*p_range.start(), *p_range.end());
    if start == 0 {
        return Err(Error::Domain("core counts start at 1".into()));
    }
    if start > end {
        return Err(Error::EmptyRange(format!("p range [{start}, {end}] is empty")));
    }
    let mut rows = Vec::with_capacity((end - start + 1) as usize);
    let mut optimal: Option<(u32, T)> = None;
    for p in p_range {
        let s_p = model.speedup_at(p)?;
        let row = plan_row(p, s_p, target, reference, params);
        if row.is_feasible() && optimal.is_none_or(|(_, best)| row.e_j < best) {
            optimal = Some((p, row.e_j));
        }
        rows.push(row);
    }
    Ok(OperatingPlan {
        target,
        model_summary: model.summary(),
        rows,
        optimal_p: optimal.map(|(p, _)| p),
    })
}

/// One sweep per target over the same core-count range. Output order matches
/// the input targets; a failing sweep is reported in place without aborting
/// the rest of the batch.
pub fn frontier<T: Real>(
    params: &ChipParams<T>,
    reference: &ReferencePoint<T>,
    model: &SpeedupModel<T>,
    targets: &[TargetSpec<T>],
    p_range: RangeInclusive<u32>,
) -> Vec<(TargetSpec<T>, Result<OperatingPlan<T>>)> {
    targets
        .iter()
        .map(|&target| {
            (target, sweep(params, reference, model, target, p_range.clone()))
        })
        .collect()
}
