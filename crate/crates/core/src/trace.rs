//! Trace-driven two-phase execution and energy accounting.
//!
//! Replays a workload as a serial phase followed by a perfectly divisible
//! parallel phase and integrates power over both. The all-cores-on mode
//! reproduces the analytical energy formula by an independent route and is
//! used to cross-check it; the serial-phase-gated mode additionally powers
//! down idle cores during the serial phase to show what the all-cores-on
//! assumption costs.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{ChipParams, ReferencePoint};
use crate::scalar::{real_u32, Real};

/// Workload decomposed into serial and parallel cycle counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Workload<T> {
    /// Total cycles to execute, independent of clock frequency.
    pub total_cycles: T,
    /// Fraction of the cycles that can run concurrently, in `[0, 1]`.
    pub parallel_fraction: T,
}

impl<T: Real> Workload<T> {
    pub fn new(total_cycles: T, parallel_fraction: T) -> Result<Self> {
        if !(total_cycles > T::zero() && total_cycles.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "total_cycles = {total_cycles} must be finite and > 0"
            )));
        }
        if !(parallel_fraction >= T::zero() && parallel_fraction <= T::one()) {
            return Err(Error::InvalidParams(format!(
                "parallel_fraction = {parallel_fraction} must lie in [0, 1]"
            )));
        }
        Ok(Workload { total_cycles, parallel_fraction })
    }

    /// Workload sized from a reference run.
    pub fn from_reference(reference: &ReferencePoint<T>, parallel_fraction: T) -> Result<Self> {
        Self::new(reference.w_cycles, parallel_fraction)
    }
}

/// How idle cores are accounted during the serial phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccountingMode {
    /// All `p` cores draw power for the whole run.
    AllCoresOn,
    /// Only the active core draws power during the serial phase.
    SerialPhaseGated,
}

impl fmt::Display for AccountingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccountingMode::AllCoresOn => "all-cores-on",
            AccountingMode::SerialPhaseGated => "serial-phase-gated",
        })
    }
}

/// Phase times and energy of one simulated run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult<T> {
    pub t_serial_phase: T,
    pub t_parallel_phase: T,
    pub t_total: T,
    pub energy_j: T,
    pub accounting_mode: AccountingMode,
}

fn phase_times<T: Real>(w: &Workload<T>, p: u32, f: T) -> (T, T) {
    let serial = (T::one() - w.parallel_fraction) * w.total_cycles / f;
    let parallel = w.parallel_fraction * w.total_cycles / (real_u32::<T>(p) * f);
    (serial, parallel)
}

/// Replays `w` on `p` cores at `(v_p, f_p)` and integrates power.
pub fn simulate<T: Real>(
    w: &Workload<T>,
    p: u32,
    f_p: T,
    v_p: T,
    params: &ChipParams<T>,
    mode: AccountingMode,
) -> Result<SimResult<T>> {
    if p == 0 {
        return Err(Error::Domain("core counts start at 1".into()));
    }
    let frequency_ok = f_p.is_finite() && f_p > T::zero();
    if !frequency_ok {
        return Err(Error::Domain(format!("frequency {f_p} Hz must be > 0")));
    }
    if v_p < params.v_th {
        return Err(Error::Domain(format!(
            "supply voltage {} V is below the threshold voltage {} V",
            v_p, params.v_th
        )));
    }
    let (t_serial_phase, t_parallel_phase) = phase_times(w, p, f_p);
    let t_total = t_serial_phase + t_parallel_phase;
    let per_core = params.core_power(v_p, f_p)?;
    let cores = real_u32::<T>(p);
    // Shared sub-terms keep gated <= all-on exact in floating point, with
    // equality at p = 1 or a zero-length serial phase.
    let serial_one_core = per_core.total_w * t_serial_phase;
    let parallel_all_cores = cores * (per_core.total_w * t_parallel_phase);
    let energy_j = match mode {
        AccountingMode::AllCoresOn => parallel_all_cores + cores * serial_one_core,
        AccountingMode::SerialPhaseGated => parallel_all_cores + serial_one_core,
    };
    Ok(SimResult {
        t_serial_phase,
        t_parallel_phase,
        t_total,
        energy_j,
        accounting_mode: mode,
    })
}

/// Speedup observed by timing the replay on 1 versus `p` cores at a common
/// frequency (which cancels out of the ratio).
///
/// # Panics
///
/// Panics if `p` is zero.
pub fn measured_speedup<T: Real>(w: &Workload<T>, p: u32) -> T {
    assert!(p >= 1, "core counts start at 1");
    let f_ref = T::one();
    let (s1, p1) = phase_times(w, 1, f_ref);
    let (sp, pp) = phase_times(w, p, f_ref);
    (s1 + p1) / (sp + pp)
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    use super::*;
    use crate::model::{plan_row, TargetSpec};
    use crate::speedup::SpeedupModel;

    fn params() -> ChipParams<f64> {
        ChipParams::default()
    }

    #[test]
    fn sixteen_core_run_decomposes_and_matches_the_plan() {
        let w = Workload::new(3.2e9, 0.9).unwrap();
        let v_p = params().min_voltage_for_frequency(5e8).unwrap();
        let sim = simulate(&w, 16, 5e8, v_p, &params(), AccountingMode::AllCoresOn).unwrap();
        assert_relative_eq!(sim.t_serial_phase, 0.64, max_relative = 1e-12);
        assert_relative_eq!(sim.t_parallel_phase, 0.36, max_relative = 1e-12);
        assert_relative_eq!(sim.t_total, 1.0, max_relative = 1e-12);
        assert_relative_eq!(sim.energy_j, 11.1335654252, max_relative = 1e-8);

        let row = plan_row(
            16,
            6.4,
            TargetSpec::new(1.0).unwrap(),
            &ReferencePoint::default(),
            &params(),
        );
        assert_relative_eq!(sim.energy_j, row.e_j, max_relative = 1e-9);
    }

    #[test]
    fn gating_saves_the_serial_phase_idle_energy() {
        let w = Workload::new(3.2e9, 0.9).unwrap();
        let v_p = params().min_voltage_for_frequency(5e8).unwrap();
        let sim = simulate(&w, 16, 5e8, v_p, &params(), AccountingMode::SerialPhaseGated).unwrap();
        assert_relative_eq!(sim.energy_j, 4.45342617006, max_relative = 1e-8);
    }

    #[test]
    fn single_core_modes_are_identical() {
        let w = Workload::new(1e9, 0.7).unwrap();
        let on = simulate(&w, 1, 1e9, 0.5, &params(), AccountingMode::AllCoresOn).unwrap();
        let gated = simulate(&w, 1, 1e9, 0.5, &params(), AccountingMode::SerialPhaseGated).unwrap();
        assert_eq!(on.energy_j, gated.energy_j);
    }

    #[test]
    fn measured_speedup_examples() {
        let fully_parallel = Workload::new(1e9, 1.0).unwrap();
        assert_eq!(measured_speedup(&fully_parallel, 8), 8.0);
        let mostly_parallel = Workload::new(3.2e9, 0.9).unwrap();
        assert_relative_eq!(measured_speedup(&mostly_parallel, 16), 6.4, max_relative = 1e-13);
        let serial = Workload::new(1e9, 0.0).unwrap();
        assert_eq!(measured_speedup(&serial, 64), 1.0);
    }

    #[test]
    fn invalid_inputs_are_domain_errors() {
        let w = Workload::new(1e9, 0.5).unwrap();
        assert!(simulate(&w, 0, 1e9, 0.5, &params(), AccountingMode::AllCoresOn).is_err());
        assert!(simulate(&w, 4, 0.0, 0.5, &params(), AccountingMode::AllCoresOn).is_err());
        assert!(simulate(&w, 4, 1e9, 0.1, &params(), AccountingMode::AllCoresOn).is_err());
    }

    #[test]
    fn workload_invariants_are_enforced() {
        assert!(Workload::new(0.0, 0.5).is_err());
        assert!(Workload::new(1e9, 1.5).is_err());
        assert!(Workload::new(1e9, -0.1).is_err());
    }

    proptest! {
        #[test]
        fn gated_energy_never_exceeds_all_on(
            f in 0.0f64..=1.0,
            p in 1u32..=64,
            f_p in 1e7f64..3.2e9,
        ) {
            let w = Workload::new(3.2e9, f).unwrap();
            let params = ChipParams::<f64>::default();
            let v_p = params.min_voltage_for_frequency(f_p.min(3.2e9)).unwrap();
            let on = simulate(&w, p, f_p, v_p, &params, AccountingMode::AllCoresOn).unwrap();
            let gated = simulate(&w, p, f_p, v_p, &params, AccountingMode::SerialPhaseGated).unwrap();
            prop_assert!(gated.energy_j <= on.energy_j);
            // Equality exactly when there is nothing to gate.
            if p == 1 || f == 1.0 {
                prop_assert_eq!(gated.energy_j, on.energy_j);
            } else {
                prop_assert!(gated.energy_j < on.energy_j);
            }
        }

        #[test]
        fn measured_speedup_matches_the_amdahl_model(f in 0.0f64..=1.0, p in 1u32..=64) {
            let w = Workload::new(3.2e9, f).unwrap();
            let model = SpeedupModel::Amdahl { parallel_fraction: f };
            let measured = measured_speedup(&w, p);
            let analytic = model.speedup_at(p).unwrap();
            prop_assert!(
                ((measured - analytic) / analytic).abs() <= 1e-13,
                "measured = {measured}, analytic = {analytic}"
            );
        }

        #[test]
        fn replay_time_closes_the_target_loop(
            f in 0.0f64..=1.0,
            p in 1u32..=64,
            t_r in 0.25f64..4.0,
        ) {
            // Running at f_p = f_s / (s_p * t_r) must finish in t_r * t_s.
            let params = ChipParams::<f64>::default();
            let reference = ReferencePoint::<f64>::default();
            let w = Workload::from_reference(&reference, f).unwrap();
            let s_p = measured_speedup(&w, p);
            let f_p = reference.f_s / (s_p * t_r);
            let Ok(v_p) = params.min_voltage_for_frequency(f_p) else {
                // Beyond the voltage cap; nothing to check.
                return Ok(());
            };
            let sim = simulate(&w, p, f_p, v_p, &params, AccountingMode::AllCoresOn).unwrap();
            let expected = t_r * reference.t_s;
            prop_assert!(((sim.t_total - expected) / expected).abs() <= 1e-12);
        }
    }
}
