//! Analytical voltage/frequency/energy planning for parallel workloads on
//! multicore CMOS chips.
//!
//! From a handful of chip constants and a speedup model, this crate answers:
//! at `p` cores and a given performance target, what is the lowest supply
//! voltage that still meets the deadline, what does the chip draw, and how
//! much energy does the whole run cost? Sweeping `p` produces the
//! energy/voltage curves that make the case for running wide and slow, near
//! the threshold voltage, whenever the code scales.
//!
//! The pieces:
//!
//! - [`model`]: the chip power/frequency relations and their inversion,
//!   assembled into per-core-count operating points.
//! - [`speedup`]: Amdahl or measured-table speedup models.
//! - [`planner`]: sweeps over core counts, minimum-energy points, frontiers
//!   across several targets.
//! - [`calibration`]: least-squares recovery of the chip constants from
//!   measurements.
//! - [`trace`]: a two-phase execution replay whose energy accounting
//!   cross-checks the analytical formula independently.
//!
//! All math is generic over the scalar type (any [`scalar::Real`], so `f32`
//! or `f64`); the `*64`/`*32` aliases at the crate root pick one. Everything
//! is a pure function of immutable inputs and safe to use across threads.
//!
//! ```
//! use voltplan::{sweep, ChipParams64, ReferencePoint64, SpeedupModel64, TargetSpec64};
//!
//! let params = ChipParams64::default();
//! let reference = ReferencePoint64::default();
//! let model = SpeedupModel64::Amdahl { parallel_fraction: 0.9 };
//! let target = TargetSpec64::new(1.0).unwrap();
//! let plan = sweep(&params, &reference, &model, target, 1..=64).unwrap();
//! let best = plan.optimal_point().unwrap();
//! assert!(best.e_j < plan.rows[0].e_j);
//! ```

pub mod calibration;
pub mod error;
pub mod model;
pub mod planner;
pub mod scalar;
pub mod speedup;
pub mod trace;

pub use calibration::{fit_power, fit_vf, CalibrationFit, FittedConstants, PowerSample, VfSample};
pub use error::{Error, Result};
pub use model::{
    plan_row, required_frequency, ChipParams, Feasibility, PlanRow, PowerBreakdown,
    ReferencePoint, TargetSpec,
};
pub use planner::{frontier, sweep, OperatingPlan};
pub use scalar::Real;
pub use speedup::{SpeedupModel, ValidationReport};
pub use trace::{measured_speedup, simulate, AccountingMode, SimResult, Workload};

/// Double-precision aliases; the CLI and the file formats use these.
pub type ChipParams64 = ChipParams<f64>;
pub type ReferencePoint64 = ReferencePoint<f64>;
pub type TargetSpec64 = TargetSpec<f64>;
pub type PowerBreakdown64 = PowerBreakdown<f64>;
pub type PlanRow64 = PlanRow<f64>;
pub type OperatingPlan64 = OperatingPlan<f64>;
pub type SpeedupModel64 = SpeedupModel<f64>;
pub type CalibrationFit64 = CalibrationFit<f64>;
pub type Workload64 = Workload<f64>;
pub type SimResult64 = SimResult<f64>;

/// Single-precision aliases, for embedding in space-constrained hosts.
pub type ChipParams32 = ChipParams<f32>;
pub type ReferencePoint32 = ReferencePoint<f32>;
pub type TargetSpec32 = TargetSpec<f32>;
pub type PowerBreakdown32 = PowerBreakdown<f32>;
pub type PlanRow32 = PlanRow<f32>;
pub type OperatingPlan32 = OperatingPlan<f32>;
pub type SpeedupModel32 = SpeedupModel<f32>;
pub type CalibrationFit32 = CalibrationFit<f32>;
pub type Workload32 = Workload<f32>;
pub type SimResult32 = SimResult<f32>;
