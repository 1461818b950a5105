//! Chip-level power and frequency model.
//!
//! Core relations: dynamic-plus-leakage power `P(V, F) = dyn_const*V^2*F +
//! i_leak*V`, the maximum sustainable frequency `F_max(V) = k2*(V - v_th)^h /
//! V`, the numerical inversion of `F_max`, the per-core frequency demanded by
//! a speedup and performance target, and the assembly of a full operating
//! point for one core count.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{real, real_u32, Real};

/// Absolute voltage step below which the bisection stops refining (volts).
const VOLTAGE_TOLERANCE: f64 = 1e-9;
/// Offset above the threshold voltage for the lower bisection bracket.
const BRACKET_EPS: f64 = 1e-12;
/// Iteration cap for the bisection solver.
const MAX_BISECT_ITERS: usize = 200;
/// Slack allowed when checking that a reference point is reachable: the
/// reference frequency may exceed `max_frequency(v_s)` by at most 1%.
const REFERENCE_SLACK: f64 = 0.01;

/// Electrical constants of one processing core.
///
/// All values are in SI base units: watts, volts, hertz, amperes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChipParams<T> {
    /// Lumped dynamic-power constant in W/(V^2*Hz): the proportionality
    /// constant times the switching-activity factor times the total switched
    /// capacitance. Only the product is observable.
    pub dyn_const: T,
    /// Total leakage current of one core, in amperes.
    pub i_leak: T,
    /// Frequency proportionality constant, stored so that [`max_frequency`]
    /// yields hertz with voltages in volts. Published listings of this
    /// parameter set print 4.02e-9, which would put the maximum frequency at
    /// 1.2 V near 3.2e-9 Hz, inconsistent with the 3.2 GHz at 1.2 V
    /// reference pair given alongside it; the hertz-consistent value is
    /// 4.02e9 and that is what this field holds. No conversion is applied on
    /// load.
    ///
    /// [`max_frequency`]: ChipParams::max_frequency
    pub k2: T,
    /// Threshold voltage, in volts.
    pub v_th: T,
    /// Technology exponent of the frequency relation, dimensionless, >= 1.
    pub h: T,
    /// Maximum permissible supply voltage, in volts.
    pub v_max: T,
    /// Model-validity floor, in volts. Operating points that solve below it
    /// are flagged infeasible instead of trusted.
    pub v_min: T,
}

impl<T: Real> Default for ChipParams<T> {
    /// Stock parameter set for a 3.2 GHz at 1.2 V reference-class core, used
    /// by the built-in configuration defaults. `v_min` defaults to
    /// `v_th + 0.01 V` and `v_max` to the reference supply voltage.
    fn default() -> Self {
        ChipParams {
            dyn_const: real(1.06e-8),
            i_leak: real(7.97e-2),
            k2: real(4.02e9),
            v_th: real(0.23),
            h: real(1.5),
            v_max: real(1.2),
            v_min: real(0.24),
        }
    }
}

impl<T: Real> ChipParams<T> {
    /// Checks every field invariant, reporting all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut violations = Vec::new();
        if !(self.dyn_const > T::zero() && self.dyn_const.is_finite()) {
            violations.push(format!("dyn_const = {} must be finite and > 0", self.dyn_const));
        }
        if !(self.i_leak >= T::zero() && self.i_leak.is_finite()) {
            violations.push(format!("i_leak = {} must be finite and >= 0", self.i_leak));
        }
        if !(self.k2 > T::zero() && self.k2.is_finite()) {
            violations.push(format!("k2 = {} must be finite and > 0", self.k2));
        }
        if !(self.v_th > T::zero() && self.v_th.is_finite()) {
            violations.push(format!("v_th = {} must be finite and > 0", self.v_th));
        }
        if !(self.h >= T::one() && self.h.is_finite()) {
            violations.push(format!("h = {} must be finite and >= 1", self.h));
        }
        if !(self.v_th < self.v_min && self.v_min < self.v_max && self.v_max.is_finite()) {
            violations.push(format!(
                "voltage bounds must satisfy v_th < v_min < v_max, got v_th = {}, v_min = {}, v_max = {}",
                self.v_th, self.v_min, self.v_max
            ));
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(violations.join("; ")))
        }
    }

    /// Maximum sustainable clock frequency at supply voltage `v`, in hertz:
    /// `k2 * (v - v_th)^h / v`. Strictly increasing in `v` above the
    /// threshold voltage.
    pub fn max_frequency(&self, v: T) -> Result<T> {
        if self.h < T::one() {
            return Err(Error::InvalidParams(format!("h = {} must be >= 1", self.h)));
        }
        if v < self.v_th {
            return Err(Error::Domain(format!(
                "supply voltage {} V is below the threshold voltage {} V",
                v, self.v_th
            )));
        }
        Ok(self.k2 * (v - self.v_th).powf(self.h) / v)
    }

    /// Smallest supply voltage in `[v_th, v_max]` that sustains frequency
    /// `f`, solved by bisection to an absolute tolerance of 1e-9 V (for
    /// `f64`). Returns `v_th` exactly for `f = 0` and an infeasible error
    /// when `f` exceeds the frequency cap at `v_max`.
    pub fn min_voltage_for_frequency(&self, f: T) -> Result<T> {
        if f < T::zero() {
            return Err(Error::Domain(format!("frequency {} Hz must be >= 0", f)));
        }
        if f == T::zero() {
            return Ok(self.v_th);
        }
        let cap = self.max_frequency(self.v_max)?;
        if f > cap {
            return Err(Error::Infeasible(format!(
                "{} Hz exceeds the {} Hz cap at v_max = {} V",
                f, cap, self.v_max
            )));
        }
        let mut lo = self.v_th + real(BRACKET_EPS);
        let mut hi = self.v_max;
        if self.max_frequency(lo)? >= f {
            // Root sits within BRACKET_EPS of the threshold voltage.
            return Ok(lo);
        }
        let tol = real(VOLTAGE_TOLERANCE);
        let half = real::<T>(0.5);
        for _ in 0..MAX_BISECT_ITERS {
            let mid = (lo + hi) * half;
            if mid <= lo || mid >= hi {
                // Scalar resolution exhausted; no further progress possible.
                break;
            }
            if self.max_frequency(mid)? < f {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= tol {
                break;
            }
        }
        Ok((lo + hi) * half)
    }

    /// Per-core power draw at supply voltage `v` and frequency `f`.
    pub fn core_power(&self, v: T, f: T) -> Result<PowerBreakdown<T>> {
        if v < T::zero() {
            return Err(Error::Domain(format!("supply voltage {} V must be >= 0", v)));
        }
        if f < T::zero() {
            return Err(Error::Domain(format!("frequency {} Hz must be >= 0", f)));
        }
        let dynamic_w = self.dyn_const * v * v * f;
        let leakage_w = self.i_leak * v;
        Ok(PowerBreakdown {
            dynamic_w,
            leakage_w,
            total_w: dynamic_w + leakage_w,
        })
    }
}

/// Single-core reference run that performance targets are defined against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePoint<T> {
    /// Reference single-core frequency, in hertz.
    pub f_s: T,
    /// Reference supply voltage, in volts.
    pub v_s: T,
    /// Single-core execution time at `f_s`, in seconds.
    pub t_s: T,
    /// Workload size in cycles, `f_s * t_s`. Total cycles are assumed
    /// independent of clock frequency, so execution time scales as `1/F`.
    pub w_cycles: T,
}

impl<T: Real> Default for ReferencePoint<T> {
    fn default() -> Self {
        ReferencePoint {
            f_s: real(3.2e9),
            v_s: real(1.2),
            t_s: real(1.0),
            w_cycles: real(3.2e9),
        }
    }
}

impl<T: Real> ReferencePoint<T> {
    /// Builds a reference point, deriving the workload size and checking
    /// that `f_s` is actually reachable at `v_s` (within 1% slack).
    pub fn new(f_s: T, v_s: T, t_s: T, params: &ChipParams<T>) -> Result<Self> {
        let mut violations = Vec::new();
        if !(f_s > T::zero() && f_s.is_finite()) {
            violations.push(format!("f_s = {} must be finite and > 0", f_s));
        }
        if !(t_s > T::zero() && t_s.is_finite()) {
            violations.push(format!("t_s = {} must be finite and > 0", t_s));
        }
        match params.max_frequency(v_s) {
            Ok(cap) => {
                if f_s > cap * real(1.0 + REFERENCE_SLACK) {
                    violations.push(format!(
                        "f_s = {} Hz is unreachable at v_s = {} V (cap {} Hz)",
                        f_s, v_s, cap
                    ));
                }
            }
            Err(e) => violations.push(format!("v_s = {} V: {}", v_s, e)),
        }
        if violations.is_empty() {
            Ok(ReferencePoint { f_s, v_s, t_s, w_cycles: f_s * t_s })
        } else {
            Err(Error::InvalidParams(violations.join("; ")))
        }
    }
}

/// Performance target: parallel execution time over the reference time.
/// `t_r = 0.25` demands four times the single-core performance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSpec<T> {
    pub t_r: T,
}

impl<T: Real> TargetSpec<T> {
    pub fn new(t_r: T) -> Result<Self> {
        if t_r > T::zero() && t_r.is_finite() {
            Ok(TargetSpec { t_r })
        } else {
            Err(Error::InvalidParams(format!("t_r = {} must be finite and > 0", t_r)))
        }
    }
}

/// Per-core power split into its switching and leakage parts, in watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBreakdown<T> {
    pub dynamic_w: T,
    pub leakage_w: T,
    pub total_w: T,
}

impl<T: Real> PowerBreakdown<T> {
    pub(crate) fn zero() -> Self {
        PowerBreakdown {
            dynamic_w: T::zero(),
            leakage_w: T::zero(),
            total_w: T::zero(),
        }
    }
}

/// Whether an operating point exists for a plan row, and if not, why.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    /// An operating point exists within `[v_min, v_max]`.
    Ok,
    /// The required frequency exceeds the cap at `v_max`; voltage, power,
    /// and energy are recorded as zero because no operating point exists.
    FrequencyExceedsVmaxCap,
    /// The solved voltage falls below the model-validity floor `v_min`;
    /// values are recorded but flagged untrusted.
    BelowVminFloor,
}

impl Feasibility {
    pub fn is_feasible(self) -> bool {
        matches!(self, Feasibility::Ok)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Feasibility::Ok => "ok",
            Feasibility::FrequencyExceedsVmaxCap => "frequency-exceeds-vmax-cap",
            Feasibility::BelowVminFloor => "below-vmin-floor",
        }
    }
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Feasibility {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(Feasibility::Ok),
            "frequency-exceeds-vmax-cap" => Ok(Feasibility::FrequencyExceedsVmaxCap),
            "below-vmin-floor" => Ok(Feasibility::BelowVminFloor),
            other => Err(Error::Parse(format!("unknown feasibility reason '{other}'"))),
        }
    }
}

/// One fully-resolved operating point: everything needed to run a workload
/// on `p` cores at the target performance level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanRow<T> {
    /// Core count.
    pub p: u32,
    /// Speedup at `p` cores.
    pub s_p: T,
    /// Required per-core frequency, in hertz.
    pub f_p: T,
    /// Minimum supply voltage sustaining `f_p`, in volts.
    pub v_p: T,
    /// Per-core power at `(v_p, f_p)`.
    pub power: PowerBreakdown<T>,
    /// Parallel execution time, in seconds.
    pub t_p: T,
    /// Total energy of the run, in joules: `p * total_w * t_p`.
    pub e_j: T,
    pub feasibility: Feasibility,
}

impl<T> PlanRow<T> {
    pub fn is_feasible(&self) -> bool {
        self.feasibility.is_feasible()
    }
}

/// Per-core frequency that hits the performance target: `f_s / (s_p * t_r)`.
///
/// With cycle-count invariance this makes the parallel run finish in exactly
/// `t_r * t_s`. Callers must supply `s_p >= 1`.
pub fn required_frequency<T: Real>(s_p: T, target: TargetSpec<T>, reference: &ReferencePoint<T>) -> T {
    debug_assert!(s_p >= T::one(), "speedup below 1 violates the caller contract");
    reference.f_s / (s_p * target.t_r)
}

/// Resolves the full operating point for `p` cores at speedup `s_p`.
///
/// Infeasibility is recorded in the row rather than returned as an error:
/// a frequency beyond the `v_max` cap zeroes the voltage, power, and energy
/// fields (no operating point exists), while a voltage below `v_min` keeps
/// the computed values and flags them.
///
/// # Panics
///
/// Panics if `params` fail [`ChipParams::validate`]; validate first.
pub fn plan_row<T: Real>(
    p: u32,
    s_p: T,
    target: TargetSpec<T>,
    reference: &ReferencePoint<T>,
    params: &ChipParams<T>,
) -> PlanRow<T> {
    debug_assert!(p >= 1, "core counts start at 1");
    let f_p = required_frequency(s_p, target, reference);
    let t_p = target.t_r * reference.t_s;
    let cap = params
        .max_frequency(params.v_max)
        .expect("chip params must be validated before planning");
    if f_p > cap {
        return PlanRow {
            p,
            s_p,
            f_p,
            v_p: T::zero(),
            power: PowerBreakdown::zero(),
            t_p,
            e_j: T::zero(),
            feasibility: Feasibility::FrequencyExceedsVmaxCap,
        };
    }
    let v_p = params
        .min_voltage_for_frequency(f_p)
        .expect("frequency is within the cap by construction");
    let power = params
        .core_power(v_p, f_p)
        .expect("solved voltage and frequency are non-negative");
    let e_j = real_u32::<T>(p) * power.total_w * t_p;
    let feasibility = if v_p < params.v_min {
        Feasibility::BelowVminFloor
    } else {
        Feasibility::Ok
    };
    PlanRow { p, s_p, f_p, v_p, power, t_p, e_j, feasibility }
}

#[cfg(test)]
mod tests {
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    use super::*;
    use crate::error::Error;

    fn params() -> ChipParams<f64> {
        ChipParams::default()
    }

    fn reference() -> ReferencePoint<f64> {
        ReferencePoint::default()
    }

    #[test]
    fn default_params_pass_validation() {
        params().validate().unwrap();
        ReferencePoint::new(3.2e9, 1.2, 1.0, &params()).unwrap();
    }

    #[test]
    fn validation_reports_every_violation() {
        let mut p = params();
        p.k2 = -1.0;
        p.h = 0.5;
        p.v_min = 2.0;
        let msg = p.validate().unwrap_err().to_string();
        assert!(msg.contains("k2"));
        assert!(msg.contains("h"));
        assert!(msg.contains("v_min"));
    }

    #[test]
    fn reference_pair_frequency_is_consistent() {
        let f = params().max_frequency(1.2).unwrap();
        // Frozen: 4.02e9 * 0.97^1.5 / 1.2.
        assert_relative_eq!(f, 3.20038634269364e9, max_relative = 1e-12);
        assert_relative_eq!(f, 3.2e9, max_relative = 5e-3);
    }

    #[test]
    fn threshold_voltage_yields_zero_frequency() {
        assert_eq!(params().max_frequency(0.23).unwrap(), 0.0);
    }

    #[test]
    fn frequency_at_half_volt() {
        let f = params().max_frequency(0.5).unwrap();
        assert_relative_eq!(f, 1.12798076792116e9, max_relative = 1e-12);
    }

    #[test]
    fn below_threshold_is_a_domain_error() {
        assert!(matches!(params().max_frequency(0.2), Err(Error::Domain(_))));
    }

    #[test]
    fn exponent_below_one_is_rejected() {
        let mut p = params();
        p.h = 0.99;
        assert!(matches!(p.max_frequency(1.0), Err(Error::InvalidParams(_))));
        assert!(p.validate().is_err());
    }

    #[test]
    fn inversion_recovers_the_reference_pair() {
        let v = params().min_voltage_for_frequency(3.2e9).unwrap();
        assert_abs_diff_eq!(v, 1.19983071245, epsilon = 1e-6);
        assert_abs_diff_eq!(v, 1.2, epsilon = 2e-3);
    }

    #[test]
    fn inversion_of_zero_returns_the_threshold_voltage() {
        assert_eq!(params().min_voltage_for_frequency(0.0).unwrap(), 0.23);
    }

    #[test]
    fn inversion_at_500_mhz() {
        let v = params().min_voltage_for_frequency(5e8).unwrap();
        assert_abs_diff_eq!(v, 0.354901576425, epsilon = 1e-6);
    }

    #[test]
    fn inversion_beyond_the_cap_is_infeasible() {
        assert!(matches!(
            params().min_voltage_for_frequency(4e9),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn inversion_of_negative_frequency_is_a_domain_error() {
        assert!(matches!(
            params().min_voltage_for_frequency(-1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn inversion_at_the_cap_stays_within_bounds() {
        let p = params();
        let cap = p.max_frequency(p.v_max).unwrap();
        let v = p.min_voltage_for_frequency(cap).unwrap();
        assert!(v <= p.v_max);
        assert_abs_diff_eq!(v, p.v_max, epsilon = 1e-6);
    }

    #[test]
    fn power_at_the_reference_point() {
        let pw = params().core_power(1.2, 3.2e9).unwrap();
        assert_relative_eq!(pw.dynamic_w, 48.8448, max_relative = 1e-12);
        assert_relative_eq!(pw.leakage_w, 0.09564, max_relative = 1e-12);
        assert_relative_eq!(pw.total_w, 48.94044, max_relative = 1e-12);
    }

    #[test]
    fn power_at_zero_frequency_is_leakage_only() {
        let pw = params().core_power(0.8, 0.0).unwrap();
        assert_eq!(pw.dynamic_w, 0.0);
        assert_relative_eq!(pw.total_w, 7.97e-2 * 0.8, max_relative = 1e-15);
    }

    #[test]
    fn power_at_the_near_threshold_point() {
        let pw = params().core_power(0.3549, 5e8).unwrap();
        assert_relative_eq!(pw.total_w, 0.695841783, max_relative = 1e-9);
    }

    #[test]
    fn negative_inputs_to_core_power_are_domain_errors() {
        assert!(matches!(params().core_power(-0.1, 1e9), Err(Error::Domain(_))));
        assert!(matches!(params().core_power(0.5, -1e9), Err(Error::Domain(_))));
    }

    #[test]
    fn required_frequency_identity() {
        let f = required_frequency(1.0, TargetSpec::new(1.0).unwrap(), &reference());
        assert_eq!(f, 3.2e9);
    }

    #[test]
    fn required_frequency_scales_down_with_speedup() {
        let f = required_frequency(6.4, TargetSpec::new(1.0).unwrap(), &reference());
        assert_relative_eq!(f, 5e8, max_relative = 1e-12);
    }

    #[test]
    fn required_frequency_scales_up_with_tighter_targets() {
        let f = required_frequency(6.4, TargetSpec::new(0.25).unwrap(), &reference());
        assert_relative_eq!(f, 2e9, max_relative = 1e-12);
    }

    #[test]
    fn plan_row_at_the_reference_point() {
        let row = plan_row(1, 1.0, TargetSpec::new(1.0).unwrap(), &reference(), &params());
        assert!(row.is_feasible());
        // Frozen by the independent bisection oracle; compatible with the
        // quoted 48.94 J figure to within 1%.
        assert_relative_eq!(row.e_j, 48.9266461194, max_relative = 1e-8);
        assert_relative_eq!(row.e_j, 48.94, max_relative = 0.01);
    }

    #[test]
    fn plan_row_for_sixteen_cores() {
        let row = plan_row(16, 6.4, TargetSpec::new(1.0).unwrap(), &reference(), &params());
        assert!(row.is_feasible());
        assert_relative_eq!(row.f_p, 5e8, max_relative = 1e-12);
        assert_abs_diff_eq!(row.v_p, 0.354901576425, epsilon = 1e-6);
        assert_relative_eq!(row.e_j, 11.1335654252, max_relative = 1e-8);
        let single = plan_row(1, 1.0, TargetSpec::new(1.0).unwrap(), &reference(), &params());
        assert!(single.e_j / row.e_j > 4.0);
    }

    #[test]
    fn plan_row_beyond_the_frequency_cap() {
        let row = plan_row(2, 1.333, TargetSpec::new(0.1).unwrap(), &reference(), &params());
        assert_eq!(row.feasibility, Feasibility::FrequencyExceedsVmaxCap);
        assert_relative_eq!(row.f_p, 3.2e9 / 0.1333, max_relative = 1e-12);
        assert_eq!(row.v_p, 0.0);
        assert_eq!(row.e_j, 0.0);
    }

    #[test]
    fn plan_row_below_the_voltage_floor() {
        // s_p = 1, t_r = 1000 asks for 3.2 MHz, solvable only below v_min.
        let row = plan_row(1, 1.0, TargetSpec::new(1000.0).unwrap(), &reference(), &params());
        assert_eq!(row.feasibility, Feasibility::BelowVminFloor);
        assert!(row.v_p > 0.23 && row.v_p < 0.24);
        assert_abs_diff_eq!(row.v_p, 0.233254638893, epsilon = 1e-6);
        assert!(row.e_j > 0.0);
    }

    #[test]
    fn frequencies_above_the_reference_are_allowed_up_to_the_cap() {
        // t_r slightly below 1 pushes f_p just above f_s but under the cap.
        let row = plan_row(1, 1.0, TargetSpec::new(0.99995).unwrap(), &reference(), &params());
        assert!(row.f_p > 3.2e9);
        assert!(row.is_feasible());
        assert!(row.v_p <= 1.2);
    }

    #[test]
    fn energy_scales_linearly_with_reference_time() {
        let p = params();
        let target = TargetSpec::new(0.5).unwrap();
        let r1 = ReferencePoint::new(3.2e9, 1.2, 1.0, &p).unwrap();
        let r2 = ReferencePoint::new(3.2e9, 1.2, 2.0, &p).unwrap();
        let row1 = plan_row(8, 4.0, target, &r1, &p);
        let row2 = plan_row(8, 4.0, target, &r2, &p);
        assert_eq!(row2.e_j, 2.0 * row1.e_j);
    }

    #[test]
    fn unreachable_reference_is_rejected() {
        let err = ReferencePoint::new(4.0e9, 1.2, 1.0, &params()).unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)));
    }

    #[test]
    fn feasibility_reasons_round_trip_through_strings() {
        for f in [
            Feasibility::Ok,
            Feasibility::FrequencyExceedsVmaxCap,
            Feasibility::BelowVminFloor,
        ] {
            assert_eq!(f.as_str().parse::<Feasibility>().unwrap(), f);
        }
        assert!("nonsense".parse::<Feasibility>().is_err());
    }

    proptest! {
        #[test]
        fn max_frequency_is_strictly_increasing(
            v_th in 0.1f64..0.5,
            h in 1.0f64..3.0,
            k2 in 1e8f64..1e10,
            lo_frac in 0.0f64..1.0,
            gap_frac in 0.01f64..0.5,
        ) {
            let p = ChipParams::<f64> {
                v_th,
                h,
                k2,
                v_max: v_th + 1.0,
                v_min: v_th + 0.01,
                ..ChipParams::default()
            };
            let span = p.v_max - v_th;
            let v1 = v_th + 1e-3 + lo_frac * (span - 1e-3) * 0.5;
            let v2 = v1 + gap_frac * (p.v_max - v1);
            prop_assert!(p.max_frequency(v1).unwrap() < p.max_frequency(v2).unwrap());
        }

        #[test]
        fn inversion_round_trips_within_a_microvolt(v in 0.24f64..=1.2) {
            let p = ChipParams::<f64>::default();
            let f = p.max_frequency(v).unwrap();
            let back = p.min_voltage_for_frequency(f).unwrap();
            prop_assert!((back - v).abs() <= 1e-6, "v = {v}, back = {back}");
        }

        #[test]
        fn feasible_rows_satisfy_their_contract(
            s_p in 1.0f64..64.0,
            t_r in 0.05f64..4.0,
            p in 1u32..=64,
        ) {
            let params = ChipParams::<f64>::default();
            let reference = ReferencePoint::<f64>::default();
            let row = plan_row(p, s_p, TargetSpec::new(t_r).unwrap(), &reference, &params);
            if row.is_feasible() {
                prop_assert!(row.v_p >= params.v_min && row.v_p <= params.v_max);
                let back = params.max_frequency(row.v_p).unwrap();
                prop_assert!(((back - row.f_p) / row.f_p).abs() <= 1e-6);
            }
            // Energy composition holds for every row, feasible or not.
            prop_assert_eq!(row.e_j, f64::from(p) * row.power.total_w * row.t_p);
        }
    }
}
