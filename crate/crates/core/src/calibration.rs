//! Least-squares recovery of the model constants from measured samples.
//!
//! Two independent fits: frequency-versus-voltage samples yield `(k2, v_th)`
//! with the technology exponent `h` held fixed, and power samples yield
//! `(dyn_const, i_leak)` by ordinary least squares (the power model is
//! linear in both constants).

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Number of coarse grid points bracketing the threshold-voltage search.
const VTH_GRID_POINTS: usize = 65;
/// Interval width at which the golden-section refinement stops (volts).
const VTH_TOLERANCE: f64 = 1e-12;
/// Iteration cap for the golden-section refinement.
const MAX_GOLDEN_ITERS: usize = 200;
/// Normalized-determinant floor below which the power fit is declared
/// collinear.
const COLLINEARITY_FLOOR: f64 = 1e-12;

/// A measured maximum-frequency point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VfSample<T> {
    /// Supply voltage, volts.
    pub v: T,
    /// Maximum sustainable frequency observed at `v`, hertz.
    pub f_max: T,
}

/// A measured total-power point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSample<T> {
    /// Supply voltage, volts.
    pub v: T,
    /// Clock frequency, hertz.
    pub f: T,
    /// Observed total power, watts.
    pub p_w: T,
}

/// Constants recovered by a fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FittedConstants<T> {
    VoltageFrequency {
        k2: T,
        v_th: T,
    },
    Power {
        dyn_const: T,
        i_leak: T,
        /// True when a negative least-squares coefficient was clamped to
        /// zero; physically impossible signs indicate bad data.
        clamped: bool,
    },
}

/// Result of a calibration fit: the constants, the root-mean-square residual
/// in the units of the fitted observable, and how many samples went in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationFit<T> {
    pub constants: FittedConstants<T>,
    pub rms_residual: T,
    pub sample_count: usize,
}

fn validate_vf_samples<T: Real>(samples: &[VfSample<T>]) -> Result<()> {
    for (i, s) in samples.iter().enumerate() {
        if !(s.v > T::zero() && s.v.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "sample {i}: v = {} must be finite and > 0",
                s.v
            )));
        }
        if !(s.f_max >= T::zero() && s.f_max.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "sample {i}: f_max = {} must be finite and >= 0",
                s.f_max
            )));
        }
    }
    Ok(())
}

/// Closed-form least-squares `k2` and the residual sum of squares for a
/// fixed threshold-voltage candidate. The frequency model is linear in `k2`
/// once `v_th` is pinned, which is what makes the nested search work; this
/// profile is exposed so the search landscape can be inspected directly.
pub fn vf_sse_at<T: Real>(samples: &[VfSample<T>], h: T, v_th: T) -> Result<(T, T)> {
    if h < T::one() {
        return Err(Error::InvalidParams(format!("h = {h} must be >= 1")));
    }
    validate_vf_samples(samples)?;
    if samples.iter().any(|s| v_th >= s.v) {
        return Err(Error::Domain(format!(
            "v_th candidate {v_th} is not below every sample voltage"
        )));
    }
    let mut zz = T::zero();
    let mut zf = T::zero();
    for s in samples {
        let z = (s.v - v_th).powf(h) / s.v;
        zz = zz + z * z;
        zf = zf + z * s.f_max;
    }
    let k2 = if zz > T::zero() { zf / zz } else { T::zero() };
    let mut sse = T::zero();
    for s in samples {
        let z = (s.v - v_th).powf(h) / s.v;
        let r = s.f_max - k2 * z;
        sse = sse + r * r;
    }
    Ok((k2, sse))
}

/// Fits `(k2, v_th)` to maximum-frequency samples with `h` held fixed.
///
/// The threshold voltage is found by a coarse scan of `(0, min v)` followed
/// by golden-section refinement of the best bracket; for each candidate the
/// optimal `k2` is closed-form. Needs at least two samples at two distinct
/// voltages.
pub fn fit_vf<T: Real>(samples: &[VfSample<T>], h: T) -> Result<CalibrationFit<T>> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 frequency samples, got {}",
            samples.len()
        )));
    }
    validate_vf_samples(samples)?;
    if h < T::one() {
        return Err(Error::InvalidParams(format!("h = {h} must be >= 1")));
    }
    let min_v = samples.iter().map(|s| s.v).fold(T::infinity(), T::min);
    let distinct = samples
        .iter()
        .any(|s| s.v != samples[0].v);
    if !distinct {
        return Err(Error::DegenerateData(format!(
            "all samples share v = {}; the threshold voltage is unidentifiable",
            samples[0].v
        )));
    }
    if samples.iter().all(|s| s.f_max == T::zero()) {
        return Err(Error::DegenerateData(
            "every frequency sample is zero; k2 is unidentifiable".into(),
        ));
    }

    let hi = min_v * real(1.0 - 1e-9);
    let step = hi / real(VTH_GRID_POINTS as f64 - 1.0);
    let mut best_vth = T::zero();
    let mut best_sse = T::infinity();
    let mut best_idx = 0usize;
    for i in 0..VTH_GRID_POINTS {
        let vth = step * real(i as f64);
        let (_, sse) = vf_sse_at(samples, h, vth)?;
        if sse < best_sse {
            best_sse = sse;
            best_vth = vth;
            best_idx = i;
        }
    }

    // Golden-section refinement inside the bracket around the best grid
    // point; the best candidate evaluated anywhere wins.
    let mut a = step * real(best_idx.saturating_sub(1) as f64);
    let mut b = step * real((best_idx + 1).min(VTH_GRID_POINTS - 1) as f64);
    let inv_phi = real::<T>(0.618_033_988_749_894_8);
    let tol = real(VTH_TOLERANCE);
    let mut x1 = b - (b - a) * inv_phi;
    let mut x2 = a + (b - a) * inv_phi;
    let (_, mut f1) = vf_sse_at(samples, h, x1)?;
    let (_, mut f2) = vf_sse_at(samples, h, x2)?;
    for _ in 0..MAX_GOLDEN_ITERS {
        if f1 < best_sse {
            best_sse = f1;
            best_vth = x1;
        }
        if f2 < best_sse {
            best_sse = f2;
            best_vth = x2;
        }
        if b - a <= tol || !(a < x1 && x1 < x2 && x2 < b) {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - (b - a) * inv_phi;
            f1 = vf_sse_at(samples, h, x1)?.1;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + (b - a) * inv_phi;
            f2 = vf_sse_at(samples, h, x2)?.1;
        }
    }

    let (k2, sse) = vf_sse_at(samples, h, best_vth)?;
    let n = real::<T>(samples.len() as f64);
    Ok(CalibrationFit {
        constants: FittedConstants::VoltageFrequency { k2, v_th: best_vth },
        rms_residual: (sse / n).sqrt(),
        sample_count: samples.len(),
    })
}

/// Fits `(dyn_const, i_leak)` to total-power samples by ordinary least
/// squares on the regressors `v^2 * f` and `v`, with column scaling for
/// numerical stability. Negative coefficients are clamped to zero and
/// flagged.
pub fn fit_power<T: Real>(samples: &[PowerSample<T>]) -> Result<CalibrationFit<T>> {
    if samples.len() < 2 {
        return Err(Error::Underdetermined(format!(
            "need at least 2 power samples, got {}",
            samples.len()
        )));
    }
    for (i, s) in samples.iter().enumerate() {
        if !(s.v >= T::zero() && s.f >= T::zero() && s.p_w >= T::zero())
            || !(s.v.is_finite() && s.f.is_finite() && s.p_w.is_finite())
        {
            return Err(Error::InvalidParams(format!(
                "sample {i}: v, f, p_w must all be finite and >= 0"
            )));
        }
    }
    let mut s11 = T::zero();
    let mut s22 = T::zero();
    for s in samples {
        let x1 = s.v * s.v * s.f;
        s11 = s11 + x1 * x1;
        s22 = s22 + s.v * s.v;
    }
    if s11 == T::zero() {
        return Err(Error::Underdetermined(
            "the dynamic-power regressor v^2*f vanishes in every sample".into(),
        ));
    }
    if s22 == T::zero() {
        return Err(Error::Underdetermined(
            "the leakage regressor v vanishes in every sample".into(),
        ));
    }
    let scale1 = s11.sqrt();
    let scale2 = s22.sqrt();
    let mut rho = T::zero();
    let mut b1 = T::zero();
    let mut b2 = T::zero();
    for s in samples {
        let x1 = s.v * s.v * s.f / scale1;
        let x2 = s.v / scale2;
        rho = rho + x1 * x2;
        b1 = b1 + x1 * s.p_w;
        b2 = b2 + x2 * s.p_w;
    }
    let det = T::one() - rho * rho;
    if det.abs() <= real(COLLINEARITY_FLOOR) {
        return Err(Error::Underdetermined(
            "the regressors v^2*f and v are collinear across the samples".into(),
        ));
    }
    let mut dyn_const = (b1 - rho * b2) / det / scale1;
    let mut i_leak = (b2 - rho * b1) / det / scale2;
    let mut clamped = false;
    if dyn_const < T::zero() {
        dyn_const = T::zero();
        clamped = true;
    }
    if i_leak < T::zero() {
        i_leak = T::zero();
        clamped = true;
    }
    let mut sse = T::zero();
    for s in samples {
        let r = s.p_w - dyn_const * s.v * s.v * s.f - i_leak * s.v;
        sse = sse + r * r;
    }
    let n = real::<T>(samples.len() as f64);
    Ok(CalibrationFit {
        constants: FittedConstants::Power { dyn_const, i_leak, clamped },
        rms_residual: (sse / n).sqrt(),
        sample_count: samples.len(),
    })
}

fn read_numeric_csv<R: Read>(reader: R, expected_header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?;
    let got: Vec<_> = headers.iter().collect();
    if got != expected_header {
        return Err(Error::Parse(format!(
            "expected header '{}', got '{}'",
            expected_header.join(","),
            got.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let line = i + 2;
        if record.len() != expected_header.len() {
            return Err(Error::Parse(format!(
                "line {line}: expected {} fields, got {}",
                expected_header.len(),
                record.len()
            )));
        }
        let mut row = Vec::with_capacity(record.len());
        for (field, name) in record.iter().zip(expected_header) {
            let x: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}: invalid {name} value '{field}'")))?;
            row.push(x);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Reads `v,f_max` samples from CSV.
pub fn load_vf_samples<T: Real, R: Read>(reader: R) -> Result<Vec<VfSample<T>>> {
    Ok(read_numeric_csv(reader, &["v", "f_max"])?
        .into_iter()
        .map(|row| VfSample { v: real(row[0]), f_max: real(row[1]) })
        .collect())
}

/// Reads `v,f,p_w` samples from CSV.
pub fn load_power_samples<T: Real, R: Read>(reader: R) -> Result<Vec<PowerSample<T>>> {
    Ok(read_numeric_csv(reader, &["v", "f", "p_w"])?
        .into_iter()
        .map(|row| PowerSample { v: real(row[0]), f: real(row[1]), p_w: real(row[2]) })
        .collect())
}

/// [`load_vf_samples`] reading from a file path.
pub fn load_vf_samples_path<T: Real, P: AsRef<Path>>(path: P) -> Result<Vec<VfSample<T>>> {
    load_vf_samples(std::fs::File::open(path.as_ref())?)
}

/// [`load_power_samples`] reading from a file path.
pub fn load_power_samples_path<T: Real, P: AsRef<Path>>(path: P) -> Result<Vec<PowerSample<T>>> {
    load_power_samples(std::fs::File::open(path.as_ref())?)
}
