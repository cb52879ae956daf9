use crate::error::{Error, Result};

/// Qubit detuning Δq (MHz) that puts the system at `ratio` = λ/λc with
/// λc = √(Δq·Δr). Δq carries the sign of Δr so λc stays real.
pub fn ratio_to_detuning(ratio: f64, lambda: f64, delta_r: f64) -> Result<f64> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::InvalidParameter(format!("ratio must be positive, got {ratio}")));
    }
    if delta_r == 0.0 || !delta_r.is_finite() {
        return Err(Error::InvalidParameter("critical ratio needs a nonzero resonator detuning".into()));
    }
    Ok(lambda * lambda / (ratio * ratio * delta_r))
}

/// |λc| = √(Δq·Δr) for same-sign detunings.
pub fn critical_coupling(delta_q: f64, delta_r: f64) -> f64 {
    (delta_q * delta_r).abs().sqrt()
}

/// Linear ramp of λ/λc over the drive window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSchedule {
    pub ratio_start: f64,
    pub ratio_end: f64,
    /// Sweep duration (ns).
    pub tau: f64,
    /// Resonator drive applied for the whole window.
    pub drive_on: bool,
    /// Integrator step (ns).
    pub dt: f64,
    /// Steps between recorded samples.
    pub sample_stride: usize,
}

impl Default for SweepSchedule {
    fn default() -> Self {
        Self { ratio_start: 0.5, ratio_end: 2.5, tau: 600.0, drive_on: true, dt: 0.02, sample_stride: 50 }
    }
}

impl SweepSchedule {
    pub fn with_tau(tau: f64) -> Self {
        Self { tau, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.ratio_start > 0.0 && self.ratio_start < self.ratio_end && self.ratio_end.is_finite()) {
            return bad(format!("need 0 < ratio_start < ratio_end, got {} and {}", self.ratio_start, self.ratio_end));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return bad(format!("tau must be positive, got {}", self.tau));
        }
        if !(self.dt > 0.0 && self.dt <= self.tau / 100.0) {
            return bad(format!("dt must lie in (0, tau/100], got {}", self.dt));
        }
        if self.sample_stride == 0 {
            return bad("sample_stride must be at least 1".into());
        }
        Ok(())
    }

    /// Number of integrator steps covering [0, tau].
    pub fn steps(&self) -> usize {
        (self.tau / self.dt).round() as usize
    }

    /// Ratio at time `t` without range checking (used inside RK stages).
    pub(crate) fn ratio_unchecked(&self, t: f64) -> f64 {
        self.ratio_start + (self.ratio_end - self.ratio_start) * (t / self.tau)
    }
}

/// λ/λc at time `t` ∈ [0, tau].
pub fn schedule_ratio(t: f64, schedule: &SweepSchedule) -> Result<f64> {
    // Allow rounding slack from step accumulation at the window end.
    let slack = 1e-9 * schedule.tau;
    if !(t >= -slack && t <= schedule.tau + slack) {
        return Err(Error::InvalidParameter(format!("t = {t} ns outside sweep window [0, {}]", schedule.tau)));
    }
    Ok(schedule.ratio_unchecked(t.clamp(0.0, schedule.tau)))
}
