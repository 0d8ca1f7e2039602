//! Memristor state models: linear drift, drift with relaxation, threshold
//! switching. State `x` lives in `[0, 1]` and is advanced by explicit Euler.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{argument, Result};
use crate::math;

/// Internal device state, hard-clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceState {
    x: f64,
}

impl DeviceState {
    /// Builds a state, rejecting values outside `[0, 1]`.
    pub fn new(x: f64) -> Result<Self> {
        if !x.is_finite() || !(0.0..=1.0).contains(&x) {
            return Err(argument(format!("device state {x} outside [0, 1]")));
        }
        Ok(Self { x })
    }

    /// Fully reset state (`x = 0`).
    pub fn reset() -> Self {
        Self { x: 0.0 }
    }

    /// Current state value.
    pub fn x(&self) -> f64 {
        self.x
    }

    fn advanced(self, dx: f64) -> Self {
        Self { x: (self.x + dx).clamp(0.0, 1.0) }
    }
}

/// Parameters of the current-controlled linear drift model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearParams {
    /// Conductance at `x = 1`.
    pub g_on: f64,
    /// Conductance at `x = 0`.
    pub g_off: f64,
    /// Current-to-state gain (1/(A*s)).
    pub k: f64,
}

/// Linear drift plus first-order relaxation toward `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftRelaxParams {
    /// Conductance at `x = 1`.
    pub g_on: f64,
    /// Conductance at `x = 0`.
    pub g_off: f64,
    /// Current-to-state gain (1/(A*s)).
    pub k: f64,
    /// Relaxation rate (1/s).
    pub xi: f64,
}

/// Polarity of the below-threshold branch of the threshold model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NegativeBranch {
    /// Voltages below `v_tn` drive the state toward 0 (default; required for
    /// reverse-pulse reset to work).
    #[default]
    Lowering,
    /// Voltages below `v_tn` raise the state, mirroring model variants whose
    /// reverse branch also charges the device.
    Raising,
}

/// Parameters of the voltage-threshold switching model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdParams {
    /// Resistance at `x = 1`.
    pub r_on: f64,
    /// Resistance at `x = 0`.
    pub r_off: f64,
    /// Positive switching threshold (V), `> 0`.
    pub v_tp: f64,
    /// Negative switching threshold (V), `< 0`.
    pub v_tn: f64,
    /// Rate gain above `v_tp` (1/(V*s)).
    pub beta_p: f64,
    /// Rate gain below `v_tn` (1/(V*s)).
    pub beta_n: f64,
    /// Behavior of the below-threshold branch.
    pub negative_branch: NegativeBranch,
}

impl Default for ThresholdParams {
    fn default() -> Self {
        Self {
            r_on: 400.0,
            r_off: 1.0e6,
            v_tp: 80.0e-3,
            v_tn: -35.0e-3,
            beta_p: 19.6e3,
            beta_n: 17.5e3,
            negative_branch: NegativeBranch::Lowering,
        }
    }
}

impl ThresholdParams {
    /// Checks the parameter set for internal consistency.
    pub fn validate(&self) -> Result<()> {
        if !(self.r_on > 0.0 && self.r_off > self.r_on) {
            return Err(argument("need 0 < r_on < r_off"));
        }
        if !(self.v_tp > 0.0 && self.v_tn < 0.0) {
            return Err(argument("need v_tn < 0 < v_tp"));
        }
        if !(self.beta_p > 0.0 && self.beta_n > 0.0) {
            return Err(argument("rate gains must be positive"));
        }
        Ok(())
    }
}

/// Conductance of the linear-drift device at the given state.
pub fn conductance(state: DeviceState, params: &LinearParams) -> f64 {
    params.g_on * state.x + params.g_off * (1.0 - state.x)
}

/// Resistance of the threshold device at the given state.
pub fn resistance(state: DeviceState, params: &ThresholdParams) -> f64 {
    params.r_off * (1.0 - state.x) + params.r_on * state.x
}

/// One Euler step of the linear drift model under current `i`.
pub fn step_linear(state: DeviceState, i: f64, dt: f64, params: &LinearParams) -> DeviceState {
    state.advanced(params.k * i * dt)
}

/// One Euler step of drift with relaxation under current `i`.
pub fn step_drift_relax(
    state: DeviceState,
    i: f64,
    dt: f64,
    params: &DriftRelaxParams,
) -> DeviceState {
    state.advanced((params.k * i - params.xi * state.x) * dt)
}

/// Switching rate of the threshold model at device voltage `v`.
pub fn threshold_rate(v: f64, params: &ThresholdParams) -> f64 {
    if v > params.v_tp {
        params.beta_p * (v - params.v_tp)
    } else if v < params.v_tn {
        match params.negative_branch {
            NegativeBranch::Lowering => params.beta_n * (v - params.v_tn),
            NegativeBranch::Raising => -params.beta_n * (v - params.v_tn),
        }
    } else {
        0.0
    }
}

/// One Euler step of the threshold model under device voltage `v`. Voltages
/// inside `(v_tn, v_tp)` leave the state bit-identical.
pub fn step_threshold(state: DeviceState, v: f64, dt: f64, params: &ThresholdParams) -> DeviceState {
    let rate = threshold_rate(v, params);
    if rate == 0.0 {
        return state;
    }
    state.advanced(rate * dt)
}

/// One point of a quasi-static sweep trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSample {
    /// Sample time (s).
    pub t: f64,
    /// Applied device voltage (V).
    pub v: f64,
    /// Device current `v / R(x)` (A).
    pub i: f64,
    /// Device state after integrating up to `t`.
    pub x: f64,
}

/// Integrates the threshold model along a piecewise-linear voltage waveform
/// `(t, v)` and reports one sample per waveform point. Substeps never exceed
/// `dt_max`.
pub fn iv_sweep(
    params: &ThresholdParams,
    waveform: &[(f64, f64)],
    x0: f64,
    dt_max: f64,
) -> Result<Vec<SweepSample>> {
    params.validate()?;
    if waveform.is_empty() {
        return Err(argument("waveform needs at least one sample"));
    }
    if !(dt_max > 0.0) || !dt_max.is_finite() {
        return Err(argument(format!("dt_max {dt_max} must be positive")));
    }
    for pair in waveform.windows(2) {
        if !(pair[1].0 > pair[0].0) {
            return Err(argument(format!(
                "waveform times must strictly increase, saw {} then {}",
                pair[0].0, pair[1].0
            )));
        }
    }
    if waveform.iter().any(|&(t, v)| !t.is_finite() || !v.is_finite()) {
        return Err(argument("waveform samples must be finite"));
    }
    let mut state = DeviceState::new(x0)?;
    let mut out = Vec::with_capacity(waveform.len());
    let (t0, v0) = waveform[0];
    out.push(SweepSample { t: t0, v: v0, i: v0 / resistance(state, params), x: state.x });
    for pair in waveform.windows(2) {
        let (ta, va) = pair[0];
        let (tb, vb) = pair[1];
        let span = tb - ta;
        let steps = math::ceil(span / dt_max).max(1.0) as u64;
        let dt = span / steps as f64;
        for k in 0..steps {
            let t = ta + k as f64 * dt;
            let v = va + (vb - va) * ((t - ta) / span);
            state = step_threshold(state, v, dt, params);
        }
        out.push(SweepSample { t: tb, v: vb, i: vb / resistance(state, params), x: state.x });
    }
    Ok(out)
}

/// Triangle waveform `0 -> +amplitude -> -amplitude -> 0` swept at `rate`
/// volts per second, sampled every `sample_dt`.
pub fn triangle_waveform(amplitude: f64, rate: f64, sample_dt: f64) -> Result<Vec<(f64, f64)>> {
    if !(amplitude > 0.0) || !(rate > 0.0) || !(sample_dt > 0.0) {
        return Err(argument("amplitude, rate and sample_dt must be positive"));
    }
    let quarter = amplitude / rate;
    let total = 4.0 * quarter;
    let steps = math::ceil(total / sample_dt) as u64;
    let mut wave = Vec::with_capacity(steps as usize + 1);
    for k in 0..=steps {
        let t = (k as f64 * sample_dt).min(total);
        let phase = t / quarter;
        let v = if phase <= 1.0 {
            amplitude * phase
        } else if phase <= 3.0 {
            amplitude * (2.0 - phase)
        } else {
            amplitude * (phase - 4.0)
        };
        wave.push((t, v));
        if t >= total {
            break;
        }
    }
    Ok(wave)
}
