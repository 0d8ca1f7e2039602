//! Behavioral pixel-array simulation: contrast-encoded programming, grouped
//! update pulses through switch resistances, readout, reset, and an energy
//! ledger with per-stage accounting.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::device::{
    resistance, step_threshold, threshold_rate, DeviceState, NegativeBranch, ThresholdParams,
};
use crate::error::{argument, calibration, Result};
use crate::imaging::HeuristicMap;
use crate::math;

/// Per-programming-pulse energy window (J) for an in-band target.
pub const INIT_PULSE_BAND: (f64, f64) = (6.0e-12, 132.0e-12);
/// Per-group update-pulse energy window (J).
pub const TRAVERSAL_PULSE_BAND: (f64, f64) = (9.0e-12, 15.0e-12);
/// Per-pixel read energy window (J).
pub const READ_PIXEL_BAND: (f64, f64) = (4.5e-15, 75.0e-15);
/// Per-pixel reset energy window (J).
pub const RESET_PIXEL_BAND: (f64, f64) = (205.0e-12, 400.0e-12);

/// Hard wall-clock cap on the programming calibration march.
const PROGRAM_TIME_CAP: f64 = 10.0e-3;

// ---------------------------------------------------------------------------
// Energy ledger
// ---------------------------------------------------------------------------

/// Pipeline stage an energy event belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    /// Contrast-encoded programming.
    Init,
    /// Grouped update pulses.
    Traversal,
    /// Non-destructive resistance readout.
    Read,
    /// Reverse-polarity erase.
    Reset,
}

impl Stage {
    /// All stages in pipeline order.
    pub const ALL: [Stage; 4] = [Stage::Init, Stage::Traversal, Stage::Read, Stage::Reset];

    fn index(self) -> usize {
        match self {
            Stage::Init => 0,
            Stage::Traversal => 1,
            Stage::Read => 2,
            Stage::Reset => 3,
        }
    }
}

/// Per-stage energy totals and event counts. Totals are exact sums of the
/// recorded events.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyLedger {
    joules: [f64; 4],
    events: [u64; 4],
}

impl EnergyLedger {
    /// Empty ledger.
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one event. Energy must be finite and non-negative.
    pub fn record(&mut self, stage: Stage, joules: f64) {
        debug_assert!(joules.is_finite() && joules >= 0.0);
        self.joules[stage.index()] += joules;
        self.events[stage.index()] += 1;
    }

    /// Total energy recorded for one stage (J).
    pub fn energy(&self, stage: Stage) -> f64 {
        self.joules[stage.index()]
    }

    /// Number of events recorded for one stage.
    pub fn pulses(&self, stage: Stage) -> u64 {
        self.events[stage.index()]
    }

    /// Energy across all stages (J).
    pub fn total_energy(&self) -> f64 {
        self.joules.iter().sum()
    }

    /// Event count across all stages.
    pub fn total_pulses(&self) -> u64 {
        self.events.iter().sum()
    }

    /// Folds another ledger into this one (associative and commutative).
    pub fn merge(&mut self, other: &EnergyLedger) {
        for i in 0..4 {
            self.joules[i] += other.joules[i];
            self.events[i] += other.events[i];
        }
    }
}

// ---------------------------------------------------------------------------
// Array state
// ---------------------------------------------------------------------------

/// One memristor per pixel plus the shared device model, switch resistance,
/// and a monotone simulated-time clock.
#[derive(Debug, Clone, PartialEq)]
pub struct Array {
    width: usize,
    height: usize,
    cells: Vec<DeviceState>,
    device: ThresholdParams,
    r_ds: f64,
    clock: f64,
}

impl Array {
    /// Fresh array with every device fully reset (`x = 0`).
    pub fn new(width: usize, height: usize, device: ThresholdParams, r_ds: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(argument("array dimensions must be at least 1x1"));
        }
        device.validate()?;
        if !r_ds.is_finite() || r_ds < 0.0 {
            return Err(argument("switch resistance must be finite and >= 0"));
        }
        Ok(Self {
            width,
            height,
            cells: vec![DeviceState::reset(); width * height],
            device,
            r_ds,
            clock: 0.0,
        })
    }

    fn idx(&self, row: usize, col: usize) -> usize {
        row * self.width + col
    }

    /// Array width in pixels.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Array height in pixels.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Simulated time consumed so far (s).
    pub fn clock(&self) -> f64 {
        self.clock
    }

    /// Shared device model.
    pub fn device(&self) -> &ThresholdParams {
        &self.device
    }

    /// Switch on-resistance (ohm).
    pub fn r_ds(&self) -> f64 {
        self.r_ds
    }

    /// Device state at `(row, col)`.
    pub fn state(&self, row: usize, col: usize) -> DeviceState {
        self.cells[self.idx(row, col)]
    }

    /// Overwrites the device state at `(row, col)`.
    pub fn set_state(&mut self, row: usize, col: usize, s: DeviceState) {
        let i = self.idx(row, col);
        self.cells[i] = s;
    }

    /// All device states, row-major.
    pub fn states(&self) -> &[DeviceState] {
        &self.cells
    }

    /// Row-major resistance of every pixel (ohm).
    pub fn resistance_map(&self) -> Vec<f64> {
        self.cells.iter().map(|&s| resistance(s, &self.device)).collect()
    }
}

// ---------------------------------------------------------------------------
// Programming (init)
// ---------------------------------------------------------------------------

/// How contrast maps onto programmed resistance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Encoding {
    /// Zero contrast lands at the low band edge, full contrast at the high
    /// edge (conductance proportional to inverse contrast; default).
    #[default]
    Inverse,
    /// Endpoints swapped.
    Direct,
}

/// Programming-stage parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitParams {
    /// Supply rail (V).
    pub v_dd: f64,
    /// Nominal duration of one programming pulse (s); sets the clock budget.
    pub pulse_duration: f64,
    /// Nominal pulses per direction; the clock budget is twice this.
    pub pulses_per_direction: u32,
    /// Low edge of the target post-programming resistance band (ohm).
    pub band_low: f64,
    /// High edge of the band (ohm).
    pub band_high: f64,
    /// Euler sub-step cap (s).
    pub dt_max: f64,
}

impl Default for InitParams {
    fn default() -> Self {
        Self {
            v_dd: 1.05,
            pulse_duration: 2.0e-6,
            pulses_per_direction: 2,
            band_low: 12.5e3,
            band_high: 150.0e3,
            dt_max: 1.0e-8,
        }
    }
}

impl InitParams {
    /// Checks the parameter set for internal consistency.
    pub fn validate(&self) -> Result<()> {
        if !(self.v_dd.is_finite() && self.v_dd > 0.0) {
            return Err(argument("supply voltage must be positive"));
        }
        if !(self.pulse_duration.is_finite() && self.pulse_duration > 0.0) {
            return Err(argument("pulse duration must be positive"));
        }
        if self.pulses_per_direction == 0 {
            return Err(argument("need at least one pulse per direction"));
        }
        if !(self.band_low.is_finite() && self.band_high.is_finite() && self.band_low > 0.0) {
            return Err(argument("resistance band edges must be positive"));
        }
        if self.band_low >= self.band_high {
            return Err(argument("band low edge must sit below the high edge"));
        }
        if !(self.dt_max.is_finite() && self.dt_max > 0.0) {
            return Err(argument("sub-step cap must be positive"));
        }
        Ok(())
    }
}

/// Shared programming trajectory of a single device from `x = 0` under the
/// rail (less the switch drop), sampled every `dt`.
struct ProgramTable {
    dt: f64,
    states: Vec<DeviceState>,
    /// Cumulative supply energy through each sample (J).
    energy: Vec<f64>,
    /// Interpolated time at which resistance crosses the high band edge (s).
    t_high: f64,
    /// Same for the low edge; `t_high < t_low` since resistance falls.
    t_low: f64,
}

fn calibrate_programming(
    device: &ThresholdParams,
    r_ds: f64,
    params: &InitParams,
) -> Result<ProgramTable> {
    let dt = params.dt_max;
    let mut states = vec![DeviceState::reset()];
    let mut energy = vec![0.0];
    let mut t_high = None;
    let mut t_low = None;
    let mut k = 0usize;
    while t_low.is_none() {
        let t = k as f64 * dt;
        if t > PROGRAM_TIME_CAP {
            return Err(calibration(format!(
                "resistance band not reached within the {PROGRAM_TIME_CAP:.0e} s programming cap"
            )));
        }
        let s = states[k];
        let r = resistance(s, device);
        let v_m = params.v_dd * r / (r + r_ds);
        if threshold_rate(v_m, device) <= 0.0 {
            return Err(calibration(format!(
                "programming stalls at {r:.3e} ohm; raise the supply or widen the band"
            )));
        }
        let next = step_threshold(s, v_m, dt, device);
        energy.push(energy[k] + params.v_dd * params.v_dd / (r + r_ds) * dt);
        let r_next = resistance(next, device);
        if t_high.is_none() && r_next <= params.band_high {
            t_high = Some(t + dt * (r - params.band_high) / (r - r_next));
        }
        if r_next <= params.band_low {
            t_low = Some(t + dt * (r - params.band_low) / (r - r_next));
        }
        states.push(next);
        k += 1;
    }
    Ok(ProgramTable { dt, states, energy, t_high: t_high.unwrap(), t_low: t_low.unwrap() })
}

impl ProgramTable {
    /// State and consumed supply energy after driving for `t_on` seconds.
    fn at(&self, t_on: f64, device: &ThresholdParams, r_ds: f64, v_dd: f64) -> (DeviceState, f64) {
        let idx = (math::floor(t_on / self.dt) as usize).min(self.states.len() - 1);
        let rem = (t_on - idx as f64 * self.dt).max(0.0);
        let s = self.states[idx];
        let r = resistance(s, device);
        let v_m = v_dd * r / (r + r_ds);
        let state = step_threshold(s, v_m, rem, device);
        let e = self.energy[idx] + v_dd * v_dd / (r + r_ds) * rem;
        (state, e)
    }
}

/// Programs a fresh array so each pixel's resistance encodes its contrast.
///
/// The drive time per pixel interpolates between the two band-edge times of a
/// calibration march on a single device, so band endpoints are hit to within
/// integration error regardless of supply or device constants. The clock
/// advances by the nominal pulse budget; energy reflects the full calibrated
/// on-time, split evenly over the nominal pulse count.
pub fn init_array(
    eta: &HeuristicMap,
    device: ThresholdParams,
    r_ds: f64,
    params: &InitParams,
    encoding: Encoding,
) -> Result<(Array, EnergyLedger)> {
    params.validate()?;
    let mut array = Array::new(eta.width(), eta.height(), device, r_ds)?;
    if !(params.band_low > device.r_on && params.band_high < device.r_off) {
        return Err(argument("resistance band must sit strictly inside (r_on, r_off)"));
    }
    if eta.values().iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(argument("programming needs heuristic values in [0, 1]"));
    }
    let table = calibrate_programming(&device, r_ds, params)?;
    let pulse_count = 2 * params.pulses_per_direction;
    let mut ledger = EnergyLedger::new();
    for row in 0..eta.height() {
        for col in 0..eta.width() {
            let v = eta.get(row, col);
            let t_on = match encoding {
                Encoding::Inverse => table.t_high + (1.0 - v) * (table.t_low - table.t_high),
                Encoding::Direct => table.t_low + (1.0 - v) * (table.t_high - table.t_low),
            };
            let (state, energy) = table.at(t_on, &device, r_ds, params.v_dd);
            array.set_state(row, col, state);
            for _ in 0..pulse_count {
                ledger.record(Stage::Init, energy / pulse_count as f64);
            }
        }
    }
    array.clock += pulse_count as f64 * params.pulse_duration;
    Ok((array, ledger))
}

// ---------------------------------------------------------------------------
// Phase planning
// ---------------------------------------------------------------------------

/// One run of same-row or same-column pixels pulsed together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    cells: Vec<(usize, usize)>,
}

impl Group {
    /// Builds a group from `(row, col)` cells listed in line order.
    pub fn new(cells: Vec<(usize, usize)>) -> Self {
        Self { cells }
    }

    /// Member cells in line order.
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }
}

/// All groups pulsed simultaneously in one time slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase {
    groups: Vec<Group>,
}

impl Phase {
    /// Groups of this phase (pairwise disjoint by construction).
    pub fn groups(&self) -> &[Group] {
        &self.groups
    }
}

/// Full pulse schedule for one iteration: `span` horizontal phases followed by
/// `span` vertical ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasePlan {
    width: usize,
    height: usize,
    span: usize,
    phases: Vec<Phase>,
}

impl PhasePlan {
    /// Planned array width.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Planned array height.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Group span (pixels per full group).
    pub fn span(&self) -> usize {
        self.span
    }

    /// Phases in schedule order.
    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }
}

/// Builds the pulse schedule: phase `p` of each direction starts its groups at
/// line offsets congruent to `p` modulo `span`. A trailing remainder keeps the
/// group when at least two pixels survive and drops a single orphan. Phases
/// may be empty when the image is short in one direction.
pub fn plan_phases(width: usize, height: usize, span: usize) -> Result<PhasePlan> {
    if width == 0 || height == 0 {
        return Err(argument("plan dimensions must be at least 1x1"));
    }
    if span < 2 {
        return Err(argument("group span must be at least 2"));
    }
    let mut phases = Vec::with_capacity(2 * span);
    for p in 0..span {
        let mut groups = Vec::new();
        for row in 0..height {
            let mut start = p;
            while start < width {
                let len = span.min(width - start);
                if len >= 2 {
                    groups.push(Group::new((start..start + len).map(|c| (row, c)).collect()));
                }
                start += span;
            }
        }
        phases.push(Phase { groups });
    }
    for p in 0..span {
        let mut groups = Vec::new();
        for col in 0..width {
            let mut start = p;
            while start < height {
                let len = span.min(height - start);
                if len >= 2 {
                    groups.push(Group::new((start..start + len).map(|r| (r, col)).collect()));
                }
                start += span;
            }
        }
        phases.push(Phase { groups });
    }
    Ok(PhasePlan { width, height, span, phases })
}

// ---------------------------------------------------------------------------
// Update pulses
// ---------------------------------------------------------------------------

/// How group members share the update current source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Topology {
    /// Every member is its own branch: memristor in series with one switch.
    #[default]
    Symmetric,
    /// Legacy wiring where only the middle member connects straight to the
    /// update node and every other member sees one switch in series; kept to
    /// demonstrate the voltage mismatch the symmetric wiring removes.
    Chained,
}

/// Update-pulse parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseParams {
    /// Update current source (A).
    pub i_update: f64,
    /// Pulse width (s).
    pub t_pulse: f64,
    /// Supply rail feeding the source (V); also the node compliance limit.
    pub v_dd: f64,
    /// Fixed per-pulse control overhead (J).
    pub ctrl_energy: f64,
    /// Euler sub-step cap (s).
    pub dt_max: f64,
}

impl Default for PulseParams {
    fn default() -> Self {
        Self {
            i_update: 6.0e-6,
            t_pulse: 1.0e-6,
            v_dd: 1.05,
            ctrl_energy: 6.0e-12,
            dt_max: 1.0e-8,
        }
    }
}

impl PulseParams {
    /// Checks the parameter set for internal consistency.
    pub fn validate(&self) -> Result<()> {
        if !(self.i_update.is_finite() && self.i_update > 0.0) {
            return Err(argument("update current must be positive"));
        }
        if !(self.t_pulse.is_finite() && self.t_pulse > 0.0) {
            return Err(argument("pulse width must be positive"));
        }
        if !(self.v_dd.is_finite() && self.v_dd > 0.0) {
            return Err(argument("supply voltage must be positive"));
        }
        if !(self.ctrl_energy.is_finite() && self.ctrl_energy >= 0.0) {
            return Err(argument("control overhead must be finite and >= 0"));
        }
        if !(self.dt_max.is_finite() && self.dt_max > 0.0) {
            return Err(argument("sub-step cap must be positive"));
        }
        Ok(())
    }
}

/// Drives one group for one pulse and returns the energy drawn.
///
/// Per sub-step the shared node sits at `i_update / Σ 1/(R_b + series_b)`
/// (clamped to the rail) and each memristor sees its branch divider voltage.
/// The source draws from the rail, so pulse energy is
/// `v_dd·i_update·t_pulse + ctrl_energy` regardless of load. The clock is not
/// advanced here: groups of one phase share a single time slot.
pub fn apply_pulse(
    array: &mut Array,
    group: &Group,
    params: &PulseParams,
    topology: Topology,
) -> Result<f64> {
    params.validate()?;
    let cells = group.cells();
    if cells.is_empty() {
        return Err(argument("update group is empty"));
    }
    let same_row = cells.iter().all(|c| c.0 == cells[0].0);
    let same_col = cells.iter().all(|c| c.1 == cells[0].1);
    if !(same_row || same_col) {
        return Err(argument("group pixels must share a row or a column"));
    }
    for (i, &(row, col)) in cells.iter().enumerate() {
        if row >= array.height() || col >= array.width() {
            return Err(argument(format!("group cell ({row}, {col}) is outside the array")));
        }
        if cells[..i].contains(&(row, col)) {
            return Err(argument(format!("group lists cell ({row}, {col}) twice")));
        }
    }
    let mid = cells.len() / 2;
    let n_sub = math::ceil(params.t_pulse / params.dt_max) as usize;
    let h = params.t_pulse / n_sub as f64;
    let mut branches: Vec<(f64, f64)> = Vec::with_capacity(cells.len());
    for _ in 0..n_sub {
        branches.clear();
        let mut denom = 0.0;
        for (b, &(row, col)) in cells.iter().enumerate() {
            let r = resistance(array.state(row, col), &array.device);
            let series = match topology {
                Topology::Symmetric => array.r_ds,
                Topology::Chained => {
                    if b == mid {
                        0.0
                    } else {
                        array.r_ds
                    }
                }
            };
            denom += 1.0 / (r + series);
            branches.push((r, series));
        }
        let v_node = (params.i_update / denom).min(params.v_dd);
        for (b, &(row, col)) in cells.iter().enumerate() {
            let (r, series) = branches[b];
            let v_m = v_node * r / (r + series);
            let i = array.idx(row, col);
            array.cells[i] = step_threshold(array.cells[i], v_m, h, &array.device);
        }
    }
    Ok(params.v_dd * params.i_update * params.t_pulse + params.ctrl_energy)
}

/// Resistance map captured at a phase boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct TraversalSnapshot {
    /// Phases completed when the snapshot was taken (0 = before any pulse).
    pub phases_done: usize,
    /// Array clock at the snapshot (s).
    pub clock: f64,
    /// Row-major resistances (ohm).
    pub resistance: Vec<f64>,
}

/// Runs `iterations` passes over the plan, pulsing every group of every
/// phase. The clock advances by one pulse width per phase (groups within a
/// phase are simultaneous). Snapshots are captured after the requested
/// phase-completion counts; out-of-range requests are ignored.
pub fn run_traversal(
    array: &mut Array,
    plan: &PhasePlan,
    iterations: usize,
    params: &PulseParams,
    topology: Topology,
    snapshot_phases: &[usize],
) -> Result<(EnergyLedger, Vec<TraversalSnapshot>)> {
    params.validate()?;
    if plan.width != array.width() || plan.height != array.height() {
        return Err(argument(format!(
            "plan covers {}x{} but the array is {}x{}",
            plan.width,
            plan.height,
            array.width(),
            array.height()
        )));
    }
    let mut wanted: Vec<usize> = snapshot_phases.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    let snap = |array: &Array, done: usize| TraversalSnapshot {
        phases_done: done,
        clock: array.clock(),
        resistance: array.resistance_map(),
    };
    let mut ledger = EnergyLedger::new();
    let mut snapshots = Vec::new();
    if wanted.binary_search(&0).is_ok() {
        snapshots.push(snap(array, 0));
    }
    let mut done = 0usize;
    for _ in 0..iterations {
        for phase in &plan.phases {
            for group in &phase.groups {
                let e = apply_pulse(array, group, params, topology)?;
                ledger.record(Stage::Traversal, e);
            }
            array.clock += params.t_pulse;
            done += 1;
            if wanted.binary_search(&done).is_ok() {
                snapshots.push(snap(array, done));
            }
        }
    }
    Ok((ledger, snapshots))
}

// ---------------------------------------------------------------------------
// Readout and reset
// ---------------------------------------------------------------------------

/// Read-stage parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadParams {
    /// Device-side read voltage (V); must sit inside the zero-rate window.
    pub voltage: f64,
    /// Read pulse width (s).
    pub duration: f64,
    /// Fixed per-pixel sense overhead (J).
    pub sense_energy: f64,
}

impl Default for ReadParams {
    fn default() -> Self {
        Self { voltage: 50.0e-3, duration: 5.0e-9, sense_energy: 5.0e-15 }
    }
}

impl ReadParams {
    /// Checks the parameter set for internal consistency.
    pub fn validate(&self) -> Result<()> {
        if !(self.voltage.is_finite() && self.voltage != 0.0) {
            return Err(argument("read voltage must be finite and non-zero"));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(argument("read duration must be positive"));
        }
        if !(self.sense_energy.is_finite() && self.sense_energy >= 0.0) {
            return Err(argument("sense overhead must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Reads every pixel's resistance without disturbing device state; only the
/// clock moves (all pixels are read in parallel).
pub fn readout(array: &mut Array, params: &ReadParams) -> Result<(Vec<f64>, EnergyLedger)> {
    params.validate()?;
    let device = array.device;
    if params.voltage <= device.v_tn || params.voltage >= device.v_tp {
        return Err(argument(format!(
            "read voltage {} V would switch cells; keep it inside ({}, {}) V",
            params.voltage, device.v_tn, device.v_tp
        )));
    }
    let mut ledger = EnergyLedger::new();
    let map: Vec<f64> = array
        .cells
        .iter()
        .map(|&s| {
            let r = resistance(s, &device);
            ledger.record(
                Stage::Read,
                params.voltage * params.voltage / r * params.duration + params.sense_energy,
            );
            r
        })
        .collect();
    array.clock += params.duration;
    Ok((map, ledger))
}

/// Reset-stage parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResetParams {
    /// Magnitude of the reverse supply (V).
    pub voltage: f64,
    /// Erase pulse width (s).
    pub duration: f64,
    /// Euler sub-step cap (s).
    pub dt_max: f64,
}

impl Default for ResetParams {
    fn default() -> Self {
        Self { voltage: 1.05, duration: 132.0e-6, dt_max: 1.0e-7 }
    }
}

impl ResetParams {
    /// Checks the parameter set for internal consistency.
    pub fn validate(&self) -> Result<()> {
        if !(self.voltage.is_finite() && self.voltage > 0.0) {
            return Err(argument("reset voltage must be positive"));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(argument("reset duration must be positive"));
        }
        if !(self.dt_max.is_finite() && self.dt_max > 0.0) {
            return Err(argument("sub-step cap must be positive"));
        }
        Ok(())
    }
}

/// Drives every device back to `x = 0` with a reverse pulse through the
/// switch. The pulse must analytically guarantee a full erase from `x = 1`
/// before any simulation runs; energy covers the whole pulse, including the
/// soak after a device bottoms out.
pub fn reset_array(array: &mut Array, params: &ResetParams) -> Result<EnergyLedger> {
    params.validate()?;
    let device = array.device;
    if device.negative_branch != NegativeBranch::Lowering {
        return Err(argument("reset needs the lowering below-threshold branch"));
    }
    let swing = params.voltage + device.v_tn;
    if swing <= 0.0 || device.beta_n * swing * params.duration < 1.0 {
        return Err(argument(format!(
            "reset pulse cannot guarantee a full erase: rate x duration = {:.3}",
            device.beta_n * swing.max(0.0) * params.duration
        )));
    }
    let n_sub = math::ceil(params.duration / params.dt_max) as usize;
    let h = params.duration / n_sub as f64;
    let r_ds = array.r_ds;
    let mut ledger = EnergyLedger::new();
    for cell in array.cells.iter_mut() {
        let mut s = *cell;
        let mut energy = 0.0;
        for _ in 0..n_sub {
            let r = resistance(s, &device);
            let v_m = -params.voltage * r / (r + r_ds);
            energy += params.voltage * params.voltage / (r + r_ds) * h;
            s = step_threshold(s, v_m, h, &device);
        }
        if s.x() > 0.0 {
            return Err(calibration(format!(
                "reset left x = {:.3e}; the switch drop slowed the erase below the analytic bound",
                s.x()
            )));
        }
        *cell = s;
        ledger.record(Stage::Reset, energy);
    }
    array.clock += params.duration;
    Ok(ledger)
}

// ---------------------------------------------------------------------------
// Energy report
// ---------------------------------------------------------------------------

/// Per-stage breakdown plus the analytic per-pixel band implied by the
/// per-event windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    /// Programming energy (J).
    pub init: f64,
    /// Update-pulse energy (J).
    pub traversal: f64,
    /// Read energy (J).
    pub read: f64,
    /// Reset energy (J).
    pub reset: f64,
    /// Grand total (J).
    pub total: f64,
    /// Pixels the run covered.
    pub pixels: usize,
    /// Grand total divided by pixels (J).
    pub per_pixel: f64,
    /// Analytic per-pixel band (J): per-event windows times per-pixel event
    /// counts, crediting every pulse of a group to each member.
    pub band: (f64, f64),
}

/// Summarizes a ledger. Traversal events are recorded per group, so the
/// per-pixel traversal pulse count (iterations times phases) is passed in
/// rather than derived.
pub fn energy_report(
    ledger: &EnergyLedger,
    pixels: usize,
    traversal_pulses_per_pixel: u64,
) -> Result<EnergyReport> {
    if pixels == 0 {
        return Err(argument("pixel count must be positive"));
    }
    let px = pixels as f64;
    let init_ppp = ledger.pulses(Stage::Init) as f64 / px;
    let trav_ppp = traversal_pulses_per_pixel as f64;
    let read_ppp = ledger.pulses(Stage::Read) as f64 / px;
    let reset_ppp = ledger.pulses(Stage::Reset) as f64 / px;
    let total = ledger.total_energy();
    Ok(EnergyReport {
        init: ledger.energy(Stage::Init),
        traversal: ledger.energy(Stage::Traversal),
        read: ledger.energy(Stage::Read),
        reset: ledger.energy(Stage::Reset),
        total,
        pixels,
        per_pixel: total / px,
        band: (
            init_ppp * INIT_PULSE_BAND.0
                + trav_ppp * TRAVERSAL_PULSE_BAND.0
                + read_ppp * READ_PIXEL_BAND.0
                + reset_ppp * RESET_PIXEL_BAND.0,
            init_ppp * INIT_PULSE_BAND.1
                + trav_ppp * TRAVERSAL_PULSE_BAND.1
                + read_ppp * READ_PIXEL_BAND.1
                + reset_ppp * RESET_PIXEL_BAND.1,
        ),
    })
}
