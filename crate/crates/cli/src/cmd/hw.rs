//! `hw`: behavioral pixel-array pipeline (program, traverse, read, reset)
//! with an energy report.

use std::path::PathBuf;

use antedge_core::aco::{threshold_edges, PheromoneMap, Threshold};
use antedge_core::array_sim::{
    energy_report, init_array, plan_phases, readout, reset_array, run_traversal, Encoding,
    EnergyLedger, EnergyReport, InitParams, PulseParams, ReadParams, ResetParams, Stage,
    Topology, TraversalSnapshot,
};
use antedge_core::device::ThresholdParams;
use antedge_core::imaging::{compute_heuristics, f1_score, BorderPolicy, GrayImage, Mask};

use crate::artifacts::{self, resolve_scene};
use crate::cmd::{parse_choice, parse_index_list, parse_threshold, scores_text};
use crate::config::Resolver;
use crate::{CliError, HwArgs};

/// Every knob of the array pipeline, resolved.
pub(crate) struct Pipeline {
    pub span: usize,
    pub iters: usize,
    pub r_ds: f64,
    pub encoding: Encoding,
    pub topology: Topology,
    pub border: BorderPolicy,
    pub device: ThresholdParams,
    pub init: InitParams,
    pub pulse: PulseParams,
    pub read: ReadParams,
    pub reset: ResetParams,
    pub threshold: Threshold,
    pub invert: bool,
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline {
            span: 3,
            iters: 10,
            r_ds: 1.0e3,
            encoding: Encoding::Inverse,
            topology: Topology::Symmetric,
            border: BorderPolicy::Clamp,
            device: ThresholdParams::default(),
            init: InitParams::default(),
            pulse: PulseParams::default(),
            read: ReadParams::default(),
            reset: ResetParams::default(),
            threshold: Threshold::Otsu,
            invert: false,
        }
    }
}

pub(crate) fn resolve(r: &mut Resolver, args: &HwArgs) -> Result<Pipeline, CliError> {
    let d = Pipeline::default();
    let v_dd = r.value("v-dd", args.v_dd.as_deref(), d.init.v_dd)?;
    let dt_max = r.value("dt-max", args.dt_max.as_deref(), d.init.dt_max)?;
    let span: usize = r.value("L", args.span.as_deref(), d.span)?;
    if span < 2 {
        return Err(CliError::Config("L: group span must be at least 2".into()));
    }
    Ok(Pipeline {
        span,
        iters: r.value("iters", args.iters.as_deref(), d.iters)?,
        r_ds: r.value("r-ds", args.r_ds.as_deref(), d.r_ds)?,
        encoding: parse_choice(
            "encoding",
            &r.value("encoding", args.encoding.as_deref(), "inverse".to_string())?,
            &[("inverse", Encoding::Inverse), ("direct", Encoding::Direct)],
        )?,
        topology: parse_choice(
            "topology",
            &r.value("topology", args.topology.as_deref(), "symmetric".to_string())?,
            &[("symmetric", Topology::Symmetric), ("chained", Topology::Chained)],
        )?,
        border: parse_choice(
            "border",
            &r.value("border", args.border.as_deref(), "clamp".to_string())?,
            &[("clamp", BorderPolicy::Clamp), ("shrink", BorderPolicy::Shrink)],
        )?,
        device: d.device,
        init: InitParams {
            v_dd,
            pulse_duration: r.value("init-pulse", args.init_pulse.as_deref(), d.init.pulse_duration)?,
            pulses_per_direction: r.value(
                "init-pulses",
                args.init_pulses.as_deref(),
                d.init.pulses_per_direction,
            )?,
            band_low: r.value("band-low", args.band_low.as_deref(), d.init.band_low)?,
            band_high: r.value("band-high", args.band_high.as_deref(), d.init.band_high)?,
            dt_max,
        },
        pulse: PulseParams {
            i_update: r.value("i-update", args.i_update.as_deref(), d.pulse.i_update)?,
            t_pulse: r.value("t-pulse", args.t_pulse.as_deref(), d.pulse.t_pulse)?,
            v_dd,
            ctrl_energy: r.value("ctrl-energy", args.ctrl_energy.as_deref(), d.pulse.ctrl_energy)?,
            dt_max,
        },
        read: ReadParams {
            voltage: r.value("read-voltage", args.read_voltage.as_deref(), d.read.voltage)?,
            duration: r.value("read-duration", args.read_duration.as_deref(), d.read.duration)?,
            sense_energy: r.value("sense-energy", args.sense_energy.as_deref(), d.read.sense_energy)?,
        },
        reset: ResetParams {
            voltage: r.value("reset-voltage", args.reset_voltage.as_deref(), d.reset.voltage)?,
            duration: r.value("reset-duration", args.reset_duration.as_deref(), d.reset.duration)?,
            dt_max: r.value("reset-dt", args.reset_dt.as_deref(), d.reset.dt_max)?,
        },
        threshold: parse_threshold(
            "threshold",
            &r.value("threshold", args.threshold.as_deref(), "otsu".to_string())?,
        )?,
        invert: r.flag("invert", args.invert)?,
    })
}

/// Everything one pipeline run produces.
pub(crate) struct Detection {
    pub resistance: Vec<f64>,
    pub snapshots: Vec<TraversalSnapshot>,
    pub mask: Mask,
    pub ledger: EnergyLedger,
    pub report: EnergyReport,
    pub phases_per_iter: usize,
    pub traversal_seconds: f64,
    pub clock: f64,
}

/// Runs the full pipeline on one image: program the contrast map, pulse every
/// group for the scheduled phases, read the resistance map, threshold it, and
/// erase the array.
pub(crate) fn detect(
    img: &GrayImage,
    p: &Pipeline,
    snapshot_phases: &[usize],
) -> Result<Detection, CliError> {
    let eta = compute_heuristics(img, p.border);
    let (mut array, mut ledger) = init_array(&eta, p.device, p.r_ds, &p.init, p.encoding)?;
    let plan = plan_phases(img.width(), img.height(), p.span)?;
    let (traversal_ledger, snapshots) =
        run_traversal(&mut array, &plan, p.iters, &p.pulse, p.topology, snapshot_phases)?;
    ledger.merge(&traversal_ledger);
    let (resistance, read_ledger) = readout(&mut array, &p.read)?;
    ledger.merge(&read_ledger);
    let reset_ledger = reset_array(&mut array, &p.reset)?;
    ledger.merge(&reset_ledger);

    let phases_per_iter = plan.phases().len();
    let pulses_per_pixel = (p.iters * phases_per_iter) as u64;
    let report = energy_report(&ledger, img.width() * img.height(), pulses_per_pixel)?;

    let map = PheromoneMap::new(img.width(), img.height(), resistance.clone())?;
    let mut mask = threshold_edges(&map, p.threshold)?;
    if p.invert {
        let flipped: Vec<bool> = mask.flags().iter().map(|f| !f).collect();
        mask = Mask::new(img.width(), img.height(), flipped)?;
    }
    Ok(Detection {
        resistance,
        snapshots,
        mask,
        ledger,
        report,
        phases_per_iter,
        traversal_seconds: p.iters as f64 * phases_per_iter as f64 * p.pulse.t_pulse,
        clock: array.clock(),
    })
}

fn energy_text(d: &Detection) -> String {
    let r = &d.report;
    let mut out = String::new();
    out.push_str(&format!("pixels={}\n", r.pixels));
    out.push_str(&format!("phases_per_iteration={}\n", d.phases_per_iter));
    out.push_str(&format!("traversal_seconds={}\n", d.traversal_seconds));
    out.push_str(&format!("clock_seconds={}\n", d.clock));
    for (name, stage, joules) in [
        ("init", Stage::Init, r.init),
        ("traversal", Stage::Traversal, r.traversal),
        ("read", Stage::Read, r.read),
        ("reset", Stage::Reset, r.reset),
    ] {
        out.push_str(&format!("{name}_joules={joules}\n"));
        out.push_str(&format!("{name}_pulses={}\n", d.ledger.pulses(stage)));
    }
    out.push_str(&format!("total_joules={}\n", r.total));
    out.push_str(&format!("per_pixel_joules={}\n", r.per_pixel));
    out.push_str(&format!("band_low_joules={}\n", r.band.0));
    out.push_str(&format!("band_high_joules={}\n", r.band.1));
    out
}

fn energy_csv(d: &Detection) -> String {
    let r = &d.report;
    let mut out = String::from("stage,pulses,joules\n");
    for (name, stage, joules) in [
        ("init", Stage::Init, r.init),
        ("traversal", Stage::Traversal, r.traversal),
        ("read", Stage::Read, r.read),
        ("reset", Stage::Reset, r.reset),
    ] {
        out.push_str(&format!("{name},{},{joules}\n", d.ledger.pulses(stage)));
    }
    out.push_str(&format!("total,{},{}\n", d.ledger.total_pulses(), r.total));
    out
}

fn resistance_csv(width: usize, height: usize, values: &[f64]) -> String {
    let mut out = String::from("row,col,ohm\n");
    for row in 0..height {
        for col in 0..width {
            out.push_str(&format!("{row},{col},{}\n", values[row * width + col]));
        }
    }
    out
}

pub fn run(args: &HwArgs) -> Result<(), CliError> {
    let mut r = match &args.common.config {
        Some(path) => Resolver::load(path)?,
        None => Resolver::new(),
    };
    let out = PathBuf::from(r.outside("out", args.common.out.as_deref()).unwrap_or_else(|| "out".into()));
    let pipeline = resolve(&mut r, args)?;
    let snapshots = match r.optional("snapshots", args.snapshots.as_deref()) {
        Some(s) => parse_index_list("snapshots", &s)?,
        None => Vec::new(),
    };
    let image = r.optional("image", args.image.as_deref());
    let synth = r.optional("synth", args.synth.as_deref());
    let truth = r.optional("truth", args.truth.as_deref());
    let manifest = r.finish("hw")?;

    let scene = resolve_scene(image.as_deref(), synth.as_deref(), truth.as_deref())?;
    let detection = detect(&scene.img, &pipeline, &snapshots)?;

    artifacts::ensure_dir(&out)?;
    let (w, h) = (scene.img.width(), scene.img.height());
    for snap in &detection.snapshots {
        let name = format!("resistance_{:04}.pgm", snap.phases_done);
        artifacts::save_scaled(&out, &name, w, h, &snap.resistance)?;
    }
    artifacts::save_scaled(&out, "resistance.pgm", w, h, &detection.resistance)?;
    artifacts::write_atomic(
        &out.join("resistance.csv"),
        resistance_csv(w, h, &detection.resistance).as_bytes(),
    )?;
    artifacts::save_mask(&out, "mask.pgm", &detection.mask)?;
    artifacts::write_atomic(&out.join("energy.txt"), energy_text(&detection).as_bytes())?;
    artifacts::write_atomic(&out.join("energy.csv"), energy_csv(&detection).as_bytes())?;
    if scene.generated {
        artifacts::save_image(&out, "input.pgm", &scene.img)?;
        if let Some(t) = &scene.truth {
            artifacts::save_mask(&out, "truth.pgm", t)?;
        }
    }
    let scores = match &scene.truth {
        Some(t) => {
            let s = f1_score(&detection.mask, t)?;
            artifacts::write_atomic(&out.join("scores.txt"), scores_text(&s).as_bytes())?;
            Some(s)
        }
        None => None,
    };
    artifacts::write_atomic(&out.join("manifest.txt"), manifest.as_bytes())?;

    println!(
        "{w}x{h} array: traversal {} s, {:.3e} J total, {:.3e} J/pixel (band {:.3e}..{:.3e})",
        detection.traversal_seconds, detection.report.total, detection.report.per_pixel,
        detection.report.band.0, detection.report.band.1
    );
    if let Some(s) = scores {
        println!("precision {:.4}  recall {:.4}  f1 {:.4}", s.precision, s.recall, s.f1);
    }
    Ok(())
}
