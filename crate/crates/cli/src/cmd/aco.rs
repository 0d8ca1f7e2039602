//! `aco`: software ant-colony edge detection with pheromone snapshots.

use std::path::{Path, PathBuf};

use antedge_core::aco::{
    run_aco, threshold_edges, AcoParams, Evaporation, Mode, Pattern, Threshold,
};
use antedge_core::imaging::{f1_score, BorderPolicy};

use crate::artifacts::{self, resolve_scene};
use crate::cmd::{parse_choice, parse_index_list, parse_threshold, scores_text};
use crate::config::Resolver;
use crate::{AcoArgs, CliError};

/// Shared flag/config resolution; the noise command reuses it with a reduced
/// flag surface.
pub(crate) fn resolve(r: &mut Resolver, args: &AcoArgs) -> Result<(AcoParams, Threshold), CliError> {
    let d = AcoParams::default();
    let params = AcoParams {
        alpha: r.value("alpha", args.alpha.as_deref(), d.alpha)?,
        beta: r.value("beta", args.beta.as_deref(), d.beta)?,
        rho: r.value("rho", args.rho.as_deref(), d.rho)?,
        nu: r.value("nu", args.nu.as_deref(), d.nu)?,
        q: r.value("q", args.q.as_deref(), d.q)?,
        tau0: r.value("tau0", args.tau0.as_deref(), d.tau0)?,
        eta_floor: r.value("eta-floor", args.eta_floor.as_deref(), d.eta_floor)?,
        walk_len: r.value("L", args.walk_len.as_deref(), d.walk_len)?,
        iterations: r.value("iters", args.iters.as_deref(), d.iterations)?,
        pattern: parse_choice(
            "pattern",
            &r.value("pattern", args.pattern.as_deref(), "full".to_string())?,
            &[("full", Pattern::Full), ("hv-only", Pattern::HvOnly)],
        )?,
        mode: parse_choice(
            "mode",
            &r.value("mode", args.mode.as_deref(), "stochastic".to_string())?,
            &[("stochastic", Mode::Stochastic), ("fluid", Mode::Fluid)],
        )?,
        evaporation: parse_choice(
            "evaporation",
            &r.value("evaporation", args.evaporation.as_deref(), "updated".to_string())?,
            &[("updated", Evaporation::UpdatedOnly), ("global", Evaporation::Global)],
        )?,
        include_origin: r.flag("include-origin", args.include_origin)?,
        border: parse_choice(
            "border",
            &r.value("border", args.border.as_deref(), "clamp".to_string())?,
            &[("clamp", BorderPolicy::Clamp), ("shrink", BorderPolicy::Shrink)],
        )?,
        seed: r.value("seed", args.seed.as_deref(), d.seed)?,
    };
    if params.walk_len == 0 {
        return Err(CliError::Config("L: walk length must be at least 1".into()));
    }
    params.validate()?;
    let threshold = parse_threshold(
        "threshold",
        &r.value("threshold", args.threshold.as_deref(), "otsu".to_string())?,
    )?;
    Ok((params, threshold))
}

fn trace_line(iteration: usize, tau: &[f64]) -> String {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for &v in tau {
        min = min.min(v);
        max = max.max(v);
        sum += v;
    }
    format!("{iteration},{min},{},{max}\n", sum / tau.len() as f64)
}

pub fn run(args: &AcoArgs) -> Result<(), CliError> {
    let mut r = match &args.common.config {
        Some(path) => Resolver::load(path)?,
        None => Resolver::new(),
    };
    let out = PathBuf::from(r.outside("out", args.common.out.as_deref()).unwrap_or_else(|| "out".into()));
    let (params, threshold) = resolve(&mut r, args)?;
    let snapshots = match r.optional("snapshots", args.snapshots.as_deref()) {
        Some(s) => parse_index_list("snapshots", &s)?,
        None => Vec::new(),
    };
    let image = r.optional("image", args.image.as_deref());
    let synth = r.optional("synth", args.synth.as_deref());
    let truth = r.optional("truth", args.truth.as_deref());
    let manifest = r.finish("aco")?;

    if params.pattern == Pattern::HvOnly && params.walk_len > 4 {
        eprintln!(
            "warning: straight rays longer than 4 steps blur the detected edges; L={} requested",
            params.walk_len
        );
    }

    let scene = resolve_scene(image.as_deref(), synth.as_deref(), truth.as_deref())?;
    let run = run_aco(&scene.img, &params, &snapshots)?;
    let mask = threshold_edges(run.final_tau(), threshold)?;

    artifacts::ensure_dir(&out)?;
    let (w, h) = (scene.img.width(), scene.img.height());
    let mut trace = String::from("iteration,tau_min,tau_mean,tau_max\n");
    for snap in &run.snapshots {
        let name = format!("snapshot_{:04}.pgm", snap.iteration);
        artifacts::save_scaled(&out, &name, w, h, snap.tau.values())?;
        trace.push_str(&trace_line(snap.iteration, snap.tau.values()));
    }
    artifacts::write_atomic(&out.join("trace.csv"), trace.as_bytes())?;
    artifacts::save_mask(&out, "mask.pgm", &mask)?;
    if scene.generated {
        artifacts::save_image(&out, "input.pgm", &scene.img)?;
        if let Some(truth) = &scene.truth {
            artifacts::save_mask(&out, "truth.pgm", truth)?;
        }
    }
    let scores = match &scene.truth {
        Some(truth) => {
            let s = f1_score(&mask, truth)?;
            artifacts::write_atomic(&out.join("scores.txt"), scores_text(&s).as_bytes())?;
            Some(s)
        }
        None => None,
    };
    artifacts::write_atomic(&out.join("manifest.txt"), manifest.as_bytes())?;

    print_summary(&out, w, h, mask.count(), scores.as_ref());
    Ok(())
}

fn print_summary(
    out: &Path,
    w: usize,
    h: usize,
    edges: usize,
    scores: Option<&antedge_core::imaging::Scores>,
) {
    println!("{w}x{h} image, {edges} edge pixels -> {}", out.display());
    if let Some(s) = scores {
        println!("precision {:.4}  recall {:.4}  f1 {:.4}", s.precision, s.recall, s.f1);
    }
}
