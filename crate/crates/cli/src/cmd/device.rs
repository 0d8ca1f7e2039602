//! `device`: quasi-static current-voltage sweep of a single threshold
//! memristor.

use std::path::PathBuf;

use antedge_core::device::{
    iv_sweep, triangle_waveform, DeviceState, NegativeBranch, ThresholdParams,
};

use crate::artifacts;
use crate::cmd::parse_choice;
use crate::config::Resolver;
use crate::{CliError, DeviceArgs};

pub fn run(args: &DeviceArgs) -> Result<(), CliError> {
    let mut r = match &args.common.config {
        Some(path) => Resolver::load(path)?,
        None => Resolver::new(),
    };
    let out = PathBuf::from(r.outside("out", args.common.out.as_deref()).unwrap_or_else(|| "out".into()));

    let d = ThresholdParams::default();
    let params = ThresholdParams {
        r_on: r.value("r-on", args.r_on.as_deref(), d.r_on)?,
        r_off: r.value("r-off", args.r_off.as_deref(), d.r_off)?,
        v_tp: r.value("v-tp", args.v_tp.as_deref(), d.v_tp)?,
        v_tn: r.value("v-tn", args.v_tn.as_deref(), d.v_tn)?,
        beta_p: r.value("beta-p", args.beta_p.as_deref(), d.beta_p)?,
        beta_n: r.value("beta-n", args.beta_n.as_deref(), d.beta_n)?,
        negative_branch: parse_choice(
            "negative-branch",
            &r.value("negative-branch", args.negative_branch.as_deref(), "lowering".to_string())?,
            &[("lowering", NegativeBranch::Lowering), ("raising", NegativeBranch::Raising)],
        )?,
    };
    let amplitude: f64 = r.value("amplitude", args.amplitude.as_deref(), 0.2)?;
    let rate: f64 = r.value("rate", args.rate.as_deref(), 100.0)?;
    let sample_dt: f64 = r.value("sample-dt", args.sample_dt.as_deref(), 1.0e-5)?;
    let dt_max: f64 = r.value("dt-max", args.dt_max.as_deref(), 1.0e-7)?;
    let manifest = r.finish("device")?;

    let wave = triangle_waveform(amplitude, rate, sample_dt)?;
    let samples = iv_sweep(&params, &wave, DeviceState::reset().x(), dt_max)?;

    let mut csv = String::from("t,v,i,x\n");
    for s in &samples {
        csv.push_str(&format!("{},{},{},{}\n", s.t, s.v, s.i, s.x));
    }

    artifacts::ensure_dir(&out)?;
    artifacts::write_atomic(&out.join("sweep.csv"), csv.as_bytes())?;
    artifacts::write_atomic(&out.join("manifest.txt"), manifest.as_bytes())?;

    let last = samples.last().expect("sweep returns at least one sample");
    let peak = samples.iter().map(|s| s.x).fold(0.0, f64::max);
    println!("{} samples, peak x {}, final x {}", samples.len(), peak, last.x);
    Ok(())
}
