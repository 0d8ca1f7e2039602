//! `twopath`: integrate the two-path swarm limit and its two-branch divider
//! twin, then compare winners.

use std::path::PathBuf;

use antedge_core::dynamics::{
    aco_fluid, compare_winner, memristive_fluid, two_path_configs, two_path_from_example,
    two_path_swapped, Trajectory, WinnerReport,
};

use crate::artifacts;
use crate::config::Resolver;
use crate::{CliError, TwopathArgs};

fn trajectory_csv(t: &Trajectory) -> String {
    let mut out = String::from("t,state1,state2\n");
    for (time, s) in t.times().iter().zip(t.states()) {
        out.push_str(&format!("{time},{},{}\n", s[0], s[1]));
    }
    out
}

fn winner_name(w: Option<usize>) -> &'static str {
    match w {
        Some(0) => "path1",
        Some(_) => "path2",
        None => "tie",
    }
}

fn winner_text(report: &WinnerReport) -> String {
    format!(
        "winner_swarm={}\nwinner_devices={}\nagreement={}\nfinal_swarm={},{}\nfinal_devices={},{}\nratio_swarm={}\nratio_devices={}\n",
        winner_name(report.winner_a),
        winner_name(report.winner_b),
        report.agreement,
        report.final_a[0],
        report.final_a[1],
        report.final_b[0],
        report.final_b[1],
        report.ratio_a,
        report.ratio_b,
    )
}

pub fn run(args: &TwopathArgs) -> Result<(), CliError> {
    let mut r = match &args.common.config {
        Some(path) => Resolver::load(path)?,
        None => Resolver::new(),
    };
    let out = PathBuf::from(r.outside("out", args.common.out.as_deref()).unwrap_or_else(|| "out".into()));

    let le1 = r.optional("le1", args.le1.as_deref());
    let le2 = r.optional("le2", args.le2.as_deref());
    let (aco_cfg, mem_cfg) = match (le1, le2) {
        (Some(a), Some(b)) => {
            let le1: f64 = a
                .parse()
                .map_err(|_| CliError::Config(format!("le1: cannot parse {a:?}")))?;
            let le2: f64 = b
                .parse()
                .map_err(|_| CliError::Config(format!("le2: cannot parse {b:?}")))?;
            two_path_configs(le1, le2)?
        }
        (None, None) => {
            let preset = r.value("preset", args.preset.as_deref(), "example".to_string())?;
            match preset.as_str() {
                "example" => two_path_from_example(),
                "swapped" => two_path_swapped(),
                other => {
                    return Err(CliError::Config(format!(
                        "preset: unknown value {other:?}, expected one of example | swapped"
                    )))
                }
            }
        }
        _ => return Err(CliError::Config("le1 and le2 must be given together".into())),
    };

    let t_end: f64 = r.value("t-end", args.t_end.as_deref(), 3.0)?;
    let dt_aco: f64 = r.value("dt-aco", args.dt_aco.as_deref(), 1.0e-4)?;
    let dt_mem: f64 = r.value("dt-mem", args.dt_mem.as_deref(), 1.0e-5)?;
    let manifest = r.finish("twopath")?;

    let aco = aco_fluid(&aco_cfg, t_end, dt_aco)?;
    let mem = memristive_fluid(&mem_cfg, t_end, dt_mem)?;
    let report = compare_winner(&aco, &mem)?;

    artifacts::ensure_dir(&out)?;
    artifacts::write_atomic(&out.join("aco.csv"), trajectory_csv(&aco).as_bytes())?;
    artifacts::write_atomic(&out.join("memristive.csv"), trajectory_csv(&mem).as_bytes())?;
    artifacts::write_atomic(&out.join("winner.txt"), winner_text(&report).as_bytes())?;
    artifacts::write_atomic(&out.join("manifest.txt"), manifest.as_bytes())?;

    println!(
        "swarm winner {}, device winner {}, agreement {}",
        winner_name(report.winner_a),
        winner_name(report.winner_b),
        report.agreement
    );
    Ok(())
}
