//! Subcommand implementations.

use antedge_core::aco::Threshold;
use antedge_core::imaging::Scores;

use crate::CliError;

pub mod aco;
pub mod device;
pub mod hw;
pub mod noise;
pub mod twopath;

/// Picks a variant by name, listing the choices on failure.
pub(crate) fn parse_choice<T: Copy>(
    key: &str,
    text: &str,
    options: &[(&str, T)],
) -> Result<T, CliError> {
    for (name, value) in options {
        if *name == text {
            return Ok(*value);
        }
    }
    let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
    Err(CliError::Config(format!(
        "{key}: unknown value {text:?}, expected one of {}",
        names.join(" | ")
    )))
}

/// Parses `otsu` or a fixed numeric cut.
pub(crate) fn parse_threshold(key: &str, text: &str) -> Result<Threshold, CliError> {
    if text == "otsu" {
        return Ok(Threshold::Otsu);
    }
    let cut: f64 = text
        .parse()
        .map_err(|_| CliError::Config(format!("{key}: expected otsu or a number, got {text:?}")))?;
    Ok(Threshold::Fixed(cut))
}

/// Parses a comma-separated list of indices, sorted and deduplicated.
pub(crate) fn parse_index_list(key: &str, text: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v: usize = part
            .parse()
            .map_err(|_| CliError::Config(format!("{key}: cannot parse index {part:?}")))?;
        out.push(v);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Parses a comma-separated list of noise levels, sorted ascending.
pub(crate) fn parse_level_list(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v: f64 = part
            .parse()
            .map_err(|_| CliError::Config(format!("{key}: cannot parse level {part:?}")))?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(CliError::Config(format!("{key}: needs at least one level")));
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out.dedup();
    Ok(out)
}

/// Plain-text precision/recall/F1 report.
pub(crate) fn scores_text(s: &Scores) -> String {
    format!("precision={}\nrecall={}\nf1={}\n", s.precision, s.recall, s.f1)
}
