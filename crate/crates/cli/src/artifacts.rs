//! Output-directory plumbing: atomic file writes, PGM load/save, and
//! synthetic-scene resolution shared by the image-taking subcommands.

use std::path::{Path, PathBuf};

use antedge_core::imaging::{
    decode_pgm, encode_pgm, encode_pgm_scaled, synth_shapes, GrayImage, Mask, SceneSpec, Shape,
};

use crate::CliError;

/// Creates the run's output directory (and parents) if missing.
pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

/// Writes a file via a `.tmp` sibling and a rename, so a crash never leaves a
/// half-written artifact behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| CliError::Io(format!("cannot move {} into place: {e}", tmp.display())))
}

/// Loads a PGM image.
pub fn load_image(path: &str) -> Result<GrayImage, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))?;
    decode_pgm(&bytes).map_err(|e| CliError::Io(format!("{path}: {e}")))
}

/// Saves an 8-bit image as binary PGM.
pub fn save_image(dir: &Path, name: &str, img: &GrayImage) -> Result<(), CliError> {
    write_atomic(&dir.join(name), &encode_pgm(img, true))
}

/// Saves a mask as a 0/255 binary PGM.
pub fn save_mask(dir: &Path, name: &str, mask: &Mask) -> Result<(), CliError> {
    save_image(dir, name, &mask.to_image())
}

/// Saves a float field min-max scaled to 8 bits, as binary PGM.
pub fn save_scaled(
    dir: &Path,
    name: &str,
    width: usize,
    height: usize,
    values: &[f64],
) -> Result<(), CliError> {
    let bytes = encode_pgm_scaled(width, height, values, true)?;
    write_atomic(&dir.join(name), &bytes)
}

/// An input scene: the image plus ground truth when one is known.
pub struct Scene {
    /// Input image.
    pub img: GrayImage,
    /// Edge ground truth, present for synthetic scenes or a `--truth` mask.
    pub truth: Option<Mask>,
    /// Whether the scene was generated rather than loaded.
    pub generated: bool,
}

fn parse_dims(spec: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("synth {spec:?}: expected N or WxH"));
    if let Some((w, h)) = spec.split_once('x') {
        let w: usize = w.trim().parse().map_err(|_| bad())?;
        let h: usize = h.trim().parse().map_err(|_| bad())?;
        Ok((w, h))
    } else {
        let n: usize = spec.trim().parse().map_err(|_| bad())?;
        Ok((n, n))
    }
}

/// Renders the default synthetic scene: a bright centered square covering
/// 10/16 of the short side, on a dark background.
pub fn synth_scene(spec: &str) -> Result<(GrayImage, Mask), CliError> {
    let (w, h) = parse_dims(spec)?;
    if w < 8 || h < 8 {
        return Err(CliError::Config(format!("synth {spec:?}: scene must be at least 8x8")));
    }
    let side = 10 * w.min(h) / 16;
    let scene = SceneSpec {
        background: 40,
        shapes: vec![Shape::Rect {
            top: (h - side) / 2,
            left: (w - side) / 2,
            height: side,
            width: side,
            value: 200,
        }],
    };
    Ok(synth_shapes(w, h, &scene)?)
}

/// Resolves `--image`/`--synth`/`--truth` into a scene. Exactly one of image
/// or synth must be given unless a caller-side default fills in.
pub fn resolve_scene(
    image: Option<&str>,
    synth: Option<&str>,
    truth: Option<&str>,
) -> Result<Scene, CliError> {
    match (image, synth) {
        (Some(_), Some(_)) => {
            Err(CliError::Config("give either image or synth, not both".into()))
        }
        (None, None) => Err(CliError::Config("an input is required: image or synth".into())),
        (Some(path), None) => {
            let img = load_image(path)?;
            let truth = match truth {
                Some(t) => Some(Mask::from_image(&load_image(t)?, 0)),
                None => None,
            };
            Ok(Scene { img, truth, generated: false })
        }
        (None, Some(spec)) => {
            if truth.is_some() {
                return Err(CliError::Config(
                    "truth applies to a loaded image; synthetic scenes carry their own".into(),
                ));
            }
            let (img, mask) = synth_scene(spec)?;
            Ok(Scene { img, truth: Some(mask), generated: true })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synth_specs_parse_both_forms() {
        let (img, mask) = synth_scene("32").unwrap();
        assert_eq!((img.width(), img.height()), (32, 32));
        assert!(mask.count() > 0);
        let (img, _) = synth_scene("48x16").unwrap();
        assert_eq!((img.width(), img.height()), (48, 16));
        assert!(synth_scene("4").is_err());
        assert!(synth_scene("32x").is_err());
        assert!(synth_scene("big").is_err());
    }

    #[test]
    fn scene_resolution_demands_exactly_one_source() {
        assert!(resolve_scene(None, None, None).is_err());
        assert!(resolve_scene(Some("a.pgm"), Some("32"), None).is_err());
        assert!(resolve_scene(None, Some("32"), Some("t.pgm")).is_err());
        let scene = resolve_scene(None, Some("16"), None).unwrap();
        assert!(scene.generated && scene.truth.is_some());
    }

    #[test]
    fn atomic_write_replaces_and_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        let names: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(names, ["x.txt"]);
    }
}
