//! Grayscale images, PGM codec, contrast heuristics, noise, synthetic scenes.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{argument, format_err, Result};
use crate::math;

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    /// Builds an image from row-major pixel data.
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(argument("image dimensions must be at least 1x1"));
        }
        if data.len() != width * height {
            return Err(argument(format!(
                "pixel buffer holds {} bytes, expected {}",
                data.len(),
                width * height
            )));
        }
        Ok(Self { width, height, data })
    }

    /// Uniform image of the given value.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Image width in pixels.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Image height in pixels.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Pixel at `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.width + col]
    }

    /// Overwrites the pixel at `(row, col)`.
    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.data[row * self.width + col] = value;
    }

    /// Row-major pixel data.
    pub fn data(&self) -> &[u8] {
        &self.data
    }
}

/// Per-pixel contrast heuristic values.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl HeuristicMap {
    /// Builds a map from row-major values. Values must be finite and
    /// non-negative; [`compute_heuristics`] additionally keeps them in
    /// `[0, 1]`, but hand-built maps may use any positive scale.
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(argument("map dimensions must be at least 1x1"));
        }
        if values.len() != width * height {
            return Err(argument(format!(
                "value buffer holds {} entries, expected {}",
                values.len(),
                width * height
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(argument("heuristic values must be finite and >= 0"));
        }
        Ok(Self { width, height, values })
    }

    /// Map width.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Map height.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Value at `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Binary per-pixel mask (detected edges or ground truth).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    flags: Vec<bool>,
}

impl Mask {
    /// Builds a mask from row-major flags.
    pub fn new(width: usize, height: usize, flags: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(argument("mask dimensions must be at least 1x1"));
        }
        if flags.len() != width * height {
            return Err(argument(format!(
                "flag buffer holds {} entries, expected {}",
                flags.len(),
                width * height
            )));
        }
        Ok(Self { width, height, flags })
    }

    /// All-false mask.
    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    /// Interprets an image as a mask: pixels above `threshold` are set.
    pub fn from_image(img: &GrayImage, threshold: u8) -> Self {
        Self {
            width: img.width,
            height: img.height,
            flags: img.data.iter().map(|&v| v > threshold).collect(),
        }
    }

    /// Mask width.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Mask height.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Flag at `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.flags[row * self.width + col]
    }

    /// Row-major flags.
    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    /// Number of set pixels.
    pub fn count(&self) -> usize {
        self.flags.iter().filter(|f| **f).count()
    }

    /// Renders the mask as a 0/255 image.
    pub fn to_image(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.flags.iter().map(|&f| if f { 255 } else { 0 }).collect(),
        }
    }
}

/// How out-of-range neighbor indices are treated by [`compute_heuristics`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderPolicy {
    /// Out-of-range indices are clamped to the nearest valid pixel, turning
    /// centered differences into one-sided differences at the borders.
    Clamp,
    /// A difference whose indices leave the image contributes zero.
    Shrink,
}

/// Per-pixel contrast: sum of the absolute horizontal and vertical centered
/// differences, normalized by the largest sum in the image. A flat image
/// yields an all-zero map instead of dividing by zero.
pub fn compute_heuristics(img: &GrayImage, policy: BorderPolicy) -> HeuristicMap {
    let (w, h) = (img.width, img.height);
    let px = |r: usize, c: usize| img.data[r * w + c] as i64;
    let mut sums = vec![0i64; w * h];
    let mut max_sum = 0i64;
    for r in 0..h {
        for c in 0..w {
            let horiz = match policy {
                BorderPolicy::Clamp => {
                    let left = c.saturating_sub(1);
                    let right = (c + 1).min(w - 1);
                    (px(r, left) - px(r, right)).abs()
                }
                BorderPolicy::Shrink => {
                    if c >= 1 && c + 1 < w {
                        (px(r, c - 1) - px(r, c + 1)).abs()
                    } else {
                        0
                    }
                }
            };
            let vert = match policy {
                BorderPolicy::Clamp => {
                    let up = r.saturating_sub(1);
                    let down = (r + 1).min(h - 1);
                    (px(up, c) - px(down, c)).abs()
                }
                BorderPolicy::Shrink => {
                    if r >= 1 && r + 1 < h {
                        (px(r - 1, c) - px(r + 1, c)).abs()
                    } else {
                        0
                    }
                }
            };
            let s = horiz + vert;
            sums[r * w + c] = s;
            max_sum = max_sum.max(s);
        }
    }
    let values = if max_sum == 0 {
        vec![0.0; w * h]
    } else {
        sums.iter().map(|&s| s as f64 / max_sum as f64).collect()
    };
    HeuristicMap { width: w, height: h, values }
}

/// Adds i.i.d. uniform noise in `[-level*255, +level*255]` to every pixel,
/// rounding half away from zero and clamping to `0..=255`. Pixels consume
/// draws in row-major order; `level == 0` returns a copy.
pub fn add_uniform_noise(img: &GrayImage, level: f64, seed: u64) -> Result<GrayImage> {
    if !(0.0..=1.0).contains(&level) {
        return Err(argument(format!("noise level {level} outside [0, 1]")));
    }
    let mut out = img.clone();
    if level == 0.0 {
        return Ok(out);
    }
    let magnitude = level * 255.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in out.data.iter_mut() {
        let delta = math::round(rng.random_range(-magnitude..=magnitude));
        *v = (*v as i64 + delta as i64).clamp(0, 255) as u8;
    }
    Ok(out)
}

/// Which corner of a right triangle's bounding square holds the right angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    /// Right angle at the top-left corner.
    TopLeft,
    /// Right angle at the top-right corner.
    TopRight,
    /// Right angle at the bottom-left corner.
    BottomLeft,
    /// Right angle at the bottom-right corner.
    BottomRight,
}

/// One axis-aligned shape in a synthetic scene.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    /// Filled rectangle.
    Rect {
        /// Top row of the rectangle.
        top: usize,
        /// Leftmost column of the rectangle.
        left: usize,
        /// Height in pixels.
        height: usize,
        /// Width in pixels.
        width: usize,
        /// Fill intensity.
        value: u8,
    },
    /// Filled right triangle with axis-aligned legs of equal length.
    RightTriangle {
        /// Top row of the bounding square.
        top: usize,
        /// Leftmost column of the bounding square.
        left: usize,
        /// Leg length in pixels.
        size: usize,
        /// Corner of the bounding square holding the right angle.
        right_angle: Corner,
        /// Fill intensity.
        value: u8,
    },
}

/// Scene description for [`synth_shapes`]: shapes are painted in order over
/// the background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneSpec {
    /// Background intensity.
    pub background: u8,
    /// Shapes, painted first to last.
    pub shapes: Vec<Shape>,
}

fn triangle_covers(dr: usize, dc: usize, size: usize, corner: Corner) -> bool {
    match corner {
        Corner::TopLeft => dr + dc < size,
        Corner::TopRight => dr <= dc,
        Corner::BottomLeft => dc <= dr,
        Corner::BottomRight => dr + dc >= size - 1,
    }
}

/// Renders a synthetic scene and its ground-truth edge mask.
///
/// Every pixel carries a region id (background or the index of the last shape
/// covering it); the mask marks pixels with at least one 4-neighbor in a
/// different region, so both sides of every visible boundary are marked.
pub fn synth_shapes(width: usize, height: usize, spec: &SceneSpec) -> Result<(GrayImage, Mask)> {
    let mut img = GrayImage::filled(width, height, spec.background)?;
    let mut region = vec![0u32; width * height];
    for (idx, shape) in spec.shapes.iter().enumerate() {
        let id = idx as u32 + 1;
        match *shape {
            Shape::Rect { top, left, height: sh, width: sw, value } => {
                if sh == 0 || sw == 0 {
                    return Err(argument(format!("shape {idx} has zero area")));
                }
                if top + sh > height || left + sw > width {
                    return Err(argument(format!("shape {idx} exceeds the canvas")));
                }
                for r in top..top + sh {
                    for c in left..left + sw {
                        img.set(r, c, value);
                        region[r * width + c] = id;
                    }
                }
            }
            Shape::RightTriangle { top, left, size, right_angle, value } => {
                if size == 0 {
                    return Err(argument(format!("shape {idx} has zero area")));
                }
                if top + size > height || left + size > width {
                    return Err(argument(format!("shape {idx} exceeds the canvas")));
                }
                for dr in 0..size {
                    for dc in 0..size {
                        if triangle_covers(dr, dc, size, right_angle) {
                            img.set(top + dr, left + dc, value);
                            region[(top + dr) * width + (left + dc)] = id;
                        }
                    }
                }
            }
        }
    }
    let mut flags = vec![false; width * height];
    for r in 0..height {
        for c in 0..width {
            let own = region[r * width + c];
            let differs = (r > 0 && region[(r - 1) * width + c] != own)
                || (r + 1 < height && region[(r + 1) * width + c] != own)
                || (c > 0 && region[r * width + c - 1] != own)
                || (c + 1 < width && region[r * width + c + 1] != own);
            flags[r * width + c] = differs;
        }
    }
    Ok((img, Mask { width, height, flags }))
}

/// Precision, recall, and F1 of a detected mask against ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    /// Fraction of detected pixels that are true edges.
    pub precision: f64,
    /// Fraction of true edge pixels that were detected.
    pub recall: f64,
    /// Harmonic mean of precision and recall.
    pub f1: f64,
}

/// Scores a detected mask against ground truth of the same dimensions.
///
/// When both masks are empty all scores are 1; a score whose denominator is
/// zero on one side only is 0.
pub fn f1_score(detected: &Mask, truth: &Mask) -> Result<Scores> {
    if detected.width != truth.width || detected.height != truth.height {
        return Err(argument("mask dimensions differ"));
    }
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    for (&d, &t) in detected.flags.iter().zip(truth.flags.iter()) {
        match (d, t) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    if tp == 0 && fp == 0 && fn_ == 0 {
        return Ok(Scores { precision: 1.0, recall: 1.0, f1: 1.0 });
    }
    let precision = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let recall = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Scores { precision, recall, f1 })
}

// ---------------------------------------------------------------------------
// PGM codec (bytes in, bytes out; partnering file IO lives in the CLI crate).
// ---------------------------------------------------------------------------

struct Tokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(format_err("unexpected end of header"));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self) -> Result<usize> {
        let tok = self.token()?;
        let s = core::str::from_utf8(tok).map_err(|_| format_err("non-ASCII header token"))?;
        s.parse::<usize>()
            .map_err(|_| format_err(format!("expected a number in header, found {s:?}")))
    }
}

/// Decodes a PGM (P2 or P5) byte stream with `maxval <= 255`.
pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut t = Tokens::new(bytes);
    let magic = t.token()?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        other => {
            let shown = String::from_utf8_lossy(other);
            return Err(format_err(format!("unsupported magic {shown:?}, want P2 or P5")));
        }
    };
    let width = t.number()?;
    let height = t.number()?;
    let maxval = t.number()?;
    if width == 0 || height == 0 {
        return Err(format_err("zero image dimension in header"));
    }
    if maxval == 0 || maxval > 255 {
        return Err(format_err(format!("maxval {maxval} unsupported, want 1..=255")));
    }
    let expected = width * height;
    let data = if binary {
        // Exactly one whitespace byte separates maxval from the raster.
        if t.pos >= bytes.len() || !bytes[t.pos].is_ascii_whitespace() {
            return Err(format_err("missing separator before binary raster"));
        }
        let raster = &bytes[t.pos + 1..];
        if raster.len() < expected {
            return Err(format_err(format!(
                "truncated raster: expected {expected} bytes, got {}",
                raster.len()
            )));
        }
        raster[..expected].to_vec()
    } else {
        let mut data = Vec::with_capacity(expected);
        for _ in 0..expected {
            let v = t.number().map_err(|_| {
                format_err(format!(
                    "truncated raster: expected {expected} values, got {}",
                    data.len()
                ))
            })?;
            if v > maxval {
                return Err(format_err(format!("sample {v} exceeds maxval {maxval}")));
            }
            data.push(v as u8);
        }
        data
    };
    if binary {
        if let Some(&v) = data.iter().find(|&&v| v as usize > maxval) {
            return Err(format_err(format!("sample {v} exceeds maxval {maxval}")));
        }
    }
    GrayImage::new(width, height, data)
}

/// Encodes an image as PGM: binary P5 or ASCII P2.
pub fn encode_pgm(img: &GrayImage, binary: bool) -> Vec<u8> {
    let mut out = Vec::new();
    if binary {
        out.extend_from_slice(format!("P5\n{} {}\n255\n", img.width, img.height).as_bytes());
        out.extend_from_slice(&img.data);
    } else {
        out.extend_from_slice(format!("P2\n{} {}\n255\n", img.width, img.height).as_bytes());
        for (i, v) in img.data.iter().enumerate() {
            let sep = if (i + 1) % 16 == 0 { '\n' } else { ' ' };
            out.extend_from_slice(format!("{v}{sep}").as_bytes());
        }
        if !out.ends_with(b"\n") {
            out.push(b'\n');
        }
    }
    out
}

/// Encodes an `f64` map as PGM after min-max scaling to `0..=255` with
/// rounding half away from zero. A constant map encodes as all zeros.
pub fn encode_pgm_scaled(width: usize, height: usize, values: &[f64], binary: bool) -> Result<Vec<u8>> {
    if values.len() != width * height {
        return Err(argument(format!(
            "value buffer holds {} entries, expected {}",
            values.len(),
            width * height
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(argument("cannot scale non-finite values"));
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
    }
    let span = max - min;
    let data: Vec<u8> = values
        .iter()
        .map(|&v| {
            if span == 0.0 {
                0
            } else {
                math::round((v - min) / span * 255.0) as u8
            }
        })
        .collect();
    Ok(encode_pgm(&GrayImage { width, height, data }, binary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn img(width: usize, height: usize, data: &[u8]) -> GrayImage {
        GrayImage::new(width, height, data.to_vec()).unwrap()
    }

    #[test]
    fn rejects_zero_dimensions() {
        assert!(GrayImage::new(0, 5, vec![]).is_err());
        assert!(GrayImage::new(5, 0, vec![]).is_err());
        assert!(GrayImage::new(2, 2, vec![0; 3]).is_err());
    }

    #[test]
    fn heuristics_flat_image_is_all_zero() {
        let im = GrayImage::filled(7, 5, 42).unwrap();
        for policy in [BorderPolicy::Clamp, BorderPolicy::Shrink] {
            let eta = compute_heuristics(&im, policy);
            assert!(eta.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn heuristics_row_under_shrink() {
        let im = img(3, 1, &[0, 0, 255]);
        let eta = compute_heuristics(&im, BorderPolicy::Shrink);
        assert_eq!(eta.values(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn heuristics_row_under_clamp() {
        // One-sided differences keep the right border pixel live here.
        let im = img(3, 1, &[0, 0, 255]);
        let eta = compute_heuristics(&im, BorderPolicy::Clamp);
        assert_eq!(eta.values(), &[0.0, 1.0, 1.0]);
    }

    #[test]
    fn heuristics_center_spike_under_clamp() {
        let mut im = GrayImage::filled(3, 3, 0).unwrap();
        im.set(1, 1, 255);
        let eta = compute_heuristics(&im, BorderPolicy::Clamp);
        let expected = [0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        assert_eq!(eta.values(), &expected);
    }

    #[test]
    fn noise_level_zero_is_identity() {
        let im = img(4, 2, &[0, 50, 100, 150, 200, 250, 255, 1]);
        let out = add_uniform_noise(&im, 0.0, 99).unwrap();
        assert_eq!(out, im);
    }

    #[test]
    fn noise_is_bounded_and_deterministic() {
        let im = GrayImage::filled(16, 16, 128).unwrap();
        let a = add_uniform_noise(&im, 0.3, 7).unwrap();
        let b = add_uniform_noise(&im, 0.3, 7).unwrap();
        assert_eq!(a, b);
        let bound = (0.3f64 * 255.0).round() as i64;
        for (&x, &y) in a.data().iter().zip(im.data().iter()) {
            assert!((x as i64 - y as i64).abs() <= bound);
        }
        let c = add_uniform_noise(&im, 0.3, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn noise_rejects_bad_level() {
        let im = GrayImage::filled(2, 2, 0).unwrap();
        assert!(add_uniform_noise(&im, 1.2, 0).is_err());
        assert!(add_uniform_noise(&im, -0.1, 0).is_err());
    }

    #[test]
    fn synth_square_marks_both_sides_of_boundary() {
        let spec = SceneSpec {
            background: 0,
            shapes: vec![Shape::Rect { top: 2, left: 2, height: 4, width: 4, value: 255 }],
        };
        let (im, mask) = synth_shapes(8, 8, &spec).unwrap();
        assert_eq!(im.get(3, 3), 255);
        assert_eq!(im.get(0, 0), 0);
        // 12 outline pixels of the 4x4 square plus the 16 background pixels
        // 4-adjacent to it.
        assert_eq!(mask.count(), 28);
        assert!(mask.get(2, 2));
        assert!(mask.get(1, 2));
        assert!(!mask.get(1, 1));
        assert!(!mask.get(3, 3));
    }

    #[test]
    fn synth_empty_scene_has_empty_mask() {
        let spec = SceneSpec { background: 77, shapes: vec![] };
        let (im, mask) = synth_shapes(5, 4, &spec).unwrap();
        assert!(im.data().iter().all(|&v| v == 77));
        assert_eq!(mask.count(), 0);
    }

    #[test]
    fn synth_rejects_out_of_canvas_shape() {
        let spec = SceneSpec {
            background: 0,
            shapes: vec![Shape::Rect { top: 5, left: 5, height: 10, width: 2, value: 9 }],
        };
        let err = synth_shapes(8, 8, &spec).unwrap_err();
        assert!(format!("{err}").contains("shape 0"));
    }

    fn connected_components(mask: &Mask) -> usize {
        let (w, h) = (mask.width(), mask.height());
        let mut seen = vec![false; w * h];
        let mut components = 0;
        for start in 0..w * h {
            if !mask.flags()[start] || seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(p) = stack.pop() {
                let (r, c) = (p / w, p % w);
                let mut push = |q: usize| {
                    if mask.flags()[q] && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                };
                if r > 0 {
                    push(p - w);
                }
                if r + 1 < h {
                    push(p + w);
                }
                if c > 0 {
                    push(p - 1);
                }
                if c + 1 < w {
                    push(p + 1);
                }
            }
        }
        components
    }

    #[test]
    fn synth_nested_squares_give_two_contours() {
        let spec = SceneSpec {
            background: 0,
            shapes: vec![
                Shape::Rect { top: 2, left: 2, height: 12, width: 12, value: 128 },
                Shape::Rect { top: 6, left: 6, height: 4, width: 4, value: 255 },
            ],
        };
        let (_, mask) = synth_shapes(16, 16, &spec).unwrap();
        assert_eq!(connected_components(&mask), 2);
    }

    #[test]
    fn triangle_renders_half_of_its_square() {
        let spec = SceneSpec {
            background: 0,
            shapes: vec![Shape::RightTriangle {
                top: 0,
                left: 0,
                size: 4,
                right_angle: Corner::TopLeft,
                value: 200,
            }],
        };
        let (im, _) = synth_shapes(4, 4, &spec).unwrap();
        assert_eq!(im.get(0, 0), 200);
        assert_eq!(im.get(0, 3), 200);
        assert_eq!(im.get(3, 0), 200);
        assert_eq!(im.get(3, 3), 0);
        assert_eq!(im.get(2, 2), 0);
        let filled = im.data().iter().filter(|&&v| v == 200).count();
        assert_eq!(filled, 10);
    }

    #[test]
    fn f1_handles_edge_cases() {
        let a = Mask::new(2, 2, vec![true, false, true, false]).unwrap();
        let b = Mask::new(2, 2, vec![true, true, false, false]).unwrap();
        let s = f1_score(&a, &b).unwrap();
        assert!((s.precision - 0.5).abs() < 1e-12);
        assert!((s.recall - 0.5).abs() < 1e-12);
        assert!((s.f1 - 0.5).abs() < 1e-12);

        let empty = Mask::empty(2, 2).unwrap();
        let s = f1_score(&empty, &empty).unwrap();
        assert_eq!(s.f1, 1.0);

        let s = f1_score(&empty, &a).unwrap();
        assert_eq!(s.f1, 0.0);

        let tall = Mask::empty(2, 3).unwrap();
        assert!(f1_score(&a, &tall).is_err());
    }

    #[test]
    fn pgm_binary_roundtrip() {
        let im = img(3, 2, &[0, 127, 255, 10, 20, 30]);
        let bytes = encode_pgm(&im, true);
        let back = decode_pgm(&bytes).unwrap();
        assert_eq!(back, im);
    }

    #[test]
    fn pgm_ascii_with_comments() {
        let text = b"P2 # ascii gray\n# size next\n3 1\n255\n0 128 255\n";
        let im = decode_pgm(text).unwrap();
        assert_eq!(im.data(), &[0, 128, 255]);
        assert_eq!(im.width(), 3);
    }

    #[test]
    fn pgm_rejects_color_and_wide_maxval() {
        let err = decode_pgm(b"P6\n2 2\n255\n........").unwrap_err();
        assert!(format!("{err}").contains("P6"));
        let err = decode_pgm(b"P5\n2 2\n65535\n\0\0\0\0").unwrap_err();
        assert!(format!("{err}").contains("65535"));
    }

    #[test]
    fn pgm_reports_truncation_sizes() {
        let err = decode_pgm(b"P5\n3 3\n255\n\0\0\0\0\0").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains('9') && msg.contains('5'), "message was {msg}");
    }

    #[test]
    fn pgm_rejects_ascii_sample_above_maxval() {
        let err = decode_pgm(b"P2\n2 1\n100\n5 300\n").unwrap_err();
        assert!(format!("{err}").contains("300"));
    }

    #[test]
    fn scaled_encode_hits_both_endpoints() {
        let bytes = encode_pgm_scaled(3, 1, &[2.0, 3.0, 4.0], true).unwrap();
        let im = decode_pgm(&bytes).unwrap();
        assert_eq!(im.data(), &[0, 128, 255]);
    }

    #[test]
    fn scaled_encode_constant_map_is_black() {
        let bytes = encode_pgm_scaled(2, 2, &[5.5; 4], true).unwrap();
        let im = decode_pgm(&bytes).unwrap();
        assert_eq!(im.data(), &[0, 0, 0, 0]);
    }

    proptest! {
        #[test]
        fn pgm_roundtrips_any_image(
            w in 1usize..12,
            h in 1usize..12,
            seed in any::<u64>(),
            binary in any::<bool>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data: Vec<u8> = (0..w * h).map(|_| rng.random()).collect();
            let im = GrayImage::new(w, h, data).unwrap();
            let back = decode_pgm(&encode_pgm(&im, binary)).unwrap();
            prop_assert_eq!(back, im);
        }

        #[test]
        fn heuristics_max_is_one_for_nonflat_clamp(
            w in 2usize..10,
            h in 2usize..10,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut data: Vec<u8> = (0..w * h).map(|_| rng.random()).collect();
            if data.iter().all(|&v| v == data[0]) {
                data[0] = data[0].wrapping_add(1);
            }
            let im = GrayImage::new(w, h, data).unwrap();
            let eta = compute_heuristics(&im, BorderPolicy::Clamp);
            let max = eta.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert_eq!(max, 1.0);
            prop_assert!(eta.values().iter().all(|&v| (0.0..=1.0).contains(&v)));
        }

        #[test]
        fn heuristics_invariant_to_offset_and_scale(
            w in 2usize..8,
            h in 2usize..8,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // Keep raw values small so offset and scale stay in range.
            let data: Vec<u8> = (0..w * h).map(|_| rng.random_range(0..40u8)).collect();
            let im = GrayImage::new(w, h, data.clone()).unwrap();
            let eta = compute_heuristics(&im, BorderPolicy::Clamp);

            let offset: Vec<u8> = data.iter().map(|&v| v + 100).collect();
            let eta_off = compute_heuristics(
                &GrayImage::new(w, h, offset).unwrap(),
                BorderPolicy::Clamp,
            );
            prop_assert_eq!(eta.values(), eta_off.values());

            let scaled: Vec<u8> = data.iter().map(|&v| v * 6).collect();
            let eta_scaled = compute_heuristics(
                &GrayImage::new(w, h, scaled).unwrap(),
                BorderPolicy::Clamp,
            );
            prop_assert_eq!(eta.values(), eta_scaled.values());
        }
    }
}
