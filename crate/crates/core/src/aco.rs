//! Path enumeration on the pixel lattice, path probabilities, pheromone
//! updates, the detection loop, and edge thresholding.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{argument, Result};
use crate::imaging::{compute_heuristics, BorderPolicy, GrayImage, HeuristicMap, Mask};
use crate::math;

/// Lattice node `(row, col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    /// Row index.
    pub row: usize,
    /// Column index.
    pub col: usize,
}

impl Node {
    /// Convenience constructor.
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// Self-avoiding walk of `len + 1` nodes; the first node is the origin.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    nodes: Vec<Node>,
}

impl Path {
    /// All nodes, origin first.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Number of steps (nodes minus one).
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Always false; a path has at least an origin and one step.
    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Which moves are admissible when enumerating paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// Self-avoiding walks over all four 4-adjacent moves.
    Full,
    /// Only the four straight horizontal/vertical rays.
    HvOnly,
}

/// The admissible paths out of one origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    origin: Node,
    len: usize,
    paths: Vec<Path>,
}

impl PathSet {
    /// Builds a path set from explicit paths, checking that each starts at
    /// `origin`, has exactly `len` 4-adjacent steps, and never revisits a
    /// node.
    pub fn from_paths(origin: Node, len: usize, paths: Vec<Path>) -> Result<Self> {
        for (i, p) in paths.iter().enumerate() {
            if p.nodes.len() != len + 1 {
                return Err(argument(format!("path {i} has {} nodes, want {}", p.nodes.len(), len + 1)));
            }
            if p.nodes[0] != origin {
                return Err(argument(format!("path {i} does not start at the origin")));
            }
            for w in p.nodes.windows(2) {
                let dr = w[0].row.abs_diff(w[1].row);
                let dc = w[0].col.abs_diff(w[1].col);
                if dr + dc != 1 {
                    return Err(argument(format!("path {i} makes a non-adjacent step")));
                }
            }
            for (a, n) in p.nodes.iter().enumerate() {
                if p.nodes[..a].contains(n) {
                    return Err(argument(format!("path {i} revisits a node")));
                }
            }
        }
        Ok(Self { origin, len, paths })
    }

    /// Origin node shared by every path.
    pub fn origin(&self) -> Node {
        self.origin
    }

    /// Steps per path.
    pub fn walk_len(&self) -> usize {
        self.len
    }

    /// The paths, in enumeration order.
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }
}

const DIRECTIONS: [(isize, isize); 4] = [(0, 1), (0, -1), (1, 0), (-1, 0)];

fn offset(node: Node, d: (isize, isize), width: usize, height: usize) -> Option<Node> {
    let row = node.row.checked_add_signed(d.0)?;
    let col = node.col.checked_add_signed(d.1)?;
    (row < height && col < width).then_some(Node { row, col })
}

/// Enumerates every admissible walk of `len` steps from `origin`.
///
/// Moves are tried right, left, down, up; the full pattern is emitted
/// depth-first in that move order, so the output is deterministic. No path
/// revisits a node or leaves the image. Origins too close to a border may
/// yield fewer paths, down to an empty set.
pub fn enumerate_paths(
    width: usize,
    height: usize,
    origin: Node,
    len: usize,
    pattern: Pattern,
) -> Result<PathSet> {
    if len == 0 {
        return Err(argument("walk length must be at least 1"));
    }
    if origin.row >= height || origin.col >= width {
        return Err(argument(format!(
            "origin ({}, {}) outside a {width}x{height} image",
            origin.row, origin.col
        )));
    }
    let mut paths = Vec::new();
    match pattern {
        Pattern::Full => {
            let mut stack = vec![origin];
            descend(width, height, len, &mut stack, &mut paths);
        }
        Pattern::HvOnly => {
            for d in DIRECTIONS {
                let mut nodes = vec![origin];
                let mut cur = origin;
                for _ in 0..len {
                    match offset(cur, d, width, height) {
                        Some(next) => {
                            nodes.push(next);
                            cur = next;
                        }
                        None => break,
                    }
                }
                if nodes.len() == len + 1 {
                    paths.push(Path { nodes });
                }
            }
        }
    }
    Ok(PathSet { origin, len, paths })
}

fn descend(width: usize, height: usize, len: usize, stack: &mut Vec<Node>, out: &mut Vec<Path>) {
    if stack.len() == len + 1 {
        out.push(Path { nodes: stack.clone() });
        return;
    }
    let cur = *stack.last().unwrap();
    for d in DIRECTIONS {
        if let Some(next) = offset(cur, d, width, height) {
            if !stack.contains(&next) {
                stack.push(next);
                descend(width, height, len, stack, out);
                stack.pop();
            }
        }
    }
}

/// Pheromone values on the lattice, strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl PheromoneMap {
    /// Builds a map from row-major values (finite, `> 0`).
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
        if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(argument("pheromone values must be finite and > 0"));
        }
        Ok(Self { width, height, values })
    }

    /// Uniform map at `tau0`.
    pub fn uniform(width: usize, height: usize, tau0: f64) -> Result<Self> {
        Self::new(width, height, vec![tau0; width * height])
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

    fn idx(&self, n: Node) -> usize {
        n.row * self.width + n.col
    }

    fn contains(&self, n: Node) -> bool {
        n.row < self.height && n.col < self.width
    }
}

/// Update mode of the detection loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// One sampled path per origin per iteration.
    Stochastic,
    /// Every path contributes its probability-weighted expected update.
    Fluid,
}

/// Which nodes lose pheromone in an update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaporation {
    /// Only nodes receiving an update decay (the default).
    UpdatedOnly,
    /// Every node decays once per iteration; deposits skip the decay factor.
    Global,
}

/// Parameters of the detection loop.
#[derive(Debug, Clone, PartialEq)]
pub struct AcoParams {
    /// Pheromone exponent.
    pub alpha: f64,
    /// Length exponent.
    pub beta: f64,
    /// Evaporation rate in `[0, 1]`.
    pub rho: f64,
    /// Deposit scale (multiplies `q`).
    pub nu: f64,
    /// Deposit quantity (divided by path length).
    pub q: f64,
    /// Initial pheromone, `> 0`.
    pub tau0: f64,
    /// Heuristic floor used in path lengths, `> 0`.
    pub eta_floor: f64,
    /// Steps per walk (`L`).
    pub walk_len: usize,
    /// Iterations of the main loop (`N`).
    pub iterations: usize,
    /// Move pattern.
    pub pattern: Pattern,
    /// Update mode.
    pub mode: Mode,
    /// Evaporation scope.
    pub evaporation: Evaporation,
    /// Include the origin node in path pheromone products.
    pub include_origin: bool,
    /// Border handling for the contrast heuristic.
    pub border: BorderPolicy,
    /// Seed for the stochastic mode.
    pub seed: u64,
}

impl Default for AcoParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            rho: 1.0e-3,
            nu: 1.0,
            q: 1.0,
            tau0: 0.01,
            eta_floor: 0.01,
            walk_len: 4,
            iterations: 10,
            pattern: Pattern::Full,
            mode: Mode::Stochastic,
            evaporation: Evaporation::UpdatedOnly,
            include_origin: false,
            border: BorderPolicy::Clamp,
            seed: 0,
        }
    }
}

impl AcoParams {
    /// Checks the parameter set.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("nu", self.nu),
            ("q", self.q),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(argument(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !self.rho.is_finite() || !(0.0..=1.0).contains(&self.rho) {
            return Err(argument(format!("rho {} outside [0, 1]", self.rho)));
        }
        if !(self.tau0 > 0.0) || !self.tau0.is_finite() {
            return Err(argument(format!("tau0 {} must be > 0", self.tau0)));
        }
        if !(self.eta_floor > 0.0) || !self.eta_floor.is_finite() {
            return Err(argument(format!("eta_floor {} must be > 0", self.eta_floor)));
        }
        if self.walk_len == 0 {
            return Err(argument("walk length must be at least 1"));
        }
        Ok(())
    }
}

/// Heuristic length of a path: sum of `1 / max(eta, eta_floor)` over the
/// nodes after the origin (the origin is not counted).
pub fn path_length(path: &Path, eta: &HeuristicMap, eta_floor: f64) -> Result<f64> {
    if !(eta_floor > 0.0) || !eta_floor.is_finite() {
        return Err(argument(format!("eta_floor {eta_floor} must be > 0")));
    }
    let mut sum = 0.0;
    for n in &path.nodes[1..] {
        if n.row >= eta.height() || n.col >= eta.width() {
            return Err(argument(format!("path node ({}, {}) outside the map", n.row, n.col)));
        }
        sum += 1.0 / eta.get(n.row, n.col).max(eta_floor);
    }
    Ok(sum)
}

/// Product of pheromone over a path's nodes; the origin is skipped unless
/// `include_origin` is set.
pub fn path_pheromone(path: &Path, tau: &PheromoneMap, include_origin: bool) -> Result<f64> {
    let nodes = if include_origin { &path.nodes[..] } else { &path.nodes[1..] };
    let mut prod = 1.0;
    for n in nodes {
        if !tau.contains(*n) {
            return Err(argument(format!("path node ({}, {}) outside the map", n.row, n.col)));
        }
        prod *= tau.get(n.row, n.col);
    }
    Ok(prod)
}

/// Normalized selection probabilities for every path in the set.
///
/// Weights are `pheromone_product^alpha * (1/length)^beta`, normalized by the
/// largest weight before summing, so the result is invariant (to rounding)
/// under rescaling of all weights; symmetric sets come out exactly uniform.
/// If every weight degenerates to zero the distribution falls back to
/// uniform.
pub fn path_probabilities(
    set: &PathSet,
    tau: &PheromoneMap,
    eta: &HeuristicMap,
    params: &AcoParams,
) -> Result<Vec<f64>> {
    params.validate()?;
    if set.paths.is_empty() {
        return Err(argument("empty path set has no distribution"));
    }
    let mut weights = Vec::with_capacity(set.paths.len());
    for p in &set.paths {
        let le = path_length(p, eta, params.eta_floor)?;
        let prod = path_pheromone(p, tau, params.include_origin)?;
        let w = math::powf(prod, params.alpha) * math::powf(1.0 / le, params.beta);
        weights.push(w);
    }
    let max = weights.iter().cloned().fold(0.0f64, f64::max);
    if !max.is_finite() || max <= 0.0 {
        let uniform = 1.0 / weights.len() as f64;
        return Ok(vec![uniform; weights.len()]);
    }
    let mut sum = 0.0;
    for w in weights.iter_mut() {
        *w /= max;
        sum += *w;
    }
    Ok(weights.into_iter().map(|w| w / sum).collect())
}

/// Samples an index from a probability vector using one uniform draw.
pub fn select_path<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> Result<usize> {
    if probs.is_empty() {
        return Err(argument("empty distribution"));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(argument("probabilities must be finite and >= 0"));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1.0e-9 {
        return Err(argument(format!("probabilities sum to {sum}, not 1")));
    }
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return Ok(i);
        }
    }
    Ok(probs.len() - 1)
}

/// Applies one pheromone update along a path:
/// `tau <- (1 - rho) * tau + nu * q / le` on every node of the path.
pub fn deposit(
    tau: &mut PheromoneMap,
    path: &Path,
    rho: f64,
    nu: f64,
    q: f64,
    le: f64,
) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) || !rho.is_finite() {
        return Err(argument(format!("rho {rho} outside [0, 1]")));
    }
    if !(le > 0.0) || !le.is_finite() {
        return Err(argument(format!("path length {le} must be > 0")));
    }
    for n in &path.nodes {
        if !tau.contains(*n) {
            return Err(argument(format!("path node ({}, {}) outside the map", n.row, n.col)));
        }
        let i = tau.idx(*n);
        tau.values[i] = (1.0 - rho) * tau.values[i] + nu * q / le;
    }
    Ok(())
}

/// One stochastic iteration: origins are visited in the order of `sets`
/// (row-major when built by [`run_aco`]); each non-empty set consumes exactly
/// one uniform draw and deposits along the sampled path.
pub fn stochastic_step<R: Rng + ?Sized>(
    tau: &mut PheromoneMap,
    sets: &[PathSet],
    eta: &HeuristicMap,
    params: &AcoParams,
    rng: &mut R,
) -> Result<()> {
    if params.evaporation == Evaporation::Global {
        for v in tau.values.iter_mut() {
            *v *= 1.0 - params.rho;
        }
    }
    for set in sets {
        if set.paths.is_empty() {
            continue;
        }
        let probs = path_probabilities(set, tau, eta, params)?;
        let chosen = select_path(&probs, rng)?;
        let path = &set.paths[chosen];
        let le = path_length(path, eta, params.eta_floor)?;
        match params.evaporation {
            Evaporation::UpdatedOnly => deposit(tau, path, params.rho, params.nu, params.q, le)?,
            Evaporation::Global => deposit(tau, path, 0.0, params.nu, params.q, le)?,
        }
    }
    Ok(())
}

/// One fluid (expected-value) iteration. Probabilities for every origin are
/// taken against the iteration-start map, contributions are accumulated and
/// applied once, so the result is independent of origin order. Under
/// [`Evaporation::UpdatedOnly`] a node decays once per origin whose path set
/// touches it; under [`Evaporation::Global`] every node decays exactly once.
pub fn fluid_step(
    tau: &mut PheromoneMap,
    sets: &[PathSet],
    eta: &HeuristicMap,
    params: &AcoParams,
) -> Result<()> {
    let n = tau.values.len();
    let mut touch_count = vec![0u32; n];
    let mut deposits = vec![0.0f64; n];
    let mut touched = Vec::new();
    for set in sets {
        if set.paths.is_empty() {
            continue;
        }
        let probs = path_probabilities(set, tau, eta, params)?;
        touched.clear();
        for (p, path) in probs.iter().zip(set.paths.iter()) {
            let le = path_length(path, eta, params.eta_floor)?;
            let share = p * params.nu * params.q / le;
            for node in &path.nodes {
                if !tau.contains(*node) {
                    return Err(argument(format!(
                        "path node ({}, {}) outside the map",
                        node.row, node.col
                    )));
                }
                let i = tau.idx(*node);
                deposits[i] += share;
                if !touched.contains(&i) {
                    touched.push(i);
                }
            }
        }
        for &i in &touched {
            touch_count[i] += 1;
        }
    }
    let keep = 1.0 - params.rho;
    for i in 0..n {
        let decay = match params.evaporation {
            Evaporation::UpdatedOnly => math::powf(keep, touch_count[i] as f64),
            Evaporation::Global => keep,
        };
        tau.values[i] = tau.values[i] * decay + deposits[i];
    }
    Ok(())
}

/// Pheromone map captured after a given iteration (0 is the initial map).
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    /// Iteration index the map was captured after.
    pub iteration: usize,
    /// The captured map.
    pub tau: PheromoneMap,
}

/// Output of [`run_aco`].
#[derive(Debug, Clone, PartialEq)]
pub struct AcoRun {
    /// Heuristic map computed from the input image.
    pub eta: HeuristicMap,
    /// Requested snapshots plus, always, the final map.
    pub snapshots: Vec<Snapshot>,
}

impl AcoRun {
    /// The final pheromone map.
    pub fn final_tau(&self) -> &PheromoneMap {
        &self.snapshots.last().expect("at least the final snapshot").tau
    }
}

/// Runs the full detection loop on an image.
///
/// Path sets are enumerated once per origin (row-major); each iteration then
/// applies [`stochastic_step`] or [`fluid_step`]. Snapshots are taken after
/// the iterations listed in `snapshot_iters` (0 means the initial map); the
/// final map is always captured.
pub fn run_aco(img: &GrayImage, params: &AcoParams, snapshot_iters: &[usize]) -> Result<AcoRun> {
    params.validate()?;
    let eta = compute_heuristics(img, params.border);
    let (w, h) = (img.width(), img.height());
    let mut tau = PheromoneMap::uniform(w, h, params.tau0)?;
    let mut sets = Vec::with_capacity(w * h);
    for row in 0..h {
        for col in 0..w {
            sets.push(enumerate_paths(w, h, Node { row, col }, params.walk_len, params.pattern)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut snapshots = Vec::new();
    let want = |k: usize| snapshot_iters.contains(&k);
    if want(0) && params.iterations > 0 {
        snapshots.push(Snapshot { iteration: 0, tau: tau.clone() });
    }
    for k in 1..=params.iterations {
        match params.mode {
            Mode::Stochastic => stochastic_step(&mut tau, &sets, &eta, params, &mut rng)?,
            Mode::Fluid => fluid_step(&mut tau, &sets, &eta, params)?,
        }
        if k < params.iterations && want(k) {
            snapshots.push(Snapshot { iteration: k, tau: tau.clone() });
        }
    }
    snapshots.push(Snapshot { iteration: params.iterations, tau });
    Ok(AcoRun { eta, snapshots })
}

/// Edge thresholding method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// Mark values `>=` the given cut.
    Fixed(f64),
    /// Cut chosen by maximizing between-class variance over 256 bins.
    Otsu,
}

/// Histogram cut maximizing between-class variance; `None` for a constant
/// span. The returned value is the lower edge of the first above-cut bin.
pub fn otsu_threshold(values: &[f64]) -> Option<f64> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if !(max > min) {
        return None;
    }
    const BINS: usize = 256;
    let span = max - min;
    let mut hist = [0u64; BINS];
    for &v in values {
        let b = (((v - min) / span) * BINS as f64) as usize;
        hist[b.min(BINS - 1)] += 1;
    }
    let total = values.len() as f64;
    let total_mean: f64 = hist
        .iter()
        .enumerate()
        .map(|(i, &c)| i as f64 * c as f64)
        .sum::<f64>()
        / total;
    let mut best = (0.0f64, 0usize);
    let mut w0 = 0.0;
    let mut sum0 = 0.0;
    for k in 0..BINS - 1 {
        w0 += hist[k] as f64 / total;
        sum0 += k as f64 * hist[k] as f64 / total;
        if w0 == 0.0 || w0 == 1.0 {
            continue;
        }
        let mu0 = sum0 / w0;
        let mu1 = (total_mean - sum0) / (1.0 - w0);
        let between = w0 * (1.0 - w0) * (mu0 - mu1) * (mu0 - mu1);
        if between > best.0 {
            best = (between, k);
        }
    }
    Some(min + (best.1 + 1) as f64 * span / BINS as f64)
}

/// Thresholds a pheromone map into an edge mask. A constant map under
/// [`Threshold::Otsu`] yields an empty mask.
pub fn threshold_edges(tau: &PheromoneMap, method: Threshold) -> Result<Mask> {
    let cut = match method {
        Threshold::Fixed(t) => {
            if !t.is_finite() {
                return Err(argument(format!("threshold {t} must be finite")));
            }
            Some(t)
        }
        Threshold::Otsu => otsu_threshold(&tau.values),
    };
    let flags = match cut {
        Some(t) => tau.values.iter().map(|&v| v >= t).collect(),
        None => vec![false; tau.values.len()],
    };
    Mask::new(tau.width, tau.height, flags)
}
