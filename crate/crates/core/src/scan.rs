//! Grid scans of the pseudospectra, zero sets, line profiles and
//! bisection of Clifford-spectrum crossings along rays.
//!
//! Probe points are independent, so every scan is a data-parallel map whose
//! results are assembled by lattice index. The output of a scan never
//! depends on the execution policy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{map_indexed, ExecPolicy};
use crate::pseudospectra::{Evaluator, HermitianTuple, PseudospectrumSample, Which, Window};

/// Axis-aligned lattice `lo + k·(hi − lo)/(res − 1)` in each coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    lo: Vec<f64>,
    hi: Vec<f64>,
    resolution: Vec<usize>,
}

impl Region {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, resolution: Vec<usize>) -> Result<Self> {
        let d = lo.len();
        if d == 0 || hi.len() != d || resolution.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "region bounds and resolution must share one nonzero dimension (lo {}, hi {}, res {})",
                lo.len(),
                hi.len(),
                resolution.len()
            )));
        }
        for j in 0..d {
            if !(lo[j].is_finite() && hi[j].is_finite() && lo[j] < hi[j]) {
                return Err(Error::InvalidArgument(format!(
                    "axis {j}: need finite lo < hi, got [{}, {}]",
                    lo[j], hi[j]
                )));
            }
            if resolution[j] < 2 {
                return Err(Error::InvalidArgument(format!(
                    "axis {j}: resolution must be at least 2, got {}",
                    resolution[j]
                )));
            }
        }
        Ok(Self { lo, hi, resolution })
    }

    /// `[lo, hi]^d` with `res` points per axis.
    pub fn cube(lo: f64, hi: f64, d: usize, res: usize) -> Result<Self> {
        Self::new(vec![lo; d], vec![hi; d], vec![res; d])
    }

    pub fn d(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    /// Number of lattice points.
    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> Vec<f64> {
        (0..self.d())
            .map(|j| (self.hi[j] - self.lo[j]) / (self.resolution[j] - 1) as f64)
            .collect()
    }

    /// Smallest spacing over all axes.
    pub fn min_spacing(&self) -> f64 {
        self.spacing().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn coordinate(&self, axis: usize, k: usize) -> f64 {
        let n = (self.resolution[axis] - 1) as f64;
        if k + 1 == self.resolution[axis] {
            return self.hi[axis];
        }
        self.lo[axis] + (self.hi[axis] - self.lo[axis]) * k as f64 / n
    }

    /// Lattice index split into per-axis indices; the last axis varies
    /// fastest.
    pub fn multi_index(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.d()];
        for j in (0..self.d()).rev() {
            out[j] = index % self.resolution[j];
            index /= self.resolution[j];
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(&self.resolution)
            .fold(0, |acc, (&k, &n)| acc * n + k)
    }

    pub fn point(&self, index: usize) -> Vec<f64> {
        self.multi_index(index)
            .iter()
            .enumerate()
            .map(|(j, &k)| self.coordinate(j, k))
            .collect()
    }
}

/// Affine map from region coordinates into probe space, used for planar
/// and linear slices of higher-dimensional tuples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub origin: Vec<f64>,
    /// one probe-space vector per region axis
    pub axes: Vec<Vec<f64>>,
}

impl Embedding {
    pub fn identity(d: usize) -> Self {
        Self {
            origin: vec![0.0; d],
            axes: (0..d)
                .map(|j| (0..d).map(|k| if j == k { 1.0 } else { 0.0 }).collect())
                .collect(),
        }
    }

    /// Coordinate plane spanned by the probe axes `a` and `b`.
    pub fn coordinate_plane(d: usize, a: usize, b: usize) -> Self {
        let unit = |i: usize| (0..d).map(|k| if k == i { 1.0 } else { 0.0 }).collect();
        Self {
            origin: vec![0.0; d],
            axes: vec![unit(a), unit(b)],
        }
    }

    fn check(&self, region_d: usize, probe_d: usize) -> Result<()> {
        if self.origin.len() != probe_d || self.axes.iter().any(|a| a.len() != probe_d) {
            return Err(Error::DimensionMismatch(format!(
                "embedding targets dimension {} but the tuple has {probe_d} operators",
                self.origin.len()
            )));
        }
        if self.axes.len() != region_d {
            return Err(Error::DimensionMismatch(format!(
                "embedding has {} axes for a {region_d}-dimensional region",
                self.axes.len()
            )));
        }
        Ok(())
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        let mut out = self.origin.clone();
        for (c, axis) in p.iter().zip(&self.axes) {
            for (o, a) in out.iter_mut().zip(axis) {
                *o += c * a;
            }
        }
        out
    }
}

/// Which value a zero set or overlay is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Clifford,
    Quadratic,
    Windowed,
}

impl Measure {
    pub fn of(self, s: &PseudospectrumSample) -> Option<f64> {
        match self {
            Measure::Clifford => s.mu_c,
            Measure::Quadratic => s.mu_q,
            Measure::Windowed => s.mu_w,
        }
    }
}

/// Scan settings shared by the grid and profile operations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub which: Which,
    pub policy: ExecPolicy,
    pub window: Window,
    /// membership threshold; defaults to the smallest grid spacing
    pub epsilon: Option<f64>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            which: Which::CLIFFORD,
            policy: ExecPolicy::Auto,
            window: Window::default(),
            epsilon: None,
        }
    }
}

/// Sampled pseudospectra on every point of a region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub region: Region,
    pub which: Which,
    pub epsilon: f64,
    /// one sample per lattice point, in flat-index order
    pub samples: Vec<PseudospectrumSample>,
}

/// A lattice point selected by [`zero_set`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub index: usize,
    /// region coordinates
    pub coords: Vec<f64>,
    /// probe point
    pub lambda: Vec<f64>,
}

impl ScanGrid {
    /// Flags `μ ≤ ε` for the default measure: Clifford when sampled,
    /// otherwise the first sampled one.
    pub fn zero_flags(&self) -> Vec<bool> {
        let m = self.default_measure();
        self.samples
            .iter()
            .map(|s| m.of(s).is_some_and(|v| v <= self.epsilon))
            .collect()
    }

    pub fn default_measure(&self) -> Measure {
        if self.which.clifford {
            Measure::Clifford
        } else if self.which.quadratic {
            Measure::Quadratic
        } else {
            Measure::Windowed
        }
    }

    pub fn values(&self, m: Measure) -> Vec<Option<f64>> {
        self.samples.iter().map(|s| m.of(s)).collect()
    }
}

/// Scans `region` with an arbitrary sampler. The sampler receives region
/// coordinates and its results are placed by lattice index.
pub fn grid_scan_with<F>(region: &Region, which: Which, policy: ExecPolicy, epsilon: Option<f64>, f: F) -> Result<ScanGrid>
where
    F: Fn(&[f64]) -> Result<PseudospectrumSample> + Sync + Send,
{
    let epsilon = resolve_epsilon(epsilon, region)?;
    let samples = map_indexed(policy, region.len(), |i| f(&region.point(i)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanGrid {
        region: region.clone(),
        which,
        epsilon,
        samples,
    })
}

fn resolve_epsilon(epsilon: Option<f64>, region: &Region) -> Result<f64> {
    match epsilon {
        None => Ok(region.min_spacing()),
        Some(e) if e.is_finite() && e >= 0.0 => Ok(e),
        Some(e) => Err(Error::InvalidArgument(format!("epsilon must be finite and >= 0, got {e}"))),
    }
}

/// Scans the pseudospectra of `tuple` over `region` (region dimension equal
/// to the tuple's `d`).
pub fn grid_scan(ev: &Evaluator<'_>, region: &Region, opts: &ScanOptions) -> Result<ScanGrid> {
    let d = ev.tuple().d();
    grid_scan_embedded(ev, region, &Embedding::identity(d), opts)
}

/// Scans a slice: each region point `p` probes `embedding.apply(p)`.
pub fn grid_scan_embedded(
    ev: &Evaluator<'_>,
    region: &Region,
    embedding: &Embedding,
    opts: &ScanOptions,
) -> Result<ScanGrid> {
    embedding.check(region.d(), ev.tuple().d())?;
    grid_scan_with(region, opts.which, opts.policy, opts.epsilon, |p| {
        ev.sample(&embedding.apply(p), opts.which, opts.window)
    })
}

/// Lattice points whose default measure is at most `epsilon`.
pub fn zero_set(grid: &ScanGrid, epsilon: f64) -> Vec<LatticePoint> {
    zero_set_by(grid, grid.default_measure(), epsilon)
}

pub fn zero_set_by(grid: &ScanGrid, measure: Measure, epsilon: f64) -> Vec<LatticePoint> {
    grid.samples
        .iter()
        .enumerate()
        .filter(|(_, s)| measure.of(s).is_some_and(|v| v <= epsilon))
        .map(|(index, s)| LatticePoint {
            index,
            coords: grid.region.point(index),
            lambda: s.lambda.clone(),
        })
        .collect()
}

/// Largest `|μ(p) − μ(q)| − ‖p − q‖` over lattice neighbours, measured in
/// probe space. Nonpositive up to rounding for the Clifford and quadratic
/// pseudospectra.
pub fn max_lipschitz_excess(grid: &ScanGrid, measure: Measure) -> f64 {
    let region = &grid.region;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..region.len() {
        let multi = region.multi_index(i);
        for axis in 0..region.d() {
            if multi[axis] + 1 == region.resolution()[axis] {
                continue;
            }
            let mut next = multi.clone();
            next[axis] += 1;
            let j = region.flat_index(&next);
            let (a, b) = (&grid.samples[i], &grid.samples[j]);
            if let (Some(x), Some(y)) = (measure.of(a), measure.of(b)) {
                let dist = distance(&a.lambda, &b.lambda);
                worst = worst.max((x - y).abs() - dist);
            }
        }
    }
    worst
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `λ(t) = origin + t·direction`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub origin: Vec<f64>,
    pub direction: Vec<f64>,
}

impl Ray {
    /// Ray from the origin along a unit vector.
    pub fn radial(direction: Vec<f64>) -> Result<Self> {
        Self::new(vec![0.0; direction.len()], direction)
    }

    pub fn new(origin: Vec<f64>, direction: Vec<f64>) -> Result<Self> {
        if origin.len() != direction.len() {
            return Err(Error::DimensionMismatch("ray origin and direction differ in length".into()));
        }
        let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "direction must be a unit vector, has norm {norm}"
            )));
        }
        Ok(Self { origin, direction })
    }

    pub fn at(&self, t: f64) -> Vec<f64> {
        self.origin
            .iter()
            .zip(&self.direction)
            .map(|(o, d)| o + t * d)
            .collect()
    }
}

/// Samples the pseudospectra along a ray.
pub fn line_profile(ev: &Evaluator<'_>, ray: &Ray, t_samples: &[f64], opts: &ScanOptions) -> Result<Vec<PseudospectrumSample>> {
    if ray.origin.len() != ev.tuple().d() {
        return Err(Error::DimensionMismatch(format!(
            "ray lives in dimension {} but the tuple has {} operators",
            ray.origin.len(),
            ev.tuple().d()
        )));
    }
    map_indexed(opts.policy, t_samples.len(), |i| {
        ev.sample(&ray.at(t_samples[i]), opts.which, opts.window)
    })
    .into_iter()
    .collect()
}

/// Samples at `λ = t·direction` for a unit `direction`.
pub fn radial_profile(
    ev: &Evaluator<'_>,
    direction: &[f64],
    t_samples: &[f64],
    opts: &ScanOptions,
) -> Result<Vec<PseudospectrumSample>> {
    line_profile(ev, &Ray::radial(direction.to_vec())?, t_samples, opts)
}

/// How [`bisect_zero`] located the crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BisectMethod {
    /// bisection on a change of the localizer's negative eigenvalue count
    Inertia,
    /// golden-section minimization of `μ^C`, used when eigenvalues touch
    /// zero in pairs without changing the count
    Minimization,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectResult {
    pub t: f64,
    pub mu_c: f64,
    pub method: BisectMethod,
    pub evaluations: usize,
}

/// Settings for [`bisect_zero`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectOptions {
    pub tol_t: f64,
    /// a crossing is accepted only if `μ^C(t*) ≤ epsilon`
    pub epsilon: f64,
    /// coarse samples used to find the bracket
    pub coarse: usize,
}

impl Default for BisectOptions {
    fn default() -> Self {
        Self {
            tol_t: 1e-8,
            epsilon: 1e-6,
            coarse: 64,
        }
    }
}

/// Locates a point of the Clifford spectrum on the ray segment
/// `t ∈ [t_lo, t_hi]`.
///
/// The segment is sampled coarsely. A change in the number of negative
/// eigenvalues of `L_λ` between neighbouring samples brackets a crossing,
/// which is then bisected on that count. Without a count change the
/// smallest coarse value of `μ^C` is refined by golden-section search. In
/// both cases the result is rejected with [`Error::NoDip`] if `μ^C` at the
/// final point exceeds `epsilon`.
pub fn bisect_zero(ev: &Evaluator<'_>, ray: &Ray, t_lo: f64, t_hi: f64, opts: &BisectOptions) -> Result<BisectResult> {
    if ray.origin.len() != ev.tuple().d() {
        return Err(Error::DimensionMismatch("ray and tuple dimensions differ".into()));
    }
    if !(t_lo.is_finite() && t_hi.is_finite() && t_lo < t_hi) {
        return Err(Error::InvalidArgument(format!("need t_lo < t_hi, got [{t_lo}, {t_hi}]")));
    }
    if opts.tol_t.is_nan() || opts.tol_t <= 0.0 || opts.coarse < 2 {
        return Err(Error::InvalidArgument("tol_t must be positive and coarse >= 2".into()));
    }
    let probe = |t: f64| ev.mu_c_with_inertia(&ray.at(t));
    let n = opts.coarse;
    let ts: Vec<f64> = (0..=n)
        .map(|k| if k == n { t_hi } else { t_lo + (t_hi - t_lo) * k as f64 / n as f64 })
        .collect();
    let coarse: Vec<(f64, usize)> = ts.iter().map(|&t| probe(t)).collect();
    let mut evaluations = coarse.len();
    let (best, min_seen) = coarse
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &(mu, _))| if mu < acc.1 { (i, mu) } else { acc });

    // an exact hit on the coarse grid needs no refinement
    if min_seen == 0.0 {
        return Ok(BisectResult {
            t: ts[best],
            mu_c: 0.0,
            method: BisectMethod::Inertia,
            evaluations,
        });
    }

    // bracket with a count change nearest to the best coarse sample
    let bracket = (0..n)
        .filter(|&k| coarse[k].1 != coarse[k + 1].1)
        .min_by_key(|&k| k.abs_diff(best).min((k + 1).abs_diff(best)));

    let (t, mu, method) = if let Some(k) = bracket {
        let (mut a, mut b) = (ts[k], ts[k + 1]);
        let count_a = coarse[k].1;
        while b - a > opts.tol_t {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let (_, count) = probe(mid);
            evaluations += 1;
            if count == count_a {
                a = mid;
            } else {
                b = mid;
            }
        }
        let t = 0.5 * (a + b);
        evaluations += 1;
        (t, probe(t).0, BisectMethod::Inertia)
    } else {
        let a = ts[best.saturating_sub(1)];
        let b = ts[(best + 1).min(n)];
        let (t, mu, used) = golden_section(|t| probe(t).0, a, b, opts.tol_t);
        evaluations += used;
        (t, mu, BisectMethod::Minimization)
    };
    if mu > opts.epsilon {
        return Err(Error::NoDip {
            t_lo,
            t_hi,
            epsilon: opts.epsilon,
            min_seen: min_seen.min(mu),
        });
    }
    Ok(BisectResult {
        t,
        mu_c: mu,
        method,
        evaluations,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64, usize) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut used = 2;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
        used += 1;
    }
    let t = 0.5 * (a + b);
    (t, f(t), used + 1)
}

/// `μ^C` at fixed probes for a family of truncations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationSweep {
    pub sizes: Vec<usize>,
    pub probes: Vec<Vec<f64>>,
    /// `values[p][k]` is `μ^C` of probe `p` at truncation `sizes[k]`
    pub values: Vec<Vec<f64>>,
}

impl TruncationSweep {
    /// Whether each probe's value is nonincreasing in the truncation size,
    /// allowing increases of at most `slack`.
    pub fn nonincreasing(&self, slack: f64) -> Vec<bool> {
        self.values
            .iter()
            .map(|row| row.windows(2).all(|w| w[1] <= w[0] + slack))
            .collect()
    }
}

/// Evaluates `μ^C` at each probe for every truncation size `n` produced by
/// `build(n)`, typically `N, 2N, 4N`.
pub fn truncation_sweep<B>(build: B, sizes: &[usize], probes: &[Vec<f64>], policy: ExecPolicy) -> Result<TruncationSweep>
where
    B: Fn(usize) -> Result<HermitianTuple>,
{
    let mut columns = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let tuple = build(n)?;
        let ev = Evaluator::new(&tuple)?;
        for p in probes {
            if p.len() != tuple.d() {
                return Err(Error::DimensionMismatch("probe dimension differs from tuple".into()));
            }
        }
        columns.push(map_indexed(policy, probes.len(), |i| ev.mu_c(&probes[i])));
    }
    let values = (0..probes.len())
        .map(|p| columns.iter().map(|c| c[p]).collect())
        .collect();
    Ok(TruncationSweep {
        sizes: sizes.to_vec(),
        probes: probes.to_vec(),
        values,
    })
}
