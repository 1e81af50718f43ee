//! Volume and bound computations.
//!
//! Volume always counts grid points: a box spanning `min..=max` on an axis
//! contributes `max - min + 1`, so a single point has volume 1. This is not
//! the product of geometric side lengths.

use itertools::Itertools;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::drawer::{draw_graph, DrawError, DrawOptions};
use crate::geometry::GridPoint;
use crate::model::{Drawing, Graph, Placement};
use crate::verifier::verify;

/// Largest vertex count accepted by [`cutwidth_bruteforce`].
pub const BRUTE_FORCE_MAX_N: usize = 9;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("bounding box of an empty drawing")]
    EmptyDrawing,
    #[error("brute-force cutwidth supports at most {BRUTE_FORCE_MAX_N} vertices, got {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Draw(#[from] DrawError),
    #[error("drawing of K_{n} on a line failed verification")]
    Unverified { n: usize },
    #[error("K_{n} on a line: volume {achieved} outside [{lower}, {upper}]")]
    SandwichViolated {
        n: usize,
        achieved: u128,
        lower: Ratio<u128>,
        upper: u128,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundingBox {
    pub min: GridPoint,
    pub max: GridPoint,
}

impl BoundingBox {
    pub fn of_points(points: impl IntoIterator<Item = GridPoint>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        Some(it.fold(
            BoundingBox {
                min: first,
                max: first,
            },
            |b, p| BoundingBox {
                min: GridPoint::new(b.min.x.min(p.x), b.min.y.min(p.y), b.min.z.min(p.z)),
                max: GridPoint::new(b.max.x.max(p.x), b.max.y.max(p.y), b.max.z.max(p.z)),
            },
        ))
    }

    /// Grid points per axis.
    pub fn dims(&self) -> [u64; 3] {
        let (lo, hi) = (self.min.coords(), self.max.coords());
        [0, 1, 2].map(|i| (hi[i] - lo[i]) as u64 + 1)
    }

    pub fn volume(&self) -> u128 {
        self.dims().iter().map(|&d| d as u128).product()
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        (0..3).all(|i| self.min.coords()[i] <= p.coords()[i] && p.coords()[i] <= self.max.coords()[i])
    }
}

/// Tight box around every vertex position and bend of `d`.
pub fn bounding_box(d: &Drawing) -> Result<BoundingBox, AnalysisError> {
    BoundingBox::of_points(d.placement().positions().iter().copied().chain(d.bends()))
        .ok_or(AnalysisError::EmptyDrawing)
}

/// `(X + 2) (Y + 2) max(Z, n + 4m)`.
pub fn upper_bound_volume(n: u64, m: u64, x: u64, y: u64, z: u64) -> u128 {
    let tall = (z as u128).max(n as u128 + 4 * m as u128);
    (x as u128 + 2) * (y as u128 + 2) * tall
}

/// Maximum number of edges crossing a gap of `order`.
fn max_cut(graph: &Graph, slot: &[usize]) -> usize {
    let n = graph.n();
    if n < 2 {
        return 0;
    }
    // diff[g] += 1 where an edge starts spanning gap g, -= 1 past its last gap.
    let mut diff = vec![0i64; n];
    for e in graph.edges() {
        let (a, b) = (slot[e.u].min(slot[e.v]), slot[e.u].max(slot[e.v]));
        diff[a] += 1;
        diff[b] -= 1;
    }
    diff[..n - 1]
        .iter()
        .scan(0i64, |run, d| {
            *run += d;
            Some(*run)
        })
        .max()
        .unwrap_or(0) as usize
}

/// Exact cutwidth by trying every vertex ordering up to reversal.
pub fn cutwidth_bruteforce(graph: &Graph) -> Result<usize, AnalysisError> {
    let n = graph.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(AnalysisError::TooLarge(n));
    }
    if n < 2 || graph.m() == 0 {
        return Ok(0);
    }
    // Fix the first vertex to split work; keep an ordering only if its first
    // vertex is smaller than its last (its reversal is the same cut profile).
    let best = (0..n)
        .into_par_iter()
        .map(|first| {
            let rest: Vec<usize> = (0..n).filter(|&v| v != first).collect();
            let mut slot = vec![0usize; n];
            let mut best = usize::MAX;
            for perm in rest.iter().copied().permutations(n - 1) {
                if perm[n - 2] < first {
                    continue;
                }
                slot[first] = 0;
                for (i, &v) in perm.iter().enumerate() {
                    slot[v] = i + 1;
                }
                best = best.min(max_cut(graph, &slot));
            }
            best
        })
        .min()
        .unwrap_or(0);
    Ok(best)
}

/// Cutwidth of the complete graph on `n` vertices, `⌊n²/4⌋`.
pub fn cutwidth_complete(n: u64) -> u64 {
    n * n / 4
}

/// Minimum volume `k n / 2` of a one-bend drawing of an `n`-vertex graph of
/// cutwidth `k` whose vertices lie on a line.
pub fn line_lower_bound(n: u64, k: u64) -> Ratio<u128> {
    Ratio::new(k as u128 * n as u128, 2)
}

fn as_string<S: Serializer>(r: &Option<Ratio<u128>>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutwidthSource {
    CompleteGraphFormula,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub m: usize,
    pub bounding_box: BoundingBox,
    pub dims: [u64; 3],
    pub achieved_volume: u128,
    /// Grid-point extents of the vertex positions alone.
    pub vertex_dims: [u64; 3],
    pub upper_bound_volume: u128,
    pub within_upper_bound: bool,
    pub collinear_input: bool,
    pub cutwidth: Option<u64>,
    pub cutwidth_source: Option<CutwidthSource>,
    /// Brute force agreed with the formula; only set when both were computed.
    pub cutwidth_crosscheck: Option<bool>,
    /// `k n / 2`, only for collinear placements with known cutwidth.
    #[serde(serialize_with = "as_string")]
    pub cutwidth_lower_bound: Option<Ratio<u128>>,
    /// `n³ / 8`, only for complete graphs on a line.
    #[serde(serialize_with = "as_string")]
    pub cube_lower_bound: Option<Ratio<u128>>,
    pub upper_over_achieved: f64,
    pub verified: bool,
}

/// Computes the bounds report for a drawing. With `brute_cutwidth`, complete
/// graphs are also checked against exhaustive search when small enough.
pub fn analyze(d: &Drawing, brute_cutwidth: bool) -> Result<BoundsReport, AnalysisError> {
    let g = d.graph();
    let bbox = bounding_box(d)?;
    let vertex_box = BoundingBox::of_points(d.placement().positions().iter().copied())
        .ok_or(AnalysisError::EmptyDrawing)?;
    let [vx, vy, vz] = vertex_box.dims();
    let upper = upper_bound_volume(g.n() as u64, g.m() as u64, vx, vy, vz);
    let achieved = bbox.volume();

    let small = g.n() <= BRUTE_FORCE_MAX_N;
    let (cutwidth, source, crosscheck) = if g.is_complete() {
        let k = cutwidth_complete(g.n() as u64);
        let check = (brute_cutwidth && small)
            .then(|| cutwidth_bruteforce(g).map(|b| b as u64 == k))
            .transpose()?;
        (Some(k), Some(CutwidthSource::CompleteGraphFormula), check)
    } else if small {
        (
            Some(cutwidth_bruteforce(g)? as u64),
            Some(CutwidthSource::BruteForce),
            None,
        )
    } else {
        (None, None, None)
    };

    let collinear = d.placement().is_collinear();
    let n = g.n() as u64;
    let cutwidth_lower_bound = cutwidth
        .filter(|_| collinear)
        .map(|k| line_lower_bound(n, k));
    let cube_lower_bound =
        (collinear && g.is_complete()).then(|| Ratio::new((n * n * n) as u128, 8));

    Ok(BoundsReport {
        n: g.n(),
        m: g.m(),
        bounding_box: bbox,
        dims: bbox.dims(),
        achieved_volume: achieved,
        vertex_dims: [vx, vy, vz],
        upper_bound_volume: upper,
        within_upper_bound: achieved <= upper,
        collinear_input: collinear,
        cutwidth,
        cutwidth_source: source,
        cutwidth_crosscheck: crosscheck,
        cutwidth_lower_bound,
        cube_lower_bound,
        upper_over_achieved: upper as f64 / achieved as f64,
        verified: verify(d).pass,
    })
}

/// Draws `K_n` with vertices at `(1,0,0), ..., (n,0,0)`, verifies it and
/// checks `max(kn/2, n³/8) <= volume <= upper bound`.
pub fn kn_line_experiment(n: usize, opts: &DrawOptions) -> Result<BoundsReport, AnalysisError> {
    let graph = Graph::complete(n);
    let placement = Placement::on_x_axis(n);
    let out = draw_graph(&graph, &placement, opts)?;
    let report = analyze(&out.drawing, false)?;
    if !report.verified {
        return Err(AnalysisError::Unverified { n });
    }
    let achieved = Ratio::from_integer(report.achieved_volume);
    let lower = report
        .cutwidth_lower_bound
        .into_iter()
        .chain(report.cube_lower_bound)
        .max()
        .unwrap_or_default();
    if achieved < lower || !report.within_upper_bound {
        return Err(AnalysisError::SandwichViolated {
            n,
            achieved: report.achieved_volume,
            lower,
            upper: report.upper_bound_volume,
        });
    }
    Ok(report)
}
