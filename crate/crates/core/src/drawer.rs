//! One-bend drawing with fixed vertices.
//!
//! Edges are routed one at a time. For an edge `vw` with `v = (a, b, c)` and
//! `w = (p, q, r)` the bend is placed on the vertical line through
//! `(x, y)`, where `x` is a neighbour of `a` other than `p` and `y` is a
//! neighbour of `q` other than `b`. The unit x-step from `v` and the unit
//! y-step from `w` make every point of that line visible from both ends, and
//! neither half of the edge is ever vertical.
//!
//! Along the line we scan `z` upward from a start height and take the first
//! point that
//!
//! 1. is not a vertex position,
//! 2. gives a segment from `v` that meets no drawn segment, except at `v`
//!    itself for segments incident to `v`,
//! 3. likewise for the segment from `w`,
//! 4. is not collinear with `v` and `w`, so the two halves of the edge only
//!    share the bend.
//!
//! A drawn segment that crosses the vertical plane through `v` (or `w`) and
//! the anchor line blocks at most one `z`. A drawn segment lying inside that
//! plane can block a whole interval, and the only lattice points of the
//! plane strip between the endpoint column and the anchor line are on those
//! two lines, so the interval either stays inside the z-range of the drawing
//! so far or runs off to infinity from there. Hence if any feasible
//! `z >= z_start` exists, one lies in `[z_start, max(z_start, z_top) + n + 4m]`
//! where `z_top` is the highest z drawn so far; the upward scan is cut off
//! there. When the whole upward ray is blocked the other anchor lines that
//! keep both halves visible are scanned upward in turn (see
//! [`anchor_candidates`]). Dense placements can block all of them. The
//! drawer then searches the [`BendBounds`] box for any point that keeps both
//! halves visible and non-vertical, then the anchor lines below the start,
//! and finally growing shells of lattice points around `v`.
//!
//! [`BendBounds`] checks bends against `[z_start, max(z_max, z_start + n + 4m - 1)]`
//! and one unit around the vertex box in x and y.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{
    collinear, interior_lattice_count, segments_intersect, GridPoint, IntersectionKind, Segment,
    KERNEL_LIMIT,
};
use crate::model::{Drawing, Edge, Graph, ModelError, Placement};

#[derive(Debug, Error)]
pub enum DrawError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("edge {edge}: feasibility scan left the coordinate range at z = {z}")]
    CoordinateOverflow { edge: Edge, z: i64 },
    #[error("edge {edge}: every candidate anchor line is blocked")]
    NoFeasibleBend { edge: Edge },
}

/// First two coordinates of the vertical line carrying the bend of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Anchor {
    pub x: i64,
    pub y: i64,
}

impl Anchor {
    pub fn at(&self, z: i64) -> GridPoint {
        GridPoint::new(self.x, self.y, z)
    }
}

/// Picks `x ∈ {a-1, a+1} \ {p}` and `y ∈ {q-1, q+1} \ {b}`, preferring the
/// smaller value.
pub fn choose_anchor(v_pos: GridPoint, w_pos: GridPoint) -> Anchor {
    debug_assert_ne!(v_pos, w_pos);
    let x = if v_pos.x - 1 != w_pos.x {
        v_pos.x - 1
    } else {
        v_pos.x + 1
    };
    let y = if w_pos.y - 1 != v_pos.y {
        w_pos.y - 1
    } else {
        w_pos.y + 1
    };
    Anchor { x, y }
}

/// Every vertical line whose points are visible from both endpoints and
/// never vertical above either of them, primary choice first.
///
/// The primary family steps one unit in x from `v` and one unit in y from
/// `w`; the second family swaps the roles.
pub fn anchor_candidates(v_pos: GridPoint, w_pos: GridPoint) -> Vec<Anchor> {
    let around = |c: i64, avoid: i64| [c - 1, c + 1].into_iter().filter(move |&t| t != avoid);
    let mut out = vec![choose_anchor(v_pos, w_pos)];
    let primary = around(v_pos.x, w_pos.x)
        .flat_map(|x| around(w_pos.y, v_pos.y).map(move |y| Anchor { x, y }));
    let swapped = around(w_pos.x, v_pos.x)
        .flat_map(|x| around(v_pos.y, w_pos.y).map(move |y| Anchor { x, y }));
    for a in primary.chain(swapped) {
        if !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeOrder {
    #[default]
    Input,
    /// Uniform shuffle determined by the seed.
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZStart {
    /// Smallest vertex z-coordinate.
    #[default]
    Auto,
    Fixed(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DrawOptions {
    pub edge_order: EdgeOrder,
    pub z_start: ZStart,
    /// Record bends that fall outside [`BendBounds`].
    pub bound_check: bool,
}

/// Box that every bend is expected to fall in: one unit around the vertex
/// box in x and y, and `[z_start, max(z_max, z_start + n + 4m - 1)]` in z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BendBounds {
    pub x: (i64, i64),
    pub y: (i64, i64),
    pub z: (i64, i64),
}

impl BendBounds {
    /// `None` for an empty placement.
    pub fn new(placement: &Placement, m: usize, z_start: i64) -> Option<Self> {
        let pts = placement.positions();
        let first = *pts.first()?;
        let (mut lo, mut hi) = (first, first);
        for p in pts {
            lo = GridPoint::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
            hi = GridPoint::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
        }
        let budget = (pts.len() + 4 * m) as i64;
        Some(BendBounds {
            x: (lo.x - 1, hi.x + 1),
            y: (lo.y - 1, hi.y + 1),
            z: (z_start, hi.z.max(z_start + budget - 1)),
        })
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        let inside = |v: i64, (lo, hi): (i64, i64)| lo <= v && v <= hi;
        inside(p.x, self.x) && inside(p.y, self.y) && inside(p.z, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BendRecord {
    /// Index into the graph's edge list.
    pub edge: usize,
    pub bend: GridPoint,
    /// Candidate points rejected before `bend`, over all lines tried.
    pub rejected: u64,
    /// Position of the used line in [`anchor_candidates`]; 0 is the primary.
    /// `None` when no anchor line had a feasible point and the bend came
    /// from the free search around `v`.
    pub anchor_rank: Option<usize>,
    /// The bend lies below the scan start because every point above was
    /// blocked.
    pub below_start: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub edge: usize,
    pub bend: GridPoint,
    pub bounds: BendBounds,
}

#[derive(Debug, Clone, Copy)]
struct DrawnSegment {
    segment: Segment,
    edge: usize,
}

/// Incremental routing state: the placement plus every segment drawn so far.
#[derive(Debug)]
pub struct DrawState<'a> {
    placement: &'a Placement,
    occupied: HashSet<GridPoint>,
    drawn: Vec<DrawnSegment>,
    log: Vec<BendRecord>,
    z_start: i64,
    // z-range of everything placed so far (vertices and bends).
    z_lo: i64,
    z_hi: i64,
    budget: i64,
    bounds: Option<BendBounds>,
}

impl<'a> DrawState<'a> {
    /// `m` is the number of edges that will be routed; it sizes the scan
    /// window.
    pub fn new(placement: &'a Placement, m: usize, z_start: i64) -> Self {
        let zs = placement.positions().iter().map(|p| p.z);
        DrawState {
            placement,
            occupied: placement.positions().iter().copied().collect(),
            drawn: Vec::new(),
            log: Vec::new(),
            z_start,
            z_lo: zs.clone().min().unwrap_or(z_start).min(z_start),
            z_hi: zs.max().unwrap_or(z_start).max(z_start),
            budget: (placement.len() + 4 * m) as i64,
            bounds: BendBounds::new(placement, m, z_start),
        }
    }

    pub fn drawn_segments(&self) -> impl Iterator<Item = (Segment, usize)> + '_ {
        self.drawn.iter().map(|d| (d.segment, d.edge))
    }

    pub fn log(&self) -> &[BendRecord] {
        &self.log
    }

    /// Whether `bend` satisfies all four routing rules for the edge `v`-`w`.
    ///
    /// Bends off the anchor lines are also checked for halves running
    /// through a vertex; on an anchor line that cannot happen.
    pub fn is_bend_feasible(&self, v: usize, w: usize, bend: GridPoint) -> bool {
        let (v_pos, w_pos) = (self.placement.position(v), self.placement.position(w));
        if self.occupied.contains(&bend) || collinear(v_pos, bend, w_pos) {
            return false;
        }
        [v_pos, w_pos].into_iter().all(|end| {
            let Ok(new) = Segment::new(end, bend) else {
                return false;
            };
            !self.passes_vertex(&new)
                && self
                    .drawn
                    .iter()
                    .all(|d| contact_allowed(&new, &d.segment, end))
        })
    }

    fn passes_vertex(&self, s: &Segment) -> bool {
        let steps = interior_lattice_count(s) as i64 + 1;
        if steps == 1 {
            return false;
        }
        let d = s.q() - s.p();
        let unit = GridPoint::new(d.x / steps, d.y / steps, d.z / steps);
        (1..steps).any(|k| {
            self.occupied
                .contains(&(s.p() + GridPoint::new(k * unit.x, k * unit.y, k * unit.z)))
        })
    }

    /// Routes edge `edge_index = (v, w)` and returns its bend.
    ///
    /// On the primary anchor line this is the lowest feasible bend at or
    /// above the scan start whenever one exists.
    pub fn draw_edge(&mut self, edge_index: usize, v: usize, w: usize) -> Result<GridPoint, DrawError> {
        let (v_pos, w_pos) = (self.placement.position(v), self.placement.position(w));
        let edge = Edge {
            u: v.min(w),
            v: v.max(w),
        };
        let up = self.z_start..=self.z_hi.max(self.z_start) + self.budget;
        let down = (self.z_lo.min(self.z_start) - self.budget..self.z_start).rev();
        let anchors = anchor_candidates(v_pos, w_pos);
        let lines_up = anchors.iter().enumerate().flat_map(|(rank, a)| {
            up.clone().map(move |z| (Some(rank), a.at(z), false))
        });
        let lines_down = anchors.iter().enumerate().flat_map(|(rank, a)| {
            down.clone().map(move |z| (Some(rank), a.at(z), true))
        });
        let in_bounds = self.bounds.into_iter().flat_map(|b| {
            (b.z.0..=b.z.1).flat_map(move |z| {
                (b.y.0..=b.y.1).flat_map(move |y| (b.x.0..=b.x.1).map(move |x| GridPoint::new(x, y, z)))
            })
        });
        let shells = (1..=FREE_SEARCH_RADIUS).flat_map(|r| shell(v_pos, r));

        // Anchor lines upward, then the box around the vertices, then the
        // lines below the start, finally shells around v.
        let candidates = lines_up
            .chain(in_bounds.map(|p| (None, p, false)))
            .chain(lines_down)
            .chain(shells.map(|p| (None, p, false)));

        let mut rejected = 0u64;
        for (anchor_rank, bend, below_start) in candidates {
            if !bend.within(KERNEL_LIMIT) {
                if anchor_rank.is_some() {
                    return Err(DrawError::CoordinateOverflow { edge, z: bend.z });
                }
                continue;
            }
            // Off the anchor lines visibility and non-vertical halves are
            // not automatic.
            let usable = anchor_rank.is_some()
                || [v_pos, w_pos].into_iter().all(|end| {
                    Segment::new(end, bend)
                        .is_ok_and(|s| !s.is_vertical() && interior_lattice_count(&s) == 0)
                });
            if !usable || !self.is_bend_feasible(v, w, bend) {
                rejected += 1;
                continue;
            }
            self.commit(edge_index, [v_pos, w_pos], bend);
            self.log.push(BendRecord {
                edge: edge_index,
                bend,
                rejected,
                anchor_rank,
                below_start: below_start || bend.z < self.z_start,
            });
            return Ok(bend);
        }
        Err(DrawError::NoFeasibleBend { edge })
    }

    fn commit(&mut self, edge_index: usize, ends: [GridPoint; 2], bend: GridPoint) {
        for end in ends {
            let segment = Segment::new(end, bend).expect("feasible bend is off the endpoints");
            debug_assert!(!segment.is_vertical());
            self.drawn.push(DrawnSegment {
                segment,
                edge: edge_index,
            });
        }
        self.z_lo = self.z_lo.min(bend.z);
        self.z_hi = self.z_hi.max(bend.z);
    }
}

/// Chebyshev radius up to which the free search looks for a bend.
pub const FREE_SEARCH_RADIUS: i64 = 32;

/// Points at Chebyshev distance exactly `r` from `c`, ordered by z, y, x.
fn shell(c: GridPoint, r: i64) -> impl Iterator<Item = GridPoint> {
    (-r..=r).flat_map(move |dz| {
        (-r..=r).flat_map(move |dy| {
            let on_face = dz.abs() == r || dy.abs() == r;
            let xs: Vec<i64> = if on_face { (-r..=r).collect() } else { vec![-r, r] };
            xs.into_iter().map(move |dx| c + GridPoint::new(dx, dy, dz))
        })
    })
}

// `new` starts at the graph vertex `end`. Touching a drawn segment is fine
// only as a single point at `end`, and only if that segment also ends there.
fn contact_allowed(new: &Segment, drawn: &Segment, end: GridPoint) -> bool {
    match segments_intersect(new, drawn) {
        IntersectionKind::Disjoint => true,
        IntersectionKind::Point(pt) => pt.to_grid_point() == Some(end) && drawn.has_endpoint(end),
        IntersectionKind::Overlap => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrawStats {
    /// In routing order.
    pub records: Vec<BendRecord>,
    pub z_start: i64,
    pub bounds: Option<BendBounds>,
    /// Filled only when bound checking was requested.
    pub bound_violations: Vec<BoundViolation>,
}

impl DrawStats {
    pub fn total_rejected(&self) -> u64 {
        self.records.iter().map(|r| r.rejected).sum()
    }

    pub fn max_rejected(&self) -> u64 {
        self.records.iter().map(|r| r.rejected).max().unwrap_or(0)
    }

    /// Edges whose bend is not the lowest point at or above the start on the
    /// primary anchor line.
    pub fn fallbacks(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.anchor_rank != Some(0) || r.below_start)
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct DrawOutput {
    pub drawing: Drawing,
    pub stats: DrawStats,
}

/// Order in which edges are routed.
pub fn edge_sequence(m: usize, order: EdgeOrder) -> Vec<usize> {
    let mut seq: Vec<usize> = (0..m).collect();
    if let EdgeOrder::Random(seed) = order {
        seq.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    seq
}

/// Draws every edge of `graph` with one bend.
pub fn draw_graph(graph: &Graph, placement: &Placement, opts: &DrawOptions) -> Result<DrawOutput, DrawError> {
    if placement.len() != graph.n() {
        return Err(ModelError::CountMismatch {
            what: "positions",
            expected: graph.n(),
            found: placement.len(),
        }
        .into());
    }
    let z_start = match opts.z_start {
        ZStart::Fixed(z) => z,
        ZStart::Auto => placement.positions().iter().map(|p| p.z).min().unwrap_or(0),
    };
    let mut state = DrawState::new(placement, graph.m(), z_start);
    let mut bends = vec![None; graph.m()];
    for i in edge_sequence(graph.m(), opts.edge_order) {
        let e = graph.edges()[i];
        bends[i] = Some(state.draw_edge(i, e.u, e.v)?);
    }
    let bends: Vec<GridPoint> = bends.into_iter().map(|b| b.expect("every edge routed")).collect();

    let bounds = BendBounds::new(placement, graph.m(), z_start);
    let bound_violations = match (opts.bound_check, bounds) {
        (true, Some(b)) => state
            .log
            .iter()
            .filter(|r| !b.contains(r.bend))
            .map(|r| BoundViolation {
                edge: r.edge,
                bend: r.bend,
                bounds: b,
            })
            .collect(),
        _ => Vec::new(),
    };
    let stats = DrawStats {
        records: state.log,
        z_start,
        bounds,
        bound_violations,
    };
    let drawing = Drawing::new(graph.clone(), placement.clone(), bends)?;
    Ok(DrawOutput { drawing, stats })
}
