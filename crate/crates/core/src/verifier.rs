//! Post-hoc validity check for one-bend drawings.
//!
//! Brute force over every pair of segments and every vertex/segment pair,
//! using only the geometry kernel. Nothing here trusts the drawer: duplicate
//! positions and degenerate halves are re-checked so that hand-built or
//! external drawings can be verified too.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{point_on_segment, segments_intersect, GridPoint, IntersectionKind, Segment};
use crate::model::Drawing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ViolationKind {
    BendOnVertex,
    SegmentThroughVertex,
    EdgePairIntersection,
    SelfOverlap,
    DegenerateSegment,
    DuplicatePosition,
}

/// Where two segments meet, as reported in a violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Contact {
    /// Single common point, formatted exactly (may be fractional).
    Point(String),
    Overlap,
}

/// Which half of an edge: 0 is `u -> bend`, 1 is `bend -> v`.
pub type Half = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    /// The bend of `edge` sits on a vertex that is not one of its endpoints.
    BendOnVertex { edge: usize, vertex: usize, point: GridPoint },
    /// `vertex` lies in the relative interior of a half of `edge`.
    SegmentThroughVertex { edge: usize, half: Half, vertex: usize, point: GridPoint },
    /// Halves of two distinct edges meet other than at a common endpoint vertex.
    EdgePairIntersection {
        edges: (usize, usize),
        halves: (Half, Half),
        contact: Contact,
    },
    /// The two halves of one edge meet somewhere other than exactly the bend.
    SelfOverlap { edge: usize, contact: Contact },
    /// The bend of `edge` coincides with its own endpoint `vertex`.
    DegenerateSegment { edge: usize, vertex: usize, point: GridPoint },
    DuplicatePosition { vertices: (usize, usize), point: GridPoint },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Violation::BendOnVertex { .. } => ViolationKind::BendOnVertex,
            Violation::SegmentThroughVertex { .. } => ViolationKind::SegmentThroughVertex,
            Violation::EdgePairIntersection { .. } => ViolationKind::EdgePairIntersection,
            Violation::SelfOverlap { .. } => ViolationKind::SelfOverlap,
            Violation::DegenerateSegment { .. } => ViolationKind::DegenerateSegment,
            Violation::DuplicatePosition { .. } => ViolationKind::DuplicatePosition,
        }
    }

    /// Edge indices named by this violation.
    pub fn edges(&self) -> Vec<usize> {
        match *self {
            Violation::BendOnVertex { edge, .. }
            | Violation::SegmentThroughVertex { edge, .. }
            | Violation::SelfOverlap { edge, .. }
            | Violation::DegenerateSegment { edge, .. } => vec![edge],
            Violation::EdgePairIntersection { edges: (a, b), .. } => vec![a, b],
            Violation::DuplicatePosition { .. } => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub counts: BTreeMap<ViolationKind, usize>,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        let mut counts = BTreeMap::new();
        for v in &violations {
            *counts.entry(v.kind()).or_insert(0) += 1;
        }
        VerificationReport {
            pass: violations.is_empty(),
            counts,
            violations,
        }
    }

    pub fn names_edge(&self, edge: usize) -> bool {
        self.violations.iter().any(|v| v.edges().contains(&edge))
    }
}

fn contact_of(kind: &IntersectionKind) -> Contact {
    match kind {
        IntersectionKind::Point(p) => Contact::Point(p.to_string()),
        _ => Contact::Overlap,
    }
}

struct HalfSegment {
    edge: usize,
    half: Half,
    segment: Segment,
}

/// Checks every condition of a valid one-bend grid drawing.
pub fn verify(d: &Drawing) -> VerificationReport {
    let positions = d.placement().positions();
    let routed = d.routed();
    let mut violations = Vec::new();

    let mut at: HashMap<GridPoint, usize> = HashMap::with_capacity(positions.len());
    for (v, &p) in positions.iter().enumerate() {
        match at.get(&p) {
            Some(&first) => violations.push(Violation::DuplicatePosition {
                vertices: (first, v),
                point: p,
            }),
            None => {
                at.insert(p, v);
            }
        }
    }

    let mut halves = Vec::with_capacity(2 * routed.len());
    for (i, r) in routed.iter().enumerate() {
        let ends = [r.edge.u, r.edge.v];
        for (vertex, &p) in positions.iter().enumerate() {
            if p != r.bend {
                continue;
            }
            violations.push(if ends.contains(&vertex) {
                Violation::DegenerateSegment {
                    edge: i,
                    vertex,
                    point: p,
                }
            } else {
                Violation::BendOnVertex {
                    edge: i,
                    vertex,
                    point: p,
                }
            });
        }
        let segs = d.segments(i);
        for (half, s) in segs.iter().enumerate() {
            if let Some(segment) = s {
                halves.push(HalfSegment {
                    edge: i,
                    half,
                    segment: *segment,
                });
            }
        }
        if let [Some(a), Some(b)] = segs {
            let k = segments_intersect(&a, &b);
            if k.grid_point() != Some(r.bend) {
                violations.push(Violation::SelfOverlap {
                    edge: i,
                    contact: contact_of(&k),
                });
            }
        }
    }

    for h in &halves {
        for (vertex, &p) in positions.iter().enumerate() {
            if point_on_segment(p, &h.segment, false) {
                violations.push(Violation::SegmentThroughVertex {
                    edge: h.edge,
                    half: h.half,
                    vertex,
                    point: p,
                });
            }
        }
    }

    let pairs: Vec<Violation> = (0..halves.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let a = &halves[i];
            halves[i + 1..]
                .iter()
                .filter(move |b| b.edge != a.edge)
                .filter_map(move |b| pair_violation(d, a, b))
        })
        .collect();
    violations.extend(pairs);

    VerificationReport::from_violations(violations)
}

fn pair_violation(d: &Drawing, a: &HalfSegment, b: &HalfSegment) -> Option<Violation> {
    let k = segments_intersect(&a.segment, &b.segment);
    let excused = match k {
        IntersectionKind::Disjoint => true,
        IntersectionKind::Overlap => false,
        IntersectionKind::Point(pt) => {
            let ea = d.routed()[a.edge].edge;
            let eb = d.routed()[b.edge].edge;
            pt.to_grid_point().is_some_and(|g| {
                ea.common_vertices(&eb)
                    .any(|x| d.placement().position(x) == g)
            })
        }
    };
    (!excused).then(|| Violation::EdgePairIntersection {
        edges: (a.edge, b.edge),
        halves: (a.half, b.half),
        contact: contact_of(&k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Graph, Placement};

    fn gp(x: i64, y: i64, z: i64) -> GridPoint {
        GridPoint::new(x, y, z)
    }

    fn drawing(n: usize, edges: &[(usize, usize)], pos: &[[i64; 3]], bends: &[[i64; 3]]) -> Drawing {
        Drawing::new_unchecked(
            Graph::new(n, edges.iter().copied()).unwrap(),
            Placement::new_unchecked(pos.iter().map(|&p| p.into()).collect()).unwrap(),
            bends.iter().map(|&p| p.into()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn k2_hand_drawing_passes() {
        let d = drawing(2, &[(0, 1)], &[[1, 1, 1], [2, 2, 2]], &[[0, 3, 1]]);
        let r = verify(&d);
        assert!(r.pass, "{r:?}");
        assert!(r.counts.is_empty());
    }

    #[test]
    fn bend_on_third_vertex() {
        let d = drawing(3, &[(0, 1)], &[[0, 0, 0], [3, 0, 0], [1, 1, 1]], &[[1, 1, 1]]);
        let r = verify(&d);
        assert!(!r.pass);
        assert!(r.violations.contains(&Violation::BendOnVertex {
            edge: 0,
            vertex: 2,
            point: gp(1, 1, 1)
        }));
    }

    #[test]
    fn shared_bend_point() {
        let d = drawing(
            4,
            &[(0, 1), (2, 3)],
            &[[0, 0, 0], [2, 0, 0], [0, 2, 0], [2, 2, 0]],
            &[[1, 1, 5], [1, 1, 5]],
        );
        let r = verify(&d);
        assert_eq!(r.counts.get(&ViolationKind::EdgePairIntersection), Some(&4));
        assert!(r.violations.iter().all(|v| v.edges() == vec![0, 1]));
    }

    #[test]
    fn collinear_bend_outside_edge() {
        let d = drawing(2, &[(0, 1)], &[[0, 0, 0], [2, 0, 1]], &[[4, 0, 2]]);
        let r = verify(&d);
        // The first half also runs through w itself.
        assert_eq!(
            r.violations,
            vec![
                Violation::SelfOverlap {
                    edge: 0,
                    contact: Contact::Overlap
                },
                Violation::SegmentThroughVertex {
                    edge: 0,
                    half: 0,
                    vertex: 1,
                    point: gp(2, 0, 1)
                },
            ]
        );
    }

    #[test]
    fn segment_through_vertex() {
        let d = drawing(3, &[(0, 1)], &[[0, 0, 0], [0, 4, 1], [1, 1, 0]], &[[2, 2, 0]]);
        let r = verify(&d);
        assert!(r.violations.contains(&Violation::SegmentThroughVertex {
            edge: 0,
            half: 0,
            vertex: 2,
            point: gp(1, 1, 0)
        }));
    }

    #[test]
    fn degenerate_and_duplicate() {
        let d = drawing(3, &[(0, 1)], &[[0, 0, 0], [2, 0, 0], [2, 0, 0]], &[[0, 0, 0]]);
        let r = verify(&d);
        let kinds: Vec<_> = r.violations.iter().map(Violation::kind).collect();
        assert!(kinds.contains(&ViolationKind::DuplicatePosition));
        assert!(kinds.contains(&ViolationKind::DegenerateSegment));
    }

    #[test]
    fn common_endpoint_is_excused_but_overlap_is_not() {
        // Edges 0-1 and 0-2 meet only at vertex 0.
        let ok = drawing(
            3,
            &[(0, 1), (0, 2)],
            &[[0, 0, 0], [4, 0, 0], [0, 4, 0]],
            &[[1, 1, 3], [1, 2, 7]],
        );
        assert!(verify(&ok).pass);
        // Both first halves leave vertex 0 in the same direction.
        let bad = drawing(
            3,
            &[(0, 1), (0, 2)],
            &[[0, 0, 0], [4, 0, 0], [0, 4, 0]],
            &[[1, 1, 1], [2, 2, 2]],
        );
        let r = verify(&bad);
        assert!(r.violations.contains(&Violation::EdgePairIntersection {
            edges: (0, 1),
            halves: (0, 0),
            contact: Contact::Overlap
        }));
    }

    #[test]
    fn fractional_crossing_is_reported_exactly() {
        let d = drawing(
            4,
            &[(0, 1), (2, 3)],
            &[[0, 0, 0], [1, 1, 3], [1, 0, 0], [0, 1, 4]],
            &[[1, 1, 0], [0, 1, 0]],
        );
        let r = verify(&d);
        assert_eq!(
            r.violations,
            vec![Violation::EdgePairIntersection {
                edges: (0, 1),
                halves: (0, 0),
                contact: Contact::Point("(1/2, 1/2, 0)".into())
            }]
        );
    }
}
