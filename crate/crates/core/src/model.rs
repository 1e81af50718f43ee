//! Graph, placement and drawing types plus their JSON file formats.
//!
//! Files use plain integer arrays:
//!
//! * graph: `{"n": 3, "edges": [[0, 1], [1, 2]]}`
//! * placement: `{"positions": [[x, y, z], ...]}`, one entry per vertex
//! * drawing: `{"n": .., "edges": [..], "positions": [..], "bends": [..]}`
//!   where `bends[i]` belongs to `edges[i]`
//!
//! Floats are rejected by the deserializer. Edges are stored as `(min, max)`.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GridPoint, Segment, COORD_LIMIT, KERNEL_LIMIT};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("edge {index}: self-loop at vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index}: duplicate edge ({u}, {v}), first seen as edge {first}")]
    DuplicateEdge {
        index: usize,
        first: usize,
        u: usize,
        v: usize,
    },
    #[error("edge {index}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("duplicate position {point} shared by vertices {first} and {second}")]
    DuplicatePosition {
        first: usize,
        second: usize,
        point: GridPoint,
    },
    #[error("{what}: coordinate exceeds {limit} in absolute value at {point}")]
    CoordinateOutOfRange {
        what: String,
        point: GridPoint,
        limit: i64,
    },
    #[error("expected {expected} {what}, found {found}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("edge {index}: bend {point} coincides with its endpoint vertex {vertex}")]
    BendOnEndpoint {
        index: usize,
        vertex: usize,
        point: GridPoint,
    },
}

/// An undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn contains(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// Vertex shared with `other`, if any.
    pub fn common_vertices(&self, other: &Edge) -> impl Iterator<Item = usize> + '_ {
        let other = *other;
        [self.u, self.v].into_iter().filter(move |&x| other.contains(x))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ModelError> {
        let mut seen: HashMap<Edge, usize> = HashMap::new();
        let mut edges = Vec::new();
        for (index, (a, b)) in pairs.into_iter().enumerate() {
            for vertex in [a, b] {
                if vertex >= n {
                    return Err(ModelError::VertexOutOfRange { index, vertex, n });
                }
            }
            if a == b {
                return Err(ModelError::SelfLoop { index, vertex: a });
            }
            let edge = Edge {
                u: a.min(b),
                v: a.max(b),
            };
            if let Some(&first) = seen.get(&edge) {
                return Err(ModelError::DuplicateEdge {
                    index,
                    first,
                    u: edge.u,
                    v: edge.v,
                });
            }
            seen.insert(edge, index);
            edges.push(edge);
        }
        Ok(Graph { n, edges })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| Edge { u, v }))
            .collect();
        Graph { n, edges }
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| Edge { u: v - 1, v }).collect();
        Graph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * self.n.saturating_sub(1) / 2
    }
}

/// Fixed vertex locations, indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    positions: Vec<GridPoint>,
}

impl Placement {
    /// Checks the coordinate bound and injectivity.
    pub fn new(positions: Vec<GridPoint>) -> Result<Self, ModelError> {
        check_coordinates("vertex", &positions, COORD_LIMIT)?;
        let mut seen: HashMap<GridPoint, usize> = HashMap::with_capacity(positions.len());
        for (second, &point) in positions.iter().enumerate() {
            if let Some(&first) = seen.get(&point) {
                return Err(ModelError::DuplicatePosition {
                    first,
                    second,
                    point,
                });
            }
            seen.insert(point, second);
        }
        Ok(Placement { positions })
    }

    /// Only the coordinate bound is checked. Used for drawings whose
    /// geometric validity is left to the verifier.
    pub fn new_unchecked(positions: Vec<GridPoint>) -> Result<Self, ModelError> {
        check_coordinates("vertex", &positions, COORD_LIMIT)?;
        Ok(Placement { positions })
    }

    /// Vertices at `(1, 0, 0), (2, 0, 0), ..., (n, 0, 0)`.
    pub fn on_x_axis(n: usize) -> Self {
        Placement {
            positions: (1..=n as i64).map(|x| GridPoint::new(x, 0, 0)).collect(),
        }
    }

    pub fn positions(&self) -> &[GridPoint] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> GridPoint {
        self.positions[v]
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// True when every position lies on one line (trivially so for n <= 2).
    pub fn is_collinear(&self) -> bool {
        let Some((&first, rest)) = self.positions.split_first() else {
            return true;
        };
        match rest.iter().find(|&&p| p != first) {
            None => true,
            Some(&second) => rest
                .iter()
                .all(|&p| crate::geometry::collinear(first, second, p)),
        }
    }

    pub fn translated(&self, by: GridPoint) -> Self {
        Placement {
            positions: self.positions.iter().map(|&p| p + by).collect(),
        }
    }
}

fn check_coordinates(what: &str, points: &[GridPoint], limit: i64) -> Result<(), ModelError> {
    match points.iter().enumerate().find(|(_, p)| !p.within(limit)) {
        Some((i, &point)) => Err(ModelError::CoordinateOutOfRange {
            what: format!("{what} {i}"),
            point,
            limit,
        }),
        None => Ok(()),
    }
}

/// One edge drawn as the polyline `position(u) -> bend -> position(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolylineEdge {
    pub edge: Edge,
    pub bend: GridPoint,
}

/// A graph, its placement and one bend per edge, in graph edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Drawing {
    graph: Graph,
    placement: Placement,
    routed: Vec<PolylineEdge>,
}

impl Drawing {
    /// Builds a drawing and checks every structural invariant: matching
    /// counts, an injective placement, bends in range and never on their own
    /// edge's endpoints.
    pub fn new(
        graph: Graph,
        placement: Placement,
        bends: Vec<GridPoint>,
    ) -> Result<Self, ModelError> {
        let placement = Placement::new(placement.positions)?;
        let d = Self::new_unchecked(graph, placement, bends)?;
        for (index, r) in d.routed.iter().enumerate() {
            for vertex in [r.edge.u, r.edge.v] {
                if d.placement.position(vertex) == r.bend {
                    return Err(ModelError::BendOnEndpoint {
                        index,
                        vertex,
                        point: r.bend,
                    });
                }
            }
        }
        Ok(d)
    }

    /// Checks counts and coordinate ranges only, so that hand-built or
    /// external drawings with geometric defects can still be handed to the
    /// verifier.
    pub fn new_unchecked(
        graph: Graph,
        placement: Placement,
        bends: Vec<GridPoint>,
    ) -> Result<Self, ModelError> {
        if placement.len() != graph.n() {
            return Err(ModelError::CountMismatch {
                what: "positions",
                expected: graph.n(),
                found: placement.len(),
            });
        }
        if bends.len() != graph.m() {
            return Err(ModelError::CountMismatch {
                what: "bends",
                expected: graph.m(),
                found: bends.len(),
            });
        }
        check_coordinates("vertex", placement.positions(), COORD_LIMIT)?;
        check_coordinates("bend of edge", &bends, KERNEL_LIMIT)?;
        let routed = graph
            .edges()
            .iter()
            .zip(bends)
            .map(|(&edge, bend)| PolylineEdge { edge, bend })
            .collect();
        Ok(Drawing {
            graph,
            placement,
            routed,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn placement(&self) -> &Placement {
        &self.placement
    }

    pub fn routed(&self) -> &[PolylineEdge] {
        &self.routed
    }

    pub fn bends(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.routed.iter().map(|r| r.bend)
    }

    /// The two halves `position(u) -> bend` and `bend -> position(v)` of an
    /// edge, as raw endpoint pairs (they may be degenerate in unchecked
    /// drawings).
    pub fn halves(&self, edge_index: usize) -> [(GridPoint, GridPoint); 2] {
        let r = &self.routed[edge_index];
        let (pu, pv) = (
            self.placement.position(r.edge.u),
            self.placement.position(r.edge.v),
        );
        [(pu, r.bend), (r.bend, pv)]
    }

    /// Non-degenerate halves as kernel segments.
    pub fn segments(&self, edge_index: usize) -> [Option<Segment>; 2] {
        self.halves(edge_index)
            .map(|(a, b)| Segment::new(a, b).ok())
    }

    /// Returns a copy with one bend replaced, skipping validation.
    pub fn with_bend_unchecked(&self, edge_index: usize, bend: GridPoint) -> Drawing {
        let mut d = self.clone();
        d.routed[edge_index].bend = bend;
        d
    }

    pub fn translated(&self, by: GridPoint) -> Drawing {
        Drawing {
            graph: self.graph.clone(),
            placement: self.placement.translated(by),
            routed: self
                .routed
                .iter()
                .map(|r| PolylineEdge {
                    edge: r.edge,
                    bend: r.bend + by,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlacementFile {
    positions: Vec<GridPoint>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DrawingFile {
    n: usize,
    edges: Vec<[usize; 2]>,
    positions: Vec<GridPoint>,
    bends: Vec<GridPoint>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ModelError> {
    let text = fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ModelError::Parse {
        path: path.to_owned(),
        source,
    })
}

/// Compact single-line JSON with a trailing newline.
pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ModelError> {
    let mut text = serde_json::to_string(value).expect("model types always serialize");
    text.push('\n');
    fs::write(path, text).map_err(|source| ModelError::Io {
        path: path.to_owned(),
        source,
    })
}

fn edge_pairs(g: &Graph) -> Vec<[usize; 2]> {
    g.edges().iter().map(|e| [e.u, e.v]).collect()
}

pub fn load_graph(path: &Path) -> Result<Graph, ModelError> {
    let f: GraphFile = read_json(path)?;
    Graph::new(f.n, f.edges.into_iter().map(|[u, v]| (u, v)))
}

pub fn load_placement(path: &Path) -> Result<Placement, ModelError> {
    let f: PlacementFile = read_json(path)?;
    Placement::new(f.positions)
}

/// Loads and validates a graph and its placement.
pub fn load_instance(graph_file: &Path, placement_file: &Path) -> Result<(Graph, Placement), ModelError> {
    let graph = load_graph(graph_file)?;
    let placement = load_placement(placement_file)?;
    if placement.len() != graph.n() {
        return Err(ModelError::CountMismatch {
            what: "positions",
            expected: graph.n(),
            found: placement.len(),
        });
    }
    Ok((graph, placement))
}

pub fn save_graph(g: &Graph, path: &Path) -> Result<(), ModelError> {
    write_json(
        path,
        &GraphFile {
            n: g.n(),
            edges: edge_pairs(g),
        },
    )
}

pub fn save_placement(pl: &Placement, path: &Path) -> Result<(), ModelError> {
    write_json(
        path,
        &PlacementFile {
            positions: pl.positions().to_vec(),
        },
    )
}

pub fn drawing_to_json(d: &Drawing) -> String {
    let file = DrawingFile {
        n: d.graph().n(),
        edges: edge_pairs(d.graph()),
        positions: d.placement().positions().to_vec(),
        bends: d.bends().collect(),
    };
    let mut text = serde_json::to_string(&file).expect("model types always serialize");
    text.push('\n');
    text
}

pub fn save_drawing(d: &Drawing, path: &Path) -> Result<(), ModelError> {
    fs::write(path, drawing_to_json(d)).map_err(|source| ModelError::Io {
        path: path.to_owned(),
        source,
    })
}

fn read_drawing_file(path: &Path) -> Result<(Graph, Vec<GridPoint>, Vec<GridPoint>), ModelError> {
    let f: DrawingFile = read_json(path)?;
    let graph = Graph::new(f.n, f.edges.into_iter().map(|[u, v]| (u, v)))?;
    Ok((graph, f.positions, f.bends))
}

/// Loads a drawing with full validation.
pub fn load_drawing(path: &Path) -> Result<Drawing, ModelError> {
    let (graph, positions, bends) = read_drawing_file(path)?;
    Drawing::new(graph, Placement::new(positions)?, bends)
}

/// Loads a drawing checking only graph structure, counts and coordinate
/// ranges; duplicate positions and degenerate bends are left for the
/// verifier to report.
pub fn load_drawing_unchecked(path: &Path) -> Result<Drawing, ModelError> {
    let (graph, positions, bends) = read_drawing_file(path)?;
    Drawing::new_unchecked(graph, Placement::new_unchecked(positions)?, bends)
}
