#![allow(dead_code)]

//! Shared test support: an independent rational segment solver and the
//! seeded instance corpus.

use gridbend::cli::{generate, Family, PlacementKind};
use gridbend::geometry::{IntersectionKind, Segment};
use gridbend::{Graph, GridPoint, Placement};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleKind {
    Disjoint,
    Point([Q; 3]),
    Overlap,
}

fn q(v: i64) -> Q {
    Q::from_integer(v as i128)
}

fn vec_of(a: GridPoint, b: GridPoint) -> [Q; 3] {
    [q(b.x - a.x), q(b.y - a.y), q(b.z - a.z)]
}

fn at(p: GridPoint, d: &[Q; 3], s: Q) -> [Q; 3] {
    [q(p.x) + d[0] * s, q(p.y) + d[1] * s, q(p.z) + d[2] * s]
}

fn unit(s: Q) -> bool {
    s >= Q::from_integer(0) && s <= Q::from_integer(1)
}

/// Solves `a0 + s (a1 - a0) = b0 + t (b1 - b0)` coordinate-wise with
/// Cramer's rule on the first non-singular pair of equations, then checks the
/// remaining equation. Parallel inputs fall back to 1-D interval overlap.
pub fn oracle_intersect(a0: GridPoint, a1: GridPoint, b0: GridPoint, b1: GridPoint) -> OracleKind {
    let d1 = vec_of(a0, a1);
    let d2 = vec_of(b0, b1);
    let r = vec_of(a0, b0);
    let zero = Q::from_integer(0);

    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        // s*d1[i] - t*d2[i] = r[i]
        // s*d1[j] - t*d2[j] = r[j]
        let det = d1[i] * (-d2[j]) - (-d2[i]) * d1[j];
        if det == zero {
            continue;
        }
        let s = (r[i] * (-d2[j]) - (-d2[i]) * r[j]) / det;
        let t = (d1[i] * r[j] - r[i] * d1[j]) / det;
        if s * d1[k] - t * d2[k] != r[k] {
            return OracleKind::Disjoint;
        }
        return if unit(s) && unit(t) {
            OracleKind::Point(at(a0, &d1, s))
        } else {
            OracleKind::Disjoint
        };
    }

    // Parallel directions.
    let k = (0..3).find(|&k| d1[k] != zero).expect("non-degenerate segment");
    let param = |p: GridPoint| vec_of(a0, p)[k] / d1[k];
    let s0 = param(b0);
    if at(a0, &d1, s0) != [q(b0.x), q(b0.y), q(b0.z)] {
        return OracleKind::Disjoint;
    }
    let s1 = param(b1);
    let lo = s0.min(s1).max(zero);
    let hi = s0.max(s1).min(Q::from_integer(1));
    if lo > hi {
        OracleKind::Disjoint
    } else if lo == hi {
        OracleKind::Point(at(a0, &d1, lo))
    } else {
        OracleKind::Overlap
    }
}

/// Converts a kernel answer into the oracle's representation.
pub fn kernel_as_oracle(k: IntersectionKind) -> OracleKind {
    match k {
        IntersectionKind::Disjoint => OracleKind::Disjoint,
        IntersectionKind::Overlap => OracleKind::Overlap,
        IntersectionKind::Point(p) => {
            let d = p.denominator();
            OracleKind::Point(p.numerators().map(|c| Q::new(c, d)))
        }
    }
}

pub fn oracle_for(a: &Segment, b: &Segment) -> OracleKind {
    oracle_intersect(a.p(), a.q(), b.p(), b.q())
}

pub fn random_point(rng: &mut impl Rng, lo: i64, hi: i64) -> GridPoint {
    GridPoint::new(rng.gen_range(lo..=hi), rng.gen_range(lo..=hi), rng.gen_range(lo..=hi))
}

pub fn random_segment(rng: &mut impl Rng, lo: i64, hi: i64) -> Segment {
    loop {
        let (p, q) = (random_point(rng, lo, hi), random_point(rng, lo, hi));
        if let Ok(s) = Segment::new(p, q) {
            return s;
        }
    }
}

/// Pairs biased toward the interesting cases: coplanar, sharing an endpoint
/// or direction, collinear, and uniform, a quarter each.
pub fn random_pair(rng: &mut impl Rng, lo: i64, hi: i64) -> (Segment, Segment) {
    match rng.gen_range(0..4) {
        0 => {
            let flat = |rng: &mut ChaCha8Rng| loop {
                let p = GridPoint::new(rng.gen_range(lo..=hi), rng.gen_range(lo..=hi), 0);
                let q = GridPoint::new(rng.gen_range(lo..=hi), rng.gen_range(lo..=hi), 0);
                if let Ok(s) = Segment::new(p, q) {
                    return s;
                }
            };
            let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
            (flat(&mut r), flat(&mut r))
        }
        1 => {
            let a = random_segment(rng, lo, hi);
            let d = a.q() - a.p();
            let start = random_point(rng, lo, hi);
            let b = if rng.gen_bool(0.5) {
                Segment::new(a.q(), random_point(rng, lo, hi))
            } else {
                Segment::new(start, start + d)
            };
            (a, b.unwrap_or_else(|_| random_segment(rng, lo, hi)))
        }
        2 => loop {
            // Both on the line base + k*dir, k in [-3, 3], clamped to the range.
            let dir = random_point(rng, -2, 2);
            let base = random_point(rng, lo / 2, hi / 2);
            let on = |k: i64| base + GridPoint::new(k * dir.x, k * dir.y, k * dir.z);
            let mut ks = [0i64; 4].map(|_| rng.gen_range(-3..=3));
            ks.swap(0, rng.gen_range(0..4));
            let a = Segment::new(on(ks[0]), on(ks[1]));
            let b = Segment::new(on(ks[2]), on(ks[3]));
            let fits = |s: &Segment| s.p().within(hi.max(-lo)) && s.q().within(hi.max(-lo));
            if let (Ok(a), Ok(b)) = (a, b) {
                if fits(&a) && fits(&b) {
                    return (a, b);
                }
            }
        },
        _ => (random_segment(rng, lo, hi), random_segment(rng, lo, hi)),
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub placement: Placement,
}

/// The seeded corpus: 200 random G(n, m) instances in `[1,20]³` with
/// `n <= 50`, `m <= 400`, plus `K_n` for `n <= 12` on the line `(i,1,1)` and
/// in small random boxes. Every coordinate is at least 1.
pub fn corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6772_6964);
    for i in 0..200u64 {
        let n = rng.gen_range(2..=50usize);
        let max_m = (n * (n - 1) / 2).min(400);
        let m = rng.gen_range(0..=max_m);
        let (graph, placement) =
            generate(Family::Gnm, n, Some(m), PlacementKind::Box(20, 20, 20), 1000 + i).unwrap();
        out.push(Instance {
            name: format!("gnm-{i}-n{n}-m{m}"),
            graph,
            placement,
        });
    }
    for n in 2..=12usize {
        out.push(Instance {
            name: format!("K{n}-line"),
            graph: Graph::complete(n),
            placement: Placement::on_x_axis(n).translated(GridPoint::new(0, 1, 1)),
        });
        let side = (n as u64).div_ceil(2).max(2);
        let (graph, placement) =
            generate(Family::Complete, n, None, PlacementKind::Box(side, side, side), 77 + n as u64)
                .unwrap();
        out.push(Instance {
            name: format!("K{n}-box{side}"),
            graph,
            placement,
        });
    }
    out
}

/// Largest x, y and z over the placement.
pub fn vertex_extent(pl: &Placement) -> (i64, i64, i64) {
    pl.positions().iter().fold((1, 1, 1), |(x, y, z), p| {
        (x.max(p.x), y.max(p.y), z.max(p.z))
    })
}
