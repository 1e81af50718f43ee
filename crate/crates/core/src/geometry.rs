//! Exact integer predicates on points and segments of the integer lattice.
//!
//! Every decision here is made with integer arithmetic only. Coordinates are
//! stored as `i64` and all products are formed in `i128`; as long as every
//! segment endpoint lies within [`KERNEL_LIMIT`] the largest intermediate
//! (the unreduced numerator of an intersection point) stays below 2^115.
//!
//! Segments are closed: an intersection at an endpoint counts. Callers decide
//! which contacts are acceptable.

use std::fmt;
use std::ops::{Add, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest absolute coordinate accepted for vertex positions on input.
pub const COORD_LIMIT: i64 = 1 << 20;

/// Largest absolute coordinate accepted by [`Segment::new`]. Leaves room for
/// bends placed just outside the input range.
pub const KERNEL_LIMIT: i64 = 1 << 21;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("degenerate segment: both endpoints at {0}")]
    DegenerateSegment(GridPoint),
    #[error("coordinate out of kernel range (|c| <= {KERNEL_LIMIT}): {0}")]
    OutOfRange(GridPoint),
}

/// A point of Z³.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 3]", into = "[i64; 3]")]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl GridPoint {
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        GridPoint { x, y, z }
    }

    pub fn coords(&self) -> [i64; 3] {
        [self.x, self.y, self.z]
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> u64 {
        self.x
            .unsigned_abs()
            .max(self.y.unsigned_abs())
            .max(self.z.unsigned_abs())
    }

    pub fn within(&self, limit: i64) -> bool {
        self.max_abs() <= limit as u64
    }

    fn wide(self) -> Vec3 {
        Vec3 {
            x: self.x as i128,
            y: self.y as i128,
            z: self.z as i128,
        }
    }
}

impl From<[i64; 3]> for GridPoint {
    fn from([x, y, z]: [i64; 3]) -> Self {
        GridPoint { x, y, z }
    }
}

impl From<GridPoint> for [i64; 3] {
    fn from(p: GridPoint) -> Self {
        p.coords()
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for GridPoint {
    type Output = GridPoint;

    fn add(self, rhs: GridPoint) -> GridPoint {
        GridPoint::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for GridPoint {
    type Output = GridPoint;

    fn sub(self, rhs: GridPoint) -> GridPoint {
        GridPoint::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

// Wide difference vector used inside the predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Vec3 {
    x: i128,
    y: i128,
    z: i128,
}

impl Vec3 {
    fn cross(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    fn dot(self, o: Vec3) -> i128 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0 && self.z == 0
    }

    fn scale(self, k: i128) -> Vec3 {
        Vec3 {
            x: self.x * k,
            y: self.y * k,
            z: self.z * k,
        }
    }
}

impl Sub for Vec3 {
    type Output = Vec3;

    fn sub(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.x - o.x,
            y: self.y - o.y,
            z: self.z - o.z,
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;

    fn add(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }
}

/// A point with rational coordinates `num / den`, kept in lowest terms with
/// `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    num: [i128; 3],
    den: i128,
}

impl RationalPoint {
    /// Panics if `den == 0`.
    pub fn new(num: [i128; 3], den: i128) -> Self {
        assert!(den != 0, "rational point with zero denominator");
        let sign = den.signum();
        let g = num
            .iter()
            .fold(den.abs(), |acc, &c| acc.gcd(&c));
        RationalPoint {
            num: num.map(|c| sign * c / g),
            den: den.abs() / g,
        }
    }

    pub fn numerators(&self) -> [i128; 3] {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    /// The point as a grid point, if all of its coordinates are integers.
    pub fn to_grid_point(&self) -> Option<GridPoint> {
        if !self.is_integer() {
            return None;
        }
        let [x, y, z] = self.num;
        Some(GridPoint::new(x as i64, y as i64, z as i64))
    }
}

impl From<GridPoint> for RationalPoint {
    fn from(p: GridPoint) -> Self {
        RationalPoint {
            num: [p.x as i128, p.y as i128, p.z as i128],
            den: 1,
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coord = |c: i128| {
            let g = c.gcd(&self.den);
            match self.den / g {
                1 => format!("{}", c / g),
                d => format!("{}/{}", c / g, d),
            }
        };
        write!(
            f,
            "({}, {}, {})",
            coord(self.num[0]),
            coord(self.num[1]),
            coord(self.num[2])
        )
    }
}

/// Closed, non-degenerate segment between two grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    p: GridPoint,
    q: GridPoint,
}

impl Segment {
    pub fn new(p: GridPoint, q: GridPoint) -> Result<Self, GeometryError> {
        for pt in [p, q] {
            if !pt.within(KERNEL_LIMIT) {
                return Err(GeometryError::OutOfRange(pt));
            }
        }
        if p == q {
            return Err(GeometryError::DegenerateSegment(p));
        }
        Ok(Segment { p, q })
    }

    pub fn p(&self) -> GridPoint {
        self.p
    }

    pub fn q(&self) -> GridPoint {
        self.q
    }

    pub fn reversed(&self) -> Segment {
        Segment {
            p: self.q,
            q: self.p,
        }
    }

    pub fn has_endpoint(&self, pt: GridPoint) -> bool {
        self.p == pt || self.q == pt
    }

    /// True when the segment is parallel to the z-axis.
    pub fn is_vertical(&self) -> bool {
        self.p.x == self.q.x && self.p.y == self.q.y
    }

    /// Cheap rejection test: false when the axis-aligned boxes of the two
    /// segments are disjoint, in which case the segments are too.
    pub fn boxes_overlap(&self, other: &Segment) -> bool {
        let (a, b) = (self.coord_ranges(), other.coord_ranges());
        (0..3).all(|i| a[i].0 <= b[i].1 && b[i].0 <= a[i].1)
    }

    fn coord_ranges(&self) -> [(i64, i64); 3] {
        let (p, q) = (self.p.coords(), self.q.coords());
        [0, 1, 2].map(|i| (p[i].min(q[i]), p[i].max(q[i])))
    }

    fn contains_in_box(&self, pt: GridPoint) -> bool {
        let c = pt.coords();
        self.coord_ranges()
            .iter()
            .zip(c)
            .all(|(&(lo, hi), v)| lo <= v && v <= hi)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -- {}", self.p, self.q)
    }
}

/// How two closed segments meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionKind {
    Disjoint,
    /// Exactly one common point, possibly with non-integer coordinates.
    Point(RationalPoint),
    /// A common sub-segment of positive length.
    Overlap,
}

impl IntersectionKind {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, IntersectionKind::Disjoint)
    }

    /// The single common point, if it is a grid point.
    pub fn grid_point(&self) -> Option<GridPoint> {
        match self {
            IntersectionKind::Point(rp) => rp.to_grid_point(),
            _ => None,
        }
    }
}

/// True iff `(q - p) × (r - p)` is the zero vector.
///
/// Coordinates are expected to stay within [`KERNEL_LIMIT`]; anything below
/// 2^62 in absolute value is still exact.
pub fn collinear(p: GridPoint, q: GridPoint, r: GridPoint) -> bool {
    let (p, q, r) = (p.wide(), q.wide(), r.wide());
    (q - p).cross(r - p).is_zero()
}

/// Whether `pt` lies on the closed segment `s`. With `include_endpoints`
/// false only the relative interior is tested.
pub fn point_on_segment(pt: GridPoint, s: &Segment, include_endpoints: bool) -> bool {
    if s.has_endpoint(pt) {
        return include_endpoints;
    }
    if !s.contains_in_box(pt) {
        return false;
    }
    let (p, q, x) = (s.p.wide(), s.q.wide(), pt.wide());
    let d = q - p;
    let r = x - p;
    if !d.cross(r).is_zero() {
        return false;
    }
    let t = r.dot(d);
    0 < t && t < d.dot(d)
}

/// Exact classification of how two closed segments meet.
pub fn segments_intersect(s1: &Segment, s2: &Segment) -> IntersectionKind {
    if !s1.boxes_overlap(s2) {
        return IntersectionKind::Disjoint;
    }
    let p1 = s1.p.wide();
    let d1 = s1.q.wide() - p1;
    let d2 = s2.q.wide() - s2.p.wide();
    let r = s2.p.wide() - p1;
    let n = d1.cross(d2);

    if n.is_zero() {
        // Parallel: only collinear segments can meet.
        if !r.cross(d1).is_zero() {
            return IntersectionKind::Disjoint;
        }
        // Positions of s2's endpoints along d1, scaled by |d1|^2.
        let len = d1.dot(d1);
        let t0 = r.dot(d1);
        let t1 = (s2.q.wide() - p1).dot(d1);
        let start = t0.min(t1).max(0);
        let end = t0.max(t1).min(len);
        return match start.cmp(&end) {
            std::cmp::Ordering::Greater => IntersectionKind::Disjoint,
            std::cmp::Ordering::Equal => {
                let touch = if start == 0 { s1.p } else { s1.q };
                IntersectionKind::Point(touch.into())
            }
            std::cmp::Ordering::Less => IntersectionKind::Overlap,
        };
    }

    if r.dot(n) != 0 {
        // Skew lines.
        return IntersectionKind::Disjoint;
    }
    // Coplanar, non-parallel: p1 + s*d1 = p2 + t*d2 with s = s_num/nn, t = t_num/nn.
    let nn = n.dot(n);
    let s_num = r.cross(d2).dot(n);
    let t_num = r.cross(d1).dot(n);
    if !(0..=nn).contains(&s_num) || !(0..=nn).contains(&t_num) {
        return IntersectionKind::Disjoint;
    }
    let at = p1.scale(nn) + d1.scale(s_num);
    IntersectionKind::Point(RationalPoint::new([at.x, at.y, at.z], nn))
}

/// Number of grid points strictly inside `s`: gcd(|dx|, |dy|, |dz|) - 1.
pub fn interior_lattice_count(s: &Segment) -> u64 {
    let d = s.q - s.p;
    let g = d
        .x
        .unsigned_abs()
        .gcd(&d.y.unsigned_abs())
        .gcd(&d.z.unsigned_abs());
    g - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gp(x: i64, y: i64, z: i64) -> GridPoint {
        GridPoint::new(x, y, z)
    }

    fn seg(a: [i64; 3], b: [i64; 3]) -> Segment {
        Segment::new(a.into(), b.into()).unwrap()
    }

    #[test]
    fn collinear_examples() {
        assert!(collinear(gp(0, 0, 0), gp(1, 1, 1), gp(2, 2, 2)));
        assert!(!collinear(gp(0, 0, 0), gp(1, 0, 0), gp(0, 1, 0)));
        assert!(collinear(gp(0, 0, 0), gp(2, 4, 6), gp(3, 6, 9)));
    }

    #[test]
    fn point_on_segment_examples() {
        let s = seg([0, 0, 0], [2, 2, 2]);
        assert!(point_on_segment(gp(1, 1, 1), &s, false));
        assert!(!point_on_segment(gp(0, 0, 0), &s, false));
        assert!(point_on_segment(gp(0, 0, 0), &s, true));
        assert!(!point_on_segment(gp(1, 1, 0), &s, false));
        assert!(!point_on_segment(gp(1, 1, 0), &s, true));
        assert!(!point_on_segment(gp(3, 3, 3), &s, true));
    }

    #[test]
    fn intersect_shared_endpoint() {
        let k = segments_intersect(&seg([0, 0, 0], [1, 1, 1]), &seg([1, 1, 1], [2, 0, 0]));
        assert_eq!(k.grid_point(), Some(gp(1, 1, 1)));
    }

    #[test]
    fn intersect_crossing_interior() {
        let k = segments_intersect(&seg([0, 0, 0], [4, 2, 2]), &seg([4, 0, 0], [0, 2, 2]));
        assert_eq!(k.grid_point(), Some(gp(2, 1, 1)));
    }

    #[test]
    fn intersect_non_integer_point() {
        let k = segments_intersect(&seg([0, 0, 0], [1, 1, 0]), &seg([1, 0, 0], [0, 1, 0]));
        match k {
            IntersectionKind::Point(rp) => {
                assert!(!rp.is_integer());
                assert_eq!(rp.numerators(), [1, 1, 0]);
                assert_eq!(rp.denominator(), 2);
            }
            other => panic!("expected a point, got {other:?}"),
        }
    }

    #[test]
    fn intersect_collinear_cases() {
        let a = seg([0, 0, 0], [3, 3, 3]);
        assert_eq!(
            segments_intersect(&a, &seg([2, 2, 2], [5, 5, 5])),
            IntersectionKind::Overlap
        );
        assert_eq!(
            segments_intersect(&a, &seg([3, 3, 3], [5, 5, 5])).grid_point(),
            Some(gp(3, 3, 3))
        );
        assert_eq!(
            segments_intersect(&a, &seg([4, 4, 4], [5, 5, 5])),
            IntersectionKind::Disjoint
        );
        assert_eq!(
            segments_intersect(&a, &seg([1, 1, 1], [2, 2, 2])),
            IntersectionKind::Overlap
        );
    }

    #[test]
    fn intersect_parallel_and_skew() {
        assert_eq!(
            segments_intersect(&seg([0, 0, 0], [2, 2, 2]), &seg([0, 0, 1], [2, 2, 3])),
            IntersectionKind::Disjoint
        );
        assert_eq!(
            segments_intersect(&seg([0, 0, 0], [2, 0, 0]), &seg([1, -1, 1], [1, 1, 1])),
            IntersectionKind::Disjoint
        );
    }

    #[test]
    fn lattice_count_examples() {
        assert_eq!(interior_lattice_count(&seg([0, 0, 0], [2, 2, 2])), 1);
        assert_eq!(interior_lattice_count(&seg([0, 0, 0], [1, 5, 7])), 0);
        assert_eq!(interior_lattice_count(&seg([0, 0, 0], [4, 6, 2])), 1);
        assert_eq!(interior_lattice_count(&seg([0, 0, 0], [0, 0, 9])), 8);
    }

    #[test]
    fn segment_guards() {
        assert_eq!(
            Segment::new(gp(1, 2, 3), gp(1, 2, 3)),
            Err(GeometryError::DegenerateSegment(gp(1, 2, 3)))
        );
        let far = gp(KERNEL_LIMIT + 1, 0, 0);
        assert_eq!(
            Segment::new(gp(0, 0, 0), far),
            Err(GeometryError::OutOfRange(far))
        );
        assert!(Segment::new(gp(-KERNEL_LIMIT, 0, 0), gp(KERNEL_LIMIT, 1, 0)).is_ok());
    }

    #[test]
    fn extreme_coordinates_stay_exact() {
        let l = KERNEL_LIMIT;
        let a = seg([-l, -l, -l], [l, l, l]);
        let b = seg([l, -l, -l], [-l, l, l]);
        assert_eq!(segments_intersect(&a, &b).grid_point(), Some(gp(0, 0, 0)));
        let c = seg([-l, -l, -l + 1], [l, l - 1, l]);
        let d = seg([l, -l, -l], [-l + 1, l, l - 1]);
        // Both orders must agree even at the range limit.
        assert_eq!(segments_intersect(&c, &d), segments_intersect(&d, &c));
    }

    fn small_point() -> impl Strategy<Value = GridPoint> {
        (-8i64..=8, -8i64..=8, -8i64..=8).prop_map(|(x, y, z)| gp(x, y, z))
    }

    fn small_segment() -> impl Strategy<Value = Segment> {
        (small_point(), small_point())
            .prop_filter("non-degenerate", |(p, q)| p != q)
            .prop_map(|(p, q)| Segment::new(p, q).unwrap())
    }

    // Most random pairs are skew, so bias half the samples into the z = 0 plane.
    fn planar_segment() -> impl Strategy<Value = Segment> {
        (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4)
            .prop_filter("non-degenerate", |(a, b, c, d)| (a, b) != (c, d))
            .prop_map(|(a, b, c, d)| Segment::new(gp(a, b, 0), gp(c, d, 0)).unwrap())
    }

    fn any_segment() -> impl Strategy<Value = Segment> {
        prop_oneof![small_segment(), planar_segment()]
    }

    proptest! {
        #[test]
        fn intersection_is_symmetric(a in any_segment(), b in any_segment()) {
            prop_assert_eq!(segments_intersect(&a, &b), segments_intersect(&b, &a));
        }

        #[test]
        fn intersection_ignores_endpoint_order(a in any_segment(), b in any_segment()) {
            let k = segments_intersect(&a, &b);
            prop_assert_eq!(k, segments_intersect(&a.reversed(), &b));
            prop_assert_eq!(k, segments_intersect(&a, &b.reversed()));
            prop_assert_eq!(k, segments_intersect(&a.reversed(), &b.reversed()));
        }

        #[test]
        fn intersection_is_translation_invariant(
            a in any_segment(),
            b in any_segment(),
            t in (-1000i64..=1000, -1000i64..=1000, -1000i64..=1000),
        ) {
            let t = gp(t.0, t.1, t.2);
            let shift = |s: &Segment| Segment::new(s.p() + t, s.q() + t).unwrap();
            let moved = segments_intersect(&shift(&a), &shift(&b));
            let expected = match segments_intersect(&a, &b) {
                IntersectionKind::Point(rp) => {
                    let d = rp.denominator();
                    let n = rp.numerators();
                    IntersectionKind::Point(RationalPoint::new(
                        [n[0] + d * t.x as i128, n[1] + d * t.y as i128, n[2] + d * t.z as i128],
                        d,
                    ))
                }
                other => other,
            };
            prop_assert_eq!(moved, expected);
        }

        #[test]
        fn unit_step_means_no_interior_points(s in small_segment()) {
            let d = s.q() - s.p();
            if d.x.abs() == 1 || d.y.abs() == 1 || d.z.abs() == 1 {
                prop_assert_eq!(interior_lattice_count(&s), 0);
            }
        }
    }
}
