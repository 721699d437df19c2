//! Planar primitives: exact integer orientation tests, strictly convex
//! hulls, areas, Hausdorff distance, circumcircles, and grid-preserving
//! (unimodular) linear maps.

use std::cmp::Ordering;

use crate::{Error, Result};

/// Grid coordinates are validated to `|c| < 2^31` so that cross products of
/// coordinate differences stay exactly representable.
pub const MAX_GRID_COORD: i64 = 1 << 31;

/// A point of the integer lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    /// Panics if a coordinate falls outside the validated range.
    pub fn new(x: i64, y: i64) -> Self {
        assert!(
            x.abs() < MAX_GRID_COORD && y.abs() < MAX_GRID_COORD,
            "grid coordinate out of range: ({x}, {y})"
        );
        GridPoint { x, y }
    }

    pub fn to_float(self) -> FloatPoint {
        FloatPoint {
            x: self.x as f64,
            y: self.y as f64,
        }
    }
}

/// A point of the real plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FloatPoint {
    pub x: f64,
    pub y: f64,
}

impl FloatPoint {
    pub fn new(x: f64, y: f64) -> Self {
        FloatPoint { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, other: FloatPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl std::ops::Add for FloatPoint {
    type Output = FloatPoint;
    fn add(self, o: FloatPoint) -> FloatPoint {
        FloatPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for FloatPoint {
    type Output = FloatPoint;
    fn sub(self, o: FloatPoint) -> FloatPoint {
        FloatPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f64> for FloatPoint {
    type Output = FloatPoint;
    fn mul(self, k: f64) -> FloatPoint {
        FloatPoint::new(self.x * k, self.y * k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

/// Exact cross product `(a - o) x (b - o)`.
///
/// Differences of validated coordinates fit in 63 bits but their products can
/// reach 2^64, so the multiplication is carried out in `i128`.
pub fn cross_grid(o: GridPoint, a: GridPoint, b: GridPoint) -> i128 {
    let ax = (a.x - o.x) as i128;
    let ay = (a.y - o.y) as i128;
    let bx = (b.x - o.x) as i128;
    let by = (b.y - o.y) as i128;
    ax * by - ay * bx
}

pub fn orient_grid(o: GridPoint, a: GridPoint, b: GridPoint) -> Orientation {
    match cross_grid(o, a, b).cmp(&0) {
        Ordering::Greater => Orientation::Ccw,
        Ordering::Less => Orientation::Cw,
        Ordering::Equal => Orientation::Collinear,
    }
}

fn cross_float(o: FloatPoint, a: FloatPoint, b: FloatPoint) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Vertex type usable in a [`ConvexChain`].
pub trait ChainPoint: Copy + PartialEq + std::fmt::Debug {
    fn lex_cmp(a: Self, b: Self) -> Ordering;
    fn orient(o: Self, a: Self, b: Self) -> Orientation;
    fn to_float(self) -> FloatPoint;
}

impl ChainPoint for GridPoint {
    fn lex_cmp(a: Self, b: Self) -> Ordering {
        a.cmp(&b)
    }

    fn orient(o: Self, a: Self, b: Self) -> Orientation {
        orient_grid(o, a, b)
    }

    fn to_float(self) -> FloatPoint {
        self.to_float()
    }
}

impl ChainPoint for FloatPoint {
    fn lex_cmp(a: Self, b: Self) -> Ordering {
        a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
    }

    fn orient(o: Self, a: Self, b: Self) -> Orientation {
        let c = cross_float(o, a, b);
        if c > 0.0 {
            Orientation::Ccw
        } else if c < 0.0 {
            Orientation::Cw
        } else {
            Orientation::Collinear
        }
    }

    fn to_float(self) -> FloatPoint {
        self
    }
}

/// Strictly convex vertex sequence in counterclockwise order.
///
/// Every consecutive vertex triple makes a strict left turn; collinear
/// boundary points are never vertices. Chains of one or two vertices
/// represent the degenerate hulls that show up in the last peeling steps.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexChain<P> {
    vertices: Vec<P>,
}

impl<P: ChainPoint> ConvexChain<P> {
    /// Convex hull of `points` (Andrew's monotone chain, strict turns only).
    pub fn hull_of(points: &[P]) -> Result<Self> {
        convex_hull(points)
    }

    /// Wraps vertices already known to be in strictly convex CCW order.
    pub(crate) fn from_convex_vertices(vertices: Vec<P>) -> Self {
        debug_assert!(!vertices.is_empty());
        #[cfg(debug_assertions)]
        if vertices.len() >= 3 {
            for i in 0..vertices.len() {
                let o = vertices[i];
                let a = vertices[(i + 1) % vertices.len()];
                let b = vertices[(i + 2) % vertices.len()];
                debug_assert!(
                    P::orient(o, a, b) == Orientation::Ccw,
                    "non-strict turn at vertex {i}"
                );
            }
        }
        ConvexChain { vertices }
    }

    pub fn vertices(&self) -> &[P] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn to_float_points(&self) -> Vec<FloatPoint> {
        self.vertices.iter().map(|p| p.to_float()).collect()
    }
}

/// Strict convex hull in CCW order.
///
/// Duplicates are removed internally. Degenerate inputs yield one- or
/// two-vertex chains; only an empty input is an error.
pub fn convex_hull<P: ChainPoint>(points: &[P]) -> Result<ConvexChain<P>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts: Vec<P> = points.to_vec();
    pts.sort_by(|a, b| P::lex_cmp(*a, *b));
    pts.dedup();

    if pts.len() <= 2 {
        return Ok(ConvexChain { vertices: pts });
    }

    let mut lower: Vec<P> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2
            && P::orient(lower[lower.len() - 2], lower[lower.len() - 1], p) != Orientation::Ccw
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && P::orient(upper[upper.len() - 2], upper[upper.len() - 1], p) != Orientation::Ccw
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(ConvexChain { vertices: lower })
}

/// Signed shoelace area of a closed polygon; positive for CCW order.
pub fn shoelace_area(points: &[FloatPoint]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..n {
        let p = points[i];
        let q = points[(i + 1) % n];
        twice += p.x * q.y - q.x * p.y;
    }
    twice / 2.0
}

/// Enclosed area of a convex chain with at least three vertices.
pub fn polygon_area<P: ChainPoint>(chain: &ConvexChain<P>) -> Result<f64> {
    if chain.len() < 3 {
        return Err(Error::DegenerateChain { min: 3 });
    }
    Ok(shoelace_area(&chain.to_float_points()).abs())
}

fn point_segment_dist(p: FloatPoint, a: FloatPoint, b: FloatPoint) -> f64 {
    let ab = b - a;
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2;
    let t = t.clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Distance from `p` to the boundary of the closed polygon `poly`.
fn point_to_boundary(p: FloatPoint, poly: &[FloatPoint]) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => p.dist(poly[0]),
        2 => point_segment_dist(p, poly[0], poly[1]),
        n => {
            let mut best = f64::INFINITY;
            for i in 0..n {
                let d = point_segment_dist(p, poly[i], poly[(i + 1) % n]);
                if d < best {
                    best = d;
                }
            }
            best
        }
    }
}

fn directed_vertex_hausdorff(from: &[FloatPoint], to: &[FloatPoint]) -> f64 {
    from.iter()
        .map(|&p| point_to_boundary(p, to))
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two convex chains.
///
/// For convex polygonal chains the maximum is attained at a vertex, so it
/// suffices to scan each chain's vertices against the other chain's boundary
/// segments.
pub fn hausdorff_distance<P: ChainPoint, Q: ChainPoint>(
    a: &ConvexChain<P>,
    b: &ConvexChain<Q>,
) -> f64 {
    let av = a.to_float_points();
    let bv = b.to_float_points();
    directed_vertex_hausdorff(&av, &bv).max(directed_vertex_hausdorff(&bv, &av))
}

/// Result of fitting a circle through three points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Circumcircle {
    Circle {
        center: FloatPoint,
        radius: f64,
    },
    /// The triple is collinear within tolerance.
    Straight,
}

/// Relative collinearity cutoff: a triple counts as straight when twice its
/// triangle area is below this factor times the squared max pairwise
/// distance. Scale-invariant, and prevents enormous spurious curvatures.
const STRAIGHT_TOL: f64 = 1e-12;

/// Circle through three pairwise distinct points, or [`Circumcircle::Straight`]
/// for (near-)collinear triples.
pub fn circumcircle(p: FloatPoint, q: FloatPoint, r: FloatPoint) -> Result<Circumcircle> {
    if p == q || q == r || p == r {
        return Err(Error::DegenerateInput("circumcircle of duplicate points"));
    }
    let b = q - p;
    let c = r - p;
    let twice_area = b.x * c.y - b.y * c.x;
    let dmax = p.dist(q).max(q.dist(r)).max(p.dist(r));
    if twice_area.abs() < STRAIGHT_TOL * dmax * dmax {
        return Ok(Circumcircle::Straight);
    }
    let b2 = b.x * b.x + b.y * b.y;
    let c2 = c.x * c.x + c.y * c.y;
    let d = 2.0 * twice_area;
    let ux = (c.y * b2 - b.y * c2) / d;
    let uy = (b.x * c2 - c.x * b2) / d;
    let center = FloatPoint::new(p.x + ux, p.y + uy);
    Ok(Circumcircle::Circle {
        center,
        radius: ux.hypot(uy),
    })
}

/// A 2x2 integer matrix with determinant +-1; bijective on the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnimodularMap {
    pub m11: i64,
    pub m12: i64,
    pub m21: i64,
    pub m22: i64,
}

impl UnimodularMap {
    pub fn new(m11: i64, m12: i64, m21: i64, m22: i64) -> Result<Self> {
        let m = UnimodularMap { m11, m12, m21, m22 };
        if m.det().abs() != 1 {
            return Err(Error::InvalidParameter(format!(
                "matrix determinant is {}, expected +-1",
                m.det()
            )));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        UnimodularMap {
            m11: 1,
            m12: 0,
            m21: 0,
            m22: 1,
        }
    }

    pub fn det(&self) -> i64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn apply(&self, p: GridPoint) -> GridPoint {
        let x = self.m11 as i128 * p.x as i128 + self.m12 as i128 * p.y as i128;
        let y = self.m21 as i128 * p.x as i128 + self.m22 as i128 * p.y as i128;
        GridPoint::new(
            i64::try_from(x).expect("mapped coordinate overflows i64"),
            i64::try_from(y).expect("mapped coordinate overflows i64"),
        )
    }

    /// Exact integer inverse (valid because `|det| = 1`).
    pub fn inverse(&self) -> UnimodularMap {
        let d = self.det();
        UnimodularMap {
            m11: self.m22 * d,
            m12: -self.m12 * d,
            m21: -self.m21 * d,
            m22: self.m11 * d,
        }
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap {
            m11: self.m11 * other.m11 + self.m12 * other.m21,
            m12: self.m11 * other.m12 + self.m12 * other.m22,
            m21: self.m21 * other.m11 + self.m22 * other.m21,
            m22: self.m21 * other.m12 + self.m22 * other.m22,
        }
    }
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        (g, t, s - a.div_euclid(b) * t)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}

fn floor_div(a: i64, b: i64) -> i64 {
    debug_assert!(b != 0);
    let q = a / b;
    if a % b != 0 && (a < 0) != (b < 0) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}

/// Grid-preserving map sending `v1` to the positive x-axis such that the
/// image of `v2` has slope of absolute value at least 2.
///
/// `v1` must be primitive and `v1, v2` linearly independent. Built from the
/// extended Euclidean algorithm followed by a horizontal shear
/// `(x, y) -> (x - m*y, y)` with `m` one of `floor(x2'/y2')`, `ceil(x2'/y2')`
/// for the intermediate image `(x2', y2')` of `v2`, picking whichever
/// maximizes the final slope (ties go to the floor).
pub fn grid_preserving_normalize(v1: GridPoint, v2: GridPoint) -> Result<UnimodularMap> {
    let (g, s, t) = ext_gcd(v1.x, v1.y);
    if g != 1 {
        return Err(Error::NonPrimitiveVector);
    }
    if cross_grid(GridPoint::new(0, 0), v1, v2) == 0 {
        return Err(Error::DependentVectors);
    }
    // first: v1 -> (1, 0); rows chosen so det = s*x1 + t*y1 = 1
    let first = UnimodularMap {
        m11: s,
        m12: t,
        m21: -v1.y,
        m22: v1.x,
    };
    let w = first.apply(v2);
    debug_assert!(w.y != 0, "independent input mapped onto the x-axis");
    let candidates = [floor_div(w.x, w.y), ceil_div(w.x, w.y)];
    // remainder |x2' - m*y2'| minimal <=> slope |y2' / (x2' - m*y2')| maximal
    let mut best = candidates[0];
    let mut best_rem = (w.x - best * w.y).abs();
    for &m in &candidates[1..] {
        let rem = (w.x - m * w.y).abs();
        if rem < best_rem {
            best = m;
            best_rem = rem;
        }
    }
    let shear = UnimodularMap {
        m11: 1,
        m12: -best,
        m21: 0,
        m22: 1,
    };
    Ok(shear.compose(&first))
}

/// Coordinate `K` of the point `(K, K)` where the chain, read as an open
/// polyline, crosses the diagonal `y = x`. A vertex lying on the diagonal is
/// returned directly; otherwise the crossing edge is interpolated linearly.
pub fn diagonal_intersection<P: ChainPoint>(chain: &ConvexChain<P>) -> Result<f64> {
    let pts = chain.to_float_points();
    for (i, p) in pts.iter().enumerate() {
        let d = p.x - p.y;
        if d == 0.0 {
            return Ok(p.x);
        }
        if i + 1 < pts.len() {
            let q = pts[i + 1];
            let dq = q.x - q.y;
            if dq == 0.0 {
                continue; // picked up as a vertex on the next iteration
            }
            if (d > 0.0) != (dq > 0.0) {
                let s = d / (d - dq);
                return Ok(p.x + s * (q.x - p.x));
            }
        }
    }
    Err(Error::NoDiagonalCrossing)
}
