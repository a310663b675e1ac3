//! Planar primitives shared by every other module.
//!
//! All predicates use exact floating-point comparisons (no epsilons) and
//! closed-set semantics: boundaries count as hits. Generators emit dyadic
//! coordinates so the midpoint arithmetic used downstream stays exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Sub for Point {
    type Output = Vec2;
    fn sub(self, rhs: Point) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add<Vec2> for Point {
    type Output = Point;
    fn add(self, rhs: Vec2) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

/// A 2-vector (edge vector, translation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn cross(self, rhs: Vec2) -> f64 {
        self.x * rhs.y - self.y * rhs.x
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

/// A closed axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRect {
    pub x_lo: f64,
    pub y_lo: f64,
    pub x_hi: f64,
    pub y_hi: f64,
}

impl AxisRect {
    /// Requires `x_lo <= x_hi` and `y_lo <= y_hi`; degenerate (zero width or
    /// height) rectangles are allowed here and rejected by the operations
    /// whose preconditions forbid them.
    pub fn new(x_lo: f64, y_lo: f64, x_hi: f64, y_hi: f64) -> Result<Self> {
        if ![x_lo, y_lo, x_hi, y_hi].iter().all(|c| c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        if x_lo > x_hi || y_lo > y_hi {
            return Err(Error::DegenerateRect);
        }
        Ok(AxisRect { x_lo, y_lo, x_hi, y_hi })
    }

    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn height(&self) -> f64 {
        self.y_hi - self.y_lo
    }

    /// Longer side over shorter side; errors on zero width or height.
    pub fn aspect_ratio(&self) -> Result<f64> {
        let (w, h) = (self.width(), self.height());
        if w <= 0.0 || h <= 0.0 {
            return Err(Error::DegenerateRect);
        }
        Ok(if w >= h { w / h } else { h / w })
    }

    /// Closed containment: boundary points count.
    pub fn contains(&self, p: Point) -> bool {
        self.x_lo <= p.x && p.x <= self.x_hi && self.y_lo <= p.y && p.y <= self.y_hi
    }

    /// True iff `p` lies strictly inside the rectangle.
    pub fn contains_interior(&self, p: Point) -> bool {
        self.x_lo < p.x && p.x < self.x_hi && self.y_lo < p.y && p.y < self.y_hi
    }

    /// Closed containment of another rectangle.
    pub fn contains_rect(&self, r: &AxisRect) -> bool {
        self.x_lo <= r.x_lo && r.x_hi <= self.x_hi && self.y_lo <= r.y_lo && r.y_hi <= self.y_hi
    }

    /// Proper containment: `r` inside `self` and not equal.
    pub fn contains_rect_proper(&self, r: &AxisRect) -> bool {
        self.contains_rect(r) && self != r
    }

    /// True iff the closed rectangles share at least one point.
    pub fn intersects(&self, other: &AxisRect) -> bool {
        self.x_lo <= other.x_hi
            && other.x_lo <= self.x_hi
            && self.y_lo <= other.y_hi
            && other.y_lo <= self.y_hi
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x_lo, self.y_lo),
            Point::new(self.x_hi, self.y_lo),
            Point::new(self.x_lo, self.y_hi),
            Point::new(self.x_hi, self.y_hi),
        ]
    }
}

/// Longer side over shorter side of a nondegenerate rectangle.
pub fn aspect_ratio(r: &AxisRect) -> Result<f64> {
    r.aspect_ratio()
}

pub fn rect_contains_point(r: &AxisRect, p: Point) -> bool {
    r.contains(p)
}

pub fn rects_intersect(a: &AxisRect, b: &AxisRect) -> bool {
    a.intersects(b)
}

/// A parallelogram spanned by edge vectors `u` and `v` from `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parallelogram {
    pub origin: Point,
    pub u: Vec2,
    pub v: Vec2,
}

impl Parallelogram {
    pub fn new(origin: Point, u: Vec2, v: Vec2) -> Result<Self> {
        if u.cross(v) == 0.0 {
            return Err(Error::DegenerateParallelogram);
        }
        Ok(Parallelogram { origin, u, v })
    }

    pub fn vertices(&self) -> [Point; 4] {
        [
            self.origin,
            self.origin + self.u,
            self.origin + self.u + self.v,
            self.origin + self.v,
        ]
    }

    /// Closed containment via the (s, t) coordinates of `p` in the (u, v) frame.
    pub fn contains(&self, p: Point) -> bool {
        let d = p - self.origin;
        let det = self.u.cross(self.v);
        let s = d.cross(self.v) / det;
        let t = self.u.cross(d) / det;
        (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t)
    }
}

/// An invertible affine map `p -> linear * p + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    /// Row-major 2x2 linear part.
    pub linear: [[f64; 2]; 2],
    pub translation: Vec2,
}

impl AffineMap {
    pub fn new(linear: [[f64; 2]; 2], translation: Vec2) -> Result<Self> {
        let det = linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::DegenerateParallelogram);
        }
        Ok(AffineMap { linear, translation })
    }

    pub fn identity() -> Self {
        AffineMap { linear: [[1.0, 0.0], [0.0, 1.0]], translation: Vec2::new(0.0, 0.0) }
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.linear[0][0] * p.x + self.linear[0][1] * p.y + self.translation.x,
            self.linear[1][0] * p.x + self.linear[1][1] * p.y + self.translation.y,
        )
    }
}

/// The affine map `L` with `L(origin) = (0,0)`, `L(origin+u) = (1,0)`,
/// `L(origin+v) = (0,1)`. Applied to any positive homothet `a*m + b` it
/// yields an axis-aligned square of side `a`.
pub fn parallelogram_to_unit_square(m: &Parallelogram) -> Result<AffineMap> {
    let det = m.u.cross(m.v);
    if det == 0.0 {
        return Err(Error::DegenerateParallelogram);
    }
    // Inverse of the column matrix [u v].
    let inv = [[m.v.y / det, -m.v.x / det], [-m.u.y / det, m.u.x / det]];
    let t = Vec2::new(
        -(inv[0][0] * m.origin.x + inv[0][1] * m.origin.y),
        -(inv[1][0] * m.origin.x + inv[1][1] * m.origin.y),
    );
    AffineMap::new(inv, t)
}

/// A positive homothet `p -> scale * p + translation` with `scale > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Homothet {
    pub scale: f64,
    pub translation: Vec2,
}

impl Homothet {
    pub fn new(scale: f64, translation: Vec2) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::DegenerateParallelogram);
        }
        Ok(Homothet { scale, translation })
    }

    pub fn identity() -> Self {
        Homothet { scale: 1.0, translation: Vec2::new(0.0, 0.0) }
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(self.scale * p.x + self.translation.x, self.scale * p.y + self.translation.y)
    }

    /// Preimage of `p` under the homothet.
    pub fn unapply(&self, p: Point) -> Point {
        Point::new((p.x - self.translation.x) / self.scale, (p.y - self.translation.y) / self.scale)
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == 0.0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// A simple polygon with counterclockwise vertices and no holes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
}

impl SimplePolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon("fewer than 3 vertices".into()));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        let k = vertices.len();
        for i in 0..k {
            if vertices[i] == vertices[(i + 1) % k] {
                return Err(Error::InvalidPolygon(format!(
                    "consecutive duplicate vertex at index {i}"
                )));
            }
        }
        // Non-adjacent edges must not touch.
        for i in 0..k {
            let (a, b) = (vertices[i], vertices[(i + 1) % k]);
            for j in i + 1..k {
                if j == i || (j + 1) % k == i || (i + 1) % k == j {
                    continue;
                }
                let (c, d) = (vertices[j], vertices[(j + 1) % k]);
                if segments_cross(a, b, c, d) {
                    return Err(Error::InvalidPolygon(format!(
                        "edges {i} and {j} intersect"
                    )));
                }
            }
        }
        let poly = SimplePolygon { vertices };
        if poly.signed_area() <= 0.0 {
            return Err(Error::InvalidPolygon("vertices are not counterclockwise".into()));
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Shoelace area (positive for counterclockwise order).
    pub fn signed_area(&self) -> f64 {
        let k = self.vertices.len();
        let mut acc = 0.0;
        for i in 0..k {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % k];
            acc += a.x * b.y - b.x * a.y;
        }
        acc / 2.0
    }

    pub fn bounding_box(&self) -> AxisRect {
        let mut r = AxisRect {
            x_lo: f64::INFINITY,
            y_lo: f64::INFINITY,
            x_hi: f64::NEG_INFINITY,
            y_hi: f64::NEG_INFINITY,
        };
        for p in &self.vertices {
            r.x_lo = r.x_lo.min(p.x);
            r.y_lo = r.y_lo.min(p.y);
            r.x_hi = r.x_hi.max(p.x);
            r.y_hi = r.y_hi.max(p.y);
        }
        r
    }

    /// Closed point-in-polygon: ray crossing with explicit boundary
    /// detection (on-edge counts as inside).
    pub fn contains(&self, p: Point) -> bool {
        let k = self.vertices.len();
        for i in 0..k {
            if on_segment(self.vertices[i], self.vertices[(i + 1) % k], p) {
                return true;
            }
        }
        let mut inside = false;
        for i in 0..k {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % k];
            // Half-open rule on y avoids double counting at vertices.
            if (a.y <= p.y) != (b.y <= p.y) {
                let side = orient(a, b, p);
                if b.y > a.y {
                    if side > 0.0 {
                        inside = !inside;
                    }
                } else if side < 0.0 {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// True iff the polygon is a parallelogram (k = 4 with equal opposite
    /// edge vectors).
    pub fn as_parallelogram(&self) -> Option<Parallelogram> {
        if self.vertices.len() != 4 {
            return None;
        }
        let [a, b, c, d] = [self.vertices[0], self.vertices[1], self.vertices[2], self.vertices[3]];
        if b - a == c - d && d - a == c - b {
            Parallelogram::new(a, b - a, d - a).ok()
        } else {
            None
        }
    }
}

/// Membership of `p` in the positive homothet `h` of `poly` (closed).
pub fn point_in_homothet_of_polygon(p: Point, poly: &SimplePolygon, h: &Homothet) -> bool {
    poly.contains(h.unapply(p))
}
