//! Floating-point plane geometry for the rectangle-concurrency and
//! hexagon-collinearity theorems.
//!
//! Every check is scale-relative: `scale` is the largest pairwise distance
//! among the input vertices, lengths are compared against `tol · scale` and
//! areas against `tol · scale²`.

mod hexagon;
mod rectangles;

use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use hexagon::{random_hexagon, sample_hexagon, verify_p6, Hexagon, P6Report, HEXAGON_RETRY_BUDGET};
pub use rectangles::{random_rect_config, solve_third_height, verify_p1, P1Report, RectConfig, Triangle};

/// Relative threshold below which a determinant counts as zero.
pub const DEGENERACY_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("points are collinear")]
    Collinear,
    #[error("lines are parallel")]
    Parallel,
    #[error("line through coincident points")]
    DegenerateLine,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("triangle is not acute")]
    NotAcute,
    #[error("rectangle height must be positive, got {0}")]
    NonPositiveHeight(f64),
    #[error("no positive third height: the first two apex angles sum to {0} rad, outside (π/2, π)")]
    NoPositiveHeight(f64),
    #[error("apex angles sum to π{0:+e}, not π")]
    AngleCondition(f64),
    #[error("hexagon is not convex and counterclockwise")]
    NonConvex,
    #[error("opposite sides {0} are not parallel")]
    NotParallel(&'static str),
    #[error("opposite-side products differ: {0:?}")]
    UnequalProducts([f64; 3]),
    #[error("opposite sides {0} have equal length, so the midpoint triangle degenerates")]
    EqualOppositeSides(&'static str),
    #[error("side directions are pairwise parallel or not unit length")]
    DegenerateDirections,
    #[error("product of opposite sides must be positive, got {0}")]
    NonPositiveProduct(f64),
    #[error("no convex sample within {0} attempts")]
    RetryBudget(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Rotation by +90°.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn unit(self) -> Point {
        self * (1.0 / self.norm())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn from_angle(theta: f64) -> Point {
        Point::new(theta.cos(), theta.sin())
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Largest pairwise distance.
pub fn scale_of(points: &[Point]) -> f64 {
    let mut s: f64 = 0.0;
    for (k, &p) in points.iter().enumerate() {
        for &q in &points[k + 1..] {
            s = s.max(p.dist(q));
        }
    }
    s
}

/// Line through `p` with direction `dir`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub point: Point,
    pub dir: Point,
}

impl Line {
    pub fn through(p: Point, q: Point) -> Result<Line, GeometryError> {
        let dir = q - p;
        if dir.norm() <= DEGENERACY_EPS * p.norm().max(q.norm()).max(1.0) {
            return Err(GeometryError::DegenerateLine);
        }
        Ok(Line { point: p, dir })
    }
}

pub fn midpoint(p: Point, q: Point) -> Point {
    (p + q) * 0.5
}

pub fn circumcenter(p: Point, q: Point, r: Point) -> Result<Point, GeometryError> {
    let b = q - p;
    let c = r - p;
    let d = 2.0 * b.cross(c);
    let s = scale_of(&[p, q, r]);
    if d.abs() <= DEGENERACY_EPS * s * s || !d.is_finite() {
        return Err(GeometryError::Collinear);
    }
    let (bb, cc) = (b.dot(b), c.dot(c));
    Ok(p + Point::new(c.y * bb - b.y * cc, b.x * cc - c.x * bb) * (1.0 / d))
}

/// Intersection of the altitudes from `p` and from `q`.
pub fn orthocenter(p: Point, q: Point, r: Point) -> Result<Point, GeometryError> {
    let s = scale_of(&[p, q, r]);
    if (q - p).cross(r - p).abs() <= DEGENERACY_EPS * s * s {
        return Err(GeometryError::Collinear);
    }
    let alt_p = Line { point: p, dir: (r - q).perp() };
    let alt_q = Line { point: q, dir: (r - p).perp() };
    line_intersection(alt_p, alt_q)
}

/// Orthogonal projection of `p` onto `line`.
pub fn foot_of_altitude(p: Point, line: Line) -> Point {
    let t = (p - line.point).dot(line.dir) / line.dir.dot(line.dir);
    line.point + line.dir * t
}

pub fn line_intersection(l1: Line, l2: Line) -> Result<Point, GeometryError> {
    let denom = l1.dir.cross(l2.dir);
    if denom.abs() <= DEGENERACY_EPS * l1.dir.norm() * l2.dir.norm() {
        return Err(GeometryError::Parallel);
    }
    let t = (l2.point - l1.point).cross(l2.dir) / denom;
    Ok(l1.point + l1.dir * t)
}

/// `x ↦ scale · R(angle) · x + shift`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Similarity {
    pub angle: f64,
    pub scale: f64,
    pub shift: Point,
}

impl Similarity {
    pub fn apply(&self, p: Point) -> Point {
        let (s, c) = self.angle.sin_cos();
        Point::new(c * p.x - s * p.y, s * p.x + c * p.y) * self.scale + self.shift
    }

    /// Random rotation, scale in `[0.1, 10]` (log-uniform) and shift in `[−100, 100]²`.
    pub fn random(rng: &mut impl Rng) -> Self {
        Self {
            angle: rng.gen_range(0.0..std::f64::consts::TAU),
            scale: 10f64.powf(rng.gen_range(-1.0..1.0)),
            shift: Point::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0)),
        }
    }
}
