//! Rectangles `BCC₁B₂`, `CAA₁C₂`, `ABB₁A₂` erected outside an acute triangle
//! with apex angles summing to π; the lines `B₁C₂`, `C₁A₂`, `A₁B₂` concur.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use serde::Serialize;

use super::{
    foot_of_altitude, line_intersection, midpoint, scale_of, GeometryError, Line, Point,
    Similarity,
};

/// Allowed deviation of the apex-angle sum from π.
pub const ANGLE_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Triangle {
    pub a: Point,
    pub b: Point,
    pub c: Point,
}

impl Triangle {
    pub fn new(a: Point, b: Point, c: Point) -> Self {
        Self { a, b, c }
    }

    /// `(BC, CA, AB)`.
    pub fn sides(&self) -> [f64; 3] {
        [self.b.dist(self.c), self.c.dist(self.a), self.a.dist(self.b)]
    }

    pub fn centroid(&self) -> Point {
        (self.a + self.b + self.c) * (1.0 / 3.0)
    }

    pub fn is_acute(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        (b - a).dot(c - a) > 0.0 && (a - b).dot(c - b) > 0.0 && (a - c).dot(b - c) > 0.0
    }

    pub fn scale(&self) -> f64 {
        scale_of(&[self.a, self.b, self.c])
    }

    /// Unit normal of side `pq` pointing away from the centroid.
    fn outward_normal(&self, p: Point, q: Point) -> Point {
        let n = (q - p).perp().unit();
        if n.dot(self.centroid() - p) > 0.0 {
            -n
        } else {
            n
        }
    }
}

/// Apex angle `arctan(side / height)` of a rectangle of the given width.
fn apex_angle(side: f64, height: f64) -> f64 {
    (side / height).atan()
}

/// The height over `AB` that makes `∠BC₁C + ∠CA₁A + ∠AB₁B = π`.
pub fn solve_third_height(tri: &Triangle, h_a: f64, h_b: f64) -> Result<f64, GeometryError> {
    for h in [h_a, h_b] {
        if !(h > 0.0 && h.is_finite()) {
            return Err(GeometryError::NonPositiveHeight(h));
        }
    }
    let [a, b, c] = tri.sides();
    let partial = apex_angle(a, h_a) + apex_angle(b, h_b);
    if partial <= FRAC_PI_2 + ANGLE_SUM_TOL || partial >= PI {
        return Err(GeometryError::NoPositiveHeight(partial));
    }
    Ok(c / (PI - partial).tan())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RectConfig {
    pub tri: Triangle,
    /// Widths `CC₁`, `AA₁`, `BB₁` of the rectangles over `BC`, `CA`, `AB`.
    pub heights: [f64; 3],
    pub a1: Point,
    pub a2: Point,
    pub b1: Point,
    pub b2: Point,
    pub c1: Point,
    pub c2: Point,
}

impl RectConfig {
    /// Build and validate, including the apex-angle condition.
    pub fn new(tri: Triangle, heights: [f64; 3]) -> Result<Self, GeometryError> {
        let cfg = Self::unconstrained(tri, heights)?;
        let defect = cfg.angle_defect();
        if defect.abs() > ANGLE_SUM_TOL {
            return Err(GeometryError::AngleCondition(defect));
        }
        Ok(cfg)
    }

    /// Build without the apex-angle condition, for negative controls.
    pub fn unconstrained(tri: Triangle, heights: [f64; 3]) -> Result<Self, GeometryError> {
        if ![tri.a, tri.b, tri.c].iter().all(|p| p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if !tri.is_acute() {
            return Err(GeometryError::NotAcute);
        }
        if let Some(&h) = heights.iter().find(|&&h| !(h > 0.0 && h.is_finite())) {
            return Err(GeometryError::NonPositiveHeight(h));
        }
        let [ha, hb, hc] = heights;
        let Triangle { a, b, c } = tri;
        let n_bc = tri.outward_normal(b, c);
        let n_ca = tri.outward_normal(c, a);
        let n_ab = tri.outward_normal(a, b);
        Ok(Self {
            tri,
            heights,
            c1: c + n_bc * ha,
            b2: b + n_bc * ha,
            a1: a + n_ca * hb,
            c2: c + n_ca * hb,
            b1: b + n_ab * hc,
            a2: a + n_ab * hc,
        })
    }

    /// `∠BC₁C + ∠CA₁A + ∠AB₁B − π`.
    pub fn angle_defect(&self) -> f64 {
        let sides = self.tri.sides();
        sides.iter().zip(self.heights).map(|(&s, h)| apex_angle(s, h)).sum::<f64>() - PI
    }

    /// Apply a similarity to the whole configuration.
    pub fn transformed(&self, sim: &Similarity) -> Result<Self, GeometryError> {
        let tri = Triangle::new(sim.apply(self.tri.a), sim.apply(self.tri.b), sim.apply(self.tri.c));
        Self::unconstrained(tri, self.heights.map(|h| h * sim.scale))
    }

    /// Circumcircles of the three rectangles as `(center, radius)`, over
    /// `BC`, `CA`, `AB` in that order.
    pub fn circles(&self) -> [(Point, f64); 3] {
        let Triangle { a, b, c } = self.tri;
        [(b, self.c1), (c, self.a1), (a, self.b1)].map(|(p, q)| (midpoint(p, q), p.dist(q) / 2.0))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct P1Report {
    pub scale: f64,
    pub angle_defect: f64,
    /// Pairwise intersections of `B₁C₂`, `C₁A₂`, `A₁B₂`.
    pub intersections: [Point; 3],
    /// Largest distance between the pairwise intersections, over `scale`.
    pub concurrency_spread: f64,
    /// Foot of the perpendicular from `A` to `B₁C₂`.
    pub foot: Point,
    /// `| |P − center| − radius |` for each rectangle circle, over `scale`.
    pub circle_deviation: [f64; 3],
    /// Distance from the foot to the mean intersection point, over `scale`.
    pub foot_offset: f64,
    pub concurrent: bool,
    pub on_circles: bool,
    pub foot_matches: bool,
    pub passed: bool,
}

pub fn verify_p1(cfg: &RectConfig, tol: f64) -> Result<P1Report, GeometryError> {
    let scale = cfg.tri.scale();
    let l_a = Line::through(cfg.b1, cfg.c2)?;
    let l_b = Line::through(cfg.c1, cfg.a2)?;
    let l_c = Line::through(cfg.a1, cfg.b2)?;
    let intersections = [line_intersection(l_a, l_b)?, line_intersection(l_b, l_c)?, line_intersection(l_c, l_a)?];
    let concurrency_spread = scale_of(&intersections) / scale;
    let foot = foot_of_altitude(cfg.tri.a, l_a);
    let circle_deviation = cfg.circles().map(|(center, r)| (foot.dist(center) - r).abs() / scale);
    let center = (intersections[0] + intersections[1] + intersections[2]) * (1.0 / 3.0);
    let foot_offset = foot.dist(center) / scale;
    let concurrent = concurrency_spread < tol;
    let on_circles = circle_deviation.iter().all(|&d| d < tol);
    let foot_matches = foot_offset < tol;
    Ok(P1Report {
        scale,
        angle_defect: cfg.angle_defect(),
        intersections,
        concurrency_spread,
        foot,
        circle_deviation,
        foot_offset,
        concurrent,
        on_circles,
        foot_matches,
        passed: concurrent && on_circles && foot_matches,
    })
}

/// Keeps sampled angles away from right angles and from zero.
const ANGLE_MARGIN: f64 = 0.1;

/// Three angles in `(margin, π/2 − margin)` summing to π.
fn acute_angle_triple(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let t1 = rng.gen_range(ANGLE_MARGIN..FRAC_PI_2 - ANGLE_MARGIN);
        let t2 = rng.gen_range(ANGLE_MARGIN..FRAC_PI_2 - ANGLE_MARGIN);
        let t3 = PI - t1 - t2;
        if (ANGLE_MARGIN..FRAC_PI_2 - ANGLE_MARGIN).contains(&t3) {
            return [t1, t2, t3];
        }
    }
}

/// A random valid configuration: acute triangle, admissible first two
/// heights, third height solved, then a random similarity.
pub fn random_rect_config(rng: &mut impl Rng) -> Result<RectConfig, GeometryError> {
    let [alpha, _, gamma] = acute_angle_triple(rng);
    // Inscribed in the unit circle: the arc opposite an angle is twice it.
    let a = Point::from_angle(0.0);
    let b = Point::from_angle(2.0 * gamma);
    let c = Point::from_angle(2.0 * (gamma + alpha));
    let sim = Similarity::random(rng);
    let tri = Triangle::new(sim.apply(a), sim.apply(b), sim.apply(c));
    let [side_a, side_b, _] = tri.sides();
    let [apex_a, apex_b, _] = acute_angle_triple(rng);
    let h_a = side_a / apex_a.tan();
    let h_b = side_b / apex_b.tan();
    let h_c = solve_third_height(&tri, h_a, h_b)?;
    RectConfig::new(tri, [h_a, h_b, h_c])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn equilateral() -> Triangle {
        Triangle::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, 3f64.sqrt() / 2.0))
    }

    #[test]
    fn third_height_symmetric() {
        let h = 1.0 / 3f64.sqrt();
        let hc = solve_third_height(&equilateral(), h, h).unwrap();
        assert!((hc - h).abs() < 1e-12);
    }

    #[test]
    fn third_height_boundary_rejected() {
        assert!(matches!(
            solve_third_height(&equilateral(), 1.0, 1.0),
            Err(GeometryError::NoPositiveHeight(_))
        ));
        assert!(matches!(
            solve_third_height(&equilateral(), -1.0, 1.0),
            Err(GeometryError::NonPositiveHeight(_))
        ));
    }

    #[test]
    fn third_height_satisfies_angle_sum() {
        let mut rng = seed::rng(7, "p1-unit", 0);
        for _ in 0..200 {
            let cfg = random_rect_config(&mut rng).unwrap();
            let [ha, hb, hc] = cfg.heights;
            let [a, b, c] = cfg.tri.sides();
            let sum = (a / ha).atan() + (b / hb).atan() + (c / hc).atan();
            assert!((sum - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn equilateral_concurs_at_center() {
        let h = 1.0 / 3f64.sqrt();
        let cfg = RectConfig::new(equilateral(), [h, h, h]).unwrap();
        let report = verify_p1(&cfg, 1e-9).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.foot.dist(cfg.tri.centroid()) < 1e-12);
    }

    #[test]
    fn rectangles_are_outside() {
        let h = 0.3;
        let cfg = RectConfig::unconstrained(equilateral(), [h, h, h]).unwrap();
        let g = cfg.tri.centroid();
        // every constructed corner is farther from the centroid than its base vertex
        assert!(cfg.c1.dist(g) > cfg.tri.c.dist(g));
        assert!(cfg.a1.dist(g) > cfg.tri.a.dist(g));
        assert!(cfg.b1.dist(g) > cfg.tri.b.dist(g));
        assert!((cfg.c1.dist(cfg.tri.c) - h).abs() < 1e-15);
    }

    #[test]
    fn obtuse_rejected() {
        let tri = Triangle::new(Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(1.0, 0.5));
        assert_eq!(RectConfig::unconstrained(tri, [1.0; 3]), Err(GeometryError::NotAcute));
    }

    #[test]
    fn angle_condition_enforced() {
        let h = 1.0 / 3f64.sqrt();
        assert!(matches!(
            RectConfig::new(equilateral(), [h, h, 1.05 * h]),
            Err(GeometryError::AngleCondition(_))
        ));
    }
}
