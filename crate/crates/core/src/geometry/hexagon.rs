//! Convex hexagons `ABCDEF` with opposite sides parallel and
//! `AB·DE = BC·EF = CD·FA`. For these, the orthocenter of the triangle of
//! diagonal midpoints is the midpoint of the circumcenters of `ACE` and
//! `BDF`.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::Serialize;

use super::{circumcenter, midpoint, orthocenter, scale_of, GeometryError, Point, Similarity};

/// Relative tolerance for the defining products and parallelism.
pub const HEXAGON_TOL: f64 = 1e-10;
/// Opposite sides must differ by more than this (times scale).
pub const OPPOSITE_SIDE_GAP: f64 = 1e-9;
pub const HEXAGON_RETRY_BUDGET: usize = 100;
/// Tolerance for the translated-triangle check, times scale.
pub const TRANSLATE_TOL: f64 = 1e-9;
/// Relative tolerance for the power-of-a-point identities.
pub const POWER_TOL: f64 = 1e-8;
/// Tolerance for the collinearity area test, times scale².
pub const COLLINEAR_TOL: f64 = 1e-9;

const PAIR_NAMES: [&str; 3] = ["AB/DE", "BC/EF", "CD/FA"];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hexagon {
    /// `A, B, C, D, E, F` counterclockwise.
    pub vertices: [Point; 6],
}

impl Hexagon {
    pub fn new(vertices: [Point; 6]) -> Result<Self, GeometryError> {
        if !vertices.iter().all(|p| p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let h = Self { vertices };
        let scale = h.scale();
        let edges = h.edges();
        for k in 0..6 {
            if edges[k].cross(edges[(k + 1) % 6]) <= 0.0 {
                return Err(GeometryError::NonConvex);
            }
        }
        for k in 0..3 {
            if edges[k].cross(edges[k + 3]).abs() > HEXAGON_TOL * scale * scale {
                return Err(GeometryError::NotParallel(PAIR_NAMES[k]));
            }
        }
        let products = h.opposite_products();
        let mean = products.iter().sum::<f64>() / 3.0;
        if products.iter().any(|p| (p - mean).abs() > HEXAGON_TOL * mean) {
            return Err(GeometryError::UnequalProducts(products));
        }
        let lengths = edges.map(Point::norm);
        for k in 0..3 {
            if (lengths[k] - lengths[k + 3]).abs() <= OPPOSITE_SIDE_GAP * scale {
                return Err(GeometryError::EqualOppositeSides(PAIR_NAMES[k]));
            }
        }
        Ok(h)
    }

    /// `AB, BC, CD, DE, EF, FA` as vectors.
    pub fn edges(&self) -> [Point; 6] {
        let v = self.vertices;
        std::array::from_fn(|k| v[(k + 1) % 6] - v[k])
    }

    /// `AB·DE, BC·EF, CD·FA`.
    pub fn opposite_products(&self) -> [f64; 3] {
        let l = self.edges().map(Point::norm);
        [l[0] * l[3], l[1] * l[4], l[2] * l[5]]
    }

    pub fn scale(&self) -> f64 {
        scale_of(&self.vertices)
    }

    pub fn transformed(&self, sim: &Similarity) -> Result<Self, GeometryError> {
        Self::new(self.vertices.map(|p| sim.apply(p)))
    }
}

/// Hexagon with sides `AB ∥ u`, `BC ∥ v`, `CD ∥ w` (and the opposite sides
/// antiparallel), common opposite-side product `c`, and side-length
/// differences `t·(v×w, w×u, u×v)`, starting at `anchor`.
///
/// Closure forces `(AB−DE)u + (BC−EF)v + (CD−FA)w = 0`, and the cross
/// products are the dependency coefficients of `u, v, w`. Each opposite pair
/// is then recovered from its difference `d` and product `c`.
pub fn sample_hexagon(u: Point, v: Point, w: Point, c: f64, t: f64, anchor: Point) -> Result<Hexagon, GeometryError> {
    if [u, v, w].iter().any(|d| (d.norm() - 1.0).abs() > 1e-9) {
        return Err(GeometryError::DegenerateDirections);
    }
    let coeffs = [v.cross(w), w.cross(u), u.cross(v)];
    if coeffs.iter().any(|k| k.abs() < 1e-9) {
        return Err(GeometryError::DegenerateDirections);
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(GeometryError::NonPositiveProduct(c));
    }
    if t == 0.0 {
        return Err(GeometryError::EqualOppositeSides("all"));
    }
    let pairs = coeffs.map(|k| {
        let d = t * k;
        let long = (d + (d * d + 4.0 * c).sqrt()) / 2.0;
        (long, long - d)
    });
    let a = anchor;
    let b = a + u * pairs[0].0;
    let cc = b + v * pairs[1].0;
    let d = cc + w * pairs[2].0;
    let e = d - u * pairs[0].1;
    let f = e - v * pairs[1].1;
    Hexagon::new([a, b, cc, d, e, f])
}

/// Random directions, product and difference scale; nonconvex draws are
/// redrawn up to [`HEXAGON_RETRY_BUDGET`] times.
pub fn random_hexagon(rng: &mut impl Rng) -> Result<Hexagon, GeometryError> {
    for _ in 0..HEXAGON_RETRY_BUDGET {
        let base = rng.gen_range(0.0..TAU);
        let turn1 = rng.gen_range(0.2..PI - 0.2);
        let turn2 = rng.gen_range(0.2..PI - 0.2);
        let u = Point::from_angle(base);
        let v = Point::from_angle(base + turn1);
        let w = Point::from_angle(base + turn1 + turn2);
        let c = rng.gen_range(0.5..2.0);
        let t = rng.gen_range(0.1..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let anchor = Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        match sample_hexagon(u, v, w, c, t, anchor) {
            Err(GeometryError::NonConvex) => continue,
            other => return other,
        }
    }
    Err(GeometryError::RetryBudget(HEXAGON_RETRY_BUDGET))
}

#[derive(Clone, Debug, Serialize)]
pub struct P6Report {
    pub scale: f64,
    pub circumcenter_ace: Point,
    pub circumcenter_bdf: Point,
    pub orthocenter_xyz: Point,
    /// `|H − midpoint(O₁, O₂)|` over scale.
    pub midpoint_deviation: f64,
    /// Twice the area of `O₁ O₂ H`, over scale².
    pub collinearity_area: f64,
    /// Mismatch among `A′−D′`, `C′−F′`, `E′−B′`, over scale.
    pub translation_deviation: f64,
    /// Relative errors of the six power-of-a-point identities, for `A, C, E`
    /// against circle `A′C′E′` and `B, D, F` against circle `B′D′F′`.
    pub power_deviation: [f64; 6],
    /// `|O(ACE) − O(A′C′E′)|` and `|O(BDF) − O(B′D′F′)|`, over scale.
    pub circumcenter_shift: [f64; 2],
    /// `X, Y, Z` against the midpoints of the matching medial-triangle segments, over scale.
    pub medial_deviation: [f64; 3],
    pub midpoint_holds: bool,
    pub collinear: bool,
    pub translate_holds: bool,
    pub power_holds: bool,
    pub passed: bool,
}

pub fn verify_p6(h: &Hexagon, tol: f64) -> Result<P6Report, GeometryError> {
    let scale = h.scale();
    let [a, b, c, d, e, f] = h.vertices;
    let (x, y, z) = (midpoint(a, d), midpoint(b, e), midpoint(c, f));
    let o1 = circumcenter(a, c, e)?;
    let o2 = circumcenter(b, d, f)?;
    let hx = orthocenter(x, y, z)?;
    let midpoint_deviation = hx.dist(midpoint(o1, o2)) / scale;
    let collinearity_area = (o2 - o1).cross(hx - o1).abs() / (scale * scale);

    // fourth vertices of the parallelograms ABCE′, BCDF′, CDEA′, DEFB′, EFAC′, FABD′
    let e_p = a + c - b;
    let f_p = b + d - c;
    let a_p = c + e - d;
    let b_p = d + f - e;
    let c_p = e + a - f;
    let d_p = f + b - a;
    let shifts = [a_p - d_p, c_p - f_p, e_p - b_p];
    let translation_deviation =
        scale_of(&shifts) / scale;

    let lengths = h.edges().map(Point::norm);
    let [ab, bc, cd, de, ef, fa] = lengths;
    let o_ace = circumcenter(a_p, c_p, e_p)?;
    let o_bdf = circumcenter(b_p, d_p, f_p)?;
    let r_ace = o_ace.dist(a_p);
    let r_bdf = o_bdf.dist(b_p);
    let power = |p: Point, o: Point, r: f64, expected: f64| ((p.dist(o).powi(2) - r * r) - expected).abs() / expected;
    let power_deviation = [
        power(a, o_ace, r_ace, bc * ef),
        power(c, o_ace, r_ace, ab * de),
        power(e, o_ace, r_ace, cd * fa),
        power(b, o_bdf, r_bdf, cd * fa),
        power(d, o_bdf, r_bdf, bc * ef),
        power(f, o_bdf, r_bdf, ab * de),
    ];
    let circumcenter_shift = [o1.dist(o_ace) / scale, o2.dist(o_bdf) / scale];
    let medial_deviation = [
        x.dist(midpoint(midpoint(c_p, e_p), midpoint(b_p, f_p))) / scale,
        y.dist(midpoint(midpoint(a_p, c_p), midpoint(f_p, d_p))) / scale,
        z.dist(midpoint(midpoint(a_p, e_p), midpoint(b_p, d_p))) / scale,
    ];

    let midpoint_holds = midpoint_deviation < tol;
    let collinear = collinearity_area < COLLINEAR_TOL;
    let translate_holds = translation_deviation < TRANSLATE_TOL;
    let power_holds = power_deviation.iter().all(|&p| p < POWER_TOL);
    Ok(P6Report {
        scale,
        circumcenter_ace: o1,
        circumcenter_bdf: o2,
        orthocenter_xyz: hx,
        midpoint_deviation,
        collinearity_area,
        translation_deviation,
        power_deviation,
        circumcenter_shift,
        medial_deviation,
        midpoint_holds,
        collinear,
        translate_holds,
        power_holds,
        passed: midpoint_holds && collinear && translate_holds && power_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn dirs() -> (Point, Point, Point) {
        (Point::from_angle(0.0), Point::from_angle(1.0), Point::from_angle(2.2))
    }

    #[test]
    fn sampled_hexagon_satisfies_invariants() {
        let (u, v, w) = dirs();
        let h = sample_hexagon(u, v, w, 1.3, 0.4, Point::new(1.0, 2.0)).unwrap();
        let p = h.opposite_products();
        assert!((p[0] - 1.3).abs() < 1e-12 && (p[1] - 1.3).abs() < 1e-12 && (p[2] - 1.3).abs() < 1e-12);
        let edges = h.edges();
        // closure: the last edge returns to A
        let sum = edges.iter().fold(Point::default(), |acc, &e| acc + e);
        assert!(sum.norm() < 1e-12);
        assert!(edges[2].cross(w).abs() < 1e-12 && edges[5].cross(w).abs() < 1e-12);
    }

    #[test]
    fn zero_t_rejected() {
        let (u, v, w) = dirs();
        assert!(matches!(
            sample_hexagon(u, v, w, 1.0, 0.0, Point::default()),
            Err(GeometryError::EqualOppositeSides(_))
        ));
    }

    #[test]
    fn degenerate_directions_rejected() {
        let (u, v, _) = dirs();
        assert_eq!(sample_hexagon(u, v, u, 1.0, 0.3, Point::default()), Err(GeometryError::DegenerateDirections));
        assert_eq!(
            sample_hexagon(u * 2.0, v, Point::from_angle(2.2), 1.0, 0.3, Point::default()),
            Err(GeometryError::DegenerateDirections)
        );
    }

    #[test]
    fn wrong_turning_is_nonconvex() {
        // w turns past u + π
        let (u, v) = (Point::from_angle(0.0), Point::from_angle(2.0));
        let w = Point::from_angle(4.0);
        assert_eq!(sample_hexagon(u, v, w, 1.0, 0.3, Point::default()), Err(GeometryError::NonConvex));
    }

    #[test]
    fn negated_t_swaps_opposite_sides() {
        let (u, v, w) = dirs();
        let h = sample_hexagon(u, v, w, 1.1, 0.5, Point::default()).unwrap();
        let g = sample_hexagon(u, v, w, 1.1, -0.5, Point::default()).unwrap();
        let (lh, lg) = (h.edges().map(Point::norm), g.edges().map(Point::norm));
        for k in 0..3 {
            assert!((lh[k] - lg[k + 3]).abs() < 1e-12);
        }
        let (rh, rg) = (verify_p6(&h, 1e-7).unwrap(), verify_p6(&g, 1e-7).unwrap());
        assert!(rh.passed && rg.passed);
    }

    #[test]
    fn regular_like_hexagon_is_rejected() {
        // a regular hexagon has equal opposite sides
        let verts: [Point; 6] = std::array::from_fn(|k| Point::from_angle(k as f64 * PI / 3.0));
        assert!(matches!(Hexagon::new(verts), Err(GeometryError::EqualOppositeSides(_))));
    }

    #[test]
    fn random_hexagons_pass() {
        let mut rng = seed::rng(11, "p6-unit", 0);
        for _ in 0..100 {
            let h = random_hexagon(&mut rng).unwrap();
            let r = verify_p6(&h, 1e-7).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.circumcenter_shift.iter().all(|&s| s < 1e-9));
            assert!(r.medial_deviation.iter().all(|&s| s < 1e-12));
        }
    }
}
