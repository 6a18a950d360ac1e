//! Constructed metric spaces with exact distance oracles.
//!
//! A [`Space`] is built from a [`Constructor`] tree. The smooth family
//! (sphere, circle, line, products, cones, suspensions, joins) nests
//! freely and every distance is a closed form. Three glued surfaces and
//! solids (barrel, capped cylinder, flat disc) plus explicit edge-weighted
//! graphs are supported at the top level only; their caches (shortest-path
//! tables, crossing-minimization memos) live on the handle.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod glued;
pub mod graph;
pub mod sampling;

pub use graph::GraphData;

const TWO_PI: f64 = 2.0 * PI;

/// Tolerance used when validating point coordinates against a space.
pub const POINT_TOL: f64 = 1e-6;

/// Recipe for a metric space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Constructor {
    /// Unit round sphere of the given dimension, points in R^{dim+1}.
    Sphere { dim: usize },
    /// Metric circle of the given total perimeter.
    Circle { perimeter: f64 },
    /// The real line.
    Line,
    /// The half line [0, inf).
    HalfLine,
    /// Metric product with the Pythagorean combination.
    Product { a: Box<Constructor>, b: Box<Constructor> },
    /// Euclidean cone over a base of curvature class 1.
    Cone { base: Box<Constructor> },
    /// Spherical suspension over a base of curvature class 1.
    Suspension { base: Box<Constructor> },
    /// Spherical join of two factors of curvature class 1.
    Join { a: Box<Constructor>, b: Box<Constructor> },
    /// Explicit finite graph with positive edge weights.
    Graph(GraphData),
    /// Open-top cylindrical cup: unit-radius lateral wall of the given
    /// height with a flat unit-disc floor glued along the bottom rim.
    Barrel { height: f64 },
    /// Convex solid in R^3: unit cylinder 0 <= z, truncated above by the
    /// cone z <= height + cone_depth * (1 - r). Carries the Euclidean
    /// metric; geodesics are straight segments.
    CappedCylinder { height: f64, cone_depth: f64 },
    /// Flat round disc of the given radius with the Euclidean metric.
    FlatDisc { radius: f64 },
}

/// A location in some constructed space. Which variants are meaningful
/// depends on the constructor tree; [`Space::validate_point`] checks the
/// match.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Point {
    Sphere { coords: Vec<f64> },
    Circle { arc: f64 },
    Real { t: f64 },
    Pair { a: Box<Point>, b: Box<Point> },
    Cone { r: f64, base: Box<Point> },
    Susp { lat: f64, base: Box<Point> },
    Join { mix: f64, a: Box<Point>, b: Box<Point> },
    Node { id: usize },
    /// Barrel lateral wall: angle along the rim, height above the floor.
    Wall { arc: f64, up: f64 },
    /// Barrel floor or flat disc, polar coordinates.
    Cap { r: f64, arc: f64 },
    /// Solid body point in R^3.
    Body { x: f64, y: f64, z: f64 },
}

/// Curvature class a constructor guarantees by design.
pub fn declared_k(cons: &Constructor) -> f64 {
    match cons {
        Constructor::Sphere { .. } => 1.0,
        Constructor::Circle { perimeter } => {
            if *perimeter <= TWO_PI + crate::spaceforms::LENGTH_TOL {
                1.0
            } else {
                0.0
            }
        }
        Constructor::Line | Constructor::HalfLine => 0.0,
        Constructor::Product { a, b } => declared_k(a).min(declared_k(b)).min(0.0),
        Constructor::Cone { .. } => 0.0,
        Constructor::Suspension { .. } | Constructor::Join { .. } => 1.0,
        Constructor::Graph(g) => g.k,
        Constructor::Barrel { .. }
        | Constructor::CappedCylinder { .. }
        | Constructor::FlatDisc { .. } => 0.0,
    }
}

fn is_smooth_family(cons: &Constructor) -> bool {
    match cons {
        Constructor::Sphere { .. }
        | Constructor::Circle { .. }
        | Constructor::Line
        | Constructor::HalfLine => true,
        Constructor::Product { a, b } | Constructor::Join { a, b } => {
            is_smooth_family(a) && is_smooth_family(b)
        }
        Constructor::Cone { base } | Constructor::Suspension { base } => is_smooth_family(base),
        _ => false,
    }
}

fn validate_constructor(cons: &Constructor, top: bool) -> Result<()> {
    match cons {
        Constructor::Sphere { dim } => {
            if !(1..=8).contains(dim) {
                return Err(Error::InvalidSpec(format!("sphere dimension {dim} outside 1..=8")));
            }
        }
        Constructor::Circle { perimeter } => {
            if !perimeter.is_finite() || *perimeter <= 0.0 {
                return Err(Error::InvalidSpec(format!("circle perimeter {perimeter} must be positive")));
            }
        }
        Constructor::Line | Constructor::HalfLine => {}
        Constructor::Product { a, b } => {
            for f in [a, b] {
                if !is_smooth_family(f) {
                    return Err(Error::InvalidSpec(
                        "product factors must come from the closed-form family".into(),
                    ));
                }
                validate_constructor(f, false)?;
            }
        }
        Constructor::Cone { base } | Constructor::Suspension { base } => {
            if !is_smooth_family(base) {
                return Err(Error::InvalidSpec(
                    "cone and suspension bases must come from the closed-form family".into(),
                ));
            }
            validate_constructor(base, false)?;
            if declared_k(base) < 1.0 {
                return Err(Error::WrongCurvature(format!(
                    "cone/suspension base must be curvature class 1, got {}",
                    describe(base)
                )));
            }
        }
        Constructor::Join { a, b } => {
            for f in [a, b] {
                if !is_smooth_family(f) {
                    return Err(Error::InvalidSpec(
                        "join factors must come from the closed-form family".into(),
                    ));
                }
                validate_constructor(f, false)?;
                if declared_k(f) < 1.0 {
                    return Err(Error::WrongCurvature(format!(
                        "join factors must be curvature class 1, got {}",
                        describe(f)
                    )));
                }
            }
        }
        Constructor::Graph(g) => {
            if !top {
                return Err(Error::InvalidSpec("graphs cannot be nested".into()));
            }
            g.validate()?;
        }
        Constructor::Barrel { height } => {
            if !top {
                return Err(Error::InvalidSpec("barrel cannot be nested".into()));
            }
            if !height.is_finite() || *height <= 0.0 || *height > 100.0 {
                return Err(Error::InvalidSpec(format!("barrel height {height} outside (0, 100]")));
            }
        }
        Constructor::CappedCylinder { height, cone_depth } => {
            if !top {
                return Err(Error::InvalidSpec("capped cylinder cannot be nested".into()));
            }
            if !height.is_finite() || *height <= 0.0 || *height > 100.0 {
                return Err(Error::InvalidSpec(format!("height {height} outside (0, 100]")));
            }
            if !cone_depth.is_finite() || *cone_depth < 0.0 || *cone_depth > 100.0 {
                return Err(Error::InvalidSpec(format!("cone depth {cone_depth} outside [0, 100]")));
            }
        }
        Constructor::FlatDisc { radius } => {
            if !top {
                return Err(Error::InvalidSpec("flat disc cannot be nested".into()));
            }
            if !radius.is_finite() || *radius <= 0.0 || *radius > 100.0 {
                return Err(Error::InvalidSpec(format!("disc radius {radius} outside (0, 100]")));
            }
        }
    }
    Ok(())
}

/// Short human-readable description of a constructor tree.
pub fn describe(cons: &Constructor) -> String {
    match cons {
        Constructor::Sphere { dim } => format!("sphere({dim})"),
        Constructor::Circle { perimeter } => format!("circle({})", crate::util::fmt_sig(*perimeter, 6)),
        Constructor::Line => "line".into(),
        Constructor::HalfLine => "half_line".into(),
        Constructor::Product { a, b } => format!("product({}, {})", describe(a), describe(b)),
        Constructor::Cone { base } => format!("cone({})", describe(base)),
        Constructor::Suspension { base } => format!("suspension({})", describe(base)),
        Constructor::Join { a, b } => format!("join({}, {})", describe(a), describe(b)),
        Constructor::Graph(g) => format!("graph({} nodes)", g.nodes.len()),
        Constructor::Barrel { height } => format!("barrel({})", crate::util::fmt_sig(*height, 6)),
        Constructor::CappedCylinder { height, cone_depth } => format!(
            "capped_cylinder({}, {})",
            crate::util::fmt_sig(*height, 6),
            crate::util::fmt_sig(*cone_depth, 6)
        ),
        Constructor::FlatDisc { radius } => format!("flat_disc({})", crate::util::fmt_sig(*radius, 6)),
    }
}

/// Base point used when a redundant coordinate must be pinned.
pub fn origin(cons: &Constructor) -> Point {
    match cons {
        Constructor::Sphere { dim } => {
            let mut coords = vec![0.0; dim + 1];
            coords[0] = 1.0;
            Point::Sphere { coords }
        }
        Constructor::Circle { .. } => Point::Circle { arc: 0.0 },
        Constructor::Line | Constructor::HalfLine => Point::Real { t: 0.0 },
        Constructor::Product { a, b } => Point::Pair {
            a: Box::new(origin(a)),
            b: Box::new(origin(b)),
        },
        Constructor::Cone { base } => Point::Cone { r: 0.0, base: Box::new(origin(base)) },
        Constructor::Suspension { base } => Point::Susp { lat: 0.0, base: Box::new(origin(base)) },
        Constructor::Join { a, b } => Point::Join {
            mix: 0.0,
            a: Box::new(origin(a)),
            b: Box::new(origin(b)),
        },
        Constructor::Graph(_) => Point::Node { id: 0 },
        Constructor::Barrel { .. } => Point::Wall { arc: 0.0, up: 0.0 },
        Constructor::CappedCylinder { .. } => Point::Body { x: 0.0, y: 0.0, z: 0.0 },
        Constructor::FlatDisc { .. } => Point::Cap { r: 0.0, arc: 0.0 },
    }
}

fn kill_negative_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn validate_point_inner(cons: &Constructor, p: &Point) -> Result<()> {
    let mismatch = || {
        Err(Error::ForeignPoint(format!(
            "point {p:?} does not fit {}",
            describe(cons)
        )))
    };
    match (cons, p) {
        (Constructor::Sphere { dim }, Point::Sphere { coords }) => {
            if coords.len() != dim + 1 {
                return mismatch();
            }
            let n2: f64 = coords.iter().map(|c| c * c).sum();
            if !n2.is_finite() || (n2.sqrt() - 1.0).abs() > POINT_TOL {
                return Err(Error::ForeignPoint(format!(
                    "sphere coordinates have norm {} (must be 1)",
                    n2.sqrt()
                )));
            }
            Ok(())
        }
        (Constructor::Circle { .. }, Point::Circle { arc }) => {
            if arc.is_finite() {
                Ok(())
            } else {
                mismatch()
            }
        }
        (Constructor::Line, Point::Real { t }) => {
            if t.is_finite() {
                Ok(())
            } else {
                mismatch()
            }
        }
        (Constructor::HalfLine, Point::Real { t }) => {
            if t.is_finite() && *t >= -POINT_TOL {
                Ok(())
            } else {
                mismatch()
            }
        }
        (Constructor::Product { a: ca, b: cb }, Point::Pair { a, b }) => {
            validate_point_inner(ca, a)?;
            validate_point_inner(cb, b)
        }
        (Constructor::Cone { base }, Point::Cone { r, base: bp }) => {
            if !r.is_finite() || *r < -POINT_TOL {
                return mismatch();
            }
            validate_point_inner(base, bp)
        }
        (Constructor::Suspension { base }, Point::Susp { lat, base: bp }) => {
            if !lat.is_finite() || !(-POINT_TOL..=PI + POINT_TOL).contains(lat) {
                return mismatch();
            }
            validate_point_inner(base, bp)
        }
        (Constructor::Join { a: ca, b: cb }, Point::Join { mix, a, b }) => {
            if !mix.is_finite() || !(-POINT_TOL..=FRAC_PI_2 + POINT_TOL).contains(mix) {
                return mismatch();
            }
            validate_point_inner(ca, a)?;
            validate_point_inner(cb, b)
        }
        (Constructor::Graph(g), Point::Node { id }) => {
            if *id < g.nodes.len() {
                Ok(())
            } else {
                Err(Error::ForeignPoint(format!("node {id} out of range")))
            }
        }
        (Constructor::Barrel { height }, Point::Wall { arc, up }) => {
            if arc.is_finite() && up.is_finite() && (-POINT_TOL..=height + POINT_TOL).contains(up) {
                Ok(())
            } else {
                mismatch()
            }
        }
        (Constructor::Barrel { .. }, Point::Cap { r, arc }) => {
            if arc.is_finite() && r.is_finite() && (-POINT_TOL..=1.0 + POINT_TOL).contains(r) {
                Ok(())
            } else {
                mismatch()
            }
        }
        (Constructor::CappedCylinder { height, cone_depth }, Point::Body { x, y, z }) => {
            if !(x.is_finite() && y.is_finite() && z.is_finite()) {
                return mismatch();
            }
            let r = x.hypot(*y);
            let inside = r <= 1.0 + POINT_TOL
                && *z >= -POINT_TOL
                && *z <= height + cone_depth * (1.0 - r) + POINT_TOL;
            if inside {
                Ok(())
            } else {
                Err(Error::ForeignPoint(format!(
                    "({x}, {y}, {z}) lies outside the solid"
                )))
            }
        }
        (Constructor::FlatDisc { radius }, Point::Cap { r, arc }) => {
            if arc.is_finite() && r.is_finite() && (-POINT_TOL..=radius + POINT_TOL).contains(r) {
                Ok(())
            } else {
                mismatch()
            }
        }
        _ => mismatch(),
    }
}

fn canonical_inner(cons: &Constructor, p: &Point) -> Point {
    match (cons, p) {
        (Constructor::Sphere { .. }, Point::Sphere { coords }) => {
            let n: f64 = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
            let coords = coords.iter().map(|c| kill_negative_zero(c / n)).collect();
            Point::Sphere { coords }
        }
        (Constructor::Circle { perimeter }, Point::Circle { arc }) => Point::Circle {
            arc: kill_negative_zero(arc.rem_euclid(*perimeter)),
        },
        (Constructor::Line, Point::Real { t }) => Point::Real { t: kill_negative_zero(*t) },
        (Constructor::HalfLine, Point::Real { t }) => Point::Real {
            t: kill_negative_zero(t.max(0.0)),
        },
        (Constructor::Product { a: ca, b: cb }, Point::Pair { a, b }) => Point::Pair {
            a: Box::new(canonical_inner(ca, a)),
            b: Box::new(canonical_inner(cb, b)),
        },
        (Constructor::Cone { base }, Point::Cone { r, base: bp }) => {
            let r = kill_negative_zero(r.max(0.0));
            if r == 0.0 {
                Point::Cone { r, base: Box::new(origin(base)) }
            } else {
                Point::Cone { r, base: Box::new(canonical_inner(base, bp)) }
            }
        }
        (Constructor::Suspension { base }, Point::Susp { lat, base: bp }) => {
            let lat = kill_negative_zero(lat.clamp(0.0, PI));
            if lat == 0.0 || lat == PI {
                Point::Susp { lat, base: Box::new(origin(base)) }
            } else {
                Point::Susp { lat, base: Box::new(canonical_inner(base, bp)) }
            }
        }
        (Constructor::Join { a: ca, b: cb }, Point::Join { mix, a, b }) => {
            let mix = kill_negative_zero(mix.clamp(0.0, FRAC_PI_2));
            if mix == 0.0 {
                Point::Join {
                    mix,
                    a: Box::new(canonical_inner(ca, a)),
                    b: Box::new(origin(cb)),
                }
            } else if mix == FRAC_PI_2 {
                Point::Join {
                    mix,
                    a: Box::new(origin(ca)),
                    b: Box::new(canonical_inner(cb, b)),
                }
            } else {
                Point::Join {
                    mix,
                    a: Box::new(canonical_inner(ca, a)),
                    b: Box::new(canonical_inner(cb, b)),
                }
            }
        }
        (Constructor::Graph(_), Point::Node { id }) => Point::Node { id: *id },
        (Constructor::Barrel { height }, Point::Wall { arc, up }) => Point::Wall {
            arc: kill_negative_zero(arc.rem_euclid(TWO_PI)),
            up: kill_negative_zero(up.clamp(0.0, *height)),
        },
        (Constructor::Barrel { .. }, Point::Cap { r, arc }) => {
            let r = r.clamp(0.0, 1.0);
            if r == 1.0 {
                // Rim points are wall points at height zero.
                Point::Wall { arc: kill_negative_zero(arc.rem_euclid(TWO_PI)), up: 0.0 }
            } else if r == 0.0 {
                Point::Cap { r: 0.0, arc: 0.0 }
            } else {
                Point::Cap { r, arc: kill_negative_zero(arc.rem_euclid(TWO_PI)) }
            }
        }
        (Constructor::CappedCylinder { .. }, Point::Body { x, y, z }) => Point::Body {
            x: kill_negative_zero(*x),
            y: kill_negative_zero(*y),
            z: kill_negative_zero(z.max(0.0)),
        },
        (Constructor::FlatDisc { radius }, Point::Cap { r, arc }) => {
            let r = r.clamp(0.0, *radius);
            if r == 0.0 {
                Point::Cap { r: 0.0, arc: 0.0 }
            } else {
                Point::Cap { r, arc: kill_negative_zero(arc.rem_euclid(TWO_PI)) }
            }
        }
        _ => p.clone(),
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// sin/cos with exact values at the quarter-turn marks. Canonical points
/// carry exact 0, pi/2, pi coordinates, and several equality statements
/// are verified to be exactly zero in float arithmetic; the 1e-16 dust of
/// `sin_cos` at those marks would spoil that.
fn exact_sin_cos(t: f64) -> (f64, f64) {
    if t == 0.0 {
        (0.0, 1.0)
    } else if t == FRAC_PI_2 {
        (1.0, 0.0)
    } else if t == PI {
        (0.0, -1.0)
    } else {
        t.sin_cos()
    }
}

fn circle_gap(perimeter: f64, a: f64, b: f64) -> f64 {
    let d = (a - b).abs().rem_euclid(perimeter);
    d.min(perimeter - d).max(0.0)
}

fn dist_smooth(cons: &Constructor, x: &Point, y: &Point) -> Result<f64> {
    Ok(cos_or_dist_smooth(cons, x, y)?.into_dist())
}

/// Some constructors produce the cosine of the distance natively; keeping
/// that form until the caller decides avoids arccos/cos round trips.
enum DistForm {
    Plain(f64),
    Cosine(f64),
}

impl DistForm {
    fn into_dist(self) -> f64 {
        match self {
            DistForm::Plain(d) => d,
            DistForm::Cosine(c) => clamp_unit(c).acos(),
        }
    }
    fn into_cos(self) -> f64 {
        match self {
            DistForm::Plain(d) => d.cos(),
            DistForm::Cosine(c) => clamp_unit(c),
        }
    }
}

fn cos_or_dist_smooth(cons: &Constructor, x: &Point, y: &Point) -> Result<DistForm> {
    let mismatch = || {
        Err(Error::ForeignPoint(format!(
            "points do not fit {}",
            describe(cons)
        )))
    };
    match (cons, x, y) {
        (Constructor::Sphere { .. }, Point::Sphere { coords: u }, Point::Sphere { coords: v }) => {
            let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
            Ok(DistForm::Cosine(dot))
        }
        (Constructor::Circle { perimeter }, Point::Circle { arc: a }, Point::Circle { arc: b }) => {
            Ok(DistForm::Plain(circle_gap(*perimeter, *a, *b)))
        }
        (Constructor::Line | Constructor::HalfLine, Point::Real { t: a }, Point::Real { t: b }) => {
            Ok(DistForm::Plain((a - b).abs()))
        }
        (
            Constructor::Product { a: ca, b: cb },
            Point::Pair { a: xa, b: xb },
            Point::Pair { a: ya, b: yb },
        ) => {
            let da = dist_smooth(ca, xa, ya)?;
            let db = dist_smooth(cb, xb, yb)?;
            Ok(DistForm::Plain(da.hypot(db)))
        }
        (
            Constructor::Cone { base },
            Point::Cone { r: r1, base: b1 },
            Point::Cone { r: r2, base: b2 },
        ) => {
            if *r1 == 0.0 || *r2 == 0.0 {
                return Ok(DistForm::Plain((r1 - r2).abs()));
            }
            let delta = dist_smooth(base, b1, b2)?.min(PI);
            let d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * delta.cos();
            Ok(DistForm::Plain(d2.max(0.0).sqrt()))
        }
        (
            Constructor::Suspension { base },
            Point::Susp { lat: t1, base: b1 },
            Point::Susp { lat: t2, base: b2 },
        ) => {
            let (s1, c1) = exact_sin_cos(*t1);
            let (s2, c2) = exact_sin_cos(*t2);
            if s1 == 0.0 || s2 == 0.0 {
                // A pole is involved; the base separation is irrelevant.
                return Ok(DistForm::Cosine(c1 * c2));
            }
            let delta = dist_smooth(base, b1, b2)?.min(PI);
            Ok(DistForm::Cosine(c1 * c2 + s1 * s2 * delta.cos()))
        }
        (
            Constructor::Join { a: ca, b: cb },
            Point::Join { mix: t1, a: a1, b: b1 },
            Point::Join { mix: t2, a: a2, b: b2 },
        ) => {
            let (s1, c1) = exact_sin_cos(*t1);
            let (s2, c2) = exact_sin_cos(*t2);
            let ca_term = if c1 == 0.0 || c2 == 0.0 {
                0.0
            } else {
                c1 * c2 * dist_smooth(ca, a1, a2)?.min(PI).cos()
            };
            let cb_term = if s1 == 0.0 || s2 == 0.0 {
                0.0
            } else {
                s1 * s2 * dist_smooth(cb, b1, b2)?.min(PI).cos()
            };
            Ok(DistForm::Cosine(ca_term + cb_term))
        }
        _ => mismatch(),
    }
}

fn geodesic_smooth(cons: &Constructor, x: &Point, y: &Point, t: f64) -> Result<Point> {
    let mismatch = || {
        Err(Error::ForeignPoint(format!(
            "points do not fit {}",
            describe(cons)
        )))
    };
    if t <= 1e-15 {
        return Ok(x.clone());
    }
    if t >= 1.0 - 1e-15 {
        return Ok(y.clone());
    }
    match (cons, x, y) {
        (Constructor::Sphere { .. }, Point::Sphere { coords: u }, Point::Sphere { coords: v }) => {
            let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
            let c = clamp_unit(dot);
            if c <= -1.0 + 1e-12 {
                return Err(Error::AmbiguousGeodesic(
                    "endpoints are antipodal on the sphere".into(),
                ));
            }
            let ang = c.acos();
            if ang < 1e-15 {
                return Ok(x.clone());
            }
            let (wa, wb) = (((1.0 - t) * ang).sin() / ang.sin(), (t * ang).sin() / ang.sin());
            let coords: Vec<f64> = u.iter().zip(v).map(|(a, b)| wa * a + wb * b).collect();
            let n: f64 = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
            Ok(Point::Sphere {
                coords: coords.into_iter().map(|c| kill_negative_zero(c / n)).collect(),
            })
        }
        (Constructor::Circle { perimeter }, Point::Circle { arc: a }, Point::Circle { arc: b }) => {
            let l = *perimeter;
            let fwd = (b - a).rem_euclid(l);
            let gap = fwd.min(l - fwd);
            if (fwd - l / 2.0).abs() <= 1e-12 && gap > 1e-12 {
                return Err(Error::AmbiguousGeodesic(
                    "endpoints are antipodal on the circle".into(),
                ));
            }
            let step = if fwd <= l / 2.0 { fwd } else { -(l - fwd) };
            Ok(Point::Circle {
                arc: kill_negative_zero((a + t * step).rem_euclid(l)),
            })
        }
        (Constructor::Line | Constructor::HalfLine, Point::Real { t: a }, Point::Real { t: b }) => {
            Ok(Point::Real { t: a + t * (b - a) })
        }
        (
            Constructor::Product { a: ca, b: cb },
            Point::Pair { a: xa, b: xb },
            Point::Pair { a: ya, b: yb },
        ) => Ok(Point::Pair {
            a: Box::new(geodesic_smooth(ca, xa, ya, t)?),
            b: Box::new(geodesic_smooth(cb, xb, yb, t)?),
        }),
        (
            Constructor::Cone { base },
            Point::Cone { r: r1, base: b1 },
            Point::Cone { r: r2, base: b2 },
        ) => {
            // Develop both points into a planar wedge and interpolate the
            // straight segment there.
            let delta = if *r1 == 0.0 || *r2 == 0.0 {
                0.0
            } else {
                dist_smooth(base, b1, b2)?.min(PI)
            };
            let p1 = (*r1, 0.0);
            let p2 = (r2 * delta.cos(), r2 * delta.sin());
            let mx = (1.0 - t) * p1.0 + t * p2.0;
            let my = (1.0 - t) * p1.1 + t * p2.1;
            let rm = mx.hypot(my);
            if rm < 1e-15 {
                return Ok(Point::Cone { r: 0.0, base: Box::new(origin(base)) });
            }
            let beta = my.atan2(mx).clamp(0.0, delta.max(0.0));
            let ref_base = if *r1 == 0.0 { b2 } else { b1 };
            let bm = if delta < 1e-15 {
                (**ref_base).clone()
            } else if beta <= 1e-15 {
                (**b1).clone()
            } else if beta >= delta - 1e-15 {
                (**b2).clone()
            } else {
                geodesic_smooth(base, b1, b2, beta / delta)?
            };
            Ok(Point::Cone { r: rm, base: Box::new(bm) })
        }
        (
            Constructor::Suspension { base },
            Point::Susp { lat: t1, base: b1 },
            Point::Susp { lat: t2, base: b2 },
        ) => {
            // Model the pair inside a spherical lune: latitude stays, the
            // base separation becomes a longitude difference.
            let (s1, c1) = exact_sin_cos(*t1);
            let (s2, c2) = exact_sin_cos(*t2);
            let delta = if s1 == 0.0 || s2 == 0.0 {
                0.0
            } else {
                dist_smooth(base, b1, b2)?.min(PI)
            };
            let u = [s1, 0.0, c1];
            let v = [s2 * delta.cos(), s2 * delta.sin(), c2];
            let dot = clamp_unit(u[0] * v[0] + u[1] * v[1] + u[2] * v[2]);
            if dot <= -1.0 + 1e-12 {
                return Err(Error::AmbiguousGeodesic(
                    "endpoints are antipodal in the suspension".into(),
                ));
            }
            let ang = dot.acos();
            if ang < 1e-15 {
                return Ok(x.clone());
            }
            let (wa, wb) = (((1.0 - t) * ang).sin() / ang.sin(), (t * ang).sin() / ang.sin());
            let m = [
                wa * u[0] + wb * v[0],
                wa * u[1] + wb * v[1],
                wa * u[2] + wb * v[2],
            ];
            let n = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
            let mz = clamp_unit(m[2] / n);
            let lat = mz.acos();
            if lat < 1e-12 || lat > PI - 1e-12 {
                return Ok(Point::Susp {
                    lat: if lat < 1e-12 { 0.0 } else { PI },
                    base: Box::new(origin(base)),
                });
            }
            let lon = m[1].atan2(m[0]).clamp(0.0, delta.max(0.0));
            let ref_base = if s1 == 0.0 { b2 } else { b1 };
            let bm = if delta < 1e-15 {
                (**ref_base).clone()
            } else if lon <= 1e-15 {
                (**b1).clone()
            } else if lon >= delta - 1e-15 {
                (**b2).clone()
            } else {
                geodesic_smooth(base, b1, b2, lon / delta)?
            };
            Ok(Point::Susp { lat, base: Box::new(bm) })
        }
        (
            Constructor::Join { a: ca, b: cb },
            Point::Join { mix: t1, a: a1, b: b1 },
            Point::Join { mix: t2, a: a2, b: b2 },
        ) => {
            let (s1, c1) = exact_sin_cos(*t1);
            let (s2, c2) = exact_sin_cos(*t2);
            // Model in the unit sphere of R^2 x R^2. Coordinates with zero
            // weight at an endpoint inherit the other endpoint's value.
            let (delta_a, a_lo, a_hi) = if c1 > 0.0 && c2 > 0.0 {
                (dist_smooth(ca, a1, a2)?.min(PI), a1, a2)
            } else if c1 > 0.0 {
                (0.0, a1, a1)
            } else {
                (0.0, a2, a2)
            };
            let (delta_b, b_lo, b_hi) = if s1 > 0.0 && s2 > 0.0 {
                (dist_smooth(cb, b1, b2)?.min(PI), b1, b2)
            } else if s1 > 0.0 {
                (0.0, b1, b1)
            } else {
                (0.0, b2, b2)
            };
            let u = [c1, 0.0, s1, 0.0];
            let v = [
                c2 * delta_a.cos(),
                c2 * delta_a.sin(),
                s2 * delta_b.cos(),
                s2 * delta_b.sin(),
            ];
            let dot = clamp_unit(u.iter().zip(&v).map(|(p, q)| p * q).sum());
            if dot <= -1.0 + 1e-12 {
                return Err(Error::AmbiguousGeodesic(
                    "endpoints are antipodal in the join".into(),
                ));
            }
            let ang = dot.acos();
            if ang < 1e-15 {
                return Ok(x.clone());
            }
            let (wa, wb) = (((1.0 - t) * ang).sin() / ang.sin(), (t * ang).sin() / ang.sin());
            let m: Vec<f64> = u.iter().zip(&v).map(|(p, q)| wa * p + wb * q).collect();
            let pa = (m[0] * m[0] + m[1] * m[1]).sqrt();
            let pb = (m[2] * m[2] + m[3] * m[3]).sqrt();
            let mix = pb.atan2(pa).clamp(0.0, FRAC_PI_2);
            let interp = |delta: f64,
                          lo: &Point,
                          hi: &Point,
                          num: f64,
                          den: f64,
                          cons_f: &Constructor|
             -> Result<Point> {
                if delta < 1e-15 {
                    return Ok(lo.clone());
                }
                let prog = num.atan2(den).clamp(0.0, delta);
                if prog <= 1e-15 {
                    Ok(lo.clone())
                } else if prog >= delta - 1e-15 {
                    Ok(hi.clone())
                } else {
                    geodesic_smooth(cons_f, lo, hi, prog / delta)
                }
            };
            let am = if pa < 1e-12 {
                origin(ca)
            } else {
                interp(delta_a, a_lo, a_hi, m[1], m[0], ca)?
            };
            let bm = if pb < 1e-12 {
                origin(cb)
            } else {
                interp(delta_b, b_lo, b_hi, m[3], m[2], cb)?
            };
            Ok(Point::Join { mix, a: Box::new(am), b: Box::new(bm) })
        }
        _ => mismatch(),
    }
}

/// A validated, ready-to-query metric space.
pub struct Space {
    cons: Constructor,
    label: String,
    graph: Option<graph::GraphRuntime>,
    barrel: Option<glued::BarrelRuntime>,
}

impl Space {
    pub fn new(cons: Constructor) -> Result<Self> {
        validate_constructor(&cons, true)?;
        let label = describe(&cons);
        let graph = match &cons {
            Constructor::Graph(g) => Some(graph::GraphRuntime::new(g)?),
            _ => None,
        };
        let barrel = match &cons {
            Constructor::Barrel { height } => Some(glued::BarrelRuntime::new(*height)),
            _ => None,
        };
        Ok(Self { cons, label, graph, barrel })
    }

    pub fn constructor(&self) -> &Constructor {
        &self.cons
    }

    pub(crate) fn graph_runtime(&self) -> Option<&graph::GraphRuntime> {
        self.graph.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn declared_k(&self) -> f64 {
        declared_k(&self.cons)
    }

    pub fn origin(&self) -> Point {
        origin(&self.cons)
    }

    pub fn validate_point(&self, p: &Point) -> Result<()> {
        validate_point_inner(&self.cons, p)
    }

    /// Normal form of a point: redundant coordinates pinned, angles
    /// wrapped, negative zeros cleared. Idempotent.
    pub fn canonical(&self, p: &Point) -> Result<Point> {
        self.validate_point(p)?;
        Ok(canonical_inner(&self.cons, p))
    }

    pub fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        if x == y {
            // Identical representations are the one case the closed
            // forms cannot settle exactly: a unit vector's self inner
            // product can round just below 1, leaving an arccos residue
            // of ~1e-8 where the metric identity demands exactly zero.
            self.validate_point(x)?;
            return Ok(0.0);
        }
        match &self.cons {
            Constructor::Graph(_) => {
                let g = self.graph.as_ref().expect("graph runtime");
                match (x, y) {
                    (Point::Node { id: a }, Point::Node { id: b }) => g.dist(*a, *b),
                    _ => Err(Error::ForeignPoint("graph points are nodes".into())),
                }
            }
            Constructor::Barrel { .. } => {
                self.barrel.as_ref().expect("barrel runtime").dist(x, y)
            }
            Constructor::CappedCylinder { .. } => glued::body_dist(x, y),
            Constructor::FlatDisc { .. } => glued::disc_dist(x, y),
            cons => dist_smooth(cons, x, y),
        }
    }

    /// Cosine of the distance, computed without an arccos/cos round trip
    /// where the constructor admits it (spheres, suspensions, joins).
    pub fn cos_dist(&self, x: &Point, y: &Point) -> Result<f64> {
        match &self.cons {
            Constructor::Graph(_)
            | Constructor::Barrel { .. }
            | Constructor::CappedCylinder { .. }
            | Constructor::FlatDisc { .. } => Ok(self.dist(x, y)?.cos()),
            cons => Ok(cos_or_dist_smooth(cons, x, y)?.into_cos()),
        }
    }

    /// Point at parameter `t` in [0, 1] along a shortest geodesic from `x`
    /// to `y`. Fails where the geodesic is not unique or the constructor
    /// has no geodesic structure exposed (graphs, barrels).
    pub fn geodesic_point(&self, x: &Point, y: &Point, t: f64) -> Result<Point> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidAngle(format!("geodesic parameter {t} outside [0, 1]")));
        }
        match &self.cons {
            Constructor::Graph(_) => {
                let g = self.graph.as_ref().expect("graph runtime");
                match (x, y) {
                    (Point::Node { id: a }, Point::Node { id: b }) => {
                        let id = g.path_point(*a, *b, t)?;
                        Ok(Point::Node { id })
                    }
                    _ => Err(Error::ForeignPoint("graph points are nodes".into())),
                }
            }
            Constructor::Barrel { .. } => Err(Error::WrongConstructor(
                "barrel geodesics are not exposed; only distances".into(),
            )),
            Constructor::CappedCylinder { .. } => glued::body_lerp(x, y, t),
            Constructor::FlatDisc { .. } => glued::disc_lerp(x, y, t),
            cons => geodesic_smooth(cons, x, y, t),
        }
    }
}
