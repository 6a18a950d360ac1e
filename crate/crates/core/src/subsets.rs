//! Subset nets: finite samples of a distinguished subset, optionally
//! paired with an exact distance-to-subset oracle.
//!
//! Oracles are closed forms for the true (unsampled) subset. Checks that
//! need distances below net precision (midpoint containment, tight
//! margins) consult the oracle; everything else works off the sample.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::spaces::{Constructor, Point, Space};

const TWO_PI: f64 = 2.0 * PI;

/// Window half-width matching the ambient samplers.
const WINDOW: f64 = 3.0;

const MAX_SUBSET: usize = 30_000;

/// Closed-form distance from any point of the space to the subset.
#[derive(Debug, Clone)]
pub enum SubsetOracle {
    /// Minimum distance to an explicit finite list.
    FiniteSet(Vec<Point>),
    /// The waist circle: latitude pi/2 locus.
    Equator,
    /// Half of the waist circle, base arcs in [0, perimeter/2].
    HalfEquator,
    /// Pole-to-pole meridians at the given base arcs.
    Longitudes(Vec<f64>),
    /// The curve (u mod 2pi, pitch * u) in circle x line coordinates.
    Helix { pitch: f64 },
    /// Radial rays of a cone at the given base arcs.
    ConeRays(Vec<f64>),
    /// The boundary rim circle of a glued or solid space.
    Rim,
    /// First factor of a join: the mix = 0 circle.
    JoinFactorA,
    /// All mixes over an arc of each join factor: arcs [0, len_a], [0, len_b].
    ProductArcs { len_a: f64, len_b: f64 },
}

/// A sampled subset.
#[derive(Debug, Clone)]
pub struct SubsetNet {
    pub label: String,
    pub points: Vec<Point>,
    /// Sampling gap bound; zero for exact finite subsets.
    pub sample_mesh: f64,
    pub oracle: Option<SubsetOracle>,
}

impl SubsetNet {
    /// Exact distance from `q` to the true subset, when an oracle exists.
    pub fn exact_dist(&self, space: &Space, q: &Point) -> Option<Result<f64>> {
        self.oracle.as_ref().map(|o| o.dist(space, q))
    }

    /// Distance from `q` to the sampled subset.
    pub fn net_dist(&self, space: &Space, q: &Point) -> Result<f64> {
        let mut best = f64::INFINITY;
        for p in &self.points {
            best = best.min(space.dist(q, p)?);
        }
        Ok(best)
    }
}

fn circle_gap(perimeter: f64, a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(perimeter);
    d.min(perimeter - d)
}

/// Distance on a circle from `x` to the closed arc [0, len].
fn gap_to_arc(perimeter: f64, x: f64, len: f64) -> f64 {
    let x = x.rem_euclid(perimeter);
    if x <= len {
        0.0
    } else {
        circle_gap(perimeter, x, 0.0).min(circle_gap(perimeter, x, len))
    }
}

/// Latitude and base arc of a point in a suspension over a circle, or of
/// a sphere point read in polar form.
fn polar_form(space: &Space, q: &Point) -> Result<(f64, f64, f64)> {
    match (space.constructor(), q) {
        (Constructor::Suspension { base }, Point::Susp { lat, base: b }) => {
            let perimeter = match base.as_ref() {
                Constructor::Circle { perimeter } => *perimeter,
                _ => {
                    return Err(Error::WrongConstructor(
                        "polar form needs a circle base".into(),
                    ))
                }
            };
            match b.as_ref() {
                Point::Circle { arc } => Ok((*lat, arc.rem_euclid(perimeter), perimeter)),
                _ => Err(Error::ForeignPoint("suspension point over non-circle".into())),
            }
        }
        (Constructor::Sphere { dim: 2 }, Point::Sphere { coords }) => {
            let lat = coords[2].clamp(-1.0, 1.0).acos();
            let arc = coords[1].atan2(coords[0]).rem_euclid(TWO_PI);
            Ok((lat, arc, TWO_PI))
        }
        _ => Err(Error::WrongConstructor(
            "latitude form needs a suspension over a circle or a 2-sphere".into(),
        )),
    }
}

impl SubsetOracle {
    pub fn dist(&self, space: &Space, q: &Point) -> Result<f64> {
        match self {
            SubsetOracle::FiniteSet(pts) => {
                let mut best = f64::INFINITY;
                for p in pts {
                    best = best.min(space.dist(q, p)?);
                }
                Ok(best)
            }
            SubsetOracle::Equator => {
                let (lat, _, _) = polar_form(space, q)?;
                Ok((lat - FRAC_PI_2).abs())
            }
            SubsetOracle::HalfEquator => {
                let (lat, arc, perimeter) = polar_form(space, q)?;
                let half = perimeter / 2.0;
                if arc <= half {
                    return Ok((lat - FRAC_PI_2).abs());
                }
                // Off the arc's azimuth range: nearest endpoint wins. Base
                // gaps feed the suspension law directly, no rescaling.
                let d0 = circle_gap(perimeter, arc, 0.0);
                let d1 = circle_gap(perimeter, arc, half);
                let delta = d0.min(d1);
                Ok((lat.sin() * delta.cos()).clamp(-1.0, 1.0).acos())
            }
            SubsetOracle::Longitudes(arcs) => {
                let (lat, arc, perimeter) = polar_form(space, q)?;
                let mut best = f64::INFINITY;
                for &alpha in arcs {
                    let delta = circle_gap(perimeter, arc, alpha);
                    let d = if delta.cos() >= 0.0 {
                        let c2 = lat.cos().powi(2) + (lat.sin() * delta.cos()).powi(2);
                        c2.sqrt().clamp(-1.0, 1.0).acos()
                    } else {
                        lat.min(PI - lat)
                    };
                    best = best.min(d);
                }
                Ok(best)
            }
            SubsetOracle::Helix { pitch } => {
                let (phi, z) = match q {
                    Point::Pair { a, b } => match (a.as_ref(), b.as_ref()) {
                        (Point::Circle { arc }, Point::Real { t }) => {
                            (arc.rem_euclid(TWO_PI), *t)
                        }
                        _ => {
                            return Err(Error::ForeignPoint(
                                "helix oracle needs circle x line points".into(),
                            ))
                        }
                    },
                    _ => {
                        return Err(Error::ForeignPoint(
                            "helix oracle needs product points".into(),
                        ))
                    }
                };
                let c = *pitch;
                let m0 = ((z / c - phi) / TWO_PI).round() as i64;
                let mut best = f64::INFINITY;
                for m in (m0 - 2)..=(m0 + 2) {
                    let base = z - c * (phi + TWO_PI * m as f64);
                    let s = (c * base / (1.0 + c * c)).clamp(-PI, PI);
                    let dz = base - c * s;
                    best = best.min(s.hypot(dz));
                }
                Ok(best)
            }
            SubsetOracle::ConeRays(arcs) => {
                let (r, arc, perimeter) = match (space.constructor(), q) {
                    (Constructor::Cone { base }, Point::Cone { r, base: b }) => {
                        let perimeter = match base.as_ref() {
                            Constructor::Circle { perimeter } => *perimeter,
                            _ => {
                                return Err(Error::WrongConstructor(
                                    "ray oracle needs a circle base".into(),
                                ))
                            }
                        };
                        match b.as_ref() {
                            Point::Circle { arc } => (*r, arc.rem_euclid(perimeter), perimeter),
                            _ => return Err(Error::ForeignPoint("cone point over non-circle".into())),
                        }
                    }
                    _ => {
                        return Err(Error::WrongConstructor(
                            "ray oracle needs a cone over a circle".into(),
                        ))
                    }
                };
                let mut best = f64::INFINITY;
                for &alpha in arcs {
                    let delta = circle_gap(perimeter, arc, alpha);
                    let d = if delta >= FRAC_PI_2 { r } else { r * delta.sin() };
                    best = best.min(d);
                }
                Ok(best)
            }
            SubsetOracle::Rim => match (space.constructor(), q) {
                (Constructor::Barrel { .. }, Point::Wall { up, .. }) => Ok(*up),
                (Constructor::Barrel { .. }, Point::Cap { r, .. }) => Ok(1.0 - r),
                (Constructor::CappedCylinder { height, .. }, Point::Body { x, y, z }) => {
                    let rho = x.hypot(*y);
                    Ok((rho - 1.0).hypot(z - height))
                }
                (Constructor::FlatDisc { radius }, Point::Cap { r, .. }) => Ok((radius - r).abs()),
                _ => Err(Error::WrongConstructor(
                    "rim oracle needs a barrel, capped cylinder or disc".into(),
                )),
            },
            SubsetOracle::JoinFactorA => match q {
                Point::Join { mix, .. } => Ok(*mix),
                _ => Err(Error::ForeignPoint("factor oracle needs join points".into())),
            },
            SubsetOracle::ProductArcs { len_a, len_b } => {
                let (pa, pb) = match space.constructor() {
                    Constructor::Join { a, b } => match (a.as_ref(), b.as_ref()) {
                        (
                            Constructor::Circle { perimeter: pa },
                            Constructor::Circle { perimeter: pb },
                        ) => (*pa, *pb),
                        _ => {
                            return Err(Error::WrongConstructor(
                                "arc-product oracle needs a join of circles".into(),
                            ))
                        }
                    },
                    _ => {
                        return Err(Error::WrongConstructor(
                            "arc-product oracle needs a join".into(),
                        ))
                    }
                };
                let (mix, qa, qb) = match q {
                    Point::Join { mix, a, b } => match (a.as_ref(), b.as_ref()) {
                        (Point::Circle { arc: qa }, Point::Circle { arc: qb }) => {
                            (*mix, *qa, *qb)
                        }
                        _ => return Err(Error::ForeignPoint("join point over non-circles".into())),
                    },
                    _ => return Err(Error::ForeignPoint("arc-product oracle needs join points".into())),
                };
                let da = gap_to_arc(pa, qa, *len_a);
                let db = gap_to_arc(pb, qb, *len_b);
                let ca = mix.cos() * da.cos();
                let cb = mix.sin() * db.cos();
                let mut best = ca.max(cb);
                if ca >= 0.0 && cb >= 0.0 {
                    best = best.max(ca.hypot(cb));
                }
                Ok(best.clamp(-1.0, 1.0).acos())
            }
        }
    }
}

fn check_budget(n: usize) -> Result<()> {
    if n > MAX_SUBSET {
        return Err(Error::BudgetExceeded(format!(
            "subset would have {n} points, cap is {MAX_SUBSET}"
        )));
    }
    Ok(())
}

fn circle_base_perimeter(cons: &Constructor) -> Option<f64> {
    match cons {
        Constructor::Circle { perimeter } => Some(*perimeter),
        _ => None,
    }
}

fn susp_perimeter(space: &Space) -> Result<f64> {
    match space.constructor() {
        Constructor::Suspension { base } => circle_base_perimeter(base).ok_or_else(|| {
            Error::WrongConstructor("subset needs a suspension over a circle".into())
        }),
        _ => Err(Error::WrongConstructor(
            "subset needs a suspension over a circle".into(),
        )),
    }
}

fn pole_points(space: &Space) -> Result<Vec<Point>> {
    match space.constructor() {
        Constructor::Sphere { dim: 2 } => Ok(vec![
            Point::Sphere { coords: vec![0.0, 0.0, 1.0] },
            Point::Sphere { coords: vec![0.0, 0.0, -1.0] },
        ]),
        Constructor::Suspension { .. } => {
            susp_perimeter(space)?;
            Ok(vec![
                Point::Susp { lat: 0.0, base: Box::new(Point::Circle { arc: 0.0 }) },
                Point::Susp { lat: PI, base: Box::new(Point::Circle { arc: 0.0 }) },
            ])
        }
        _ => Err(Error::WrongConstructor(
            "poles exist on spheres and suspensions".into(),
        )),
    }
}

fn equator_points(space: &Space, res: f64) -> Result<(Vec<Point>, f64)> {
    match space.constructor() {
        Constructor::Sphere { dim: 2 } => {
            let m = ((TWO_PI / res).ceil() as usize).max(8);
            let pts = (0..m)
                .map(|j| {
                    let phi = j as f64 * TWO_PI / m as f64;
                    Point::Sphere { coords: vec![phi.cos(), phi.sin(), 0.0] }
                })
                .collect();
            Ok((pts, TWO_PI / m as f64))
        }
        Constructor::Suspension { .. } => {
            let perimeter = susp_perimeter(space)?;
            let m = ((perimeter / res).ceil() as usize).max(8);
            let pts = (0..m)
                .map(|j| Point::Susp {
                    lat: FRAC_PI_2,
                    base: Box::new(Point::Circle { arc: j as f64 * perimeter / m as f64 }),
                })
                .collect();
            Ok((pts, perimeter / m as f64))
        }
        _ => Err(Error::WrongConstructor(
            "the waist circle exists on spheres and suspensions".into(),
        )),
    }
}

fn parse_args(spec: &str) -> Result<(String, Vec<f64>)> {
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n.trim().to_string(), r.trim()),
        None => (spec.trim().to_string(), ""),
    };
    let mut args = Vec::new();
    if !rest.is_empty() {
        for piece in rest.split(',') {
            let v: f64 = piece.trim().parse().map_err(|_| {
                Error::InvalidSpec(format!("bad numeric argument {piece:?} in subset {spec:?}"))
            })?;
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!("non-finite argument in {spec:?}")));
            }
            args.push(v);
        }
    }
    Ok((name, args))
}

/// Build a named subset net over a space.
///
/// Names: `poles`, `pair`, `isolated`, `equator`, `half_equator`,
/// `longitudes:a1,a2,..`, `helix:pitch`, `cone_rays:a1,..`, `rim`,
/// `factor`, `product_arcs:len_a,len_b`, `fixed_set:angle`.
pub fn build_subset(space: &Space, spec: &str, res: f64) -> Result<SubsetNet> {
    if !(1e-4..=2.0).contains(&res) {
        return Err(Error::InvalidSpec(format!("subset resolution {res} outside [1e-4, 2]")));
    }
    let (name, args) = parse_args(spec)?;
    let named = |label: &str, points: Vec<Point>, mesh: f64, oracle: Option<SubsetOracle>| {
        check_budget(points.len())?;
        for p in &points {
            space.validate_point(p)?;
        }
        Ok(SubsetNet {
            label: label.to_string(),
            points,
            sample_mesh: mesh,
            oracle,
        })
    };
    match name.as_str() {
        "poles" | "pair" => {
            let pts = pole_points(space)?;
            named("poles", pts.clone(), 0.0, Some(SubsetOracle::FiniteSet(pts)))
        }
        "isolated" => {
            let mut pts = pole_points(space)?;
            pts.truncate(1);
            let waist = match space.constructor() {
                Constructor::Sphere { dim: 2 } => Point::Sphere { coords: vec![1.0, 0.0, 0.0] },
                _ => Point::Susp {
                    lat: FRAC_PI_2,
                    base: Box::new(Point::Circle { arc: 0.0 }),
                },
            };
            pts.push(waist);
            named("isolated pair", pts.clone(), 0.0, Some(SubsetOracle::FiniteSet(pts)))
        }
        "equator" => {
            let (pts, mesh) = equator_points(space, res)?;
            named("equator", pts, mesh, Some(SubsetOracle::Equator))
        }
        "half_equator" => {
            let perimeter = match space.constructor() {
                Constructor::Sphere { dim: 2 } => TWO_PI,
                _ => susp_perimeter(space)?,
            };
            let half = perimeter / 2.0;
            let m = ((half / res).ceil() as usize).max(4);
            let step = half / m as f64;
            let pts: Vec<Point> = (0..=m)
                .map(|j| {
                    let arc = (j as f64 * step).min(half);
                    match space.constructor() {
                        Constructor::Sphere { dim: 2 } => {
                            let (s, c) = arc.sin_cos();
                            Point::Sphere { coords: vec![c, s, 0.0] }
                        }
                        _ => Point::Susp {
                            lat: FRAC_PI_2,
                            base: Box::new(Point::Circle { arc }),
                        },
                    }
                })
                .collect();
            named("half equator", pts, step, Some(SubsetOracle::HalfEquator))
        }
        "longitudes" => {
            if args.is_empty() {
                return Err(Error::InvalidSpec("longitudes needs at least one arc".into()));
            }
            let perimeter = susp_perimeter(space)?;
            for &a in &args {
                if !(0.0..perimeter).contains(&a) {
                    return Err(Error::InvalidSpec(format!(
                        "longitude arc {a} outside [0, {perimeter})"
                    )));
                }
            }
            let n = ((PI / res).ceil() as usize).max(4);
            let step = PI / n as f64;
            let mut pts = vec![
                Point::Susp { lat: 0.0, base: Box::new(Point::Circle { arc: 0.0 }) },
                Point::Susp { lat: PI, base: Box::new(Point::Circle { arc: 0.0 }) },
            ];
            for &alpha in &args {
                for i in 1..n {
                    let lat = if 2 * i == n { FRAC_PI_2 } else { i as f64 * step };
                    pts.push(Point::Susp { lat, base: Box::new(Point::Circle { arc: alpha }) });
                }
            }
            named(
                &format!("{} meridians", args.len()),
                pts,
                step,
                Some(SubsetOracle::Longitudes(args)),
            )
        }
        "helix" => {
            if args.len() != 1 {
                return Err(Error::InvalidSpec("helix needs exactly one pitch argument".into()));
            }
            let pitch = args[0];
            if !(0.05..=10.0).contains(&pitch) {
                return Err(Error::InvalidSpec(format!("helix pitch {pitch} outside [0.05, 10]")));
            }
            match space.constructor() {
                Constructor::Product { a, b } => {
                    let ok = matches!(a.as_ref(), Constructor::Circle { perimeter }
                            if (*perimeter - TWO_PI).abs() < 1e-12)
                        && matches!(b.as_ref(), Constructor::Line);
                    if !ok {
                        return Err(Error::WrongConstructor(
                            "helix lives on circle(2pi) x line".into(),
                        ));
                    }
                }
                _ => {
                    return Err(Error::WrongConstructor(
                        "helix lives on circle(2pi) x line".into(),
                    ))
                }
            }
            // Reach far enough that every windowed ambient point has its
            // true nearest curve point inside the sample.
            let reach = (WINDOW + 0.5) / pitch + TWO_PI;
            let du = res / (1.0 + pitch * pitch).sqrt();
            let n = (2.0 * reach / du).ceil() as usize;
            check_budget(n + 1)?;
            let pts: Vec<Point> = (0..=n)
                .map(|i| {
                    let u = -reach + i as f64 * 2.0 * reach / n as f64;
                    Point::Pair {
                        a: Box::new(Point::Circle { arc: u.rem_euclid(TWO_PI) }),
                        b: Box::new(Point::Real { t: pitch * u }),
                    }
                })
                .collect();
            named(
                &format!("helix pitch {pitch}"),
                pts,
                res,
                Some(SubsetOracle::Helix { pitch }),
            )
        }
        "cone_rays" => {
            if args.is_empty() {
                return Err(Error::InvalidSpec("cone_rays needs at least one arc".into()));
            }
            let perimeter = match space.constructor() {
                Constructor::Cone { base } => circle_base_perimeter(base).ok_or_else(|| {
                    Error::WrongConstructor("rays need a cone over a circle".into())
                })?,
                _ => {
                    return Err(Error::WrongConstructor(
                        "rays need a cone over a circle".into(),
                    ))
                }
            };
            for &a in &args {
                if !(0.0..perimeter).contains(&a) {
                    return Err(Error::InvalidSpec(format!(
                        "ray arc {a} outside [0, {perimeter})"
                    )));
                }
            }
            // Overshoot the ambient window so every windowed point's true
            // foot lies inside the sampled stretch of each ray.
            let reach = WINDOW + 1.0;
            let steps = ((reach / res).ceil() as usize).max(1);
            let mut pts = vec![Point::Cone { r: 0.0, base: Box::new(Point::Circle { arc: 0.0 }) }];
            for &alpha in &args {
                for i in 1..=steps {
                    pts.push(Point::Cone {
                        r: i as f64 * reach / steps as f64,
                        base: Box::new(Point::Circle { arc: alpha }),
                    });
                }
            }
            named(
                &format!("{} rays", args.len()),
                pts,
                reach / steps as f64,
                Some(SubsetOracle::ConeRays(args)),
            )
        }
        "rim" => {
            let (pts, mesh) = match space.constructor() {
                Constructor::Barrel { .. } => {
                    let m = ((TWO_PI / res).ceil() as usize).max(8);
                    let pts = (0..m)
                        .map(|j| Point::Wall { arc: j as f64 * TWO_PI / m as f64, up: 0.0 })
                        .collect();
                    (pts, TWO_PI / m as f64)
                }
                Constructor::CappedCylinder { height, .. } => {
                    let m = ((TWO_PI / res).ceil() as usize).max(8);
                    let h = *height;
                    let pts = (0..m)
                        .map(|j| {
                            let phi = j as f64 * TWO_PI / m as f64;
                            Point::Body { x: phi.cos(), y: phi.sin(), z: h }
                        })
                        .collect();
                    (pts, TWO_PI / m as f64)
                }
                Constructor::FlatDisc { radius } => {
                    let ring = TWO_PI * radius;
                    let m = ((ring / res).ceil() as usize).max(8);
                    let r = *radius;
                    let pts = (0..m)
                        .map(|j| Point::Cap { r, arc: j as f64 * TWO_PI / m as f64 })
                        .collect();
                    (pts, ring / m as f64)
                }
                _ => {
                    return Err(Error::WrongConstructor(
                        "rims exist on barrels, capped cylinders and discs".into(),
                    ))
                }
            };
            named("rim", pts, mesh, Some(SubsetOracle::Rim))
        }
        "factor" => {
            let pa = match space.constructor() {
                Constructor::Join { a, .. } => circle_base_perimeter(a).ok_or_else(|| {
                    Error::WrongConstructor("factor subset needs a join of circles".into())
                })?,
                _ => {
                    return Err(Error::WrongConstructor(
                        "factor subset needs a join of circles".into(),
                    ))
                }
            };
            let m = ((pa / res).ceil() as usize).max(8);
            let pts: Vec<Point> = (0..m)
                .map(|j| Point::Join {
                    mix: 0.0,
                    a: Box::new(Point::Circle { arc: j as f64 * pa / m as f64 }),
                    b: Box::new(Point::Circle { arc: 0.0 }),
                })
                .collect();
            named("first factor", pts, pa / m as f64, Some(SubsetOracle::JoinFactorA))
        }
        "product_arcs" => {
            if args.len() != 2 {
                return Err(Error::InvalidSpec(
                    "product_arcs needs two lengths: len_a,len_b".into(),
                ));
            }
            let (len_a, len_b) = (args[0], args[1]);
            let (pa, pb) = match space.constructor() {
                Constructor::Join { a, b } => match (
                    circle_base_perimeter(a),
                    circle_base_perimeter(b),
                ) {
                    (Some(pa), Some(pb)) => (pa, pb),
                    _ => {
                        return Err(Error::WrongConstructor(
                            "arc products need a join of circles".into(),
                        ))
                    }
                },
                _ => {
                    return Err(Error::WrongConstructor(
                        "arc products need a join of circles".into(),
                    ))
                }
            };
            if !(0.0 < len_a && len_a < pa / 2.0) || !(0.0 < len_b && len_b < pb / 2.0) {
                return Err(Error::InvalidSpec(
                    "arc lengths must sit in (0, perimeter/2)".into(),
                ));
            }
            let nt = ((FRAC_PI_2 / res).ceil() as usize).max(2);
            let dt = FRAC_PI_2 / nt as f64;
            let na = ((len_a / res).ceil() as usize).max(1);
            let nb = ((len_b / res).ceil() as usize).max(1);
            let mut pts = Vec::new();
            for it in 0..=nt {
                let mix = if it == 0 {
                    0.0
                } else if it == nt {
                    FRAC_PI_2
                } else {
                    it as f64 * dt
                };
                let arange = if it == nt { 0..=0 } else { 0..=na };
                for ia in arange {
                    let brange = if it == 0 { 0..=0 } else { 0..=nb };
                    for ib in brange {
                        pts.push(Point::Join {
                            mix,
                            a: Box::new(Point::Circle { arc: ia as f64 * len_a / na as f64 }),
                            b: Box::new(Point::Circle { arc: ib as f64 * len_b / nb as f64 }),
                        });
                    }
                }
            }
            let mesh = dt.hypot((len_a / na as f64).hypot(len_b / nb as f64));
            named(
                "arc product",
                pts,
                mesh,
                Some(SubsetOracle::ProductArcs { len_a, len_b }),
            )
        }
        "fixed_set" => {
            if args.len() != 1 {
                return Err(Error::InvalidSpec("fixed_set needs one rotation angle".into()));
            }
            let angle = args[0];
            let perimeter = susp_perimeter(space)?;
            let net = crate::spaces::sampling::ambient_net(space, res)?;
            let rotate = |p: &Point| -> Point {
                match p {
                    Point::Susp { lat, base } => match base.as_ref() {
                        Point::Circle { arc } => Point::Susp {
                            lat: *lat,
                            base: Box::new(Point::Circle {
                                arc: (arc + angle).rem_euclid(perimeter),
                            }),
                        },
                        other => Point::Susp { lat: *lat, base: Box::new(other.clone()) },
                    },
                    other => other.clone(),
                }
            };
            let mut pts = Vec::new();
            for p in &net.points {
                if space.dist(p, &rotate(p))? <= 1e-9 {
                    pts.push(p.clone());
                }
            }
            if pts.is_empty() {
                return Err(Error::InvalidSpec(
                    "rotation fixes no sampled point".into(),
                ));
            }
            let mesh = if pts.len() == net.points.len() { net.mesh } else { 0.0 };
            let oracle = SubsetOracle::FiniteSet(pts.clone());
            named("rotation-fixed set", pts, mesh, Some(oracle))
        }
        other => Err(Error::UnknownScenario(format!("no subset named {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nets;

    fn susp(perimeter: f64) -> Space {
        Space::new(Constructor::Suspension {
            base: Box::new(Constructor::Circle { perimeter }),
        })
        .unwrap()
    }

    #[test]
    fn oracle_agrees_with_fine_net_distance() {
        // Each oracle is cross-checked against brute-force distance to a
        // much finer sample of the same subset.
        let cases: Vec<(Space, &str, f64)> = vec![
            (susp(TWO_PI), "equator", 0.02),
            (susp(TWO_PI), "half_equator", 0.02),
            (susp(PI), "longitudes:0.0,1.5707963267948966", 0.02),
            (
                Space::new(Constructor::Product {
                    a: Box::new(Constructor::Circle { perimeter: TWO_PI }),
                    b: Box::new(Constructor::Line),
                })
                .unwrap(),
                "helix:0.5",
                0.02,
            ),
            (
                Space::new(Constructor::Cone {
                    base: Box::new(Constructor::Circle { perimeter: 1.5 * PI }),
                })
                .unwrap(),
                "cone_rays:0.0,2.3561944901923449",
                0.02,
            ),
            (
                Space::new(Constructor::Join {
                    a: Box::new(Constructor::Circle { perimeter: 1.5 * PI }),
                    b: Box::new(Constructor::Circle { perimeter: 1.5 * PI }),
                })
                .unwrap(),
                "factor",
                0.02,
            ),
            (
                Space::new(Constructor::Join {
                    a: Box::new(Constructor::Circle { perimeter: 1.5 * PI }),
                    b: Box::new(Constructor::Circle { perimeter: 1.5 * PI }),
                })
                .unwrap(),
                "product_arcs:1.0,1.0",
                0.05,
            ),
            (Space::new(Constructor::FlatDisc { radius: 1.0 }).unwrap(), "rim", 0.02),
        ];
        for (space, spec, fine_res) in &cases {
            let coarse = build_subset(space, spec, 0.3).unwrap();
            let fine = build_subset(space, spec, *fine_res).unwrap();
            let probes = crate::spaces::sampling::ambient_net(space, 0.45).unwrap();
            for q in probes.points.iter().step_by(3) {
                let oracle = coarse.exact_dist(space, q).unwrap().unwrap();
                let brute = fine.net_dist(space, q).unwrap();
                // The fine net sits within its own mesh of the true subset.
                assert!(
                    (oracle - brute).abs() <= fine.sample_mesh + 1e-9,
                    "{spec} at {}: oracle {oracle} vs net {brute}",
                    nets::point_brief(q)
                );
                assert!(oracle <= brute + 1e-9, "{spec}: oracle above net distance");
            }
        }
    }

    #[test]
    fn pole_subsets_are_exact_and_meshless() {
        let s = susp(TWO_PI);
        let f = build_subset(&s, "poles", 0.1).unwrap();
        assert_eq!(f.points.len(), 2);
        assert_eq!(f.sample_mesh, 0.0);
        let q = Point::Susp { lat: 0.7, base: Box::new(Point::Circle { arc: 1.0 }) };
        assert!((f.exact_dist(&s, &q).unwrap().unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn fixed_set_of_rotation_is_the_pole_pair() {
        let s = susp(PI);
        let f = build_subset(&s, "fixed_set:1.0", 0.2).unwrap();
        assert_eq!(f.points.len(), 2);
        assert_eq!(f.sample_mesh, 0.0);
        for p in &f.points {
            match p {
                Point::Susp { lat, .. } => assert!(*lat == 0.0 || *lat == PI),
                _ => panic!("unexpected fixed point"),
            }
        }
    }

    #[test]
    fn equator_oracle_vanishes_on_the_waist_exactly() {
        let s = susp(1.5 * PI);
        let f = build_subset(&s, "equator", 0.1).unwrap();
        let on = Point::Susp { lat: FRAC_PI_2, base: Box::new(Point::Circle { arc: 2.0 }) };
        assert_eq!(f.exact_dist(&s, &on).unwrap().unwrap(), 0.0);
        let pole = Point::Susp { lat: 0.0, base: Box::new(Point::Circle { arc: 0.0 }) };
        assert_eq!(f.exact_dist(&s, &pole).unwrap().unwrap(), FRAC_PI_2);
    }

    #[test]
    fn unknown_subsets_and_wrong_spaces_error() {
        let s = susp(TWO_PI);
        assert!(matches!(
            build_subset(&s, "nonsense", 0.1),
            Err(Error::UnknownScenario(_))
        ));
        assert!(build_subset(&s, "rim", 0.1).is_err());
        assert!(build_subset(&s, "helix:0.5", 0.1).is_err());
        assert!(build_subset(&s, "longitudes:9.9", 0.1).is_err());
    }

    #[test]
    fn rim_subset_points_lie_on_the_rim() {
        let b = Space::new(Constructor::Barrel { height: 6.0 }).unwrap();
        let f = build_subset(&b, "rim", 0.01).unwrap();
        assert!(f.points.len() > 600);
        for p in &f.points {
            assert_eq!(f.oracle.as_ref().unwrap().dist(&b, p).unwrap(), 0.0);
        }
    }
}
