//! Deterministic point nets over constructed spaces.
//!
//! Every sampler is a fixed grid: no randomness, stable ordering, and a
//! `mesh` bound on the largest nearest-neighbor gap derived from the grid
//! geometry itself (the bound errs on the large side, which downstream
//! noise models treat conservatively).

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::spaces::{Constructor, Point, Space};

const TWO_PI: f64 = 2.0 * PI;

/// Half-width of the window used for unbounded directions.
const WINDOW: f64 = 3.0;

/// Hard cap on generated net size.
const MAX_NET: usize = 30_000;

#[derive(Debug, Clone)]
pub struct RawNet {
    pub points: Vec<Point>,
    pub mesh: f64,
}

fn check_res(res: f64) -> Result<()> {
    if !(1e-4..=2.0).contains(&res) {
        return Err(Error::InvalidSpec(format!("resolution {res} outside [1e-4, 2]")));
    }
    Ok(())
}

fn budget(n: usize) -> Result<()> {
    if n > MAX_NET {
        return Err(Error::BudgetExceeded(format!("net would have {n} points, cap is {MAX_NET}")));
    }
    Ok(())
}

/// Evenly spaced arc positions around a circle of the given perimeter.
fn circle_arcs(perimeter: f64, res: f64) -> (Vec<f64>, f64) {
    let n = ((perimeter / res).ceil() as usize).max(3);
    let spacing = perimeter / n as f64;
    ((0..n).map(|i| i as f64 * spacing).collect(), spacing)
}

/// Latitude rows for spheres and suspensions: odd count, exact 0, pi/2
/// and pi marks.
fn lat_rows(res: f64) -> (Vec<f64>, f64) {
    let mut n = ((PI / res).round() as usize).max(2) + 1;
    if n % 2 == 0 {
        n += 1;
    }
    let step = PI / (n - 1) as f64;
    let rows = (0..n)
        .map(|i| {
            if i == 0 {
                0.0
            } else if i == n - 1 {
                PI
            } else if i == (n - 1) / 2 {
                FRAC_PI_2
            } else {
                i as f64 * step
            }
        })
        .collect();
    (rows, step)
}

fn sphere2_net(res: f64) -> RawNet {
    let (rows, step) = lat_rows(res);
    let mut points = Vec::new();
    let mut worst_row = 0.0f64;
    for (i, &lat) in rows.iter().enumerate() {
        if i == 0 {
            points.push(Point::Sphere { coords: vec![0.0, 0.0, 1.0] });
            continue;
        }
        if i == rows.len() - 1 {
            points.push(Point::Sphere { coords: vec![0.0, 0.0, -1.0] });
            continue;
        }
        let (slat, clat) = if lat == FRAC_PI_2 { (1.0, 0.0) } else { lat.sin_cos() };
        let ring = TWO_PI * slat;
        let m = ((ring / res).round() as usize).max(4);
        worst_row = worst_row.max(ring / m as f64);
        for j in 0..m {
            let phi = j as f64 * TWO_PI / m as f64;
            let (sp, cp) = phi.sin_cos();
            points.push(Point::Sphere {
                coords: vec![slat * cp, slat * sp, clat],
            });
        }
    }
    RawNet { points, mesh: step.max(worst_row) }
}

fn circle_net(perimeter: f64, res: f64) -> RawNet {
    let (arcs, spacing) = circle_arcs(perimeter, res);
    RawNet {
        points: arcs.into_iter().map(|arc| Point::Circle { arc }).collect(),
        mesh: spacing,
    }
}

fn line_net(res: f64, half: bool) -> RawNet {
    let lo = if half { 0.0 } else { -WINDOW };
    let n = ((WINDOW - lo) / res).round() as usize;
    let points = (0..=n)
        .map(|i| Point::Real { t: lo + i as f64 * res })
        .collect();
    RawNet { points, mesh: res }
}

fn product_net(a: RawNet, b: RawNet) -> Result<RawNet> {
    budget(a.points.len() * b.points.len())?;
    let mut points = Vec::with_capacity(a.points.len() * b.points.len());
    for pa in &a.points {
        for pb in &b.points {
            points.push(Point::Pair {
                a: Box::new(pa.clone()),
                b: Box::new(pb.clone()),
            });
        }
    }
    Ok(RawNet { points, mesh: a.mesh.hypot(b.mesh) })
}

fn cone_over_circle_net(perimeter: f64, res: f64) -> RawNet {
    let rows = ((WINDOW / res).round() as usize).max(1);
    let mut points = vec![Point::Cone {
        r: 0.0,
        base: Box::new(Point::Circle { arc: 0.0 }),
    }];
    let mut worst_ring = 0.0f64;
    for i in 1..=rows {
        let r = i as f64 * res;
        let ring = r * perimeter;
        let m = ((ring / res).ceil() as usize).max(4);
        worst_ring = worst_ring.max(ring / m as f64);
        for j in 0..m {
            points.push(Point::Cone {
                r,
                base: Box::new(Point::Circle { arc: j as f64 * perimeter / m as f64 }),
            });
        }
    }
    RawNet { points, mesh: res.max(worst_ring) }
}

fn susp_over_circle_net(perimeter: f64, res: f64) -> RawNet {
    let (rows, step) = lat_rows(res);
    let mut points = Vec::new();
    let mut worst_row = 0.0f64;
    for (i, &lat) in rows.iter().enumerate() {
        if i == 0 || i == rows.len() - 1 {
            points.push(Point::Susp {
                lat,
                base: Box::new(Point::Circle { arc: 0.0 }),
            });
            continue;
        }
        let slat = if lat == FRAC_PI_2 { 1.0 } else { lat.sin() };
        let ring = slat * perimeter;
        let m = ((ring / res).round() as usize).max(4);
        worst_row = worst_row.max(ring / m as f64);
        for j in 0..m {
            points.push(Point::Susp {
                lat,
                base: Box::new(Point::Circle { arc: j as f64 * perimeter / m as f64 }),
            });
        }
    }
    RawNet { points, mesh: step.max(worst_row) }
}

fn join_circles_net(pa: f64, pb: f64, res: f64) -> Result<RawNet> {
    let nm = ((FRAC_PI_2 / res).round() as usize).max(2);
    let step = FRAC_PI_2 / nm as f64;
    let mut points = Vec::new();
    let mut worst = step;
    for jm in 0..=nm {
        let mix = if jm == 0 {
            0.0
        } else if jm == nm {
            FRAC_PI_2
        } else {
            jm as f64 * step
        };
        let (smix, cmix) = if mix == 0.0 {
            (0.0, 1.0)
        } else if mix == FRAC_PI_2 {
            (1.0, 0.0)
        } else {
            mix.sin_cos()
        };
        let ma = ((cmix * pa / res).round() as usize).max(if cmix > 0.0 { 4 } else { 1 });
        let mb = ((smix * pb / res).round() as usize).max(if smix > 0.0 { 4 } else { 1 });
        let sa = if cmix > 0.0 { cmix * pa / ma as f64 } else { 0.0 };
        let sb = if smix > 0.0 { smix * pb / mb as f64 } else { 0.0 };
        worst = worst.max(sa.hypot(sb));
        for ja in 0..ma {
            for jb in 0..mb {
                points.push(Point::Join {
                    mix,
                    a: Box::new(Point::Circle {
                        arc: if cmix > 0.0 { ja as f64 * pa / ma as f64 } else { 0.0 },
                    }),
                    b: Box::new(Point::Circle {
                        arc: if smix > 0.0 { jb as f64 * pb / mb as f64 } else { 0.0 },
                    }),
                });
            }
        }
        budget(points.len())?;
    }
    Ok(RawNet { points, mesh: worst })
}

/// Barrel ambient net: wall rows graded toward the floor rim plus floor
/// rings graded toward the rim. Covers a neighborhood of the rim rather
/// than the full wall height.
fn barrel_net(height: f64, res: f64) -> Result<RawNet> {
    let theta = circle_arcs(TWO_PI, res).0;
    let mut ups = Vec::new();
    for i in 1..=9 {
        ups.push(i as f64 * res * 0.1);
    }
    let coarse_rows = ((height.min(1.0) / res).floor() as usize).max(1);
    for i in 1..=coarse_rows {
        ups.push(i as f64 * res);
    }
    let mut points = Vec::new();
    for &up in &ups {
        for &arc in &theta {
            points.push(Point::Wall { arc, up });
        }
    }
    let mut rs = Vec::new();
    for i in 1..=9 {
        rs.push(1.0 - i as f64 * res * 0.1);
    }
    let mut r = 1.0 - res;
    while r > 0.1 {
        rs.push(r);
        r -= res;
    }
    rs.push(0.0);
    let mut worst_ring = 0.0f64;
    for &r in &rs {
        if r == 0.0 {
            points.push(Point::Cap { r: 0.0, arc: 0.0 });
            continue;
        }
        let ring = TWO_PI * r;
        let m = ((ring / res).ceil() as usize).max(4);
        worst_ring = worst_ring.max(ring / m as f64);
        for j in 0..m {
            points.push(Point::Cap { r, arc: j as f64 * TWO_PI / m as f64 });
        }
    }
    budget(points.len())?;
    // Nearest-neighbor gaps: within-row spacing, the graded row steps, and
    // the jump from the last coarse structures.
    Ok(RawNet { points, mesh: res.max(worst_ring) })
}

fn capped_cylinder_net(height: f64, cone_depth: f64, res: f64) -> Result<RawNet> {
    let top = height + cone_depth;
    let levels = ((top / res).floor() as usize).max(1);
    let mut points = Vec::new();
    let mut worst_ring = 0.0f64;
    for iz in 0..=levels {
        let z = (iz as f64 * res).min(top);
        let rmax = if cone_depth == 0.0 {
            if z <= height { 1.0 } else { 0.0 }
        } else {
            ((top - z) / cone_depth).min(1.0)
        };
        if rmax < 0.0 {
            continue;
        }
        points.push(Point::Body { x: 0.0, y: 0.0, z });
        let rings = (rmax / res).floor() as usize;
        for ir in 1..=rings {
            let r = ir as f64 * res;
            let ring = TWO_PI * r;
            let m = ((ring / res).ceil() as usize).max(4);
            worst_ring = worst_ring.max(ring / m as f64);
            for j in 0..m {
                let phi = j as f64 * TWO_PI / m as f64;
                points.push(Point::Body { x: r * phi.cos(), y: r * phi.sin(), z });
            }
        }
        // Keep the boundary circle of each level in the net so the wall
        // and cone surfaces are represented.
        if rmax > 0.0 && (rmax - rings as f64 * res) > 1e-9 {
            let ring = TWO_PI * rmax;
            let m = ((ring / res).ceil() as usize).max(4);
            worst_ring = worst_ring.max(ring / m as f64);
            for j in 0..m {
                let phi = j as f64 * TWO_PI / m as f64;
                points.push(Point::Body { x: rmax * phi.cos(), y: rmax * phi.sin(), z });
            }
        }
    }
    budget(points.len())?;
    Ok(RawNet { points, mesh: (res * 1.2).max(worst_ring) })
}

fn flat_disc_net(radius: f64, res: f64) -> Result<RawNet> {
    let rings = (radius / res).floor() as usize;
    let mut points = vec![Point::Cap { r: 0.0, arc: 0.0 }];
    let mut worst_ring = 0.0f64;
    let mut radii: Vec<f64> = (1..=rings).map(|i| i as f64 * res).collect();
    if radius - rings as f64 * res > 1e-9 {
        radii.push(radius);
    }
    for &r in &radii {
        let ring = TWO_PI * r;
        let m = ((ring / res).ceil() as usize).max(4);
        worst_ring = worst_ring.max(ring / m as f64);
        for j in 0..m {
            points.push(Point::Cap { r, arc: j as f64 * TWO_PI / m as f64 });
        }
    }
    budget(points.len())?;
    Ok(RawNet { points, mesh: res.max(worst_ring) })
}

/// Net of points spread over a space at roughly the given resolution.
/// Unbounded directions are windowed around the origin.
pub fn ambient_net(space: &Space, res: f64) -> Result<RawNet> {
    check_res(res)?;
    let net = ambient_net_inner(space, space.constructor(), res)?;
    budget(net.points.len())?;
    Ok(net)
}

fn ambient_net_inner(space: &Space, cons: &Constructor, res: f64) -> Result<RawNet> {
    match cons {
        Constructor::Sphere { dim } => {
            if *dim != 2 {
                return Err(Error::WrongConstructor(
                    "net sampling supports spheres of dimension 2".into(),
                ));
            }
            Ok(sphere2_net(res))
        }
        Constructor::Circle { perimeter } => Ok(circle_net(*perimeter, res)),
        Constructor::Line => Ok(line_net(res, false)),
        Constructor::HalfLine => Ok(line_net(res, true)),
        Constructor::Product { a, b } => {
            let na = ambient_net_inner(space, a, res)?;
            let nb = ambient_net_inner(space, b, res)?;
            product_net(na, nb)
        }
        Constructor::Cone { base } => match base.as_ref() {
            Constructor::Circle { perimeter } => Ok(cone_over_circle_net(*perimeter, res)),
            _ => Err(Error::WrongConstructor(
                "net sampling supports cones over circles".into(),
            )),
        },
        Constructor::Suspension { base } => match base.as_ref() {
            Constructor::Circle { perimeter } => Ok(susp_over_circle_net(*perimeter, res)),
            _ => Err(Error::WrongConstructor(
                "net sampling supports suspensions over circles".into(),
            )),
        },
        Constructor::Join { a, b } => match (a.as_ref(), b.as_ref()) {
            (Constructor::Circle { perimeter: pa }, Constructor::Circle { perimeter: pb }) => {
                join_circles_net(*pa, *pb, res)
            }
            _ => Err(Error::WrongConstructor(
                "net sampling supports joins of circles".into(),
            )),
        },
        Constructor::Graph(g) => {
            let mesh = match space.constructor() {
                Constructor::Graph(_) => space
                    .graph_runtime()
                    .map(|rt| rt.max_min_incident())
                    .unwrap_or(0.0),
                _ => 0.0,
            };
            Ok(RawNet {
                points: (0..g.nodes.len()).map(|id| Point::Node { id }).collect(),
                mesh,
            })
        }
        Constructor::Barrel { height } => barrel_net(*height, res),
        Constructor::CappedCylinder { height, cone_depth } => {
            capped_cylinder_net(*height, *cone_depth, res)
        }
        Constructor::FlatDisc { radius } => flat_disc_net(*radius, res),
    }
}
