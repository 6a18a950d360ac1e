//! Ambient nets: finite point families standing in for a whole space
//! during a check, together with the gap bound the noise model consumes.

use crate::error::Result;
use crate::spaces::sampling::{ambient_net, RawNet};
use crate::spaces::{Point, Space};

/// A sampled net over a space.
#[derive(Debug, Clone)]
pub struct Net {
    pub points: Vec<Point>,
    /// Requested grid resolution.
    pub resolution: f64,
    /// Upper bound on the largest nearest-neighbor gap, declared by the
    /// sampler from the grid geometry.
    pub mesh: f64,
    pub label: String,
}

pub fn build_net(space: &Space, resolution: f64) -> Result<Net> {
    let RawNet { points, mesh } = ambient_net(space, resolution)?;
    Ok(Net {
        points,
        resolution,
        mesh,
        label: format!("net({}, res={resolution})", space.label()),
    })
}

/// Index of the net point closest to `q`; ties resolve to the first index.
pub fn nearest_index(space: &Space, points: &[Point], q: &Point) -> Result<Option<usize>> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in points.iter().enumerate() {
        let d = space.dist(q, p)?;
        match best {
            Some((_, bd)) if d >= bd => {}
            _ => best = Some((i, d)),
        }
    }
    Ok(best.map(|(i, _)| i))
}

/// Indices of points within `radius` of `center`, in net order.
pub fn within_ball(
    space: &Space,
    points: &[Point],
    center: &Point,
    radius: f64,
) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if space.dist(center, p)? <= radius {
            out.push(i);
        }
    }
    Ok(out)
}

/// Measured largest nearest-neighbor gap. Quadratic; a diagnostic for
/// tests and small nets, not part of any check's noise model.
pub fn measured_mesh(space: &Space, points: &[Point]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        let mut best = f64::INFINITY;
        for (j, q) in points.iter().enumerate() {
            if i != j {
                best = best.min(space.dist(p, q)?);
            }
        }
        if best.is_finite() {
            worst = worst.max(best);
        }
    }
    Ok(worst)
}

/// Short human-readable form of a point for log lines and CSV cells.
pub fn point_brief(p: &Point) -> String {
    use crate::util::fmt_sig;
    match p {
        Point::Sphere { coords } => {
            let parts: Vec<String> = coords.iter().map(|c| fmt_sig(*c, 5)).collect();
            format!("({})", parts.join(", "))
        }
        Point::Circle { arc } => format!("arc {}", fmt_sig(*arc, 5)),
        Point::Real { t } => fmt_sig(*t, 5),
        Point::Pair { a, b } => format!("[{} | {}]", point_brief(a), point_brief(b)),
        Point::Cone { r, base } => format!("r={} over {}", fmt_sig(*r, 5), point_brief(base)),
        Point::Susp { lat, base } => {
            format!("lat={} over {}", fmt_sig(*lat, 5), point_brief(base))
        }
        Point::Join { mix, a, b } => format!(
            "mix={} [{} | {}]",
            fmt_sig(*mix, 5),
            point_brief(a),
            point_brief(b)
        ),
        Point::Node { id } => format!("node {id}"),
        Point::Wall { arc, up } => {
            format!("wall arc={} up={}", fmt_sig(*arc, 5), fmt_sig(*up, 5))
        }
        Point::Cap { r, arc } => {
            format!("cap r={} arc={}", fmt_sig(*r, 5), fmt_sig(*arc, 5))
        }
        Point::Body { x, y, z } => format!(
            "({}, {}, {})",
            fmt_sig(*x, 5),
            fmt_sig(*y, 5),
            fmt_sig(*z, 5)
        ),
    }
}
