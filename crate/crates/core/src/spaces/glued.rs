//! Distance oracles for the glued and solid constructors.
//!
//! The barrel (open-top cylindrical cup) needs genuine work: shortest
//! paths may stay on the lateral wall, or dip across the floor disc, and
//! the crossing points on the rim are found by deterministic grid search
//! plus golden refinement, memoized by the rotation-invariant signature of
//! the pair. The capped cylinder is a convex solid and the flat disc a
//! convex plane region, so both use straight-segment geometry.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::spaces::Point;
use crate::util::golden_min;

const TWO_PI: f64 = 2.0 * PI;

/// Wrap an angle difference into [-pi, pi].
fn wrap(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(TWO_PI) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

/// Arc distance between two rim angles, in [0, pi]. Built from |a - b|,
/// which is exactly invariant under swapping the arguments, so the
/// result is bit-identical in both orders.
fn arc(a: f64, b: f64) -> f64 {
    let d = (a - b).abs().rem_euclid(TWO_PI);
    d.min(TWO_PI - d)
}

/// Chord of the unit rim circle between two angles.
fn chord(a: f64, b: f64) -> f64 {
    2.0 * (arc(a, b) / 2.0).sin()
}

/// Deterministic 1-d minimization: coarse grid, then golden refinement in
/// the best cell (including both neighbors).
fn min_scan<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, grid: usize, refine: usize) -> f64 {
    let mut best_v = f(lo);
    let mut best_x = lo;
    for i in 1..=grid {
        let x = lo + (hi - lo) * (i as f64) / (grid as f64);
        let v = f(x);
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    let step = (hi - lo) / grid as f64;
    let (_, v) = golden_min(&f, (best_x - step).max(lo), (best_x + step).min(hi), refine);
    best_v.min(v)
}

pub struct BarrelRuntime {
    height: f64,
    memo: Mutex<HashMap<(u8, u64, u64, u64), f64>>,
}

impl BarrelRuntime {
    pub fn new(height: f64) -> Self {
        Self { height, memo: Mutex::new(HashMap::new()) }
    }

    fn memoized<F: FnOnce() -> f64>(&self, key: (u8, u64, u64, u64), compute: F) -> f64 {
        if let Some(&v) = self.memo.lock().unwrap().get(&key) {
            return v;
        }
        let v = compute();
        self.memo.lock().unwrap().insert(key, v);
        v
    }

    /// Wall-to-wall distance: either the flat unrolled lateral geodesic or
    /// a path that dips across the floor, entering and leaving on the rim.
    fn wall_wall(&self, th1: f64, h1: f64, th2: f64, h2: f64) -> f64 {
        let a = arc(th1, th2);
        let direct = (h1 - h2).hypot(a);
        // Any floor crossing costs at least the two descents.
        if direct <= h1 + h2 {
            return direct;
        }
        if h1 == 0.0 && h2 == 0.0 {
            return chord(th1, th2).min(direct);
        }
        let (hlo, hhi) = if h1 <= h2 { (h1, h2) } else { (h2, h1) };
        let key = (1u8, a.to_bits(), hlo.to_bits(), hhi.to_bits());
        let through = self.memoized(key, || {
            // Relative frame: lower point at angle 0, other at angle `a`.
            if hlo == 0.0 {
                // Already on the rim: one crossing left.
                min_scan(
                    |g: f64| 2.0 * (g / 2.0).abs().min(PI).sin() + hhi.hypot(arc(a, g)),
                    -PI,
                    PI,
                    256,
                    60,
                )
            } else {
                let f = |b: f64, g: f64| {
                    hlo.hypot(b.abs()) + 2.0 * (wrap(g - b) / 2.0).abs().sin() + hhi.hypot(arc(a, g))
                };
                let grid = 48usize;
                let mut best = (f64::INFINITY, 0.0, 0.0);
                for i in 0..=grid {
                    let b = -PI + TWO_PI * (i as f64) / (grid as f64);
                    for j in 0..=grid {
                        let g = -PI + TWO_PI * (j as f64) / (grid as f64);
                        let v = f(b, g);
                        if v < best.0 {
                            best = (v, b, g);
                        }
                    }
                }
                let step = TWO_PI / grid as f64;
                let (mut bb, mut gg) = (best.1, best.2);
                let mut val = best.0;
                for _ in 0..3 {
                    let (nb, v1) = golden_min(|b| f(b, gg), bb - step, bb + step, 48);
                    bb = nb;
                    val = val.min(v1);
                    let (ng, v2) = golden_min(|g| f(bb, g), gg - step, gg + step, 48);
                    gg = ng;
                    val = val.min(v2);
                }
                val
            }
        });
        direct.min(through)
    }

    /// Wall-to-floor distance: one rim crossing.
    fn wall_cap(&self, th1: f64, h1: f64, r2: f64, ph2: f64) -> f64 {
        // Relative frame: wall point at angle 0, floor point at delta.
        let delta = wrap(ph2 - th1);
        let key = (2u8, delta.abs().to_bits(), h1.to_bits(), r2.to_bits());
        self.memoized(key, || {
            let d = delta.abs();
            let f = |b: f64| {
                h1.hypot(b.abs()) + (1.0 + r2 * r2 - 2.0 * r2 * (b - d).cos()).max(0.0).sqrt()
            };
            min_scan(f, -PI, PI, 256, 60)
        })
    }

    fn cap_cap(r1: f64, p1: f64, r2: f64, p2: f64) -> f64 {
        (r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * (p1 - p2).cos()).max(0.0).sqrt()
    }

    pub fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        match (x, y) {
            (Point::Wall { arc: a1, up: u1 }, Point::Wall { arc: a2, up: u2 }) => {
                self.check_height(*u1)?;
                self.check_height(*u2)?;
                Ok(self.wall_wall(*a1, *u1, *a2, *u2))
            }
            (Point::Wall { arc: a1, up: u1 }, Point::Cap { r, arc: p }) => {
                self.check_height(*u1)?;
                Ok(self.wall_cap(*a1, *u1, *r, *p))
            }
            (Point::Cap { r, arc: p }, Point::Wall { arc: a2, up: u2 }) => {
                self.check_height(*u2)?;
                Ok(self.wall_cap(*a2, *u2, *r, *p))
            }
            (Point::Cap { r: r1, arc: p1 }, Point::Cap { r: r2, arc: p2 }) => {
                Ok(Self::cap_cap(*r1, *p1, *r2, *p2))
            }
            _ => Err(Error::ForeignPoint("barrel points are wall or cap points".into())),
        }
    }

    fn check_height(&self, u: f64) -> Result<()> {
        if (0.0..=self.height + 1e-9).contains(&u) {
            Ok(())
        } else {
            Err(Error::ForeignPoint(format!(
                "wall height {u} outside [0, {}]",
                self.height
            )))
        }
    }
}

/// Euclidean distance in the capped-cylinder solid.
pub fn body_dist(x: &Point, y: &Point) -> Result<f64> {
    match (x, y) {
        (Point::Body { x: x1, y: y1, z: z1 }, Point::Body { x: x2, y: y2, z: z2 }) => {
            let (dx, dy, dz) = (x1 - x2, y1 - y2, z1 - z2);
            Ok((dx * dx + dy * dy + dz * dz).sqrt())
        }
        _ => Err(Error::ForeignPoint("solid points have xyz coordinates".into())),
    }
}

/// Straight-segment interpolation in the solid (convex, so it stays inside).
pub fn body_lerp(x: &Point, y: &Point, t: f64) -> Result<Point> {
    match (x, y) {
        (Point::Body { x: x1, y: y1, z: z1 }, Point::Body { x: x2, y: y2, z: z2 }) => {
            Ok(Point::Body {
                x: x1 + t * (x2 - x1),
                y: y1 + t * (y2 - y1),
                z: z1 + t * (z2 - z1),
            })
        }
        _ => Err(Error::ForeignPoint("solid points have xyz coordinates".into())),
    }
}

/// Chord distance between polar points of the flat disc.
pub fn disc_dist(x: &Point, y: &Point) -> Result<f64> {
    match (x, y) {
        (Point::Cap { r: r1, arc: p1 }, Point::Cap { r: r2, arc: p2 }) => {
            Ok((r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * (p1 - p2).cos()).max(0.0).sqrt())
        }
        _ => Err(Error::ForeignPoint("disc points are polar cap points".into())),
    }
}

/// Straight-segment interpolation in the flat disc.
pub fn disc_lerp(x: &Point, y: &Point, t: f64) -> Result<Point> {
    match (x, y) {
        (Point::Cap { r: r1, arc: p1 }, Point::Cap { r: r2, arc: p2 }) => {
            let (x1, y1) = (r1 * p1.cos(), r1 * p1.sin());
            let (x2, y2) = (r2 * p2.cos(), r2 * p2.sin());
            let (mx, my) = (x1 + t * (x2 - x1), y1 + t * (y2 - y1));
            let r = mx.hypot(my);
            let arc = if r < 1e-15 { 0.0 } else { my.atan2(mx).rem_euclid(TWO_PI) };
            Ok(Point::Cap { r, arc })
        }
        _ => Err(Error::ForeignPoint("disc points are polar cap points".into())),
    }
}
