//! Law-of-cosines computations in the constant-curvature model surfaces.
//!
//! `comparison_angle` turns three side lengths into the angle a triangle
//! with those sides would have at the vertex between `s1` and `s2` in the
//! simply connected surface of curvature `k`. `side_from_angle` is its
//! inverse: hinge data in, opposite side out. Both validate their input;
//! `comparison_angle_extended` is the clamping variant that never fails and
//! is meant for places where side data arrive with discretization error.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Absolute tolerance applied to length comparisons during validation.
pub const LENGTH_TOL: f64 = 1e-9;

/// Rescaled hyperbolic side lengths beyond this make cosh/sinh products
/// overflow; inputs this large are rejected instead of returning NaN.
const MAX_HYPERBOLIC_SIDE: f64 = 300.0;

/// Two sides meeting at a vertex plus the side opposite to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSides {
    pub s1: f64,
    pub s2: f64,
    pub opp: f64,
}

impl TriangleSides {
    pub fn new(s1: f64, s2: f64, opp: f64) -> Self {
        Self { s1, s2, opp }
    }
}

/// Diameter of the curvature-`k` model surface: `pi/sqrt(k)` when `k > 0`,
/// infinite otherwise.
pub fn model_diameter(k: f64) -> f64 {
    if k > 0.0 {
        PI / k.sqrt()
    } else {
        f64::INFINITY
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Angle at the vertex between `s1` and `s2` of the model triangle with the
/// given sides, in curvature `k`.
///
/// For `k > 0`, sides may not exceed the model diameter and the perimeter
/// may not exceed twice the diameter. When `s1` or `s2` sits at the
/// diameter itself the law of cosines degenerates (the far endpoint is
/// conjugate to the vertex); the only realizable data there are collinear,
/// and they get the collinear angles: 0 when `opp` matches `|s1 - s2|`,
/// `pi` when it matches `s1 + s2`.
pub fn comparison_angle(k: f64, sides: TriangleSides) -> Result<f64> {
    let TriangleSides { s1, s2, opp } = sides;
    if !(k.is_finite() && s1.is_finite() && s2.is_finite() && opp.is_finite()) {
        return Err(Error::InvalidSides(format!(
            "non-finite input: k={k}, s1={s1}, s2={s2}, opp={opp}"
        )));
    }
    if s1 <= 0.0 || s2 <= 0.0 {
        return Err(Error::DegenerateTriangle(format!(
            "sides meeting at the vertex must be positive, got s1={s1}, s2={s2}"
        )));
    }
    if opp < 0.0 {
        return Err(Error::InvalidSides(format!("opposite side is negative: {opp}")));
    }
    if opp < (s1 - s2).abs() - LENGTH_TOL || opp > s1 + s2 + LENGTH_TOL {
        return Err(Error::InvalidSides(format!(
            "triangle inequality fails: s1={s1}, s2={s2}, opp={opp}"
        )));
    }
    if k > 0.0 {
        let diam = PI / k.sqrt();
        for (name, s) in [("s1", s1), ("s2", s2), ("opp", opp)] {
            if s > diam + LENGTH_TOL {
                return Err(Error::InvalidSides(format!(
                    "{name}={s} exceeds the model diameter {diam}"
                )));
            }
        }
        let perimeter = s1 + s2 + opp;
        if perimeter > 2.0 * diam + LENGTH_TOL {
            return Err(Error::InvalidSides(format!(
                "perimeter {perimeter} exceeds twice the model diameter {diam}"
            )));
        }
        if s1 >= diam - LENGTH_TOL || s2 >= diam - LENGTH_TOL {
            if (opp - (s1 - s2).abs()).abs() <= LENGTH_TOL {
                return Ok(0.0);
            }
            if (opp - (s1 + s2)).abs() <= LENGTH_TOL {
                return Ok(PI);
            }
            return Err(Error::InvalidSides(format!(
                "a diameter-length side admits only collinear data, got s1={s1}, s2={s2}, opp={opp}"
            )));
        }
        let rk = k.sqrt();
        let (a, b, c) = (s1 * rk, s2 * rk, opp * rk);
        let cosang = (c.cos() - a.cos() * b.cos()) / (a.sin() * b.sin());
        Ok(clamp_unit(cosang).acos())
    } else if k < 0.0 {
        let rk = (-k).sqrt();
        let (a, b, c) = (s1 * rk, s2 * rk, opp * rk);
        if a > MAX_HYPERBOLIC_SIDE || b > MAX_HYPERBOLIC_SIDE || c > 2.0 * MAX_HYPERBOLIC_SIDE {
            return Err(Error::InvalidSides(format!(
                "rescaled sides too large for the hyperbolic model: a={a}, b={b}, c={c}"
            )));
        }
        let cosang = (a.cosh() * b.cosh() - c.cosh()) / (a.sinh() * b.sinh());
        Ok(clamp_unit(cosang).acos())
    } else {
        let cosang = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
        Ok(clamp_unit(cosang).acos())
    }
}

/// Opposite side of the model hinge with sides `s1`, `s2` and angle `angle`
/// between them, in curvature `k`. Inverse of [`comparison_angle`].
pub fn side_from_angle(k: f64, s1: f64, s2: f64, angle: f64) -> Result<f64> {
    if !(k.is_finite() && s1.is_finite() && s2.is_finite() && angle.is_finite()) {
        return Err(Error::InvalidSides(format!(
            "non-finite input: k={k}, s1={s1}, s2={s2}, angle={angle}"
        )));
    }
    if s1 <= 0.0 || s2 <= 0.0 {
        return Err(Error::DegenerateTriangle(format!(
            "hinge sides must be positive, got s1={s1}, s2={s2}"
        )));
    }
    if !(-LENGTH_TOL..=PI + LENGTH_TOL).contains(&angle) {
        return Err(Error::InvalidAngle(format!("hinge angle {angle} outside [0, pi]")));
    }
    let angle = angle.clamp(0.0, PI);
    if k > 0.0 {
        let diam = PI / k.sqrt();
        if s1 > diam + LENGTH_TOL || s2 > diam + LENGTH_TOL {
            return Err(Error::InvalidSides(format!(
                "hinge side exceeds the model diameter {diam}: s1={s1}, s2={s2}"
            )));
        }
        // A diameter-length side ends at the conjugate point of the vertex,
        // so the opposite side is forced regardless of the hinge angle.
        let s1_diam = s1 >= diam - LENGTH_TOL;
        let s2_diam = s2 >= diam - LENGTH_TOL;
        if s1_diam && s2_diam {
            return Ok(0.0);
        }
        if s1_diam {
            return Ok((diam - s2).max(0.0));
        }
        if s2_diam {
            return Ok((diam - s1).max(0.0));
        }
        let rk = k.sqrt();
        let (a, b) = (s1 * rk, s2 * rk);
        let cosc = clamp_unit(a.cos() * b.cos() + a.sin() * b.sin() * angle.cos());
        Ok(cosc.acos() / rk)
    } else if k < 0.0 {
        let rk = (-k).sqrt();
        let (a, b) = (s1 * rk, s2 * rk);
        if a > MAX_HYPERBOLIC_SIDE || b > MAX_HYPERBOLIC_SIDE {
            return Err(Error::InvalidSides(format!(
                "rescaled sides too large for the hyperbolic model: a={a}, b={b}"
            )));
        }
        let coshc = a.cosh() * b.cosh() - a.sinh() * b.sinh() * angle.cos();
        Ok(coshc.max(1.0).acosh() / rk)
    } else {
        let d2 = s1 * s1 + s2 * s2 - 2.0 * s1 * s2 * angle.cos();
        Ok(d2.max(0.0).sqrt())
    }
}

/// Clamping variant of [`comparison_angle`] that never fails.
///
/// Out-of-range data are snapped to the nearest realizable configuration:
/// `opp` below the collinear minimum gives 0, above the collinear maximum
/// gives `pi`, degenerate hinge sides give 0. Meant for second-difference
/// and vertex-angle tests where side lengths carry discretization error
/// and an error return would abort an otherwise meaningful scan.
pub fn comparison_angle_extended(k: f64, s1: f64, s2: f64, opp: f64) -> f64 {
    if !(k.is_finite() && s1.is_finite() && s2.is_finite() && opp.is_finite()) {
        return 0.0;
    }
    if s1 <= LENGTH_TOL || s2 <= LENGTH_TOL {
        return 0.0;
    }
    let opp = opp.max(0.0);
    if k > 0.0 {
        let diam = PI / k.sqrt();
        let s1 = s1.min(diam);
        let s2 = s2.min(diam);
        if s1 >= diam - LENGTH_TOL || s2 >= diam - LENGTH_TOL {
            // Limit of the law of cosines as a hinge side approaches the
            // diameter: the angle jumps from 0 to pi as `opp` crosses the
            // forced collinear value.
            let other = if s1 >= diam - LENGTH_TOL && s2 >= diam - LENGTH_TOL {
                0.0
            } else if s1 >= diam - LENGTH_TOL {
                s2
            } else {
                s1
            };
            let forced = diam - other;
            return if opp <= forced + LENGTH_TOL { 0.0 } else { PI };
        }
        let lo = (s1 - s2).abs();
        let hi = (s1 + s2).min(2.0 * diam - s1 - s2).min(diam);
        let opp = opp.clamp(lo, hi.max(lo));
        let rk = k.sqrt();
        let (a, b, c) = (s1 * rk, s2 * rk, opp * rk);
        let cosang = (c.cos() - a.cos() * b.cos()) / (a.sin() * b.sin());
        clamp_unit(cosang).acos()
    } else if k < 0.0 {
        let rk = (-k).sqrt();
        let cap = MAX_HYPERBOLIC_SIDE / rk;
        let s1 = s1.min(cap);
        let s2 = s2.min(cap);
        let opp = opp.clamp((s1 - s2).abs(), s1 + s2);
        let (a, b, c) = (s1 * rk, s2 * rk, opp * rk);
        let cosang = (a.cosh() * b.cosh() - c.cosh()) / (a.sinh() * b.sinh());
        clamp_unit(cosang).acos()
    } else {
        let opp = opp.clamp((s1 - s2).abs(), s1 + s2);
        let cosang = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
        clamp_unit(cosang).acos()
    }
}
