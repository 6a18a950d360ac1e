//! Statement-level verification suites.
//!
//! Each check exercises one structural fact about well-behaved subsets of
//! positively curved spaces on a sampled instance, reporting margins the
//! same way the convexity checks do. Hypothesis failures are errors, not
//! violations: a check refuses to run when its premises don't hold.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::nets::Net;
use crate::qc_check::{
    check_quasi_convex, effective_tolerance, CheckConfig, CheckReport, Verdict, Witness,
};
use crate::spaceforms::comparison_angle_extended;
use crate::spaces::{Constructor, Point, Space};
use crate::subsets::{SubsetNet, SubsetOracle};
use crate::util::par_map;

fn require_unit_curvature(space: &Space) -> Result<()> {
    if space.declared_k() < 1.0 {
        return Err(Error::WrongCurvature(format!(
            "{} declares curvature {}, need at least 1",
            space.label(),
            space.declared_k()
        )));
    }
    Ok(())
}

fn require_quasi_convex(
    space: &Space,
    q_net: &Net,
    f_net: &SubsetNet,
    cfg: &CheckConfig,
) -> Result<()> {
    let qc = check_quasi_convex(space, q_net, f_net, cfg)?;
    if qc.verdict == Verdict::Violation {
        return Err(Error::HypothesisFailed(format!(
            "subset {} is not quasi-convex (margin {:.6})",
            f_net.label,
            qc.worst_margin.unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}

fn empty_report(check: &str, space: &Space, f_net: &SubsetNet, tol: f64) -> CheckReport {
    CheckReport {
        check: check.to_string(),
        space: space.label().to_string(),
        subset: f_net.label.clone(),
        verdict: Verdict::Vacuous,
        worst_margin: None,
        tolerance: tol,
        counts: BTreeMap::new(),
        params: BTreeMap::new(),
        witness: None,
        notes: Vec::new(),
        version: crate::qc_check::report_version(),
    }
}

/// Distances to the furthest net point, first-index argmax.
fn furthest_from_subset(
    space: &Space,
    q_net: &Net,
    f_net: &SubsetNet,
) -> Result<(Vec<f64>, usize)> {
    let dists: Vec<Result<f64>> = par_map(&q_net.points, |q| f_net.net_dist(space, q));
    let mut out = Vec::with_capacity(dists.len());
    for d in dists {
        out.push(d?);
    }
    let mut arg = 0usize;
    for (i, &d) in out.iter().enumerate() {
        if d > out[arg] {
            arg = i;
        }
    }
    Ok((out, arg))
}

/// No point of the space sits further than a quarter turn from a
/// quasi-convex subset, up to sampling slack.
pub fn check_diameter_bound(
    space: &Space,
    q_net: &Net,
    f_net: &SubsetNet,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    require_unit_curvature(space)?;
    require_quasi_convex(space, q_net, f_net, cfg)?;
    let tol = effective_tolerance(cfg.tolerance);
    let slack = 2.0 * (q_net.mesh + f_net.sample_mesh);

    let (dists, arg) = furthest_from_subset(space, q_net, f_net)?;
    let mut report = empty_report("subset_diameter_bound", space, f_net, tol);
    report.counts.insert("ambient_points".into(), q_net.points.len() as u64);
    report.counts.insert("subset_points".into(), f_net.points.len() as u64);
    report.params.insert("slack".into(), slack);
    if dists.is_empty() {
        report.notes.push("empty ambient net".into());
        return Ok(report);
    }
    let max_d = dists[arg];
    let margin = max_d - FRAC_PI_2 - slack;
    report.params.insert("max_dist".into(), max_d);
    report.verdict = if margin > tol { Verdict::Violation } else { Verdict::NoViolation };
    report.worst_margin = Some(margin);
    let q = &q_net.points[arg];
    let foot = crate::nets::nearest_index(space, &f_net.points, q)?.unwrap_or(0);
    let mut dmap = BTreeMap::new();
    dmap.insert("to_subset".into(), max_d);
    report.witness = Some(Witness {
        q: q.clone(),
        p: f_net.points[foot].clone(),
        partner: None,
        center: None,
        angle: None,
        slope: None,
        margin,
        noise: slack,
        dists: dmap,
    });
    Ok(report)
}

/// When the furthest distance from the subset is a quarter turn, every
/// furthest point is at exactly a quarter turn from every subset point.
pub fn check_far_set_constancy(
    space: &Space,
    q_net: &Net,
    f_net: &SubsetNet,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    require_unit_curvature(space)?;
    let tol = effective_tolerance(cfg.tolerance);
    let (dists, arg) = furthest_from_subset(space, q_net, f_net)?;
    if dists.is_empty() {
        return Err(Error::HypothesisFailed("empty ambient net".into()));
    }
    let max_d = dists[arg];
    if (max_d - FRAC_PI_2).abs() > 1e-9 {
        return Err(Error::HypothesisFailed(format!(
            "furthest distance {max_d} is not a quarter turn; no far band to test"
        )));
    }
    let far: Vec<usize> = dists
        .iter()
        .enumerate()
        .filter(|(_, &d)| d >= max_d - 1e-9)
        .map(|(i, _)| i)
        .collect();

    struct Worst {
        dev: f64,
        q_idx: usize,
        f_idx: usize,
        d: f64,
    }
    let per_far: Vec<Result<Worst>> = par_map(&far, |&qi| {
        let q = &q_net.points[qi];
        let mut worst = Worst { dev: -1.0, q_idx: qi, f_idx: 0, d: 0.0 };
        for (fi, f) in f_net.points.iter().enumerate() {
            let d = space.dist(q, f)?;
            let dev = (d - FRAC_PI_2).abs();
            if dev > worst.dev {
                worst = Worst { dev, q_idx: qi, f_idx: fi, d };
            }
        }
        Ok(worst)
    });
    let mut worst: Option<Worst> = None;
    for item in per_far {
        let w = item?;
        let better = match &worst {
            Some(b) => w.dev > b.dev,
            None => true,
        };
        if better {
            worst = Some(w);
        }
    }

    let mut report = empty_report("far_set_constancy", space, f_net, tol);
    report.counts.insert("ambient_points".into(), q_net.points.len() as u64);
    report.counts.insert("far_points".into(), far.len() as u64);
    report.counts.insert("subset_points".into(), f_net.points.len() as u64);
    report.params.insert("max_dist".into(), max_d);
    if let Some(w) = worst {
        report.verdict = if w.dev > tol { Verdict::Violation } else { Verdict::NoViolation };
        report.worst_margin = Some(w.dev);
        let mut dmap = BTreeMap::new();
        dmap.insert("to_subset_point".into(), w.d);
        report.witness = Some(Witness {
            q: q_net.points[w.q_idx].clone(),
            p: f_net.points[w.f_idx].clone(),
            partner: None,
            center: None,
            angle: None,
            slope: None,
            margin: w.dev,
            noise: 0.0,
            dists: dmap,
        });
    }
    Ok(report)
}

/// Distances to the two ends of a diameter sum to a half turn from
/// everywhere.
pub fn check_antipodal_sum(
    space: &Space,
    q_net: &Net,
    p1: &Point,
    p2: &Point,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    require_unit_curvature(space)?;
    let d12 = space.dist(p1, p2)?;
    if (d12 - PI).abs() > 1e-12 {
        return Err(Error::HypothesisFailed(format!(
            "endpoint distance {d12} is not a half turn"
        )));
    }
    let tol = effective_tolerance(cfg.tolerance);

    let sums: Vec<Result<(f64, f64, f64)>> = par_map(&q_net.points, |q| {
        let a = space.dist(q, p1)?;
        let b = space.dist(q, p2)?;
        Ok((a, b, (a + b - PI).abs()))
    });
    let mut worst: Option<(usize, f64, f64, f64)> = None;
    for (i, s) in sums.into_iter().enumerate() {
        let (a, b, dev) = s?;
        let better = match &worst {
            Some((_, _, _, bd)) => dev > *bd,
            None => true,
        };
        if better {
            worst = Some((i, a, b, dev));
        }
    }

    let f_like = SubsetNet {
        label: "diameter endpoints".into(),
        points: vec![p1.clone(), p2.clone()],
        sample_mesh: 0.0,
        oracle: Some(SubsetOracle::FiniteSet(vec![p1.clone(), p2.clone()])),
    };
    let mut report = empty_report("antipodal_distance_sum", space, &f_like, tol);
    report.counts.insert("ambient_points".into(), q_net.points.len() as u64);
    report.params.insert("endpoint_dist".into(), d12);
    if let Some((qi, a, b, dev)) = worst {
        report.verdict = if dev > tol { Verdict::Violation } else { Verdict::NoViolation };
        report.worst_margin = Some(dev);
        let mut dmap = BTreeMap::new();
        dmap.insert("to_first".into(), a);
        dmap.insert("to_second".into(), b);
        report.witness = Some(Witness {
            q: q_net.points[qi].clone(),
            p: p1.clone(),
            partner: Some(p2.clone()),
            center: None,
            angle: None,
            slope: None,
            margin: dev,
            noise: 0.0,
            dists: dmap,
        });
    }
    Ok(report)
}

/// At the nearest subset point, the spherical hinge bound
/// cos(q to x) >= cos(q to p) cos(p to x) holds for the whole subset.
pub fn check_hinge_bound(
    space: &Space,
    q_net: &Net,
    f_net: &SubsetNet,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    require_unit_curvature(space)?;
    let tol = effective_tolerance(cfg.tolerance);
    let cutoff = (3.0 * f_net.sample_mesh).max(1e-9);
    let noise = 2.0 * f_net.sample_mesh;

    struct PerQ {
        margin: f64,
        q_idx: usize,
        p_idx: usize,
        x_idx: usize,
        lhs: f64,
        rhs: f64,
        pq: f64,
        px: f64,
        xq: f64,
        // Sign agreement between the cosine defect and the right-angle
        // test, across this point's subset partners.
        agree: u64,
        disagree: u64,
        zero_band: u64,
    }
    let q_indices: Vec<usize> = (0..q_net.points.len()).collect();
    let per_q: Vec<Result<Option<PerQ>>> = par_map(&q_indices, |&qi| {
        let q = &q_net.points[qi];
        let mut foot: Option<(usize, f64)> = None;
        for (fi, f) in f_net.points.iter().enumerate() {
            let d = space.dist(q, f)?;
            match foot {
                Some((_, bd)) if d >= bd => {}
                _ => foot = Some((fi, d)),
            }
        }
        let (p_idx, pq) = match foot {
            Some(f) => f,
            None => return Ok(None),
        };
        if pq <= cutoff {
            return Ok(None);
        }
        let p = &f_net.points[p_idx];
        let cos_pq = space.cos_dist(q, p)?;
        let mut best: Option<PerQ> = None;
        let mut agree = 0u64;
        let mut disagree = 0u64;
        let mut zero_band = 0u64;
        for (xi, x) in f_net.points.iter().enumerate() {
            if xi == p_idx {
                continue;
            }
            let px = space.dist(p, x)?;
            if px <= 1e-12 {
                continue;
            }
            let lhs = space.cos_dist(q, x)?;
            let rhs = cos_pq * space.cos_dist(p, x)?;
            let defect = rhs - lhs;
            let margin = defect - noise;

            let xq = space.dist(q, x)?;
            let theta = comparison_angle_extended(1.0, pq, px, xq);
            if defect.abs() <= 1e-9 {
                zero_band += 1;
            } else if (defect > 0.0) == (theta > FRAC_PI_2) {
                agree += 1;
            } else {
                disagree += 1;
            }

            let better = match &best {
                Some(b) => margin > b.margin,
                None => true,
            };
            if better {
                best = Some(PerQ {
                    margin,
                    q_idx: qi,
                    p_idx,
                    x_idx: xi,
                    lhs,
                    rhs,
                    pq,
                    px,
                    xq,
                    agree: 0,
                    disagree: 0,
                    zero_band: 0,
                });
            }
        }
        Ok(best.map(|mut b| {
            b.agree = agree;
            b.disagree = disagree;
            b.zero_band = zero_band;
            b
        }))
    });

    let mut worst: Option<PerQ> = None;
    let mut active = 0u64;
    let mut agree = 0u64;
    let mut disagree = 0u64;
    let mut zero_band = 0u64;
    for item in per_q {
        if let Some(w) = item? {
            active += 1;
            agree += w.agree;
            disagree += w.disagree;
            zero_band += w.zero_band;
            let better = match &worst {
                Some(b) => w.margin > b.margin,
                None => true,
            };
            if better {
                worst = Some(w);
            }
        }
    }

    let mut report = empty_report("foot_hinge_bound", space, f_net, tol);
    report.counts.insert("ambient_points".into(), q_net.points.len() as u64);
    report.counts.insert("subset_points".into(), f_net.points.len() as u64);
    report.counts.insert("active_points".into(), active);
    report.counts.insert("sign_agree".into(), agree);
    report.counts.insert("sign_disagree".into(), disagree);
    report.counts.insert("sign_zero_band".into(), zero_band);
    report.params.insert("noise".into(), noise);
    report.params.insert("cutoff".into(), cutoff);
    if let Some(w) = worst {
        report.verdict = if w.margin > tol { Verdict::Violation } else { Verdict::NoViolation };
        report.worst_margin = Some(w.margin);
        let mut dmap = BTreeMap::new();
        dmap.insert("cos_qx".into(), w.lhs);
        dmap.insert("cos_product".into(), w.rhs);
        dmap.insert("dqp".into(), w.pq);
        dmap.insert("dpx".into(), w.px);
        dmap.insert("dxq".into(), w.xq);
        report.witness = Some(Witness {
            q: q_net.points[w.q_idx].clone(),
            p: f_net.points[w.p_idx].clone(),
            partner: Some(f_net.points[w.x_idx].clone()),
            center: None,
            angle: None,
            slope: None,
            margin: w.margin,
            noise,
            dists: dmap,
        });
    } else {
        report.notes.push("no ambient point survived the distance cutoff".into());
    }
    Ok(report)
}

/// Near-antipodes of subset points lie near the subset. `force` runs the
/// scan even when the subset fails the quasi-convexity premise, which is
/// how a deliberate counterexample is exercised.
pub fn check_antipode_closure(
    space: &Space,
    q_net: &Net,
    f_net: &SubsetNet,
    cfg: &CheckConfig,
    force: bool,
) -> Result<CheckReport> {
    require_unit_curvature(space)?;
    let tol = effective_tolerance(cfg.tolerance);
    let qc = check_quasi_convex(space, q_net, f_net, cfg)?;
    let qc_failed = qc.verdict == Verdict::Violation;
    if qc_failed && !force {
        return Err(Error::HypothesisFailed(format!(
            "subset {} is not quasi-convex; pass force to scan anyway",
            f_net.label
        )));
    }
    let band = 1.5 * q_net.mesh + 1e-9;

    struct Pair {
        margin: f64,
        z1_idx: usize,
        z2_idx: usize,
        d12: f64,
        to_subset: f64,
    }
    let f_indices: Vec<usize> = (0..f_net.points.len()).collect();
    let per_f: Vec<Result<Option<Pair>>> = par_map(&f_indices, |&fi| {
        let z1 = &f_net.points[fi];
        let mut best: Option<Pair> = None;
        for (qi, z2) in q_net.points.iter().enumerate() {
            let d12 = space.dist(z1, z2)?;
            if d12 < PI - band {
                continue;
            }
            let to_subset = f_net.net_dist(space, z2)?;
            let margin = to_subset - (PI - d12) - f_net.sample_mesh;
            let better = match &best {
                Some(b) => margin > b.margin,
                None => true,
            };
            if better {
                best = Some(Pair { margin, z1_idx: fi, z2_idx: qi, d12, to_subset });
            }
        }
        Ok(best)
    });

    let mut worst: Option<Pair> = None;
    let mut sources = 0u64;
    for item in per_f {
        if let Some(p) = item? {
            sources += 1;
            let better = match &worst {
                Some(b) => p.margin > b.margin,
                None => true,
            };
            if better {
                worst = Some(p);
            }
        }
    }

    let mut report = empty_report("antipode_closure", space, f_net, tol);
    report.counts.insert("ambient_points".into(), q_net.points.len() as u64);
    report.counts.insert("subset_points".into(), f_net.points.len() as u64);
    report.counts.insert("subset_points_with_antipodes".into(), sources);
    report.params.insert("band".into(), band);
    if qc_failed {
        report.notes.push("premise knowingly violated; scan forced".into());
    }
    if let Some(w) = worst {
        report.verdict = if w.margin > tol { Verdict::Violation } else { Verdict::NoViolation };
        report.worst_margin = Some(w.margin);
        let mut dmap = BTreeMap::new();
        dmap.insert("between_pair".into(), w.d12);
        dmap.insert("antipode_to_subset".into(), w.to_subset);
        report.witness = Some(Witness {
            q: q_net.points[w.z2_idx].clone(),
            p: f_net.points[w.z1_idx].clone(),
            partner: None,
            center: None,
            angle: None,
            slope: None,
            margin: w.margin,
            noise: f_net.sample_mesh,
            dists: dmap,
        });
    } else {
        report.notes.push("no near-antipodal pairs in the net".into());
    }
    Ok(report)
}

/// Base positions of subset points in a thin annulus around a cone apex
/// or suspension pole: the subset's arrival directions.
pub fn directions_at_vertex(space: &Space, f_net: &SubsetNet) -> Result<(f64, Vec<f64>)> {
    let mesh = f_net.sample_mesh;
    if mesh <= 0.0 {
        return Err(Error::UnsupportedVertex(
            "direction extraction needs a sampled subset with positive mesh".into(),
        ));
    }
    let (lo, hi) = (2.0 * mesh, 10.0 * mesh);
    let (perimeter, arcs): (f64, Vec<f64>) = match space.constructor() {
        Constructor::Cone { base } => {
            let perimeter = match base.as_ref() {
                Constructor::Circle { perimeter } => *perimeter,
                _ => {
                    return Err(Error::UnsupportedVertex(
                        "vertex directions need a circle base".into(),
                    ))
                }
            };
            let mut arcs = Vec::new();
            for p in &f_net.points {
                if let Point::Cone { r, base } = p {
                    if *r >= lo && *r <= hi {
                        if let Point::Circle { arc } = base.as_ref() {
                            arcs.push(arc.rem_euclid(perimeter));
                        }
                    }
                }
            }
            (perimeter, arcs)
        }
        Constructor::Suspension { base } => {
            let perimeter = match base.as_ref() {
                Constructor::Circle { perimeter } => *perimeter,
                _ => {
                    return Err(Error::UnsupportedVertex(
                        "vertex directions need a circle base".into(),
                    ))
                }
            };
            let mut arcs = Vec::new();
            for p in &f_net.points {
                if let Point::Susp { lat, base } = p {
                    if *lat >= lo && *lat <= hi {
                        if let Point::Circle { arc } = base.as_ref() {
                            arcs.push(arc.rem_euclid(perimeter));
                        }
                    }
                }
            }
            (perimeter, arcs)
        }
        _ => {
            return Err(Error::UnsupportedVertex(format!(
                "{} has no distinguished vertex",
                space.label()
            )))
        }
    };
    if arcs.is_empty() {
        return Err(Error::HypothesisFailed(
            "subset has no points in the annulus around the vertex".into(),
        ));
    }
    let mut sorted = arcs;
    sorted.sort_by(f64::total_cmp);
    let mut dedup: Vec<f64> = Vec::new();
    for a in sorted {
        if dedup.last().map_or(true, |&b| (a - b).abs() > 1e-9) {
            dedup.push(a);
        }
    }
    Ok((perimeter, dedup))
}

/// Is the set of directions in which the subset leaves the vertex itself
/// quasi-convex inside the base circle?
pub fn check_vertex_directions(
    space: &Space,
    f_net: &SubsetNet,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    let (perimeter, arcs) = directions_at_vertex(space, f_net)?;
    let base = Space::new(Constructor::Circle { perimeter })?;
    let dir_points: Vec<Point> = arcs.iter().map(|&arc| Point::Circle { arc }).collect();
    let dir_net = SubsetNet {
        label: format!("{} directions at the vertex", dir_points.len()),
        points: dir_points.clone(),
        sample_mesh: 0.0,
        oracle: Some(SubsetOracle::FiniteSet(dir_points)),
    };
    let res = (perimeter / 256.0).clamp(0.005, 0.1);
    let base_net = crate::nets::build_net(&base, res)?;
    let mut report = check_quasi_convex(&base, &base_net, &dir_net, cfg)?;
    report.check = "vertex_directions".to_string();
    report.space = space.label().to_string();
    report.subset = f_net.label.clone();
    report.params.insert("base_perimeter".into(), perimeter);
    report.counts.insert("directions".into(), arcs.len() as u64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nets::build_net;
    use crate::subsets::build_subset;

    fn susp(perimeter: f64) -> Space {
        Space::new(Constructor::Suspension {
            base: Box::new(Constructor::Circle { perimeter }),
        })
        .unwrap()
    }

    #[test]
    fn waist_subset_obeys_the_quarter_turn_diameter_bound() {
        let s = susp(2.0 * PI);
        let q = build_net(&s, 0.2).unwrap();
        let f = build_subset(&s, "equator", 0.1).unwrap();
        let report = check_diameter_bound(&s, &q, &f, &CheckConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NoViolation);
        // Poles in the net realize the quarter turn exactly.
        assert_eq!(report.params["max_dist"], FRAC_PI_2);
    }

    #[test]
    fn diameter_bound_refuses_non_quasi_convex_subsets() {
        let s = susp(2.0 * PI);
        let q = build_net(&s, 0.2).unwrap();
        let f = build_subset(&s, "isolated", 0.2).unwrap();
        let err = check_diameter_bound(&s, &q, &f, &CheckConfig::default());
        assert!(matches!(err, Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn far_band_of_the_pole_pair_is_equidistant_exactly() {
        let s = susp(PI);
        let q = build_net(&s, 0.15).unwrap();
        let f = build_subset(&s, "poles", 0.15).unwrap();
        let report = check_far_set_constancy(&s, &q, &f, &CheckConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NoViolation);
        // Waist row points sit at exactly a quarter turn from both poles.
        assert_eq!(report.worst_margin.unwrap(), 0.0);
        assert!(report.counts["far_points"] > 10);
    }

    #[test]
    fn pole_distances_sum_to_a_half_turn_everywhere() {
        let s = susp(1.5 * PI);
        let q = build_net(&s, 0.2).unwrap();
        let n = Point::Susp { lat: 0.0, base: Box::new(Point::Circle { arc: 0.0 }) };
        let sp = Point::Susp { lat: PI, base: Box::new(Point::Circle { arc: 0.0 }) };
        let report = check_antipodal_sum(&s, &q, &n, &sp, &CheckConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NoViolation);
        assert!(report.worst_margin.unwrap() < 1e-12);

        let not_antipodal = Point::Susp { lat: 1.0, base: Box::new(Point::Circle { arc: 0.0 }) };
        let err = check_antipodal_sum(&s, &q, &n, &not_antipodal, &CheckConfig::default());
        assert!(matches!(err, Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn hinge_bound_holds_on_the_waist_and_signs_track_angles() {
        let s = susp(2.0 * PI);
        let q = build_net(&s, 0.2).unwrap();
        let f = build_subset(&s, "equator", 0.1).unwrap();
        let report = check_hinge_bound(&s, &q, &f, &CheckConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NoViolation);
        let agree = report.counts["sign_agree"] as f64;
        let disagree = report.counts["sign_disagree"] as f64;
        assert!(agree / (agree + disagree) > 0.95, "agree {agree} disagree {disagree}");
    }

    #[test]
    fn antipodes_of_waist_points_stay_on_the_waist() {
        let s = susp(2.0 * PI);
        let q = build_net(&s, 0.15).unwrap();
        let f = build_subset(&s, "equator", 0.1).unwrap();
        let report =
            check_antipode_closure(&s, &q, &f, &CheckConfig::default(), false).unwrap();
        assert_eq!(report.verdict, Verdict::NoViolation);
        assert!(report.counts["subset_points_with_antipodes"] > 0);
    }

    #[test]
    fn isolated_pair_fails_antipode_closure_only_under_force() {
        let s = susp(2.0 * PI);
        let q = build_net(&s, 0.15).unwrap();
        let f = build_subset(&s, "isolated", 0.15).unwrap();
        let err = check_antipode_closure(&s, &q, &f, &CheckConfig::default(), false);
        assert!(matches!(err, Err(Error::HypothesisFailed(_))));
        let forced = check_antipode_closure(&s, &q, &f, &CheckConfig::default(), true).unwrap();
        assert_eq!(forced.verdict, Verdict::Violation);
        // The waist point's antipode is a quarter turn from the subset.
        assert!(forced.worst_margin.unwrap() > 1.0);
    }

    #[test]
    fn ray_directions_at_the_tip_are_checked_in_the_base() {
        let cone = Space::new(Constructor::Cone {
            base: Box::new(Constructor::Circle { perimeter: 1.5 * PI }),
        })
        .unwrap();
        // Maximally separated rays: direction pair at half the perimeter.
        let good = build_subset(&cone, "cone_rays:0.0,2.3561944901923449", 0.05).unwrap();
        let report = check_vertex_directions(&cone, &good, &CheckConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NoViolation);
        assert_eq!(report.counts["directions"], 2);

        // Nearby rays leave a long outside arc whose midpoints see both
        // directions on one side: not quasi-convex in the base.
        let bad = build_subset(&cone, "cone_rays:0.0,0.8", 0.05).unwrap();
        let report = check_vertex_directions(&cone, &bad, &CheckConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Violation);
    }
}
