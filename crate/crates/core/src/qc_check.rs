//! Convexity-type checks over sampled nets.
//!
//! Every check follows the same contract: scan a deterministic family of
//! configurations, compute a margin per configuration (positive means the
//! property fails there once sampling noise is discounted), and report
//! the worst margin with a reproducible witness. Scans parallelize over
//! independent items but reduce sequentially in net order, so reports are
//! byte-identical at any thread count.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nets::Net;
use crate::spaceforms::comparison_angle_extended;
use crate::spaces::{Point, Space};
use crate::subsets::SubsetNet;
use crate::util::par_map;

/// Shared scan settings.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// User tolerance on margins; values below 1e-6 are raised to it.
    pub tolerance: f64,
    /// Cap on ball centers in per-ball scans.
    pub max_centers: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { tolerance: 1e-6, max_centers: 32 }
    }
}

pub fn effective_tolerance(t: f64) -> f64 {
    t.max(1e-6)
}

/// Ascent-rate threshold for the critical-foot check.
pub const SLOPE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoViolation,
    Violation,
    /// No configuration survived the scan filters; nothing was tested.
    Vacuous,
}

/// Worst configuration found by a scan.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub q: Point,
    pub p: Point,
    #[serde(rename = "r", skip_serializing_if = "Option::is_none")]
    pub partner: Option<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    pub margin: f64,
    pub noise: f64,
    /// Named distances of the configuration, serialized inline.
    #[serde(flatten)]
    pub dists: BTreeMap<String, f64>,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub space: String,
    pub subset: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_margin: Option<f64>,
    pub tolerance: f64,
    pub counts: BTreeMap<String, u64>,
    pub params: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
    pub version: String,
}

/// Engine version stamped into every report document.
pub fn report_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Noise allowance for a comparison angle at `p` between `q` and `r`,
/// from displacing sampled subset points by at most the sample gap.
fn angle_noise(sample_mesh: f64, pq: f64, pr: f64) -> f64 {
    2.0 * sample_mesh * (1.0 / pq + 1.0 / pr)
}

/// First-index argmin of distances from `q` to `pts`.
fn foot_of(space: &Space, pts: &[Point], q: &Point) -> Result<Option<(usize, f64)>> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in pts.iter().enumerate() {
        let d = space.dist(q, p)?;
        match best {
            Some((_, bd)) if d >= bd => {}
            _ => best = Some((i, d)),
        }
    }
    Ok(best)
}

struct WorstTriple {
    margin: f64,
    noise: f64,
    angle: f64,
    q_idx: usize,
    p_idx: usize,
    r_idx: usize,
    pq: f64,
    pr: f64,
    qr: f64,
}

/// Scan all (q, foot, r) triples with q drawn from `q_indices` of the
/// ambient points. The foot is always the nearest point of the whole
/// subset net (first-index argmin), so restricting `partner_indices`
/// can only shrink the set of scanned triples — a clean scan over the
/// full subset majorizes every restricted scan.
fn scan_foot_triples(
    space: &Space,
    q_points: &[Point],
    q_indices: &[usize],
    f_points: &[Point],
    partner_indices: &[usize],
    sample_mesh: f64,
    cutoff: f64,
    k: f64,
) -> Result<(Option<WorstTriple>, u64, u64)> {
    let per_q: Vec<Result<Option<WorstTriple>>> = par_map(q_indices, |&qi| {
        let q = &q_points[qi];
        let mut dists = Vec::with_capacity(f_points.len());
        for p in f_points {
            dists.push(space.dist(q, p)?);
        }
        let mut foot: Option<(usize, f64)> = None;
        for (i, &d) in dists.iter().enumerate() {
            match foot {
                Some((_, bd)) if d >= bd => {}
                _ => foot = Some((i, d)),
            }
        }
        let (p_idx, pq) = match foot {
            Some(f) => f,
            None => return Ok(None),
        };
        if pq <= cutoff {
            return Ok(None);
        }
        let p = &f_points[p_idx];
        let mut best: Option<WorstTriple> = None;
        for &fi in partner_indices {
            if fi == p_idx {
                continue;
            }
            let pr = space.dist(p, &f_points[fi])?;
            if pr <= 1e-12 {
                continue;
            }
            let qr = dists[fi];
            let angle = comparison_angle_extended(k, pq, pr, qr);
            let noise = angle_noise(sample_mesh, pq, pr);
            let margin = angle - FRAC_PI_2 - noise;
            let better = match &best {
                Some(b) => margin > b.margin,
                None => true,
            };
            if better {
                best = Some(WorstTriple {
                    margin,
                    noise,
                    angle,
                    q_idx: qi,
                    p_idx,
                    r_idx: fi,
                    pq,
                    pr,
                    qr,
                });
            }
        }
        Ok(best)
    });

    let mut worst: Option<WorstTriple> = None;
    let mut active = 0u64;
    let mut triples = 0u64;
    for item in per_q {
        if let Some(t) = item? {
            active += 1;
            let self_hit = u64::from(partner_indices.contains(&t.p_idx));
            triples += (partner_indices.len() as u64).saturating_sub(self_hit);
            let better = match &worst {
                Some(w) => t.margin > w.margin,
                None => true,
            };
            if better {
                worst = Some(t);
            }
        }
    }
    Ok((worst, active, triples))
}

fn base_report(
    check: &str,
    space: &Space,
    f_net: &SubsetNet,
    tolerance: f64,
) -> CheckReport {
    CheckReport {
        check: check.to_string(),
        space: space.label().to_string(),
        subset: f_net.label.clone(),
        verdict: Verdict::Vacuous,
        worst_margin: None,
        tolerance,
        counts: BTreeMap::new(),
        params: BTreeMap::new(),
        witness: None,
        notes: Vec::new(),
        version: report_version(),
    }
}

/// Does every point of the space see its nearest subset point at angles
/// of at most a right angle against the rest of the subset?
pub fn check_quasi_convex(
    space: &Space,
    q_net: &Net,
    f_net: &SubsetNet,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    let tol = effective_tolerance(cfg.tolerance);
    let k = space.declared_k();
    let cutoff = (3.0 * f_net.sample_mesh).max(1e-9);
    let q_indices: Vec<usize> = (0..q_net.points.len()).collect();
    let partner_indices: Vec<usize> = (0..f_net.points.len()).collect();

    let (worst, active, triples) = scan_foot_triples(
        space,
        &q_net.points,
        &q_indices,
        &f_net.points,
        &partner_indices,
        f_net.sample_mesh,
        cutoff,
        k,
    )?;

    let mut report = base_report("quasi_convex", space, f_net, tol);
    report.counts.insert("ambient_points".into(), q_net.points.len() as u64);
    report.counts.insert("subset_points".into(), f_net.points.len() as u64);
    report.counts.insert("active_points".into(), active);
    report.counts.insert("triples".into(), triples);
    report.params.insert("curvature".into(), k);
    report.params.insert("ambient_mesh".into(), q_net.mesh);
    report.params.insert("subset_mesh".into(), f_net.sample_mesh);
    report.params.insert("cutoff".into(), cutoff);
    if let Some(w) = worst {
        report.verdict = if w.margin > tol { Verdict::Violation } else { Verdict::NoViolation };
        report.worst_margin = Some(w.margin);
        let mut dists = BTreeMap::new();
        dists.insert("dqp".into(), w.pq);
        dists.insert("dpr".into(), w.pr);
        dists.insert("dqr".into(), w.qr);
        report.witness = Some(Witness {
            q: q_net.points[w.q_idx].clone(),
            p: f_net.points[w.p_idx].clone(),
            partner: Some(f_net.points[w.r_idx].clone()),
            center: None,
            angle: Some(w.angle),
            slope: None,
            margin: w.margin,
            noise: w.noise,
            dists,
        });
    } else {
        report.notes.push("no ambient point survived the distance cutoff".into());
    }
    Ok(report)
}

/// Minimum positive pairwise distance over a leading slice of the subset.
fn min_positive_gap(space: &Space, pts: &[Point]) -> Result<f64> {
    let n = pts.len().min(50);
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = space.dist(&pts[i], &pts[j])?;
            if d > 1e-12 {
                best = best.min(d);
            }
        }
    }
    Ok(best)
}

/// The quasi-convexity scan restricted to metric balls around sampled
/// subset points: ambient points and partner points are confined to each
/// ball, while the foot of an ambient point stays its nearest point in
/// the whole subset net. Every configuration scanned here is therefore
/// also seen by the global scan, so a clean global verdict forces a
/// clean (or vacuous) local one.
pub fn check_local_quasi_convex(
    space: &Space,
    q_net: &Net,
    f_net: &SubsetNet,
    radius: f64,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    if !(radius > 0.0) {
        return Err(Error::InvalidSpec(format!("ball radius {radius} must be positive")));
    }
    let tol = effective_tolerance(cfg.tolerance);
    let k = space.declared_k();
    let cutoff = (3.0 * f_net.sample_mesh).max(1e-9);

    if f_net.points.len() >= 3 && f_net.sample_mesh > 0.0 {
        let gap = min_positive_gap(space, &f_net.points)?;
        if gap.is_finite() && radius <= 2.0 * gap {
            return Err(Error::RadiusTooSmall(format!(
                "radius {radius} at most twice the sample gap {gap}; every ball sees one point"
            )));
        }
    }

    let stride = (f_net.points.len() / cfg.max_centers.max(1)).max(1);
    let centers: Vec<usize> = (0..f_net.points.len()).step_by(stride).collect();

    let mut worst: Option<(WorstTriple, usize)> = None;
    let mut active_total = 0u64;
    let mut triple_total = 0u64;
    let mut balls_with_data = 0u64;
    for &ci in &centers {
        let center = &f_net.points[ci];
        let mut f_local = Vec::new();
        for (i, p) in f_net.points.iter().enumerate() {
            if space.dist(center, p)? <= radius {
                f_local.push(i);
            }
        }
        if f_local.len() < 2 {
            continue;
        }
        let mut q_local = Vec::new();
        for (i, p) in q_net.points.iter().enumerate() {
            if space.dist(center, p)? <= radius {
                q_local.push(i);
            }
        }
        if q_local.is_empty() {
            continue;
        }
        let (w, active, triples) = scan_foot_triples(
            space,
            &q_net.points,
            &q_local,
            &f_net.points,
            &f_local,
            f_net.sample_mesh,
            cutoff,
            k,
        )?;
        if active > 0 {
            balls_with_data += 1;
        }
        active_total += active;
        triple_total += triples;
        if let Some(t) = w {
            let better = match &worst {
                Some((bw, _)) => t.margin > bw.margin,
                None => true,
            };
            if better {
                worst = Some((t, ci));
            }
        }
    }

    let mut report = base_report("local_quasi_convex", space, f_net, tol);
    report.counts.insert("ambient_points".into(), q_net.points.len() as u64);
    report.counts.insert("subset_points".into(), f_net.points.len() as u64);
    report.counts.insert("centers".into(), centers.len() as u64);
    report.counts.insert("balls_with_data".into(), balls_with_data);
    report.counts.insert("active_points".into(), active_total);
    report.counts.insert("triples".into(), triple_total);
    report.params.insert("curvature".into(), k);
    report.params.insert("radius".into(), radius);
    report.params.insert("ambient_mesh".into(), q_net.mesh);
    report.params.insert("subset_mesh".into(), f_net.sample_mesh);
    report.params.insert("cutoff".into(), cutoff);
    if let Some((w, ci)) = worst {
        report.verdict = if w.margin > tol { Verdict::Violation } else { Verdict::NoViolation };
        report.worst_margin = Some(w.margin);
        let mut dists = BTreeMap::new();
        dists.insert("dqp".into(), w.pq);
        dists.insert("dpr".into(), w.pr);
        dists.insert("dqr".into(), w.qr);
        report.witness = Some(Witness {
            q: q_net.points[w.q_idx].clone(),
            p: f_net.points[w.p_idx].clone(),
            partner: Some(f_net.points[w.r_idx].clone()),
            center: Some(f_net.points[ci].clone()),
            angle: Some(w.angle),
            slope: None,
            margin: w.margin,
            noise: w.noise,
            dists,
        });
    } else {
        report.notes.push("no ball produced a scannable configuration".into());
    }
    Ok(report)
}

/// Can the distance to some outside point be increased at a rate above
/// the threshold by stepping away from its nearest subset point?
pub fn check_extremal(
    space: &Space,
    q_net: &Net,
    f_net: &SubsetNet,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    let tol = effective_tolerance(cfg.tolerance);
    let probe_radius = 3.0 * q_net.mesh;
    let band = 6.0 * q_net.mesh;

    // Feet for all ambient points, then probe lists per distinct foot.
    let feet: Vec<Result<Option<(usize, f64)>>> = par_map(&q_net.points, |q| {
        foot_of(space, &f_net.points, q)
    });
    let mut foot_by_q: Vec<Option<(usize, f64)>> = Vec::with_capacity(feet.len());
    for f in feet {
        foot_by_q.push(f?);
    }

    let mut distinct: Vec<usize> = Vec::new();
    for f in foot_by_q.iter().flatten() {
        if f.1 > band && !distinct.contains(&f.0) {
            distinct.push(f.0);
        }
    }
    let probe_lists: Vec<Result<Vec<(usize, f64)>>> = par_map(&distinct, |&p_idx| {
        let p = &f_net.points[p_idx];
        let mut probes = Vec::new();
        for (xi, x) in q_net.points.iter().enumerate() {
            let px = space.dist(p, x)?;
            if px > 1e-12 && px <= probe_radius {
                probes.push((xi, px));
            }
        }
        Ok(probes)
    });
    let mut probes_of: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
    for (rank, list) in probe_lists.into_iter().enumerate() {
        probes_of.insert(distinct[rank], list?);
    }

    struct WorstSlope {
        margin: f64,
        noise: f64,
        slope: f64,
        q_idx: usize,
        p_idx: usize,
        x_idx: usize,
        pq: f64,
        px: f64,
        xq: f64,
    }

    let q_indices: Vec<usize> = (0..q_net.points.len()).collect();
    let per_q: Vec<Result<Option<WorstSlope>>> = par_map(&q_indices, |&qi| {
        let (p_idx, pq) = match foot_by_q[qi] {
            Some(f) => f,
            None => return Ok(None),
        };
        if pq <= band {
            return Ok(None);
        }
        let probes = match probes_of.get(&p_idx) {
            Some(list) => list,
            None => return Ok(None),
        };
        let q = &q_net.points[qi];
        let mut best: Option<WorstSlope> = None;
        for &(xi, px) in probes {
            if xi == qi {
                continue;
            }
            let xq = space.dist(&q_net.points[xi], q)?;
            let slope = (xq - pq) / px;
            let noise = 2.0 * f_net.sample_mesh / px;
            let margin = slope - SLOPE_THRESHOLD - noise;
            let better = match &best {
                Some(b) => margin > b.margin,
                None => true,
            };
            if better {
                best = Some(WorstSlope {
                    margin,
                    noise,
                    slope,
                    q_idx: qi,
                    p_idx,
                    x_idx: xi,
                    pq,
                    px,
                    xq,
                });
            }
        }
        Ok(best)
    });

    let mut worst: Option<WorstSlope> = None;
    let mut active = 0u64;
    let mut probes_used = 0u64;
    for item in per_q {
        if let Some(w) = item? {
            active += 1;
            probes_used += probes_of.get(&w.p_idx).map(|l| l.len() as u64).unwrap_or(0);
            let better = match &worst {
                Some(b) => w.margin > b.margin,
                None => true,
            };
            if better {
                worst = Some(w);
            }
        }
    }

    let mut report = base_report("extremal", space, f_net, tol);
    report.counts.insert("ambient_points".into(), q_net.points.len() as u64);
    report.counts.insert("subset_points".into(), f_net.points.len() as u64);
    report.counts.insert("active_points".into(), active);
    report.counts.insert("probe_pairs".into(), probes_used);
    report.params.insert("ambient_mesh".into(), q_net.mesh);
    report.params.insert("subset_mesh".into(), f_net.sample_mesh);
    report.params.insert("probe_radius".into(), probe_radius);
    report.params.insert("exclusion_band".into(), band);
    report.params.insert("slope_threshold".into(), SLOPE_THRESHOLD);
    if let Some(w) = worst {
        report.verdict = if w.margin > tol { Verdict::Violation } else { Verdict::NoViolation };
        report.worst_margin = Some(w.margin);
        let mut dists = BTreeMap::new();
        dists.insert("dqp".into(), w.pq);
        dists.insert("dpx".into(), w.px);
        dists.insert("dxq".into(), w.xq);
        report.witness = Some(Witness {
            q: q_net.points[w.q_idx].clone(),
            p: f_net.points[w.p_idx].clone(),
            partner: Some(q_net.points[w.x_idx].clone()),
            center: None,
            angle: None,
            slope: Some(w.slope),
            margin: w.margin,
            noise: w.noise,
            dists,
        });
    } else {
        report
            .notes
            .push("no ambient point outside the exclusion band had probes".into());
    }
    Ok(report)
}

/// Do geodesic midpoints of nearby subset pairs stay in the subset?
pub fn check_locally_convex(
    space: &Space,
    f_net: &SubsetNet,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    let tol = effective_tolerance(cfg.tolerance);
    let mesh = f_net.sample_mesh;
    let reach = 4.0 * mesh;
    // Without a closed-form subset distance, midpoint displacement can
    // only be resolved down to the sampling gap.
    let fallback = if f_net.oracle.is_some() { 0.0 } else { 0.75 * mesh };

    let mut report = base_report("locally_convex", space, f_net, tol);
    report.counts.insert("subset_points".into(), f_net.points.len() as u64);
    report.params.insert("subset_mesh".into(), mesh);
    report.params.insert("pair_reach".into(), reach);
    report.params.insert("midpoint_floor".into(), fallback);
    if mesh == 0.0 {
        report.notes.push("exact finite subset has no nearby pairs to bisect".into());
        return Ok(report);
    }

    let mut pairs = Vec::new();
    for i in 0..f_net.points.len() {
        for j in (i + 1)..f_net.points.len() {
            let d = space.dist(&f_net.points[i], &f_net.points[j])?;
            if d > 1e-12 && d <= reach {
                pairs.push((i, j, d));
            }
        }
    }

    struct WorstPair {
        margin: f64,
        i: usize,
        j: usize,
        pr: f64,
        off: f64,
        mid: Point,
    }

    let results: Vec<Result<Option<WorstPair>>> = par_map(&pairs, |&(i, j, d)| {
        let mid = match space.geodesic_point(&f_net.points[i], &f_net.points[j], 0.5) {
            Ok(m) => m,
            Err(Error::AmbiguousGeodesic(_)) | Err(Error::WrongConstructor(_)) => {
                return Ok(None)
            }
            Err(e) => return Err(e),
        };
        let off = match f_net.exact_dist(space, &mid) {
            Some(r) => r?,
            None => f_net.net_dist(space, &mid)?,
        };
        let margin = off - fallback;
        Ok(Some(WorstPair { margin, i, j, pr: d, off, mid }))
    });

    let mut worst: Option<WorstPair> = None;
    let mut bisected = 0u64;
    let mut skipped = 0u64;
    for item in results {
        match item? {
            Some(w) => {
                bisected += 1;
                let better = match &worst {
                    Some(b) => w.margin > b.margin,
                    None => true,
                };
                if better {
                    worst = Some(w);
                }
            }
            None => skipped += 1,
        }
    }
    report.counts.insert("pairs".into(), pairs.len() as u64);
    report.counts.insert("bisected".into(), bisected);
    report.counts.insert("skipped_no_geodesic".into(), skipped);
    if let Some(w) = worst {
        report.verdict = if w.margin > tol { Verdict::Violation } else { Verdict::NoViolation };
        report.worst_margin = Some(w.margin);
        let mut dists = BTreeMap::new();
        dists.insert("dpr".into(), w.pr);
        dists.insert("midpoint_offset".into(), w.off);
        report.witness = Some(Witness {
            q: w.mid,
            p: f_net.points[w.i].clone(),
            partner: Some(f_net.points[w.j].clone()),
            center: None,
            angle: None,
            slope: None,
            margin: w.margin,
            noise: fallback,
            dists,
        });
    } else if pairs.is_empty() {
        report.notes.push("no subset pairs within bisection reach".into());
    } else {
        report.notes.push("no pair admitted a computable midpoint".into());
    }
    Ok(report)
}

/// All four verdicts for one space/subset pair.
pub fn classify(
    space: &Space,
    q_net: &Net,
    f_net: &SubsetNet,
    radius: f64,
    cfg: &CheckConfig,
) -> Result<BTreeMap<String, Verdict>> {
    let mut out = BTreeMap::new();
    out.insert(
        "quasi_convex".to_string(),
        check_quasi_convex(space, q_net, f_net, cfg)?.verdict,
    );
    let lqc = match check_local_quasi_convex(space, q_net, f_net, radius, cfg) {
        Ok(r) => r.verdict,
        Err(Error::RadiusTooSmall(_)) => Verdict::Vacuous,
        Err(e) => return Err(e),
    };
    out.insert("local_quasi_convex".to_string(), lqc);
    out.insert("extremal".to_string(), check_extremal(space, q_net, f_net, cfg)?.verdict);
    out.insert(
        "locally_convex".to_string(),
        check_locally_convex(space, f_net, cfg)?.verdict,
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nets::build_net;
    use crate::spaces::Constructor;
    use crate::subsets::build_subset;
    use std::f64::consts::PI;

    fn susp(perimeter: f64) -> Space {
        Space::new(Constructor::Suspension {
            base: Box::new(Constructor::Circle { perimeter }),
        })
        .unwrap()
    }

    #[test]
    fn pole_pair_is_quasi_convex_with_zero_worst_margin() {
        let s = susp(2.0 * PI);
        let q = build_net(&s, 0.2).unwrap();
        let f = build_subset(&s, "poles", 0.2).unwrap();
        let report = check_quasi_convex(&s, &q, &f, &CheckConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NoViolation);
        // Every angle at the near pole against its antipode closes to zero,
        // so the worst margin is exactly a negative right angle.
        assert_eq!(report.worst_margin.unwrap(), -FRAC_PI_2);
    }

    #[test]
    fn pole_plus_waist_point_fails_quasi_convexity_by_a_right_angle() {
        let s = susp(2.0 * PI);
        let q = build_net(&s, 0.2).unwrap();
        let f = build_subset(&s, "isolated", 0.2).unwrap();
        let report = check_quasi_convex(&s, &q, &f, &CheckConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Violation);
        let worst = report.worst_margin.unwrap();
        assert!(
            (worst - FRAC_PI_2).abs() < 0.05,
            "expected near right-angle excess, got {worst}"
        );
        let w = report.witness.unwrap();
        assert!(w.angle.unwrap() > FRAC_PI_2);
    }

    #[test]
    fn equator_is_quasi_convex_and_locally_convex() {
        let s = susp(2.0 * PI);
        let q = build_net(&s, 0.2).unwrap();
        let f = build_subset(&s, "equator", 0.1).unwrap();
        let cfg = CheckConfig::default();
        let qc = check_quasi_convex(&s, &q, &f, &cfg).unwrap();
        assert_eq!(qc.verdict, Verdict::NoViolation);
        let lc = check_locally_convex(&s, &f, &cfg).unwrap();
        assert_eq!(lc.verdict, Verdict::NoViolation);
        // Midpoints of waist pairs stay on the waist exactly.
        assert_eq!(lc.worst_margin.unwrap(), 0.0);
    }

    #[test]
    fn half_waist_arc_fails_the_ball_scan_at_its_endpoints() {
        let s = susp(2.0 * PI);
        let q = build_net(&s, 0.15).unwrap();
        let f = build_subset(&s, "half_equator", 0.05).unwrap();
        let cfg = CheckConfig { tolerance: 1e-6, max_centers: 40 };
        let lqc = check_local_quasi_convex(&s, &q, &f, 0.8, &cfg).unwrap();
        assert_eq!(lqc.verdict, Verdict::Violation);
        // Just past an endpoint the foot is the endpoint and the arc bends
        // away at a straight angle: margin close to a right angle.
        assert!(lqc.worst_margin.unwrap() > 1.0);
        let lc = check_locally_convex(&s, &f, &cfg).unwrap();
        assert_eq!(lc.verdict, Verdict::NoViolation);
    }

    #[test]
    fn tiny_balls_are_rejected_not_reported() {
        let s = susp(2.0 * PI);
        let q = build_net(&s, 0.3).unwrap();
        let f = build_subset(&s, "equator", 0.3).unwrap();
        let err = check_local_quasi_convex(&s, &q, &f, 0.1, &CheckConfig::default());
        assert!(matches!(err, Err(Error::RadiusTooSmall(_))));
    }

    #[test]
    fn waist_circle_is_extremal_but_poles_see_no_false_slopes() {
        let s = susp(PI);
        let q = build_net(&s, 0.1).unwrap();
        let f = build_subset(&s, "poles", 0.1).unwrap();
        let report = check_extremal(&s, &q, &f, &CheckConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NoViolation);
        let worst = report.worst_margin.unwrap();
        assert!(worst < -0.05, "slope margin should be clearly negative: {worst}");
    }

    #[test]
    fn wide_suspension_poles_fail_extremality() {
        let s = susp(1.5 * PI);
        let q = build_net(&s, 0.1).unwrap();
        let f = build_subset(&s, "poles", 0.1).unwrap();
        let report = check_extremal(&s, &q, &f, &CheckConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Violation);
        let w = report.witness.unwrap();
        // Away from the foot the distance to q climbs at about
        // -cos(3pi/4) before curvature corrections.
        assert!(w.slope.unwrap() > 0.6, "slope {}", w.slope.unwrap());
    }

    #[test]
    fn reports_serialize_identically_across_runs() {
        let s = susp(2.0 * PI);
        let q = build_net(&s, 0.25).unwrap();
        let f = build_subset(&s, "equator", 0.2).unwrap();
        let cfg = CheckConfig::default();
        let a = check_quasi_convex(&s, &q, &f, &cfg).unwrap().to_json();
        let b = check_quasi_convex(&s, &q, &f, &cfg).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"verdict\": \"no_violation\""));
    }
}
