//! Discrete chain analysis: energy minimization over candidate nets and
//! the pointwise regularity tests a well-behaved chain must pass.
//!
//! A chain is a finite point sequence with pinned endpoints. Its energy
//! is the segment count times the sum of squared step lengths, so among
//! chains with the same endpoints and step count, straighter and more
//! evenly spaced is cheaper.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qc_check::{effective_tolerance, CheckReport, Verdict, Witness};
use crate::spaceforms::comparison_angle_extended;
use crate::spaces::{Constructor, Point, Space};
use crate::util::par_map;

#[derive(Debug, Clone)]
pub struct Chain {
    pub points: Vec<Point>,
}

impl Chain {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidSpec("a chain needs at least two points".into()));
        }
        Ok(Self { points })
    }

    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }
}

/// Segment count times the sum of squared step lengths.
pub fn chain_energy(space: &Space, chain: &Chain) -> Result<f64> {
    let m = chain.segments() as f64;
    let mut sum = 0.0;
    for w in chain.points.windows(2) {
        let d = space.dist(&w[0], &w[1])?;
        sum += d * d;
    }
    Ok(m * sum)
}

fn local_cost(space: &Space, prev: &Point, x: &Point, next: &Point) -> Result<f64> {
    let a = space.dist(prev, x)?;
    let b = space.dist(x, next)?;
    Ok(a * a + b * b)
}

/// Coordinate-descent sweeps: each interior vertex moves to the candidate
/// point minimizing its two adjacent squared steps, in order, until a full
/// sweep changes nothing. Returns the chain, sweeps used, and total moves.
pub fn minimize_chain(
    space: &Space,
    candidates: &[Point],
    chain: &Chain,
    max_sweeps: usize,
) -> Result<(Chain, u64, u64)> {
    if candidates.is_empty() {
        return Err(Error::InvalidSpec("empty candidate net".into()));
    }
    let mut pts = chain.points.clone();
    let mut total_moves = 0u64;
    let mut sweeps = 0u64;
    for _ in 0..max_sweeps {
        sweeps += 1;
        let mut moved = false;
        for i in 1..pts.len() - 1 {
            let current = local_cost(space, &pts[i - 1], &pts[i], &pts[i + 1])?;
            let mut best_cost = current;
            let mut best: Option<usize> = None;
            for (ci, cand) in candidates.iter().enumerate() {
                let cost = local_cost(space, &pts[i - 1], cand, &pts[i + 1])?;
                if cost < best_cost {
                    best_cost = cost;
                    best = Some(ci);
                }
            }
            if let Some(ci) = best {
                pts[i] = candidates[ci].clone();
                moved = true;
                total_moves += 1;
            }
        }
        if !moved {
            break;
        }
    }
    Ok((Chain { points: pts }, sweeps, total_moves))
}

/// Largest strict improvement any single interior vertex could still make
/// against the candidate net. Exactly zero for a stationary chain.
pub fn stationarity_margin(space: &Space, candidates: &[Point], chain: &Chain) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 1..chain.points.len() - 1 {
        let current = local_cost(space, &chain.points[i - 1], &chain.points[i], &chain.points[i + 1])?;
        let mut best = current;
        for cand in candidates {
            best = best.min(local_cost(space, &chain.points[i - 1], cand, &chain.points[i + 1])?);
        }
        worst = worst.max(current - best);
    }
    Ok(worst)
}

fn chain_report(check: &str, space: &Space, chain: &Chain, tol: f64) -> CheckReport {
    CheckReport {
        check: check.to_string(),
        space: space.label().to_string(),
        subset: format!("chain of {} points", chain.points.len()),
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

/// Squared-distance second differences along the chain, tested against
/// the step bound for every reference point.
///
/// With f(x) = d(x, ref)^2, a straight evenly spaced chain turns
/// f(back) - 2 f(here) + f(fwd) into exactly the sum of the two squared
/// steps; a chain that curves toward some reference exceeds it.
pub fn check_second_difference(
    space: &Space,
    chain: &Chain,
    refs: &[Point],
    tolerance: f64,
) -> Result<CheckReport> {
    let tol = effective_tolerance(tolerance);
    let mut report = chain_report("chain_second_difference", space, chain, tol);
    if chain.points.len() < 3 {
        report.notes.push("chain has no interior vertices".into());
        return Ok(report);
    }
    if refs.is_empty() {
        report.notes.push("no reference points supplied".into());
        return Ok(report);
    }

    struct Worst {
        margin: f64,
        i: usize,
        r_idx: usize,
        lhs: f64,
        rhs: f64,
    }
    let interior: Vec<usize> = (1..chain.points.len() - 1).collect();
    let per_vertex: Vec<Result<Option<Worst>>> = par_map(&interior, |&i| {
        let back = space.dist(&chain.points[i - 1], &chain.points[i])?;
        let fwd = space.dist(&chain.points[i], &chain.points[i + 1])?;
        let rhs = back * back + fwd * fwd;
        let mut best: Option<Worst> = None;
        for (r_idx, r) in refs.iter().enumerate() {
            let fb = space.dist(&chain.points[i - 1], r)?;
            let fh = space.dist(&chain.points[i], r)?;
            let ff = space.dist(&chain.points[i + 1], r)?;
            let lhs = fb * fb - 2.0 * fh * fh + ff * ff;
            let margin = lhs - rhs;
            let better = match &best {
                Some(b) => margin > b.margin,
                None => true,
            };
            if better {
                best = Some(Worst { margin, i, r_idx, lhs, rhs });
            }
        }
        Ok(best)
    });

    let mut worst: Option<Worst> = None;
    for item in per_vertex {
        if let Some(w) = item? {
            let better = match &worst {
                Some(b) => w.margin > b.margin,
                None => true,
            };
            if better {
                worst = Some(w);
            }
        }
    }
    report.counts.insert("interior_vertices".into(), interior.len() as u64);
    report.counts.insert("reference_points".into(), refs.len() as u64);
    report
        .counts
        .insert("comparisons".into(), (interior.len() * refs.len()) as u64);
    if let Some(w) = worst {
        report.verdict = if w.margin > tol { Verdict::Violation } else { Verdict::NoViolation };
        report.worst_margin = Some(w.margin);
        let mut dists = BTreeMap::new();
        dists.insert("lhs".into(), w.lhs);
        dists.insert("rhs".into(), w.rhs);
        report.witness = Some(Witness {
            q: refs[w.r_idx].clone(),
            p: chain.points[w.i].clone(),
            partner: Some(chain.points[w.i + 1].clone()),
            center: None,
            angle: None,
            slope: None,
            margin: w.margin,
            noise: 0.0,
            dists,
        });
    }
    Ok(report)
}

/// Backward and forward comparison angles at each interior vertex against
/// every reference point must not sum past a straight angle.
pub fn check_angle_comparison(
    space: &Space,
    chain: &Chain,
    refs: &[Point],
    tolerance: f64,
) -> Result<CheckReport> {
    let tol = effective_tolerance(tolerance);
    let k = space.declared_k();
    let mut report = chain_report("chain_vertex_angles", space, chain, tol);
    if chain.points.len() < 3 {
        report.notes.push("chain has no interior vertices".into());
        return Ok(report);
    }
    if refs.is_empty() {
        report.notes.push("no reference points supplied".into());
        return Ok(report);
    }

    struct Worst {
        margin: f64,
        i: usize,
        r_idx: usize,
        back: f64,
        fwd: f64,
    }
    let interior: Vec<usize> = (1..chain.points.len() - 1).collect();
    let per_vertex: Vec<Result<Option<Worst>>> = par_map(&interior, |&i| {
        let sb = space.dist(&chain.points[i - 1], &chain.points[i])?;
        let sf = space.dist(&chain.points[i], &chain.points[i + 1])?;
        let mut best: Option<Worst> = None;
        for (r_idx, r) in refs.iter().enumerate() {
            let pr = space.dist(&chain.points[i], r)?;
            if pr <= 1e-9 {
                continue;
            }
            let ob = space.dist(&chain.points[i - 1], r)?;
            let of = space.dist(&chain.points[i + 1], r)?;
            let back = comparison_angle_extended(k, pr, sb, ob);
            let fwd = comparison_angle_extended(k, pr, sf, of);
            let margin = back + fwd - PI;
            let better = match &best {
                Some(b) => margin > b.margin,
                None => true,
            };
            if better {
                best = Some(Worst { margin, i, r_idx, back, fwd });
            }
        }
        Ok(best)
    });

    let mut worst: Option<Worst> = None;
    for item in per_vertex {
        if let Some(w) = item? {
            let better = match &worst {
                Some(b) => w.margin > b.margin,
                None => true,
            };
            if better {
                worst = Some(w);
            }
        }
    }
    report.counts.insert("interior_vertices".into(), interior.len() as u64);
    report.counts.insert("reference_points".into(), refs.len() as u64);
    report.params.insert("curvature".into(), k);
    if let Some(w) = worst {
        report.verdict = if w.margin > tol { Verdict::Violation } else { Verdict::NoViolation };
        report.worst_margin = Some(w.margin);
        let mut dists = BTreeMap::new();
        dists.insert("angle_back".into(), w.back);
        dists.insert("angle_fwd".into(), w.fwd);
        report.witness = Some(Witness {
            q: refs[w.r_idx].clone(),
            p: chain.points[w.i].clone(),
            partner: Some(chain.points[w.i + 1].clone()),
            center: None,
            angle: Some(w.back + w.fwd),
            slope: None,
            margin: w.margin,
            noise: 0.0,
            dists,
        });
    } else {
        report.notes.push("all reference points coincide with chain vertices".into());
    }
    Ok(report)
}

#[derive(Debug, Serialize)]
pub struct EnergyRow {
    pub segments: usize,
    pub energy: f64,
    /// |energy - squared arc length|, the distance to the continuum limit.
    pub gap: f64,
    pub sweeps: u64,
    pub stationarity: f64,
}

#[derive(Debug, Serialize)]
pub struct EnergyTable {
    pub space: String,
    pub arc: f64,
    pub divisions: usize,
    pub reference: f64,
    pub rows: Vec<EnergyRow>,
}

impl EnergyTable {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }
}

/// Minimal chain energies along a boundary arc of a flat disc, one row
/// per requested segment count.
///
/// Candidate vertices are the `divisions + 1` equal subdivisions of the
/// arc; chains run between the arc endpoints. Each row's chain is
/// initialized at equal spacing, swept to stationarity, and reported with
/// its residual stationarity margin (zero once converged).
pub fn energy_table(
    radius: f64,
    arc: f64,
    segment_counts: &[usize],
    divisions: usize,
) -> Result<EnergyTable> {
    if !(radius > 0.0) || !(arc > 0.0) || arc > 1.9 * PI {
        return Err(Error::InvalidSpec("need radius > 0 and arc in (0, 1.9 pi)".into()));
    }
    if divisions < 8 || divisions > 100_000 {
        return Err(Error::InvalidSpec("divisions outside [8, 100000]".into()));
    }
    let space = Space::new(Constructor::FlatDisc { radius })?;
    let candidates: Vec<Point> = (0..=divisions)
        .map(|j| Point::Cap { r: radius, arc: j as f64 * arc / divisions as f64 })
        .collect();

    let mut rows = Vec::new();
    for &m in segment_counts {
        if m < 2 || m > divisions {
            return Err(Error::InvalidSpec(format!(
                "segment count {m} outside [2, {divisions}]"
            )));
        }
        let init: Vec<Point> = (0..=m)
            .map(|j| candidates[(j * divisions) / m].clone())
            .collect();
        let chain = Chain::new(init)?;
        let (min_chain, sweeps, _) = minimize_chain(&space, &candidates, &chain, 200)?;
        let energy = chain_energy(&space, &min_chain)?;
        let stationarity = stationarity_margin(&space, &candidates, &min_chain)?;
        rows.push(EnergyRow { segments: m, energy, gap: 0.0, sweeps, stationarity });
    }
    // Chain energies approach the squared arc length from below as the
    // segment count grows; the gap measures the remaining distance.
    let reference = (radius * arc) * (radius * arc);
    for row in &mut rows {
        row.gap = (reference - row.energy).abs();
    }
    Ok(EnergyTable {
        space: space.label().to_string(),
        arc,
        divisions,
        reference,
        rows,
    })
}

/// Seed a chain through the candidate net between two endpoints: each
/// interior vertex starts at the candidate nearest the corresponding
/// point of the direct geodesic. When that geodesic is ambiguous, the
/// vertex starts at the candidate that best splits the endpoint
/// distances instead.
pub fn plan_chain(
    space: &Space,
    candidates: &[Point],
    from: &Point,
    to: &Point,
    m: usize,
) -> Result<Chain> {
    if m < 1 {
        return Err(Error::InvalidSpec("need at least one segment".into()));
    }
    if candidates.is_empty() {
        return Err(Error::InvalidSpec("empty candidate net".into()));
    }
    let a = crate::nets::nearest_index(space, candidates, from)?.expect("nonempty");
    let b = crate::nets::nearest_index(space, candidates, to)?.expect("nonempty");
    let (pa, pb) = (&candidates[a], &candidates[b]);
    let total = space.dist(pa, pb)?;
    let mut pts = vec![pa.clone()];
    for j in 1..m {
        let t = j as f64 / m as f64;
        let idx = match space.geodesic_point(pa, pb, t) {
            Ok(g) => crate::nets::nearest_index(space, candidates, &g)?.expect("nonempty"),
            Err(Error::AmbiguousGeodesic(_)) => {
                let mut best = (0usize, f64::INFINITY);
                for (i, c) in candidates.iter().enumerate() {
                    let score = (space.dist(c, pa)? - t * total).abs()
                        + (space.dist(c, pb)? - (1.0 - t) * total).abs();
                    if score < best.1 {
                        best = (i, score);
                    }
                }
                best.0
            }
            Err(e) => return Err(e),
        };
        pts.push(candidates[idx].clone());
    }
    pts.push(pb.clone());
    Chain::new(pts)
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub check: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct ChainDocument {
    pub points: Vec<Point>,
    pub params: BTreeMap<String, f64>,
    pub energy: f64,
    pub sweeps: u64,
    pub stationarity_margin: f64,
    pub certificates: Vec<Certificate>,
    pub version: String,
}

impl ChainDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

/// Plan, minimize, and document a chain. With reference points given,
/// the document carries certificates from both regularity tests.
pub fn minimize_and_document(
    space: &Space,
    candidates: &[Point],
    from: &Point,
    to: &Point,
    m: usize,
    refs: Option<&[Point]>,
    tolerance: f64,
) -> Result<(Chain, ChainDocument)> {
    let init = plan_chain(space, candidates, from, to, m)?;
    let (chain, sweeps, moves) = minimize_chain(space, candidates, &init, 400)?;
    let energy = chain_energy(space, &chain)?;
    let stationarity = stationarity_margin(space, candidates, &chain)?;
    let mut params = BTreeMap::new();
    params.insert("segments".into(), m as f64);
    params.insert("candidates".into(), candidates.len() as f64);
    params.insert("moves".into(), moves as f64);
    params.insert("tolerance".into(), effective_tolerance(tolerance));
    let mut certificates = Vec::new();
    if let Some(refs) = refs {
        for report in [
            check_second_difference(space, &chain, refs, tolerance)?,
            check_angle_comparison(space, &chain, refs, tolerance)?,
        ] {
            certificates.push(Certificate {
                check: report.check,
                verdict: report.verdict,
                margin: report.worst_margin,
            });
        }
    }
    let doc = ChainDocument {
        points: chain.points.clone(),
        params,
        energy,
        sweeps,
        stationarity_margin: stationarity,
        certificates,
        version: crate::qc_check::report_version(),
    };
    Ok((chain, doc))
}
