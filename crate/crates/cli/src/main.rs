//! Command-line front end for the qcgeo verification engine.
//!
//! Exit codes: 0 when the requested check finds no violation (or values
//! match), 1 when a violation or mismatch is found (the report is still
//! written), 2 on usage or input errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcgeo::qc_check::{
    check_extremal, check_local_quasi_convex, check_locally_convex, check_quasi_convex,
    report_version, CheckConfig, CheckReport, Verdict,
};
use qcgeo::theorems::{
    check_antipodal_sum, check_antipode_closure, check_diameter_bound, check_far_set_constancy,
    check_hinge_bound, check_vertex_directions,
};
use qcgeo::util::fmt_sig;
use qcgeo::{comparison_angle, Error, Result, Space, TriangleSides};

#[derive(Parser)]
#[command(
    name = "qcgeo",
    version,
    about = "Verification engine for comparison geometry in spaces with a curvature lower bound"
)]
struct Cli {
    /// Worker threads for parallel scans (default: all cores). Results
    /// are identical for every setting.
    #[arg(long, global = true)]
    parallel: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Model-surface comparison angle from three side lengths.
    Angle(AngleArgs),
    /// Distance between two points of a space.
    Dist(DistArgs),
    /// Run a convexity or criticality check on a subset of a space.
    Check(CheckArgs),
    /// Minimize a discrete chain in a subset and certify its regularity.
    Qgeo(QgeoArgs),
    /// Minimal chain energies along a circular arc, one row per segment count.
    Smtable(SmtableArgs),
    /// Run a named structural verification on a subset of a space.
    Verify(VerifyArgs),
    /// The built-in example catalog.
    #[command(subcommand)]
    Zoo(ZooCommand),
}

#[derive(Args)]
struct AngleArgs {
    /// Curvature of the model surface.
    #[arg(long, allow_hyphen_values = true)]
    k: f64,
    /// First side at the corner.
    #[arg(long)]
    s1: f64,
    /// Second side at the corner.
    #[arg(long)]
    s2: f64,
    /// Side opposite the corner.
    #[arg(long)]
    opp: f64,
}

#[derive(Args)]
struct DistArgs {
    /// Space description file.
    #[arg(long)]
    space: PathBuf,
    /// First point, as inline JSON.
    #[arg(long)]
    p: String,
    /// Second point, as inline JSON.
    #[arg(long)]
    q: String,
}

#[derive(Copy, Clone, ValueEnum)]
#[value(rename_all = "lower")]
enum CheckKind {
    /// Quasi-convexity: comparison angles at nearest subset points.
    Qc,
    /// The same test restricted to metric balls around subset centers.
    Lqc,
    /// Criticality of nearest-point distance functions.
    Extremal,
    /// Midpoints of short subset chords stay in the subset.
    Convex,
}

#[derive(Args)]
struct CheckArgs {
    /// Which check to run.
    #[arg(value_enum)]
    kind: CheckKind,
    /// Space description file.
    #[arg(long)]
    space: PathBuf,
    /// Subset: a builder name (with optional :args) or a file. Falls back
    /// to the subset bundled in the space file.
    #[arg(long)]
    subset: Option<String>,
    /// Sampling resolution for ambient and subset nets.
    #[arg(long, default_value_t = 0.1)]
    resolution: f64,
    /// Violation tolerance (floored at 1e-6).
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Recorded in the report; sampling is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ball radius for the local check.
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
    /// Cap on ball centers for the local check.
    #[arg(long, default_value_t = 32)]
    max_centers: usize,
    /// Cap on ambient sample points.
    #[arg(long, default_value_t = 5000)]
    cap: usize,
    /// Report file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QgeoArgs {
    /// Space description file.
    #[arg(long)]
    space: PathBuf,
    /// Subset supplying the candidate vertices.
    #[arg(long)]
    subset: Option<String>,
    /// Start point, as inline JSON.
    #[arg(long)]
    from: String,
    /// End point, as inline JSON.
    #[arg(long)]
    to: String,
    /// Number of chain segments.
    #[arg(long)]
    m: usize,
    /// Also certify the minimized chain against both regularity tests.
    #[arg(long)]
    certify: bool,
    /// Sampling resolution for the subset (and reference) nets.
    #[arg(long, default_value_t = 0.1)]
    resolution: f64,
    /// Certification tolerance; defaults to three sampling gaps.
    #[arg(long)]
    tol: Option<f64>,
    /// Recorded in the document; sampling is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Chain document file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SmtableArgs {
    /// Comma-separated segment counts.
    #[arg(long, default_value = "4,8,16,32")]
    m: String,
    /// Disc radius.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Boundary arc angle in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    arc: f64,
    /// Equal subdivisions of the arc used as candidate vertices; must be
    /// divisible by every segment count.
    #[arg(long, default_value_t = 960)]
    divisions: usize,
    /// CSV file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
#[value(rename_all = "lower")]
enum VerifyKind {
    /// Distances to a quasi-convex subset stay within a quarter turn.
    C3,
    /// The far set of a subset sits at constant distance from it.
    Prop42,
    /// Distances to the two ends of a diameter sum to the diameter.
    Lemma43,
    /// Right-triangle bound at the nearest subset point.
    Lemma44,
    /// Antipodes of quasi-convex subsets stay inside the subset.
    Prop22,
    /// Directions into a subset at a cone point form a quasi-convex arc set.
    C1vertex,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which verification to run.
    #[arg(value_enum)]
    kind: VerifyKind,
    /// Space description file.
    #[arg(long)]
    space: PathBuf,
    /// Subset: a builder name (with optional :args) or a file. Falls back
    /// to the subset bundled in the space file.
    #[arg(long)]
    subset: Option<String>,
    /// Sampling resolution for ambient and subset nets.
    #[arg(long, default_value_t = 0.1)]
    resolution: f64,
    /// Violation tolerance (floored at 1e-6).
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Recorded in the report; sampling is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run the scan even when the check's premise fails on this subset.
    #[arg(long)]
    force: bool,
    /// Cap on ambient sample points.
    #[arg(long, default_value_t = 5000)]
    cap: usize,
    /// Report file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ZooCommand {
    /// List the catalog: one line per scenario with its claim.
    List,
    /// Run one scenario, or all of them, against expected verdicts.
    Run(ZooRunArgs),
}

#[derive(Args)]
struct ZooRunArgs {
    /// Scenario id, or "all".
    name: String,
    /// Scales every scenario's tuned sampling resolutions by r / 0.1.
    #[arg(long, default_value_t = 0.1)]
    resolution: f64,
    /// Recorded in the reports; sampling is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for per-scenario reports and the summary CSV; summary
    /// goes to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.parallel {
        if n == 0 {
            eprintln!("error: --parallel must be at least 1");
            return ExitCode::from(2);
        }
        // Ignore failure: the global pool may already exist in tests.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Angle(a) => cmd_angle(a),
        Command::Dist(a) => cmd_dist(a),
        Command::Check(a) => cmd_check(a),
        Command::Qgeo(a) => cmd_qgeo(a),
        Command::Smtable(a) => cmd_smtable(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Zoo(ZooCommand::List) => cmd_zoo_list(),
        Command::Zoo(ZooCommand::Run(a)) => cmd_zoo_run(a),
    }
}

fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::InvalidSpec(format!("--{name} must be positive, got {value}")));
    }
    Ok(())
}

/// Print to standard output, treating a closed pipe as a normal end of
/// output rather than an error.
fn say(text: &str) -> Result<()> {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(e.into()),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            std::fs::write(path, text)?;
        }
        None => say(text)?,
    }
    Ok(())
}

fn verdict_exit(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Violation => 1,
        Verdict::NoViolation | Verdict::Vacuous => 0,
    }
}

/// Load the space and resolve the subset from the flag or the bundled
/// entry, sampling both at the given resolution.
fn load_with_subset(
    space_path: &Path,
    subset: &Option<String>,
    resolution: f64,
) -> Result<(Space, qcgeo::subsets::SubsetNet)> {
    let (space, bundled) = qcgeo::files::load_space(space_path)?;
    let f_net = match subset {
        Some(arg) => qcgeo::files::subset_from_arg(&space, arg, resolution)?,
        None => match &bundled {
            Some(entry) => qcgeo::files::resolve_subset(&space, entry, resolution)?,
            None => {
                return Err(Error::InvalidSpec(
                    "no --subset given and the space file bundles none".into(),
                ))
            }
        },
    };
    Ok((space, f_net))
}

fn ambient_net(space: &Space, resolution: f64, cap: usize) -> Result<qcgeo::nets::Net> {
    let net = qcgeo::nets::build_net(space, resolution)?;
    if net.points.len() > cap {
        return Err(Error::BudgetExceeded(format!(
            "ambient net has {} points, cap is {cap}; raise --cap or coarsen --resolution",
            net.points.len()
        )));
    }
    Ok(net)
}

/// Stamp the resolved run configuration into a report before it is written.
fn stamp(report: &mut CheckReport, entries: &[(&str, f64)]) {
    for (key, value) in entries {
        report.params.insert((*key).to_string(), *value);
    }
}

fn cmd_angle(a: AngleArgs) -> Result<u8> {
    let angle = comparison_angle(a.k, TriangleSides::new(a.s1, a.s2, a.opp))?;
    say(&format!("{}\n", fmt_sig(angle, 12)))?;
    Ok(0)
}

fn cmd_dist(a: DistArgs) -> Result<u8> {
    let (space, _) = qcgeo::files::load_space(&a.space)?;
    let p = qcgeo::files::parse_point(&a.p)?;
    let q = qcgeo::files::parse_point(&a.q)?;
    let d = space.dist(&p, &q)?;
    say(&format!("{}\n", fmt_sig(d, 12)))?;
    Ok(0)
}

fn cmd_check(a: CheckArgs) -> Result<u8> {
    ensure_positive("resolution", a.resolution)?;
    ensure_positive("radius", a.radius)?;
    if a.tol < 0.0 {
        return Err(Error::InvalidSpec(format!("--tol must be nonnegative, got {}", a.tol)));
    }
    let (space, f_net) = load_with_subset(&a.space, &a.subset, a.resolution)?;
    let cfg = CheckConfig { tolerance: a.tol, max_centers: a.max_centers };
    let mut report = match a.kind {
        CheckKind::Qc => {
            let q_net = ambient_net(&space, a.resolution, a.cap)?;
            check_quasi_convex(&space, &q_net, &f_net, &cfg)?
        }
        CheckKind::Lqc => {
            let q_net = ambient_net(&space, a.resolution, a.cap)?;
            check_local_quasi_convex(&space, &q_net, &f_net, a.radius, &cfg)?
        }
        CheckKind::Extremal => {
            let q_net = ambient_net(&space, a.resolution, a.cap)?;
            check_extremal(&space, &q_net, &f_net, &cfg)?
        }
        CheckKind::Convex => check_locally_convex(&space, &f_net, &cfg)?,
    };
    stamp(&mut report, &[("resolution", a.resolution), ("seed", a.seed as f64)]);
    if matches!(a.kind, CheckKind::Lqc) {
        stamp(&mut report, &[("radius", a.radius)]);
    }
    emit(&a.out, &report.to_json())?;
    Ok(verdict_exit(report.verdict))
}

fn cmd_qgeo(a: QgeoArgs) -> Result<u8> {
    ensure_positive("resolution", a.resolution)?;
    if a.m < 1 {
        return Err(Error::InvalidSpec("--m must be at least 1".into()));
    }
    let (space, f_net) = load_with_subset(&a.space, &a.subset, a.resolution)?;
    let from = qcgeo::files::parse_point(&a.from)?;
    let to = qcgeo::files::parse_point(&a.to)?;
    let tolerance = match a.tol {
        Some(t) => {
            ensure_positive("tol", t)?;
            t
        }
        None => (3.0 * f_net.sample_mesh).max(1e-9),
    };
    let refs_net;
    let refs: Option<&[qcgeo::Point]> = if a.certify {
        refs_net = qcgeo::nets::build_net(&space, a.resolution)?;
        Some(&refs_net.points)
    } else {
        None
    };
    let (_, mut doc) =
        qcgeo::qgeo::minimize_and_document(&space, &f_net.points, &from, &to, a.m, refs, tolerance)?;
    doc.params.insert("resolution".into(), a.resolution);
    doc.params.insert("seed".into(), a.seed as f64);
    emit(&a.out, &doc.to_json())?;
    let worst = doc
        .certificates
        .iter()
        .map(|c| verdict_exit(c.verdict))
        .max()
        .unwrap_or(0);
    Ok(worst)
}

fn cmd_smtable(a: SmtableArgs) -> Result<u8> {
    ensure_positive("radius", a.radius)?;
    ensure_positive("arc", a.arc)?;
    let mut counts = Vec::new();
    for part in a.m.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let n: usize = part
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("--m entry {part:?} is not an integer")))?;
        counts.push(n);
    }
    if counts.is_empty() {
        return Err(Error::InvalidSpec("--m lists no segment counts".into()));
    }
    let table = qcgeo::qgeo::energy_table(a.radius, a.arc, &counts, a.divisions)?;
    let mut csv = String::from("m,S_m,L2,gap\n");
    for row in &table.rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            row.segments, row.energy, table.reference, row.gap
        ));
    }
    emit(&a.out, &csv)?;
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    ensure_positive("resolution", a.resolution)?;
    if a.tol < 0.0 {
        return Err(Error::InvalidSpec(format!("--tol must be nonnegative, got {}", a.tol)));
    }
    let (space, f_net) = load_with_subset(&a.space, &a.subset, a.resolution)?;
    let cfg = CheckConfig { tolerance: a.tol, max_centers: 32 };
    let mut report = match a.kind {
        VerifyKind::C3 => {
            let q_net = ambient_net(&space, a.resolution, a.cap)?;
            check_diameter_bound(&space, &q_net, &f_net, &cfg)?
        }
        VerifyKind::Prop42 => {
            let q_net = ambient_net(&space, a.resolution, a.cap)?;
            check_far_set_constancy(&space, &q_net, &f_net, &cfg)?
        }
        VerifyKind::Lemma43 => {
            if f_net.points.len() != 2 {
                return Err(Error::HypothesisFailed(format!(
                    "this verification needs a two-point subset; {} has {} points",
                    f_net.label,
                    f_net.points.len()
                )));
            }
            let q_net = ambient_net(&space, a.resolution, a.cap)?;
            check_antipodal_sum(&space, &q_net, &f_net.points[0], &f_net.points[1], &cfg)?
        }
        VerifyKind::Lemma44 => {
            let q_net = ambient_net(&space, a.resolution, a.cap)?;
            check_hinge_bound(&space, &q_net, &f_net, &cfg)?
        }
        VerifyKind::Prop22 => {
            let q_net = ambient_net(&space, a.resolution, a.cap)?;
            check_antipode_closure(&space, &q_net, &f_net, &cfg, a.force)?
        }
        VerifyKind::C1vertex => check_vertex_directions(&space, &f_net, &cfg)?,
    };
    stamp(&mut report, &[("resolution", a.resolution), ("seed", a.seed as f64)]);
    emit(&a.out, &report.to_json())?;
    Ok(verdict_exit(report.verdict))
}

fn cmd_zoo_list() -> Result<u8> {
    for sc in qcgeo::zoo::scenarios() {
        say(&format!("{:32} {}\n", sc.id, sc.claim))?;
    }
    Ok(0)
}

fn cmd_zoo_run(a: ZooRunArgs) -> Result<u8> {
    ensure_positive("resolution", a.resolution)?;
    let scale = a.resolution / 0.1;
    let picked: Vec<qcgeo::zoo::Scenario> = if a.name == "all" {
        qcgeo::zoo::scenarios()
    } else {
        vec![qcgeo::zoo::find_scenario(&a.name)
            .ok_or_else(|| Error::UnknownScenario(a.name.clone()))?]
    };

    let mut all_outcomes = Vec::new();
    let mut all_matched = true;
    for sc in &picked {
        let results = qcgeo::zoo::run_scenario_at(sc, scale)?;
        let outcomes: Vec<_> = results.iter().map(|(o, _)| o.clone()).collect();
        all_matched &= outcomes.iter().all(|o| o.matched);
        if let Some(dir) = &a.out {
            std::fs::create_dir_all(dir)?;
            let doc = scenario_document(sc, &results, a.resolution, a.seed);
            let mut text =
                serde_json::to_string_pretty(&doc).map_err(qcgeo::Error::from)?;
            text.push('\n');
            std::fs::write(dir.join(format!("{}.json", sc.id)), text)?;
        }
        all_outcomes.extend(outcomes);
    }

    let csv = qcgeo::zoo::outcomes_csv(&all_outcomes);
    match &a.out {
        Some(dir) => std::fs::write(dir.join("summary.csv"), &csv)?,
        None => say(&csv)?,
    }
    Ok(if all_matched { 0 } else { 1 })
}

fn scenario_document(
    sc: &qcgeo::zoo::Scenario,
    results: &[(qcgeo::zoo::ZooOutcome, CheckReport)],
    resolution: f64,
    seed: u64,
) -> serde_json::Value {
    let mut params = BTreeMap::new();
    params.insert("resolution".to_string(), resolution);
    params.insert("seed".to_string(), seed as f64);
    serde_json::json!({
        "scenario": sc.id,
        "claim": sc.claim,
        "params": params,
        "results": results
            .iter()
            .map(|(o, r)| serde_json::json!({ "outcome": o, "report": r }))
            .collect::<Vec<_>>(),
        "version": report_version(),
    })
}
