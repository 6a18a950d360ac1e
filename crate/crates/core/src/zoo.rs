//! A fixed menagerie of worked examples.
//!
//! Each scenario pairs a space and subset with the checks that make it
//! interesting and the verdict each check should return. Running the zoo
//! compares observed verdicts against expected ones, so the collection
//! doubles as a regression net for the whole engine.

use serde::Serialize;

use crate::error::Result;
use crate::nets::{build_net, Net};
use crate::qc_check::{
    check_extremal, check_local_quasi_convex, check_locally_convex, check_quasi_convex,
    CheckConfig, CheckReport, Verdict,
};
use crate::spaces::{Constructor, Space};
use crate::subsets::{build_subset, SubsetNet};

/// One check to run on a scenario, with the verdict it should produce.
#[derive(Debug, Clone, Serialize)]
pub struct PlannedCheck {
    pub kind: ZooCheck,
    pub expect: Verdict,
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case", tag = "check")]
pub enum ZooCheck {
    QuasiConvex,
    LocalQuasiConvex { radius: f64 },
    Extremal,
    LocallyConvex,
}

impl ZooCheck {
    pub fn name(&self) -> &'static str {
        match self {
            ZooCheck::QuasiConvex => "qc",
            ZooCheck::LocalQuasiConvex { .. } => "lqc",
            ZooCheck::Extremal => "extremal",
            ZooCheck::LocallyConvex => "convex",
        }
    }
}

pub struct Scenario {
    pub id: &'static str,
    pub claim: &'static str,
    pub space: Constructor,
    pub subset_spec: &'static str,
    pub ambient_res: f64,
    pub subset_res: f64,
    pub max_centers: usize,
    pub checks: Vec<PlannedCheck>,
}

/// Result of one planned check on one scenario.
#[derive(Debug, Clone, Serialize)]
pub struct ZooOutcome {
    pub scenario: String,
    pub check: String,
    pub expected: Verdict,
    pub verdict: Verdict,
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_margin: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZooRun {
    pub outcomes: Vec<ZooOutcome>,
    pub all_expected: bool,
}

fn circle(perimeter: f64) -> Constructor {
    Constructor::Circle { perimeter }
}

fn susp(perimeter: f64) -> Constructor {
    Constructor::Suspension { base: Box::new(circle(perimeter)) }
}

const PI: f64 = std::f64::consts::PI;

fn planned(kind: ZooCheck, expect: Verdict) -> PlannedCheck {
    PlannedCheck { kind, expect }
}

/// The fixed scenario list, in display order.
pub fn scenarios() -> Vec<Scenario> {
    use Verdict::{NoViolation, Vacuous, Violation};
    vec![
        Scenario {
            id: "helix-in-cylinder",
            claim: "A steady helix on a flat cylinder is locally convex, yet distant \
                    turns subtend straight angles at the nearest curve point, so it is \
                    not quasi-convex in the large.",
            space: Constructor::Product {
                a: Box::new(circle(2.0 * PI)),
                b: Box::new(Constructor::Line),
            },
            subset_spec: "helix:0.5",
            ambient_res: 0.15,
            subset_res: 0.05,
            max_centers: 32,
            checks: vec![
                planned(ZooCheck::QuasiConvex, Violation),
                planned(ZooCheck::LocallyConvex, NoViolation),
            ],
        },
        Scenario {
            id: "antipodal-pair-on-sphere",
            claim: "Two antipodal points on the round sphere form a quasi-convex set: \
                    every comparison angle at the nearest pole degenerates to zero. \
                    Balls around either pole hold just one subset point, so the local \
                    scan has nothing to test.",
            space: Constructor::Sphere { dim: 2 },
            subset_spec: "poles",
            ambient_res: 0.15,
            subset_res: 0.1,
            max_centers: 32,
            checks: vec![
                planned(ZooCheck::QuasiConvex, NoViolation),
                planned(ZooCheck::LocalQuasiConvex { radius: 0.8 }, Vacuous),
            ],
        },
        Scenario {
            id: "isolated-points-non-qc",
            claim: "A pole plus one waist point is not quasi-convex: from a point \
                    beside the waist member, the far partner sits a right angle past \
                    the foot.",
            space: susp(2.0 * PI),
            subset_spec: "isolated",
            ambient_res: 0.15,
            subset_res: 0.1,
            max_centers: 32,
            checks: vec![planned(ZooCheck::QuasiConvex, Violation)],
        },
        Scenario {
            id: "barrel-rim",
            claim: "The seam circle where a cylindrical wall meets a flat floor fails \
                    the local foot test: wall points hovering above the seam reach \
                    other seam points faster through the floor, forcing straight \
                    angles at the foot.",
            space: Constructor::Barrel { height: 6.0 },
            subset_spec: "rim",
            ambient_res: 0.25,
            subset_res: 0.005,
            max_centers: 8,
            checks: vec![planned(ZooCheck::LocalQuasiConvex { radius: 0.9 }, Violation)],
        },
        Scenario {
            id: "capped-cylinder-rim",
            claim: "The edge circle of a cylinder with a cone cap is quasi-convex but \
                    not extremal: climbing the cap away from the edge increases \
                    distance at a rate set by the cap steepness, and chords between \
                    nearby edge points leave the circle.",
            space: Constructor::CappedCylinder { height: 1.0, cone_depth: 2.0 },
            subset_spec: "rim",
            ambient_res: 0.25,
            subset_res: 0.01,
            max_centers: 32,
            checks: vec![
                planned(ZooCheck::QuasiConvex, NoViolation),
                planned(ZooCheck::LocallyConvex, Violation),
                planned(ZooCheck::Extremal, Violation),
            ],
        },
        Scenario {
            id: "cone-over-pair",
            claim: "Two rays from a cone tip whose directions sit at maximal distance \
                    in the base circle form a quasi-convex set.",
            space: Constructor::Cone { base: Box::new(circle(1.5 * PI)) },
            subset_spec: "cone_rays:0.0,2.3561944901923449",
            ambient_res: 0.25,
            subset_res: 0.1,
            max_centers: 32,
            checks: vec![planned(ZooCheck::QuasiConvex, NoViolation)],
        },
        Scenario {
            id: "join-factor",
            claim: "One whole factor circle inside the spherical join of two circles \
                    is quasi-convex; feet on the factor see every other factor point \
                    at a right angle or less.",
            space: Constructor::Join {
                a: Box::new(circle(1.5 * PI)),
                b: Box::new(circle(1.5 * PI)),
            },
            subset_spec: "factor",
            ambient_res: 0.3,
            subset_res: 0.1,
            max_centers: 32,
            checks: vec![planned(ZooCheck::QuasiConvex, NoViolation)],
        },
        Scenario {
            id: "join-product-failure",
            claim: "Sweeping an arc of each factor through every mixing latitude does \
                    not give a quasi-convex set in the join: from a point of one \
                    factor beyond the arc, deep cross points break the right-angle \
                    bound at the foot.",
            space: Constructor::Join {
                a: Box::new(circle(2.0 * PI)),
                b: Box::new(circle(2.0 * PI)),
            },
            subset_spec: "product_arcs:2.0,2.0",
            ambient_res: 0.3,
            subset_res: 0.25,
            max_centers: 32,
            checks: vec![planned(ZooCheck::QuasiConvex, Violation)],
        },
        Scenario {
            id: "antipodal-longitudes",
            claim: "Two meridians at maximal base distance form a quasi-convex set. \
                    Every chord between the meridians splits into two equal-length \
                    geodesics, so the midpoint test skips those pairs rather than \
                    pick a branch, and certifies only the testable ones. The \
                    critical-foot test still fails: along the waist, distance to the \
                    pair grows at unit rate past the foot.",
            space: susp(PI),
            subset_spec: "longitudes:0.0,1.5707963267948966",
            // Fine enough that the far band survives the exclusion rule:
            // nothing is further than a quarter turn from the pair.
            ambient_res: 0.1,
            subset_res: 0.05,
            max_centers: 32,
            checks: vec![
                planned(ZooCheck::QuasiConvex, NoViolation),
                planned(ZooCheck::LocallyConvex, NoViolation),
                planned(ZooCheck::Extremal, Violation),
            ],
        },
        Scenario {
            id: "poles-extremal-iff-pi",
            claim: "Over a base circle of half the full perimeter, the suspension \
                    poles pass the critical-foot test: no sampled direction climbs \
                    away from a pole faster than the slope threshold.",
            space: susp(PI),
            subset_spec: "poles",
            ambient_res: 0.15,
            subset_res: 0.1,
            max_centers: 32,
            checks: vec![
                planned(ZooCheck::QuasiConvex, NoViolation),
                planned(ZooCheck::Extremal, NoViolation),
            ],
        },
        Scenario {
            id: "poles-extremal-iff-3pi2",
            claim: "Widening the base circle past half the full perimeter breaks \
                    extremality of the poles: directions across the wider waist climb \
                    away from the foot at a rate well above the threshold.",
            space: susp(1.5 * PI),
            subset_spec: "poles",
            ambient_res: 0.15,
            subset_res: 0.1,
            max_centers: 32,
            checks: vec![planned(ZooCheck::Extremal, Violation)],
        },
        Scenario {
            id: "rotation-fixed-set",
            claim: "The fixed set of a half-turn rotation of the suspension is the \
                    pole pair, and it is quasi-convex, as fixed sets of isometries \
                    should be.",
            space: susp(2.0 * PI),
            subset_spec: "fixed_set:3.141592653589793",
            ambient_res: 0.15,
            subset_res: 0.15,
            max_centers: 32,
            checks: vec![planned(ZooCheck::QuasiConvex, NoViolation)],
        },
        Scenario {
            id: "disc-boundary-extremal",
            claim: "The boundary circle of a flat disc is quasi-convex and extremal: \
                    every inward direction makes at most a right angle with the foot, \
                    and no direction in the disc climbs away faster than the \
                    threshold.",
            space: Constructor::FlatDisc { radius: 1.0 },
            subset_spec: "rim",
            // Coarser sampling would push the exclusion band past the
            // disc center and leave the critical-foot scan empty.
            ambient_res: 0.08,
            subset_res: 0.05,
            max_centers: 32,
            checks: vec![
                planned(ZooCheck::QuasiConvex, NoViolation),
                planned(ZooCheck::Extremal, NoViolation),
            ],
        },
        Scenario {
            id: "half-equator-arc",
            claim: "Half of the waist circle is geodesically convex, yet the local \
                    foot test fails at its endpoints: just past an endpoint, interior \
                    arc points line up straight behind the foot.",
            space: susp(2.0 * PI),
            subset_spec: "half_equator",
            ambient_res: 0.15,
            subset_res: 0.05,
            max_centers: 32,
            checks: vec![
                planned(ZooCheck::LocallyConvex, NoViolation),
                planned(ZooCheck::LocalQuasiConvex { radius: 0.5 }, Violation),
            ],
        },
        Scenario {
            id: "equator-convex",
            claim: "The full waist circle is quasi-convex, locally quasi-convex, and \
                    locally convex; the worst foot angle is exactly a right angle.",
            space: susp(2.0 * PI),
            subset_spec: "equator",
            ambient_res: 0.15,
            subset_res: 0.05,
            max_centers: 32,
            checks: vec![
                planned(ZooCheck::QuasiConvex, NoViolation),
                planned(ZooCheck::LocalQuasiConvex { radius: 0.5 }, NoViolation),
                planned(ZooCheck::LocallyConvex, NoViolation),
            ],
        },
    ]
}

pub fn find_scenario(id: &str) -> Option<Scenario> {
    scenarios().into_iter().find(|s| s.id == id)
}

/// Build the nets a scenario needs, with resolutions scaled by `scale`.
pub fn scenario_nets_at(sc: &Scenario, scale: f64) -> Result<(Space, Net, SubsetNet)> {
    let space = Space::new(sc.space.clone())?;
    let net = build_net(&space, sc.ambient_res * scale)?;
    let subset = build_subset(&space, sc.subset_spec, sc.subset_res * scale)?;
    Ok((space, net, subset))
}

/// Build the nets a scenario needs at its tuned resolutions.
pub fn scenario_nets(sc: &Scenario) -> Result<(Space, Net, SubsetNet)> {
    scenario_nets_at(sc, 1.0)
}

fn dispatch(
    kind: ZooCheck,
    space: &Space,
    net: &Net,
    subset: &SubsetNet,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    match kind {
        ZooCheck::QuasiConvex => check_quasi_convex(space, net, subset, cfg),
        ZooCheck::LocalQuasiConvex { radius } => {
            check_local_quasi_convex(space, net, subset, radius, cfg)
        }
        ZooCheck::Extremal => check_extremal(space, net, subset, cfg),
        ZooCheck::LocallyConvex => check_locally_convex(space, subset, cfg),
    }
}

/// Run one scenario with scaled resolutions, returning each check's
/// report beside its outcome row.
pub fn run_scenario_at(sc: &Scenario, scale: f64) -> Result<Vec<(ZooOutcome, CheckReport)>> {
    let (space, net, subset) = scenario_nets_at(sc, scale)?;
    let cfg = CheckConfig { tolerance: 1e-6, max_centers: sc.max_centers };
    let mut out = Vec::new();
    for planned in &sc.checks {
        let report = dispatch(planned.kind, &space, &net, &subset, &cfg)?;
        let outcome = ZooOutcome {
            scenario: sc.id.to_string(),
            check: planned.kind.name().to_string(),
            expected: planned.expect,
            verdict: report.verdict,
            matched: report.verdict == planned.expect,
            worst_margin: report.worst_margin,
        };
        out.push((outcome, report));
    }
    Ok(out)
}

/// Run one scenario at its tuned resolutions.
pub fn run_scenario(sc: &Scenario) -> Result<Vec<(ZooOutcome, CheckReport)>> {
    run_scenario_at(sc, 1.0)
}

/// Run every scenario in order at scaled resolutions.
pub fn run_all_at(scale: f64) -> Result<ZooRun> {
    let mut outcomes = Vec::new();
    for sc in scenarios() {
        for (outcome, _) in run_scenario_at(&sc, scale)? {
            outcomes.push(outcome);
        }
    }
    let all_expected = outcomes.iter().all(|o| o.matched);
    Ok(ZooRun { outcomes, all_expected })
}

/// Run every scenario at tuned resolutions.
pub fn run_all() -> Result<ZooRun> {
    run_all_at(1.0)
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::NoViolation => "no_violation",
        Verdict::Violation => "violation",
        Verdict::Vacuous => "vacuous",
    }
}

/// Fixed-column CSV of outcome rows. Floats use shortest-roundtrip form,
/// so the text is identical from run to run.
pub fn outcomes_csv(outcomes: &[ZooOutcome]) -> String {
    let mut s = String::from("scenario,flag,expected,observed,margin\n");
    for o in outcomes {
        let margin = o.worst_margin.map(|m| format!("{m}")).unwrap_or_default();
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            o.scenario,
            o.check,
            verdict_str(o.expected),
            verdict_str(o.verdict),
            margin
        ));
    }
    s
}
