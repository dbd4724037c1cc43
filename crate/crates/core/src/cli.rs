//! The `gerbe` command line: load a scenario, run one computation, report.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cech::CxValue;
use crate::complex::standard::{boundary_of_simplex, cycle_graph, product, rp2_triangles, sphere_facets};
use crate::connection::{check_deligne, curvature_three_form};
use crate::error::{Error, ErrorKind, Result};
use crate::fibered::patch_primitive;
use crate::gerbe::{dd_cocycle, lift_defect, lift_exists, lifting_obstruction, trivialize, Element};
use crate::holonomy::{check_integrality, surface_holonomy, wzw};
use crate::io::{
    chain_terms, read_scenario, uncx, BaseDoc, ElementDoc, ExtensionDoc, FiberedDoc, GerbeDoc, GroupoidDoc, LiftDoc,
    Loaded, Scenario, SurfaceDoc, SCENARIO_VERSION,
};
use crate::scenarios::{rp2_circle_bundle, star_covered, SphereCover};

#[derive(Debug, Parser)]
#[command(name = "gerbe", version, about = "Bundle gerbes, Dixmier-Douady classes and surface holonomy")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Pass/fail threshold for residual checks.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Seed for weighted partitions and random payloads.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Partition of unity: `hat` or `weighted`.
    #[arg(long, global = true)]
    pub partition: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cocycle and Deligne identities.
    Check { scenario: PathBuf },
    /// Dixmier-Douady class of the gerbe.
    DdClass { scenario: PathBuf },
    /// Clutching data ρ with δρ = g.
    Trivialize { scenario: PathBuf },
    /// Lifting obstruction of a bundle to the central extension.
    Lift { scenario: PathBuf },
    /// Primitive of a closed cochain on the fibered powers of a covering.
    DeltaPrimitive { scenario: PathBuf },
    /// Surface holonomy of the partition-of-unity connection.
    Holonomy { scenario: PathBuf },
    /// exp(∫_B ω) for a filling B of the surface.
    Wzw { scenario: PathBuf },
    /// Compare two path-groupoid elements.
    Groupoid { scenario: PathBuf },
    /// Print a ready-made scenario.
    Scenario {
        #[arg(value_enum)]
        kind: ScenarioKind,
        /// Class multiple for the sphere scenario.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        k: i64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScenarioKind {
    /// sd(∂Δ⁴), star cover, k times the generator, the sphere around vertex 0.
    Sphere,
    /// Heisenberg lift over sd(RP² × S¹); obstructed.
    Rp2Circle,
    /// Heisenberg lift over the subdivided 4-cycle; unobstructed.
    Circle,
    /// Connected double cover of the six-vertex circle with a closed 1-form.
    Covering,
    /// ∂Δ³ with an integral 2-form and two paths.
    Groupoid,
}

/// Exit code and report text.
pub fn run(cli: &Cli) -> (i32, String) {
    match dispatch(cli) {
        Ok(report) => (0, render(&report, cli.json || matches!(cli.command, Command::Scenario { .. }))),
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::Validation => 2,
                ErrorKind::Obstruction => 3,
                ErrorKind::Io => 4,
            };
            let report = json!({ "error": e.to_string(), "exit_code": code });
            (code, render(&report, cli.json))
        }
    }
}

fn render(v: &Value, as_json: bool) -> String {
    if as_json {
        return serde_json::to_string_pretty(v).expect("serializable") + "\n";
    }
    let mut out = String::new();
    if let Value::Object(m) = v {
        for (k, x) in m {
            let text = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {text}\n"));
        }
    }
    out
}

fn load(cli: &Cli, path: &PathBuf) -> Result<Loaded> {
    Loaded::new(read_scenario(path)?, cli.partition.clone(), cli.seed)
}

fn tolerance(cli: &Cli, l: &Loaded, default: f64) -> f64 {
    cli.tolerance.or(l.scenario.options.tolerance).unwrap_or(default)
}

fn angle_report(z: &CxValue<f64>) -> Value {
    let turns = z.angle / std::f64::consts::TAU;
    let (p, q) = nearest_rational(turns, 64);
    json!({
        "log_modulus": z.log_modulus,
        "angle_over_2pi": turns,
        "nearest_rational": format!("{p}/{q}"),
        "rational_error": (turns - p as f64 / q as f64).abs(),
    })
}

/// Closest p/q with 1 ≤ q ≤ max_den, smallest q on ties.
pub fn nearest_rational(x: f64, max_den: i64) -> (i64, i64) {
    let mut best = (x.round() as i64, 1);
    let mut err = (x - best.0 as f64).abs();
    for q in 2..=max_den {
        let p = (x * q as f64).round() as i64;
        let e = (x - p as f64 / q as f64).abs();
        if e + 1e-15 < err {
            best = (p, q);
            err = e;
        }
    }
    best
}

fn dispatch(cli: &Cli) -> Result<Value> {
    match &cli.command {
        Command::Check { scenario } => {
            let l = load(cli, scenario)?;
            let cover = l.cover()?;
            let d = l.deligne(&cover)?;
            let r = check_deligne(&d);
            let tol = tolerance(cli, &l, r.tolerance);
            let passed = r.max_residual() <= tol;
            let report = json!({
                "cocycle_residual": r.cocycle_residual,
                "max_triple_residual": r.max_triple(),
                "max_double_residual": r.max_double(),
                "tolerance": tol,
                "passed": passed,
            });
            if passed {
                Ok(report)
            } else {
                Err(Error::DeligneInvalid(r.max_residual()))
            }
        }
        Command::DdClass { scenario } => {
            let l = load(cli, scenario)?;
            let cover = l.cover()?;
            let gp = l.gerbe(&cover)?;
            let class = dd_cocycle(&gp)?;
            Ok(json!({
                "class_vector": class.class_vector,
                "trivial": class.is_trivial(&cover.nerve),
                "integer_cocycle": class.cocycle,
            }))
        }
        Command::Trivialize { scenario } => {
            let l = load(cli, scenario)?;
            let cover = l.cover()?;
            let t = trivialize(&l.gerbe(&cover)?)?;
            let rho: Vec<Vec<[f64; 2]>> =
                (0..t.rho.len()).map(|i| t.rho.logs(i).iter().map(|&z| uncx(z)).collect()).collect();
            Ok(json!({ "reconstruction_residual": t.residual, "rho_logs": rho }))
        }
        Command::Lift { scenario } => {
            let l = load(cli, scenario)?;
            let cover = l.cover()?;
            let (ext, pb) = l.extension_and_bundle(&cover)?;
            let naive: Vec<Element<f64>> = pb.transitions.iter().map(|&g| (g, CxValue::one())).collect();
            let e = lifting_obstruction(&ext, &pb, &naive)?;
            let class = dd_cocycle(&e)?;
            match lift_exists(&ext, &pb)? {
                Some(lift) => Ok(json!({
                    "lift_exists": true,
                    "obstruction_class_vector": class.class_vector,
                    "lift_defect": lift_defect(&ext, &pb, &lift),
                })),
                None => Err(Error::ClassNonTrivial),
            }
        }
        Command::DeltaPrimitive { scenario } => {
            let l = load(cli, scenario)?;
            let cover = l.cover()?;
            let (cov, w) = l.fibered(&cover)?;
            let rho = patch_primitive(&cov, &w, &l.partition(&cover)?)?;
            let residual = crate::fibered::delta(&cov, &rho)?.max_diff(&w);
            Ok(json!({
                "arity": rho.p,
                "degree": rho.q,
                "residual": residual,
                "compatibility_defect": rho.compatibility_defect(&cov),
            }))
        }
        Command::Holonomy { scenario } => {
            let l = load(cli, scenario)?;
            let cover = l.cover()?;
            let d = l.deligne(&cover)?;
            let z = surface_holonomy(&d, &l.surface(&cover)?)?;
            Ok(angle_report(&z))
        }
        Command::Wzw { scenario } => {
            let l = load(cli, scenario)?;
            let cover = l.cover()?;
            let omega = curvature_three_form(&l.deligne(&cover)?)?;
            check_integrality(&cover.base, &omega)?;
            let z = wzw(&cover, &l.surface(&cover)?, &omega)?;
            Ok(angle_report(&z))
        }
        Command::Groupoid { scenario } => {
            let l = load(cli, scenario)?;
            let (pg, a, b, basepoint) = l.groupoid()?;
            let ratio = pg.ratio(&a, &b)?;
            let tol = tolerance(cli, &l, crate::pathgroupoid::GROUPOID_TOL);
            let mut report = json!({
                "equal": ratio.distance_from_one() < tol,
                "ratio_log": uncx(ratio.log()),
            });
            if let Some(x) = basepoint {
                let t = pg.trivialize_at(x)?;
                let (p, q) = pg.split(&t, &a)?;
                report["split"] = json!({
                    "p": p.path.vertices,
                    "q": q.path.vertices,
                    "q_log_z": uncx(q.z.log()),
                    "round_trip": pg.equal(&pg.join(&p, &q)?, &a)?,
                });
            }
            Ok(report)
        }
        Command::Scenario { kind, k } => {
            let s = example(*kind, *k, cli.seed.unwrap_or(0))?;
            Ok(serde_json::to_value(s).expect("serializable"))
        }
    }
}

fn base(simplices: Vec<Vec<usize>>, subdivide: bool) -> BaseDoc {
    BaseDoc { simplices, subdivide }
}

fn scenario(b: BaseDoc) -> Scenario {
    Scenario {
        version: SCENARIO_VERSION,
        base: b,
        cover: None,
        gerbe: None,
        lift: None,
        fibered: None,
        surface: None,
        groupoid: None,
        options: Default::default(),
    }
}

pub fn example(kind: ScenarioKind, k: i64, seed: u64) -> Result<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        ScenarioKind::Sphere => {
            let sc = SphereCover::new(4)?;
            let mut s = scenario(base(sphere_facets(4), true));
            s.gerbe = Some(GerbeDoc { integer_cocycle: Some(sc.generator_cocycle(k)), ..Default::default() });
            let sphere = sc.vertex_sphere(0);
            s.surface = Some(SurfaceDoc { base_cycle: Some(chain_terms(&sc.cover.base, &sphere)), ..Default::default() });
            s
        }
        ScenarioKind::Rp2Circle => {
            let (_, pb) = rp2_circle_bundle()?;
            let circle = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
            let mut s = scenario(base(product(&rp2_triangles(), &circle, 3), true));
            s.lift = Some(LiftDoc {
                extension: ExtensionDoc { named: Some("heisenberg".into()), table: None, cocycle: None },
                transitions: pb.transitions,
            });
            s
        }
        ScenarioKind::Circle => {
            let (_, cover) = star_covered(&cycle_graph(4))?;
            let mut s = scenario(base(cycle_graph(4).simplices(1).to_vec(), true));
            s.lift = Some(LiftDoc {
                extension: ExtensionDoc { named: Some("heisenberg".into()), table: None, cocycle: None },
                transitions: (0..cover.level_len(1)).map(|_| rng.gen_range(0..4)).collect(),
            });
            s
        }
        ScenarioKind::Covering => {
            let (_, cover) = star_covered(&cycle_graph(3))?;
            let mut transitions = vec![vec![0, 1]; cover.level_len(1)];
            transitions[cover.locate(&[0, 2]).expect("edge").0] = vec![1, 0];
            let mut s = scenario(base(cycle_graph(3).simplices(1).to_vec(), true));
            s.fibered = Some(FiberedDoc { sheets: 2, transitions, p: 2, q: 1, values: None });
            s
        }
        ScenarioKind::Groupoid => {
            let mut f: Vec<Complex<f64>> =
                (0..3).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-3.0..3.0))).collect();
            f.push(f[0] - f[1] + f[2] - Complex::new(0.0, std::f64::consts::TAU * k as f64));
            let mut s = scenario(base(boundary_of_simplex(3).simplices(2).to_vec(), false));
            s.groupoid = Some(GroupoidDoc {
                f: f.iter().map(|&z| uncx(z)).collect(),
                a: ElementDoc { path: vec![0, 1, 2], log_z: uncx(f[0]) },
                b: ElementDoc { path: vec![0, 2], log_z: [0.0, 0.0] },
                basepoint: Some(3),
            });
            s
        }
    })
}
