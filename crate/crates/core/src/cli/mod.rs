//! Batch front end behind the `yoccoz` binary.
//!
//! Exit codes: 0 success, 1 usage, 2 computation failure, 3 a violated
//! inequality.

mod output;

pub use output::{csv_with_meta, meta, to_json_string, VERSION};

use crate::dynamics::{Parameter, Rotation};
use crate::modulus::{estimate_modulus, ModulusConfig};
use crate::nest::{
    geometric_nest, synthetic_nest, ComplementaryAnnulus, DescendantTree, DivergenceReport, ModulusValue, SyntheticSpec,
};
use crate::puzzle::{AnnulusRegion, Puzzle, PuzzleConfig};
use crate::rays::{alpha_cycle, trace_equipotential, trace_landed, trace_ray_deep, Angle, ExternalRay, RayError};
use crate::tableau::Tableau;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "yoccoz", version, about = "Yoccoz puzzles, tableaux and modulus accounting for z^2 + c")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Trace external rays and equipotentials.
    Rays,
    /// Build the puzzle and check nesting and separation.
    Puzzle,
    /// Critical tableau, children and recurrence verdicts.
    Tableau,
    /// Dual nest and the divergence accounting.
    Nest,
    /// Conformal modulus of an annulus given as two closed polylines.
    Modulus {
        /// JSON file `{"outer": [[re, im], …], "inner": [[re, im], …]}`.
        region: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Geometric,
    Synthetic,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c_re: f64,
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c_im: f64,
    /// Rotation number `p/q` of the limb.
    #[arg(long, global = true)]
    pub limb: Option<Rotation>,
    /// Comma-separated angles `p/q`.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_angle)]
    pub angles: Vec<Angle>,
    #[arg(long, global = true, default_value_t = 4)]
    pub depth: usize,
    /// Orbit columns of the tableau.
    #[arg(long, global = true, default_value_t = 32)]
    pub width: usize,
    /// Green level of the depth-0 equipotential.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub r0: f64,
    /// Grid nodes per side for moduli; a power of two in 64..=4096.
    #[arg(long, global = true, default_value_t = 512)]
    pub grid: usize,
    /// Relative residual of the modulus solve.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Geometric)]
    pub mode: Mode,
    /// Synthetic nest specification (JSON).
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 3)]
    pub batches: usize,
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

fn parse_angle(s: &str) -> Result<Angle, String> {
    s.trim().parse::<Angle>().map_err(|e| e.to_string())
}

impl RunConfig {
    pub fn c(&self) -> Complex64 {
        Complex64::new(self.c_re, self.c_im)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        if !(64..=4096).contains(&self.grid) || !self.grid.is_power_of_two() {
            return Err(Failure::Usage(format!("--grid {} is not a power of two in 64..=4096", self.grid)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Failure::Usage(format!("--tol {} must be positive", self.tol)));
        }
        if self.r0.is_nan() || self.r0 <= 0.0 {
            return Err(Failure::Usage(format!("--r0 {} must be positive", self.r0)));
        }
        if !self.c_re.is_finite() || !self.c_im.is_finite() {
            return Err(Failure::Usage("c must be finite".into()));
        }
        if self.threads == Some(0) {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        Ok(())
    }

    /// Config echo embedded in every output.
    pub fn echo(&self, command: &Command) -> Value {
        let mut v = json!({
            "c": [self.c_re, self.c_im],
            "limb": self.limb.map(|r| r.to_string()),
            "angles": self.angles.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "depth": self.depth,
            "width": self.width,
            "r0": self.r0,
            "grid": self.grid,
            "tol": self.tol,
            "mode": match self.mode { Mode::Geometric => "geometric", Mode::Synthetic => "synthetic" },
            "spec": self.spec.as_ref().map(|p| p.display().to_string()),
            "batches": self.batches,
            "seed": self.seed,
        });
        if let Command::Modulus { region } = command {
            v["region"] = json!(region.display().to_string());
        }
        v
    }

    fn limb(&self) -> Result<Rotation, Failure> {
        self.limb.ok_or_else(|| Failure::Usage("--limb P/Q is required".into()))
    }

    fn modulus_config(&self, history: bool) -> ModulusConfig {
        ModulusConfig { resolution: self.grid, tolerance: self.tol, history, ..ModulusConfig::default() }
    }

    fn puzzle_config(&self) -> PuzzleConfig {
        PuzzleConfig { r0: self.r0, ..PuzzleConfig::default() }
    }
}

/// A run that did not succeed, with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Usage(String),
    Computation(String),
    Violation(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Computation(_) => 2,
            Failure::Violation(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Computation(m) | Failure::Violation(m) => m,
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Computation(format!("writing output: {e}"))
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("yoccoz: {}", f.message());
            f.exit_code()
        }
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<(), Failure> {
    let config = &cli.config;
    config.validate()?;
    std::fs::create_dir_all(&config.out).map_err(|e| Failure::Usage(format!("--out {}: {e}", config.out.display())))?;
    let work = || match &cli.command {
        Command::Rays => cmd_rays(config),
        Command::Puzzle => cmd_puzzle(config),
        Command::Tableau => cmd_tableau(config),
        Command::Nest => cmd_nest(config),
        Command::Modulus { region } => cmd_modulus(config, region),
    };
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Computation(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

fn write_json(dir: &Path, name: &str, value: &Value) -> Result<(), Failure> {
    output::write_file(dir, name, &to_json_string(value)).map_err(io_failure)
}

fn ray_json(ray: &ExternalRay) -> Value {
    json!({
        "angle": ray.angle.to_string(),
        "samples": output::points(&ray.samples),
        "potentials": ray.potentials,
        "landed": ray.landing.is_some(),
        "landing": ray.landing.map(|l| output::point(l.point)),
        "spread": ray.landing.map(|l| l.spread),
        "matched": ray.landing.and_then(|l| l.matched).map(|m| serde_json::to_value(m).expect("serializable")),
    })
}

pub fn cmd_rays(config: &RunConfig) -> Result<(), Failure> {
    let c = config.c();
    let param = match config.limb {
        Some(l) => Parameter::with_limb(c, l),
        None => Parameter::new(c),
    };
    let angles = if !config.angles.is_empty() {
        config.angles.clone()
    } else if let Some(l) = config.limb {
        alpha_cycle(l).map_err(|e| Failure::Usage(e.to_string()))?.angles
    } else {
        return Err(Failure::Usage("give --angles or --limb".into()));
    };
    let steps = PuzzleConfig::default().steps_per_halving;
    let mut rays = Vec::with_capacity(angles.len());
    for a in &angles {
        let ray = match trace_landed(&param, a, config.r0, steps) {
            Ok(r) => r,
            Err(RayError::NotLanded { .. }) => {
                let to = config.r0 * f64::powi(2.0, -30);
                trace_ray_deep(&param, a, config.r0, to, steps).map_err(|e| Failure::Computation(format!("ray {a}: {e}")))?
            }
            Err(e) => return Err(Failure::Computation(format!("ray {a}: {e}"))),
        };
        rays.push(ray);
    }
    let mut equipotentials = Vec::new();
    for k in 0..=config.depth {
        let level = config.r0 * f64::powi(2.0, -(k as i32));
        let e = trace_equipotential(&param, level, 512).map_err(|e| Failure::Computation(format!("equipotential {level:e}: {e}")))?;
        equipotentials.push(e);
    }
    let m = meta("rays", &config.echo(&Command::Rays));
    let out = &config.out;
    write_json(out, "rays.json", &output::with_meta(&m, json!({ "rays": rays.iter().map(ray_json).collect::<Vec<_>>() })))?;
    let eq: Vec<Value> = equipotentials.iter().map(|e| json!({ "level": e.level, "samples": output::points(&e.samples) })).collect();
    write_json(out, "equipotentials.json", &output::with_meta(&m, json!({ "equipotentials": eq })))?;
    let mut paths: Vec<(&str, &[Complex64])> = equipotentials.iter().map(|e| ("#888888", e.samples.as_slice())).collect();
    paths.extend(rays.iter().map(|r| ("#1f4e9c", r.samples.as_slice())));
    let dots: Vec<Complex64> = rays.iter().filter_map(|r| r.landing.map(|l| l.point)).collect();
    output::write_file(out, "rays.svg", &output::svg(&m, &paths, &dots)).map_err(io_failure)?;
    Ok(())
}

fn build_puzzle(config: &RunConfig, depth: usize) -> Result<Puzzle, Failure> {
    let limb = config.limb()?;
    let cycle = alpha_cycle(limb).map_err(|e| Failure::Usage(e.to_string()))?;
    let param = Parameter::with_limb(config.c(), limb);
    let mut p = Puzzle::build_depth_zero(param, cycle, config.puzzle_config())
        .map_err(|e| Failure::Computation(format!("puzzle depth 0: {e}")))?;
    while p.depth() < depth {
        let d = p.depth() + 1;
        p.refine().map_err(|e| Failure::Computation(format!("puzzle refinement to depth {d}: {e}")))?;
    }
    Ok(p)
}

pub fn cmd_puzzle(config: &RunConfig) -> Result<(), Failure> {
    let p = build_puzzle(config, config.depth)?;
    let m = meta("puzzle", &config.echo(&Command::Puzzle));
    let levels: Vec<Value> = p
        .levels
        .iter()
        .enumerate()
        .map(|(d, pieces)| {
            json!({
                "depth": d,
                "level": p.level(d),
                "bounding_angles": p.bounding_angles(d).iter().map(ToString::to_string).collect::<Vec<_>>(),
                "pieces": pieces.iter().map(|pc| json!({
                    "id": pc.id,
                    "arcs": pc.arcs.arcs().iter().map(|a| [a.start.to_string(), a.end.to_string()]).collect::<Vec<_>>(),
                    "contains_critical": pc.contains_critical,
                    "contains_critical_value": pc.contains_critical_value,
                    "parent": pc.parent,
                    "boundary": output::points(pc.boundary()),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let out = &config.out;
    write_json(out, "puzzle.json", &output::with_meta(&m, json!({ "alpha": output::point(p.alpha), "levels": levels })))?;
    let markov = p.markov_check();
    let markov_json = serde_json::to_value(&markov).expect("serializable");
    write_json(out, "markov_report.json", &output::with_meta(&m, json!({ "holds": markov.violations.is_empty(), "report": markov_json })))?;
    let mut csv = String::from("depth,separation\n");
    let mut touching = Vec::new();
    for d in 0..=p.depth().saturating_sub(2) {
        if p.depth() < 2 {
            break;
        }
        let s = p.separation(d).map_err(|e| Failure::Computation(format!("separation at depth {d}: {e}")))?;
        if s <= 0.0 {
            touching.push(d);
        }
        csv.push_str(&format!("{d},{s:.16e}\n"));
    }
    output::write_file(out, "separation.csv", &csv_with_meta(&m, &csv)).map_err(io_failure)?;
    if !markov.violations.is_empty() {
        return Err(Failure::Violation(format!("markov: {} nesting violations", markov.violations.len())));
    }
    if !touching.is_empty() {
        return Err(Failure::Violation(format!("separation: critical pieces touch at depths {touching:?}")));
    }
    Ok(())
}

fn build_tableau(config: &RunConfig) -> Result<Tableau, Failure> {
    match config.mode {
        Mode::Geometric => {
            let p = build_puzzle(config, config.depth)?;
            Tableau::build(&p, config.depth, config.width).map_err(|e| Failure::Computation(format!("tableau: {e}")))
        }
        Mode::Synthetic => {
            let limb = config.limb()?;
            let theta = match config.angles.as_slice() {
                [t] => t,
                _ => return Err(Failure::Usage("synthetic tableau needs exactly one --angles value, the critical value angle".into())),
            };
            let cycle = alpha_cycle(limb).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(Tableau::kneading(theta, &cycle, config.depth, config.width))
        }
    }
}

pub fn cmd_tableau(config: &RunConfig) -> Result<(), Failure> {
    let t = build_tableau(config)?;
    let m = meta("tableau", &config.echo(&Command::Tableau));
    let out = &config.out;
    output::write_file(out, "tableau.csv", &csv_with_meta(&m, &t.to_csv())).map_err(io_failure)?;
    let children: Vec<Value> = (0..=t.depth)
        .map(|d| match t.children_of(d) {
            Ok(s) => json!({
                "depth": d,
                "searched_to": s.searched_to,
                "conditional": s.conditional,
                "links": s.links.iter().map(|l| json!({
                    "child_depth": l.child_depth,
                    "iterate": l.iterate,
                    "degree": l.degree,
                    "excellent": match t.is_excellent(l) {
                        Ok(true) => "excellent",
                        Ok(false) => "not excellent",
                        Err(_) => "undecided",
                    },
                })).collect::<Vec<_>>(),
            }),
            Err(e) => json!({ "depth": d, "error": e.to_string() }),
        })
        .collect();
    write_json(out, "children.json", &output::with_meta(&m, json!({ "children": children })))?;
    let column_rule = t.column_rule_violations();
    let verdicts = json!({
        "window": { "depth": t.depth, "width": t.width },
        "source": serde_json::to_value(&t.source).expect("serializable"),
        "recurrence": serde_json::to_value(t.is_recurrent()).expect("serializable"),
        "periodicity": serde_json::to_value(t.is_periodic()).expect("serializable"),
        "column_rule_violations": column_rule,
        "north_east_violations": t.north_east_violations(),
        "unresolvable_fraction": t.unresolvable_fraction(),
    });
    write_json(out, "verdicts.json", &output::with_meta(&m, verdicts))?;
    if !column_rule.is_empty() {
        return Err(Failure::Violation(format!("column-rule: broken in columns {column_rule:?}")));
    }
    Ok(())
}

fn modulus_json(v: &ModulusValue) -> Value {
    json!({
        "value": v.to_f64(),
        "exact": match v { ModulusValue::Exact(q) => Some(q.to_string()), ModulusValue::Numeric { .. } => None },
        "tolerance": v.tolerance(),
    })
}

fn opt_modulus_json(v: Option<&ModulusValue>) -> Value {
    v.map_or(Value::Null, modulus_json)
}

fn nest_json(tree: &DescendantTree, annuli: &[ComplementaryAnnulus], moduli: &[Option<ModulusValue>], report: &DivergenceReport, extra: &[Value]) -> Value {
    let generations: Vec<Value> =
        (0..=tree.max_generation()).map(|g| json!({ "generation": g, "count": tree.generation_count(g) })).collect();
    let annuli_json: Vec<Value> = annuli
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let mut v = json!({
                "index": a.index,
                "outer": a.outer,
                "middle": a.middle,
                "inner": a.inner,
                "outer_depth": tree.nodes[a.outer].depth,
                "inner_depth": tree.nodes[a.inner].depth,
                "m": a.outer_generation,
                "n": a.inner_generation,
                "intermediate": a.intermediate_generation,
                "modulus": opt_modulus_json(moduli.get(j).and_then(Option::as_ref)),
            });
            if let Some(Value::Object(e)) = extra.get(j) {
                for (k, x) in e {
                    v[k] = x.clone();
                }
            }
            v
        })
        .collect();
    let links: Vec<Value> = report
        .links
        .iter()
        .flatten()
        .map(|l| {
            json!({
                "from": l.from,
                "to": l.to,
                "iterates": l.iterates,
                "total_iterate": l.total_iterate,
                "pullback_steps": l.pullback_steps,
                "middle_degree": l.middle_degree,
                "factor": l.factor().to_string(),
            })
        })
        .collect();
    json!({
        "tree": serde_json::to_value(tree).expect("serializable"),
        "generations": generations,
        "annuli": annuli_json,
        "ancestor_links": links,
    })
}

fn divergence_json(report: &DivergenceReport) -> Value {
    let batches: Vec<Value> = report
        .batches
        .iter()
        .map(|b| {
            json!({
                "outer_generation": b.outer_generation,
                "candidates": b.candidates,
                "excluded": b.excluded,
                "parity": b.parity.to_string(),
                "selected": b.selected,
                "sum": modulus_json(&b.sum),
                "holds": b.holds,
            })
        })
        .collect();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({ "inequality": v.inequality.name(), "annulus": v.annulus, "detail": v.detail }))
        .collect();
    json!({
        "M0": opt_modulus_json(report.min_modulus.as_ref()),
        "m0": report.first_generation,
        "grand_ancestors": report.grand_ancestors,
        "requested_batches": report.requested_batches,
        "batches": batches,
        "running_total": modulus_json(&report.running_total),
        "bound": opt_modulus_json(report.total_bound().as_ref()),
        "exact": report.exact,
        "complete": report.complete(),
        "holds": report.holds(),
        "violations": violations,
    })
}

fn violation_failure(report: &DivergenceReport) -> Failure {
    let mut names: Vec<&str> = report.violations.iter().map(|v| v.inequality.name()).collect();
    names.dedup();
    let first = &report.violations[0];
    Failure::Violation(format!("inequality {} violated: {}", names.join(", "), first.detail))
}

pub fn cmd_nest(config: &RunConfig) -> Result<(), Failure> {
    let m = meta("nest", &config.echo(&Command::Nest));
    let out = &config.out;
    match config.mode {
        Mode::Synthetic => {
            let path = config.spec.as_ref().ok_or_else(|| Failure::Usage("synthetic mode needs --spec FILE".into()))?;
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("--spec {}: {e}", path.display())))?;
            let spec = SyntheticSpec::from_json(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            let nest = synthetic_nest(&spec, config.seed).map_err(|e| Failure::Usage(e.to_string()))?;
            let report = nest.report(config.batches);
            let moduli = nest.moduli();
            let extra: Vec<Value> = nest.planted_ancestors.iter().map(|a| json!({ "planted_ancestor": a })).collect();
            let mut body = nest_json(&nest.tree, &nest.annuli, &moduli, &report, &extra);
            body["mode"] = json!("synthetic");
            body["spec"] = serde_json::to_value(&nest.spec).expect("serializable");
            body["node_moduli"] = json!(nest.node_moduli.iter().map(ToString::to_string).collect::<Vec<_>>());
            write_json(out, "nest.json", &output::with_meta(&m, body))?;
            let mut div = divergence_json(&report);
            div["mode"] = json!("synthetic");
            write_json(out, "divergence.json", &output::with_meta(&m, div))?;
            if !report.holds() {
                return Err(violation_failure(&report));
            }
            if !report.complete() {
                return Err(Failure::Computation(format!(
                    "insufficient depth: {} of {} batches; raise generations in the spec",
                    report.batches.len(),
                    report.requested_batches
                )));
            }
            Ok(())
        }
        Mode::Geometric => {
            let p = build_puzzle(config, config.depth)?;
            let t = Tableau::build(&p, config.depth, config.width).map_err(|e| Failure::Computation(format!("tableau: {e}")))?;
            let nest = geometric_nest(&p, &t, None, &config.modulus_config(true)).map_err(|e| Failure::Computation(format!("nest: {e}")))?;
            let report = nest.report(config.batches);
            let moduli = nest.moduli();
            let extra: Vec<Value> = nest
                .estimates
                .iter()
                .zip(&nest.regions)
                .map(|(e, r)| match e {
                    Ok(e) => json!({
                        "degenerate": e.degenerate,
                        "pinch_points": e.pinch_points,
                        "resolution": e.resolution,
                        "refinement_history": e.refinement_history,
                        "region_pinches": r.pinch_points.len(),
                    }),
                    Err(err) => json!({ "error": err.to_string(), "region_pinches": r.pinch_points.len() }),
                })
                .collect();
            let mut body = nest_json(&nest.tree, &nest.annuli, &moduli, &report, &extra);
            body["mode"] = json!("geometric");
            body["achieved_depth"] = json!(nest.achieved_depth);
            write_json(out, "nest.json", &output::with_meta(&m, body))?;
            let mut div = divergence_json(&report);
            div["mode"] = json!("geometric");
            div["achieved_depth"] = json!(nest.achieved_depth);
            div["partial"] = json!(!report.complete());
            write_json(out, "divergence.json", &output::with_meta(&m, div))?;
            if !report.holds() {
                return Err(violation_failure(&report));
            }
            Ok(())
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionFile {
    outer: Vec<[f64; 2]>,
    inner: Vec<[f64; 2]>,
}

/// Reads a region file `{"outer": [[re, im], …], "inner": […]}`.
pub fn read_region(path: &Path) -> Result<AnnulusRegion, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let f: RegionFile = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if f.outer.len() < 3 || f.inner.len() < 3 {
        return Err(Failure::Usage(format!("{}: each polyline needs at least 3 vertices", path.display())));
    }
    let pts = |v: &[[f64; 2]]| v.iter().map(|p| Complex64::new(p[0], p[1])).collect::<Vec<_>>();
    Ok(AnnulusRegion::new(pts(&f.outer), pts(&f.inner)))
}

pub fn cmd_modulus(config: &RunConfig, region: &Path) -> Result<(), Failure> {
    let r = read_region(region)?;
    let est = estimate_modulus(&r, &config.modulus_config(true)).map_err(|e| Failure::Computation(format!("modulus: {e}")))?;
    let m = meta("modulus", &config.echo(&Command::Modulus { region: region.to_path_buf() }));
    let mut body = serde_json::to_value(&est).expect("serializable");
    body["discretization_error"] = json!(est.discretization_error());
    write_json(&config.out, "modulus.json", &output::with_meta(&m, body))
}
