//! Experiment configuration, command dispatch and report files.
//!
//! Every command writes one JSON document `<command>.json` carrying the
//! effective configuration and seed, plus a CSV file for tabular results.
//! Files are replaced atomically. Reports contain no timestamps or paths
//! other than those in the configuration, so an identical configuration
//! produces identical bytes.

mod output;

pub use output::write_atomic;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{
    diameter, emit_graph, parse_graph, GraphError, GraphInput, ParseError, Weight, WeightRecord,
};
use crate::integral::{check_kernel_bound, KernelOptions, KernelSamples, KernelSpec};
use crate::spectral::{self, SolveOptions};
use crate::suite::{run_suite, SuiteConfig, SuiteKind};
use crate::tree::{self, RootedTree, SuperadditiveFn};
use output::{csv_bytes, json_bytes, num};

/// Overrides `--seed` when set.
pub const SEED_ENV: &str = "METRIC_SPECTRA_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Validate,
    Spectrum,
    Bounds,
    Weyl,
    Partition,
    Approx,
    Sharpness,
    Snumbers,
    Kernel,
    Suite(SuiteKind),
}

impl Command {
    pub fn name(self) -> String {
        match self {
            Self::Validate => "validate".into(),
            Self::Spectrum => "spectrum".into(),
            Self::Bounds => "bounds".into(),
            Self::Weyl => "weyl".into(),
            Self::Partition => "partition".into(),
            Self::Approx => "approx".into(),
            Self::Sharpness => "sharpness".into(),
            Self::Snumbers => "snumbers".into(),
            Self::Kernel => "kernel".into(),
            Self::Suite(k) => format!("suite-{}", k.name()),
        }
    }
}

/// Everything a command reads. Unset options take per-command defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub graph: Option<PathBuf>,
    /// Weight file replacing the graph file's weights.
    pub weight: Option<PathBuf>,
    pub h: Option<f64>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub trials: Option<usize>,
    pub trial: Option<usize>,
    pub seed: u64,
    pub out: PathBuf,
    /// Relative slack on inequalities; for `weyl`, the admissible deviation.
    pub tol: Option<f64>,
    pub kernel: Option<String>,
    pub vanishing: bool,
    pub tail_tol: Option<f64>,
    pub phi: Option<String>,
    pub width: Option<f64>,
    pub length: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(command: Command, out: impl Into<PathBuf>) -> Self {
        Self {
            command,
            graph: None,
            weight: None,
            h: None,
            n: None,
            n_max: None,
            trials: None,
            trial: None,
            seed: 0,
            out: out.into(),
            tol: None,
            kernel: None,
            vanishing: false,
            tail_tol: None,
            phi: None,
            width: None,
            length: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExitStatus {
    Ok,
    Violations,
    ConfigError,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            Self::Ok => 0,
            Self::Violations => 1,
            Self::ConfigError => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub status: ExitStatus,
    pub message: String,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("writing reports: {0}")]
    Write(#[from] std::io::Error),
    #[error("{0}")]
    Computation(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

fn computation(e: impl std::fmt::Display) -> ConfigError {
    ConfigError::Computation(e.to_string())
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: String,
    seed: u64,
    passed: bool,
    config: &'a ExperimentConfig,
    report: T,
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    files: Vec<PathBuf>,
}

impl Ctx<'_> {
    fn json<T: Serialize>(&mut self, passed: bool, report: T) -> Result<(), ConfigError> {
        let env = Envelope {
            command: self.cfg.command.name(),
            seed: self.cfg.seed,
            passed,
            config: self.cfg,
            report,
        };
        let name = format!("{}.json", self.cfg.command.name());
        self.files.push(write_atomic(&self.cfg.out, &name, &json_bytes(&env))?);
        Ok(())
    }

    fn csv(&mut self, header: &[&str], rows: &[Vec<String>]) -> Result<(), ConfigError> {
        let name = format!("{}.csv", self.cfg.command.name());
        self.files.push(write_atomic(&self.cfg.out, &name, &csv_bytes(header, rows))?);
        Ok(())
    }

    fn raw(&mut self, name: &str, bytes: &[u8]) -> Result<(), ConfigError> {
        self.files.push(write_atomic(&self.cfg.out, name, bytes)?);
        Ok(())
    }
}

/// The seed after applying [`SEED_ENV`].
pub fn effective_seed(cli: u64) -> Result<u64, ConfigError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| invalid(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(cli),
    }
}

/// Runs one command. Status 0 means every checked inequality held, 1 that
/// some failed (failing instances are written for replay), 2 that the
/// configuration was rejected or the computation could not be carried out.
pub fn run(cfg: &ExperimentConfig) -> RunOutcome {
    let mut cfg = cfg.clone();
    let result = effective_seed(cfg.seed).and_then(|seed| {
        cfg.seed = seed;
        let mut ctx = Ctx { cfg: &cfg, files: Vec::new() };
        let (passed, message) = dispatch(&mut ctx)?;
        Ok((passed, message, ctx.files))
    });
    match result {
        Ok((passed, message, files)) => RunOutcome {
            status: if passed { ExitStatus::Ok } else { ExitStatus::Violations },
            message,
            files,
        },
        Err(e) => RunOutcome {
            status: ExitStatus::ConfigError,
            message: e.to_string(),
            files: Vec::new(),
        },
    }
}

fn dispatch(ctx: &mut Ctx) -> Result<(bool, String), ConfigError> {
    let cfg = ctx.cfg;
    if let Some(t) = cfg.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("--tol must be positive, got {t}")));
        }
    }
    if let Some(h) = cfg.h {
        if !(h > 0.0 && h.is_finite()) {
            return Err(invalid(format!("--h must be positive, got {h}")));
        }
    }
    match cfg.command {
        Command::Validate => validate(ctx),
        Command::Spectrum => spectrum_cmd(ctx, true),
        Command::Bounds => spectrum_cmd(ctx, false),
        Command::Weyl => weyl(ctx),
        Command::Partition => partition(ctx),
        Command::Approx => approx(ctx),
        Command::Sharpness => sharpness(ctx),
        Command::Snumbers => snumbers(ctx),
        Command::Kernel => kernel(ctx),
        Command::Suite(kind) => suite(ctx, kind),
    }
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn graph_path(cfg: &ExperimentConfig) -> Result<&Path, ConfigError> {
    cfg.graph
        .as_deref()
        .ok_or_else(|| invalid(format!("--graph is required for {}", cfg.command.name())))
}

fn load(cfg: &ExperimentConfig) -> Result<GraphInput, ConfigError> {
    let path = graph_path(cfg)?;
    let mut input = parse_graph(&read(path)?).map_err(|source| ConfigError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    if let Some(wp) = &cfg.weight {
        let map: BTreeMap<String, WeightRecord> = serde_json::from_str(&read(wp)?)
            .map_err(|e| invalid(format!("{}: {e}", wp.display())))?;
        let map = map
            .into_iter()
            .map(|(k, w)| (k, (w.breakpoints, w.values)))
            .collect();
        input.weight = Weight::from_map(&input.graph, &map)
            .map_err(|e| invalid(format!("{}: {e}", wp.display())))?;
    }
    Ok(input)
}

fn default_h(input: &GraphInput, cfg: &ExperimentConfig) -> f64 {
    cfg.h.unwrap_or(input.graph.total_length() / 200.0)
}

fn verdict(passed: bool, what: &str) -> String {
    if passed {
        format!("{what}: all checks hold")
    } else {
        format!("{what}: violations found")
    }
}

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<GraphSummary>,
}

#[derive(Serialize)]
struct GraphSummary {
    vertices: usize,
    edges: usize,
    total_length: f64,
    diameter: f64,
    cycle_rank: usize,
    is_tree: bool,
    root: String,
    integral_plus: f64,
    integral_minus: f64,
}

fn validate(ctx: &mut Ctx) -> Result<(bool, String), ConfigError> {
    let report = match load(ctx.cfg) {
        Ok(input) => {
            let g = &input.graph;
            ValidateReport {
                valid: true,
                violations: Vec::new(),
                summary: Some(GraphSummary {
                    vertices: g.vertex_count(),
                    edges: g.edge_count(),
                    total_length: g.total_length(),
                    diameter: diameter(g),
                    cycle_rank: g.cycle_rank(),
                    is_tree: g.is_tree(),
                    root: input.root.describe(g),
                    integral_plus: input.weight.integral_pos(),
                    integral_minus: input.weight.integral_neg(),
                }),
            }
        }
        Err(ConfigError::Parse {
            source: ParseError::Graph(GraphError::Invalid(v)),
            ..
        }) => ValidateReport {
            valid: false,
            violations: v.iter().map(|x| x.to_string()).collect(),
            summary: None,
        },
        Err(ConfigError::Parse {
            source: ParseError::Weight(e),
            ..
        }) => ValidateReport {
            valid: false,
            violations: vec![e.to_string()],
            summary: None,
        },
        Err(e) => return Err(e),
    };
    let valid = report.valid;
    let message = if valid {
        "graph is valid".to_string()
    } else {
        format!("graph is invalid: {}", report.violations.join("; "))
    };
    ctx.json(valid, report)?;
    Ok((valid, message))
}

#[derive(Serialize)]
struct SpectrumDoc {
    spectrum: spectral::Spectrum,
    bounds: spectral::BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    laplacian: Option<spectral::LaplacianReport>,
}

fn spectrum_cmd(ctx: &mut Ctx, full: bool) -> Result<(bool, String), ConfigError> {
    let cfg = ctx.cfg;
    let input = load(cfg)?;
    let (g, w) = (&input.graph, &input.weight);
    let h = default_h(&input, cfg);
    let slack = cfg.tol.unwrap_or(1e-9);
    let n_max = cfg.n_max.unwrap_or(20);
    let opts = SolveOptions {
        vectors: if full { SolveOptions::default().vectors } else { 0 },
    };
    let s = spectral::spectrum(g, w, std::slice::from_ref(&input.root), h, opts).map_err(computation)?;
    let bounds = spectral::bound_check(&s, g, w, Some(n_max), slack);
    let mut violations = bounds.violations;
    let laplacian = if full {
        None
    } else {
        let mu = spectral::laplacian_spectrum(g, &input.root, h).map_err(computation)?;
        let rep = spectral::laplacian_check(&mu, g.total_length(), n_max, slack);
        violations += rep.violations;
        Some(rep)
    };
    let (sp, sm) = w.sqrt_integrals();
    let mut rows = Vec::new();
    for (sign, br, sq) in [("+", &bounds.plus, sp), ("-", &bounds.minus, sm)] {
        for r in br {
            let weyl = if sq > 0.0 { r.n as f64 * r.lambda.sqrt() * PI / sq } else { f64::NAN };
            rows.push(if full {
                vec![
                    sign.into(),
                    r.n.to_string(),
                    num(r.lambda),
                    num(r.rhs),
                    num(r.margin()),
                    num(weyl),
                ]
            } else {
                vec![
                    sign.into(),
                    r.n.to_string(),
                    num(r.lambda),
                    num(r.lhs),
                    num(r.rhs),
                    num(r.refined_rhs),
                    num(r.margin()),
                    num(r.refined_margin()),
                ]
            });
        }
    }
    if full {
        ctx.csv(&["sign", "n", "lambda", "bound_rhs", "margin", "weyl_ratio"], &rows)?;
    } else {
        ctx.csv(
            &["sign", "n", "lambda", "n2_lambda", "bound_rhs", "refined_rhs", "margin", "refined_margin"],
            &rows,
        )?;
    }
    let passed = violations == 0;
    ctx.json(passed, SpectrumDoc { spectrum: s, bounds, laplacian })?;
    Ok((passed, verdict(passed, &cfg.command.name())))
}

fn weyl(ctx: &mut Ctx) -> Result<(bool, String), ConfigError> {
    let cfg = ctx.cfg;
    let input = load(cfg)?;
    let tol = cfg.tol.unwrap_or(0.03);
    let n_max = cfg.n_max.unwrap_or(25);
    let h = default_h(&input, cfg);
    let rep = spectral::weyl_check(&input.graph, &input.weight, &input.root, n_max, h, 2)
        .map_err(computation)?;
    let mut rows = Vec::new();
    for (sign, b) in [("+", &rep.plus), ("-", &rep.minus)] {
        if let Some(b) = b {
            for (k, r) in b.ratios.iter().enumerate() {
                rows.push(vec![sign.into(), (k + 1).to_string(), num(*r)]);
            }
        }
    }
    ctx.csv(&["sign", "n", "ratio"], &rows)?;
    let passed = rep.max_deviation() <= tol && rep.monotone_violations() == 0;
    let message = format!(
        "weyl: deviation {:.4} at n = {n_max} (allowed {tol})",
        rep.max_deviation()
    );
    ctx.json(passed, rep)?;
    Ok((passed, message))
}

fn parse_phi(spec: &str, w: &Weight) -> Result<SuperadditiveFn, ConfigError> {
    let phi = match spec {
        "phi_v" => SuperadditiveFn::phi_v(w.clone()),
        "measure" => Ok(SuperadditiveFn::measure()),
        "mass" => SuperadditiveFn::mass(w.clone()),
        other => match other.strip_prefix("phi_l:").map(str::parse::<u32>) {
            Some(Ok(l)) => SuperadditiveFn::phi_l(w.clone(), l),
            _ => return Err(invalid(format!("unknown --phi {other:?}; use phi_v, phi_l:<l>, measure or mass"))),
        },
    };
    phi.map_err(|e| invalid(e.to_string()))
}

#[derive(Serialize)]
struct PieceDoc {
    fragments: Vec<(String, f64, f64)>,
    puncture: String,
    phi: f64,
    phi_tilde: f64,
}

#[derive(Serialize)]
struct PartitionDoc {
    n: usize,
    phi: String,
    total: f64,
    bound: f64,
    certificate: f64,
    coverage_defect: f64,
    max_overlap: f64,
    pieces: Vec<PieceDoc>,
}

fn require_n(cfg: &ExperimentConfig) -> Result<usize, ConfigError> {
    match cfg.n {
        Some(0) => Err(invalid("--n must be positive")),
        Some(n) => Ok(n),
        None => Err(invalid(format!("--n is required for {}", cfg.command.name()))),
    }
}

fn partition(ctx: &mut Ctx) -> Result<(bool, String), ConfigError> {
    let cfg = ctx.cfg;
    let n = require_n(cfg)?;
    let input = load(cfg)?;
    let phi_name = cfg.phi.clone().unwrap_or_else(|| "phi_v".into());
    let phi = parse_phi(&phi_name, &input.weight)?;
    let tree = RootedTree::new(input.graph.clone(), input.root).map_err(|e| invalid(e.to_string()))?;
    let g = tree.graph();
    let p = tree::partition_n(&tree, &phi, n).map_err(computation)?;
    let total = phi.eval_subtree(&tree.whole());
    let bound = total / (n + 1) as f64;
    let certificate = p.certificate(g, &phi);
    let doc = PartitionDoc {
        n,
        phi: phi_name,
        total,
        bound,
        certificate,
        coverage_defect: p.coverage_defect(g),
        max_overlap: p.max_overlap(),
        pieces: p
            .pieces
            .iter()
            .map(|piece| PieceDoc {
                fragments: piece
                    .subtree
                    .fragments()
                    .iter()
                    .map(|f| (g.edge(f.edge).id.clone(), f.a, f.b))
                    .collect(),
                puncture: piece.puncture.describe(g),
                phi: phi.eval_subtree(&piece.subtree),
                phi_tilde: tree::phi_tilde(&phi, g, &piece.subtree, &piece.puncture)
                    .expect("puncture lies in its piece"),
            })
            .collect(),
    };
    let tol = 1e-9 * total;
    let passed = p.achieved() <= n
        && certificate <= bound + tol
        && doc.coverage_defect <= 1e-9 * g.total_length()
        && doc.max_overlap <= 1e-9 * g.total_length();
    let rows: Vec<Vec<String>> = doc
        .pieces
        .iter()
        .enumerate()
        .map(|(j, pc)| {
            vec![
                (j + 1).to_string(),
                pc.puncture.clone(),
                num(pc.fragments.iter().map(|f| f.2 - f.1).sum()),
                num(pc.phi),
                num(pc.phi_tilde),
            ]
        })
        .collect();
    ctx.csv(&["piece", "puncture", "measure", "phi", "phi_tilde"], &rows)?;
    let message = format!(
        "partition: {} pieces, max phi_tilde {certificate:.6} against {bound:.6}",
        p.achieved()
    );
    ctx.json(passed, doc)?;
    Ok((passed, message))
}

fn approx(ctx: &mut Ctx) -> Result<(bool, String), ConfigError> {
    let cfg = ctx.cfg;
    let n = require_n(cfg)?;
    let input = load(cfg)?;
    if !input.weight.is_nonnegative() {
        return Err(invalid("approx needs a nonnegative weight"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rep = tree::approx_bound_check(
        &input.graph,
        &input.weight,
        n,
        cfg.trials.unwrap_or(20),
        cfg.tol.unwrap_or(1e-9),
        &mut rng,
    )
    .map_err(computation)?;
    let passed = rep.violations == 0;
    let message = format!(
        "approx: {} violations in {} trials, worst ratio {:.6}",
        rep.violations, rep.trials, rep.worst_ratio
    );
    ctx.json(passed, rep)?;
    Ok((passed, message))
}

#[derive(Serialize)]
struct SharpnessDoc {
    bump: spectral::SharpnessReport,
    dirichlet_ratios: Vec<f64>,
}

fn sharpness(ctx: &mut Ctx) -> Result<(bool, String), ConfigError> {
    let cfg = ctx.cfg;
    let length = cfg.length.unwrap_or(1.0);
    let width = cfg.width.unwrap_or(0.01);
    let h = cfg.h.unwrap_or(length / 1000.0);
    let slack = cfg.tol.unwrap_or(1e-9);
    let bump = spectral::sharpness_search(length, width, h).map_err(|e| invalid(e.to_string()))?;
    let dirichlet_ratios = spectral::dirichlet_interval_ratios(length, cfg.n_max.unwrap_or(10), h)
        .map_err(computation)?;
    let passed = bump.ratio <= 1.0 + slack && dirichlet_ratios.iter().all(|&r| r <= 1.0 + slack);
    let rows: Vec<Vec<String>> = dirichlet_ratios
        .iter()
        .enumerate()
        .map(|(k, r)| vec![(k + 1).to_string(), num(*r)])
        .collect();
    ctx.csv(&["n", "dirichlet_ratio"], &rows)?;
    let message = format!(
        "sharpness: lambda_1 / (|G| int V) = {:.6} for width {width}",
        bump.ratio
    );
    ctx.json(passed, SharpnessDoc { bump, dirichlet_ratios })?;
    Ok((passed, message))
}

fn snumbers(ctx: &mut Ctx) -> Result<(bool, String), ConfigError> {
    let cfg = ctx.cfg;
    let input = load(cfg)?;
    let h = default_h(&input, cfg);
    let rep = spectral::snumbers_halfinv(&input.graph, &input.weight, &input.root, h, cfg.tol.unwrap_or(1e-9))
        .map_err(computation)?;
    let rows: Vec<Vec<String>> = rep
        .s
        .iter()
        .enumerate()
        .map(|(k, s)| vec![(k + 1).to_string(), num(*s), num(rep.constant / (k + 1) as f64)])
        .collect();
    ctx.csv(&["n", "s_n", "bound"], &rows)?;
    let passed = rep.violations == 0;
    let message = format!("snumbers: worst n s_n / (|G|^1/2 |a|_2) = {:.6}", rep.worst_ratio);
    ctx.json(passed, rep)?;
    Ok((passed, message))
}

fn kernel(ctx: &mut Ctx) -> Result<(bool, String), ConfigError> {
    let cfg = ctx.cfg;
    let input = load(cfg)?;
    let src = cfg
        .kernel
        .as_deref()
        .ok_or_else(|| invalid("--kernel is required for kernel"))?;
    let path = Path::new(src);
    let spec = if path.is_file() {
        KernelSpec::sampled(KernelSamples::parse(&read(path)?).map_err(|e| invalid(e.to_string()))?)
    } else {
        KernelSpec::expression(src).map_err(|e| invalid(e.to_string()))?
    }
    .vanishing(cfg.vanishing);
    let opts = KernelOptions {
        tail_tol: cfg.tail_tol.unwrap_or(KernelOptions::default().tail_tol),
        slack: cfg.tol.unwrap_or(1e-9),
    };
    let h = default_h(&input, cfg);
    let rep = check_kernel_bound(&spec, &input.graph, &input.root, h, opts).map_err(computation)?;
    let coeff = 4.0 * 6f64.sqrt() * rep.m.m.sqrt();
    let rows: Vec<Vec<String>> = rep
        .s
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let n = (k + 1) as f64;
            vec![(k + 1).to_string(), num(*s), num(coeff * n.powf(-1.5))]
        })
        .collect();
    ctx.csv(&["n", "s_n", "per_n_bound"], &rows)?;
    let passed = rep.passed();
    let message = format!(
        "kernel: sum n^2 s_n^2 = {:.6} against 32|G|^2 M = {:.6}",
        rep.series, rep.bound
    );
    ctx.json(passed, rep)?;
    Ok((passed, message))
}

#[derive(Serialize)]
struct ReplayDoc<'a> {
    suite: &'a str,
    seed: u64,
    trial: usize,
    args: Vec<String>,
}

fn suite(ctx: &mut Ctx, kind: SuiteKind) -> Result<(bool, String), ConfigError> {
    let cfg = ctx.cfg;
    let trials = cfg.trials.unwrap_or(100);
    if let Some(k) = cfg.trial {
        if k >= trials {
            return Err(invalid(format!("--trial {k} is not below --trials {trials}")));
        }
    }
    let mut sc = SuiteConfig::new(kind, trials, cfg.seed);
    sc.only = cfg.trial;
    if let Some(n) = cfg.n_max {
        sc.n_max = n;
    }
    if let Some(t) = cfg.tol {
        sc.slack = t;
    }
    let report = run_suite(&sc);
    for o in report.failures() {
        let Some(replay) = &o.replay else { continue };
        let stem = format!("violation-{}-{}", kind.name(), o.trial);
        let graph_name = format!("{stem}.graph.json");
        ctx.raw(&graph_name, emit_graph(&replay.instance).as_bytes())?;
        let mut args = replay.args.clone();
        if args.first().is_some_and(|a| a != "suite") {
            args.push("--graph".into());
            args.push(cfg.out.join(&graph_name).display().to_string());
        }
        let doc = ReplayDoc {
            suite: kind.name(),
            seed: cfg.seed,
            trial: o.trial,
            args,
        };
        ctx.raw(&format!("{stem}.json"), &json_bytes(&doc))?;
    }
    let passed = report.passed();
    let message = format!(
        "suite {}: {} trials, {} checks, {} violations, {} errors",
        kind.name(),
        report.trials,
        report.checks,
        report.violations,
        report.errors
    );
    ctx.json(passed, report)?;
    Ok((passed, message))
}
