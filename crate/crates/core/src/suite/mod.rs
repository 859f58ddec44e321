//! Seeded randomized checks.
//!
//! Trial `k` of a suite draws from `ChaCha8(seed)` on stream `k`, so each
//! trial is reproducible on its own and results do not depend on the number
//! of worker threads. Trials run in parallel and are collected in order.

mod gen;

pub use gen::{random_cyclic, random_root, random_tree, random_weight};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphInput, GraphPoint, MetricGraph, Weight};
use crate::spectral::{self, SolveOptions, SpectralError};
use crate::tree::{self, RootedTree, SuperadditiveFn, TreeError};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    /// Eigenvalue bounds for both signs, the `V ≡ 1` bound and homogeneity.
    Bounds,
    /// Partition certificates for `Φ_V`, `Φ_2` and the measure.
    Partition,
    /// Step-function approximation bound.
    Approx,
    /// Superadditivity and monotonicity on random subtree partitions.
    Superadditive,
    /// s-numbers of `a (-Δ)^{-1/2}`.
    Snumbers,
    /// Cycle cutting and pullback identities.
    Cuts,
    /// Single-split certificates and walk monotonicity.
    Split,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 7] = [
        Self::Bounds,
        Self::Partition,
        Self::Approx,
        Self::Superadditive,
        Self::Snumbers,
        Self::Cuts,
        Self::Split,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Bounds => "bounds",
            Self::Partition => "partition",
            Self::Approx => "approx",
            Self::Superadditive => "superadditive",
            Self::Snumbers => "snumbers",
            Self::Cuts => "cuts",
            Self::Split => "split",
        }
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for SuiteKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
                format!("unknown suite {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub kind: SuiteKind,
    pub trials: usize,
    pub seed: u64,
    /// Largest index `n` checked where a suite has one.
    pub n_max: usize,
    /// Relative slack on inequalities.
    pub slack: f64,
    /// Mesh spacing is `|Γ| / resolution`.
    pub resolution: usize,
    /// Runs only this trial.
    pub only: Option<usize>,
}

impl SuiteConfig {
    pub fn new(kind: SuiteKind, trials: usize, seed: u64) -> Self {
        Self {
            kind,
            trials,
            seed,
            n_max: 20,
            slack: 1e-9,
            resolution: 200,
            only: None,
        }
    }
}

/// A trial instance with the command that re-checks it standalone.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub instance: GraphInput,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub graph: String,
    pub edges: usize,
    pub checks: usize,
    pub violations: usize,
    /// Worst observed ratio of checked side to bound; at most 1 when a
    /// one-sided inequality holds.
    pub worst: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// The instance and the command that re-checks it standalone.
    #[serde(skip)]
    pub replay: Option<Replay>,
}

impl TrialOutcome {
    fn new(trial: usize, g: &MetricGraph) -> Self {
        Self {
            trial,
            graph: if g.is_tree() { "tree" } else { "cyclic" }.into(),
            edges: g.edge_count(),
            checks: 0,
            violations: 0,
            worst: 0.0,
            extra: BTreeMap::new(),
            error: None,
            replay: None,
        }
    }

    pub fn failed(&self) -> bool {
        self.violations > 0 || self.error.is_some()
    }

    fn record(&mut self, ok: bool) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
        }
    }

    fn worst(&mut self, v: f64) {
        self.worst = self.worst.max(v);
    }

    fn extra_max(&mut self, key: &str, v: f64) {
        let e = self.extra.entry(key.into()).or_insert(v);
        *e = e.max(v);
    }

    fn extra_min(&mut self, key: &str, v: f64) {
        let e = self.extra.entry(key.into()).or_insert(v);
        *e = e.min(v);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteKind,
    pub seed: u64,
    pub trials: usize,
    pub checks: usize,
    pub violations: usize,
    pub errors: usize,
    pub worst: f64,
    pub outcomes: Vec<TrialOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.errors == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &TrialOutcome> {
        self.outcomes.iter().filter(|o| o.failed())
    }
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let trials: Vec<usize> = match cfg.only {
        Some(k) => vec![k],
        None => (0..cfg.trials).collect(),
    };
    let outcomes: Vec<TrialOutcome> = trials
        .par_iter()
        .map(|&k| run_trial(cfg, k))
        .collect();
    SuiteReport {
        suite: cfg.kind,
        seed: cfg.seed,
        trials: outcomes.len(),
        checks: outcomes.iter().map(|o| o.checks).sum(),
        violations: outcomes.iter().map(|o| o.violations).sum(),
        errors: outcomes.iter().filter(|o| o.error.is_some()).count(),
        worst: outcomes.iter().map(|o| o.worst).fold(0.0, f64::max),
        outcomes,
    }
}

fn run_trial(cfg: &SuiteConfig, k: usize) -> TrialOutcome {
    let mut rng = trial_rng(cfg.seed, k);
    let cyclic = match cfg.kind {
        // four trees for every cyclic graph
        SuiteKind::Bounds => k % 5 == 4,
        SuiteKind::Approx => k % 2 == 1,
        SuiteKind::Cuts => true,
        _ => false,
    };
    let g = if cyclic { random_cyclic(&mut rng) } else { random_tree(&mut rng) };
    let signed = matches!(cfg.kind, SuiteKind::Bounds | SuiteKind::Snumbers | SuiteKind::Cuts);
    let weight = random_weight(&g, &mut rng, signed);
    let root = random_root(&g, &mut rng);
    let mut out = TrialOutcome::new(k, &g);
    let instance = GraphInput {
        graph: g,
        weight,
        root,
    };
    let result = match cfg.kind {
        SuiteKind::Bounds => bounds_trial(cfg, &instance, &mut rng, &mut out),
        SuiteKind::Partition => partition_trial(cfg, &instance, &mut out),
        SuiteKind::Approx => approx_trial(cfg, &instance, &mut rng, &mut out),
        SuiteKind::Superadditive => superadditive_trial(&instance, &mut rng, &mut out),
        SuiteKind::Snumbers => snumbers_trial(cfg, &instance, &mut out),
        SuiteKind::Cuts => cuts_trial(&instance, &mut rng, &mut out),
        SuiteKind::Split => split_trial(&instance, &mut rng, &mut out),
    };
    match result {
        Ok(args) => {
            out.replay = Some(Replay {
                instance,
                args,
            })
        }
        Err(e) => {
            out.error = Some(e.to_string());
            out.replay = Some(Replay {
                instance,
                args: suite_args(cfg, k),
            });
        }
    }
    out
}

fn suite_args(cfg: &SuiteConfig, k: usize) -> Vec<String> {
    strings(&[
        "suite",
        cfg.kind.name(),
        "--seed",
        &cfg.seed.to_string(),
        "--trial",
        &k.to_string(),
        "--trials",
        &cfg.trials.to_string(),
    ])
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn step(g: &MetricGraph, cfg: &SuiteConfig) -> f64 {
    g.total_length() / cfg.resolution as f64
}

fn bounds_trial<R: Rng + ?Sized>(
    cfg: &SuiteConfig,
    inst: &GraphInput,
    rng: &mut R,
    out: &mut TrialOutcome,
) -> Result<Vec<String>, SuiteError> {
    let (g, w, root) = (&inst.graph, &inst.weight, &inst.root);
    let h = step(g, cfg);
    let dirichlet = std::slice::from_ref(root);
    let opts = SolveOptions { vectors: 0 };
    let s = spectral::spectrum(g, w, dirichlet, h, opts)?;
    let rep = spectral::bound_check(&s, g, w, Some(cfg.n_max), cfg.slack);
    out.checks += rep.plus.len() + rep.minus.len();
    out.violations += rep.violations;
    out.worst(rep.worst_ratio);

    let mu = spectral::laplacian_spectrum(g, root, h)?;
    let lap = spectral::laplacian_check(&mu, g.total_length(), cfg.n_max, cfg.slack);
    out.checks += lap.rows.len();
    out.violations += lap.violations;
    out.extra_min("laplacian_ratio", lap.worst_ratio);

    // λ(cΓ, V) = c² λ(Γ, V) and λ(Γ, aV) = a λ(Γ, V); c = 2 keeps the mesh
    // exactly similar
    let c = 2.0;
    let big = g.scaled(c);
    let big_root = match *root {
        GraphPoint::Vertex(v) => GraphPoint::Vertex(v),
        GraphPoint::Interior { edge, offset } => GraphPoint::on_edge(&big, edge, offset * c)
            .map_err(TreeError::from)?,
    };
    let sc = spectral::spectrum(&big, &w.transported(c), &[big_root], h * c, opts)?;
    let a = rng.random_range(0.5..=3.0);
    let sa = spectral::spectrum(g, &w.scaled(a), dirichlet, h, opts)?;
    let top = s.plus.first().copied().unwrap_or(0.0).max(s.minus.first().copied().unwrap_or(0.0));
    let mut worst_rel = 0.0f64;
    for (base, scaled, factor) in [
        (&s.plus, &sc.plus, c * c),
        (&s.minus, &sc.minus, c * c),
        (&s.plus, &sa.plus, a),
        (&s.minus, &sa.minus, a),
    ] {
        if base.len() != scaled.len() {
            worst_rel = f64::INFINITY;
            continue;
        }
        for (x, y) in base.iter().zip(scaled).take(cfg.n_max) {
            if *x > 1e-8 * top {
                worst_rel = worst_rel.max((y - factor * x).abs() / (factor * x));
            }
        }
    }
    out.record(worst_rel <= 1e-10);
    out.extra_max("homogeneity_rel", worst_rel);
    Ok(strings(&[
        "bounds",
        "--nmax",
        &cfg.n_max.to_string(),
        "--h",
        &h.to_string(),
        "--tol",
        &cfg.slack.to_string(),
    ]))
}

fn phis(w: &Weight) -> Result<Vec<(&'static str, SuperadditiveFn)>, TreeError> {
    Ok(vec![
        ("phi_v", SuperadditiveFn::phi_v(w.clone())?),
        ("phi_l:2", SuperadditiveFn::phi_l(w.clone(), 2)?),
        ("measure", SuperadditiveFn::measure()),
    ])
}

fn partition_trial(
    cfg: &SuiteConfig,
    inst: &GraphInput,
    out: &mut TrialOutcome,
) -> Result<Vec<String>, SuiteError> {
    let tree = RootedTree::new(inst.graph.clone(), inst.root)?;
    let g = tree.graph();
    let mut first_bad: Option<(usize, &str)> = None;
    for (name, phi) in phis(&inst.weight)? {
        let total = phi.eval_subtree(&tree.whole());
        for n in 1..=cfg.n_max.min(10) {
            let p = tree::partition_n(&tree, &phi, n)?;
            let cert = p.certificate(g, &phi);
            let bound = total / (n + 1) as f64;
            let ok = p.achieved() <= n
                && cert <= bound + 1e-9 * total
                && p.coverage_defect(g) <= 1e-9 * g.total_length()
                && p.max_overlap() <= 1e-9 * g.total_length();
            out.record(ok);
            if total > 0.0 {
                out.worst(cert / bound);
            }
            if !ok && first_bad.is_none() {
                first_bad = Some((n, name));
            }
        }
    }
    let (n, name) = first_bad.unwrap_or((1, "phi_v"));
    Ok(strings(&["partition", "--n", &n.to_string(), "--phi", name]))
}

fn approx_trial<R: Rng + ?Sized>(
    cfg: &SuiteConfig,
    inst: &GraphInput,
    rng: &mut R,
    out: &mut TrialOutcome,
) -> Result<Vec<String>, SuiteError> {
    let mut replay = None;
    for n in 1..=cfg.n_max.min(8) {
        let seed: u64 = rng.random();
        let mut fn_rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = tree::approx_bound_check(&inst.graph, &inst.weight, n, 20, cfg.slack, &mut fn_rng)?;
        out.checks += rep.trials;
        out.violations += rep.violations;
        out.worst(rep.worst_ratio);
        if rep.violations > 0 && replay.is_none() {
            replay = Some(strings(&[
                "approx",
                "--n",
                &n.to_string(),
                "--trials",
                "20",
                "--seed",
                &seed.to_string(),
                "--tol",
                &cfg.slack.to_string(),
            ]));
        }
    }
    Ok(replay.unwrap_or_default())
}

fn superadditive_trial<R: Rng + ?Sized>(
    inst: &GraphInput,
    rng: &mut R,
    out: &mut TrialOutcome,
) -> Result<Vec<String>, SuiteError> {
    let tree = RootedTree::new(inst.graph.clone(), inst.root)?;
    let alpha = rng.random_range(0.05..0.95);
    let mass = SuperadditiveFn::mass(inst.weight.clone())?;
    let mut fns = phis(&inst.weight)?;
    fns.push(("holder", SuperadditiveFn::holder(SuperadditiveFn::measure(), mass, alpha)?));
    for (_, phi) in fns {
        let rep = tree::check_superadditive(&phi, &tree, 10, rng)?;
        out.checks += rep.trials;
        out.violations += rep.violations + rep.monotone_violations;
        out.worst(-rep.worst_margin);
        out.extra_min("worst_margin", rep.worst_margin);
    }
    Ok(Vec::new())
}

fn snumbers_trial(
    cfg: &SuiteConfig,
    inst: &GraphInput,
    out: &mut TrialOutcome,
) -> Result<Vec<String>, SuiteError> {
    let h = step(&inst.graph, cfg);
    let rep = spectral::snumbers_halfinv(&inst.graph, &inst.weight, &inst.root, h, cfg.slack)?;
    out.checks += rep.s.len();
    out.violations += rep.violations;
    out.worst(rep.worst_ratio);
    Ok(strings(&["snumbers", "--h", &h.to_string(), "--tol", &cfg.slack.to_string()]))
}

fn cuts_trial<R: Rng + ?Sized>(
    inst: &GraphInput,
    rng: &mut R,
    out: &mut TrialOutcome,
) -> Result<Vec<String>, SuiteError> {
    let g = &inst.graph;
    let cut = tree::cut_cycles(g)?;
    out.record(cut.tree.is_tree());
    out.record(cut.length_defect() == 0.0);
    out.record(cut.cuts() == g.cycle_rank());
    out.record(cut.pairs.iter().all(|&(a, b)| {
        cut.tau(&GraphPoint::Vertex(a)) == cut.tau(&GraphPoint::Vertex(b))
    }));
    let pulled = cut.pull_weight(&inst.weight);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let u = tree::random_test_function(g, rng);
        let on_graph = u.weighted_l2_sq(&inst.weight);
        let on_tree = cut.pull_function(&u).weighted_l2_sq(&pulled);
        let scale = on_graph.abs().max(on_tree.abs()).max(1.0);
        let rel = (on_graph - on_tree).abs() / scale;
        worst = worst.max(rel);
        out.record(rel <= 1e-12);
    }
    out.extra_max("pullback_rel", worst);
    out.worst(worst);
    Ok(strings(&["validate"]))
}

fn split_trial<R: Rng + ?Sized>(
    inst: &GraphInput,
    rng: &mut R,
    out: &mut TrialOutcome,
) -> Result<Vec<String>, SuiteError> {
    let tree = RootedTree::new(inst.graph.clone(), inst.root)?;
    let g = tree.graph();
    for (_, phi) in phis(&inst.weight)? {
        let total = phi.eval_subtree(&tree.whole());
        if total == 0.0 {
            continue;
        }
        for _ in 0..5 {
            let eps = total * rng.random_range(0.001..0.999);
            let sp = tree::split_once(&tree, &phi, eps)?;
            let tol = 1e-9 * total;
            let tilde = tree::phi_tilde(&phi, g, &sp.piece.subtree, &sp.piece.puncture)?;
            let plus = phi.eval_subtree(&sp.piece.subtree);
            let rest = phi.eval_subtree(&sp.rest);
            out.record(rest <= total - eps + tol);
            out.record(tilde <= eps + tol);
            out.record(eps <= plus + tol);
            out.record(tilde <= plus + tol);
            out.record(sp.trace.windows(2).all(|w| w[1].value <= w[0].value + 1e-12 * total));
            out.worst((tilde - eps) / total + 1.0);
        }
    }
    Ok(Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in SuiteKind::ALL {
            assert_eq!(k.name().parse::<SuiteKind>().unwrap(), k);
        }
        assert!("nope".parse::<SuiteKind>().is_err());
    }

    #[test]
    fn small_suites_pass_and_repeat() {
        for kind in SuiteKind::ALL {
            let cfg = SuiteConfig::new(kind, 3, 11);
            let a = run_suite(&cfg);
            assert!(a.passed(), "{kind}: {:?}", a.failures().collect::<Vec<_>>());
            assert_eq!(a, run_suite(&cfg));
        }
    }
}
