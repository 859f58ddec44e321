//! Integral operators `(𝕂u)(x) = ∫_Γ K(x, y) u(y) dy` on metric graphs.
//!
//! Kernels are discretized by Nyström quadrature with composite-trapezoid
//! weights `W` on a finite-element mesh; the singular values of
//! `W^{1/2} K W^{1/2}` approximate the s-numbers of `𝕂` on `L²(Γ)`. The
//! variables `x` and `y` of a kernel expression are distances from the root.

mod expr;

pub use expr::{Expr, ExprError};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{vertex_distances_from, EdgeId, GraphPoint, MetricGraph, Weight};
use crate::linalg::{self, DenseMatrix, LinalgError};
use crate::spectral::{Mesh, SpectralError};

#[derive(Debug, Error)]
pub enum IntegralError {
    #[error("kernel expression: {0}")]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("singular value computation failed: {0}")]
    Linalg(#[from] LinalgError),
    #[error("kernel samples belong to mesh {found}, expected {expected}")]
    MeshMismatch { expected: String, found: String },
    #[error("malformed kernel samples: {0}")]
    SampleFormat(String),
    #[error("derivative estimate unstable: {fine} at step h/2 against {coarse} at step h")]
    DerivativeUnstable { fine: f64, coarse: f64 },
    #[error("kernel flagged as vanishing at the root takes the value {value} there")]
    NotVanishing { value: f64 },
    #[error("s-numbers decay like n^-{p}, too slowly for a convergent series")]
    SlowDecay { p: f64 },
    #[error("series tail {tail} exceeds {tol} of the head {head}; refine the mesh")]
    UnderResolved { head: f64, tail: f64, tol: f64 },
}

/// Kernel values at the nodes of a mesh, row-major over node pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSamples {
    pub mesh_hash: String,
    pub n: usize,
    pub values: Vec<f64>,
}

impl KernelSamples {
    /// `# mesh <hash> <n>` followed by `n` comma-separated rows.
    pub fn to_text(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for row in self.values.chunks(self.n.max(1)) {
            w.write_record(row.iter().map(|v| v.to_string()))
                .expect("writing to memory");
        }
        let body = String::from_utf8(w.into_inner().expect("writing to memory")).expect("ascii");
        format!("# mesh {} {}\n{}", self.mesh_hash, self.n, body)
    }

    pub fn parse(text: &str) -> Result<Self, IntegralError> {
        let bad = |m: String| IntegralError::SampleFormat(m);
        let (header, body) = text.split_once('\n').unwrap_or((text, ""));
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [ "#", "mesh", hash, n ] = fields[..] else {
            return Err(bad(format!("header must read '# mesh <hash> <n>', got {header:?}")));
        };
        let n: usize = n.parse().map_err(|_| bad(format!("bad node count {n:?}")))?;
        let mut values = Vec::with_capacity(n * n);
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(body.as_bytes());
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            if rec.len() != n {
                return Err(bad(format!("row {} has {} values, expected {n}", i + 1, rec.len())));
            }
            for f in rec.iter() {
                values.push(f.parse().map_err(|_| bad(format!("bad value {f:?} in row {}", i + 1)))?);
            }
        }
        if values.len() != n * n {
            return Err(bad(format!("{} rows, expected {n}", values.len() / n.max(1))));
        }
        Ok(Self {
            mesh_hash: hash.to_string(),
            n,
            values,
        })
    }

    fn transposed(&self) -> Self {
        let n = self.n;
        Self {
            mesh_hash: self.mesh_hash.clone(),
            n,
            values: (0..n * n).map(|k| self.values[(k % n) * n + k / n]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelSource {
    Expression(Expr),
    Sampled(KernelSamples),
}

/// A kernel, optionally flagged as vanishing at the root in its first
/// variable, `K(x₀, y) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub source: KernelSource,
    pub vanishing: bool,
}

impl KernelSpec {
    pub fn expression(src: &str) -> Result<Self, IntegralError> {
        Ok(Self {
            source: KernelSource::Expression(Expr::parse(src)?),
            vanishing: false,
        })
    }

    pub fn sampled(samples: KernelSamples) -> Self {
        Self {
            source: KernelSource::Sampled(samples),
            vanishing: false,
        }
    }

    pub fn vanishing(mut self, flag: bool) -> Self {
        self.vanishing = flag;
        self
    }

    /// `K(y, x)`; the vanishing flag is dropped.
    pub fn transposed(&self) -> Self {
        Self {
            source: match &self.source {
                KernelSource::Expression(e) => KernelSource::Expression(e.transposed()),
                KernelSource::Sampled(s) => KernelSource::Sampled(s.transposed()),
            },
            vanishing: false,
        }
    }

    pub fn label(&self) -> String {
        match &self.source {
            KernelSource::Expression(e) => e.to_string(),
            KernelSource::Sampled(s) => format!("samples on mesh {}", s.mesh_hash),
        }
    }
}

/// The mesh a kernel is sampled on: Dirichlet-free apart from the root
/// node, spacing at most `h`.
pub fn kernel_mesh(g: &MetricGraph, root: &GraphPoint, h: f64) -> Result<Mesh, IntegralError> {
    Ok(Mesh::build(g, &Weight::zero(g), std::slice::from_ref(root), h)?)
}

/// Distance from `root` to every node of `mesh`.
pub fn root_distances(g: &MetricGraph, root: &GraphPoint, mesh: &Mesh) -> Vec<f64> {
    let dv = vertex_distances_from(g, root);
    mesh.node_locations()
        .into_iter()
        .map(|(e, t)| {
            let edge = g.edge(e);
            let mut d = (dv[edge.from.0] + t).min(dv[edge.to.0] + edge.length - t);
            if let Some(tr) = root.offset_on(g, e) {
                d = d.min((t - tr).abs());
            }
            d
        })
        .collect()
}

/// Samples an expression kernel on [`kernel_mesh`].
pub fn sample_kernel(
    expr: &Expr,
    g: &MetricGraph,
    root: &GraphPoint,
    h: f64,
) -> Result<KernelSamples, IntegralError> {
    let mesh = kernel_mesh(g, root, h)?;
    let values = evaluate(expr, &root_distances(g, root, &mesh));
    Ok(KernelSamples {
        mesh_hash: mesh.hash(g),
        n: mesh.node_count(),
        values,
    })
}

fn evaluate(expr: &Expr, coords: &[f64]) -> Vec<f64> {
    coords
        .par_iter()
        .flat_map_iter(|&x| coords.iter().map(move |&y| expr.eval(x, y)))
        .collect()
}

/// Kernel values on a mesh, row-major.
struct Discrete {
    mesh: Mesh,
    values: Vec<f64>,
}

impl Discrete {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.mesh.node_count() + j]
    }
}

fn discretize(
    k: &KernelSpec,
    g: &MetricGraph,
    root: &GraphPoint,
    h: f64,
    refine: bool,
) -> Result<Discrete, IntegralError> {
    let mut mesh = kernel_mesh(g, root, h)?;
    let values = match &k.source {
        KernelSource::Expression(e) => {
            if refine {
                mesh = mesh.refine();
            }
            evaluate(e, &root_distances(g, root, &mesh))
        }
        KernelSource::Sampled(s) => {
            let expected = mesh.hash(g);
            if s.mesh_hash != expected || s.n != mesh.node_count() {
                return Err(IntegralError::MeshMismatch {
                    expected: format!("{expected} with {} nodes", mesh.node_count()),
                    found: format!("{} with {} nodes", s.mesh_hash, s.n),
                });
            }
            s.values.clone()
        }
    };
    let d = Discrete { mesh, values };
    if k.vanishing {
        let r = d.mesh.node_at(root).expect("the root is a mesh node");
        let worst = (0..d.mesh.node_count()).map(|j| d.at(r, j).abs()).fold(0.0, f64::max);
        if worst > 1e-12 {
            return Err(IntegralError::NotVanishing { value: worst });
        }
    }
    Ok(d)
}

/// `M(K, Γ) = ∫∫ |K|² + |Γ|² ∫∫ |K'_x|²` and its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MFunctional {
    pub m: f64,
    /// `∫∫ |K|²`.
    pub kernel_sq: f64,
    /// `∫∫ |K'_x|²` from chords of the finer step.
    pub derivative: f64,
    /// The same integral from chords of twice the step.
    pub derivative_coarse: f64,
}

/// `∫∫ |(K(b, y) - K(a, y)) / (b - a)|² (b - a) dy` over chords `[a, b]`
/// joining every `stride`-th node along each edge.
fn chord_derivative(d: &Discrete, weights: &[f64], stride: usize) -> f64 {
    let mesh = &d.mesh;
    let n = mesh.node_count();
    let mut total = 0.0;
    for e in 0..mesh.edge_count() {
        let o = mesh.offsets(EdgeId(e));
        let ids = mesh.edge_nodes(EdgeId(e));
        let mut k = 0;
        while k + 1 < o.len() {
            let next = (k + stride).min(o.len() - 1);
            let len = o[next] - o[k];
            let (a, b) = (ids[k], ids[next]);
            let s: f64 = (0..n)
                .map(|j| weights[j] * (d.at(b, j) - d.at(a, j)).powi(2))
                .sum();
            total += s / len;
            k = next;
        }
    }
    total
}

/// Quadrature of `M(K, Γ)`. Expression kernels are evaluated on the mesh
/// of step `h/2`; sampled kernels on their own mesh. The derivative is
/// accepted when chords of one and two elements agree within `1e-3`.
pub fn m_functional(
    k: &KernelSpec,
    g: &MetricGraph,
    root: &GraphPoint,
    h: f64,
) -> Result<MFunctional, IntegralError> {
    let d = discretize(k, g, root, h, true)?;
    let w = d.mesh.trapezoid_weights();
    let n = d.mesh.node_count();
    let kernel_sq: f64 = (0..n)
        .map(|i| w[i] * (0..n).map(|j| w[j] * d.at(i, j).powi(2)).sum::<f64>())
        .sum();
    let fine = chord_derivative(&d, &w, 1);
    let coarse = chord_derivative(&d, &w, 2);
    if (fine - coarse).abs() > 1e-3 * fine.abs().max(coarse.abs()) {
        return Err(IntegralError::DerivativeUnstable { fine, coarse });
    }
    let total = g.total_length();
    Ok(MFunctional {
        m: kernel_sq + total * total * fine,
        kernel_sq,
        derivative: fine,
        derivative_coarse: coarse,
    })
}

/// Singular values of `W^{1/2} K W^{1/2}` on the mesh of step `h`,
/// descending.
pub fn singular_values(
    k: &KernelSpec,
    g: &MetricGraph,
    root: &GraphPoint,
    h: f64,
) -> Result<Vec<f64>, IntegralError> {
    let d = discretize(k, g, root, h, false)?;
    let sw: Vec<f64> = d.mesh.trapezoid_weights().iter().map(|w| w.sqrt()).collect();
    let m = DenseMatrix::from_fn(d.mesh.node_count(), |i, j| sw[i] * d.at(i, j) * sw[j]);
    Ok(linalg::singular_values(m)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    /// Largest admissible `tail / head` of `Σ n² s_n²`.
    pub tail_tol: f64,
    /// Relative slack on every inequality.
    pub slack: f64,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self {
            tail_tol: 1e-6,
            slack: 1e-9,
        }
    }
}

/// Power law `s_n ≈ c n^{-p}` fitted on the upper half of the resolved range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailFit {
    pub c: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    pub kernel: String,
    pub vanishing: bool,
    pub total_length: f64,
    pub dof: usize,
    /// `s_1 ≥ … ≥ s_N`.
    pub s: Vec<f64>,
    /// Count of `s_n > 1e-6 s_1`.
    pub rank: usize,
    pub head: f64,
    pub tail: f64,
    pub tail_fit: Option<TailFit>,
    /// `Σ n² s_n²`, head plus tail.
    pub series: f64,
    pub m: MFunctional,
    /// `32 |Γ|² M`.
    pub bound: f64,
    /// `8 |Γ|² ∫∫|K'_x|²`, for kernels vanishing at the root.
    pub refined_bound: Option<f64>,
    /// Per-`n` bound `4√6 n^{-3/2} M^{1/2}` violations for `n ≤ N`.
    pub per_n_violations: usize,
    /// `max_n s_n n^{3/2} / M^{1/2}`, to compare with `4√6`.
    pub per_n_constant: f64,
    /// `series / (|Γ|² M)`, to compare with `32`.
    pub constant: f64,
    /// `series / (|Γ|² ∫∫|K'_x|²)`, to compare with `8`.
    pub refined_constant: Option<f64>,
    /// `s_n n^{3/2}` is smaller over the upper half of the resolved range
    /// than over the lower half.
    pub decay_ok: bool,
    pub violations: usize,
}

impl KernelReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn fit_power_law(s: &[f64], lo: usize, hi: usize) -> TailFit {
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .map(|n| ((n as f64).ln(), s[n - 1].ln()))
        .collect();
    let k = pts.len() as f64;
    let (mx, my) = (
        pts.iter().map(|p| p.0).sum::<f64>() / k,
        pts.iter().map(|p| p.1).sum::<f64>() / k,
    );
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    TailFit {
        c: (my - slope * mx).exp(),
        p: -slope,
    }
}

/// Checks `Σ n² s_n² ≤ 32 |Γ|² M(K, Γ)`, the refined bound
/// `≤ 8 |Γ|² ∫∫|K'_x|²` for kernels vanishing at the root, and
/// `s_n ≤ 4√6 n^{-3/2} M^{1/2}` for every resolved `n`.
///
/// The series is summed to `N = min(rank, dof/4)`. Past `N` it is bounded
/// by the computed values when `N` is the rank, and otherwise by the
/// integral of a power law fitted on `[N/2, N]`.
pub fn check_kernel_bound(
    k: &KernelSpec,
    g: &MetricGraph,
    root: &GraphPoint,
    h: f64,
    opts: KernelOptions,
) -> Result<KernelReport, IntegralError> {
    let m = m_functional(k, g, root, h)?;
    let all = singular_values(k, g, root, h)?;
    let dof = all.len();
    let s1 = all.first().copied().unwrap_or(0.0);
    let rank = if s1 > 0.0 {
        all.iter().take_while(|&&s| s > 1e-6 * s1).count()
    } else {
        0
    };
    let n_terms = rank.min(dof / 4).max(rank.min(1));
    let term = |n: usize| (n * n) as f64 * all[n - 1] * all[n - 1];
    let head: f64 = (1..=n_terms).map(term).sum();
    let (tail, tail_fit) = if n_terms == rank {
        ((n_terms + 1..=dof).map(term).sum(), None)
    } else {
        let fit = fit_power_law(&all, n_terms.div_ceil(2).max(1), n_terms);
        if fit.p <= 1.5 {
            return Err(IntegralError::SlowDecay { p: fit.p });
        }
        let tail = fit.c * fit.c * (n_terms as f64).powf(3.0 - 2.0 * fit.p) / (2.0 * fit.p - 3.0);
        (tail, Some(fit))
    };
    if tail > opts.tail_tol * head {
        return Err(IntegralError::UnderResolved {
            head,
            tail,
            tol: opts.tail_tol,
        });
    }
    let series = head + tail;
    let total = g.total_length();
    let l2 = total * total;
    let bound = 32.0 * l2 * m.m;
    let refined_bound = k.vanishing.then(|| 8.0 * l2 * m.derivative);
    let mut violations = 0;
    if series > bound * (1.0 + opts.slack) {
        violations += 1;
    }
    if let Some(b) = refined_bound {
        if series > b * (1.0 + opts.slack) {
            violations += 1;
        }
    }
    let s: Vec<f64> = all[..n_terms].to_vec();
    let scaled: Vec<f64> = s
        .iter()
        .enumerate()
        .map(|(i, v)| v * ((i + 1) as f64).powf(1.5))
        .collect();
    let root_m = m.m.sqrt();
    let coeff = 4.0 * 6f64.sqrt() * root_m;
    let per_n_violations = scaled.iter().filter(|&&r| r > coeff * (1.0 + opts.slack)).count();
    violations += per_n_violations;
    let per_n_constant = if root_m > 0.0 {
        scaled.iter().fold(0.0f64, |a, &r| a.max(r)) / root_m
    } else {
        0.0
    };
    let decay_ok = if scaled.len() < 4 {
        true
    } else {
        let half = scaled.len() / 2;
        let lower = scaled[..half].iter().fold(0.0f64, |a, &r| a.max(r));
        let upper = scaled[half..].iter().fold(0.0f64, |a, &r| a.max(r));
        upper < lower
    };
    if !decay_ok {
        violations += 1;
    }
    let ratio = |b: f64| if b > 0.0 { series / b } else { 0.0 };
    Ok(KernelReport {
        kernel: k.label(),
        vanishing: k.vanishing,
        total_length: total,
        dof,
        s,
        rank,
        head,
        tail,
        tail_fit,
        series,
        m,
        bound,
        refined_bound,
        per_n_violations,
        per_n_constant,
        constant: ratio(l2 * m.m),
        refined_constant: refined_bound.map(|_| ratio(l2 * m.derivative)),
        decay_ok,
        violations,
    })
}
