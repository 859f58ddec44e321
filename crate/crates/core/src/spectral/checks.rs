use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::{assemble, solve_generalized, spectrum, Mesh, SolveOptions, SpectralError, Spectrum};
use crate::graph::{diameter, samples, GraphPoint, MetricGraph, PiecewiseConstant, VertexId, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Neumann at `0`, Dirichlet at `L`.
    OnePoint,
    /// Dirichlet at both ends.
    TwoPoint,
}

/// Closed-form eigenvalues of `-λu″ = u` on `[0, L]`, descending.
pub fn exact_interval_spectrum(length: f64, boundary: Boundary, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|n| {
            let n = n as f64;
            match boundary {
                Boundary::OnePoint => 4.0 * length * length / ((2.0 * n - 1.0).powi(2) * PI * PI),
                Boundary::TwoPoint => (length / (n * PI)).powi(2),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub n: usize,
    pub lambda: f64,
    /// `n² λ_n`.
    pub lhs: f64,
    /// `|Γ| ∫V±`.
    pub rhs: f64,
    /// `min(|Γ|/n², diam Γ) ∫V±`.
    pub refined_rhs: f64,
}

impl BoundRow {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn refined_margin(&self) -> f64 {
        self.refined_rhs - self.lambda
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub total_length: f64,
    pub diameter: f64,
    pub integral_plus: f64,
    pub integral_minus: f64,
    /// `|Γ| ∫|V|`, the bound on the form itself.
    pub form_bound: f64,
    pub plus: Vec<BoundRow>,
    pub minus: Vec<BoundRow>,
    pub violations: usize,
    /// Largest `n² λ_n / (|Γ| ∫V±)` over both signs.
    pub worst_ratio: f64,
}

/// Checks `n² λ_n^± ≤ |Γ| ∫V±`, `λ_n^± ≤ min(|Γ|/n², diam Γ) ∫V±` and
/// `λ_1^± ≤ |Γ| ∫|V|` for `n ≤ n_max`, allowing a relative `slack`.
pub fn bound_check(
    s: &Spectrum,
    g: &MetricGraph,
    weight: &Weight,
    n_max: Option<usize>,
    slack: f64,
) -> BoundReport {
    let total = g.total_length();
    let diam = diameter(g);
    let (ip, im) = (weight.integral_pos(), weight.integral_neg());
    let rows = |lambdas: &[f64], integral: f64| -> Vec<BoundRow> {
        lambdas
            .iter()
            .take(n_max.unwrap_or(usize::MAX))
            .enumerate()
            .map(|(k, &lambda)| {
                let n = (k + 1) as f64;
                BoundRow {
                    n: k + 1,
                    lambda,
                    lhs: n * n * lambda,
                    rhs: total * integral,
                    refined_rhs: (total / (n * n)).min(diam) * integral,
                }
            })
            .collect()
    };
    let plus = rows(&s.plus, ip);
    let minus = rows(&s.minus, im);
    let form_bound = total * weight.integral_abs();
    let mut violations = 0;
    let mut worst_ratio = 0.0f64;
    for r in plus.iter().chain(&minus) {
        let tol = slack * r.rhs.max(f64::MIN_POSITIVE);
        if r.lhs > r.rhs + tol {
            violations += 1;
        }
        if r.lambda > r.refined_rhs + slack * r.refined_rhs {
            violations += 1;
        }
        if r.n == 1 && r.lambda > form_bound * (1.0 + slack) {
            violations += 1;
        }
        if r.rhs > 0.0 {
            worst_ratio = worst_ratio.max(r.lhs / r.rhs);
        }
    }
    BoundReport {
        total_length: total,
        diameter: diam,
        integral_plus: ip,
        integral_minus: im,
        form_bound,
        plus,
        minus,
        violations,
        worst_ratio,
    }
}

/// Eigenvalues `μ_n` of `-Δ` with the Dirichlet condition at `root`,
/// ascending, as reciprocals of the `V ≡ 1` problem. Discrete values bound
/// the continuous ones from above.
pub fn laplacian_spectrum(
    g: &MetricGraph,
    root: &GraphPoint,
    h: f64,
) -> Result<Vec<f64>, SpectralError> {
    let one = Weight::constant(g, 1.0);
    let s = spectrum(g, &one, std::slice::from_ref(root), h, SolveOptions { vectors: 0 })?;
    Ok(s.plus.iter().map(|l| 1.0 / l).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplacianReport {
    pub total_length: f64,
    /// `(n, μ_n, |Γ|² μ_n)`.
    pub rows: Vec<(usize, f64, f64)>,
    pub violations: usize,
    /// Smallest `|Γ|² μ_n / n²`.
    pub worst_ratio: f64,
}

/// Checks `|Γ|² μ_n ≥ n²` for `n ≤ n_max`.
pub fn laplacian_check(mu: &[f64], total_length: f64, n_max: usize, slack: f64) -> LaplacianReport {
    let rows: Vec<(usize, f64, f64)> = mu
        .iter()
        .take(n_max)
        .enumerate()
        .map(|(k, &m)| (k + 1, m, total_length * total_length * m))
        .collect();
    let violations = rows
        .iter()
        .filter(|&&(n, _, lhs)| lhs < (n * n) as f64 * (1.0 - slack))
        .count();
    let worst_ratio = rows
        .iter()
        .map(|&(n, _, lhs)| lhs / (n * n) as f64)
        .fold(f64::INFINITY, f64::min);
    LaplacianReport {
        total_length,
        rows,
        violations,
        worst_ratio,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylBranch {
    /// `∫ √V±`.
    pub integral_sqrt: f64,
    /// `r_n = n √λ_n π / ∫√V±` on the finest mesh, `n = 1..=n_max`.
    pub ratios: Vec<f64>,
    /// `|r_{n_max} - 1|`.
    pub deviation: f64,
    /// Largest relative change of `λ_n`, `n ≤ n_max`, between the two finest
    /// meshes.
    pub last_change: f64,
    /// Count of `λ_n^h` that decreased under refinement.
    pub monotone_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylReport {
    pub n_max: usize,
    /// Requested spacing of each mesh in the ladder, coarse to fine.
    pub steps: Vec<f64>,
    pub dof: Vec<usize>,
    pub plus: Option<WeylBranch>,
    pub minus: Option<WeylBranch>,
}

impl WeylReport {
    pub fn max_deviation(&self) -> f64 {
        self.plus
            .iter()
            .chain(&self.minus)
            .map(|b| b.deviation)
            .fold(0.0, f64::max)
    }

    pub fn monotone_violations(&self) -> usize {
        self.plus.iter().chain(&self.minus).map(|b| b.monotone_violations).sum()
    }
}

/// Weyl ratios on a ladder of `levels + 1` nested meshes starting at spacing
/// `h`, with the resolution guard of twenty nodes per expected wavelength at
/// `n_max` on the finest mesh.
pub fn weyl_check(
    g: &MetricGraph,
    weight: &Weight,
    root: &GraphPoint,
    n_max: usize,
    h: f64,
    levels: usize,
) -> Result<WeylReport, SpectralError> {
    if n_max == 0 {
        return Err(SpectralError::InvalidParameter("n_max must be positive".into()));
    }
    let (sp, sm) = weight.sqrt_integrals();
    let h_fine = h / f64::powi(2.0, levels as i32);
    for (s, vmax) in [
        (sp, weight.positive_part().max_abs()),
        (sm, weight.negative_part().max_abs()),
    ] {
        if s > 0.0 {
            let lambda = (s / (n_max as f64 * PI)).powi(2);
            let required = 2.0 * PI * (lambda / vmax).sqrt() / 20.0;
            if h_fine > required {
                return Err(SpectralError::UnderResolved { h: h_fine, required });
            }
        }
    }
    let base = Mesh::build(g, weight, std::slice::from_ref(root), h)?;
    let mut meshes = vec![base];
    for _ in 0..levels {
        let next = meshes.last().unwrap().refine();
        meshes.push(next);
    }
    let spectra = meshes
        .par_iter()
        .map(|m| solve_generalized(&assemble(m, weight), SolveOptions { vectors: 0 }))
        .collect::<Result<Vec<_>, _>>()?;

    let branch = |pick: fn(&Spectrum) -> &Vec<f64>, s: f64| -> Result<Option<WeylBranch>, SpectralError> {
        if s == 0.0 {
            return Ok(None);
        }
        let fine = pick(spectra.last().unwrap());
        if fine.len() < n_max {
            return Err(SpectralError::UnderResolved { h: h_fine, required: h_fine * fine.len() as f64 / n_max as f64 });
        }
        let ratios: Vec<f64> = (1..=n_max)
            .map(|n| n as f64 * fine[n - 1].sqrt() * PI / s)
            .collect();
        let top = fine[0];
        let mut monotone_violations = 0;
        let mut last_change = 0.0f64;
        for w in spectra.windows(2) {
            let (coarse, finer) = (pick(&w[0]), pick(&w[1]));
            for n in 0..n_max {
                let c = coarse.get(n).copied().unwrap_or(0.0);
                if finer[n] < c - 1e-9 * top {
                    monotone_violations += 1;
                }
            }
        }
        if spectra.len() >= 2 {
            let prev = pick(&spectra[spectra.len() - 2]);
            for n in 0..n_max {
                let p = prev.get(n).copied().unwrap_or(0.0);
                last_change = last_change.max((fine[n] - p).abs() / fine[n]);
            }
        }
        Ok(Some(WeylBranch {
            integral_sqrt: s,
            deviation: (ratios[n_max - 1] - 1.0).abs(),
            ratios,
            last_change,
            monotone_violations,
        }))
    };
    Ok(WeylReport {
        n_max,
        steps: meshes.iter().map(Mesh::h).collect(),
        dof: spectra.iter().map(|s| s.dof).collect(),
        plus: branch(|s| &s.plus, sp)?,
        minus: branch(|s| &s.minus, sm)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnumberReport {
    /// `s_n = √λ_n(B_{a²})`, descending.
    pub s: Vec<f64>,
    /// `‖a‖₂`.
    pub norm_a: f64,
    /// `|Γ|^{1/2} ‖a‖₂`; the bound on `s_n` is this over `n`.
    pub constant: f64,
    pub violations: usize,
    /// Largest `n s_n / (|Γ|^{1/2} ‖a‖₂)`.
    pub worst_ratio: f64,
}

/// Singular numbers of `a (-Δ)^{-1/2}` and the check
/// `s_n ≤ |Γ|^{1/2} ‖a‖₂ / n` for every computed `n`.
pub fn snumbers_halfinv(
    g: &MetricGraph,
    a: &Weight,
    root: &GraphPoint,
    h: f64,
    slack: f64,
) -> Result<SnumberReport, SpectralError> {
    let v = a.map(|x| x * x);
    let sp = spectrum(g, &v, std::slice::from_ref(root), h, SolveOptions { vectors: 0 })?;
    let s: Vec<f64> = sp.plus.iter().map(|l| l.sqrt()).collect();
    let norm_a = v.integral().sqrt();
    let constant = g.total_length().sqrt() * norm_a;
    let mut violations = 0;
    let mut worst_ratio = 0.0f64;
    for (k, &sn) in s.iter().enumerate() {
        let n = (k + 1) as f64;
        if n * sn > constant * (1.0 + slack) {
            violations += 1;
        }
        worst_ratio = worst_ratio.max(n * sn / constant);
    }
    Ok(SnumberReport {
        s,
        norm_a,
        constant,
        violations,
        worst_ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub length: f64,
    pub width: f64,
    pub lambda1: f64,
    /// `λ_1 / (|Γ| ∫V)` with `∫V = 1`.
    pub ratio: f64,
    /// Rayleigh quotient of `u = L - x` over `|Γ|`, a lower bound for `ratio`.
    pub rayleigh_ratio: f64,
}

/// Unit mass `V = χ_{[0,w]} / w` at the free end of `[0, L]`, root at `L`.
pub fn sharpness_search(length: f64, width: f64, h: f64) -> Result<SharpnessReport, SpectralError> {
    if !(width > 0.0 && width <= length) {
        return Err(SpectralError::InvalidParameter(format!(
            "width {width} must lie in (0, {length}]"
        )));
    }
    let g = samples::interval(length);
    let pc = if width < length {
        PiecewiseConstant::new(vec![0.0, width, length], vec![1.0 / width, 0.0])
    } else {
        PiecewiseConstant::new(vec![0.0, length], vec![1.0 / length])
    }
    .map_err(SpectralError::InvalidParameter)?;
    let v = Weight::from_edges(&g, vec![pc]).map_err(|e| SpectralError::InvalidParameter(e.to_string()))?;
    let s = spectrum(&g, &v, &[GraphPoint::Vertex(VertexId(1))], h, SolveOptions::default())?;
    let lambda1 = s.plus.first().copied().unwrap_or(0.0);
    let rest = length - width;
    let rayleigh = (length.powi(3) - rest.powi(3)) / (3.0 * width) / length;
    Ok(SharpnessReport {
        length,
        width,
        lambda1,
        ratio: lambda1 / length,
        rayleigh_ratio: rayleigh / length,
    })
}

/// `4 n² Λ_n / ((b - a) ∫V)` for `V ≡ 1` on `[0, L]` with both ends fixed.
pub fn dirichlet_interval_ratios(length: f64, n_max: usize, h: f64) -> Result<Vec<f64>, SpectralError> {
    let g = samples::interval(length);
    let v = Weight::constant(&g, 1.0);
    let ends = [GraphPoint::Vertex(VertexId(0)), GraphPoint::Vertex(VertexId(1))];
    let s = spectrum(&g, &v, &ends, h, SolveOptions::default())?;
    Ok(s.plus
        .iter()
        .take(n_max)
        .enumerate()
        .map(|(k, l)| 4.0 * ((k + 1) * (k + 1)) as f64 * l / (length * length))
        .collect())
}
