//! Gram-matrix relaxation over `(k+1)·n` unit vectors.
//!
//! Vertex `i` owns an anchor vector `v_i0` and one vector `v_ir` per label.
//! The relaxed objective is
//!
//! ```text
//! z1 = (1/4) Σ_edges Σ_r w (1 + v_i0·v_ir + v_j0·v_jσ(r) + v_ir·v_jσ(r))
//! ```
//!
//! subject to `Σ_r v_i0·v_ir <= 2 - k` for every vertex. It is solved in
//! factorized form `X = V Vᵀ`: projected gradient ascent on the rows of `V`
//! with retraction to the unit sphere, an augmented Lagrangian for the
//! vertex inequalities, and a backtracking line search. Positive
//! semidefiniteness holds by construction.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{value, Labeling};
use crate::instance::UgInstance;
use crate::randomized::{round_conditional, ProbAssignment};

/// Row norms must be within this of 1.
pub const NORM_TOL: f64 = 1e-7;
/// Allowed slack violation on the vertex inequalities.
pub const CONSTRAINT_TOL: f64 = 1e-6;

/// Armijo constant for the line search.
const SUFFICIENT_INCREASE: f64 = 1e-4;
const MIN_STEP: f64 = 1e-16;
const MAX_OUTER: usize = 200;
const MAX_PENALTY: f64 = 1e6;
/// A repaired iterate counts as feasible at this violation.
const REPAIRED_TOL: f64 = 1e-9;

/// Row of `V` holding `v_ir` (`slot = 0` is the anchor, `slot = r + 1` is
/// label `r`).
#[inline]
pub fn vector_index(k: usize, vertex: usize, slot: usize) -> usize {
    vertex * (k + 1) + slot
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexConstraint {
    pub anchor: usize,
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    instance: UgInstance,
    dim: usize,
    /// Upper-triangle entries `(a, b, c)` with `a < b`; `C[a][b] = C[b][a] = c`.
    entries: Vec<(usize, usize, f64)>,
    constant: f64,
    constraints: Vec<VertexConstraint>,
}

impl SdpProblem {
    pub fn instance(&self) -> &UgInstance {
        &self.instance
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn constraints(&self) -> &[VertexConstraint] {
        &self.constraints
    }

    /// Right-hand side `2 - k` shared by every vertex constraint.
    pub fn bound(&self) -> f64 {
        2.0 - self.instance.k() as f64
    }

    /// `⟨C, X⟩ + constant` for an explicit inner-product oracle.
    pub fn objective_with(&self, inner: impl Fn(usize, usize) -> f64) -> f64 {
        let s: f64 = self.entries.iter().map(|&(a, b, c)| 2.0 * c * inner(a, b)).sum();
        s + self.constant
    }

    /// Dense symmetric `C`, mostly for tests and diagnostics.
    pub fn dense_objective(&self) -> Vec<f64> {
        let d = self.dim;
        let mut c = vec![0.0; d * d];
        for &(a, b, v) in &self.entries {
            c[a * d + b] = v;
            c[b * d + a] = v;
        }
        c
    }
}

pub fn build_sdp(inst: &UgInstance) -> SdpProblem {
    let n = inst.n();
    let k = inst.k();
    let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut add = |a: usize, b: usize, c: f64| {
        let key = (a.min(b), a.max(b));
        *acc.entry(key).or_insert(0.0) += c;
    };
    for e in inst.edges() {
        let half = e.w / 8.0;
        let i0 = vector_index(k, e.i, 0);
        let j0 = vector_index(k, e.j, 0);
        for r in 0..k {
            let ir = vector_index(k, e.i, r + 1);
            let js = vector_index(k, e.j, e.sigma.apply(r) + 1);
            add(i0, ir, half);
            add(j0, js, half);
            add(ir, js, half);
        }
    }
    let constraints = (0..n)
        .map(|i| VertexConstraint {
            anchor: vector_index(k, i, 0),
            labels: (1..=k).map(|s| vector_index(k, i, s)).collect(),
        })
        .collect();
    SdpProblem {
        instance: inst.clone(),
        dim: (k + 1) * n,
        entries: acc.into_iter().map(|((a, b), c)| (a, b, c)).collect(),
        constant: 0.25 * k as f64 * inst.total_weight(),
        constraints,
    }
}

/// Relaxed objective evaluated straight from its per-edge definition.
pub fn p3_objective_with(inst: &UgInstance, inner: impl Fn(usize, usize) -> f64) -> f64 {
    let k = inst.k();
    let mut total = 0.0;
    for e in inst.edges() {
        let i0 = vector_index(k, e.i, 0);
        let j0 = vector_index(k, e.j, 0);
        let mut s = 0.0;
        for r in 0..k {
            let ir = vector_index(k, e.i, r + 1);
            let js = vector_index(k, e.j, e.sigma.apply(r) + 1);
            s += 1.0 + inner(i0, ir) + inner(j0, js) + inner(ir, js);
        }
        total += 0.25 * e.w * s;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    /// `max_u |‖v_u‖ - 1|`.
    pub max_norm_deviation: f64,
    /// `max_i (Σ_r X[i0][ir] - (2 - k))₊`.
    pub max_violation: f64,
    /// `max_i ((2 - k) - Σ_r X[i0][ir])₊`; zero when every constraint is tight.
    pub max_slack: f64,
    /// Smallest eigenvalue of `V Vᵀ`, as a numerical check of semidefiniteness.
    pub min_eigenvalue: f64,
    pub pass: bool,
}

/// One step of the solver trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub outer: usize,
    /// Augmented Lagrangian value; nondecreasing while `outer` is fixed.
    pub merit: f64,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct GramSolution {
    dim: usize,
    rank: usize,
    factors: Vec<f64>,
    pub objective: f64,
    pub residuals: FeasibilityReport,
    /// Gradient iterations summed over every start.
    pub iterations: usize,
    pub converged: bool,
    /// Index of the start that produced this solution (warm starts first).
    pub start: usize,
    /// Trace of the winning start.
    pub trace: Vec<TracePoint>,
}

impl GramSolution {
    /// Wraps explicit factors, renormalizing nothing.
    pub fn from_factors(prob: &SdpProblem, rank: usize, factors: Vec<f64>) -> Result<Self> {
        if rank == 0 || factors.len() != prob.dim * rank {
            return Err(Error::DimensionMismatch(format!(
                "factor matrix has {} entries, expected {} x {rank}",
                factors.len(),
                prob.dim
            )));
        }
        let residuals = residuals(prob.instance.n(), prob.instance.k(), rank, &factors);
        let mut sol = GramSolution {
            dim: prob.dim,
            rank,
            factors,
            objective: 0.0,
            residuals,
            iterations: 0,
            converged: true,
            start: 0,
            trace: Vec::new(),
        };
        sol.objective = prob.objective_with(|a, b| sol.inner(a, b));
        Ok(sol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn factors(&self) -> &[f64] {
        &self.factors
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.factors[u * self.rank..(u + 1) * self.rank]
    }

    #[inline]
    pub fn inner(&self, a: usize, b: usize) -> f64 {
        dot(self.row(a), self.row(b))
    }

    /// Dense `V Vᵀ`, row-major.
    pub fn gram(&self) -> Vec<f64> {
        let d = self.dim;
        let mut x = vec![0.0; d * d];
        for a in 0..d {
            for b in a..d {
                let v = self.inner(a, b);
                x[a * d + b] = v;
                x[b * d + a] = v;
            }
        }
        x
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn residuals(n: usize, k: usize, rank: usize, factors: &[f64]) -> FeasibilityReport {
    let dim = (k + 1) * n;
    let row = |u: usize| &factors[u * rank..(u + 1) * rank];
    let max_norm_deviation = (0..dim).map(|u| (dot(row(u), row(u)).sqrt() - 1.0).abs()).fold(0.0, f64::max);
    let bound = 2.0 - k as f64;
    let mut max_violation: f64 = 0.0;
    let mut max_slack: f64 = 0.0;
    for i in 0..n {
        let a = vector_index(k, i, 0);
        let s: f64 = (1..=k).map(|r| dot(row(a), row(vector_index(k, i, r)))).sum();
        max_violation = max_violation.max(s - bound);
        max_slack = max_slack.max(bound - s);
    }
    let min_eigenvalue = if dim == 0 {
        0.0
    } else {
        let v = DMatrix::from_row_slice(dim, rank, factors);
        let x = &v * v.transpose();
        SymmetricEigen::new(x).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let pass = max_norm_deviation <= CONSTRAINT_TOL
        && max_violation <= CONSTRAINT_TOL
        && min_eigenvalue >= -1e-9 * (dim as f64).max(1.0);
    FeasibilityReport { max_norm_deviation, max_violation, max_slack, min_eigenvalue, pass }
}

pub fn check_feasibility(sol: &GramSolution, prob: &SdpProblem) -> Result<FeasibilityReport> {
    if sol.dim != prob.dim {
        return Err(Error::DimensionMismatch(format!("solution dim {} vs problem dim {}", sol.dim, prob.dim)));
    }
    Ok(residuals(prob.instance.n(), prob.instance.k(), sol.rank, &sol.factors))
}

fn labeling_factors(k: usize, labeling: &Labeling, rank: usize) -> Vec<f64> {
    let n = labeling.len();
    let mut f = vec![0.0; (k + 1) * n * rank];
    for (i, &l) in labeling.labels().iter().enumerate() {
        f[vector_index(k, i, 0) * rank] = 1.0;
        for r in 0..k {
            f[vector_index(k, i, r + 1) * rank] = if r == l { 1.0 } else { -1.0 };
        }
    }
    f
}

/// Rank-one embedding of an integral labeling: `v_i0 = +1`, `v_ir = +1` at
/// the assigned label and `-1` elsewhere.
pub fn embed_labeling(inst: &UgInstance, labeling: &Labeling) -> Result<GramSolution> {
    labeling.check(inst)?;
    let prob = build_sdp(inst);
    GramSolution::from_factors(&prob, 1, labeling_factors(inst.k(), labeling, 1))
}

/// Label with the largest `v_i0·v_ir` at each vertex, lowest label on ties.
pub fn round_gram(inst: &UgInstance, sol: &GramSolution) -> Result<Labeling> {
    let k = inst.k();
    if sol.dim != (k + 1) * inst.n() {
        return Err(Error::DimensionMismatch(format!("solution dim {} does not fit the instance", sol.dim)));
    }
    let labels = (0..inst.n())
        .map(|i| {
            let a = vector_index(k, i, 0);
            let mut best = 0;
            let mut best_val = f64::NEG_INFINITY;
            for r in 0..k {
                let v = sol.inner(a, vector_index(k, i, r + 1));
                if v > best_val {
                    best_val = v;
                    best = r;
                }
            }
            best
        })
        .collect();
    Ok(Labeling::new(labels))
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Columns of `V`; `None` means `dim`.
    pub rank: Option<usize>,
    /// Gradient iterations allowed per start.
    pub max_iters: usize,
    /// Stationarity threshold on the projected gradient norm; also the
    /// objective tolerance used to break ties between starts.
    pub tol: f64,
    pub seed: u64,
    /// Random starts in addition to the warm starts.
    pub restarts: usize,
    /// Extra labeling to start from, tried before everything else.
    pub warm_start: Option<Labeling>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { rank: None, max_iters: 20_000, tol: 1e-6, seed: 0, restarts: 5, warm_start: None }
    }
}

struct Run {
    factors: Vec<f64>,
    objective: f64,
    iterations: usize,
    converged: bool,
    trace: Vec<TracePoint>,
}

/// Working state for one start: factors plus augmented Lagrangian data.
struct Ascent<'a> {
    prob: &'a SdpProblem,
    n: usize,
    k: usize,
    rank: usize,
    lambda: Vec<f64>,
    penalty: f64,
}

impl<'a> Ascent<'a> {
    fn row<'v>(&self, v: &'v [f64], u: usize) -> &'v [f64] {
        &v[u * self.rank..(u + 1) * self.rank]
    }

    fn objective(&self, v: &[f64]) -> f64 {
        self.prob.objective_with(|a, b| dot(self.row(v, a), self.row(v, b)))
    }

    fn constraint_values(&self, v: &[f64]) -> Vec<f64> {
        let bound = 2.0 - self.k as f64;
        (0..self.n)
            .map(|i| {
                let a = self.row(v, vector_index(self.k, i, 0));
                (1..=self.k).map(|r| dot(a, self.row(v, vector_index(self.k, i, r)))).sum::<f64>() - bound
            })
            .collect()
    }

    fn merit(&self, v: &[f64]) -> f64 {
        let rho = self.penalty;
        let pen: f64 = self
            .constraint_values(v)
            .iter()
            .zip(&self.lambda)
            .map(|(&g, &l)| {
                let shifted = (g + l / rho).max(0.0);
                shifted * shifted - (l / rho) * (l / rho)
            })
            .sum();
        self.objective(v) - 0.5 * rho * pen
    }

    /// Riemannian gradient of the merit function on the product of spheres.
    fn projected_gradient(&self, v: &[f64]) -> Vec<f64> {
        let rank = self.rank;
        let mut g = vec![0.0; v.len()];
        for &(a, b, c) in self.prob.entries() {
            let (ra, rb) = (a * rank, b * rank);
            for t in 0..rank {
                g[ra + t] += 2.0 * c * v[rb + t];
                g[rb + t] += 2.0 * c * v[ra + t];
            }
        }
        let cons = self.constraint_values(v);
        for i in 0..self.n {
            let mu = (self.lambda[i] + self.penalty * cons[i]).max(0.0);
            if mu == 0.0 {
                continue;
            }
            let a = vector_index(self.k, i, 0) * rank;
            for r in 1..=self.k {
                let u = vector_index(self.k, i, r) * rank;
                for t in 0..rank {
                    g[a + t] -= mu * v[u + t];
                    g[u + t] -= mu * v[a + t];
                }
            }
        }
        for (gr, vr) in g.chunks_mut(rank).zip(v.chunks(rank)) {
            let radial = dot(gr, vr);
            for (x, y) in gr.iter_mut().zip(vr) {
                *x -= radial * y;
            }
        }
        g
    }

    /// Moves each anchor onto its constraint boundary when violated. This is
    /// the nearest feasible anchor on the sphere; it needs `‖Σ_r v_ir‖ >= k - 2`.
    fn repair(&self, v: &mut [f64]) -> bool {
        let rank = self.rank;
        let bound = 2.0 - self.k as f64;
        let mut ok = true;
        for i in 0..self.n {
            let a = vector_index(self.k, i, 0) * rank;
            let mut s = vec![0.0; rank];
            for r in 1..=self.k {
                let u = vector_index(self.k, i, r) * rank;
                for t in 0..rank {
                    s[t] += v[u + t];
                }
            }
            let anchor = &v[a..a + rank];
            if dot(anchor, &s) <= bound {
                continue;
            }
            let norm = dot(&s, &s).sqrt();
            let target = (bound - 1e-12) / norm;
            if !(norm > 0.0) || target < -1.0 {
                ok = false;
                continue;
            }
            let unit: Vec<f64> = s.iter().map(|x| x / norm).collect();
            let along = dot(anchor, &unit);
            let mut perp: Vec<f64> = anchor.iter().zip(&unit).map(|(x, u)| x - along * u).collect();
            let mut pn = dot(&perp, &perp).sqrt();
            if pn < 1e-12 {
                // anchor parallel to s: pick the axis least aligned with s
                let axis = (0..rank)
                    .min_by(|&x, &y| unit[x].abs().total_cmp(&unit[y].abs()))
                    .expect("rank >= 1");
                perp = unit.iter().map(|u| -unit[axis] * u).collect();
                perp[axis] += 1.0;
                pn = dot(&perp, &perp).sqrt();
                if pn < 1e-12 {
                    ok = false;
                    continue;
                }
            }
            let side = (1.0 - target * target).max(0.0).sqrt() / pn;
            for t in 0..rank {
                v[a + t] = target * unit[t] + side * perp[t];
            }
        }
        ok
    }

    fn run(mut self, mut v: Vec<f64>, opts: &SolveOptions) -> Run {
        normalize_rows(&mut v, self.rank);
        let mut trace = Vec::new();
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut iterations = 0;
        let mut converged = false;
        let mut prev_violation = f64::INFINITY;

        for outer in 0..MAX_OUTER {
            let inner_tol = opts.tol.max(0.1 * 0.1f64.powi(outer as i32));
            let mut grad_norm;
            let mut merit = self.merit(&v);
            loop {
                let pg = self.projected_gradient(&v);
                let sq = dot(&pg, &pg);
                grad_norm = sq.sqrt();
                if grad_norm <= inner_tol || iterations >= opts.max_iters {
                    break;
                }
                let mut step = 1.0;
                let mut accepted = None;
                while step >= MIN_STEP {
                    let mut cand: Vec<f64> = v.iter().zip(&pg).map(|(x, g)| x + step * g).collect();
                    normalize_rows(&mut cand, self.rank);
                    let m = self.merit(&cand);
                    if m >= merit + SUFFICIENT_INCREASE * step * sq {
                        accepted = Some((cand, m));
                        break;
                    }
                    step *= 0.5;
                }
                iterations += 1;
                match accepted {
                    Some((cand, m)) => {
                        v = cand;
                        merit = m;
                        trace.push(TracePoint { outer, merit, objective: self.objective(&v) });
                    }
                    // no ascent direction left at machine precision
                    None => break,
                }
            }

            let cons = self.constraint_values(&v);
            let violation = cons.iter().copied().fold(0.0, f64::max);

            let mut repaired = v.clone();
            if self.repair(&mut repaired) {
                let rv = self.constraint_values(&repaired).into_iter().fold(0.0, f64::max);
                if rv <= REPAIRED_TOL {
                    let obj = self.objective(&repaired);
                    if best.as_ref().is_none_or(|(b, _)| obj > *b) {
                        best = Some((obj, repaired));
                    }
                }
            }

            if grad_norm <= opts.tol && violation <= REPAIRED_TOL {
                converged = true;
                break;
            }
            if iterations >= opts.max_iters {
                break;
            }
            for (l, g) in self.lambda.iter_mut().zip(&cons) {
                *l = (*l + self.penalty * g).max(0.0);
            }
            if violation > REPAIRED_TOL && violation > 0.25 * prev_violation {
                self.penalty = (self.penalty * 10.0).min(MAX_PENALTY);
            }
            prev_violation = violation;
        }

        match best {
            Some((objective, factors)) => Run { factors, objective, iterations, converged, trace },
            None => Run { factors: v, objective: f64::NEG_INFINITY, iterations, converged: false, trace },
        }
    }
}

fn normalize_rows(v: &mut [f64], rank: usize) {
    for row in v.chunks_mut(rank) {
        let norm = dot(row, row).sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|x| *x /= norm);
        } else {
            row[0] = 1.0;
        }
    }
}

fn random_factors(dim: usize, rank: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut v: Vec<f64> = (0..dim * rank).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize_rows(&mut v, rank);
    v
}

/// Label distribution read off a factor matrix, with `reference(i)` the row
/// compared against vertex `i`'s label vectors.
fn induced_probabilities(k: usize, n: usize, rank: usize, v: &[f64], reference: impl Fn(usize) -> usize) -> ProbAssignment {
    let row = |u: usize| &v[u * rank..(u + 1) * rank];
    let rows = (0..n)
        .map(|i| {
            let g = row(reference(i));
            let raw: Vec<f64> = (1..=k)
                .map(|r| 0.5 * (1.0 + dot(g, row(vector_index(k, i, r))).clamp(-1.0, 1.0)))
                .collect();
            let s: f64 = raw.iter().sum();
            if s > 0.0 {
                raw.iter().map(|x| x / s).collect()
            } else {
                vec![1.0 / k as f64; k]
            }
        })
        .collect();
    ProbAssignment::new(rows).unwrap_or_else(|_| ProbAssignment::uniform(n, k))
}

/// Best labeling found by conditional-expectation rounding of the uniform
/// distribution and of the distributions induced by each random start
/// (each vertex's own anchor, and vertex 0's anchor shared by all).
fn conditional_warm_start(inst: &UgInstance, runs: &[Run], rank: usize) -> Result<Labeling> {
    let (n, k) = (inst.n(), inst.k());
    let mut candidates = vec![ProbAssignment::uniform(n, k)];
    for run in runs.iter().filter(|r| r.objective.is_finite()) {
        candidates.push(induced_probabilities(k, n, rank, &run.factors, |i| vector_index(k, i, 0)));
        if n > 0 {
            candidates.push(induced_probabilities(k, n, rank, &run.factors, |_| vector_index(k, 0, 0)));
        }
    }
    let mut best: Option<(f64, Labeling)> = None;
    for p in &candidates {
        let l = round_conditional(inst, p)?;
        let val = value(inst, &l)?;
        if best.as_ref().is_none_or(|(b, _)| val > *b) {
            best = Some((val, l));
        }
    }
    Ok(best.expect("uniform candidate always present").1)
}

/// Multi-start solve. Random starts are seeded from `opts.seed` (one
/// ChaCha stream per start); warm starts are the optional
/// `opts.warm_start` and the conditional-rounding labeling. The result is
/// the feasible start with the largest objective, where objectives within
/// `opts.tol` of each other count as tied and the lowest start index wins.
pub fn solve_sdp(prob: &SdpProblem, opts: &SolveOptions) -> Result<GramSolution> {
    let dim = prob.dim;
    let rank = opts.rank.unwrap_or(dim).max(1);
    if opts.rank == Some(0) {
        return Err(Error::InvalidOptions("rank must be at least 1".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidOptions(format!("tol must be positive, got {}", opts.tol)));
    }
    let inst = &prob.instance;
    let ascent = || Ascent { prob, n: inst.n(), k: inst.k(), rank, lambda: vec![0.0; inst.n()], penalty: 1.0 };

    let random_runs: Vec<Run> = (0..opts.restarts)
        .into_par_iter()
        .map(|s| ascent().run(random_factors(dim, rank, opts.seed, s as u64 + 1), opts))
        .collect();

    let mut warm = Vec::new();
    if let Some(l) = &opts.warm_start {
        l.check(inst)?;
        warm.push(l.clone());
    }
    warm.push(conditional_warm_start(inst, &random_runs, rank)?);
    let warm_runs: Vec<Run> = warm
        .par_iter()
        .map(|l| ascent().run(labeling_factors(inst.k(), l, rank), opts))
        .collect();

    let total_iterations: usize = warm_runs.iter().chain(&random_runs).map(|r| r.iterations).sum();
    let mut winner: Option<(usize, Run)> = None;
    for (idx, run) in warm_runs.into_iter().chain(random_runs).enumerate() {
        if !run.objective.is_finite() {
            continue;
        }
        let better = match &winner {
            None => true,
            Some((_, w)) => run.objective > w.objective + opts.tol,
        };
        if better {
            winner = Some((idx, run));
        }
    }
    let (start, run) = winner.ok_or_else(|| Error::InvalidOptions("no feasible start found".into()))?;
    let mut sol = GramSolution::from_factors(prob, rank, run.factors)?;
    sol.iterations = total_iterations;
    sol.converged = run.converged;
    sol.start = start;
    sol.trace = run.trace;
    Ok(sol)
}
