//! Independent multinomial labelings and their expected matched weight.
//!
//! A [`ProbAssignment`] gives each vertex a distribution over labels; the
//! randomized algorithm draws every vertex independently. Edge `(i, j)` is
//! then matched with probability `Σ_r p[i][r] · p[j][σ(r)]`. The same
//! quantities are available over `y = 2p - 1` through [`YAssignment`],
//! whose rows sum to `2 - k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::Labeling;
use crate::instance::{Edge, UgInstance};

/// Absolute tolerance on row sums at construction.
pub const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbAssignment {
    n: usize,
    k: usize,
    p: Vec<f64>,
}

impl ProbAssignment {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let (n, k, p) = flatten(rows)?;
        for (i, row) in p.chunks(k).enumerate() {
            if let Some(&x) = row.iter().find(|&&x| !(0.0..=1.0).contains(&x)) {
                return Err(Error::InvalidAssignment(format!("p[{i}] has entry {x} outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidAssignment(format!("p[{i}] sums to {sum}, expected 1")));
            }
        }
        Ok(ProbAssignment { n, k, p })
    }

    pub fn uniform(n: usize, k: usize) -> Self {
        ProbAssignment { n, k, p: vec![1.0 / k as f64; n * k] }
    }

    /// The degenerate distribution that always produces `labeling`.
    pub fn from_labeling(labeling: &Labeling, k: usize) -> Result<Self> {
        let n = labeling.len();
        let mut p = vec![0.0; n * k];
        for (i, &l) in labeling.labels().iter().enumerate() {
            if l >= k {
                return Err(Error::DimensionMismatch(format!("vertex {i} has label {l}, k = {k}")));
            }
            p[i * k + l] = 1.0;
        }
        Ok(ProbAssignment { n, k, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, r: usize) -> f64 {
        self.p[i * self.k + r]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.p[i * self.k..(i + 1) * self.k]
    }

    fn check(&self, inst: &UgInstance) -> Result<()> {
        check_shape(self.n, self.k, inst)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct YAssignment {
    n: usize,
    k: usize,
    y: Vec<f64>,
}

impl YAssignment {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let (n, k, y) = flatten(rows)?;
        let target = 2.0 - k as f64;
        for (i, row) in y.chunks(k).enumerate() {
            if let Some(&x) = row.iter().find(|&&x| !(-1.0..=1.0).contains(&x)) {
                return Err(Error::InvalidAssignment(format!("y[{i}] has entry {x} outside [-1, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - target).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidAssignment(format!("y[{i}] sums to {sum}, expected {target}")));
            }
        }
        Ok(YAssignment { n, k, y })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, r: usize) -> f64 {
        self.y[i * self.k + r]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.y[i * self.k..(i + 1) * self.k]
    }

    fn check(&self, inst: &UgInstance) -> Result<()> {
        check_shape(self.n, self.k, inst)
    }
}

fn flatten(rows: Vec<Vec<f64>>) -> Result<(usize, usize, Vec<f64>)> {
    let n = rows.len();
    let k = rows.first().map_or(0, Vec::len);
    if k == 0 {
        return Err(Error::InvalidAssignment("assignment needs at least one label column".into()));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != k) {
        return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {k}", rows[i].len())));
    }
    Ok((n, k, rows.into_iter().flatten().collect()))
}

fn check_shape(n: usize, k: usize, inst: &UgInstance) -> Result<()> {
    if n != inst.n() || k != inst.k() {
        return Err(Error::DimensionMismatch(format!(
            "assignment is {n}x{k}, instance has n = {}, k = {}",
            inst.n(),
            inst.k()
        )));
    }
    Ok(())
}

pub fn to_y(p: &ProbAssignment) -> YAssignment {
    YAssignment { n: p.n, k: p.k, y: p.p.iter().map(|&x| 2.0 * x - 1.0).collect() }
}

pub fn from_y(y: &YAssignment) -> ProbAssignment {
    ProbAssignment { n: y.n, k: y.k, p: y.y.iter().map(|&x| 0.5 * (1.0 + x)).collect() }
}

#[inline]
fn rho(p: &ProbAssignment, e: &Edge) -> f64 {
    let pi = p.row(e.i);
    let pj = p.row(e.j);
    pi.iter().enumerate().map(|(r, &a)| a * pj[e.sigma.apply(r)]).sum()
}

/// Probability that the independent draw matches `edge`.
pub fn edge_match_prob(inst: &UgInstance, p: &ProbAssignment, edge: &Edge) -> Result<f64> {
    p.check(inst)?;
    if edge.i >= inst.n() || edge.j >= inst.n() || edge.sigma.len() != inst.k() {
        return Err(Error::DimensionMismatch("edge does not fit the instance".into()));
    }
    Ok(rho(p, edge))
}

/// `E[z] = Σ w_ij ρ_ij`.
pub fn expected_value(inst: &UgInstance, p: &ProbAssignment) -> Result<f64> {
    p.check(inst)?;
    Ok(inst.edges().iter().map(|e| e.w * rho(p, e)).sum())
}

/// `Σ_r y[i][r] · y[j][σ(r)]` for one edge; `k` on a matched one-hot edge and
/// `k - 4` on an unmatched one.
pub fn edge_y_product_sum(y: &YAssignment, e: &Edge) -> f64 {
    let yi = y.row(e.i);
    let yj = y.row(e.j);
    yi.iter().enumerate().map(|(r, &a)| a * yj[e.sigma.apply(r)]).sum()
}

/// `E[z]` written over `y`: `(1/4) Σ_edges Σ_r w (1 + y_ir + y_jσ(r) + y_ir y_jσ(r))`.
pub fn expected_value_y(inst: &UgInstance, y: &YAssignment) -> Result<f64> {
    y.check(inst)?;
    let mut total = 0.0;
    for e in inst.edges() {
        let yi = y.row(e.i);
        let yj = y.row(e.j);
        let s: f64 = yi
            .iter()
            .enumerate()
            .map(|(r, &a)| {
                let b = yj[e.sigma.apply(r)];
                1.0 + a + b + a * b
            })
            .sum();
        total += 0.25 * e.w * s;
    }
    Ok(total)
}

/// One independent inverse-CDF draw per vertex from a `ChaCha8Rng`
/// seeded with `seed`; each vertex consumes exactly one `f64` in `[0, 1)`.
pub fn sample(inst: &UgInstance, p: &ProbAssignment, seed: u64) -> Result<Labeling> {
    p.check(inst)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..p.n)
        .map(|i| {
            let u: f64 = rng.gen();
            let row = p.row(i);
            let mut acc = 0.0;
            for (r, &x) in row.iter().enumerate() {
                acc += x;
                if u < acc {
                    return r;
                }
            }
            // u landed in the rounding gap above the last partial sum
            row.iter().rposition(|&x| x > 0.0).unwrap_or(0)
        })
        .collect();
    Ok(Labeling::new(labels))
}

/// Method of conditional expectations. Vertices are fixed in index order;
/// each takes the label with the largest expected matched weight given the
/// labels fixed so far and `p` for the rest, lowest label on ties. The
/// result is worth at least `expected_value(inst, p)`.
pub fn round_conditional(inst: &UgInstance, p: &ProbAssignment) -> Result<Labeling> {
    p.check(inst)?;
    let k = inst.k();
    let incidence = inst.incidence();
    let mut current = p.clone();
    let mut labels = Vec::with_capacity(inst.n());
    for v in 0..inst.n() {
        let mut best_label = 0;
        let mut best = f64::NEG_INFINITY;
        for r in 0..k {
            set_one_hot(&mut current, v, r);
            let local: f64 = incidence[v].iter().map(|&ei| {
                let e = &inst.edges()[ei];
                e.w * rho(&current, e)
            }).sum();
            if r == 0 || local > best + 1e-12 * best.abs().max(1.0) {
                best = local;
                best_label = r;
            }
        }
        set_one_hot(&mut current, v, best_label);
        labels.push(best_label);
    }
    Ok(Labeling::new(labels))
}

fn set_one_hot(p: &mut ProbAssignment, v: usize, r: usize) {
    let k = p.k;
    let row = &mut p.p[v * k..(v + 1) * k];
    row.fill(0.0);
    row[r] = 1.0;
}

/// `(1/2) Σ w (1 - y_i y_j)` over a plain weighted graph.
pub fn maxcut_objective(weighted_edges: &[(usize, usize, f64)], y1: &[f64]) -> Result<f64> {
    if let Some(&v) = y1.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
        return Err(Error::OutOfRange { value: v, lo: -1.0, hi: 1.0 });
    }
    let mut total = 0.0;
    for &(i, j, w) in weighted_edges {
        let (a, b) = match (y1.get(i), y1.get(j)) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Error::DimensionMismatch(format!("edge ({i}, {j}) outside {} vertices", y1.len()))),
        };
        total += 0.5 * w * (1.0 - a * b);
    }
    Ok(total)
}
