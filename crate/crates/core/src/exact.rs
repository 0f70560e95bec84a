//! Labelings and the exhaustive oracle for `z*`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::UgInstance;

/// One label per vertex, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling(Vec<usize>);

impl Labeling {
    pub fn new(labels: Vec<usize>) -> Self {
        Labeling(labels)
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, inst: &UgInstance) -> Result<()> {
        if self.0.len() != inst.n() {
            return Err(Error::DimensionMismatch(format!(
                "labeling has {} entries, instance has n = {}",
                self.0.len(),
                inst.n()
            )));
        }
        if let Some((v, &l)) = self.0.iter().enumerate().find(|(_, &l)| l >= inst.k()) {
            return Err(Error::DimensionMismatch(format!("vertex {v} has label {l}, k = {}", inst.k())));
        }
        Ok(())
    }
}

/// Total weight of matched edges.
pub fn value(inst: &UgInstance, labeling: &Labeling) -> Result<f64> {
    labeling.check(inst)?;
    Ok(value_unchecked(inst, labeling.labels()))
}

fn value_unchecked(inst: &UgInstance, labels: &[usize]) -> f64 {
    inst.edges()
        .iter()
        .filter(|e| e.is_matched(labels[e.i], labels[e.j]))
        .map(|e| e.w)
        .sum()
}

fn check_budget(inst: &UgInstance, limit: u128) -> Result<()> {
    let states = inst.labeling_count();
    if states > limit {
        return Err(Error::BudgetExceeded { states, limit });
    }
    Ok(())
}

/// Best labeling among those whose leading entries equal `prefix`, scanned
/// in mixed-radix order with vertex 0 most significant. Strict improvement
/// keeps the first (lexicographically smallest) maximizer.
fn scan(inst: &UgInstance, prefix: &[usize]) -> (Vec<usize>, f64) {
    let n = inst.n();
    let k = inst.k();
    let mut labels = vec![0usize; n];
    labels[..prefix.len()].copy_from_slice(prefix);
    let free = prefix.len();

    let mut best_labels = labels.clone();
    let mut best = value_unchecked(inst, &labels);
    loop {
        // increment the least significant free position
        let mut pos = n;
        loop {
            if pos == free {
                return (best_labels, best);
            }
            pos -= 1;
            labels[pos] += 1;
            if labels[pos] < k {
                break;
            }
            labels[pos] = 0;
        }
        let v = value_unchecked(inst, &labels);
        if v > best {
            best = v;
            best_labels.copy_from_slice(&labels);
        }
    }
}

/// Exhaustive maximum over all `k^n` labelings; ties go to the
/// lexicographically smallest labeling. Fails when `k^n > limit`.
pub fn solve_exact(inst: &UgInstance, limit: u128) -> Result<(Labeling, f64)> {
    check_budget(inst, limit)?;
    let (labels, z) = scan(inst, &[]);
    Ok((Labeling(labels), z))
}

/// Same result as [`solve_exact`], with the scan split on vertex 0's label
/// and the `k` partial maxima merged under the same tie-break.
pub fn solve_exact_partitioned(inst: &UgInstance, limit: u128) -> Result<(Labeling, f64)> {
    check_budget(inst, limit)?;
    if inst.n() == 0 {
        return solve_exact(inst, limit);
    }
    let parts: Vec<(Vec<usize>, f64)> = (0..inst.k()).into_par_iter().map(|r| scan(inst, &[r])).collect();
    let mut best = parts[0].clone();
    for part in parts.into_iter().skip(1) {
        if part.1 > best.1 {
            best = part;
        }
    }
    Ok((Labeling(best.0), best.1))
}

/// Calls `f` on every labeling in enumeration order. Used by oracles that
/// need more than the maximum.
pub fn for_each_labeling(inst: &UgInstance, limit: u128, mut f: impl FnMut(&[usize])) -> Result<()> {
    check_budget(inst, limit)?;
    let n = inst.n();
    let k = inst.k();
    let mut labels = vec![0usize; n];
    loop {
        f(&labels);
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            labels[pos] += 1;
            if labels[pos] < k {
                break;
            }
            labels[pos] = 0;
        }
    }
}
