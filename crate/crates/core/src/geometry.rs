//! Arcsin re-expression of the label probabilities and the `2/π` bound.
//!
//! Writing `p_ir = 1 - arccos(v_i0·v_ir)/π` gives `y_ir = (2/π) arcsin(v_i0·v_ir)`,
//! and treating the probability that an edge is unmatched via label `r` as
//! proportional to the angle between `v_ir` and `v_jσ(r)` gives
//! `y_ir y_jσ(r) = (2/π) arcsin(v_ir·v_jσ(r))`. The claimed bound compares
//! the relaxation value `z1*` with `z*` through the scalar inequalities
//! `(2/π) arcsin(x) <= x` and `arcsin(x) >= x`, which only hold for `x >= 0`.
//! The report here records what is observed instead of assuming the bound.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};
use crate::exact::solve_exact;
use crate::instance::UgInstance;
use crate::relaxation::{build_sdp, solve_sdp, vector_index, GramSolution, SolveOptions, NORM_TOL};

/// Tolerance on every objective comparison in a [`BoundReport`].
pub const REPORT_TOL: f64 = 1e-4;

/// Inner products within this of `±1` are clamped before `asin`.
pub const CLAMP_TOL: f64 = 1e-12;

fn clamp_unit(c: f64) -> Result<f64> {
    if !(c.abs() <= 1.0 + CLAMP_TOL) {
        return Err(Error::OutOfRange { value: c, lo: -1.0, hi: 1.0 });
    }
    Ok(c.clamp(-1.0, 1.0))
}

/// `(2/π) arcsin(c)`.
pub fn arcsin_y(c: f64) -> Result<f64> {
    Ok(FRAC_2_PI * clamp_unit(c)?.asin())
}

/// `1 - (2/π) arccos(c)`, the same quantity derived through the angle.
pub fn arccos_y(c: f64) -> Result<f64> {
    Ok(1.0 - FRAC_2_PI * clamp_unit(c)?.acos())
}

/// Probability that exactly one endpoint takes its side of a label pair:
/// `p(1 - q) + (1 - p) q`.
pub fn unmatched_prob(p: f64, q: f64) -> Result<f64> {
    for x in [p, q] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfRange { value: x, lo: 0.0, hi: 1.0 });
        }
    }
    Ok(p * (1.0 - q) + (1.0 - p) * q)
}

/// The arcsin objective for an arbitrary inner-product oracle.
pub fn p4_objective_with(inst: &UgInstance, inner: impl Fn(usize, usize) -> f64) -> Result<f64> {
    let k = inst.k();
    let mut total = 0.0;
    for e in inst.edges() {
        let i0 = vector_index(k, e.i, 0);
        let j0 = vector_index(k, e.j, 0);
        let self_term = clamp_unit(inner(i0, i0))?.asin();
        let mut s = 0.0;
        for r in 0..k {
            let ir = vector_index(k, e.i, r + 1);
            let js = vector_index(k, e.j, e.sigma.apply(r) + 1);
            s += self_term
                + clamp_unit(inner(i0, ir))?.asin()
                + clamp_unit(inner(j0, js))?.asin()
                + clamp_unit(inner(ir, js))?.asin();
        }
        total += e.w * s;
    }
    Ok(FRAC_2_PI * 0.25 * total)
}

fn check_fits(inst: &UgInstance, sol: &GramSolution) -> Result<()> {
    if sol.dim() != (inst.k() + 1) * inst.n() {
        return Err(Error::DimensionMismatch(format!("solution dim {} does not fit the instance", sol.dim())));
    }
    Ok(())
}

fn check_unit(sol: &GramSolution) -> Result<()> {
    for u in 0..sol.dim() {
        let norm = sol.inner(u, u).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NonUnitVector { index: u, norm });
        }
    }
    Ok(())
}

pub fn p4_objective(inst: &UgInstance, sol: &GramSolution) -> Result<f64> {
    check_fits(inst, sol)?;
    check_unit(sol)?;
    p4_objective_with(inst, |a, b| sol.inner(a, b))
}

/// Per-vertex `(2/π) Σ_r arcsin(v_i0·v_ir) - (2 - k)`. Positive entries
/// violate the arcsin-form constraint; both signs are reported as is.
pub fn p4_constraint_residual(inst: &UgInstance, sol: &GramSolution) -> Result<Vec<f64>> {
    check_fits(inst, sol)?;
    let k = inst.k();
    (0..inst.n())
        .map(|i| {
            let a = vector_index(k, i, 0);
            let mut s = 0.0;
            for r in 1..=k {
                s += arcsin_y(sol.inner(a, vector_index(k, i, r)))?;
            }
            Ok(s - (2.0 - k as f64))
        })
        .collect()
}

/// `(2/π) · z1`.
pub fn bound_from_sdp(z1: f64) -> Result<f64> {
    if !(z1 >= 0.0) {
        return Err(Error::OutOfRange { value: z1, lo: 0.0, hi: f64::INFINITY });
    }
    Ok(z1 * 2.0 / PI)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    /// Total edge weight.
    pub total_weight: f64,
    pub z_exact: Option<f64>,
    pub z1: f64,
    pub lb: f64,
    /// `z1 + tol >= z_exact`.
    pub sound: Option<bool>,
    /// `lb <= z_exact + tol`, as observed.
    pub theorem2_holds: Option<bool>,
    /// `z_exact / z1`.
    pub ratio: Option<f64>,
    pub tol: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl BoundReport {
    pub fn from_values(inst: &UgInstance, z1: f64, z_exact: Option<f64>, iterations: usize, converged: bool) -> Result<Self> {
        let lb = bound_from_sdp(z1)?;
        let tol = REPORT_TOL;
        Ok(BoundReport {
            n: inst.n(),
            k: inst.k(),
            m: inst.m(),
            total_weight: inst.total_weight(),
            z_exact,
            z1,
            lb,
            sound: z_exact.map(|z| z1 + tol >= z),
            theorem2_holds: z_exact.map(|z| lb <= z + tol),
            ratio: z_exact.map(|z| if z1 > 0.0 { z / z1 } else { 1.0 }),
            tol,
            iterations,
            converged,
        })
    }

    /// An exact value exists and the `2/π` bound fails on it.
    pub fn is_counterexample(&self) -> bool {
        self.theorem2_holds == Some(false)
    }
}

/// Solves the relaxation and, when `k^n <= limit`, the exact problem, and
/// records how they compare. Solver non-convergence is reported through
/// `converged`, not as an error.
pub fn verify_bounds(inst: &UgInstance, limit: u128, opts: &SolveOptions) -> Result<BoundReport> {
    let prob = build_sdp(inst);
    let sol = solve_sdp(&prob, opts)?;
    let z_exact = match solve_exact(inst, limit) {
        Ok((_, z)) => Some(z),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    BoundReport::from_values(inst, sol.objective.max(0.0), z_exact, sol.iterations, sol.converged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Labeling;
    use crate::instance::{from_maxcut, generate_planted, Edge, Permutation};
    use crate::randomized::{expected_value_y, to_y, ProbAssignment};
    use crate::relaxation::embed_labeling;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn e1() -> UgInstance {
        UgInstance::new(2, 2, vec![Edge::new(0, 1, 1.0, Permutation::identity(2))]).unwrap()
    }

    #[test]
    fn arcsin_y_examples() {
        assert_eq!(arcsin_y(1.0).unwrap(), 1.0);
        assert_eq!(arcsin_y(0.0).unwrap(), 0.0);
        assert!((arcsin_y(0.5).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(arcsin_y(1.0 + 1e-13).unwrap(), 1.0);
        assert!(arcsin_y(1.0 + 1e-9).is_err());
        assert!(arcsin_y(f64::NAN).is_err());
    }

    #[test]
    fn unmatched_prob_examples() {
        assert_eq!(unmatched_prob(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(unmatched_prob(1.0, 1.0).unwrap(), 0.0);
        assert_eq!(unmatched_prob(0.75, 0.75).unwrap(), 0.375);
        assert!(unmatched_prob(1.1, 0.0).is_err());
    }

    #[test]
    fn p4_on_embeddings() {
        let inst = e1();
        let s = embed_labeling(&inst, &Labeling::new(vec![0, 0])).unwrap();
        assert_eq!(p4_objective(&inst, &s).unwrap(), 1.0);
        let s = embed_labeling(&inst, &Labeling::new(vec![0, 1])).unwrap();
        assert_eq!(p4_objective(&inst, &s).unwrap(), 0.0);
    }

    #[test]
    fn p4_residuals() {
        let (inst, l) = generate_planted(5, 3, 6, 1).unwrap();
        let s = embed_labeling(&inst, &l).unwrap();
        assert!(p4_constraint_residual(&inst, &s).unwrap().iter().all(|&r| r.abs() < 1e-15));

        // every label vector equal to its anchor
        let prob = build_sdp(&inst);
        let f = vec![1.0; prob.dim()];
        let s = GramSolution::from_factors(&prob, 1, f).unwrap();
        for r in p4_constraint_residual(&inst, &s).unwrap() {
            assert_eq!(r, 2.0 * 3.0 - 2.0);
        }
    }

    #[test]
    fn bound_from_sdp_examples() {
        assert!((bound_from_sdp(1.0).unwrap() - 0.636_619_772_367_581_3).abs() < 1e-9);
        assert_eq!(bound_from_sdp(0.0).unwrap(), 0.0);
        assert!((bound_from_sdp(PI).unwrap() - 2.0).abs() < 1e-15);
        assert!(bound_from_sdp(-1.0).is_err());
    }

    #[test]
    fn report_on_single_edge() {
        let r = verify_bounds(&e1(), 1 << 10, &SolveOptions::default()).unwrap();
        assert_eq!(r.z_exact, Some(1.0));
        assert!((r.z1 - 1.0).abs() <= 1e-4);
        assert!((r.lb - 2.0 / PI).abs() <= 1e-4);
        assert_eq!(r.sound, Some(true));
        assert_eq!(r.theorem2_holds, Some(true));
    }

    #[test]
    fn report_on_triangle_cut() {
        let tri = from_maxcut(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let r = verify_bounds(&tri, 1 << 10, &SolveOptions::default()).unwrap();
        assert_eq!(r.z_exact, Some(2.0));
        assert!(r.z1 >= 2.0 - 1e-4 && r.z1 <= 3.0 + 1e-4, "{}", r.z1);
        assert_eq!(r.sound, Some(true));
    }

    #[test]
    fn report_without_exact_has_no_flags() {
        let (inst, _) = generate_planted(6, 3, 5, 4).unwrap();
        let r = verify_bounds(&inst, 10, &SolveOptions { restarts: 1, ..Default::default() }).unwrap();
        assert_eq!(r.z_exact, None);
        assert_eq!(r.sound, None);
        assert_eq!(r.theorem2_holds, None);
        assert_eq!(r.ratio, None);
    }

    #[test]
    fn scalar_inequality_needs_nonnegative_argument() {
        for t in 0..=100 {
            let x = t as f64 / 100.0;
            assert!(arcsin_y(x).unwrap() <= x + 1e-15);
            assert!(x.asin() >= x);
        }
        // for negative x both inequalities reverse
        assert!(arcsin_y(-0.5).unwrap() > -0.5);
        assert!((-0.5f64).asin() < -0.5);
    }

    proptest! {
        #[test]
        fn arcsin_and_arccos_routes_agree(c in -1.0f64..=1.0) {
            prop_assert!((arcsin_y(c).unwrap() - arccos_y(c).unwrap()).abs() <= 1e-12);
        }

        #[test]
        fn unmatched_identity(p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
            let u = unmatched_prob(p, q).unwrap();
            prop_assert!((1.0 - 2.0 * u - (2.0 * p - 1.0) * (2.0 * q - 1.0)).abs() <= 1e-12);
        }

        #[test]
        fn bound_is_two_over_pi(z1 in 0.0f64..1e6) {
            prop_assert!((bound_from_sdp(z1).unwrap() - FRAC_2_PI * z1).abs() <= 1e-9 * z1.max(1.0));
        }

        /// Inner products chosen as `sin(π/2 · y)` turn the arcsin objective
        /// back into the y-form expected value.
        #[test]
        fn arcsin_objective_inverts_sine_table(n in 2usize..6, k in 2usize..5, seed in 0u64..500) {
            let m = n * (n - 1) / 2;
            let inst = crate::instance::generate_random(n, k, m, seed).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let rows = (0..n)
                .map(|_| {
                    let raw: Vec<f64> = (0..k).map(|_| rand::Rng::gen_range(&mut rng, 0.01..1.0)).collect();
                    let s: f64 = raw.iter().sum();
                    let mut row: Vec<f64> = raw.iter().map(|x| x / s).collect();
                    let head: f64 = row[..k - 1].iter().sum();
                    row[k - 1] = 1.0 - head;
                    row
                })
                .collect();
            let y = to_y(&ProbAssignment::new(rows).unwrap());
            let slot = |u: usize| (u / (k + 1), u % (k + 1));
            let yv = |u: usize| { let (i, s) = slot(u); y.get(i, s - 1) };
            let inner = |a: usize, b: usize| -> f64 {
                let (sa, sb) = (slot(a).1, slot(b).1);
                let t = match (sa, sb) {
                    _ if a == b => 1.0,
                    (0, 0) => 1.0,
                    (0, _) => yv(b),
                    (_, 0) => yv(a),
                    _ => yv(a) * yv(b),
                };
                (std::f64::consts::FRAC_PI_2 * t).sin()
            };
            let p4 = p4_objective_with(&inst, inner).unwrap();
            let ey = expected_value_y(&inst, &y).unwrap();
            prop_assert!((p4 - ey).abs() <= 1e-9 * ey.abs().max(1.0), "{} vs {}", p4, ey);
        }
    }
}
