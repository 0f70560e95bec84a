//! Unique-games instances: a weighted graph with a label bijection per edge.
//!
//! Labels are 0-based in memory and 1-based in the text format.
//!
//! # Randomness
//!
//! Every generator seeds a `ChaCha8Rng` (rand_chacha 0.3) with
//! `seed_from_u64(seed)`. Edge sets are drawn with
//! `rand::seq::index::sample` over the `n(n-1)/2` vertex pairs and
//! permutations with `SliceRandom::shuffle` (Fisher–Yates), both from rand
//! 0.8. The draw order is fixed: edge set first, then (for planted
//! instances) the labeling, then one permutation per edge in sorted edge
//! order. Changing any of these changes every generated corpus.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::Labeling;

/// A bijection on `0..k`; `apply(r)` is the label of `j` that matches label
/// `r` of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let len = map.len();
        let mut seen = vec![false; len];
        for &s in &map {
            if s >= len || seen[s] {
                return Err(Error::NonBijective { map, len });
            }
            seen[s] = true;
        }
        Ok(Permutation(map))
    }

    pub fn identity(k: usize) -> Self {
        Permutation((0..k).collect())
    }

    /// The transposition `[1, 0]` used by the maxcut encoding.
    pub fn swap2() -> Self {
        Permutation(vec![1, 0])
    }

    #[inline]
    pub fn apply(&self, r: usize) -> usize {
        self.0[r]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (r, &s) in self.0.iter().enumerate() {
            inv[s] = r;
        }
        Permutation(inv)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
    pub sigma: Permutation,
}

impl Edge {
    pub fn new(i: usize, j: usize, w: f64, sigma: Permutation) -> Self {
        Edge { i, j, w, sigma }
    }

    /// Matched iff `label_j == sigma(label_i)`, in the stored orientation.
    #[inline]
    pub fn is_matched(&self, label_i: usize, label_j: usize) -> bool {
        self.sigma.apply(label_i) == label_j
    }
}

/// A validated instance. Edges are kept sorted by `(i, j)` so that the
/// canonical text form and the in-memory form correspond one to one.
#[derive(Debug, Clone, PartialEq)]
pub struct UgInstance {
    n: usize,
    k: usize,
    edges: Vec<Edge>,
}

impl UgInstance {
    pub fn new(n: usize, k: usize, mut edges: Vec<Edge>) -> Result<Self> {
        validate_parts(n, k, &edges)?;
        edges.sort_by_key(|e| (e.i, e.j));
        Ok(UgInstance { n, k, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Edge indices incident to each vertex, in edge order.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (idx, e) in self.edges.iter().enumerate() {
            adj[e.i].push(idx);
            adj[e.j].push(idx);
        }
        adj
    }

    /// `k^n`, saturating.
    pub fn labeling_count(&self) -> u128 {
        let mut c: u128 = 1;
        for _ in 0..self.n {
            c = c.saturating_mul(self.k as u128);
        }
        c
    }

    pub fn validate(&self) -> Result<()> {
        validate_parts(self.n, self.k, &self.edges)
    }
}

pub fn validate(inst: &UgInstance) -> Result<()> {
    inst.validate()
}

fn validate_parts(n: usize, k: usize, edges: &[Edge]) -> Result<()> {
    if k < 2 {
        return Err(Error::TooFewLabels(k));
    }
    let mut pairs = HashSet::with_capacity(edges.len());
    for (idx, e) in edges.iter().enumerate() {
        for v in [e.i, e.j] {
            if v >= n {
                return Err(Error::VertexOutOfRange { edge: idx, vertex: v, n });
            }
        }
        if e.i == e.j {
            return Err(Error::SelfLoop { edge: idx, vertex: e.i });
        }
        // NaN fails this comparison too
        if !(e.w > 0.0) || !e.w.is_finite() {
            return Err(Error::NonPositiveWeight { edge: idx, weight: e.w });
        }
        if e.sigma.len() != k {
            return Err(Error::PermutationLength { edge: idx, got: e.sigma.len(), k });
        }
        // Permutation::new already enforces this; re-check for values built
        // through other paths (e.g. Clone of a foreign instance).
        Permutation::new(e.sigma.0.clone())?;
        if !pairs.insert((e.i.min(e.j), e.i.max(e.j))) {
            return Err(Error::DuplicateEdge { edge: idx, i: e.i, j: e.j });
        }
    }
    Ok(())
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Decodes the lexicographic rank of an unordered pair `i < j`.
fn pair_from_rank(n: usize, mut rank: usize) -> (usize, usize) {
    let mut i = 0;
    loop {
        let row = n - 1 - i;
        if rank < row {
            return (i, i + 1 + rank);
        }
        rank -= row;
        i += 1;
    }
}

fn sample_pairs(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Result<Vec<(usize, usize)>> {
    let max = pair_count(n);
    if m > max {
        return Err(Error::TooManyEdges { m, max });
    }
    let mut ranks = index::sample(rng, max, m).into_vec();
    ranks.sort_unstable();
    Ok(ranks.into_iter().map(|r| pair_from_rank(n, r)).collect())
}

fn random_permutation(rng: &mut ChaCha8Rng, k: usize) -> Permutation {
    let mut map: Vec<usize> = (0..k).collect();
    map.shuffle(rng);
    Permutation(map)
}

/// `m` distinct unit-weight edges with uniform random permutations.
pub fn generate_random(n: usize, k: usize, m: usize, seed: u64) -> Result<UgInstance> {
    if k < 2 {
        return Err(Error::TooFewLabels(k));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = sample_pairs(&mut rng, n, m)?;
    let edges = pairs
        .into_iter()
        .map(|(i, j)| Edge::new(i, j, 1.0, random_permutation(&mut rng, k)))
        .collect();
    UgInstance::new(n, k, edges)
}

/// Like [`generate_random`], but every permutation is conditioned on
/// `sigma(L[i]) = L[j]` for a hidden uniform labeling `L`, which is
/// returned alongside. Every edge is matched under `L`.
pub fn generate_planted(n: usize, k: usize, m: usize, seed: u64) -> Result<(UgInstance, Labeling)> {
    if k < 2 {
        return Err(Error::TooFewLabels(k));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = sample_pairs(&mut rng, n, m)?;
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let edges = pairs
        .into_iter()
        .map(|(i, j)| {
            let mut sigma = random_permutation(&mut rng, k);
            let pos = sigma.0.iter().position(|&s| s == labels[j]).expect("bijection");
            sigma.0.swap(pos, labels[i]);
            Edge::new(i, j, 1.0, sigma)
        })
        .collect();
    Ok((UgInstance::new(n, k, edges)?, Labeling::new(labels)))
}

/// Encodes a weighted maxcut instance: `k = 2`, every permutation swaps the
/// two labels, so an edge is matched exactly when it is cut.
pub fn from_maxcut(n: usize, weighted_edges: &[(usize, usize, f64)]) -> Result<UgInstance> {
    let edges = weighted_edges
        .iter()
        .map(|&(i, j, w)| Edge::new(i, j, w, Permutation::swap2()))
        .collect();
    UgInstance::new(n, 2, edges)
}

/// Random unit-weight graph encoded through [`from_maxcut`].
pub fn generate_maxcut(n: usize, m: usize, seed: u64) -> Result<UgInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = sample_pairs(&mut rng, n, m)?;
    let edges: Vec<_> = pairs.into_iter().map(|(i, j)| (i, j, 1.0)).collect();
    from_maxcut(n, &edges)
}

/// Kind of instance in a fuzz corpus entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    Random,
    Planted,
    Maxcut,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: CorpusKind,
    pub instance: UgInstance,
}

/// Small mixed corpus for property checks: every entry has `k^n <= 4096`
/// and a Gram dimension `(k+1)·n <= 40`. Entries cycle through random,
/// planted and maxcut encodings.
pub fn fuzz_corpus(count: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let idx = out.len();
        let k: usize = rng.gen_range(2..=4);
        let max_n = match k {
            2 => 10,
            3 => 7,
            _ => 6,
        };
        let n: usize = rng.gen_range(3..=max_n);
        let m: usize = rng.gen_range(1..=pair_count(n));
        let sub_seed: u64 = rng.gen();
        let kind = match idx % 3 {
            0 => CorpusKind::Random,
            1 => CorpusKind::Planted,
            _ => CorpusKind::Maxcut,
        };
        let instance = match kind {
            CorpusKind::Random => generate_random(n, k, m, sub_seed),
            CorpusKind::Planted => generate_planted(n, k, m, sub_seed).map(|(inst, _)| inst),
            CorpusKind::Maxcut => generate_maxcut(n, m, sub_seed),
        }
        .expect("corpus parameters are in range");
        let tag = match kind {
            CorpusKind::Random => "random",
            CorpusKind::Planted => "planted",
            CorpusKind::Maxcut => "maxcut",
        };
        out.push(CorpusEntry { name: format!("{idx:04}_{tag}"), kind, instance });
    }
    out
}

/// Canonical text form: `UG 1`, `n k`, `m`, then one line per edge with
/// 1-based vertices and labels. Weights use the shortest representation
/// that parses back to the same `f64`.
pub fn write(inst: &UgInstance) -> String {
    let mut s = String::new();
    s.push_str("UG 1\n");
    let _ = writeln!(s, "{} {}", inst.n, inst.k);
    let _ = writeln!(s, "{}", inst.m());
    for e in &inst.edges {
        let _ = write!(s, "{} {} {}", e.i + 1, e.j + 1, e.w);
        for &t in e.sigma.as_slice() {
            let _ = write!(s, " {}", t + 1);
        }
        s.push('\n');
    }
    s
}

pub fn read(text: &str) -> Result<UgInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(no, l)| (no + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty input".into() })?;
    let mut head = header.split_whitespace();
    match (head.next(), head.next(), head.next()) {
        (Some("UG"), Some("1"), None) => {}
        (Some("UG"), Some(_), None) => return Err(Error::UnsupportedVersion(header.to_string())),
        _ => {
            return Err(Error::Parse { line: hline, message: format!("expected header \"UG 1\", got {header:?}") })
        }
    }

    let (dline, dims) = lines.next().ok_or(Error::Parse { line: hline + 1, message: "missing \"n k\" line".into() })?;
    let nk = parse_fields::<usize>(dims, dline, "n k")?;
    if nk.len() != 2 {
        return Err(Error::Parse { line: dline, message: format!("expected 2 fields \"n k\", got {}", nk.len()) });
    }
    let (n, k) = (nk[0], nk[1]);

    let (mline, mtext) = lines.next().ok_or(Error::Parse { line: dline + 1, message: "missing edge count".into() })?;
    let mv = parse_fields::<usize>(mtext, mline, "m")?;
    if mv.len() != 1 {
        return Err(Error::Parse { line: mline, message: "expected a single edge count".into() });
    }
    let m = mv[0];

    let mut edges = Vec::with_capacity(m);
    let mut last_line = mline;
    for _ in 0..m {
        let (line, text) = lines.next().ok_or(Error::Parse {
            line: last_line + 1,
            message: format!("expected {m} edge lines, found {}", edges.len()),
        })?;
        last_line = line;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 3 + k {
            return Err(Error::Parse {
                line,
                message: format!("edge line needs {} fields (i j w and {k} labels), got {}", 3 + k, fields.len()),
            });
        }
        let one_based = |s: &str, what: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| Error::Parse { line, message: format!("bad {what} {s:?}") })?;
            if v == 0 {
                return Err(Error::Parse { line, message: format!("{what} is 1-based, got 0") });
            }
            Ok(v - 1)
        };
        let i = one_based(fields[0], "vertex")?;
        let j = one_based(fields[1], "vertex")?;
        let w: f64 = fields[2].parse().map_err(|_| Error::Parse { line, message: format!("bad weight {:?}", fields[2]) })?;
        let map = fields[3..].iter().map(|s| one_based(s, "label")).collect::<Result<Vec<_>>>()?;
        edges.push(Edge::new(i, j, w, Permutation::new(map)?));
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse { line, message: format!("trailing content after {m} edges") });
    }
    UgInstance::new(n, k, edges)
}

fn parse_fields<T: std::str::FromStr>(text: &str, line: usize, what: &str) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|s| s.parse::<T>().map_err(|_| Error::Parse { line, message: format!("bad {what} field {s:?}") }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{solve_exact, value};

    fn e1() -> UgInstance {
        UgInstance::new(2, 2, vec![Edge::new(0, 1, 1.0, Permutation::identity(2))]).unwrap()
    }

    #[test]
    fn validate_accepts_single_identity_edge() {
        assert!(e1().validate().is_ok());
    }

    #[test]
    fn non_bijective_permutation_rejected() {
        assert!(matches!(Permutation::new(vec![0, 0]), Err(Error::NonBijective { .. })));
        assert!(matches!(Permutation::new(vec![0, 2]), Err(Error::NonBijective { .. })));
    }

    #[test]
    fn each_invalid_edge_has_its_own_error() {
        let id = Permutation::identity(2);
        let mk = |edges| UgInstance::new(3, 2, edges);
        assert!(matches!(mk(vec![Edge::new(0, 1, 0.0, id.clone())]), Err(Error::NonPositiveWeight { .. })));
        assert!(matches!(mk(vec![Edge::new(0, 1, -2.0, id.clone())]), Err(Error::NonPositiveWeight { .. })));
        assert!(matches!(mk(vec![Edge::new(0, 1, f64::NAN, id.clone())]), Err(Error::NonPositiveWeight { .. })));
        assert!(matches!(mk(vec![Edge::new(0, 3, 1.0, id.clone())]), Err(Error::VertexOutOfRange { vertex: 3, .. })));
        assert!(matches!(mk(vec![Edge::new(1, 1, 1.0, id.clone())]), Err(Error::SelfLoop { vertex: 1, .. })));
        assert!(matches!(
            mk(vec![Edge::new(0, 1, 1.0, id.clone()), Edge::new(1, 0, 1.0, id.clone())]),
            Err(Error::DuplicateEdge { edge: 1, .. })
        ));
        assert!(matches!(
            mk(vec![Edge::new(0, 1, 1.0, Permutation::identity(3))]),
            Err(Error::PermutationLength { got: 3, k: 2, .. })
        ));
        assert!(matches!(UgInstance::new(3, 1, vec![]), Err(Error::TooFewLabels(1))));
    }

    #[test]
    fn random_generator_is_deterministic() {
        let a = generate_random(4, 3, 3, 7).unwrap();
        let b = generate_random(4, 3, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.m(), 3);
        assert_ne!(a, generate_random(4, 3, 3, 8).unwrap());
    }

    #[test]
    fn random_generator_rejects_too_many_edges() {
        assert_eq!(generate_random(2, 2, 2, 0), Err(Error::TooManyEdges { m: 2, max: 1 }));
    }

    #[test]
    fn random_generator_complete_graph() {
        let inst = generate_random(5, 2, 10, 1).unwrap();
        let pairs: HashSet<_> = inst.edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs.len(), 10);
        for i in 0..5 {
            for j in i + 1..5 {
                assert!(pairs.contains(&(i, j)));
            }
        }
    }

    #[test]
    fn pair_rank_decoding_covers_all_pairs() {
        let n = 6;
        let decoded: Vec<_> = (0..pair_count(n)).map(|r| pair_from_rank(n, r)).collect();
        let mut expected = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                expected.push((i, j));
            }
        }
        assert_eq!(decoded, expected);
    }

    #[test]
    fn planted_labeling_matches_every_edge() {
        for seed in 0..20 {
            let (inst, l) = generate_planted(6, 4, 9, seed).unwrap();
            assert_eq!(value(&inst, &l).unwrap(), inst.total_weight());
        }
        let again = generate_planted(6, 4, 9, 3).unwrap();
        assert_eq!(again, generate_planted(6, 4, 9, 3).unwrap());
    }

    #[test]
    fn planted_triangle_is_fully_satisfiable() {
        let (inst, _) = generate_planted(3, 2, 3, 5).unwrap();
        let (_, z) = solve_exact(&inst, 1 << 10).unwrap();
        assert_eq!(z, 3.0);
    }

    #[test]
    fn maxcut_encoding_values() {
        let tri = from_maxcut(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(solve_exact(&tri, 64).unwrap().1, 2.0);
        let single = from_maxcut(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(solve_exact(&single, 64).unwrap().1, 1.0);
        let path = from_maxcut(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let (l, z) = solve_exact(&path, 64).unwrap();
        assert_eq!(z, 2.0);
        assert_ne!(l.labels()[0], l.labels()[1]);
        assert_ne!(l.labels()[1], l.labels()[2]);
    }

    #[test]
    fn round_trip_generated_instance() {
        let inst = generate_random(6, 3, 8, 2).unwrap();
        let text = write(&inst);
        let back = read(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(write(&back), text);
    }

    #[test]
    fn fractional_weights_round_trip_exactly() {
        let w = 0.1 + 0.2;
        let inst = UgInstance::new(3, 3, vec![Edge::new(2, 0, w, Permutation::new(vec![2, 0, 1]).unwrap())]).unwrap();
        let back = read(&write(&inst)).unwrap();
        assert_eq!(back.edges()[0].w.to_bits(), w.to_bits());
        assert_eq!(back.edges()[0].i, 2);
    }

    #[test]
    fn read_skips_comments_and_reports_lines() {
        let text = "# a comment\nUG 1\n# dims\n2 2\n1\n1 2 1.5 2 1\n";
        let inst = read(text).unwrap();
        assert_eq!(inst.edges()[0].sigma, Permutation::swap2());
        assert_eq!(inst.edges()[0].w, 1.5);

        assert_eq!(read("UG 2\n2 2\n0\n"), Err(Error::UnsupportedVersion("UG 2".into())));

        let truncated = "UG 1\n3 2\n2\n1 2 1 1 2\n2 3 1\n";
        match read(truncated) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        match read("UG 1\n3 2\n2\n1 2 1 1 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(read("UG 1\n2 2\n1\n1 2 1 1 1\n"), Err(Error::NonBijective { .. })));
        assert!(matches!(read("UG 1\n2 2\n1\n1 2 0 1 2\n"), Err(Error::NonPositiveWeight { .. })));
        assert!(matches!(read("UG 1\n2 2\n1\n0 2 1 1 2\n"), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn corpus_respects_size_limits() {
        let corpus = fuzz_corpus(30, 9);
        assert_eq!(corpus.len(), 30);
        for entry in &corpus {
            let inst = &entry.instance;
            assert!(inst.labeling_count() <= 4096);
            assert!((inst.k() + 1) * inst.n() <= 40);
            assert!(inst.m() >= 1);
        }
    }
}
