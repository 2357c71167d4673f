//! Weighted graphs, vertex permutations, and the brute-force edit-distance
//! oracles that define when two graphs count as "the same".
//!
//! A graph here is nothing but a dense real `n`×`n` weight matrix; vertex
//! `u`'s self-weight sits on the diagonal. All indices are 0-based in code
//! (file formats are 1-based, see [`crate::format`]).

use crate::error::{Caps, Error, Result};
use itertools::Itertools;

/// Dense weighted directed graph on `n` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    w: Vec<f64>, // row-major n*n
}

impl WeightedGraph {
    /// Zero matrix on `n` vertices.
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "vertex count must be positive");
        WeightedGraph {
            n,
            w: vec![0.0; n * n],
        }
    }

    /// Build from a row-major slice of length `n*n`.
    pub fn from_rows(n: usize, rows: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "vertex count must be positive"));
        }
        if rows.len() != n * n {
            return Err(Error::invalid(
                "weights",
                format!("expected {}x{} = {} entries, got {}", n, n, n * n, rows.len()),
            ));
        }
        Ok(WeightedGraph {
            n,
            w: rows.to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.w[u * self.n + v]
    }

    pub fn set_weight(&mut self, u: usize, v: usize, value: f64) {
        self.w[u * self.n + v] = value;
    }

    /// Row-major view of the weight matrix.
    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// True when every entry lies in [-1, 1], the domain the regression
    /// model is stated over. Engine operations accept any real matrix.
    pub fn is_model_domain(&self) -> bool {
        self.w.iter().all(|x| x.abs() <= 1.0)
    }

    pub fn validate_model_domain(&self) -> Result<()> {
        if self.is_model_domain() {
            Ok(())
        } else {
            Err(Error::invalid(
                "weights",
                "entry magnitude exceeds 1 (outside the model domain)",
            ))
        }
    }

    /// True when every entry is an exact integer.
    pub fn is_integer(&self) -> bool {
        self.w.iter().all(|x| x.fract() == 0.0 && x.is_finite())
    }
}

/// `W + c·I`: add `c` to every diagonal entry, off-diagonal untouched.
pub fn shift(g: &WeightedGraph, c: f64) -> WeightedGraph {
    let mut out = g.clone();
    for v in 0..g.n {
        out.w[v * g.n + v] += c;
    }
    out
}

/// Entrywise l1 norm of the weight matrix.
pub fn l1_norm(g: &WeightedGraph) -> f64 {
    g.w.iter().map(|x| x.abs()).sum()
}

/// A bijection on `[n]`, stored as `mapping[i] = sigma(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            mapping: (0..n).collect(),
        }
    }

    /// Validates that `mapping` is a bijection on `0..mapping.len()`.
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &img in &mapping {
            if img >= n {
                return Err(Error::invalid(
                    "permutation",
                    format!("image {img} out of range for n = {n}"),
                ));
            }
            if seen[img] {
                return Err(Error::invalid(
                    "permutation",
                    format!("image {img} appears twice"),
                ));
            }
            seen[img] = true;
        }
        Ok(Permutation { mapping })
    }

    pub fn n(&self) -> usize {
        self.mapping.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.mapping.len()];
        for (i, &img) in self.mapping.iter().enumerate() {
            inv[img] = i;
        }
        Permutation { mapping: inv }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(Permutation {
            mapping: other.mapping.iter().map(|&i| self.mapping[i]).collect(),
        })
    }

    /// Uniform random permutation (Fisher-Yates).
    pub fn random<R: rand::Rng>(n: usize, rng: &mut R) -> Permutation {
        let mut mapping: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            mapping.swap(i, j);
        }
        Permutation { mapping }
    }
}

/// Push-forward relabeling: the result `W^σ` satisfies
/// `W^σ(σ(u), σ(v)) = W(u, v)`.
pub fn permute(g: &WeightedGraph, s: &Permutation) -> Result<WeightedGraph> {
    if s.n() != g.n {
        return Err(Error::SizeMismatch {
            left: g.n,
            right: s.n(),
        });
    }
    let n = g.n;
    let mut out = vec![0.0; n * n];
    for u in 0..n {
        for v in 0..n {
            out[s.apply(u) * n + s.apply(v)] = g.w[u * n + v];
        }
    }
    Ok(WeightedGraph { n, w: out })
}

/// A weighted graph with `k` distinguished, pairwise-distinct vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    graph: WeightedGraph,
    labels: Vec<usize>,
}

impl LabeledGraph {
    pub fn new(graph: WeightedGraph, labels: Vec<usize>) -> Result<Self> {
        if labels.len() > graph.n() {
            return Err(Error::invalid(
                "labels",
                format!("{} labels on {} vertices", labels.len(), graph.n()),
            ));
        }
        let mut seen = vec![false; graph.n()];
        for &x in &labels {
            if x >= graph.n() {
                return Err(Error::invalid(
                    "labels",
                    format!("label {} out of range for n = {}", x + 1, graph.n()),
                ));
            }
            if seen[x] {
                return Err(Error::invalid(
                    "labels",
                    format!("label {} repeated; labels must be pairwise distinct", x + 1),
                ));
            }
            seen[x] = true;
        }
        Ok(LabeledGraph { graph, labels })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.labels.len()
    }
}

/// `(W, x)^σ = (W^σ, x^σ)`: relabel the graph and map each label through σ.
pub fn permute_labeled(g: &LabeledGraph, s: &Permutation) -> Result<LabeledGraph> {
    let graph = permute(&g.graph, s)?;
    let labels = g.labels.iter().map(|&x| s.apply(x)).collect();
    // bijections preserve distinctness, so this cannot fail
    LabeledGraph::new(graph, labels)
}

fn check_edit_cap(n: usize, caps: &Caps) -> Result<()> {
    if n > caps.edit_max_n {
        let mut estimated: u64 = 1;
        for i in 2..=n as u64 {
            estimated = estimated.saturating_mul(i);
        }
        return Err(Error::CapExceeded {
            what: "edit-distance permutation search",
            estimated: estimated.saturating_mul((n * n) as u64),
            cap: (1..=caps.edit_max_n as u64).product::<u64>() * (caps.edit_max_n * caps.edit_max_n) as u64,
        });
    }
    Ok(())
}

fn l1_diff_permuted(w1: &WeightedGraph, w2: &WeightedGraph, sigma: &[usize]) -> f64 {
    // || W1 - W2^σ ||_1 with W2^σ(σ(u),σ(v)) = W2(u,v)
    let n = w1.n;
    let mut total = 0.0;
    for u in 0..n {
        for v in 0..n {
            total += (w1.w[sigma[u] * n + sigma[v]] - w2.w[u * n + v]).abs();
        }
    }
    total
}

/// Edit distance δ₁: minimum of `||W1 - W2^σ||₁` over all `n!` vertex
/// permutations σ. Deliberately an exhaustive oracle; see [`Caps::edit_max_n`].
pub fn edit_distance(g1: &WeightedGraph, g2: &WeightedGraph, caps: &Caps) -> Result<f64> {
    if g1.n != g2.n {
        return Err(Error::SizeMismatch {
            left: g1.n,
            right: g2.n,
        });
    }
    check_edit_cap(g1.n, caps)?;
    let mut best = f64::INFINITY;
    for sigma in (0..g1.n).permutations(g1.n) {
        let d = l1_diff_permuted(g1, g2, &sigma);
        if d < best {
            best = d;
        }
    }
    Ok(best)
}

/// Labeled edit distance δ₁′: like [`edit_distance`] but σ must carry the
/// second label tuple onto the first, `x1 = x2^σ`. A feasible σ always
/// exists for distinct tuples of equal length.
pub fn labeled_edit_distance(g1: &LabeledGraph, g2: &LabeledGraph, caps: &Caps) -> Result<f64> {
    if g1.graph.n != g2.graph.n {
        return Err(Error::SizeMismatch {
            left: g1.graph.n,
            right: g2.graph.n,
        });
    }
    if g1.k() != g2.k() {
        return Err(Error::ArityMismatch {
            left: g1.k(),
            right: g2.k(),
        });
    }
    let n = g1.graph.n;
    check_edit_cap(n, caps)?;
    // σ is pinned on the labels of g2: σ(x2_i) = x1_i. Permute only the rest.
    let mut sigma = vec![usize::MAX; n];
    let mut target_used = vec![false; n];
    for (x2, x1) in g2.labels.iter().zip(&g1.labels) {
        sigma[*x2] = *x1;
        target_used[*x1] = true;
    }
    let free_sources: Vec<usize> = (0..n).filter(|v| sigma[*v] == usize::MAX).collect();
    let free_targets: Vec<usize> = (0..n).filter(|v| !target_used[*v]).collect();
    let mut best = f64::INFINITY;
    if free_sources.is_empty() {
        return Ok(l1_diff_permuted(&g1.graph, &g2.graph, &sigma));
    }
    for assignment in free_targets.iter().permutations(free_targets.len()) {
        for (src, tgt) in free_sources.iter().zip(&assignment) {
            sigma[*src] = **tgt;
        }
        let d = l1_diff_permuted(&g1.graph, &g2.graph, &sigma);
        if d < best {
            best = d;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_graph(n: usize, rng: &mut ChaCha8Rng) -> WeightedGraph {
        use rand::Rng;
        let w: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        WeightedGraph::from_rows(n, &w).unwrap()
    }

    #[test]
    fn permute_identity_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_graph(4, &mut rng);
        let id = Permutation::identity(4);
        assert_eq!(permute(&g, &id).unwrap(), g);
    }

    #[test]
    fn permute_moves_single_arc() {
        let g = WeightedGraph::from_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let swap = Permutation::new(vec![1, 0]).unwrap();
        let p = permute(&g, &swap).unwrap();
        assert_eq!(p.weights(), &[0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn permute_then_inverse_roundtrips() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_graph(5, &mut rng);
        let s = Permutation::random(5, &mut rng);
        let back = permute(&permute(&g, &s).unwrap(), &s.inverse()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn permute_rejects_size_mismatch() {
        let g = WeightedGraph::zeros(3);
        let s = Permutation::identity(4);
        assert!(matches!(
            permute(&g, &s),
            Err(Error::SizeMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn permutation_rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3]).is_err());
    }

    #[test]
    fn labeled_permute_maps_labels_componentwise() {
        // n=3, labels (1,2) 0-based (0,1); cycle 0->1->2->0
        let g = LabeledGraph::new(WeightedGraph::zeros(3), vec![0, 1]).unwrap();
        let cycle = Permutation::new(vec![1, 2, 0]).unwrap();
        let p = permute_labeled(&g, &cycle).unwrap();
        assert_eq!(p.labels(), &[1, 2]);
    }

    #[test]
    fn labeled_graph_rejects_bad_labels() {
        assert!(LabeledGraph::new(WeightedGraph::zeros(3), vec![0, 0]).is_err());
        assert!(LabeledGraph::new(WeightedGraph::zeros(3), vec![3]).is_err());
        assert!(LabeledGraph::new(WeightedGraph::zeros(2), vec![0, 1, 0]).is_err());
    }

    #[test]
    fn l1_norm_examples() {
        assert_eq!(l1_norm(&WeightedGraph::zeros(3)), 0.0);
        let ones = WeightedGraph::from_rows(3, &[1.0; 9]).unwrap();
        assert_eq!(l1_norm(&ones), 9.0);
        let g = WeightedGraph::from_rows(2, &[0.5, -0.5, 0.0, 1.0]).unwrap();
        assert_eq!(l1_norm(&g), 2.0);
    }

    #[test]
    fn shift_examples() {
        let s = shift(&WeightedGraph::zeros(3), 2.0);
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(s.weight(u, v), if u == v { 2.0 } else { 0.0 });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_graph(4, &mut rng);
        let back = shift(&shift(&g, 2.0), -2.0);
        for (a, b) in back.weights().iter().zip(g.weights()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn edit_distance_identifies_permuted_copies() {
        let caps = Caps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let g = random_graph(4, &mut rng);
            let s = Permutation::random(4, &mut rng);
            let d = edit_distance(&g, &permute(&g, &s).unwrap(), &caps).unwrap();
            assert_eq!(d, 0.0);
        }
    }

    #[test]
    fn edit_distance_zero_vs_ones_is_n_squared() {
        let caps = Caps::default();
        for n in 2..=4 {
            let zero = WeightedGraph::zeros(n);
            let ones = WeightedGraph::from_rows(n, &vec![1.0; n * n]).unwrap();
            assert_eq!(edit_distance(&zero, &ones, &caps).unwrap(), (n * n) as f64);
        }
    }

    #[test]
    fn edit_distance_matches_independent_enumeration() {
        // independent oracle: direct loop over all 24 permutations of [4]
        let caps = Caps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g1 = random_graph(4, &mut rng);
        let g2 = random_graph(4, &mut rng);
        let mut expected = f64::INFINITY;
        for sigma in (0..4usize).permutations(4) {
            let mut total = 0.0;
            for u in 0..4 {
                for v in 0..4 {
                    total += (g1.weight(sigma[u], sigma[v]) - g2.weight(u, v)).abs();
                }
            }
            expected = expected.min(total);
        }
        assert_eq!(edit_distance(&g1, &g2, &caps).unwrap(), expected);
    }

    #[test]
    fn edit_distance_cap_is_enforced() {
        let caps = Caps {
            edit_max_n: 3,
            ..Caps::default()
        };
        let g = WeightedGraph::zeros(4);
        assert!(matches!(
            edit_distance(&g, &g, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn labeled_edit_distance_examples() {
        let caps = Caps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = random_graph(4, &mut rng);
        let lg = LabeledGraph::new(g.clone(), vec![2, 0]).unwrap();
        assert_eq!(labeled_edit_distance(&lg, &lg, &caps).unwrap(), 0.0);

        let s = Permutation::random(4, &mut rng);
        let pg = permute_labeled(&lg, &s).unwrap();
        assert_eq!(labeled_edit_distance(&pg, &lg, &caps).unwrap(), 0.0);
    }

    #[test]
    fn labeled_edit_distance_dominates_unlabeled() {
        let caps = Caps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g1 = random_graph(4, &mut rng);
            let g2 = random_graph(4, &mut rng);
            let l1 = LabeledGraph::new(g1.clone(), vec![0, 2]).unwrap();
            let l2 = LabeledGraph::new(g2.clone(), vec![1, 3]).unwrap();
            let labeled = labeled_edit_distance(&l1, &l2, &caps).unwrap();
            let unlabeled = edit_distance(&g1, &g2, &caps).unwrap();
            assert!(labeled >= unlabeled - 1e-12);
        }
    }

    #[test]
    fn labeled_edit_distance_fully_labeled_has_single_candidate() {
        let caps = Caps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g1 = random_graph(3, &mut rng);
        let g2 = random_graph(3, &mut rng);
        let l1 = LabeledGraph::new(g1.clone(), vec![0, 1, 2]).unwrap();
        let l2 = LabeledGraph::new(g2.clone(), vec![0, 1, 2]).unwrap();
        let d = labeled_edit_distance(&l1, &l2, &caps).unwrap();
        let direct: f64 = (0..9).map(|i| (g1.weights()[i] - g2.weights()[i]).abs()).sum();
        assert!((d - direct).abs() < 1e-12);
    }

    #[test]
    fn labeled_edit_distance_rejects_arity_mismatch() {
        let l1 = LabeledGraph::new(WeightedGraph::zeros(3), vec![0]).unwrap();
        let l2 = LabeledGraph::new(WeightedGraph::zeros(3), vec![0, 1]).unwrap();
        assert!(matches!(
            labeled_edit_distance(&l1, &l2, &Caps::default()),
            Err(Error::ArityMismatch { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn permute_is_a_group_action(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(5, &mut rng);
            let tau = Permutation::random(5, &mut rng);
            let sigma = Permutation::random(5, &mut rng);
            let lhs = permute(&g, &sigma.compose(&tau).unwrap()).unwrap();
            let rhs = permute(&permute(&g, &tau).unwrap(), &sigma).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn l1_norm_is_permutation_invariant(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(5, &mut rng);
            let s = Permutation::random(5, &mut rng);
            let a = l1_norm(&g);
            let b = l1_norm(&permute(&g, &s).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }

        #[test]
        fn edit_distance_pseudo_metric_laws(seed in 0u64..500, n in 2usize..=5) {
            let caps = Caps::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_graph(n, &mut rng);
            let b = random_graph(n, &mut rng);
            let c = random_graph(n, &mut rng);
            let dab = edit_distance(&a, &b, &caps).unwrap();
            let dba = edit_distance(&b, &a, &caps).unwrap();
            let dac = edit_distance(&a, &c, &caps).unwrap();
            let dbc = edit_distance(&b, &c, &caps).unwrap();
            prop_assert!(dab >= 0.0);
            prop_assert!((dab - dba).abs() <= 1e-12);
            prop_assert!(dac <= dab + dbc + 1e-12);
        }
    }
}
