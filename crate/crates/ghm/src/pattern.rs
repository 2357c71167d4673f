//! Simple directed pattern graphs, canonical forms, and atlas enumeration.
//!
//! Patterns index the feature algebra, so the atlas must contain exactly one
//! representative per isomorphism class. Sizes are tiny (≤ 6 vertices), so
//! canonicalization is exhaustive permutation minimization over the
//! adjacency bit-matrix; no sophisticated canonical-labeling machinery.

use crate::error::{Caps, Error, Result};
use itertools::Itertools;
use std::collections::BTreeSet;

/// Simple unweighted directed graph: no loops, no duplicate arcs.
/// Vertices are `0..m`; edges are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    m: usize,
    edges: Vec<(usize, usize)>,
}

impl Pattern {
    pub fn new(m: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("m", "pattern needs at least one vertex"));
        }
        edges.sort_unstable();
        for window in edges.windows(2) {
            if window[0] == window[1] {
                return Err(Error::invalid(
                    "edges",
                    format!("duplicate edge ({}, {})", window[0].0 + 1, window[0].1 + 1),
                ));
            }
        }
        for &(i, j) in &edges {
            if i == j {
                return Err(Error::invalid("edges", format!("self-loop at vertex {}", i + 1)));
            }
            if i >= m || j >= m {
                return Err(Error::invalid(
                    "edges",
                    format!("edge ({}, {}) out of range for m = {m}", i + 1, j + 1),
                ));
            }
        }
        Ok(Pattern { m, edges })
    }

    /// The single vertex with no arcs.
    pub fn singleton() -> Self {
        Pattern { m: 1, edges: vec![] }
    }

    /// Directed path 0 -> 1 -> ... -> m-1.
    pub fn directed_path(m: usize) -> Self {
        Pattern {
            m,
            edges: (0..m.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        }
    }

    /// Directed cycle 0 -> 1 -> ... -> m-1 -> 0.
    pub fn directed_cycle(m: usize) -> Self {
        let mut edges: Vec<(usize, usize)> = (0..m - 1).map(|i| (i, i + 1)).collect();
        edges.push((m - 1, 0));
        edges.sort_unstable();
        Pattern { m, edges }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Row-major adjacency bit-matrix: bit `i*m + j` set iff arc (i, j).
    /// Only defined for m ≤ 8 (64 bits).
    pub fn adjacency_mask(&self) -> u64 {
        debug_assert!(self.m <= 8);
        let mut mask = 0u64;
        for &(i, j) in &self.edges {
            mask |= 1u64 << (i * self.m + j);
        }
        mask
    }

    pub fn from_mask(m: usize, mask: u64) -> Self {
        let mut edges = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i != j && mask & (1u64 << (i * m + j)) != 0 {
                    edges.push((i, j));
                }
            }
        }
        Pattern { m, edges }
    }

    /// Apply a vertex relabeling; `perm[i]` is the new name of vertex `i`.
    pub fn relabel(&self, perm: &[usize]) -> Pattern {
        let mut edges: Vec<(usize, usize)> =
            self.edges.iter().map(|&(i, j)| (perm[i], perm[j])).collect();
        edges.sort_unstable();
        Pattern { m: self.m, edges }
    }

    /// Weak connectivity of the underlying undirected support.
    pub fn is_weakly_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.m];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; self.m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Vertex sets of the weakly connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.m];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; self.m];
        let mut out = Vec::new();
        for start in 0..self.m {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &u in &adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Canonical form: minimum adjacency bit-matrix over all m! relabelings.
    pub fn canonical_form(&self, caps: &Caps) -> Result<CanonicalForm> {
        check_canonical_cap(self.m, caps)?;
        let tables = position_tables(self.m, 0);
        Ok(CanonicalForm {
            m: self.m,
            bits: canonical_bits(self.adjacency_mask(), &tables),
        })
    }
}

/// A pattern whose first `k` vertices are distinguished labels; label `i`
/// of one pattern may only map to label `i` of another.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledPattern {
    pattern: Pattern,
    k: usize,
}

impl LabeledPattern {
    pub fn new(pattern: Pattern, k: usize) -> Result<Self> {
        if k > pattern.m() {
            return Err(Error::invalid(
                "k",
                format!("{k} labels on {} vertices", pattern.m()),
            ));
        }
        Ok(LabeledPattern { pattern, k })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.pattern.m()
    }

    /// Canonical form over relabelings that fix the `k` labels pointwise.
    pub fn canonical_form(&self, caps: &Caps) -> Result<CanonicalForm> {
        check_canonical_cap(self.m(), caps)?;
        let tables = position_tables(self.m(), self.k);
        Ok(CanonicalForm {
            m: self.m(),
            bits: canonical_bits(self.pattern.adjacency_mask(), &tables),
        })
    }
}

/// Canonical adjacency bit-matrix together with the vertex count. Two
/// patterns are isomorphic iff their canonical forms are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    m: usize,
    bits: u64,
}

impl CanonicalForm {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Lowercase hex of the m²-bit row-major adjacency matrix, packed
    /// MSB-first into ceil(m²/8) bytes.
    pub fn to_hex(&self) -> String {
        let nbits = self.m * self.m;
        let nbytes = nbits.div_ceil(8);
        let mut out = String::with_capacity(nbytes * 2);
        for b in 0..nbytes {
            let mut byte = 0u8;
            for within in 0..8 {
                let p = b * 8 + within;
                if p < nbits && self.bits & (1u64 << p) != 0 {
                    byte |= 1 << (7 - within);
                }
            }
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

fn check_canonical_cap(m: usize, caps: &Caps) -> Result<()> {
    let cap = caps.pattern_max_m.min(8); // bit-matrix lives in a u64
    if m > cap {
        let estimated: u64 = (1..=m as u64).product();
        return Err(Error::CapExceeded {
            what: "pattern canonicalization",
            estimated,
            cap: (1..=cap as u64).product(),
        });
    }
    Ok(())
}

/// For each permutation σ of `0..m` fixing `0..fixed` pointwise, the table
/// mapping bit position i*m+j to σ(i)*m+σ(j).
fn position_tables(m: usize, fixed: usize) -> Vec<Vec<u8>> {
    let free: Vec<usize> = (fixed..m).collect();
    let mut tables = Vec::new();
    for tail in free.iter().copied().permutations(free.len()) {
        let mut sigma: Vec<usize> = (0..fixed).collect();
        sigma.extend(tail);
        let mut table = vec![0u8; m * m];
        for i in 0..m {
            for j in 0..m {
                table[i * m + j] = (sigma[i] * m + sigma[j]) as u8;
            }
        }
        tables.push(table);
    }
    tables
}

fn apply_table(mask: u64, table: &[u8]) -> u64 {
    let mut out = 0u64;
    let mut rest = mask;
    while rest != 0 {
        let p = rest.trailing_zeros() as usize;
        out |= 1u64 << table[p];
        rest &= rest - 1;
    }
    out
}

fn canonical_bits(mask: u64, tables: &[Vec<u8>]) -> u64 {
    tables
        .iter()
        .map(|t| apply_table(mask, t))
        .min()
        .expect("at least the identity permutation")
}

fn check_enumerate_cap(max_m: usize, caps: &Caps) -> Result<()> {
    if max_m > caps.enumerate_max_m {
        let arcs = (max_m * max_m - max_m) as u32;
        return Err(Error::CapExceeded {
            what: "pattern enumeration",
            estimated: 1u64.checked_shl(arcs).unwrap_or(u64::MAX),
            cap: 1u64 << (caps.enumerate_max_m * caps.enumerate_max_m - caps.enumerate_max_m),
        });
    }
    Ok(())
}

/// One representative per isomorphism class of simple digraphs with
/// 1..=`max_m` vertices, ordered by vertex count then canonical form.
pub fn enumerate_patterns(max_m: usize, connected_only: bool, caps: &Caps) -> Result<Vec<Pattern>> {
    check_enumerate_cap(max_m, caps)?;
    let mut out = Vec::new();
    for m in 1..=max_m {
        for bits in enumerate_canonical_masks(m, 0) {
            let p = Pattern::from_mask(m, bits);
            if !connected_only || p.is_weakly_connected() {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// One representative per label-order-respecting isomorphism class of
/// patterns with `k` labels and k..=`max_m` vertices.
pub fn enumerate_labeled_patterns(max_m: usize, k: usize, caps: &Caps) -> Result<Vec<LabeledPattern>> {
    check_enumerate_cap(max_m, caps)?;
    if k > max_m {
        return Err(Error::invalid(
            "k",
            format!("label count {k} exceeds max vertex count {max_m}"),
        ));
    }
    let mut out = Vec::new();
    for m in k.max(1)..=max_m {
        for bits in enumerate_canonical_masks(m, k) {
            out.push(LabeledPattern {
                pattern: Pattern::from_mask(m, bits),
                k,
            });
        }
    }
    Ok(out)
}

/// Canonical adjacency masks of every simple digraph on `m` vertices, up to
/// relabelings fixing the first `fixed` vertices; ascending mask order.
fn enumerate_canonical_masks(m: usize, fixed: usize) -> Vec<u64> {
    let positions: Vec<usize> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .map(|(i, j)| i * m + j)
        .collect();
    let tables = position_tables(m, fixed);
    let mut canon = BTreeSet::new();
    for subset in 0u64..(1u64 << positions.len()) {
        let mut mask = 0u64;
        let mut rest = subset;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            mask |= 1u64 << positions[b];
            rest &= rest - 1;
        }
        canon.insert(canonical_bits(mask, &tables));
    }
    canon.into_iter().collect()
}

/// Disjoint union: vertices of `p2` are shifted past those of `p1`.
pub fn disjoint_union(p1: &Pattern, p2: &Pattern) -> Pattern {
    let m = p1.m + p2.m;
    let mut edges = p1.edges.clone();
    edges.extend(p2.edges.iter().map(|&(i, j)| (i + p1.m, j + p1.m)));
    edges.sort_unstable();
    Pattern { m, edges }
}

/// Disjoint union followed by identifying label `i` of `p2` with label `i`
/// of `p1`; duplicate arcs arising from the merge are collapsed so the
/// result stays simple.
pub fn glued_union(p1: &LabeledPattern, p2: &LabeledPattern) -> Result<LabeledPattern> {
    if p1.k != p2.k {
        return Err(Error::ArityMismatch {
            left: p1.k,
            right: p2.k,
        });
    }
    let k = p1.k;
    let m1 = p1.m();
    // p2 vertex v maps to v itself for labels, else past p1's vertices
    let map2 = |v: usize| if v < k { v } else { m1 + v - k };
    let mut edges: BTreeSet<(usize, usize)> = p1.pattern.edges.iter().copied().collect();
    edges.extend(p2.pattern.edges.iter().map(|&(i, j)| (map2(i), map2(j))));
    Ok(LabeledPattern {
        pattern: Pattern {
            m: m1 + p2.m() - k,
            edges: edges.into_iter().collect(),
        },
        k,
    })
}
