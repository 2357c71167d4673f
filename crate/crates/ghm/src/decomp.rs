//! Tree decompositions of pattern graphs.
//!
//! The counting engine's runtime is `O(#bags · n^(width+1))`, so the width
//! must be exactly minimal. Patterns are tiny, which makes exhaustive search
//! over vertex elimination orders both exact and cheap; the search runs per
//! weakly connected component (treewidth of a disjoint union is the maximum
//! over components), so even large disjoint unions of small patterns stay
//! within the factorial budget.

use crate::error::{Caps, Error, Result};
use crate::pattern::Pattern;
use itertools::Itertools;

/// A rooted tree of bags over a pattern's vertices. Node `i` is the bag
/// created when vertex `i` was eliminated, so there are exactly `m` nodes.
#[derive(Debug, Clone)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    root: usize,
}

impl TreeDecomposition {
    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn bag(&self, node: usize) -> &[usize] {
        &self.bags[node]
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Max bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1) - 1
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.bags.len()];
        for (node, parent) in self.parent.iter().enumerate() {
            if let Some(p) = parent {
                children[*p].push(node);
            }
        }
        children
    }

    /// Nodes in post-order (children before parents).
    pub fn postorder(&self) -> Vec<usize> {
        let children = self.children();
        let mut order = Vec::with_capacity(self.bags.len());
        let mut stack = vec![(self.root, false)];
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                order.push(node);
            } else {
                stack.push((node, true));
                for &c in &children[node] {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Checks the three decomposition invariants against `p`:
    /// every vertex is in a bag, every edge has a bag containing both
    /// endpoints, and each vertex's bags form a connected subtree.
    pub fn validate(&self, p: &Pattern) -> Result<()> {
        let m = p.m();
        if self.parent.len() != self.bags.len() {
            return Err(Error::invalid("tree", "parent/bag length mismatch"));
        }
        let roots = self.parent.iter().filter(|p| p.is_none()).count();
        if roots != 1 || self.parent[self.root].is_some() {
            return Err(Error::invalid("tree", format!("{roots} roots, expected 1")));
        }
        for v in 0..m {
            if !self.bags.iter().any(|b| b.contains(&v)) {
                return Err(Error::invalid("bags", format!("vertex {v} in no bag")));
            }
        }
        for &(u, v) in p.edges() {
            if !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
                return Err(Error::invalid(
                    "bags",
                    format!("edge ({u}, {v}) covered by no bag"),
                ));
            }
        }
        for v in 0..m {
            let holders: Vec<usize> = (0..self.bags.len())
                .filter(|&t| self.bags[t].contains(&v))
                .collect();
            // walk tree edges restricted to holders
            let mut reached = vec![false; self.bags.len()];
            reached[holders[0]] = true;
            let mut changed = true;
            while changed {
                changed = false;
                for &t in &holders {
                    if reached[t] {
                        continue;
                    }
                    let touches = self.parent[t].map(|p| reached[p] && self.bags[p].contains(&v))
                        == Some(true)
                        || holders
                            .iter()
                            .any(|&s| reached[s] && self.parent[s] == Some(t));
                    if touches {
                        reached[t] = true;
                        changed = true;
                    }
                }
            }
            if holders.iter().any(|&t| !reached[t]) {
                return Err(Error::invalid(
                    "bags",
                    format!("bags containing vertex {v} are not connected"),
                ));
            }
        }
        Ok(())
    }
}

/// Minimal-width tree decomposition by exhaustive elimination-order search,
/// run independently on each weakly connected component.
pub fn tree_decomposition(p: &Pattern, caps: &Caps) -> Result<TreeDecomposition> {
    let m = p.m();
    // undirected support adjacency as bitmasks (m <= 64)
    if m > 64 {
        return Err(Error::CapExceeded {
            what: "tree decomposition",
            estimated: u64::MAX,
            cap: 64,
        });
    }
    let mut adj = vec![0u64; m];
    for &(i, j) in p.edges() {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }

    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut parent: Vec<Option<usize>> = vec![None; m];
    let mut component_roots = Vec::new();

    for comp in p.components() {
        if comp.len() > caps.decomp_component_max {
            return Err(Error::CapExceeded {
                what: "elimination-order search",
                estimated: (1..=comp.len() as u64).product(),
                cap: (1..=caps.decomp_component_max as u64).product(),
            });
        }
        let order = best_elimination_order(&comp, &adj);
        component_roots.push(attach_component(&order, &adj, &mut bags, &mut parent));
    }

    // stitch extra component roots under the first one so the result is a
    // single rooted tree
    let root = component_roots[0];
    for &r in &component_roots[1..] {
        parent[r] = Some(root);
    }
    Ok(TreeDecomposition { bags, parent, root })
}

/// Exhaustively minimize elimination width over all orders of `comp`.
/// Ties break toward the lexicographically first order, so the result is
/// deterministic.
fn best_elimination_order(comp: &[usize], adj: &[u64]) -> Vec<usize> {
    let mut best_order: Option<Vec<usize>> = None;
    let mut best_width = usize::MAX;
    for order in comp.iter().copied().permutations(comp.len()) {
        let mut local: Vec<u64> = adj.to_vec();
        let mut remaining: u64 = comp.iter().fold(0, |acc, &v| acc | (1 << v));
        let mut width = 0usize;
        let mut pruned = false;
        for &v in &order {
            remaining &= !(1u64 << v);
            let nbrs = local[v] & remaining;
            width = width.max(nbrs.count_ones() as usize);
            if width >= best_width {
                pruned = true;
                break;
            }
            // fill: make the remaining neighborhood a clique
            let mut rest = nbrs;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                local[u] |= nbrs & !(1 << u);
                rest &= rest - 1;
            }
        }
        if !pruned && width < best_width {
            best_width = width;
            best_order = Some(order);
        }
    }
    best_order.expect("component has at least one vertex")
}

/// Build the bags for one component from its elimination order and return
/// the component's root node. Bag of vertex `v` is `v` plus its later
/// fill-graph neighbors; each bag hangs off the bag of its earliest later
/// neighbor.
fn attach_component(
    order: &[usize],
    adj: &[u64],
    bags: &mut [Vec<usize>],
    parent: &mut [Option<usize>],
) -> usize {
    let mut local: Vec<u64> = adj.to_vec();
    let mut remaining: u64 = order.iter().fold(0, |acc, &v| acc | (1 << v));
    let mut position = vec![usize::MAX; adj.len()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut root = *order.last().expect("nonempty component");
    for &v in order {
        remaining &= !(1u64 << v);
        let nbrs = local[v] & remaining;
        let mut bag = vec![v];
        let mut rest = nbrs;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            bag.push(u);
            local[u] |= nbrs & !(1 << u);
            rest &= rest - 1;
        }
        bag.sort_unstable();
        bags[v] = bag;
        if nbrs != 0 {
            let first_later = (0..adj.len())
                .filter(|&u| nbrs & (1 << u) != 0)
                .min_by_key(|&u| position[u])
                .expect("nonempty neighbor set");
            parent[v] = Some(first_later);
        } else {
            root = v;
        }
    }
    root
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{disjoint_union, enumerate_patterns};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn singleton_has_width_zero() {
        let td = tree_decomposition(&Pattern::singleton(), &caps()).unwrap();
        assert_eq!(td.width(), 0);
        td.validate(&Pattern::singleton()).unwrap();
    }

    #[test]
    fn directed_triangle_has_width_two() {
        let p = Pattern::directed_cycle(3);
        let td = tree_decomposition(&p, &caps()).unwrap();
        assert_eq!(td.width(), 2);
        td.validate(&p).unwrap();
    }

    #[test]
    fn directed_path_has_width_one() {
        let p = Pattern::directed_path(4);
        let td = tree_decomposition(&p, &caps()).unwrap();
        assert_eq!(td.width(), 1);
        td.validate(&p).unwrap();
    }

    #[test]
    fn four_cycle_has_width_two() {
        let p = Pattern::directed_cycle(4);
        let td = tree_decomposition(&p, &caps()).unwrap();
        assert_eq!(td.width(), 2);
        td.validate(&p).unwrap();
    }

    #[test]
    fn complete_digraph_has_width_m_minus_one() {
        for m in 2..=4usize {
            let edges = (0..m)
                .flat_map(|i| (0..m).map(move |j| (i, j)))
                .filter(|&(i, j)| i != j)
                .collect();
            let p = Pattern::new(m, edges).unwrap();
            let td = tree_decomposition(&p, &caps()).unwrap();
            assert_eq!(td.width(), m - 1);
            td.validate(&p).unwrap();
        }
    }

    #[test]
    fn disconnected_patterns_get_a_single_tree() {
        let p = disjoint_union(&Pattern::directed_cycle(3), &Pattern::directed_path(3));
        let td = tree_decomposition(&p, &caps()).unwrap();
        assert_eq!(td.width(), 2);
        td.validate(&p).unwrap();
    }

    #[test]
    fn component_cap_is_enforced() {
        let tight = Caps {
            decomp_component_max: 2,
            ..Caps::default()
        };
        let p = Pattern::directed_cycle(3);
        assert!(matches!(
            tree_decomposition(&p, &tight),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn decompositions_are_valid_for_every_atlas_pattern_up_to_m5() {
        let c = caps();
        let atlas = enumerate_patterns(5, false, &c).unwrap();
        for p in &atlas {
            let td = tree_decomposition(p, &c).unwrap();
            td.validate(p)
                .unwrap_or_else(|e| panic!("invalid decomposition for {:?}: {e}", p));
        }
    }

    #[test]
    fn postorder_visits_children_before_parents() {
        let p = disjoint_union(&Pattern::directed_path(3), &Pattern::directed_path(2));
        let td = tree_decomposition(&p, &caps()).unwrap();
        let order = td.postorder();
        assert_eq!(order.len(), td.node_count());
        let rank: std::collections::HashMap<usize, usize> =
            order.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        for node in 0..td.node_count() {
            if let Some(parent) = td.parent(node) {
                assert!(rank[&node] < rank[&parent]);
            }
        }
    }
}
