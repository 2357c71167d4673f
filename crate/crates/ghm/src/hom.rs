//! Weighted homomorphism numbers.
//!
//! `hom(F, W)` sums, over *all* maps π from the pattern's vertices into the
//! graph's vertices (injectivity is not required), the product of one
//! diagonal factor `W(π(i), π(i))` per pattern vertex and one factor
//! `W(π(i), π(j))` per pattern arc. Two engines compute it:
//!
//! * [`hom_brute`] — the literal sum over all `n^m` maps. Exponential and
//!   proud of it; this is the oracle everything else is tested against.
//! * [`hom`] — dynamic programming over a minimal-width tree decomposition
//!   of the pattern, `O(#bags · n^(width+1))`.
//!
//! The labeled variants pin the first `k` pattern vertices to a tuple of
//! graph vertices. Both engines accumulate the outermost summation with
//! compensated (Kahan) addition in a fixed canonical order, so results do
//! not depend on scheduling.

use crate::decomp::tree_decomposition;
use crate::error::{Caps, Error, Result};
use crate::graph::{shift, LabeledGraph, WeightedGraph};
use crate::pattern::{LabeledPattern, Pattern};

#[derive(Debug, Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    #[inline]
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// Which engine evaluates the sum; the CLI exposes this choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Dp,
    Brute,
}

fn brute_cost(n: usize, free_vertices: usize, factors: usize) -> Option<u64> {
    let maps = (n as u64).checked_pow(free_vertices as u32)?;
    maps.checked_mul(factors as u64 + 1)
}

fn check_work(what: &'static str, cost: Option<u64>, caps: &Caps) -> Result<()> {
    match cost {
        Some(c) if c <= caps.work => Ok(()),
        _ => Err(Error::CapExceeded {
            what,
            estimated: cost.unwrap_or(u64::MAX),
            cap: caps.work,
        }),
    }
}

/// Sum over all maps with the first `pins.len()` pattern vertices pinned.
fn brute_pinned(f: &Pattern, g: &WeightedGraph, pins: &[usize], caps: &Caps) -> Result<f64> {
    let m = f.m();
    let n = g.n();
    let k = pins.len();
    debug_assert!(k <= m);
    let factors = m + f.edge_count();
    check_work(
        "brute-force homomorphism sum",
        brute_cost(n, m - k, factors),
        caps,
    )?;

    let mut assignment: Vec<usize> = vec![0; m];
    assignment[..k].copy_from_slice(pins);
    let mut total = KahanSum::default();
    loop {
        let mut prod = 1.0;
        for &v in assignment.iter() {
            prod *= g.weight(v, v);
        }
        for &(i, j) in f.edges() {
            prod *= g.weight(assignment[i], assignment[j]);
        }
        total.add(prod);

        // odometer over the free suffix
        let mut pos = m;
        loop {
            if pos == k {
                return Ok(total.value());
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < n {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// Brute-force homomorphism number: the oracle engine.
pub fn hom_brute(f: &Pattern, g: &WeightedGraph, caps: &Caps) -> Result<f64> {
    brute_pinned(f, g, &[], caps)
}

/// Brute-force k-labeled homomorphism number.
pub fn hom_labeled_brute(f: &LabeledPattern, g: &LabeledGraph, caps: &Caps) -> Result<f64> {
    if f.k() != g.k() {
        return Err(Error::ArityMismatch {
            left: f.k(),
            right: g.k(),
        });
    }
    brute_pinned(f.pattern(), g.graph(), g.labels(), caps)
}

/// Tree-decomposition dynamic program computing the same sum as
/// [`hom_brute`]. Pinned vertices get a singleton assignment domain, which
/// preserves the `n^(width+1)` bound instead of post-filtering.
pub(crate) fn hom_pinned(f: &Pattern, g: &WeightedGraph, pins: &[usize], caps: &Caps) -> Result<f64> {
    let m = f.m();
    let n = g.n();
    let k = pins.len();
    let td = tree_decomposition(f, caps)?;

    // depth of each node, for locating "topmost" bags
    let mut depth = vec![0usize; td.node_count()];
    let mut order: Vec<usize> = td.postorder();
    order.reverse(); // parents before children
    for &node in &order {
        if let Some(p) = td.parent(node) {
            depth[node] = depth[p] + 1;
        }
    }

    // Every factor is charged to exactly one bag: the topmost (closest to
    // the root) bag containing the vertex, resp. both arc endpoints. The
    // sets of bags holding a vertex (or a vertex pair) form connected
    // subtrees, so the topmost bag is unique.
    let mut own_verts: Vec<Vec<usize>> = vec![Vec::new(); td.node_count()];
    for v in 0..m {
        let top = (0..td.node_count())
            .filter(|&t| td.bag(t).contains(&v))
            .min_by_key(|&t| depth[t])
            .expect("decomposition covers every vertex");
        own_verts[top].push(v);
    }
    let mut own_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); td.node_count()];
    for &(u, v) in f.edges() {
        let top = (0..td.node_count())
            .filter(|&t| td.bag(t).contains(&u) && td.bag(t).contains(&v))
            .min_by_key(|&t| depth[t])
            .expect("decomposition covers every edge");
        own_edges[top].push((u, v));
    }

    let dom_size = |v: usize| if v < k { 1 } else { n };
    let value_of = |v: usize, digit: usize| if v < k { pins[v] } else { digit };

    let mut estimated: u64 = 0;
    for t in 0..td.node_count() {
        let mut size: u64 = 1;
        for &v in td.bag(t) {
            size = size.saturating_mul(dom_size(v) as u64);
        }
        estimated = estimated.saturating_add(
            size.saturating_mul((td.bag(t).len() + f.edge_count() + 2) as u64),
        );
    }
    if estimated > caps.work {
        return Err(Error::CapExceeded {
            what: "tree-decomposition homomorphism tables",
            estimated,
            cap: caps.work,
        });
    }

    let children = td.children();
    // message from each node to its parent, indexed over the separator
    let mut messages: Vec<Option<Vec<f64>>> = vec![None; td.node_count()];
    let mut root_total = KahanSum::default();

    for &t in &td.postorder() {
        let verts = td.bag(t);
        let dims: Vec<usize> = verts.iter().map(|&v| dom_size(v)).collect();
        let size: usize = dims.iter().product();

        // per-child lookup: positions of the separator inside this bag
        struct ChildView {
            msg: Vec<f64>,
            positions: Vec<usize>,
            dims: Vec<usize>,
        }
        let views: Vec<ChildView> = children[t]
            .iter()
            .map(|&c| {
                let sep: Vec<usize> = td
                    .bag(c)
                    .iter()
                    .copied()
                    .filter(|v| verts.contains(v))
                    .collect();
                let positions = sep
                    .iter()
                    .map(|v| verts.iter().position(|x| x == v).unwrap())
                    .collect();
                let dims = sep.iter().map(|&v| dom_size(v)).collect();
                ChildView {
                    msg: messages[c].take().expect("child evaluated in postorder"),
                    positions,
                    dims,
                }
            })
            .collect();

        let mut table = vec![0.0; size];
        let mut digits = vec![0usize; verts.len()];
        let mut values: Vec<usize> = verts
            .iter()
            .zip(&digits)
            .map(|(&v, &d)| value_of(v, d))
            .collect();
        for entry in table.iter_mut() {
            let mut prod = 1.0;
            for &v in &own_verts[t] {
                let pos = verts.iter().position(|x| *x == v).unwrap();
                let a = values[pos];
                prod *= g.weight(a, a);
            }
            for &(u, v) in &own_edges[t] {
                let pu = verts.iter().position(|x| *x == u).unwrap();
                let pv = verts.iter().position(|x| *x == v).unwrap();
                prod *= g.weight(values[pu], values[pv]);
            }
            for view in &views {
                let mut idx = 0usize;
                for (pos, dim) in view.positions.iter().zip(&view.dims) {
                    idx = idx * dim + digits[*pos];
                }
                prod *= view.msg[idx];
            }
            *entry = prod;

            // advance the mixed-radix odometer
            for pos in (0..digits.len()).rev() {
                digits[pos] += 1;
                if digits[pos] < dims[pos] {
                    values[pos] = value_of(verts[pos], digits[pos]);
                    break;
                }
                digits[pos] = 0;
                values[pos] = value_of(verts[pos], 0);
            }
        }

        if t == td.root() {
            for &x in &table {
                root_total.add(x);
            }
        } else {
            // marginalize everything the parent does not share
            let parent_bag = td.bag(td.parent(t).unwrap());
            let keep: Vec<usize> = (0..verts.len())
                .filter(|&i| parent_bag.contains(&verts[i]))
                .collect();
            let keep_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
            let msg_size: usize = keep_dims.iter().product();
            let mut msg = vec![0.0; msg_size];
            let mut digits = vec![0usize; verts.len()];
            for &x in &table {
                let mut idx = 0usize;
                for (pos, dim) in keep.iter().zip(&keep_dims) {
                    idx = idx * dim + digits[*pos];
                }
                msg[idx] += x;
                for pos in (0..digits.len()).rev() {
                    digits[pos] += 1;
                    if digits[pos] < dims[pos] {
                        break;
                    }
                    digits[pos] = 0;
                }
            }
            messages[t] = Some(msg);
        }
    }

    Ok(root_total.value())
}

/// Homomorphism number via the tree-decomposition engine.
pub fn hom(f: &Pattern, g: &WeightedGraph, caps: &Caps) -> Result<f64> {
    hom_pinned(f, g, &[], caps)
}

/// k-labeled homomorphism number via the tree-decomposition engine.
pub fn hom_labeled(f: &LabeledPattern, g: &LabeledGraph, caps: &Caps) -> Result<f64> {
    if f.k() != g.k() {
        return Err(Error::ArityMismatch {
            left: f.k(),
            right: g.k(),
        });
    }
    hom_pinned(f.pattern(), g.graph(), g.labels(), caps)
}

/// `hom(F, W + c·I)`; `c = 2` keeps shifted diagonals positive on the
/// model domain.
pub fn hom_shifted(f: &Pattern, g: &WeightedGraph, c: f64, caps: &Caps) -> Result<f64> {
    hom(f, &shift(g, c), caps)
}

/// Labeled counterpart of [`hom_shifted`].
pub fn hom_labeled_shifted(
    f: &LabeledPattern,
    g: &LabeledGraph,
    c: f64,
    caps: &Caps,
) -> Result<f64> {
    if f.k() != g.k() {
        return Err(Error::ArityMismatch {
            left: f.k(),
            right: g.k(),
        });
    }
    hom_pinned(f.pattern(), &shift(g.graph(), c), g.labels(), caps)
}
