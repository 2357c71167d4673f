//! Step-function graphons: homomorphism densities, cut-norm, cut-distance,
//! and W-random sampling.
//!
//! Restricting to step functions keeps everything exact: densities are
//! finite sums over block maps and the cut-norm supremum is attained on
//! unions of blocks. Densities carry no diagonal vertex factor, only one
//! block-measure factor per integrated vertex — this is the integral
//! analogue, not the matrix homomorphism number of [`crate::hom`].

use crate::error::{Caps, Error, Result};
use crate::graph::WeightedGraph;
use crate::pattern::{LabeledPattern, Pattern};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Piecewise-constant graphon: `q` blocks with measures `mu` summing to 1
/// and a `q`×`q` value matrix `B`. Standard graphons have values in [0, 1];
/// signed values in [-1, 1] are admitted so that differences of graphons
/// can flow into [`cut_norm`] and [`cut_distance`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon {
    q: usize,
    b: Vec<f64>, // row-major q*q
    mu: Vec<f64>,
}

const MEASURE_TOL: f64 = 1e-9;

impl StepGraphon {
    /// Standard graphon: values in [0, 1].
    pub fn new(q: usize, b: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        let g = Self::new_signed(q, b, mu)?;
        if !g.is_standard() {
            return Err(Error::invalid("B", "value outside [0, 1]"));
        }
        Ok(g)
    }

    /// Relaxed validation for signed step functions (values in [-1, 1]).
    pub fn new_signed(q: usize, b: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("q", "block count must be positive"));
        }
        if b.len() != q * q {
            return Err(Error::invalid(
                "B",
                format!("expected {q}x{q} = {} values, got {}", q * q, b.len()),
            ));
        }
        if b.iter().any(|x| !x.is_finite() || x.abs() > 1.0) {
            return Err(Error::invalid("B", "value outside [-1, 1]"));
        }
        if mu.len() != q {
            return Err(Error::invalid(
                "mu",
                format!("expected {q} block measures, got {}", mu.len()),
            ));
        }
        if mu.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::invalid("mu", "block measures must be positive"));
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > MEASURE_TOL {
            return Err(Error::invalid(
                "mu",
                format!("block measures sum to {total}, expected 1"),
            ));
        }
        Ok(StepGraphon { q, b, mu })
    }

    /// Standard graphon with uniform block measures 1/q.
    pub fn uniform(q: usize, b: Vec<f64>) -> Result<Self> {
        let mu = vec![1.0 / q as f64; q];
        Self::new(q, b, mu)
    }

    /// Constant graphon of value `p` on a single block.
    pub fn constant(p: f64) -> Result<Self> {
        Self::new(1, vec![p], vec![1.0])
    }

    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.b[a * self.q + b]
    }

    pub fn values(&self) -> &[f64] {
        &self.b
    }

    pub fn measure(&self, a: usize) -> f64 {
        self.mu[a]
    }

    pub fn measures(&self) -> &[f64] {
        &self.mu
    }

    pub fn is_standard(&self) -> bool {
        self.b.iter().all(|x| (0.0..=1.0).contains(x))
    }

    fn has_uniform_measures(&self) -> bool {
        let u = 1.0 / self.q as f64;
        self.mu.iter().all(|m| (m - u).abs() <= MEASURE_TOL)
    }

    /// Push-forward block relabeling: result value at (σ(a), σ(b)) equals
    /// the value at (a, b), measures carried along.
    pub fn permute_blocks(&self, sigma: &[usize]) -> StepGraphon {
        let q = self.q;
        let mut b = vec![0.0; q * q];
        let mut mu = vec![0.0; q];
        for a in 0..q {
            mu[sigma[a]] = self.mu[a];
            for c in 0..q {
                b[sigma[a] * q + sigma[c]] = self.b[a * q + c];
            }
        }
        StepGraphon { q, b, mu }
    }

    /// Signed difference `self - other`; requires matching block structure.
    pub fn difference(&self, other: &StepGraphon) -> Result<StepGraphon> {
        if self.q != other.q {
            return Err(Error::SizeMismatch {
                left: self.q,
                right: other.q,
            });
        }
        if self
            .mu
            .iter()
            .zip(&other.mu)
            .any(|(a, b)| (a - b).abs() > MEASURE_TOL)
        {
            return Err(Error::invalid("mu", "block measures differ"));
        }
        let b = self.b.iter().zip(&other.b).map(|(a, c)| a - c).collect();
        StepGraphon::new_signed(self.q, b, self.mu.clone())
    }

    fn require_standard(&self) -> Result<()> {
        if self.is_standard() {
            Ok(())
        } else {
            Err(Error::invalid(
                "B",
                "operation requires values in [0, 1] (signed step functions \
                 are only valid for cut-norm and cut-distance)",
            ))
        }
    }
}

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
}

fn density_pinned(f: &Pattern, w: &StepGraphon, pins: &[usize], caps: &Caps) -> Result<f64> {
    w.require_standard()?;
    let m = f.m();
    let q = w.q;
    let k = pins.len();
    for &b in pins {
        if b >= q {
            return Err(Error::invalid(
                "blocks",
                format!("block index {} out of range for q = {q}", b + 1),
            ));
        }
    }
    let cost = (q as u64)
        .checked_pow((m - k) as u32)
        .and_then(|maps| maps.checked_mul((m + f.edge_count() + 1) as u64));
    match cost {
        Some(c) if c <= caps.work => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "step-graphon density sum",
                estimated: cost.unwrap_or(u64::MAX),
                cap: caps.work,
            })
        }
    }

    let mut assignment = vec![0usize; m];
    assignment[..k].copy_from_slice(pins);
    let mut total = KahanSum::default();
    loop {
        let mut prod = 1.0;
        for &(i, j) in f.edges() {
            prod *= w.value(assignment[i], assignment[j]);
        }
        // integrated (unlabeled) vertices contribute their block measure
        for &block in &assignment[k..] {
            prod *= w.mu[block];
        }
        total.add(prod);

        let mut pos = m;
        loop {
            if pos == k {
                return Ok(total.sum);
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < q {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// Homomorphism density `t(F, W)`: the integral over one point per pattern
/// vertex of the product of edge values, evaluated exactly as a finite sum
/// over block maps.
pub fn density(f: &Pattern, w: &StepGraphon, caps: &Caps) -> Result<f64> {
    density_pinned(f, w, &[], caps)
}

/// k-labeled density `t_x(F, W)` with labeled vertices pinned into the
/// given blocks (a step function is constant on blocks, so a block index
/// is all the information a pinned point carries). Only unlabeled vertices
/// are integrated.
pub fn density_labeled(
    f: &LabeledPattern,
    w: &StepGraphon,
    blocks: &[usize],
    caps: &Caps,
) -> Result<f64> {
    if f.k() != blocks.len() {
        return Err(Error::ArityMismatch {
            left: f.k(),
            right: blocks.len(),
        });
    }
    density_pinned(f.pattern(), w, blocks, caps)
}

/// Cut-norm of a (possibly signed) step function: the maximum over block
/// sets S, T of |Σ_{a∈S, b∈T} mu(a) mu(b) B(a, b)|. For a fixed S the
/// optimal T collects the blocks whose contribution shares a sign, so only
/// the 2^q choices of S are enumerated; the result is still the exact
/// maximum over all (S, T) pairs.
pub fn cut_norm(w: &StepGraphon, caps: &Caps) -> Result<f64> {
    if w.q > caps.cutnorm_max_q {
        return Err(Error::CapExceeded {
            what: "cut-norm subset search",
            estimated: 1u64.checked_shl(w.q as u32).unwrap_or(u64::MAX),
            cap: 1u64 << caps.cutnorm_max_q,
        });
    }
    let q = w.q;
    let mut best = 0.0f64;
    for s in 0u64..(1 << q) {
        let mut positive = 0.0;
        let mut negative = 0.0;
        for b in 0..q {
            let mut col = 0.0;
            for a in 0..q {
                if s & (1 << a) != 0 {
                    col += w.mu[a] * w.value(a, b);
                }
            }
            let t = w.mu[b] * col;
            if t > 0.0 {
                positive += t;
            } else {
                negative += t;
            }
        }
        best = best.max(positive).max(-negative);
    }
    Ok(best)
}

/// Permutation-overlay cut-distance: the minimum of `cut_norm(w1 - w2 ∘ σ)`
/// over all block permutations σ. Restricted to equal block counts with
/// uniform measures; the true cut-distance infimum ranges over all
/// measure-preserving bijections, so this value is an upper bound on it.
pub fn cut_distance(w1: &StepGraphon, w2: &StepGraphon, caps: &Caps) -> Result<f64> {
    if w1.q != w2.q {
        return Err(Error::SizeMismatch {
            left: w1.q,
            right: w2.q,
        });
    }
    if !w1.has_uniform_measures() || !w2.has_uniform_measures() {
        return Err(Error::invalid(
            "mu",
            "cut-distance requires uniform block measures",
        ));
    }
    if w1.q > caps.cutdist_max_q {
        return Err(Error::CapExceeded {
            what: "cut-distance overlay search",
            estimated: (1..=w1.q as u64).product(),
            cap: (1..=caps.cutdist_max_q as u64).product(),
        });
    }
    let mut best = f64::INFINITY;
    for sigma in (0..w1.q).permutations(w1.q) {
        let overlay = w2.permute_blocks(&sigma);
        let d = cut_norm(&w1.difference(&overlay)?, caps)?;
        if d < best {
            best = d;
        }
    }
    Ok(best)
}

/// W-random weighted graph: draw `n` points, each landing in block `a`
/// with probability `mu(a)`, and read off the block values for every
/// ordered pair. Deterministic for a fixed seed.
pub fn sample_graph(w: &StepGraphon, n: usize, seed: u64) -> Result<WeightedGraph> {
    w.require_standard()?;
    if n == 0 {
        return Err(Error::invalid("n", "sample size must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = sample_blocks(w, n, &mut rng);
    let mut g = WeightedGraph::zeros(n);
    for i in 0..n {
        for j in 0..n {
            g.set_weight(i, j, w.value(blocks[i], blocks[j]));
        }
    }
    Ok(g)
}

pub(crate) fn sample_blocks<R: Rng>(w: &StepGraphon, n: usize, rng: &mut R) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            for a in 0..w.q {
                acc += w.mu[a];
                if u < acc {
                    return a;
                }
            }
            w.q - 1
        })
        .collect()
}
