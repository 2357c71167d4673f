//! The Graph Homomorphism Model: linear regression on shifted homomorphism
//! numbers.
//!
//! A model is a finite list of patterns with real coefficients; its value
//! on a graph is `Σ_F a_F · hom(F, W + shift·I)` (labeled patterns and
//! `hom_x` for the equivariant task). Predictions inherit invariance /
//! equivariance from the features, whatever the coefficients are; fitting
//! is therefore a plain deterministic least-squares solve, not a search
//! through architectures.
//!
//! Numerical care lives here rather than in the math: raw homomorphism
//! numbers grow like `n^m · 3^(m+|E|)`, so fitted columns are affinely
//! standardized (the parameters are recorded in the model so predictions
//! are reproducible), and rank-deficient systems fall back to the
//! minimum-norm solution of a singular-value decomposition.

use crate::error::{Caps, Error, Result};
use crate::graph::{shift, LabeledGraph, WeightedGraph};
use crate::hom::hom_pinned;
use crate::pattern::{
    enumerate_labeled_patterns, enumerate_patterns, CanonicalForm, LabeledPattern, Pattern,
};
use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

/// Optional per-feature scaling applied before standardization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    None,
    /// Divide the feature of a pattern on `m` vertices by `n^m`.
    Density,
}

/// A fitted (or hand-built) linear model over homomorphism features.
/// `basis` entries with `k() == 0` make an invariant model; a common
/// positive arity makes an equivariant one.
#[derive(Debug, Clone, PartialEq)]
pub struct HomModel {
    basis: Vec<LabeledPattern>,
    coefficients: Vec<f64>,
    shift: f64,
    normalization: Normalization,
    feature_means: Vec<f64>,
    feature_scales: Vec<f64>,
    intercept: f64,
}

impl HomModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        basis: Vec<LabeledPattern>,
        coefficients: Vec<f64>,
        shift: f64,
        normalization: Normalization,
        feature_means: Vec<f64>,
        feature_scales: Vec<f64>,
        intercept: f64,
        caps: &Caps,
    ) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::invalid("patterns", "model needs at least one pattern"));
        }
        if basis.len() != coefficients.len()
            || basis.len() != feature_means.len()
            || basis.len() != feature_scales.len()
        {
            return Err(Error::invalid(
                "coefficients",
                format!(
                    "{} patterns but {} coefficients, {} means, {} scales",
                    basis.len(),
                    coefficients.len(),
                    feature_means.len(),
                    feature_scales.len()
                ),
            ));
        }
        let arity = basis[0].k();
        if basis.iter().any(|p| p.k() != arity) {
            return Err(Error::invalid("patterns", "mixed label arities in one model"));
        }
        let mut seen: Vec<CanonicalForm> = Vec::with_capacity(basis.len());
        for p in &basis {
            let cf = p.canonical_form(caps)?;
            if seen.contains(&cf) {
                return Err(Error::invalid(
                    "patterns",
                    "isomorphic duplicate in the pattern basis",
                ));
            }
            seen.push(cf);
        }
        if feature_scales.iter().any(|s| *s == 0.0 || !s.is_finite()) {
            return Err(Error::invalid("scales", "feature scales must be nonzero"));
        }
        Ok(HomModel {
            basis,
            coefficients,
            shift,
            normalization,
            feature_means,
            feature_scales,
            intercept,
        })
    }

    /// Raw algebra element: unit scales, zero means, zero intercept.
    pub fn invariant(patterns: Vec<Pattern>, coefficients: Vec<f64>, shift: f64) -> Result<Self> {
        let n = patterns.len();
        let basis = patterns
            .into_iter()
            .map(|p| LabeledPattern::new(p, 0))
            .collect::<Result<Vec<_>>>()?;
        HomModel::new(
            basis,
            coefficients,
            shift,
            Normalization::None,
            vec![0.0; n],
            vec![1.0; n],
            0.0,
            &Caps::default(),
        )
    }

    pub fn basis(&self) -> &[LabeledPattern] {
        &self.basis
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn feature_means(&self) -> &[f64] {
        &self.feature_means
    }

    pub fn feature_scales(&self) -> &[f64] {
        &self.feature_scales
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    /// Common label arity of the basis; 0 means invariant.
    pub fn label_arity(&self) -> usize {
        self.basis[0].k()
    }

    fn evaluate(&self, raw_features: &[f64]) -> f64 {
        let mut out = self.intercept;
        for ((&phi, &a), (&mu, &s)) in raw_features
            .iter()
            .zip(&self.coefficients)
            .zip(self.feature_means.iter().zip(&self.feature_scales))
        {
            out += a * (phi - mu) / s;
        }
        out
    }
}

/// Equivariant targets or predictions for one graph: a value for each
/// pairwise-distinct k-tuple of vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleMap {
    pub tuples: Vec<Vec<usize>>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Targets {
    Invariant(Vec<f64>),
    Equivariant(Vec<TupleMap>),
}

/// Training data: graphs of one common size inside the unit-weight model
/// domain, with scalar or tuple-indexed targets.
#[derive(Debug, Clone)]
pub struct Dataset {
    graphs: Vec<WeightedGraph>,
    targets: Targets,
}

impl Dataset {
    pub fn new_invariant(graphs: Vec<WeightedGraph>, values: Vec<f64>) -> Result<Self> {
        if graphs.len() != values.len() {
            return Err(Error::invalid(
                "y",
                format!("{} graphs but {} targets", graphs.len(), values.len()),
            ));
        }
        Self::validate_graphs(&graphs)?;
        Ok(Dataset {
            graphs,
            targets: Targets::Invariant(values),
        })
    }

    pub fn new_equivariant(graphs: Vec<WeightedGraph>, maps: Vec<TupleMap>) -> Result<Self> {
        if graphs.len() != maps.len() {
            return Err(Error::invalid(
                "y",
                format!("{} graphs but {} target maps", graphs.len(), maps.len()),
            ));
        }
        Self::validate_graphs(&graphs)?;
        let arity = maps
            .first()
            .and_then(|m| m.tuples.first())
            .map(|t| t.len())
            .ok_or_else(|| Error::invalid("y", "equivariant targets need at least one tuple"))?;
        let n = graphs[0].n();
        for map in &maps {
            if map.tuples.len() != map.values.len() {
                return Err(Error::invalid(
                    "y",
                    format!("{} tuples but {} values", map.tuples.len(), map.values.len()),
                ));
            }
            if map.tuples.is_empty() {
                return Err(Error::invalid("y", "equivariant targets need at least one tuple"));
            }
            let mut seen = std::collections::HashSet::new();
            for t in &map.tuples {
                if t.len() != arity {
                    return Err(Error::ArityMismatch {
                        left: arity,
                        right: t.len(),
                    });
                }
                let mut used = vec![false; n];
                for &x in t {
                    if x >= n {
                        return Err(Error::invalid(
                            "tuples",
                            format!("vertex {} out of range for n = {n}", x + 1),
                        ));
                    }
                    if used[x] {
                        return Err(Error::invalid(
                            "tuples",
                            "tuple entries must be pairwise distinct",
                        ));
                    }
                    used[x] = true;
                }
                if !seen.insert(t.clone()) {
                    return Err(Error::invalid("tuples", "duplicate tuple in target map"));
                }
            }
        }
        Ok(Dataset {
            graphs,
            targets: Targets::Equivariant(maps),
        })
    }

    fn validate_graphs(graphs: &[WeightedGraph]) -> Result<()> {
        let first = graphs.first().ok_or(Error::EmptyDataset)?;
        for (index, g) in graphs.iter().enumerate() {
            if g.n() != first.n() {
                return Err(Error::MixedVertexCount {
                    first: first.n(),
                    other: g.n(),
                    index,
                });
            }
            g.validate_model_domain()?;
        }
        Ok(())
    }

    pub fn graphs(&self) -> &[WeightedGraph] {
        &self.graphs
    }

    pub fn targets(&self) -> &Targets {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn n(&self) -> usize {
        self.graphs[0].n()
    }

    /// Label arity of the targets (0 for invariant datasets).
    pub fn arity(&self) -> usize {
        match &self.targets {
            Targets::Invariant(_) => 0,
            Targets::Equivariant(maps) => maps[0].tuples[0].len(),
        }
    }
}

fn raw_feature(
    f: &LabeledPattern,
    g: &WeightedGraph,
    pins: &[usize],
    shift_c: f64,
    normalization: Normalization,
    caps: &Caps,
) -> Result<f64> {
    let shifted = shift(g, shift_c);
    let value = hom_pinned(f.pattern(), &shifted, pins, caps)?;
    Ok(match normalization {
        Normalization::None => value,
        Normalization::Density => value / (g.n() as f64).powi(f.m() as i32),
    })
}

/// Feature vector `[hom(F, W + shift·I)]` in pattern order.
pub fn featurize(
    g: &WeightedGraph,
    patterns: &[Pattern],
    shift_c: f64,
    normalization: Normalization,
    caps: &Caps,
) -> Result<Vec<f64>> {
    let shifted = shift(g, shift_c);
    patterns
        .iter()
        .map(|p| {
            let value = hom_pinned(p, &shifted, &[], caps)?;
            Ok(match normalization {
                Normalization::None => value,
                Normalization::Density => value / (g.n() as f64).powi(p.m() as i32),
            })
        })
        .collect()
}

/// Feature vector `[hom_x(F, W + shift·I)]` for one tuple `x`.
pub fn featurize_labeled(
    g: &WeightedGraph,
    x: &[usize],
    patterns: &[LabeledPattern],
    shift_c: f64,
    normalization: Normalization,
    caps: &Caps,
) -> Result<Vec<f64>> {
    let mut used = vec![false; g.n()];
    for &v in x {
        if v >= g.n() {
            return Err(Error::invalid(
                "tuples",
                format!("vertex {} out of range for n = {}", v + 1, g.n()),
            ));
        }
        if used[v] {
            return Err(Error::invalid("tuples", "tuple entries must be pairwise distinct"));
        }
        used[v] = true;
    }
    patterns
        .iter()
        .map(|p| {
            if p.k() != x.len() {
                return Err(Error::ArityMismatch {
                    left: p.k(),
                    right: x.len(),
                });
            }
            raw_feature(p, g, x, shift_c, normalization, caps)
        })
        .collect()
}

/// Fitting knobs. `ridge = 0` asks for the plain least-squares solution
/// (minimum-norm on rank deficiency); the intercept column is on by
/// default and can be disabled to keep the model a pure linear combination
/// of homomorphism features.
#[derive(Debug, Clone)]
pub struct FitOptions {
    pub shift: f64,
    pub ridge: f64,
    pub intercept: bool,
    pub normalization: Normalization,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            shift: 2.0,
            ridge: 0.0,
            intercept: true,
            normalization: Normalization::None,
        }
    }
}

/// Rows of raw features for a list of graphs, parallel across graphs.
fn invariant_rows(
    graphs: &[WeightedGraph],
    patterns: &[Pattern],
    opts: &FitOptions,
    caps: &Caps,
) -> Result<Vec<Vec<f64>>> {
    graphs
        .par_iter()
        .map(|g| featurize(g, patterns, opts.shift, opts.normalization, caps))
        .collect()
}

/// Least-squares fit of an invariant model over the given pattern basis.
pub fn fit(d: &Dataset, patterns: &[Pattern], opts: &FitOptions, caps: &Caps) -> Result<HomModel> {
    let values = match d.targets() {
        Targets::Invariant(v) => v,
        Targets::Equivariant(_) => {
            return Err(Error::invalid("y", "invariant fit on equivariant targets"))
        }
    };
    let rows = invariant_rows(d.graphs(), patterns, opts, caps)?;
    let basis = patterns
        .iter()
        .map(|p| LabeledPattern::new(p.clone(), 0))
        .collect::<Result<Vec<_>>>()?;
    solve_model(basis, rows, values, opts, caps)
}

/// Least-squares fit of one shared coefficient vector over every
/// (graph, tuple) row of an equivariant dataset.
pub fn fit_equivariant(
    d: &Dataset,
    patterns: &[LabeledPattern],
    opts: &FitOptions,
    caps: &Caps,
) -> Result<HomModel> {
    let maps = match d.targets() {
        Targets::Invariant(_) => {
            return Err(Error::invalid("y", "equivariant fit on invariant targets"))
        }
        Targets::Equivariant(m) => m,
    };
    let arity = d.arity();
    if let Some(p) = patterns.iter().find(|p| p.k() != arity) {
        return Err(Error::ArityMismatch {
            left: p.k(),
            right: arity,
        });
    }
    let jobs: Vec<(usize, &Vec<usize>, f64)> = maps
        .iter()
        .enumerate()
        .flat_map(|(gi, map)| {
            map.tuples
                .iter()
                .zip(&map.values)
                .map(move |(t, &v)| (gi, t, v))
        })
        .collect();
    let rows: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|(gi, tuple, _)| {
            featurize_labeled(
                &d.graphs()[*gi],
                tuple,
                patterns,
                opts.shift,
                opts.normalization,
                caps,
            )
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = jobs.iter().map(|(_, _, v)| *v).collect();
    solve_model(patterns.to_vec(), rows, &values, opts, caps)
}

fn solve_model(
    basis: Vec<LabeledPattern>,
    rows: Vec<Vec<f64>>,
    values: &[f64],
    opts: &FitOptions,
    caps: &Caps,
) -> Result<HomModel> {
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let nrows = rows.len();
    let ncols = basis.len();

    // standardization: center + scale when an intercept absorbs the means,
    // scale-only otherwise so the model stays inside the raw linear span
    let mut means = vec![0.0; ncols];
    let mut scales = vec![1.0; ncols];
    for j in 0..ncols {
        let mean: f64 = rows.iter().map(|r| r[j]).sum::<f64>() / nrows as f64;
        if opts.intercept {
            means[j] = mean;
            let var: f64 =
                rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / nrows as f64;
            let sd = var.sqrt();
            if sd > 1e-12 * mean.abs().max(1.0) {
                scales[j] = sd;
            }
        } else {
            let ms: f64 = rows.iter().map(|r| r[j] * r[j]).sum::<f64>() / nrows as f64;
            let rms = ms.sqrt();
            if rms > 1e-300 {
                scales[j] = rms;
            }
        }
    }

    let z = DMatrix::from_fn(nrows, ncols, |i, j| (rows[i][j] - means[j]) / scales[j]);
    let (y, intercept) = if opts.intercept {
        // centered columns make the optimal intercept the target mean
        let y_mean: f64 = values.iter().sum::<f64>() / nrows as f64;
        (
            DVector::from_iterator(nrows, values.iter().map(|v| v - y_mean)),
            y_mean,
        )
    } else {
        (DVector::from_column_slice(values), 0.0)
    };

    let coefficients = solve_least_squares(&z, &y, opts.ridge);
    HomModel::new(
        basis,
        coefficients.iter().copied().collect(),
        opts.shift,
        opts.normalization,
        means,
        scales,
        intercept,
        caps,
    )
}

/// SVD solve: plain pseudo-inverse with a rank tolerance for `ridge = 0`
/// (minimum-norm on deficiency), spectral filter factors otherwise.
fn solve_least_squares(z: &DMatrix<f64>, y: &DVector<f64>, ridge: f64) -> DVector<f64> {
    let svd = z.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let s = &svd.singular_values;
    let uty = u.transpose() * y;
    let smax = s.iter().cloned().fold(0.0f64, f64::max);
    let tol = smax * z.nrows().max(z.ncols()) as f64 * f64::EPSILON;
    let mut filtered = DVector::zeros(s.len());
    for i in 0..s.len() {
        let si = s[i];
        let factor = if ridge > 0.0 {
            si / (si * si + ridge)
        } else if si > tol {
            1.0 / si
        } else {
            0.0
        };
        filtered[i] = factor * uty[i];
    }
    v_t.transpose() * filtered
}

/// Model value on one graph (invariant models only).
pub fn predict(model: &HomModel, g: &WeightedGraph, caps: &Caps) -> Result<f64> {
    if model.label_arity() != 0 {
        return Err(Error::ArityMismatch {
            left: model.label_arity(),
            right: 0,
        });
    }
    let patterns: Vec<Pattern> = model.basis.iter().map(|p| p.pattern().clone()).collect();
    let feats = featurize(g, &patterns, model.shift, model.normalization, caps)?;
    Ok(model.evaluate(&feats))
}

/// Model values at every pairwise-distinct k-tuple, in lexicographic tuple
/// order.
pub fn predict_equivariant(model: &HomModel, g: &WeightedGraph, caps: &Caps) -> Result<TupleMap> {
    let k = model.label_arity();
    if k == 0 {
        return Err(Error::ArityMismatch { left: 0, right: 1 });
    }
    if k > g.n() {
        return Err(Error::invalid(
            "tuples",
            format!("arity {k} exceeds vertex count {}", g.n()),
        ));
    }
    let tuples: Vec<Vec<usize>> = (0..g.n()).permutations(k).collect();
    let values: Vec<f64> = tuples
        .par_iter()
        .map(|t| {
            let feats =
                featurize_labeled(g, t, &model.basis, model.shift, model.normalization, caps)?;
            Ok(model.evaluate(&feats))
        })
        .collect::<Result<_>>()?;
    Ok(TupleMap { tuples, values })
}

/// Sum of squared training residuals of a fitted model on a dataset.
pub fn training_sse(model: &HomModel, d: &Dataset, caps: &Caps) -> Result<f64> {
    let mut sse = 0.0;
    match d.targets() {
        Targets::Invariant(values) => {
            for (g, &y) in d.graphs().iter().zip(values) {
                let r = predict(model, g, caps)? - y;
                sse += r * r;
            }
        }
        Targets::Equivariant(maps) => {
            for (g, map) in d.graphs().iter().zip(maps) {
                for (t, &y) in map.tuples.iter().zip(&map.values) {
                    let feats = featurize_labeled(
                        g,
                        t,
                        &model.basis,
                        model.shift,
                        model.normalization,
                        caps,
                    )?;
                    let r = model.evaluate(&feats) - y;
                    sse += r * r;
                }
            }
        }
    }
    Ok(sse)
}

/// `sqrt(SSE) / sqrt(Σ y²)`, the scale-free training residual.
pub fn relative_residual(model: &HomModel, d: &Dataset, caps: &Caps) -> Result<f64> {
    let sse = training_sse(model, d, caps)?;
    let norm: f64 = match d.targets() {
        Targets::Invariant(values) => values.iter().map(|y| y * y).sum(),
        Targets::Equivariant(maps) => maps
            .iter()
            .flat_map(|m| m.values.iter())
            .map(|y| y * y)
            .sum(),
    };
    Ok((sse / norm.max(f64::MIN_POSITIVE)).sqrt())
}

/// Relative tolerance for deciding that two homomorphism numbers differ.
const SEPARATION_TOL: f64 = 1e-6;

/// Outcome of a separating-pattern search.
#[derive(Debug, Clone, PartialEq)]
pub enum Separation<P> {
    Separated { witness: P, hom1: f64, hom2: f64 },
    NotSeparated { max_m: usize },
}

impl<P> Separation<P> {
    pub fn is_separated(&self) -> bool {
        matches!(self, Separation::Separated { .. })
    }
}

fn homs_differ(h1: f64, h2: f64, integer_exact: bool) -> bool {
    // integer inputs make shifted homomorphism numbers integers, so compare
    // exactly whenever they are representable
    if integer_exact && h1.abs() < 2f64.powi(52) && h2.abs() < 2f64.powi(52) {
        return h1.round() != h2.round();
    }
    (h1 - h2).abs() > SEPARATION_TOL * h1.abs().max(h2.abs()).max(1.0)
}

/// Search the atlas (in order: vertex count, then canonical form) for the
/// first pattern whose shifted homomorphism numbers differ on the two
/// graphs; the witness is therefore a smallest separating pattern.
pub fn separate(
    g1: &WeightedGraph,
    g2: &WeightedGraph,
    max_m: usize,
    caps: &Caps,
) -> Result<Separation<Pattern>> {
    if g1.n() != g2.n() {
        return Err(Error::SizeMismatch {
            left: g1.n(),
            right: g2.n(),
        });
    }
    let s1 = shift(g1, 2.0);
    let s2 = shift(g2, 2.0);
    let integer_exact = s1.is_integer() && s2.is_integer();
    for f in enumerate_patterns(max_m, false, caps)? {
        let h1 = hom_pinned(&f, &s1, &[], caps)?;
        let h2 = hom_pinned(&f, &s2, &[], caps)?;
        if homs_differ(h1, h2, integer_exact) {
            return Ok(Separation::Separated {
                witness: f,
                hom1: h1,
                hom2: h2,
            });
        }
    }
    Ok(Separation::NotSeparated { max_m })
}

/// Labeled counterpart of [`separate`] over the k-labeled atlas, k being
/// the label arity of the inputs.
pub fn separate_labeled(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    max_m: usize,
    caps: &Caps,
) -> Result<Separation<LabeledPattern>> {
    if g1.graph().n() != g2.graph().n() {
        return Err(Error::SizeMismatch {
            left: g1.graph().n(),
            right: g2.graph().n(),
        });
    }
    if g1.k() != g2.k() {
        return Err(Error::ArityMismatch {
            left: g1.k(),
            right: g2.k(),
        });
    }
    let s1 = shift(g1.graph(), 2.0);
    let s2 = shift(g2.graph(), 2.0);
    let integer_exact = s1.is_integer() && s2.is_integer();
    for f in enumerate_labeled_patterns(max_m, g1.k(), caps)? {
        let h1 = hom_pinned(f.pattern(), &s1, g1.labels(), caps)?;
        let h2 = hom_pinned(f.pattern(), &s2, g2.labels(), caps)?;
        if homs_differ(h1, h2, integer_exact) {
            return Ok(Separation::Separated {
                witness: f,
                hom1: h1,
                hom2: h2,
            });
        }
    }
    Ok(Separation::NotSeparated { max_m })
}
