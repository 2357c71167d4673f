//! JSON file formats and numeric text formatting.
//!
//! Everything on disk is 1-based (vertex indices, labels, tuples, block
//! indices) to match the written conventions; the in-memory types are
//! 0-based. Parsing is strict: non-square matrices, duplicate labels,
//! out-of-range indices, and malformed pattern edges are rejected with the
//! offending field named in the error.

use crate::error::{Caps, Error, Result};
use crate::graph::{LabeledGraph, WeightedGraph};
use crate::graphon::StepGraphon;
use crate::model::{Dataset, HomModel, Normalization, TupleMap};
use crate::pattern::{LabeledPattern, Pattern};
use serde::{Deserialize, Serialize};

fn json_error(e: serde_json::Error) -> Error {
    Error::invalid("json", e.to_string()) // includes line/column position
}

/// `{"n": …, "weights": [[…]], "labels": […]}`; labels are optional and
/// 1-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub weights: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_weighted(&self) -> Result<WeightedGraph> {
        if self.weights.len() != self.n {
            return Err(Error::invalid(
                "weights",
                format!("{} rows for n = {}", self.weights.len(), self.n),
            ));
        }
        let mut flat = Vec::with_capacity(self.n * self.n);
        for (i, row) in self.weights.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::invalid(
                    "weights",
                    format!("row {} has {} entries, expected {}", i + 1, row.len(), self.n),
                ));
            }
            flat.extend_from_slice(row);
        }
        WeightedGraph::from_rows(self.n, &flat)
    }

    pub fn to_labeled(&self) -> Result<LabeledGraph> {
        let graph = self.to_weighted()?;
        let labels = match &self.labels {
            None => vec![],
            Some(raw) => raw
                .iter()
                .map(|&x| {
                    if x == 0 || x > self.n {
                        Err(Error::invalid(
                            "labels",
                            format!("label {x} outside 1..{}", self.n),
                        ))
                    } else {
                        Ok(x - 1)
                    }
                })
                .collect::<Result<Vec<usize>>>()?,
        };
        LabeledGraph::new(graph, labels)
    }

    pub fn from_weighted(g: &WeightedGraph) -> Self {
        let n = g.n();
        GraphFile {
            n,
            weights: (0..n)
                .map(|u| (0..n).map(|v| g.weight(u, v)).collect())
                .collect(),
            labels: None,
        }
    }

    pub fn from_labeled(g: &LabeledGraph) -> Self {
        let mut file = Self::from_weighted(g.graph());
        if !g.labels().is_empty() {
            file.labels = Some(g.labels().iter().map(|&x| x + 1).collect());
        }
        file
    }
}

/// `{"m": …, "edges": [[i, j], …], "k": …}`; vertices 1-based, `k`
/// optional (0). A `canonical` hex string may accompany atlas output and
/// is ignored on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternFile {
    pub m: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<String>,
}

impl PatternFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_labeled_pattern(&self) -> Result<LabeledPattern> {
        let edges = self
            .edges
            .iter()
            .map(|&(i, j)| {
                if i == 0 || j == 0 || i > self.m || j > self.m {
                    Err(Error::invalid(
                        "edges",
                        format!("edge ({i}, {j}) outside 1..{}", self.m),
                    ))
                } else {
                    Ok((i - 1, j - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        LabeledPattern::new(Pattern::new(self.m, edges)?, self.k)
    }

    pub fn to_pattern(&self) -> Result<Pattern> {
        Ok(self.to_labeled_pattern()?.pattern().clone())
    }

    pub fn from_labeled_pattern(p: &LabeledPattern, caps: &Caps) -> Self {
        PatternFile {
            m: p.m(),
            edges: p
                .pattern()
                .edges()
                .iter()
                .map(|&(i, j)| (i + 1, j + 1))
                .collect(),
            k: p.k(),
            canonical: p.canonical_form(caps).ok().map(|cf| cf.to_hex()),
        }
    }

    pub fn from_pattern(p: &Pattern, caps: &Caps) -> Self {
        Self::from_labeled_pattern(
            &LabeledPattern::new(p.clone(), 0).expect("k = 0 is always valid"),
            caps,
        )
    }
}

/// `{"q": …, "B": [[…]], "mu": […]}`; `mu` defaults to uniform.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphonFile {
    pub q: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
}

impl GraphonFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    fn flat_values(&self) -> Result<Vec<f64>> {
        if self.b.len() != self.q {
            return Err(Error::invalid(
                "B",
                format!("{} rows for q = {}", self.b.len(), self.q),
            ));
        }
        let mut flat = Vec::with_capacity(self.q * self.q);
        for (i, row) in self.b.iter().enumerate() {
            if row.len() != self.q {
                return Err(Error::invalid(
                    "B",
                    format!("row {} has {} entries, expected {}", i + 1, row.len(), self.q),
                ));
            }
            flat.extend_from_slice(row);
        }
        Ok(flat)
    }

    fn measures(&self) -> Vec<f64> {
        self.mu
            .clone()
            .unwrap_or_else(|| vec![1.0 / self.q.max(1) as f64; self.q])
    }

    pub fn to_graphon(&self) -> Result<StepGraphon> {
        StepGraphon::new(self.q, self.flat_values()?, self.measures())
    }

    /// Relaxed variant for cut-norm / cut-distance inputs.
    pub fn to_signed_graphon(&self) -> Result<StepGraphon> {
        StepGraphon::new_signed(self.q, self.flat_values()?, self.measures())
    }

    pub fn from_graphon(w: &StepGraphon) -> Self {
        let q = w.q();
        GraphonFile {
            q,
            b: (0..q)
                .map(|a| (0..q).map(|c| w.value(a, c)).collect())
                .collect(),
            mu: Some(w.measures().to_vec()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalizationFile {
    pub kind: String,
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
}

/// `{"shift": …, "normalization": {…}, "patterns": […], "coefficients":
/// […], "intercept": …}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub shift: f64,
    pub normalization: NormalizationFile,
    pub patterns: Vec<PatternFile>,
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_model(&self, caps: &Caps) -> Result<HomModel> {
        let normalization = match self.normalization.kind.as_str() {
            "none" => Normalization::None,
            "density" => Normalization::Density,
            other => {
                return Err(Error::invalid(
                    "normalization",
                    format!("unknown kind {other:?} (expected \"none\" or \"density\")"),
                ))
            }
        };
        let basis = self
            .patterns
            .iter()
            .map(|p| p.to_labeled_pattern())
            .collect::<Result<Vec<_>>>()?;
        HomModel::new(
            basis,
            self.coefficients.clone(),
            self.shift,
            normalization,
            self.normalization.means.clone(),
            self.normalization.scales.clone(),
            self.intercept,
            caps,
        )
    }

    pub fn from_model(m: &HomModel, caps: &Caps) -> Self {
        ModelFile {
            shift: m.shift(),
            normalization: NormalizationFile {
                kind: match m.normalization() {
                    Normalization::None => "none".into(),
                    Normalization::Density => "density".into(),
                },
                means: m.feature_means().to_vec(),
                scales: m.feature_scales().to_vec(),
            },
            patterns: m
                .basis()
                .iter()
                .map(|p| PatternFile::from_labeled_pattern(p, caps))
                .collect(),
            coefficients: m.coefficients().to_vec(),
            intercept: m.intercept(),
        }
    }
}

/// One dataset row: a graph and its target, either a scalar or a
/// tuple-indexed map (tuples 1-based).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetEntryFile {
    pub graph: GraphFile,
    pub y: TargetFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetFile {
    Scalar(f64),
    Tuples {
        tuples: Vec<Vec<usize>>,
        values: Vec<f64>,
    },
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let entries: Vec<DatasetEntryFile> = serde_json::from_str(text).map_err(json_error)?;
    if entries.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let graphs = entries
        .iter()
        .map(|e| e.graph.to_weighted())
        .collect::<Result<Vec<_>>>()?;
    match &entries[0].y {
        TargetFile::Scalar(_) => {
            let values = entries
                .iter()
                .map(|e| match &e.y {
                    TargetFile::Scalar(v) => Ok(*v),
                    TargetFile::Tuples { .. } => {
                        Err(Error::invalid("y", "mixed scalar and tuple targets"))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Dataset::new_invariant(graphs, values)
        }
        TargetFile::Tuples { .. } => {
            let maps = entries
                .iter()
                .map(|e| match &e.y {
                    TargetFile::Scalar(_) => {
                        Err(Error::invalid("y", "mixed scalar and tuple targets"))
                    }
                    TargetFile::Tuples { tuples, values } => {
                        let zero_based = tuples
                            .iter()
                            .map(|t| {
                                t.iter()
                                    .map(|&x| {
                                        if x == 0 {
                                            Err(Error::invalid("tuples", "vertex index 0 (1-based)"))
                                        } else {
                                            Ok(x - 1)
                                        }
                                    })
                                    .collect::<Result<Vec<usize>>>()
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(TupleMap {
                            tuples: zero_based,
                            values: values.clone(),
                        })
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Dataset::new_equivariant(graphs, maps)
        }
    }
}

pub fn dataset_to_entries(d: &Dataset) -> Vec<DatasetEntryFile> {
    use crate::model::Targets;
    match d.targets() {
        Targets::Invariant(values) => d
            .graphs()
            .iter()
            .zip(values)
            .map(|(g, &v)| DatasetEntryFile {
                graph: GraphFile::from_weighted(g),
                y: TargetFile::Scalar(v),
            })
            .collect(),
        Targets::Equivariant(maps) => d
            .graphs()
            .iter()
            .zip(maps)
            .map(|(g, map)| DatasetEntryFile {
                graph: GraphFile::from_weighted(g),
                y: TargetFile::Tuples {
                    tuples: map
                        .tuples
                        .iter()
                        .map(|t| t.iter().map(|&x| x + 1).collect())
                        .collect(),
                    values: map.values.clone(),
                },
            })
            .collect(),
    }
}

/// Format with the given number of significant digits, trimming trailing
/// zeros, in the style of C's `%g` (plain decimal where reasonable,
/// scientific otherwise).
pub fn format_significant(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if exponent < -4 || exponent >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, x);
        // trim trailing zeros in the mantissa: "1.2300e-7" -> "1.23e-7"
        if let Some(epos) = s.find('e') {
            let (mantissa, exp) = s.split_at(epos);
            let trimmed = mantissa.trim_end_matches('0').trim_end_matches('.');
            return format!("{trimmed}{exp}");
        }
        s
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

/// Fifteen significant digits, the precision every CLI number is printed
/// with so that cross-engine diffs are meaningful.
pub fn format_value(x: f64) -> String {
    format_significant(x, 15)
}
