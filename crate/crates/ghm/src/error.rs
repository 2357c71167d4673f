use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Two inputs that must act on the same vertex set do not.
    #[error("vertex count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    /// Label tuples (or labeled-pattern arities) of different lengths.
    #[error("label arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    /// An exhaustive operation would exceed its configured resource cap.
    /// `estimated` is the predicted cost in the same unit as `cap`.
    #[error("{what} exceeds cap: estimated {estimated}, cap {cap}")]
    CapExceeded {
        what: &'static str,
        estimated: u64,
        cap: u64,
    },

    /// A value violates a structural invariant; `field` names the offender.
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },

    /// Fitting requires at least one sample.
    #[error("empty dataset")]
    EmptyDataset,

    /// Datasets are defined over a single vertex count.
    #[error("mixed vertex counts in dataset: {first} vs {other} (graph #{index})")]
    MixedVertexCount {
        first: usize,
        other: usize,
        index: usize,
    },
}

impl Error {
    pub fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Resource caps for the exhaustive (factorial / exponential) operations.
///
/// Every cap is explicit and overridable; exceeding one yields
/// [`Error::CapExceeded`] with the estimated cost instead of a runaway
/// computation.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Largest `n` for the factorial edit-distance search.
    pub edit_max_n: usize,
    /// Largest pattern size accepted by canonicalization and decomposition.
    pub pattern_max_m: usize,
    /// Largest pattern size for full atlas enumeration (2^(m(m-1)) masks).
    pub enumerate_max_m: usize,
    /// Largest weakly-connected component size for the exhaustive
    /// elimination-order search in tree decomposition.
    pub decomp_component_max: usize,
    /// Elementary-multiplication budget for brute-force homomorphism sums
    /// and step-graphon densities.
    pub work: u64,
    /// Largest block count for the exhaustive cut-norm subset search.
    pub cutnorm_max_q: usize,
    /// Largest block count for the factorial cut-distance overlay search.
    pub cutdist_max_q: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            edit_max_n: 9,
            pattern_max_m: 6,
            enumerate_max_m: 5,
            decomp_component_max: 9,
            work: 100_000_000,
            cutnorm_max_q: 12,
            cutdist_max_q: 8,
        }
    }
}
