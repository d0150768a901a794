//! Symbolic dynamics workbench: binary blocks, shift spaces, density
//! arithmetic, independence sets, a staged low-complexity construction, and
//! distributional chaos detectors.
//!
//! Everything is exact where the mathematics is exact: densities and
//! frequency ratios are rationals, language sets are enumerated rather than
//! sampled, and floating point only appears where a quantity is genuinely
//! real-valued (entropy estimates, binary entropy).

#![forbid(unsafe_code)]

pub mod chaos;
pub mod density;
pub mod exec;
pub mod independence;
pub mod report;
pub mod shiftspace;
pub mod weiss;
pub mod words;

use thiserror::Error;

/// Workbench-wide error type. Index errors on blocks panic like slice
/// indexing does; everything data- or budget-shaped comes through here.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed spec, descriptor, parameter, or file content.
    #[error("config error: {0}")]
    Config(String),

    /// An enumeration or search would exceed a configured cap.
    #[error("cap exceeded for {what}: needed {needed}, cap {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u64,
        cap: u64,
    },

    /// A theorem hypothesis fails on the given input at this horizon.
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    /// The operation is not available for this spec kind.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Tunable limits and tolerances shared by the heavier operations.
#[derive(Debug, Clone)]
pub struct Config {
    /// Execution strategy for the data-parallel kernels.
    pub strategy: exec::Strategy,
    /// Largest n for full 2^n block enumeration.
    pub enum_cap: u32,
    /// Largest number of blocks any enumeration may materialize.
    pub block_budget: u64,
    /// Largest number of candidate subsets a combinatorial search may visit.
    pub subset_budget: u64,
    /// Largest independence-set size checked against all 2^|J| assignments.
    pub j_cap: u32,
    /// Entropy margin for the independence-set pipeline.
    pub km_margin: f64,
    /// Bisection depth for rational epsilon extraction (denominator 2^depth).
    pub bisect_depth: u32,
    /// Closeness tolerance for the strongest chaos verdict.
    pub chaos_tol: f64,
    /// Minimal persistent gap for the weakest chaos verdict.
    pub chaos_gap: f64,
    /// Minimal run of full matches treated as proximality evidence.
    pub proximity_len: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            strategy: exec::Strategy::default(),
            enum_cap: 24,
            block_budget: 1 << 26,
            subset_budget: 1 << 22,
            j_cap: 20,
            km_margin: 0.01,
            bisect_depth: 20,
            chaos_tol: 0.05,
            chaos_gap: 0.15,
            proximity_len: 8,
        }
    }
}

/// Longest block representable in a single machine word. Language sets and
/// the staged construction work within this bound.
pub const MAX_PACKED_LEN: u32 = 64;
