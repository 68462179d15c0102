//! Symbolic knot invariants at the group-ring level.
//!
//! The crate is organized as a pipeline from combinatorial knot diagrams to
//! algebraic verification reports:
//!
//! - [`knotio`] — PD/Gauss/braid input, diagram validation, crossing signs,
//!   and the bundled census of prime knots through 8 crossings.
//! - [`fpgroup`] — Wirtinger presentations of knot groups with peripheral
//!   systems, plus sound three-valued word-equality backends (free reduction,
//!   bounded Knuth–Bendix, torus-knot normal forms, finite quotients).
//! - [`groupring`] — exact arithmetic in the integral group ring `Z[π]`, the
//!   augmentation, and constructive membership for the ideals `R(1−m)` and
//!   `R(1−m)R`.
//! - [`stringmod`] — the module `S` of alternating bracket words with its
//!   string relations, the evaluation `φ` into the group ring, the product
//!   `μ`, and the induced unital ring on `Z ⊕ R_pp`.
//! - [`alexander`] — the Alexander polynomial computed two independent ways
//!   (coloring-matrix route and a Fox-calculus oracle) plus the minor-gcd
//!   ladder of order ideals.
//! - [`recovery`] — unit recognition in `Z[π]`, the telescoping-divisor
//!   solver, and the peripheral-recovery pipeline that extracts a conjugator
//!   and mirror/orientation signs from isomorphism data.
//!
//! Equality of group elements is only semi-decidable in general, so every
//! decision surface in this crate is three-valued (`Yes` / `No` / `Unknown`)
//! and *sound*: a definite answer is never wrong, and resource exhaustion
//! degrades to `Unknown`, never to a guess.

pub mod alexander;
pub mod fpgroup;
pub mod groupring;
pub mod knotio;
pub mod recovery;
pub mod stringmod;

/// Unified error type for all modules.
///
/// Variant names follow the per-module error contracts; the CLI maps them
/// onto its exit-code surface.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Input text does not match the expected grammar.
    #[error("syntax error: {0}")]
    Syntax(String),
    /// Structurally well-formed input that violates a semantic invariant.
    #[error("validation error: {0}")]
    Validation(String),
    /// A word-problem backend ran out of resources before producing anything
    /// sound to say.
    #[error("backend error: {0}")]
    Backend(String),
    /// Two group-ring elements from different contexts were combined.
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    /// The backend could not decide whether two terms merge; the result
    /// would be inexact.
    #[error("normalization incomplete: {0}")]
    NormalizationIncomplete(String),
    /// A string-relation site does not match the relation's pattern.
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    /// Bracket-word operands have incompatible classifications.
    #[error("classification error: {0}")]
    Classification(String),
    /// All candidate minors vanished; the input does not present a knot
    /// module.
    #[error("degenerate matrix: {0}")]
    DegenerateMatrix(String),
    /// Recovery-pipeline products did not have the shape the structure
    /// theorems guarantee for genuine isomorphism data.
    #[error("match failure: {0}")]
    MatchFailure(String),
    /// A required equality could not be certified either way.
    #[error("unknown: {0}")]
    Unknown(String),
    /// The pipeline was invoked on an (apparently) unknotted input.
    #[error("knottedness violation: {0}")]
    KnotednessViolation(String),
    /// Conjugator data needed to build an ideal witness is missing.
    #[error("witness unavailable: {0}")]
    WitnessUnavailable(String),
    /// A presentation-level invariant (e.g. infinite-cyclic abelianization)
    /// failed to hold.
    #[error("invariant error: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
