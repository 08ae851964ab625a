//! Error type shared by all modules.
//!
//! Errors that carry words or elements render them with atom names already
//! substituted, so messages are readable without a presentation in hand.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("presentation has no atoms")]
    EmptyAlphabet,

    #[error("presentation has {count} atoms, more than the supported 255")]
    AlphabetTooLarge { count: usize },

    #[error("duplicate atom name `{name}`")]
    DuplicateAtomName { name: String },

    #[error("invalid atom name `{name}`: names are lowercase ascii words")]
    InvalidAtomName { name: String },

    #[error("unknown atom `{name}`")]
    UnknownAtom { name: String },

    #[error("relation `{lhs} = {rhs}` is not length-preserving or has an empty side")]
    NonHomogeneousRelation { lhs: String, rhs: String },

    #[error("parse error: {detail}")]
    Parse { detail: String },

    #[error("equivalence class exceeds the cap of {cap} words")]
    ClassSizeExceeded { cap: usize },

    #[error("`{divisor}` does not divide `{of}` on the requested side")]
    NotADivisor { divisor: String, of: String },

    #[error("ambiguous quotient: witnesses `{first}` and `{second}` are not equivalent (non-cancellative input)")]
    AmbiguousQuotient { first: String, second: String },

    #[error("gcd-monoid structure violated: {detail}")]
    NotGcdMonoid { detail: String },

    #[error("conditional-lcm structure violated: {detail}")]
    NotConditionalLcm { detail: String },

    #[error("basic-element closure diverged: {detail}")]
    BasicClosureDiverges { detail: String },

    #[error("reduction level {level} is out of range for depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("3-Ore condition violated: `{x}` and `{y}` each share a multiple with `{z}` but `{x} v {y}` has none with it")]
    ThreeOreViolation { x: String, y: String, z: String },

    #[error("reduction engine produced a reducible result: {detail}")]
    IrreducibilityAssertionFailed { detail: String },

    #[error("the trivial element has no denominator")]
    TrivialElement,

    #[error("exhaustive reduction exceeded the cap of {cap} nodes")]
    NodeCapExceeded { cap: usize },

    #[error("support is ill-defined: relation `{relation}` has sides over different atom sets")]
    SupportIllDefined { relation: String },

    #[error("presentation is not an Artin-Tits presentation: {reason}")]
    NotArtinTits { reason: String },

    #[error("subset enumeration over {atoms} atoms exceeds the cap of {cap} subsets")]
    SubsetBlowup { atoms: usize, cap: usize },

    #[error("depth {n} is not a valid diagram depth (need an even depth of at least 4)")]
    BadDepth { n: usize },

    #[error("trace is inconsistent with the universal strategy: {detail}")]
    InconsistentTrace { detail: String },
}
