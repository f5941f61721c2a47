use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised on bad input: malformed files, out-of-range elements,
/// mappings that fail their defining property, and so on.
///
/// The [`Error::Internal`] variant is different in kind: it wraps violations
/// of mathematical facts this crate re-checks at runtime. Reaching one means
/// a bug in the library, never bad input, and the command-line front end maps
/// it to a dedicated exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{symbol}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },

    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),

    #[error("element {value} out of range for carrier of size {carrier}")]
    ElementOutOfRange { value: usize, carrier: usize },

    #[error("carrier must be nonempty")]
    EmptyCarrier,

    #[error("variable `{0}` has no assigned value")]
    UnassignedVariable(String),

    #[error("malformed term: {0}")]
    MalformedTerm(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("carrier size {carrier} exceeds the enumeration limit {max}")]
    CarrierTooLarge { carrier: usize, max: usize },

    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("not a congruence: operation `{symbol}` separates related elements {a} and {b}")]
    NotACongruence { symbol: String, a: usize, b: usize },

    #[error("term is not linear in `{0}`")]
    NotLinear(String),

    #[error("variable `{0}` does not occur in the term")]
    VariableAbsent(String),

    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("map is not surjective: element {missing} has no preimage")]
    NotSurjective { missing: usize },

    #[error("level {level} out of range for a system of depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("thread is incoherent at level {level}")]
    IncoherentThread { level: usize },

    #[error("invalid inverse system: {0}")]
    InvalidSystem(String),

    #[error("blocks do not partition the carrier: {0}")]
    NotAPartitionOfCarrier(String),

    #[error("congruences are incompatible with the connecting map from level {level} (witness pair {witness:?})")]
    IncompatibleCongruences { level: usize, witness: (usize, usize) },

    #[error("operation `{0}` is not associative")]
    NotAssociative(String),

    #[error("expected exactly one binary operation, found {0}")]
    NotASemigroupSignature(usize),

    #[error("monoid closure exceeded the size cap {cap}")]
    SizeCapExceeded { cap: usize },

    #[error("automaton alphabet is empty")]
    EmptyAlphabet,

    #[error("set of maps does not determine the syntactic congruence (witness pair {witness:?})")]
    NotDetermining { witness: (usize, usize) },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("internal invariant violated: {0}")]
    Internal(#[from] InternalError),
}

/// A mathematical fact the library depends on failed to hold at runtime.
///
/// Every variant corresponds to a theorem that is re-verified instead of
/// trusted: two independent routes to the syntactic congruence must agree,
/// quotient tables must be well defined, lifted maps must commute with the
/// quotient morphism, and so on. These are never caused by user input.
#[derive(Debug, Error)]
pub enum InternalError {
    #[error("the two syntactic-congruence algorithms disagree on pair ({0}, {1})")]
    AlgorithmDisagreement(usize, usize),

    #[error("quotient operation `{symbol}` is not well defined on class tuple {args:?}")]
    QuotientIllDefined { symbol: String, args: Vec<usize> },

    #[error("pullback of the target syntactic congruence differs from the source syntactic congruence on pair ({0}, {1})")]
    PullbackMismatch(usize, usize),

    #[error("induced map between quotients is not a bijective homomorphism: {0}")]
    InducedMapNotIso(String),

    #[error("lifted transformation does not commute with the quotient morphism")]
    LiftMismatch,

    #[error("constructed set of maps fails to determine the syntactic congruence (witness pair {witness:?})")]
    ConstructedSetNotDetermining { witness: (usize, usize) },

    #[error("syntactic congruence of the accepted set on the syntactic monoid has {0} classes, expected one per element")]
    MonoidNotFaithful(usize),

    #[error("cylinder is not recognized through its own syntactic quotient at level {level}")]
    RecognitionFailed { level: usize },

    #[error("kernel of the projection is not contained in the lifted congruence (witness pair {witness:?})")]
    KernelNotContained { witness: (usize, usize) },

    #[error("meet of saturating congruences fails to saturate block {block}")]
    MeetDoesNotSaturate { block: usize },

    #[error("power sequence contains {0} idempotents, expected exactly one")]
    IdempotentNotUnique(usize),

    #[error("certified construction failed its own defining property: {0}")]
    CertifyFailed(String),

    #[error("quotient system failed validation: {0}")]
    QuotientSystemInvalid(String),
}
