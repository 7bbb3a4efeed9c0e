use alloc::string::String;

/// Why an expression failed to parse. `position` is a byte offset into the
/// input text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at offset {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("exponent must be a positive integer")]
    BadExponent,
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("odd generator `{0}` raised to a power >= 2")]
    OddPower(String),
    #[error("expression is not linear in the basis: `{0}`")]
    NotLinear(String),
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, position: usize) -> Self {
        Self { kind, position }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operands live in different generator contexts")]
    ContextMismatch,
    #[error("generator `{0}` has degree 0; generators must have positive degree")]
    ZeroDegree(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("`{name}`: expected degree {expected}, found {found}")]
    DegreeMismatch { name: String, expected: u32, found: u32 },
    #[error("`{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("d^2 != 0 on `{generator}`: residue {residue}")]
    NotSquareZero { generator: String, residue: String },
    #[error("finite CDGA axiom violated: {0}")]
    FiniteAxiom(String),
    #[error("not simply connected: {0}")]
    NotSimplyConnected(String),
    #[error("morphism is not a chain map on `{generator}`: {detail}")]
    NotChainMap { generator: String, detail: String },
    #[error("morphism is not multiplicative on `{0}`")]
    NotMultiplicative(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("pontryagin class p_{index}: {reason}")]
    Pontryagin { index: u32, reason: String },
    #[error("[sigma(x)] is nonzero in H^{degree}(A): component obstruction")]
    ComponentObstruction { degree: u32 },
    #[error("insufficient cohomology coverage: need degrees up to {needed}, have {have}")]
    InsufficientCoverage { needed: usize, have: usize },
    #[error("growth is undetermined: {0}")]
    GrowthUndetermined(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
