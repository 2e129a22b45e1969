use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected {found} at offset {pos}")]
    UnexpectedToken { found: String, pos: usize },
    #[error("unexpected end of input, expected {expected}")]
    UnexpectedEnd { expected: &'static str },
    #[error("unbalanced parenthesis at offset {pos}")]
    UnbalancedParens { pos: usize },
    #[error("different implications chained without parentheses at offset {pos}")]
    MixedImplications { pos: usize },
    #[error("unknown command \\{name} at offset {pos}")]
    UnknownCommand { name: String, pos: usize },
    #[error("unexpected character {ch:?} at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("{what} requires an index at offset {pos}")]
    MissingIndex { what: &'static str, pos: usize },
    #[error("{what} is not available in {syntax} syntax")]
    NotInSyntax { what: String, syntax: &'static str },
    #[error("malformed AST: {0}")]
    BadAst(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrintError {
    #[error("{what} has no {syntax} notation")]
    Unprintable { what: &'static str, syntax: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule} not applicable: {reason}")]
pub struct NotApplicable {
    pub rule: String,
    pub reason: String,
}

impl NotApplicable {
    pub fn new(rule: impl Into<String>, reason: impl Into<String>) -> Self {
        NotApplicable { rule: rule.into(), reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("inequality is not pure: {0}")]
    NotPure(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("frame size {0} exceeds the enumeration budget of 3 worlds")]
    Budget(usize),
    #[error("valuation of {atom} is not admissible: {reason}")]
    BadValuation { atom: String, reason: String },
    #[error("no value for {0}")]
    Unbound(String),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    #[error("unsupported construct in {format}: {what}")]
    Unsupported { format: &'static str, what: String },
    #[error(transparent)]
    Print(#[from] PrintError),
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("unknown bundled corpus {0:?}")]
    UnknownBundle(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
