//! Formula corpora in JSON Lines form: one `{name, formula, expected_fo?}`
//! object per line. `expected_fo` is the TPTP body of the correspondent.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;

pub const BUNDLED_NAME: &str = "bundled-axioms";

const BUNDLED_AXIOMS: &str = include_str!("../data/bundled-axioms.jsonl");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub formula: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_fo: Option<String>,
}

/// Parse JSON Lines; blank lines are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| serde_json::from_str(l).map_err(|source| CorpusError::Json { line: k + 1, source }))
        .collect()
}

pub fn bundled(name: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    match name {
        BUNDLED_NAME => parse_corpus(BUNDLED_AXIOMS),
        other => Err(CorpusError::UnknownBundle(other.to_string())),
    }
}

/// A bundled corpus name or a path to a JSON Lines file.
pub fn load(source: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    if source == BUNDLED_NAME {
        return bundled(source);
    }
    let path = Path::new(source);
    if !path.exists() && !source.contains(['/', '.']) {
        return Err(CorpusError::UnknownBundle(source.to_string()));
    }
    parse_corpus(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines() {
        let text = "{\"name\":\"a\",\"formula\":\"p \\\\to p\"}\n\n{\"name\":\"b\",\"formula\":\"q\",\"expected_fo\":\"$true\"}\n";
        let c = parse_corpus(text).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].formula, "p \\to p");
        assert_eq!(c[1].expected_fo.as_deref(), Some("$true"));
        assert!(matches!(parse_corpus("{\"name\":1}"), Err(CorpusError::Json { line: 1, .. })));
    }

    #[test]
    fn bundled_corpus_loads() {
        let c = bundled(BUNDLED_NAME).unwrap();
        assert!(!c.is_empty());
        assert!(bundled("nope").is_err());
        assert!(load("nope").is_err());
    }
}
