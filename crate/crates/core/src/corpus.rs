//! Bundled example theories, embedded at compile time.

use crate::dsl::parse_named;
use crate::error::{Error, Result};
use crate::metamodel::Theory;

/// Names accepted by [`load_corpus`].
pub const NAMES: [&str; 1] = ["t3"];

const T3_THEORY: &str = include_str!("../corpus/t3.theory");
const T3_RULES: &str = include_str!("../corpus/t3.rules");

/// Raw `.theory` text of a bundled corpus.
pub fn corpus_source(name: &str) -> Result<&'static str> {
    match name {
        "t3" => Ok(T3_THEORY),
        other => Err(Error::UnknownCorpus(other.to_string())),
    }
}

/// Raw review-rule text shipped with a bundled corpus.
pub fn corpus_rules(name: &str) -> Result<&'static str> {
    match name {
        "t3" => Ok(T3_RULES),
        other => Err(Error::UnknownCorpus(other.to_string())),
    }
}

pub fn load_corpus(name: &str) -> Result<Theory> {
    let source = corpus_source(name)?;
    let file = format!("{name}.theory");
    Ok(parse_named(&file, source)
        .unwrap_or_else(|errors| panic!("bundled corpus {file} does not parse: {errors:?}")))
}
