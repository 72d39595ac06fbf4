use thiserror::Error;

/// Errors raised by the pipeline operations (enumeration, refinement,
/// review, instantiation, tracing). Parse and rule-file errors have their
/// own types because they carry source positions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unresolved reference `{name}`")]
    Unresolved { name: String },

    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),

    #[error("proposition `{0}` is taxonomic and has no hypothesis grid")]
    Taxonomic(String),

    #[error("proposition `{0}` has a wildcard left side; write one proposition per left variable")]
    WildcardLeft(String),

    #[error("proposition `{proposition}`: right variable `{variable}` has no ordering, required for sequential refinement")]
    UnorderedVariable {
        proposition: String,
        variable: String,
    },

    #[error("template references `{{{placeholder}}}`, which is not available for {context}")]
    Template {
        placeholder: String,
        context: String,
    },

    #[error("review rule on line {line}: {message}")]
    Review { line: usize, message: String },

    #[error("unknown archetype `{0}`")]
    UnknownArchetype(String),

    #[error("unknown hypothesis `{0}`")]
    UnknownHypothesis(String),

    #[error("unknown corpus `{0}`")]
    UnknownCorpus(String),

    #[error("traceability graph: {0}")]
    Graph(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
