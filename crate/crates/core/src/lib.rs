//! Operationalizes a declarative theory into testable hypotheses.
//!
//! The pipeline reads a [`Theory`] (constructs, variables with finite
//! indicator domains, propositions, archetypes), enumerates one hypothesis
//! cell per combination of indicators for every strategic proposition,
//! reduces the grid (absence pruning, gradient merging, compound
//! decomposition, rule-driven abductive review), selects the hypotheses
//! consistent with an archetype, and emits a traceability graph and an
//! empirical testing protocol.

pub mod corpus;
pub mod diagnostic;
pub mod dsl;
pub mod enumerator;
pub mod error;
pub mod expr;
pub mod instantiator;
pub mod metamodel;
pub mod protocol;
pub mod refiner;
pub mod rules;
pub mod span;
pub mod template;
pub mod traceability;

pub use diagnostic::{Diagnostic, Severity};
pub use enumerator::{enumerate, enumerate_all, HypothesisCell, HypothesisGrid};
pub use error::{Error, Result};
pub use metamodel::{resolve, validate, Theory};
pub use refiner::{refine, RefinedHypothesis, Refinement, Status};
