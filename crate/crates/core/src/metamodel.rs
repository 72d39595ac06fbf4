//! Domain types of an operationalized theory and their structural validation.
//!
//! A [`Theory`] is the parsed conceptual model: constructs with measurable
//! variables, propositions relating those variables, and archetypes that
//! instantiate the theory for a concrete team structure. Values are immutable
//! once built; every downstream stage reads them by reference.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diagnostic::{Diagnostic, Location};
use crate::error::{Error, Result};
use crate::span::Span;
use crate::template;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theory {
    pub name: String,
    #[serde(default)]
    pub constructs: Vec<Construct>,
    #[serde(default)]
    pub propositions: Vec<Proposition>,
    #[serde(default)]
    pub archetypes: Vec<Archetype>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construct {
    pub name: String,
    #[serde(default)]
    pub definition: String,
    #[serde(default)]
    pub variables: Vec<Variable>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    /// Human-readable name used in statements and questions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub domain: IndicatorDomain,
    #[serde(skip)]
    pub span: Span,
}

impl Variable {
    pub fn display_name(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.name)
    }
}

/// The finite set of indicator tokens a variable can take.
///
/// `values` is in declaration order, which is also grid display order.
/// `ordering`, when present, lists the same tokens in ascending gradient
/// order and may differ from declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorDomain {
    pub values: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absence: Option<String>,
}

impl IndicatorDomain {
    pub fn new<I, S>(values: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            values: values.into_iter().map(Into::into).collect(),
            ordering: None,
            absence: None,
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.values.iter().any(|v| v == token)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_absence(&self, token: &str) -> bool {
        self.absence.as_deref() == Some(token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Selector {
    Variable(String),
    All,
}

/// `Construct.variable` or `Construct.*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableRef {
    pub construct: String,
    pub selector: Selector,
}

impl VariableRef {
    pub fn variable(construct: impl Into<String>, variable: impl Into<String>) -> Self {
        Self {
            construct: construct.into(),
            selector: Selector::Variable(variable.into()),
        }
    }

    pub fn all(construct: impl Into<String>) -> Self {
        Self {
            construct: construct.into(),
            selector: Selector::All,
        }
    }

    pub fn is_wildcard(&self) -> bool {
        self.selector == Selector::All
    }
}

impl fmt::Display for VariableRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.selector {
            Selector::Variable(v) => write!(f, "{}.{}", self.construct, v),
            Selector::All => write!(f, "{}.*", self.construct),
        }
    }
}

impl FromStr for VariableRef {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (construct, selector) = s
            .split_once('.')
            .ok_or_else(|| format!("reference `{s}` is not of the form Construct.variable"))?;
        if construct.is_empty() || selector.is_empty() {
            return Err(format!("reference `{s}` has an empty part"));
        }
        Ok(match selector {
            "*" => VariableRef::all(construct),
            v => VariableRef::variable(construct, v),
        })
    }
}

impl Serialize for VariableRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VariableRef {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Dubin's three non-causal interaction semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropositionKind {
    Categoric,
    Sequential,
    Determinant,
}

impl PropositionKind {
    pub fn keyword(self) -> &'static str {
        match self {
            PropositionKind::Categoric => "categoric",
            PropositionKind::Sequential => "sequential",
            PropositionKind::Determinant => "determinant",
        }
    }
}

impl fmt::Display for PropositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposition {
    pub id: String,
    pub kind: PropositionKind,
    #[serde(default = "default_strategic")]
    pub strategic: bool,
    pub left: VariableRef,
    pub right: VariableRef,
    pub text: String,
    #[serde(default)]
    pub quotes: Vec<Quotation>,
    #[serde(rename = "template", default, skip_serializing_if = "Option::is_none")]
    pub template_override: Option<String>,
    #[serde(skip)]
    pub span: Span,
}

fn default_strategic() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quotation {
    pub source: String,
    pub excerpt: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub construct: String,
    pub variable: String,
    pub token: String,
    pub span: Span,
}

impl Assignment {
    pub fn new(
        construct: impl Into<String>,
        variable: impl Into<String>,
        token: impl Into<String>,
    ) -> Self {
        Self {
            construct: construct.into(),
            variable: variable.into(),
            token: token.into(),
            span: Span::none(),
        }
    }

    pub fn key(&self) -> String {
        format!("{}.{}", self.construct, self.variable)
    }
}

/// A named partial assignment of indicator tokens to variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Archetype {
    pub name: String,
    #[serde(default, with = "assignment_map")]
    pub assignments: Vec<Assignment>,
    #[serde(skip)]
    pub span: Span,
}

impl Archetype {
    /// The token assigned to `construct.variable`, if any.
    pub fn assigned(&self, construct: &str, variable: &str) -> Option<&str> {
        self.assignments
            .iter()
            .find(|a| a.construct == construct && a.variable == variable)
            .map(|a| a.token.as_str())
    }
}

mod assignment_map {
    use super::*;

    pub fn serialize<S: Serializer>(
        assignments: &[Assignment],
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(assignments.len()))?;
        for a in assignments {
            map.serialize_entry(&a.key(), &a.token)?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Vec<Assignment>, D::Error> {
        struct AssignmentVisitor;

        impl<'de> Visitor<'de> for AssignmentVisitor {
            type Value = Vec<Assignment>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from `Construct.variable` to an indicator token")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some((key, token)) = access.next_entry::<String, String>()? {
                    let (construct, variable) = key.split_once('.').ok_or_else(|| {
                        de::Error::custom(format!(
                            "assignment key `{key}` is not Construct.variable"
                        ))
                    })?;
                    out.push(Assignment::new(construct, variable, token));
                }
                Ok(out)
            }
        }

        deserializer.deserialize_map(AssignmentVisitor)
    }
}

impl Theory {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            constructs: Vec::new(),
            propositions: Vec::new(),
            archetypes: Vec::new(),
            span: Span::none(),
        }
    }

    pub fn construct(&self, name: &str) -> Option<&Construct> {
        self.constructs.iter().find(|c| c.name == name)
    }

    pub fn variable(&self, construct: &str, variable: &str) -> Option<&Variable> {
        self.construct(construct)?
            .variables
            .iter()
            .find(|v| v.name == variable)
    }

    pub fn proposition(&self, id: &str) -> Option<&Proposition> {
        self.propositions.iter().find(|p| p.id == id)
    }

    pub fn archetype(&self, name: &str) -> Option<&Archetype> {
        self.archetypes.iter().find(|a| a.name == name)
    }

    /// Number used in cell and hypothesis ids (`h<n>.k`, `H<n>.k`): the
    /// trailing integer of the proposition id, else its 1-based position.
    pub fn proposition_ordinal(&self, id: &str) -> Option<u32> {
        let position = self.propositions.iter().position(|p| p.id == id)?;
        Some(ordinal_of(id, position))
    }

    pub fn from_json(text: &str) -> std::result::Result<Theory, serde_json::Error> {
        let mut theory: Theory = serde_json::from_str(text)?;
        theory.trim_tokens();
        Ok(theory)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("theory serialization cannot fail")
    }

    /// Trims every indicator token; tokens compare case-sensitively after
    /// trimming.
    pub fn trim_tokens(&mut self) {
        fn trim(s: &mut String) {
            let t = s.trim();
            if t.len() != s.len() {
                *s = t.to_string();
            }
        }
        for v in self
            .constructs
            .iter_mut()
            .flat_map(|c| c.variables.iter_mut())
        {
            v.domain.values.iter_mut().for_each(trim);
            if let Some(order) = v.domain.ordering.as_mut() {
                order.iter_mut().for_each(trim);
            }
            if let Some(a) = v.domain.absence.as_mut() {
                trim(a);
            }
        }
        for a in self
            .archetypes
            .iter_mut()
            .flat_map(|a| a.assignments.iter_mut())
        {
            trim(&mut a.token);
        }
    }

    pub fn variable_count(&self) -> usize {
        self.constructs.iter().map(|c| c.variables.len()).sum()
    }

    pub fn indicator_count(&self) -> usize {
        self.constructs
            .iter()
            .flat_map(|c| &c.variables)
            .map(|v| v.domain.len())
            .sum()
    }
}

pub(crate) fn ordinal_of(id: &str, position: usize) -> u32 {
    let digits: String = id
        .chars()
        .rev()
        .take_while(char::is_ascii_digit)
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    digits
        .parse()
        .unwrap_or_else(|_| u32::try_from(position + 1).unwrap_or(u32::MAX))
}

/// Resolves a reference to `(construct, variable)` pairs: one pair for a
/// single-variable selector, every variable in declaration order for `*`.
pub fn resolve<'t>(
    theory: &'t Theory,
    reference: &VariableRef,
) -> Result<Vec<(&'t Construct, &'t Variable)>> {
    let construct = theory
        .construct(&reference.construct)
        .ok_or_else(|| Error::Unresolved {
            name: reference.to_string(),
        })?;
    match &reference.selector {
        Selector::All => Ok(construct.variables.iter().map(|v| (construct, v)).collect()),
        Selector::Variable(name) => construct
            .variables
            .iter()
            .find(|v| &v.name == name)
            .map(|v| vec![(construct, v)])
            .ok_or_else(|| Error::Unresolved {
                name: reference.to_string(),
            }),
    }
}

/// Checks every structural invariant of a theory. The result is empty of
/// errors iff the theory is valid; warnings flag taxonomy-only constructs,
/// unquoted propositions, and strategic propositions whose grid is empty.
pub fn validate(theory: &Theory) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let mut construct_names = HashSet::new();
    for c in &theory.constructs {
        let here = Location::new(format!("construct {}", c.name), c.span.get());
        check_name("construct", &c.name, &here, &mut out);
        if !construct_names.insert(c.name.as_str()) {
            out.push(Diagnostic::error(
                here.clone(),
                format!("duplicate construct `{}`", c.name),
            ));
        }
        if c.variables.is_empty() {
            out.push(Diagnostic::warning(
                here.clone(),
                format!("construct `{}` has no variables (taxonomy-only)", c.name),
            ));
        }
        let mut variable_names = HashSet::new();
        for v in &c.variables {
            let here = Location::new(format!("variable {}.{}", c.name, v.name), v.span.get());
            check_name("variable", &v.name, &here, &mut out);
            if !variable_names.insert(v.name.as_str()) {
                out.push(Diagnostic::error(
                    here.clone(),
                    format!("duplicate variable `{}` in construct `{}`", v.name, c.name),
                ));
            }
            check_domain(&v.domain, &here, &mut out);
        }
    }

    let mut ids = HashSet::new();
    let mut ordinals: HashMap<u32, &str> = HashMap::new();
    for (position, p) in theory.propositions.iter().enumerate() {
        let here = Location::new(format!("proposition {}", p.id), p.span.get());
        check_name("proposition id", &p.id, &here, &mut out);
        if !ids.insert(p.id.as_str()) {
            out.push(Diagnostic::error(
                here.clone(),
                format!("duplicate proposition `{}`", p.id),
            ));
        } else {
            let ordinal = ordinal_of(&p.id, position);
            if let Some(other) = ordinals.insert(ordinal, &p.id) {
                out.push(Diagnostic::error(
                    here.clone(),
                    format!(
                        "proposition `{}` shares hypothesis number {ordinal} with `{other}`",
                        p.id
                    ),
                ));
            }
        }

        for (side, reference) in [("left", &p.left), ("right", &p.right)] {
            match resolve(theory, reference) {
                Ok(pairs) if pairs.is_empty() && p.strategic => {
                    out.push(Diagnostic::warning(
                        here.clone(),
                        format!(
                            "{side} side `{reference}` resolves to no variables; the grid is empty"
                        ),
                    ));
                }
                Ok(_) => {}
                Err(_) => out.push(Diagnostic::error(
                    here.clone(),
                    format!("{side} side references undeclared `{reference}`"),
                )),
            }
        }

        if p.strategic && p.left.is_wildcard() {
            out.push(Diagnostic::error(
                here.clone(),
                format!(
                    "left side `{}` is a wildcard; write one proposition per left variable",
                    p.left
                ),
            ));
        }
        if p.quotes.is_empty() {
            out.push(Diagnostic::warning(
                here.clone(),
                format!("proposition `{}` has no grounding quotations", p.id),
            ));
        }
        for (i, q) in p.quotes.iter().enumerate() {
            if q.excerpt.trim().is_empty() {
                out.push(Diagnostic::error(
                    here.clone(),
                    format!("quotation {} of `{}` has an empty excerpt", i + 1, p.id),
                ));
            }
        }
        if let Some(t) = &p.template_override {
            if let Err(problem) = template::check(t) {
                out.push(Diagnostic::error(
                    here.clone(),
                    format!("template: {problem}"),
                ));
            }
        }
    }

    let mut archetype_names = HashSet::new();
    for a in &theory.archetypes {
        let here = Location::new(format!("archetype {}", a.name), a.span.get());
        check_name("archetype", &a.name, &here, &mut out);
        if !archetype_names.insert(a.name.as_str()) {
            out.push(Diagnostic::error(
                here.clone(),
                format!("duplicate archetype `{}`", a.name),
            ));
        }
        out.extend(assignment_diagnostics(theory, a));
    }

    out
}

/// Resolution and domain-membership errors for an archetype's assignments.
pub(crate) fn assignment_diagnostics(theory: &Theory, archetype: &Archetype) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut seen = BTreeMap::new();
    for a in &archetype.assignments {
        let here = Location::new(
            format!("archetype {} / {}", archetype.name, a.key()),
            a.span.get().or(archetype.span.get()),
        );
        if seen.insert(a.key(), ()).is_some() {
            out.push(Diagnostic::error(
                here.clone(),
                format!("`{}` assigned twice", a.key()),
            ));
        }
        match theory.variable(&a.construct, &a.variable) {
            None => out.push(Diagnostic::error(
                here,
                format!("assignment to undeclared variable `{}`", a.key()),
            )),
            Some(v) if !v.domain.contains(&a.token) => out.push(Diagnostic::error(
                here,
                format!(
                    "`{}` is not an indicator of `{}` (expected one of: {})",
                    a.token,
                    a.key(),
                    v.domain.values.join(", ")
                ),
            )),
            Some(_) => {}
        }
    }
    out
}

fn check_name(what: &str, name: &str, here: &Location, out: &mut Vec<Diagnostic>) {
    if !crate::dsl::is_ident(name) {
        out.push(Diagnostic::error(
            here.clone(),
            format!("{what} name `{name}` is not an identifier ([A-Za-z_][A-Za-z0-9_-]*)"),
        ));
    }
}

fn check_domain(domain: &IndicatorDomain, here: &Location, out: &mut Vec<Diagnostic>) {
    if domain.values.is_empty() {
        out.push(Diagnostic::error(here.clone(), "indicator domain is empty"));
    }
    let mut seen = HashSet::new();
    for v in &domain.values {
        if v.trim().is_empty() {
            out.push(Diagnostic::error(here.clone(), "empty indicator token"));
        } else if !seen.insert(v.as_str()) {
            out.push(Diagnostic::error(
                here.clone(),
                format!("duplicate indicator `{v}`"),
            ));
        }
    }
    if let Some(order) = &domain.ordering {
        let mut sorted_order: Vec<&str> = order.iter().map(String::as_str).collect();
        let mut sorted_values: Vec<&str> = domain.values.iter().map(String::as_str).collect();
        sorted_order.sort_unstable();
        sorted_values.sort_unstable();
        if sorted_order != sorted_values {
            out.push(Diagnostic::error(
                here.clone(),
                "ordering is not a permutation of the declared indicators",
            ));
        }
    }
    if let Some(absence) = &domain.absence {
        if !domain.contains(absence) {
            out.push(Diagnostic::error(
                here.clone(),
                format!("absence value `{absence}` is not a declared indicator"),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostic::{has_errors, Severity};

    fn small() -> Theory {
        let mut t = Theory::new("small");
        t.constructs.push(Construct {
            name: "Team".into(),
            definition: String::new(),
            variables: vec![
                Variable {
                    name: "autonomy".into(),
                    label: None,
                    domain: IndicatorDomain::new(["dependent", "self-organization"]),
                    span: Span::none(),
                },
                Variable {
                    name: "sharing".into(),
                    label: None,
                    domain: IndicatorDomain {
                        values: vec!["full".into(), "none".into()],
                        ordering: None,
                        absence: Some("none".into()),
                    },
                    span: Span::none(),
                },
            ],
            span: Span::none(),
        });
        t.propositions.push(Proposition {
            id: "P1".into(),
            kind: PropositionKind::Categoric,
            strategic: true,
            left: VariableRef::variable("Team", "sharing"),
            right: VariableRef::variable("Team", "autonomy"),
            text: "sharing enables autonomy".into(),
            quotes: vec![Quotation {
                source: "I1".into(),
                excerpt: "we share".into(),
            }],
            template_override: None,
            span: Span::none(),
        });
        t
    }

    #[test]
    fn valid_theory_has_no_diagnostics() {
        assert!(validate(&small()).is_empty());
    }

    #[test]
    fn undeclared_variable_is_one_error_naming_it() {
        let mut t = small();
        t.propositions[0].right = VariableRef::variable("Team", "velocity");
        let errors: Vec<_> = validate(&t)
            .into_iter()
            .filter(Diagnostic::is_error)
            .collect();
        assert_eq!(errors.len(), 1);
        assert!(errors[0].message.contains("Team.velocity"));
    }

    #[test]
    fn zero_variable_construct_is_warning() {
        let mut t = small();
        t.constructs.push(Construct {
            name: "PlatformService".into(),
            definition: String::new(),
            variables: vec![],
            span: Span::none(),
        });
        let d = validate(&t);
        assert!(!has_errors(&d));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
    }

    #[test]
    fn domain_invariants() {
        let mut t = small();
        let domain = &mut t.constructs[0].variables[0].domain;
        domain.ordering = Some(vec!["dependent".into()]);
        domain.absence = Some("missing".into());
        domain.values.push("dependent".into());
        let errors: Vec<_> = validate(&t)
            .into_iter()
            .filter(Diagnostic::is_error)
            .collect();
        assert_eq!(errors.len(), 3, "{errors:#?}");
    }

    #[test]
    fn strategic_wildcard_left_rejected_taxonomic_allowed() {
        let mut t = small();
        t.propositions[0].left = VariableRef::all("Team");
        assert!(has_errors(&validate(&t)));
        t.propositions[0].strategic = false;
        assert!(!has_errors(&validate(&t)));
    }

    #[test]
    fn duplicate_names_and_ordinals() {
        let mut t = small();
        let mut dup = t.propositions[0].clone();
        t.propositions.push(dup.clone());
        assert!(validate(&t)
            .iter()
            .any(|d| d.message.contains("duplicate proposition")));
        t.propositions.pop();
        dup.id = "Q1".into();
        t.propositions.push(dup);
        assert!(validate(&t)
            .iter()
            .any(|d| d.message.contains("hypothesis number 1")));
    }

    #[test]
    fn validate_is_pure() {
        let t = small();
        let before = t.clone();
        assert_eq!(validate(&t), validate(&t));
        assert_eq!(t, before);
    }

    #[test]
    fn resolve_single_wildcard_and_dangling() {
        let t = small();
        assert_eq!(
            resolve(&t, &VariableRef::variable("Team", "autonomy"))
                .unwrap()
                .len(),
            1
        );
        let all = resolve(&t, &VariableRef::all("Team")).unwrap();
        let names: Vec<_> = all.iter().map(|(_, v)| v.name.as_str()).collect();
        assert_eq!(names, ["autonomy", "sharing"]);
        let err = resolve(&t, &VariableRef::variable("Team", "nonexistent")).unwrap_err();
        assert_eq!(
            err,
            Error::Unresolved {
                name: "Team.nonexistent".into()
            }
        );
    }

    #[test]
    fn ordinal_prefers_trailing_number() {
        assert_eq!(ordinal_of("P28", 3), 28);
        assert_eq!(ordinal_of("alpha", 3), 4);
    }

    #[test]
    fn json_uses_stable_keys_and_round_trips() {
        let mut t = small();
        t.archetypes.push(Archetype {
            name: "A".into(),
            assignments: vec![Assignment::new("Team", "autonomy", "dependent")],
            span: Span::none(),
        });
        let json = t.to_json();
        for key in [
            "\"name\"",
            "\"constructs\"",
            "\"variables\"",
            "\"values\"",
            "\"absence\"",
            "\"propositions\"",
            "\"kind\"",
            "\"strategic\"",
            "\"left\"",
            "\"right\"",
            "\"text\"",
            "\"quotes\"",
            "\"archetypes\"",
            "\"assignments\"",
        ] {
            assert!(json.contains(key), "missing {key}");
        }
        assert!(json.contains("\"Team.autonomy\": \"dependent\""));
        assert_eq!(Theory::from_json(&json).unwrap(), t);
    }
}
