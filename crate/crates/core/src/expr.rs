//! Implication form of a hypothesis: `IF antecedent THEN consequent`, each
//! side an AND/OR tree of `variable=token` atoms.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Atom {
    /// `Construct.variable`
    pub variable: String,
    pub token: String,
}

impl Atom {
    pub fn new(variable: impl Into<String>, token: impl Into<String>) -> Self {
        Self {
            variable: variable.into(),
            token: token.into(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.variable, self.token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expr {
    Atom(Atom),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

impl Expr {
    pub fn atom(variable: impl Into<String>, token: impl Into<String>) -> Self {
        Expr::Atom(Atom::new(variable, token))
    }

    pub fn eval(&self, truth: &impl Fn(&Atom) -> bool) -> bool {
        match self {
            Expr::Atom(a) => truth(a),
            Expr::And(items) => items.iter().all(|e| e.eval(truth)),
            Expr::Or(items) => items.iter().any(|e| e.eval(truth)),
        }
    }

    /// Distinct atoms in first-occurrence order.
    pub fn atoms(&self) -> Vec<&Atom> {
        fn walk<'a>(e: &'a Expr, out: &mut Vec<&'a Atom>) {
            match e {
                Expr::Atom(a) => {
                    if !out.contains(&a) {
                        out.push(a);
                    }
                }
                Expr::And(items) | Expr::Or(items) => items.iter().for_each(|i| walk(i, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// The operands of a top-level OR, with nested ORs flattened by
    /// associativity. `None` when the expression is not an OR.
    pub fn disjuncts(&self) -> Option<Vec<Expr>> {
        fn flatten(e: &Expr, out: &mut Vec<Expr>) {
            match e {
                Expr::Or(items) => items.iter().for_each(|i| flatten(i, out)),
                other => out.push(other.clone()),
            }
        }
        match self {
            Expr::Or(_) => {
                let mut out = Vec::new();
                flatten(self, &mut out);
                Some(out)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, items: &[Expr], op: &str| -> fmt::Result {
            f.write_str("(")?;
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{item}")?;
            }
            f.write_str(")")
        };
        match self {
            Expr::Atom(a) => write!(f, "{a}"),
            Expr::And(items) => join(f, items, "AND"),
            Expr::Or(items) => join(f, items, "OR"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Implication {
    pub antecedent: Expr,
    pub consequent: Expr,
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IF {} THEN {}", self.antecedent, self.consequent)
    }
}
