//! Random theory generators and brute-force oracles shared by the property
//! and acceptance suites.

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::Index;

use theoryforge::expr::{Atom, Expr};
use theoryforge::metamodel::{
    Archetype, Assignment, Construct, IndicatorDomain, Proposition, PropositionKind, Quotation,
    Selector, Theory, Variable, VariableRef,
};
use theoryforge::refiner::{CellFate, Refinement, Status};

/// Token pool: bare identifiers, spaced phrases, punctuation and escapes.
const TOKENS: [&str; 8] = [
    "low",
    "full sharing",
    "self-organization",
    "x_1",
    "minimal or null sharing",
    "Größe",
    "say \"hi\"",
    "a\\b",
];

const TEXTS: [&str; 5] = [
    "plain text",
    "with \"quotes\" inside",
    "back\\slash",
    "two\nlines",
    "tab\there",
];

#[derive(Debug, Clone)]
struct VarSpec {
    tokens: Vec<usize>,
    ordering: Option<Vec<usize>>,
    absence: Option<Index>,
    label: Option<usize>,
}

fn var_spec() -> impl Strategy<Value = VarSpec> {
    Just((0..TOKENS.len()).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_flat_map(|pool| (1usize..=4).prop_map(move |n| pool[..n].to_vec()))
        .prop_flat_map(|tokens| {
            let n = tokens.len();
            (
                Just(tokens),
                prop::option::of(Just((0..n).collect::<Vec<_>>()).prop_shuffle()),
                prop::option::of(any::<Index>()),
                prop::option::of(0..TEXTS.len()),
            )
        })
        .prop_map(|(tokens, ordering, absence, label)| VarSpec {
            tokens,
            ordering,
            absence,
            label,
        })
}

#[derive(Debug, Clone)]
struct PropSpec {
    left: Index,
    right_var: Index,
    right_construct: Index,
    wildcard: bool,
    kind: usize,
    strategic: bool,
    quotes: Vec<(usize, usize)>,
    template: bool,
}

fn prop_spec() -> impl Strategy<Value = PropSpec> {
    (
        any::<Index>(),
        any::<Index>(),
        any::<Index>(),
        any::<bool>(),
        0usize..3,
        prop::bool::weighted(0.8),
        prop::collection::vec((0..TEXTS.len(), 0..TEXTS.len()), 0..=2),
        prop::bool::weighted(0.2),
    )
        .prop_map(
            |(left, right_var, right_construct, wildcard, kind, strategic, quotes, template)| {
                PropSpec {
                    left,
                    right_var,
                    right_construct,
                    wildcard,
                    kind,
                    strategic,
                    quotes,
                    template,
                }
            },
        )
}

/// Valid theories: 1 to 4 constructs of 0 to 3 variables with domains of 1
/// to 4 tokens, up to 5 propositions with single-variable left sides, and up
/// to 2 archetypes with in-domain assignments.
pub fn theory() -> impl Strategy<Value = Theory> {
    (
        prop::collection::vec(
            (
                prop::collection::vec(var_spec(), 0..=3),
                prop::option::of(0..TEXTS.len()),
            ),
            1..=4,
        ),
        prop::collection::vec(prop_spec(), 0..=5),
        prop::collection::vec(
            prop::collection::vec((any::<Index>(), any::<Index>()), 0..=3),
            0..=2,
        ),
        0..TEXTS.len(),
    )
        .prop_map(|(constructs, props, archetypes, name)| {
            build(constructs, props, archetypes, name)
        })
}

fn build(
    constructs: Vec<(Vec<VarSpec>, Option<usize>)>,
    props: Vec<PropSpec>,
    archetypes: Vec<Vec<(Index, Index)>>,
    name: usize,
) -> Theory {
    let mut theory = Theory::new(TEXTS[name]);
    for (ci, (vars, definition)) in constructs.into_iter().enumerate() {
        let variables = vars
            .into_iter()
            .enumerate()
            .map(|(vi, spec)| {
                let values: Vec<String> =
                    spec.tokens.iter().map(|&t| TOKENS[t].to_string()).collect();
                let ordering = spec
                    .ordering
                    .map(|perm| perm.iter().map(|&i| values[i].clone()).collect());
                let absence = spec.absence.map(|i| values[i.index(values.len())].clone());
                Variable {
                    name: format!("v{vi}"),
                    label: spec.label.map(|l| TEXTS[l].to_string()),
                    domain: IndicatorDomain {
                        values,
                        ordering,
                        absence,
                    },
                    span: Default::default(),
                }
            })
            .collect();
        theory.constructs.push(Construct {
            name: format!("C{ci}"),
            definition: definition.map(|d| TEXTS[d].to_string()).unwrap_or_default(),
            variables,
            span: Default::default(),
        });
    }
    let all_vars: Vec<(String, String)> = theory
        .constructs
        .iter()
        .flat_map(|c| {
            c.variables
                .iter()
                .map(move |v| (c.name.clone(), v.name.clone()))
        })
        .collect();
    if !all_vars.is_empty() {
        for (i, p) in props.into_iter().enumerate() {
            let (lc, lv) = &all_vars[p.left.index(all_vars.len())];
            let right = if p.wildcard {
                let c = &theory.constructs[p.right_construct.index(theory.constructs.len())];
                VariableRef::all(c.name.clone())
            } else {
                let (rc, rv) = &all_vars[p.right_var.index(all_vars.len())];
                VariableRef::variable(rc.clone(), rv.clone())
            };
            theory.propositions.push(Proposition {
                id: format!("P{}", i + 1),
                kind: [
                    PropositionKind::Categoric,
                    PropositionKind::Sequential,
                    PropositionKind::Determinant,
                ][p.kind],
                strategic: p.strategic,
                left: VariableRef::variable(lc.clone(), lv.clone()),
                right,
                text: TEXTS[i % TEXTS.len()].to_string(),
                quotes: p
                    .quotes
                    .iter()
                    .map(|&(s, e)| Quotation {
                        source: TEXTS[s].to_string(),
                        excerpt: TEXTS[e].to_string(),
                    })
                    .collect(),
                template_override: p
                    .template
                    .then(|| "When {left_var} is {left_ind}, {right_var} \"changes\".".to_string()),
                span: Default::default(),
            });
        }
        for (ai, picks) in archetypes.into_iter().enumerate() {
            let mut assignments: Vec<Assignment> = Vec::new();
            for (var, token) in picks {
                let (c, v) = &all_vars[var.index(all_vars.len())];
                if assignments
                    .iter()
                    .any(|a| &a.construct == c && &a.variable == v)
                {
                    continue;
                }
                let domain = &theory.variable(c, v).unwrap().domain.values;
                assignments.push(Assignment::new(
                    c.clone(),
                    v.clone(),
                    domain[token.index(domain.len())].clone(),
                ));
            }
            theory.archetypes.push(Archetype {
                name: format!("A{ai}"),
                assignments,
                span: Default::default(),
            });
        }
    }
    theory
}

/// Every (left token, right variable, right token) triple a proposition
/// relates, by direct nested iteration over the theory's declarations.
pub fn triples(theory: &Theory, proposition: &str) -> BTreeSet<(String, String, String)> {
    let p = theory
        .propositions
        .iter()
        .find(|p| p.id == proposition)
        .unwrap();
    let Selector::Variable(lv) = &p.left.selector else {
        panic!("wildcard left side");
    };
    let left = theory
        .constructs
        .iter()
        .find(|c| c.name == p.left.construct)
        .and_then(|c| c.variables.iter().find(|v| &v.name == lv))
        .unwrap();
    let mut out = BTreeSet::new();
    for lt in &left.domain.values {
        for c in theory
            .constructs
            .iter()
            .filter(|c| c.name == p.right.construct)
        {
            for v in &c.variables {
                let selected = match &p.right.selector {
                    Selector::All => true,
                    Selector::Variable(name) => &v.name == name,
                };
                if !selected {
                    continue;
                }
                for rt in &v.domain.values {
                    out.insert((lt.clone(), format!("{}.{}", c.name, v.name), rt.clone()));
                }
            }
        }
    }
    out
}

/// True when refinement must stop: a sequential strategic proposition whose
/// right side includes an unordered variable with more than one value.
pub fn needs_missing_order(theory: &Theory) -> bool {
    theory
        .propositions
        .iter()
        .filter(|p| p.strategic && p.kind == PropositionKind::Sequential)
        .any(|p| {
            theory
                .constructs
                .iter()
                .filter(|c| c.name == p.right.construct)
                .flat_map(|c| &c.variables)
                .filter(|v| match &p.right.selector {
                    Selector::All => true,
                    Selector::Variable(name) => &v.name == name,
                })
                .any(|v| v.domain.ordering.is_none() && v.domain.values.len() > 1)
        })
}

/// Every enumerated cell ends in exactly one terminal bucket, merged cells
/// are held by some hypothesis, and retained hypotheses only cite real cells.
pub fn check_conservation(r: &Refinement) -> Result<(), String> {
    let fates = r.cell_fates();
    if fates.len() != r.cell_count() {
        return Err(format!(
            "{} fates for {} cells",
            fates.len(),
            r.cell_count()
        ));
    }
    for (cell, fate) in &fates {
        let Some(fate) = fate else {
            return Err(format!("cell {cell} has no fate"));
        };
        if *fate == CellFate::MergedAway && !r.formed().any(|h| h.constituent_cells.contains(cell))
        {
            return Err(format!("merged cell {cell} is held by no hypothesis"));
        }
    }
    let ids: BTreeSet<&str> = fates.iter().map(|(c, _)| c.as_str()).collect();
    if ids.len() != fates.len() {
        return Err("duplicate cell ids".into());
    }
    for h in r
        .hypotheses
        .iter()
        .filter(|h| h.status != Status::DecomposedAway)
    {
        if let Some(bad) = h
            .constituent_cells
            .iter()
            .find(|c| !ids.contains(c.as_str()))
        {
            return Err(format!("{} cites unknown cell {bad}", h.id));
        }
    }
    Ok(())
}

const ATOM_VARS: [&str; 5] = ["A.a", "A.b", "B.c", "B.d", "C.e"];

/// AND/OR trees over at most 10 distinct atoms.
pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf =
        (0..ATOM_VARS.len(), 0..2usize).prop_map(|(v, t)| Expr::atom(ATOM_VARS[v], ["x", "y"][t]));
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..=4).prop_map(Expr::And),
            prop::collection::vec(inner, 1..=4).prop_map(Expr::Or),
        ]
    })
}

/// Compares two expressions over every assignment of the atoms either uses.
pub fn truth_table_equal(a: &Expr, b: &Expr) -> bool {
    let mut atoms: Vec<Atom> = a.atoms().into_iter().cloned().collect();
    for x in b.atoms() {
        if !atoms.contains(x) {
            atoms.push(x.clone());
        }
    }
    assert!(atoms.len() <= 10, "{} atoms", atoms.len());
    (0u32..1 << atoms.len()).all(|mask| {
        let truth = |x: &Atom| {
            let i = atoms.iter().position(|y| y == x).unwrap();
            mask & (1 << i) != 0
        };
        a.eval(&truth) == b.eval(&truth)
    })
}
