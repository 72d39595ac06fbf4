//! The chain-of-evidence graph linking hypotheses back to the theory.
//!
//! Edges point from a derived element to the element that grounds it:
//!
//! | edge           | from        | to          |
//! |----------------|-------------|-------------|
//! | `houses`       | variable    | construct   |
//! | `measures`     | indicator   | variable    |
//! | `relates`      | proposition | variable (or construct, for a side with no variables) |
//! | `grounds`      | proposition | quotation   |
//! | `derives_from` | cell        | proposition |
//! | `derives_from` | hypothesis  | cell (single-cell) or parent hypothesis (disjunct) |
//! | `merges`       | hypothesis  | cell (transition) |
//! | `instantiates` | cell, archetype | indicator |
//!
//! A trace walks these edges breadth-first from a hypothesis, except
//! `relates`: a proposition's full scope is not evidence for one hypothesis.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metamodel::{resolve, Theory};
use crate::refiner::{Origin, Refinement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Construct,
    Variable,
    Indicator,
    Proposition,
    Quotation,
    Cell,
    Hypothesis,
    Archetype,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Construct => "construct",
            NodeKind::Variable => "variable",
            NodeKind::Indicator => "indicator",
            NodeKind::Proposition => "proposition",
            NodeKind::Quotation => "quotation",
            NodeKind::Cell => "cell",
            NodeKind::Hypothesis => "hypothesis",
            NodeKind::Archetype => "archetype",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Houses,
    Measures,
    Relates,
    Grounds,
    DerivesFrom,
    Merges,
    Instantiates,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Houses => "houses",
            EdgeKind::Measures => "measures",
            EdgeKind::Relates => "relates",
            EdgeKind::Grounds => "grounds",
            EdgeKind::DerivesFrom => "derives_from",
            EdgeKind::Merges => "merges",
            EdgeKind::Instantiates => "instantiates",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub attributes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TraceGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    #[serde(skip)]
    index: HashMap<String, usize>,
    #[serde(skip)]
    outgoing: HashMap<String, Vec<usize>>,
}

pub fn construct_id(name: &str) -> String {
    format!("construct:{name}")
}
pub fn variable_id(construct: &str, variable: &str) -> String {
    format!("variable:{construct}.{variable}")
}
pub fn indicator_id(construct: &str, variable: &str, token: &str) -> String {
    format!("indicator:{construct}.{variable}={token}")
}
pub fn proposition_id(id: &str) -> String {
    format!("proposition:{id}")
}
pub fn quotation_id(proposition: &str, n: usize) -> String {
    format!("quotation:{proposition}#{n}")
}
pub fn cell_id(id: &str) -> String {
    format!("cell:{id}")
}
pub fn hypothesis_id(id: &str) -> String {
    format!("hypothesis:{id}")
}
pub fn archetype_id(name: &str) -> String {
    format!("archetype:{name}")
}

impl TraceGraph {
    fn add_node(
        &mut self,
        id: String,
        kind: NodeKind,
        label: impl Into<String>,
    ) -> Result<&mut Node> {
        if self.index.contains_key(&id) {
            return Err(Error::Graph(format!("duplicate node `{id}`")));
        }
        self.index.insert(id.clone(), self.nodes.len());
        self.nodes.push(Node {
            id,
            kind,
            label: label.into(),
            attributes: BTreeMap::new(),
        });
        Ok(self.nodes.last_mut().expect("just pushed"))
    }

    fn add_edge(&mut self, from: String, to: String, kind: EdgeKind) -> Result<()> {
        for end in [&from, &to] {
            if !self.index.contains_key(end) {
                return Err(Error::Graph(format!("dangling reference `{end}`")));
            }
        }
        self.outgoing
            .entry(from.clone())
            .or_default()
            .push(self.edges.len());
        self.edges.push(Edge { from, to, kind });
        Ok(())
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn outgoing(&self, id: &str) -> impl Iterator<Item = &Edge> {
        self.outgoing
            .get(id)
            .into_iter()
            .flatten()
            .map(|&i| &self.edges[i])
    }

    pub fn count(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    /// Nodes reachable from `start` along trace edges, in BFS order with
    /// ties broken by node id. Each entry carries its distance.
    fn bfs(&self, start: &str) -> Vec<(usize, String)> {
        let mut seen = BTreeSet::new();
        let mut order = Vec::new();
        let mut frontier = vec![start.to_string()];
        seen.insert(start.to_string());
        let mut depth = 0;
        while !frontier.is_empty() {
            frontier.sort();
            let mut next = Vec::new();
            for id in &frontier {
                order.push((depth, id.clone()));
                for e in self.outgoing(id).filter(|e| e.kind != EdgeKind::Relates) {
                    if seen.insert(e.to.clone()) {
                        next.push(e.to.clone());
                    }
                }
            }
            frontier = next;
            depth += 1;
        }
        order
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialization cannot fail")
    }

    pub fn to_dot(&self, name: &str) -> String {
        render_dot(name, self.nodes.iter(), self.edges.iter())
    }

    fn check_invariants(&self) -> Result<()> {
        // derives_from / merges must be acyclic (Kahn's algorithm).
        let lineage: Vec<&Edge> = self
            .edges
            .iter()
            .filter(|e| matches!(e.kind, EdgeKind::DerivesFrom | EdgeKind::Merges))
            .collect();
        let mut indegree: HashMap<&str, usize> =
            self.nodes.iter().map(|n| (n.id.as_str(), 0)).collect();
        let mut successors: HashMap<&str, Vec<&str>> = HashMap::new();
        for e in &lineage {
            *indegree
                .get_mut(e.to.as_str())
                .expect("edge ends are nodes") += 1;
            successors.entry(e.from.as_str()).or_default().push(&e.to);
        }
        let mut ready: VecDeque<&str> = indegree
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(id, _)| *id)
            .collect();
        let mut removed = 0;
        while let Some(id) = ready.pop_front() {
            removed += 1;
            for next in successors.get(id).into_iter().flatten() {
                let d = indegree.get_mut(next).expect("edge ends are nodes");
                *d -= 1;
                if *d == 0 {
                    ready.push_back(next);
                }
            }
        }
        if removed != self.nodes.len() {
            return Err(Error::Graph(
                "derives_from/merges edges form a cycle".into(),
            ));
        }
        for node in self.nodes.iter().filter(|n| n.kind == NodeKind::Hypothesis) {
            let reached = self.bfs(&node.id);
            let has = |kind: NodeKind| {
                reached
                    .iter()
                    .any(|(_, id)| self.node(id).is_some_and(|n| n.kind == kind))
            };
            if !has(NodeKind::Proposition) || !has(NodeKind::Construct) {
                return Err(Error::Graph(format!(
                    "`{}` does not reach a proposition and a construct",
                    node.id
                )));
            }
        }
        Ok(())
    }
}

fn dot_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn render_dot<'a>(
    name: &str,
    nodes: impl Iterator<Item = &'a Node>,
    edges: impl Iterator<Item = &'a Edge>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", dot_escape(name));
    let _ = writeln!(out, "  rankdir=LR;");
    for n in nodes {
        let _ = write!(
            out,
            "  {} [kind={}, label={}",
            dot_escape(&n.id),
            dot_escape(n.kind.as_str()),
            dot_escape(&n.label)
        );
        for (k, v) in &n.attributes {
            let _ = write!(out, ", {}={}", k, dot_escape(v));
        }
        out.push_str("];\n");
    }
    for e in edges {
        let _ = writeln!(
            out,
            "  {} -> {} [kind={}];",
            dot_escape(&e.from),
            dot_escape(&e.to),
            dot_escape(e.kind.as_str())
        );
    }
    out.push_str("}\n");
    out
}

/// Builds the graph from a theory and its refinement. Only hypothesis-level
/// records become hypothesis nodes; cell-level records contribute their
/// status to the cell node.
pub fn build_graph(theory: &Theory, refinement: &Refinement) -> Result<TraceGraph> {
    let mut g = TraceGraph::default();

    for c in &theory.constructs {
        g.add_node(construct_id(&c.name), NodeKind::Construct, &c.name)?;
    }
    for c in &theory.constructs {
        for v in &c.variables {
            g.add_node(
                variable_id(&c.name, &v.name),
                NodeKind::Variable,
                v.display_name(),
            )?;
            g.add_edge(
                variable_id(&c.name, &v.name),
                construct_id(&c.name),
                EdgeKind::Houses,
            )?;
            for token in &v.domain.values {
                let id = indicator_id(&c.name, &v.name, token);
                let node = g.add_node(id.clone(), NodeKind::Indicator, token)?;
                if v.domain.is_absence(token) {
                    node.attributes.insert("absence".into(), "true".into());
                }
                g.add_edge(id, variable_id(&c.name, &v.name), EdgeKind::Measures)?;
            }
        }
    }

    for p in &theory.propositions {
        let pid = proposition_id(&p.id);
        let node = g.add_node(pid.clone(), NodeKind::Proposition, &p.id)?;
        node.attributes
            .insert("proposition_kind".into(), p.kind.to_string());
        node.attributes
            .insert("strategic".into(), p.strategic.to_string());
        node.attributes.insert("text".into(), p.text.clone());
        for side in [&p.left, &p.right] {
            let resolved = resolve(theory, side).map_err(|e| Error::Graph(e.to_string()))?;
            if resolved.is_empty() {
                g.add_edge(
                    pid.clone(),
                    construct_id(&side.construct),
                    EdgeKind::Relates,
                )?;
            }
            for (c, v) in resolved {
                g.add_edge(
                    pid.clone(),
                    variable_id(&c.name, &v.name),
                    EdgeKind::Relates,
                )?;
            }
        }
        for (i, q) in p.quotes.iter().enumerate() {
            let qid = quotation_id(&p.id, i + 1);
            let node = g.add_node(qid.clone(), NodeKind::Quotation, &q.excerpt)?;
            node.attributes.insert("source".into(), q.source.clone());
            g.add_edge(pid.clone(), qid, EdgeKind::Grounds)?;
        }
    }

    for grid in &refinement.grids {
        for cell in &grid.cells {
            let id = cell_id(&cell.id);
            g.add_node(id.clone(), NodeKind::Cell, &cell.id)?;
            g.add_edge(
                id.clone(),
                proposition_id(&cell.proposition),
                EdgeKind::DerivesFrom,
            )?;
            for b in cell.bindings() {
                g.add_edge(
                    id.clone(),
                    indicator_id(&b.construct, &b.variable, &b.token),
                    EdgeKind::Instantiates,
                )?;
            }
        }
    }
    for record in refinement
        .hypotheses
        .iter()
        .filter(|h| h.origin == Origin::Cell)
    {
        let id = cell_id(&record.id);
        let index = *g
            .index
            .get(&id)
            .ok_or_else(|| Error::Graph(format!("dangling reference `{id}`")))?;
        let node = &mut g.nodes[index];
        node.attributes
            .insert("status".into(), record.status.to_string());
        if let Some(r) = &record.rationale {
            node.attributes.insert("rationale".into(), r.clone());
        }
    }

    let formed: Vec<_> = refinement.formed().collect();
    for h in &formed {
        let node = g.add_node(hypothesis_id(&h.id), NodeKind::Hypothesis, &h.id)?;
        node.attributes
            .insert("status".into(), h.status.to_string());
        node.attributes
            .insert("statement".into(), h.statement.clone());
        if let Some(r) = &h.rationale {
            node.attributes.insert("rationale".into(), r.clone());
        }
        if let Some(r) = &h.refuted {
            node.attributes.insert("refuted".into(), r.clone());
        }
    }
    for h in &formed {
        let hid = hypothesis_id(&h.id);
        match h.origin {
            Origin::Disjunct => {
                let parent =
                    h.id.rsplit_once('.').map(|(p, _)| p).ok_or_else(|| {
                        Error::Graph(format!("disjunct `{}` has no parent id", h.id))
                    })?;
                g.add_edge(hid, hypothesis_id(parent), EdgeKind::DerivesFrom)?;
            }
            Origin::Transition => {
                for c in &h.constituent_cells {
                    g.add_edge(hid.clone(), cell_id(c), EdgeKind::Merges)?;
                }
            }
            _ => {
                for c in &h.constituent_cells {
                    g.add_edge(hid.clone(), cell_id(c), EdgeKind::DerivesFrom)?;
                }
            }
        }
    }

    for a in &theory.archetypes {
        let aid = archetype_id(&a.name);
        g.add_node(aid.clone(), NodeKind::Archetype, &a.name)?;
        for assignment in &a.assignments {
            g.add_edge(
                aid.clone(),
                indicator_id(
                    &assignment.construct,
                    &assignment.variable,
                    &assignment.token,
                ),
                EdgeKind::Instantiates,
            )?;
        }
    }

    g.check_invariants()?;
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub depth: usize,
    pub node: Node,
}

/// Breadth-first chain from a hypothesis to the theory elements behind it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub hypothesis: String,
    pub steps: Vec<TraceStep>,
    pub edges: Vec<Edge>,
    pub warnings: Vec<String>,
}

impl Trace {
    pub fn contains(&self, node_id: &str) -> bool {
        self.steps.iter().any(|s| s.node.id == node_id)
    }

    pub fn nodes_of(&self, kind: NodeKind) -> impl Iterator<Item = &Node> {
        self.steps
            .iter()
            .map(|s| &s.node)
            .filter(move |n| n.kind == kind)
    }

    pub fn to_dot(&self) -> String {
        render_dot(
            &format!("trace {}", self.hypothesis),
            self.steps.iter().map(|s| &s.node),
            self.edges.iter(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serialization cannot fail")
    }

    /// One line per BFS level: `H1.1 <- h1.1, h1.4 <- ...`.
    pub fn summary(&self) -> String {
        let mut levels: Vec<Vec<&str>> = Vec::new();
        for s in &self.steps {
            if levels.len() <= s.depth {
                levels.push(Vec::new());
            }
            levels[s.depth].push(&s.node.id);
        }
        levels
            .iter()
            .map(|l| l.join(", "))
            .collect::<Vec<_>>()
            .join(" <- ")
    }
}

pub fn trace(graph: &TraceGraph, hypothesis: &str) -> Result<Trace> {
    let start = hypothesis_id(hypothesis);
    if graph.node(&start).is_none() {
        return Err(Error::UnknownHypothesis(hypothesis.to_string()));
    }
    let order = graph.bfs(&start);
    let visited: BTreeSet<&str> = order.iter().map(|(_, id)| id.as_str()).collect();
    let mut edges: Vec<Edge> = order
        .iter()
        .flat_map(|(_, id)| graph.outgoing(id))
        .filter(|e| e.kind != EdgeKind::Relates && visited.contains(e.to.as_str()))
        .cloned()
        .collect();
    edges.sort();
    edges.dedup();

    let steps: Vec<TraceStep> = order
        .into_iter()
        .map(|(depth, id)| TraceStep {
            depth,
            node: graph.node(&id).expect("visited nodes exist").clone(),
        })
        .collect();
    let mut warnings = Vec::new();
    for p in steps
        .iter()
        .filter(|s| s.node.kind == NodeKind::Proposition)
    {
        if !graph
            .outgoing(&p.node.id)
            .any(|e| e.kind == EdgeKind::Grounds)
        {
            warnings.push(format!(
                "{} has no grounding quotations; the trace ends there",
                p.node.label
            ));
        }
    }
    Ok(Trace {
        hypothesis: hypothesis.to_string(),
        steps,
        edges,
        warnings,
    })
}
