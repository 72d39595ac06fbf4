use std::fmt::Write;

use crate::metamodel::Theory;

use super::lexer::is_ident;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn token(s: &str) -> String {
    if is_ident(s) {
        s.to_string()
    } else {
        quote(s)
    }
}

/// Renders a theory in canonical `.theory` layout. Comments and the
/// original layout are not preserved; `parse(serialize(t)) == t` holds for
/// every valid theory.
pub fn serialize(theory: &Theory) -> String {
    let mut out = String::new();
    if theory.constructs.is_empty()
        && theory.propositions.is_empty()
        && theory.archetypes.is_empty()
    {
        let _ = writeln!(out, "theory {} {{ }}", quote(&theory.name));
        return out;
    }
    let _ = writeln!(out, "theory {} {{", quote(&theory.name));

    for c in &theory.constructs {
        out.push_str("  construct ");
        out.push_str(&c.name);
        if !c.definition.is_empty() {
            out.push(' ');
            out.push_str(&quote(&c.definition));
        }
        if c.variables.is_empty() {
            out.push_str(" { }\n");
            continue;
        }
        out.push_str(" {\n");
        for v in &c.variables {
            let _ = write!(out, "    variable {}", v.name);
            if let Some(label) = &v.label {
                let _ = write!(out, " {}", quote(label));
            }
            let values: Vec<String> = v.domain.values.iter().map(|s| token(s)).collect();
            let _ = writeln!(out, " {{ {} }}", values.join(", "));
            if let Some(order) = &v.domain.ordering {
                let order: Vec<String> = order.iter().map(|s| token(s)).collect();
                let _ = writeln!(out, "      ordering = {}", order.join(" < "));
            }
            if let Some(absence) = &v.domain.absence {
                let _ = writeln!(out, "      absent = {}", token(absence));
            }
        }
        out.push_str("  }\n");
    }

    for p in &theory.propositions {
        let flag = if p.strategic {
            "strategic"
        } else {
            "taxonomic"
        };
        let _ = writeln!(
            out,
            "  proposition {} {} {} relates {} -> {}",
            p.id, p.kind, flag, p.left, p.right
        );
        let _ = writeln!(out, "    text {}", quote(&p.text));
        for q in &p.quotes {
            let _ = writeln!(out, "    quote {} {}", quote(&q.source), quote(&q.excerpt));
        }
        if let Some(t) = &p.template_override {
            let _ = writeln!(out, "    template {}", quote(t));
        }
    }

    for a in &theory.archetypes {
        if a.assignments.is_empty() {
            let _ = writeln!(out, "  archetype {} {{ }}", a.name);
            continue;
        }
        let _ = writeln!(out, "  archetype {} {{", a.name);
        for assignment in &a.assignments {
            let _ = writeln!(
                out,
                "    {}.{} = {}",
                assignment.construct,
                assignment.variable,
                token(&assignment.token)
            );
        }
        out.push_str("  }\n");
    }

    out.push_str("}\n");
    out
}
