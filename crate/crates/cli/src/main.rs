use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use theoryforge::corpus::{corpus_source, load_corpus, NAMES};
use theoryforge::dsl::parse_named;
use theoryforge::enumerator::{enumerate, enumerate_all, render_table};
use theoryforge::instantiator::{check_archetype, select_for_archetype};
use theoryforge::metamodel::Archetype;
use theoryforge::protocol::emit_protocol;
use theoryforge::refiner::{Origin, Refinement, Status};
use theoryforge::rules::{parse_rules, ReviewRule};
use theoryforge::traceability::{build_graph, trace};
use theoryforge::{refine, validate, Diagnostic, Severity, Theory};

#[derive(Parser)]
#[command(
    name = "theoryforge",
    version,
    about = "Operationalize a declarative theory into testable hypotheses"
)]
struct Cli {
    /// Prefix output with a generation timestamp.
    #[arg(long, global = true)]
    stamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// A `.theory` file, or `.json` in the metamodel's JSON form.
    file: Option<PathBuf>,

    /// Use a bundled corpus instead of a file (available: t3).
    #[arg(long, value_name = "NAME")]
    corpus: Option<String>,
}

#[derive(Args)]
struct InputOpts {
    #[command(flatten)]
    input: Input,

    /// Input syntax; inferred from the file extension by default.
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Theory,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridFormat {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RefineFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProtocolFormat {
    Md,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a theory against the metamodel invariants.
    Validate(InputOpts),
    /// Count theory elements, optionally after refinement.
    Stats {
        #[command(flatten)]
        opts: InputOpts,
        /// Also run the refinement pipeline and report its counts.
        #[arg(long)]
        refined: bool,
        #[arg(long, value_name = "FILE", requires = "refined")]
        rules: Option<PathBuf>,
        /// With --refined, report how many hypotheses the archetype selects.
        #[arg(long, value_name = "NAME", requires = "refined")]
        archetype: Option<String>,
    },
    /// Build hypothesis grids for strategic propositions.
    Enumerate {
        #[command(flatten)]
        opts: InputOpts,
        #[arg(long, value_name = "ID")]
        proposition: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: GridFormat,
    },
    /// Prune, merge, decompose and review the hypothesis grids.
    Refine {
        #[command(flatten)]
        opts: InputOpts,
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: RefineFormat,
    },
    /// Select the retained hypotheses consistent with an archetype.
    Instantiate {
        #[command(flatten)]
        opts: InputOpts,
        #[arg(long, value_name = "NAME")]
        archetype: String,
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
    },
    /// Trace a hypothesis back to its proposition, variables and quotations.
    Trace {
        #[command(flatten)]
        opts: InputOpts,
        #[arg(long, value_name = "ID")]
        hypothesis: Option<String>,
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dot")]
        format: TraceFormat,
    },
    /// Emit the empirical testing protocol.
    Protocol {
        #[command(flatten)]
        opts: InputOpts,
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
        #[arg(long, value_name = "NAME")]
        archetype: Option<String>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: ProtocolFormat,
    },
}

/// Failure already reported on stderr; only the exit code remains.
#[derive(Debug)]
struct Reported;

impl std::fmt::Display for Reported {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("errors reported")
    }
}

impl std::error::Error for Reported {}

struct Style {
    color: bool,
}

impl Style {
    fn detect() -> Self {
        let disabled = std::env::var_os("THEORYFORGE_NO_COLOR").is_some_and(|v| !v.is_empty())
            || std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
        Style {
            color: !disabled && io::stderr().is_terminal(),
        }
    }

    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn diagnostic(&self, d: &Diagnostic) -> String {
        let (code, word) = match d.severity {
            Severity::Error => ("1;31", "error"),
            Severity::Warning => ("1;33", "warning"),
        };
        format!("{}: {}: {}", d.location, self.paint(code, word), d.message)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::detect();
    match run(cli, &style) {
        Ok(code) => code,
        Err(e) if e.is::<Reported>() => ExitCode::from(1),
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}: {e:#}", style.paint("1;31", "error"));
            ExitCode::from(1)
        }
    }
}

fn stamp_line(prefix: &str) -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("{prefix} generated at unix time {secs}\n")
}

fn emit(text: &str, stamp: Option<&str>) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    if let Some(prefix) = stamp {
        out.write_all(stamp_line(prefix).as_bytes())?;
    }
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    String::from_utf8(bytes).with_context(|| format!("{} is not valid UTF-8", path.display()))
}

fn load(opts: &InputOpts, style: &Style) -> anyhow::Result<Theory> {
    if let Some(name) = &opts.input.corpus {
        if corpus_source(name).is_err() {
            bail!("unknown corpus `{name}` (available: {})", NAMES.join(", "));
        }
        return Ok(load_corpus(name)?);
    }
    let path = opts.input.file.as_ref().expect("clap enforces one input");
    let text = read_text(path)?;
    let display = path.display().to_string();
    let json = match opts.input_format {
        Some(f) => f == InputFormat::Json,
        None => path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json")),
    };
    if json {
        return Theory::from_json(&text).with_context(|| format!("{display}: invalid theory JSON"));
    }
    parse_named(&display, &text).map_err(|errors| {
        for e in &errors {
            eprintln!(
                "{}: {}: {}",
                e.span,
                style.paint("1;31", "error"),
                e.message
            );
        }
        eprintln!("{} parse error(s)", errors.len());
        anyhow::Error::new(Reported)
    })
}

/// Loads and validates; warnings are left to `validate`, errors abort.
fn load_valid(opts: &InputOpts, style: &Style) -> anyhow::Result<Theory> {
    let theory = load(opts, style)?;
    let diagnostics = validate(&theory);
    if diagnostics.iter().any(Diagnostic::is_error) {
        for d in diagnostics.iter().filter(|d| d.is_error()) {
            eprintln!("{}", style.diagnostic(d));
        }
        return Err(Reported.into());
    }
    Ok(theory)
}

fn load_rules(path: Option<&Path>, style: &Style) -> anyhow::Result<Vec<ReviewRule>> {
    let Some(path) = path else {
        return Ok(Vec::new());
    };
    let text = read_text(path)?;
    parse_rules(&text).map_err(|errors| {
        for e in &errors {
            eprintln!("{}: {}: {e}", path.display(), style.paint("1;31", "error"));
        }
        anyhow::Error::new(Reported)
    })
}

fn archetype<'t>(theory: &'t Theory, name: &str, style: &Style) -> anyhow::Result<&'t Archetype> {
    let diagnostics = check_archetype(theory, name)?;
    for d in &diagnostics {
        eprintln!("{}", style.diagnostic(d));
    }
    if diagnostics.iter().any(Diagnostic::is_error) {
        return Err(Reported.into());
    }
    Ok(theory.archetype(name).expect("checked above"))
}

fn run(cli: Cli, style: &Style) -> anyhow::Result<ExitCode> {
    let stamp = cli.stamp;
    let text_stamp = stamp.then_some("#");
    match cli.command {
        Command::Validate(opts) => {
            let theory = load(&opts, style)?;
            let diagnostics = validate(&theory);
            let errors = diagnostics.iter().filter(|d| d.is_error()).count();
            let mut out = String::new();
            for d in &diagnostics {
                out.push_str(&d.to_string());
                out.push('\n');
            }
            out.push_str(&format!(
                "{}: {errors} error(s), {} warning(s)\n",
                theory.name,
                diagnostics.len() - errors
            ));
            emit(&out, text_stamp)?;
            Ok(if errors == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Stats {
            opts,
            refined,
            rules,
            archetype: archetype_name,
        } => {
            let theory = load_valid(&opts, style)?;
            let mut out = stats_line(&theory);
            if refined {
                let rules = load_rules(rules.as_deref(), style)?;
                let refinement = refine(&theory, &rules)?;
                out.push_str(&refined_stats(&refinement));
                if let Some(name) = archetype_name {
                    let a = archetype(&theory, &name, style)?;
                    let n = select_for_archetype(&refinement.hypotheses, &refinement.grids, a)
                        .iter()
                        .filter(|s| s.hypothesis.origin != Origin::Cell)
                        .count();
                    out.push_str(&format!("selected for {name}: {n}\n"));
                }
            }
            emit(&out, text_stamp)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Enumerate {
            opts,
            proposition,
            format,
        } => {
            let theory = load_valid(&opts, style)?;
            let grids = match proposition {
                Some(id) => vec![enumerate(&theory, &id)?],
                None => {
                    let all = enumerate_all(&theory);
                    if let Some((_, e)) = all.errors.into_iter().next() {
                        return Err(e.into());
                    }
                    for s in &all.skipped {
                        eprintln!("skipped {} ({})", s.proposition, s.reason);
                    }
                    all.grids
                }
            };
            match format {
                GridFormat::Json => {
                    let value = serde_json::to_string_pretty(&grids)?;
                    if stamp {
                        eprint!("{}", stamp_line("#"));
                    }
                    emit(&value, None)?;
                }
                GridFormat::Table => {
                    let tables: Vec<String> =
                        grids.iter().map(|g| render_table(g, &theory)).collect();
                    emit(&tables.join("\n"), text_stamp)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Refine {
            opts,
            rules,
            format,
        } => {
            let theory = load_valid(&opts, style)?;
            let rules = load_rules(rules.as_deref(), style)?;
            let refinement = refine(&theory, &rules)?;
            match format {
                RefineFormat::Json => {
                    if stamp {
                        eprint!("{}", stamp_line("#"));
                    }
                    emit(&refinement.to_json(), None)?;
                }
                RefineFormat::Table => emit(&refinement_table(&refinement), text_stamp)?,
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Instantiate {
            opts,
            archetype: name,
            rules,
        } => {
            let theory = load_valid(&opts, style)?;
            let a = archetype(&theory, &name, style)?;
            let rules = load_rules(rules.as_deref(), style)?;
            let refinement = refine(&theory, &rules)?;
            let selected = select_for_archetype(&refinement.hypotheses, &refinement.grids, a);
            let mut out = String::new();
            let mut n = 0;
            for s in selected
                .iter()
                .filter(|s| s.hypothesis.origin != Origin::Cell)
            {
                n += 1;
                out.push_str(&format!(
                    "{} [{}] {}\n",
                    s.hypothesis.id,
                    s.matched_cells.join(", "),
                    s.hypothesis.statement
                ));
            }
            out.push_str(&format!("{n} hypotheses selected for {name}\n"));
            emit(&out, text_stamp)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Trace {
            opts,
            hypothesis,
            rules,
            format,
        } => {
            let theory = load_valid(&opts, style)?;
            let rules = load_rules(rules.as_deref(), style)?;
            let refinement = refine(&theory, &rules)?;
            let graph = build_graph(&theory, &refinement)?;
            let dot_stamp = stamp.then_some("//");
            match hypothesis {
                Some(id) => {
                    let t = trace(&graph, &id)?;
                    for w in &t.warnings {
                        eprintln!("{}: {}", style.paint("1;33", "warning"), w);
                    }
                    match format {
                        TraceFormat::Dot => emit(&t.to_dot(), dot_stamp)?,
                        TraceFormat::Json => {
                            if stamp {
                                eprint!("{}", stamp_line("#"));
                            }
                            emit(&t.to_json(), None)?
                        }
                    }
                }
                None => match format {
                    TraceFormat::Dot => emit(&graph.to_dot(&theory.name), dot_stamp)?,
                    TraceFormat::Json => {
                        if stamp {
                            eprint!("{}", stamp_line("#"));
                        }
                        emit(&graph.to_json(), None)?
                    }
                },
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Protocol {
            opts,
            rules,
            archetype: name,
            out,
            format,
        } => {
            let theory = load_valid(&opts, style)?;
            let rules = load_rules(rules.as_deref(), style)?;
            let refinement = refine(&theory, &rules)?;
            let a = match &name {
                Some(n) => Some(archetype(&theory, n, style)?),
                None => None,
            };
            let doc = emit_protocol(&theory, &refinement, a);
            let mut text = match format {
                ProtocolFormat::Md => doc.to_markdown(),
                ProtocolFormat::Json => doc.to_json() + "\n",
            };
            if stamp {
                match format {
                    ProtocolFormat::Md => {
                        text = format!("<!-- {} -->\n{text}", stamp_line("").trim())
                    }
                    ProtocolFormat::Json => eprint!("{}", stamp_line("#")),
                }
            }
            match out {
                Some(path) => fs::write(&path, text)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => emit(&text, None)?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn stats_line(theory: &Theory) -> String {
    let specified = theory
        .constructs
        .iter()
        .filter(|c| !c.variables.is_empty())
        .count();
    let strategic = theory.propositions.iter().filter(|p| p.strategic).count();
    let mut out = format!(
        "constructs: {specified}, variables: {}, indicator values: {}, propositions: {} (strategic {strategic}, taxonomic {})\n",
        theory.variable_count(),
        theory.indicator_count(),
        theory.propositions.len(),
        theory.propositions.len() - strategic
    );
    let taxonomy_only = theory.constructs.len() - specified;
    if taxonomy_only > 0 {
        out.push_str(&format!("taxonomy-only constructs: {taxonomy_only}\n"));
    }
    out
}

fn refined_stats(r: &Refinement) -> String {
    let mut by_status = std::collections::BTreeMap::new();
    for h in &r.hypotheses {
        *by_status.entry(h.status).or_insert(0usize) += 1;
    }
    let statuses: Vec<String> = Status::ALL
        .iter()
        .map(|s| format!("{} {}", s.as_str(), by_status.get(s).copied().unwrap_or(0)))
        .collect();
    format!(
        "cells: {}\nhypotheses before review: {}\nhypotheses after review: {}\nrecords: {}\n",
        r.cell_count(),
        r.candidates_before_review,
        r.retained().count(),
        statuses.join(", ")
    )
}

fn refinement_table(r: &Refinement) -> String {
    let rows: Vec<[String; 4]> = r
        .formed()
        .map(|h| {
            [
                h.id.clone(),
                h.status.as_str().to_string(),
                h.constituent_cells.join(", "),
                h.statement.clone(),
            ]
        })
        .collect();
    let header = ["id", "status", "cells", "statement"].map(String::from);
    let mut widths = header.clone().map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |row: &[String; 4]| {
        let mut s = String::new();
        for (i, (cell, w)) in row.iter().zip(widths).enumerate() {
            if i == 3 {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<w$}  "));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(&header);
    for row in &rows {
        out.push_str(&line(row));
    }
    for e in &r.excluded {
        out.push_str(&format!("excluded {}: {}\n", e.proposition, e.reason));
    }
    for a in &r.audit {
        out.push_str(&format!(
            "rule line {}: {} -> {}\n",
            a.line,
            a.rule,
            if a.matched.is_empty() {
                "no match".to_string()
            } else {
                a.matched.join(", ")
            }
        ));
    }
    out
}
