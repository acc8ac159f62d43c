//! The command-line front end as a library: each command takes a
//! [`RunConfig`] and returns an [`Outcome`] holding the exit code and the
//! text for standard output and standard error. `src/bin/dln.rs` only parses
//! arguments and prints the outcome.
//!
//! Exit codes: 0 entailed (or no problem found), 1 not entailed (or an
//! inconsistent prototype, or a failed postulate instance), 2 input error,
//! 3 resource limit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::classical::{ClassicalError, ReasonerStats, DEFAULT_NODE_BUDGET};
use crate::defeasible::{DefeasibleError, Engine, Entailment, Options, PriorityMode};
use crate::model::{Axiom, Concept, KnowledgeBase};
use crate::parser::{parse_document, parse_queries, print_axiom, print_concept, ParseError};
use crate::postulates::{self, PostulateError, Profile, Rule, SweepSummary};

pub const EXIT_ENTAILED: i32 = 0;
pub const EXIT_NOT_ENTAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_RESOURCE_LIMIT: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub kb_path: Option<PathBuf>,
    pub priority_mode: PriorityMode,
    pub nonempty_prototypes: bool,
    pub output_format: OutputFormat,
    pub node_budget: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            kb_path: None,
            priority_mode: PriorityMode::Specificity,
            nonempty_prototypes: false,
            output_format: OutputFormat::Text,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl RunConfig {
    pub fn with_kb(path: impl Into<PathBuf>) -> Self {
        Self {
            kb_path: Some(path.into()),
            ..Self::default()
        }
    }

    pub fn options(&self) -> Options {
        Options {
            priority: self.priority_mode,
            node_budget: self.node_budget,
            assume_nonempty_prototypes: self.nonempty_prototypes,
        }
    }
}

/// Where the queries come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuerySource {
    Text(String),
    /// One query per line; blank lines and `#` comments are skipped.
    File(PathBuf),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("no knowledge base given (use --kb PATH)")]
    MissingKb,
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{origin}:{error}")]
    Parse { origin: String, error: ParseError },
    #[error("{0}")]
    Defeasible(#[from] DefeasibleError),
    #[error("{0}")]
    Postulate(#[from] PostulateError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let limit = |e: &DefeasibleError| {
            matches!(e, DefeasibleError::Classical(ClassicalError::ResourceLimit { .. }))
        };
        match self {
            CliError::Defeasible(e) if limit(e) => EXIT_RESOURCE_LIMIT,
            CliError::Postulate(PostulateError::Defeasible(e)) if limit(e) => EXIT_RESOURCE_LIMIT,
            _ => EXIT_INPUT_ERROR,
        }
    }
}

impl From<CliError> for Outcome {
    fn from(e: CliError) -> Self {
        Outcome {
            exit_code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// A parsed knowledge base with a display label for every defeasible
/// inclusion: its line in the source file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedKb {
    pub kb: KnowledgeBase,
    pub labels: Vec<usize>,
}

impl LoadedKb {
    pub fn parse(source: &str, origin: &str) -> Result<LoadedKb, CliError> {
        let doc = parse_document(source).map_err(|error| CliError::Parse {
            origin: origin.to_string(),
            error,
        })?;
        let mut kb = KnowledgeBase::new();
        let mut labels = Vec::new();
        for located in doc {
            let is_di = located.value.is_defeasible();
            if kb.add(located.value) && is_di {
                labels.push(located.location.line);
            }
        }
        Ok(LoadedKb { kb, labels })
    }

    pub fn load(path: &Path) -> Result<LoadedKb, CliError> {
        let source = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&source, &path.display().to_string())
    }

    fn label(&self, index: usize) -> usize {
        self.labels.get(index).copied().unwrap_or(index + 1)
    }
}

fn load_config_kb(config: &RunConfig) -> Result<LoadedKb, CliError> {
    let path = config.kb_path.as_ref().ok_or(CliError::MissingKb)?;
    LoadedKb::load(path)
}

fn load_queries(source: &QuerySource) -> Result<Vec<Axiom>, CliError> {
    let (text, origin) = match source {
        QuerySource::Text(t) => (t.clone(), "query".to_string()),
        QuerySource::File(p) => (
            std::fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.clone(),
                source,
            })?,
            p.display().to_string(),
        ),
    };
    let queries = parse_queries(&text).map_err(|error| CliError::Parse {
        origin: origin.clone(),
        error,
    })?;
    Ok(queries.into_iter().map(|q| q.value).collect())
}

/// `N SI` for a named concept, `N(A and B)` otherwise.
pub fn short_normal(n: &Concept) -> String {
    match n {
        Concept::Normal(arg) if matches!(**arg, Concept::Atomic(_)) => {
            format!("N {}", print_concept(arg))
        }
        other => print_concept(other),
    }
}

// ---------------------------------------------------------------------------
// JSON report

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectedEntry {
    pub di: usize,
    pub normality: String,
    pub axiom: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverrideEntry {
    pub di: usize,
    pub normality: String,
    pub reason: ReasonEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReasonEntry {
    pub unsatisfiable: String,
    pub checked: Vec<String>,
}

/// The machine-readable answer to one query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntailmentReport {
    pub query: String,
    pub entailed: bool,
    pub sigma: Vec<String>,
    pub linearization: Vec<usize>,
    pub selected: Vec<SelectedEntry>,
    pub overridden: Vec<OverrideEntry>,
    pub stats: ReasonerStats,
}

impl EntailmentReport {
    pub fn new(loaded: &LoadedKb, e: &Entailment, stats: ReasonerStats) -> Self {
        let r = &e.reduction;
        EntailmentReport {
            query: print_axiom(&e.query),
            entailed: e.entailed,
            sigma: r.sigma.iter().map(print_concept).collect(),
            linearization: r.linearization.iter().map(|&i| loaded.label(i)).collect(),
            selected: r
                .selected
                .iter()
                .map(|t| SelectedEntry {
                    di: loaded.label(t.index),
                    normality: print_concept(&t.normality),
                    axiom: print_axiom(&t.axiom),
                })
                .collect(),
            overridden: r
                .overridden
                .iter()
                .map(|o| OverrideEntry {
                    di: loaded.label(o.translated.index),
                    normality: print_concept(&o.translated.normality),
                    reason: ReasonEntry {
                        unsatisfiable: print_concept(&o.reason.unsatisfiable),
                        checked: o.reason.checked.iter().map(print_axiom).collect(),
                    },
                })
                .collect(),
            stats,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn answer(config: &RunConfig, loaded: &LoadedKb, query: &Axiom) -> Result<(Entailment, ReasonerStats), CliError> {
    let engine = Engine::new(config.options());
    let e = engine.n_entails(&loaded.kb, query)?;
    Ok((e, engine.stats()))
}

/// Answers the queries on scoped threads; results come back in input order.
fn answer_all(
    config: &RunConfig,
    loaded: &LoadedKb,
    queries: &[Axiom],
) -> Vec<Result<(Entailment, ReasonerStats), CliError>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    if workers == 1 || queries.len() < 2 {
        return queries.iter().map(|q| answer(config, loaded, q)).collect();
    }
    let chunk = queries.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = queries
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || part.iter().map(|q| answer(config, loaded, q)).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("query worker panicked"))
            .collect()
    })
}

// ---------------------------------------------------------------------------
// commands

/// `dln entails`: answers each query; exit 0 only if all are entailed.
pub fn cmd_entails(config: &RunConfig, queries: &QuerySource) -> Outcome {
    run(|| {
        let loaded = load_config_kb(config)?;
        let queries = load_queries(queries)?;
        let mut reports = Vec::new();
        let mut text = String::new();
        for result in answer_all(config, &loaded, &queries) {
            let (e, stats) = result?;
            write_text_report(&mut text, &loaded, &e);
            reports.push(EntailmentReport::new(&loaded, &e, stats));
        }
        let all = reports.iter().all(|r| r.entailed);
        let stdout = match config.output_format {
            OutputFormat::Json if reports.len() == 1 => to_json(&reports[0]),
            OutputFormat::Json => to_json(&reports),
            OutputFormat::Text => text,
        };
        Ok(Outcome {
            exit_code: if all { EXIT_ENTAILED } else { EXIT_NOT_ENTAILED },
            stdout,
            stderr: String::new(),
        })
    })
}

fn write_text_report(out: &mut String, loaded: &LoadedKb, e: &Entailment) {
    let r = &e.reduction;
    let verdict = if e.entailed { "ENTAILED" } else { "NOT ENTAILED" };
    let _ = writeln!(out, "{verdict}: {}", print_axiom(&e.query));
    let sigma: Vec<String> = r.sigma.iter().map(short_normal).collect();
    let _ = writeln!(out, "  sigma: {}", or_none(&sigma.join(", ")));
    let overridden: Vec<String> = r
        .overridden
        .iter()
        .map(|o| {
            format!(
                "({})^{{{}}}",
                loaded.label(o.translated.index),
                short_normal(&o.translated.normality)
            )
        })
        .collect();
    let _ = writeln!(out, "  overridden: {}", or_none(&overridden.join(", ")));
}

fn or_none(s: &str) -> &str {
    if s.is_empty() {
        "none"
    } else {
        s
    }
}

/// `dln explain`: the reduction ledger for one query, decision by decision.
pub fn cmd_explain(config: &RunConfig, query: &QuerySource) -> Outcome {
    run(|| {
        let loaded = load_config_kb(config)?;
        let queries = load_queries(query)?;
        let mut out = String::new();
        let mut all = true;
        let mut reports = Vec::new();
        for q in &queries {
            let (e, stats) = answer(config, &loaded, q)?;
            all &= e.entailed;
            if config.output_format == OutputFormat::Text {
                write_explanation(&mut out, &loaded, &e);
            }
            reports.push(EntailmentReport::new(&loaded, &e, stats));
        }
        if config.output_format == OutputFormat::Json {
            out = if reports.len() == 1 {
                to_json(&reports[0])
            } else {
                to_json(&reports)
            };
        }
        Ok(Outcome {
            exit_code: if all { EXIT_ENTAILED } else { EXIT_NOT_ENTAILED },
            stdout: out,
            stderr: String::new(),
        })
    })
}

fn write_explanation(out: &mut String, loaded: &LoadedKb, e: &Entailment) {
    let r = &e.reduction;
    let _ = writeln!(out, "query: {}", print_axiom(&e.query));
    let sigma: Vec<String> = r.sigma.iter().map(short_normal).collect();
    let _ = writeln!(out, "sigma: {}", or_none(&sigma.join(", ")));
    let order: Vec<String> = r
        .linearization
        .iter()
        .map(|&i| format!("({})", loaded.label(i)))
        .collect();
    let _ = writeln!(out, "linearization: {}", or_none(&order.join(" ")));
    for &i in &r.linearization {
        let di = &loaded.kb.defeasible()[i];
        let _ = writeln!(
            out,
            "({}) {}",
            loaded.label(i),
            print_axiom(&Axiom::DefeasibleCI(di.clone()))
        );
        for n in r.sigma.iter() {
            let tag = format!("({})^{{{}}}", loaded.label(i), short_normal(n));
            if let Some(t) = r.selected.iter().find(|t| t.index == i && &t.normality == n) {
                let _ = writeln!(out, "  {tag} KEPT: {}", print_axiom(&t.axiom));
            } else if let Some(o) = r
                .overridden
                .iter()
                .find(|o| o.translated.index == i && &o.translated.normality == n)
            {
                let _ = writeln!(out, "  {tag} OVERRIDDEN: {}", print_axiom(&o.translated.axiom));
                let _ = writeln!(
                    out,
                    "    {} <= Bot follows from:",
                    print_concept(&o.reason.unsatisfiable)
                );
                for a in &o.reason.checked {
                    let _ = writeln!(out, "      {}", print_axiom(a));
                }
            }
        }
    }
    let verdict = if e.entailed { "ENTAILED" } else { "NOT ENTAILED" };
    let _ = writeln!(out, "{verdict}");
}

#[derive(Serialize)]
struct PrototypeJson {
    inconsistent: Vec<String>,
    consistent: Vec<String>,
    stats: ReasonerStats,
}

/// `dln prototypes`: exit 0 if no prototype is inconsistent, 1 otherwise.
pub fn cmd_prototypes(config: &RunConfig) -> Outcome {
    run(|| {
        let loaded = load_config_kb(config)?;
        let engine = Engine::new(config.options());
        let report = engine.inconsistent_prototypes(&loaded.kb, None)?;
        let json = PrototypeJson {
            inconsistent: report.inconsistent.iter().map(print_concept).collect(),
            consistent: report.consistent.iter().map(print_concept).collect(),
            stats: engine.stats(),
        };
        let stdout = match config.output_format {
            OutputFormat::Json => to_json(&json),
            OutputFormat::Text => {
                let mut out = String::new();
                for n in &json.inconsistent {
                    let _ = writeln!(out, "INCONSISTENT: {n}");
                }
                for n in &json.consistent {
                    let _ = writeln!(out, "consistent: {n}");
                }
                out
            }
        };
        Ok(Outcome {
            exit_code: if json.inconsistent.is_empty() {
                EXIT_ENTAILED
            } else {
                EXIT_NOT_ENTAILED
            },
            stdout,
            stderr: String::new(),
        })
    })
}

/// Which random knowledge bases `check-postulates` draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    /// `N` may occur in the generated KBs.
    WithNormality,
    NormalityFree,
}

#[derive(Serialize)]
struct SweepJson {
    rule: String,
    kbs: usize,
    skipped: usize,
    instances: usize,
    tested: usize,
    fails: usize,
    counterexample: Option<CounterexampleJson>,
}

#[derive(Serialize)]
struct CounterexampleJson {
    kb: Vec<String>,
    instance: String,
    failing_query: String,
}

/// `dln check-postulates`: sweeps `rule` over `seeds` generated KBs, or over
/// the configured KB if one is given. Exit 1 if any instance fails.
pub fn cmd_check_postulates(
    config: &RunConfig,
    rule: Rule,
    seeds: u64,
    profile: Option<ProfileKind>,
) -> Outcome {
    run(|| {
        let options = config.options();
        let summary = match &config.kb_path {
            Some(path) => {
                let loaded = LoadedKb::load(path)?;
                let engine = Engine::new(options);
                if let Err(e) = postulates::precondition(&engine, &loaded.kb, rule) {
                    return Err(e.into());
                }
                postulates::sweep_kb(&engine, &loaded.kb, &[rule])?
                    .remove(0)
                    .unwrap_or_default()
            }
            None => {
                let kind = profile.unwrap_or(if rule.is_meta() {
                    ProfileKind::WithNormality
                } else {
                    ProfileKind::NormalityFree
                });
                let profile = match kind {
                    ProfileKind::WithNormality => Profile::default(),
                    ProfileKind::NormalityFree => Profile::normality_free(),
                };
                postulates::sweep(rule, 0..seeds, &profile, &options)?
            }
        };
        Ok(render_sweep(config, rule, &summary))
    })
}

fn render_sweep(config: &RunConfig, rule: Rule, s: &SweepSummary) -> Outcome {
    let stdout = match config.output_format {
        OutputFormat::Json => to_json(&SweepJson {
            rule: rule.to_string(),
            kbs: s.kbs,
            skipped: s.skipped,
            instances: s.instances,
            tested: s.tested,
            fails: s.fails,
            counterexample: s.first_counterexample.as_ref().map(|c| CounterexampleJson {
                kb: c.kb.axioms().map(|a| print_axiom(&a)).collect(),
                instance: c.instance.to_string(),
                failing_query: print_axiom(&c.failing_query),
            }),
        }),
        OutputFormat::Text => {
            let mut out = format!(
                "{rule}: {} KBs checked, {} skipped, {} instances, {} with all premises, {} failures\n",
                s.kbs, s.skipped, s.instances, s.tested, s.fails
            );
            if let Some(c) = &s.first_counterexample {
                let _ = writeln!(out, "counterexample: {}", c.instance);
                for a in c.kb.axioms() {
                    let _ = writeln!(out, "  {}", print_axiom(&a));
                }
            }
            out
        }
    };
    Outcome {
        exit_code: if s.fails == 0 { EXIT_ENTAILED } else { EXIT_NOT_ENTAILED },
        stdout,
        stderr: String::new(),
    }
}

fn run(f: impl FnOnce() -> Result<Outcome, CliError>) -> Outcome {
    f().unwrap_or_else(Outcome::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SITUS: &str = "# situs inversus\n\n\n\nHuman <~ some has_heart.LH\n\
                         SI <= Human\n\
                         SI <= some has_heart.RH\n\
                         some has_heart.LH <= not some has_heart.RH\n";

    #[test]
    fn labels_are_source_lines() {
        let l = LoadedKb::parse(SITUS, "kb").unwrap();
        assert_eq!(l.labels, vec![5]);
    }

    #[test]
    fn parse_errors_carry_origin_and_location() {
        let err = LoadedKb::parse("A <= \n", "kb.dl").unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INPUT_ERROR);
        assert!(err.to_string().starts_with("kb.dl:1:"), "{err}");
    }

    #[test]
    fn short_normal_forms() {
        let n = crate::parser::parse_concept("N(SI)").unwrap();
        assert_eq!(short_normal(&n), "N SI");
        let m = crate::parser::parse_concept("N(A and B)").unwrap();
        assert_eq!(short_normal(&m), "N(A and B)");
    }

    #[test]
    fn missing_kb_is_an_input_error() {
        let o = cmd_prototypes(&RunConfig::default());
        assert_eq!(o.exit_code, EXIT_INPUT_ERROR);
        let o = cmd_prototypes(&RunConfig::with_kb("/nonexistent/kb.dl"));
        assert_eq!(o.exit_code, EXIT_INPUT_ERROR);
        assert!(o.stderr.starts_with("error: cannot read"));
    }
}
