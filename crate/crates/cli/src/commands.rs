use std::error::Error as StdError;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use axcat_core::axioms::{self, find_forbidden_patterns};
use axcat_core::collapse::violation_pair;
use axcat_core::enumerate::{allowed_outcomes, AxiomSet, CandidateReport, EnumerationOptions, DEFAULT_MAX_EVENTS};
use axcat_core::litmus::{parse_condition, parse_litmus, LitmusTest};
use axcat_core::{architecture_by_name, Architecture, Execution};

use crate::render::{self, CheckCandidate, CheckDoc, DumpedExecution, EnumerateDoc, ExplainCandidate, ExplainDoc};
use crate::AxiomChoice;

pub type CliResult<T> = Result<T, Box<dyn StdError>>;

const MAX_EVENTS_VAR: &str = "AXCAT_MAX_EVENTS";

fn load(path: &Path) -> CliResult<LitmusTest> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_litmus(&text).map_err(|e| format!("{}:{e}", path.display()).into())
}

fn options() -> CliResult<EnumerationOptions> {
    let max_events = match std::env::var(MAX_EVENTS_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{MAX_EVENTS_VAR}: expected a non-negative integer, got {v:?}"))?,
        Err(_) => DEFAULT_MAX_EVENTS,
    };
    Ok(EnumerationOptions { max_events })
}

fn axiom_set(choice: AxiomChoice, arch: &dyn Architecture) -> AxiomSet<'_> {
    match choice {
        AxiomChoice::Sc => AxiomSet::Sc,
        AxiomChoice::Scpl => AxiomSet::ScPerLocationOnly,
        AxiomChoice::Framework => AxiomSet::Framework(arch),
    }
}

/// Writes to stdout, treating a closed pipe (`axcat ... | head`) as success.
fn emit(text: &str) -> CliResult<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: serde::Serialize>(doc: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    emit(&text)
}

fn patterns_of(exec: &Execution) -> CliResult<Vec<axcat_core::PatternInstance>> {
    Ok(find_forbidden_patterns(exec, &exec.derive()?))
}

pub fn check(file: &Path, choice: AxiomChoice, arch_name: &str, json: bool) -> CliResult<u8> {
    let test = load(file)?;
    let arch = architecture_by_name(arch_name)?;
    let Some(condition) = test.condition.clone() else {
        return Err(format!("{}: no exists clause to check", file.display()).into());
    };
    let report = allowed_outcomes(&test, axiom_set(choice, arch.as_ref()), &options()?)?;
    let allowed = report.exists_allowed.unwrap_or(false);

    let mut candidates = Vec::new();
    for c in report.candidates.iter().filter(|c| c.outcome.satisfies(&condition)) {
        candidates.push(CheckCandidate {
            index: c.index,
            outcome: &c.outcome,
            allowed: c.allowed,
            verdicts: &c.verdicts,
            patterns: patterns_of(&c.execution)?,
        });
    }
    let doc = CheckDoc {
        schema: render::SCHEMA,
        command: "check",
        test: &test.name,
        axioms: report.axioms.clone(),
        condition: condition.to_string(),
        result: if allowed { "allowed" } else { "forbidden" },
        candidates,
    };
    if json {
        print_json(&doc)?;
    } else {
        emit(&render::check_text(&doc, &report))?;
    }
    Ok(if allowed { 1 } else { 0 })
}

pub fn enumerate(file: &Path, arch_name: &str, json: bool, dump: bool) -> CliResult<u8> {
    let test = load(file)?;
    let arch = architecture_by_name(arch_name)?;
    let opts = options()?;
    let reports = [
        AxiomSet::Sc,
        AxiomSet::ScPerLocationOnly,
        AxiomSet::Framework(arch.as_ref()),
    ]
    .into_iter()
    .map(|set| allowed_outcomes(&test, set, &opts))
    .collect::<Result<Vec<_>, _>>()?;
    if json {
        let executions = dump.then(|| {
            reports[0]
                .candidates
                .iter()
                .map(|c| DumpedExecution {
                    index: c.index,
                    execution: &c.execution,
                })
                .collect()
        });
        print_json(&EnumerateDoc {
            schema: render::SCHEMA,
            command: "enumerate",
            test: &test.name,
            arch: arch.name(),
            reports: &reports,
            executions,
        })?;
    } else {
        if dump {
            eprintln!("axcat: --dump-executions only affects --json output");
        }
        emit(&render::enumerate_text(&test, &reports))?;
    }
    Ok(0)
}

fn explain_candidate(c: &CandidateReport, arch: &dyn Architecture) -> CliResult<ExplainCandidate> {
    let exec = &c.execution;
    let derived = exec.derive()?;
    let sc = axioms::sc_full(exec, &derived);
    let collapse = violation_pair(exec, &derived)?;
    let framework = axioms::check_all(exec, arch)?
        .into_iter()
        .filter(|v| {
            matches!(
                v.axiom,
                axioms::Axiom::NoThinAir | axioms::Axiom::Observation | axioms::Axiom::Propagation
            )
        })
        .collect();
    Ok(ExplainCandidate {
        index: c.index,
        outcome: c.outcome.clone(),
        allowed: c.allowed,
        sc_cycle: sc.witness.and_then(|w| match w {
            axioms::Witness::Cycle { nodes } => Some(render::labelled_cycle(exec, &derived, &nodes)),
            _ => None,
        }),
        scpl_cycle: collapse
            .as_ref()
            .map(|(cycle, _)| render::labelled_cycle(exec, &derived, &cycle.nodes)),
        collapse: collapse.map(|(_, trace)| trace),
        patterns: find_forbidden_patterns(exec, &derived),
        framework,
        events: exec.events().iter().map(|e| exec.describe(e.id)).collect(),
    })
}

pub fn explain(file: &Path, binding: &str, choice: AxiomChoice, arch_name: &str, json: bool) -> CliResult<u8> {
    let test = load(file)?;
    let arch = architecture_by_name(arch_name)?;
    let wanted = parse_condition(binding, &test).map_err(|e| format!("--outcome: {e}"))?;
    let report = allowed_outcomes(&test, axiom_set(choice, arch.as_ref()), &options()?)?;
    let matching: Vec<&CandidateReport> = report
        .candidates
        .iter()
        .filter(|c| c.outcome.satisfies(&wanted))
        .collect();
    if matching.is_empty() {
        return Err(format!("no candidate execution of {} produces {wanted}", test.name).into());
    }
    let allowed = matching.iter().any(|c| c.allowed);
    let candidates = matching
        .into_iter()
        .map(|c| explain_candidate(c, arch.as_ref()))
        .collect::<CliResult<Vec<_>>>()?;
    let doc = ExplainDoc {
        schema: render::SCHEMA,
        command: "explain",
        test: &test.name,
        axioms: report.axioms.clone(),
        arch: arch.name(),
        outcome: wanted.to_string(),
        result: if allowed { "allowed" } else { "forbidden" },
        candidates,
    };
    if json {
        print_json(&doc)?;
    } else {
        emit(&render::explain_text(&doc))?;
    }
    Ok(if allowed { 1 } else { 0 })
}
