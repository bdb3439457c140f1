//! Report documents (schema 1) and their plain-text renderings.

use std::fmt::Write as _;

use serde::Serialize;

use axcat_core::axioms::{AxiomVerdict, PatternInstance, Witness};
use axcat_core::collapse::{CollapseRule, CollapseTrace};
use axcat_core::enumerate::{EnumerationReport, Outcome};
use axcat_core::litmus::LitmusTest;
use axcat_core::{DerivedRelations, EventId, Execution};

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct CheckCandidate<'a> {
    pub index: usize,
    pub outcome: &'a Outcome,
    pub allowed: bool,
    pub verdicts: &'a [AxiomVerdict],
    /// Coherence patterns present in the candidate, whatever the axiom set.
    pub patterns: Vec<PatternInstance>,
}

#[derive(Serialize)]
pub struct CheckDoc<'a> {
    pub schema: u32,
    pub command: &'static str,
    pub test: &'a str,
    pub axioms: String,
    pub condition: String,
    pub result: &'static str,
    /// Candidates whose outcome satisfies the condition.
    pub candidates: Vec<CheckCandidate<'a>>,
}

#[derive(Serialize)]
pub struct DumpedExecution<'a> {
    pub index: usize,
    pub execution: &'a Execution,
}

#[derive(Serialize)]
pub struct EnumerateDoc<'a> {
    pub schema: u32,
    pub command: &'static str,
    pub test: &'a str,
    pub arch: &'a str,
    pub reports: &'a [EnumerationReport],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub executions: Option<Vec<DumpedExecution<'a>>>,
}

/// A cycle with the relation that justifies each edge; `edges[i]` joins
/// `nodes[i]` to `nodes[i + 1]` (wrapping).
#[derive(Serialize)]
pub struct LabelledCycle {
    pub nodes: Vec<EventId>,
    pub edges: Vec<&'static str>,
}

#[derive(Serialize)]
pub struct ExplainCandidate {
    pub index: usize,
    pub outcome: Outcome,
    pub allowed: bool,
    /// Shortest `po ∪ com` cycle, present iff full SC fails.
    pub sc_cycle: Option<LabelledCycle>,
    /// Shortest `pol ∪ com` cycle, present iff SC per location fails.
    pub scpl_cycle: Option<LabelledCycle>,
    pub collapse: Option<CollapseTrace>,
    pub patterns: Vec<PatternInstance>,
    pub framework: Vec<AxiomVerdict>,
    pub events: Vec<String>,
}

#[derive(Serialize)]
pub struct ExplainDoc<'a> {
    pub schema: u32,
    pub command: &'static str,
    pub test: &'a str,
    pub axioms: String,
    pub arch: &'a str,
    pub outcome: String,
    pub result: &'static str,
    pub candidates: Vec<ExplainCandidate>,
}

fn edge_label(exec: &Execution, d: &DerivedRelations, a: EventId, b: EventId) -> &'static str {
    if exec.rf().contains(a, b) {
        "rf"
    } else if exec.co().contains(a, b) {
        "co"
    } else if d.fr.contains(a, b) {
        "fr"
    } else if d.pol.contains(a, b) {
        "pol"
    } else if exec.po().contains(a, b) {
        "po"
    } else if d.com_plus.contains(a, b) {
        "com+"
    } else {
        "?"
    }
}

pub fn labelled_cycle(exec: &Execution, d: &DerivedRelations, nodes: &[EventId]) -> LabelledCycle {
    let edges = (0..nodes.len())
        .map(|i| edge_label(exec, d, nodes[i], nodes[(i + 1) % nodes.len()]))
        .collect();
    LabelledCycle {
        nodes: nodes.to_vec(),
        edges,
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Cycle { nodes } => {
            let mut s: Vec<String> = nodes.iter().map(EventId::to_string).collect();
            s.extend(nodes.first().map(EventId::to_string));
            format!("cycle {}", s.join(" -> "))
        }
        Witness::Pair { x, y } => format!("{x} pol {y}, {y} com+ {x}"),
        Witness::Pattern(p) => pattern_text(p),
        Witness::Event { event } => format!("{event} reaches itself"),
    }
}

fn pattern_text(p: &PatternInstance) -> String {
    match p.via {
        Some(v) => format!("{} on {} pol {} via {}", p.pattern, p.first, p.second, v),
        None => format!("{} on {} pol {}", p.pattern, p.first, p.second),
    }
}

fn verdict_lines(out: &mut String, verdicts: &[AxiomVerdict]) {
    for v in verdicts {
        match (&v.witness, v.holds) {
            (_, true) => writeln!(out, "    {}: holds", v.axiom),
            (Some(w), false) => writeln!(out, "    {}: fails, {}", v.axiom, witness_text(w)),
            (None, false) => writeln!(out, "    {}: fails", v.axiom),
        }
        .expect("writing to a String");
    }
}

fn status(allowed: bool) -> &'static str {
    if allowed {
        "allowed"
    } else {
        "forbidden"
    }
}

pub fn check_text(doc: &CheckDoc<'_>, report: &EnumerationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "test {} under {}", doc.test, doc.axioms);
    let _ = writeln!(out, "exists ({}): {}", doc.condition, doc.result);
    let _ = writeln!(
        out,
        "{} candidates, {} matching the condition",
        report.candidates.len(),
        doc.candidates.len()
    );
    for c in &doc.candidates {
        let _ = writeln!(out, "  candidate {} [{}]: {}", c.index, c.outcome, status(c.allowed));
        verdict_lines(&mut out, c.verdicts);
        for p in &c.patterns {
            let _ = writeln!(out, "    pattern {}", pattern_text(p));
        }
    }
    out
}

pub fn enumerate_text(test: &LitmusTest, reports: &[EnumerationReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "test {}", test.name);
    for r in reports {
        let _ = writeln!(out, "{} ({} candidates)", r.axioms, r.candidates.len());
        for o in &r.outcomes {
            let _ = writeln!(out, "  {:9} {}", status(o.allowed), o.outcome);
        }
        if let Some(allowed) = r.exists_allowed {
            let _ = writeln!(out, "  exists: {}", status(allowed));
        }
    }
    out
}

fn rule_name(rule: &CollapseRule) -> String {
    serde_json::to_string(rule)
        .map(|s| s.trim_matches('"').to_string())
        .unwrap_or_default()
}

fn cycle_text(events: &[String], c: &LabelledCycle) -> String {
    let mut s = String::new();
    for (n, e) in c.nodes.iter().zip(&c.edges) {
        let _ = write!(s, "{} -{e}-> ", events[n.index()]);
    }
    if let Some(first) = c.nodes.first() {
        s.push_str(&events[first.index()]);
    }
    s
}

pub fn explain_text(doc: &ExplainDoc<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "test {} under {}", doc.test, doc.axioms);
    let _ = writeln!(out, "outcome {}: {}", doc.outcome, doc.result);
    for c in &doc.candidates {
        let _ = writeln!(out, "candidate {} [{}]: {}", c.index, c.outcome, status(c.allowed));
        match &c.sc_cycle {
            Some(cyc) => {
                let _ = writeln!(out, "  full SC fails: {}", cycle_text(&c.events, cyc));
            }
            None => {
                let _ = writeln!(out, "  full SC holds");
            }
        }
        match (&c.scpl_cycle, &c.collapse) {
            (Some(cyc), Some(trace)) => {
                let _ = writeln!(out, "  SC per location fails: {}", cycle_text(&c.events, cyc));
                let steps: Vec<String> = trace
                    .steps
                    .iter()
                    .map(|s| format!("{}@{}", rule_name(&s.rule), s.length))
                    .collect();
                let _ = writeln!(out, "  collapse: {}", steps.join(", "));
                let (x, y) = (trace.pair.x, trace.pair.y);
                let _ = writeln!(
                    out,
                    "  witness pair: {} pol {}, back by com+",
                    c.events[x.index()],
                    c.events[y.index()]
                );
                for p in &c.patterns {
                    let _ = writeln!(out, "  pattern {}", pattern_text(p));
                }
            }
            _ => {
                let _ = writeln!(out, "  SC per location holds");
            }
        }
        let failing: Vec<AxiomVerdict> = c.framework.iter().filter(|v| !v.holds).cloned().collect();
        if failing.is_empty() {
            let _ = writeln!(out, "  {}: no-thin-air, observation and propagation hold", doc.arch);
        } else {
            let _ = writeln!(out, "  {}:", doc.arch);
            verdict_lines(&mut out, &failing);
        }
    }
    out
}
