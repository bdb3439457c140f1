//! Candidate-execution enumeration for litmus programs and outcome
//! classification under a chosen axiom set.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::axioms::{self, Architecture, AxiomVerdict};
use crate::error::{Error, Result};
use crate::execution::Execution;
use crate::litmus::{Condition, Instruction, LitmusTest, RegisterRef};
use crate::relation::EventId;
use crate::skeleton::{odometer, permutations, Skeleton};

/// Default bound on non-init events per program.
pub const DEFAULT_MAX_EVENTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub max_events: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            max_events: DEFAULT_MAX_EVENTS,
        }
    }
}

/// Final register and memory state of one candidate.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome {
    pub registers: BTreeMap<RegisterRef, i64>,
    pub final_memory: BTreeMap<String, i64>,
}

impl Outcome {
    pub fn satisfies(&self, condition: &Condition) -> bool {
        condition.eval(&self.registers, &self.final_memory)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .registers
            .iter()
            .map(|(r, v)| format!("{r}={v}"))
            .chain(self.final_memory.iter().map(|(a, v)| format!("{a}={v}")))
            .collect();
        f.write_str(&parts.join(" /\\ "))
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Registers<'a>(&'a BTreeMap<RegisterRef, i64>);
        impl Serialize for Registers<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (r, v) in self.0 {
                    m.serialize_entry(&r.to_string(), v)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("registers", &Registers(&self.registers))?;
        m.serialize_entry("memory", &self.final_memory)?;
        m.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub index: usize,
    pub outcome: Outcome,
    pub execution: Execution,
}

/// A litmus program's skeleton plus where each register's value comes from.
struct Program {
    skeleton: Skeleton,
    registers: Vec<(EventId, RegisterRef)>,
}

impl Program {
    fn new(test: &LitmusTest, opts: &EnumerationOptions) -> Result<Self> {
        if test.processes.is_empty() {
            return Err(Error::EmptyProgram);
        }
        let events = test.event_count();
        if events > opts.max_events {
            return Err(Error::CapExceeded {
                events,
                cap: opts.max_events,
            });
        }
        let mut skeleton = Skeleton::new(test.addresses(), |a| test.initial_value(a));
        let mut registers = Vec::new();
        for (p, body) in test.processes.iter().enumerate() {
            for ins in body {
                let addr = skeleton
                    .address_id(ins.addr())
                    .expect("addresses collected from the test");
                match ins {
                    Instruction::Write { value, .. } => {
                        skeleton.write(p as u32, addr, *value);
                    }
                    Instruction::Read { reg, .. } => {
                        let id = skeleton.read(p as u32, addr);
                        registers.push((
                            id,
                            RegisterRef {
                                proc: p,
                                reg: reg.clone(),
                            },
                        ));
                    }
                }
            }
        }
        Ok(Program { skeleton, registers })
    }

    fn outcome(&self, exec: &Execution) -> Outcome {
        let events = exec.events();
        let registers = self
            .registers
            .iter()
            .map(|(id, r)| (r.clone(), events[id.index()].value))
            .collect();
        let mut final_memory = BTreeMap::new();
        for w in exec.writes() {
            if exec.co().successors(w.id).next().is_none() {
                final_memory.insert(exec.address_name(w.addr).to_string(), w.value);
            }
        }
        Outcome {
            registers,
            final_memory,
        }
    }
}

/// Every well-formed candidate execution of `test`, in a fixed order:
/// coherence choices vary slowest (address by address), reads-from
/// choices fastest (read by read).
pub fn enumerate_candidates(test: &LitmusTest, opts: &EnumerationOptions) -> Result<Vec<Candidate>> {
    let program = Program::new(test, opts)?;
    let sk = &program.skeleton;
    let co_choices: Vec<Vec<Vec<EventId>>> = (0..sk.addresses().len())
        .map(|a| permutations(sk.program_writes(crate::execution::AddrId(a as u32))))
        .collect();
    let rf_choices: Vec<Vec<EventId>> = sk.reads().iter().map(|&r| sk.sources(r)).collect();

    let mut radices: Vec<usize> = co_choices.iter().map(Vec::len).collect();
    radices.extend(rf_choices.iter().map(Vec::len));
    let split = co_choices.len();

    let mut out = Vec::new();
    for digits in odometer(radices) {
        let co: Vec<Vec<EventId>> = digits[..split]
            .iter()
            .zip(&co_choices)
            .map(|(&d, choices)| choices[d].clone())
            .collect();
        let rf: Vec<EventId> = digits[split..]
            .iter()
            .zip(&rf_choices)
            .map(|(&d, choices)| choices[d])
            .collect();
        let execution = sk.instantiate(&co, &rf);
        if !execution.validate().is_empty() {
            continue;
        }
        out.push(Candidate {
            index: out.len(),
            outcome: program.outcome(&execution),
            execution,
        });
    }
    Ok(out)
}

/// Which axioms a candidate must satisfy to be allowed.
#[derive(Clone, Copy)]
pub enum AxiomSet<'a> {
    /// Full sequential consistency.
    Sc,
    /// SC per location alone.
    ScPerLocationOnly,
    /// SC per location plus No Thin Air, Observation and Propagation under
    /// the given architecture.
    Framework(&'a dyn Architecture),
}

impl AxiomSet<'_> {
    pub fn label(&self) -> String {
        match self {
            AxiomSet::Sc => "sc".to_string(),
            AxiomSet::ScPerLocationOnly => "scpl".to_string(),
            AxiomSet::Framework(a) => format!("framework:{}", a.name()),
        }
    }

    /// Verdicts for the axioms in this set, in a fixed order.
    pub fn check(&self, exec: &Execution) -> Result<Vec<AxiomVerdict>> {
        let derived = exec.derive()?;
        Ok(match self {
            AxiomSet::Sc => vec![axioms::sc_full(exec, &derived)],
            AxiomSet::ScPerLocationOnly => vec![axioms::sc_per_location_1(&derived)],
            AxiomSet::Framework(arch) => {
                let result = axioms::architecture_result(exec, &derived, *arch)?;
                vec![
                    axioms::sc_per_location_1(&derived),
                    axioms::no_thin_air_with(&derived, &result),
                    axioms::observation_with(&derived, &result),
                    axioms::propagation_with(exec, &result),
                ]
            }
        })
    }
}

impl fmt::Debug for AxiomSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub index: usize,
    pub outcome: Outcome,
    pub allowed: bool,
    pub verdicts: Vec<AxiomVerdict>,
    #[serde(skip)]
    pub execution: Execution,
}

#[derive(Clone, Debug, Serialize)]
pub struct OutcomeSummary {
    pub outcome: Outcome,
    pub allowed: bool,
    /// Indices of all candidates producing this outcome.
    pub candidates: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationReport {
    pub test: String,
    pub axioms: String,
    pub candidates: Vec<CandidateReport>,
    /// One entry per distinct outcome, ordered by outcome.
    pub outcomes: Vec<OutcomeSummary>,
    /// Whether some allowed candidate satisfies the test's `exists` clause.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exists_allowed: Option<bool>,
}

impl EnumerationReport {
    pub fn allowed_outcomes(&self) -> Vec<&Outcome> {
        self.outcomes.iter().filter(|o| o.allowed).map(|o| &o.outcome).collect()
    }

    pub fn forbidden_outcomes(&self) -> Vec<&Outcome> {
        self.outcomes
            .iter()
            .filter(|o| !o.allowed)
            .map(|o| &o.outcome)
            .collect()
    }
}

/// Enumerates `test` and classifies every candidate under `axioms`. An
/// outcome is allowed iff some candidate producing it passes every axiom.
pub fn allowed_outcomes(
    test: &LitmusTest,
    axioms: AxiomSet<'_>,
    opts: &EnumerationOptions,
) -> Result<EnumerationReport> {
    let candidates = enumerate_candidates(test, opts)?;
    let mut reports = Vec::with_capacity(candidates.len());
    for c in candidates {
        let verdicts = axioms.check(&c.execution)?;
        reports.push(CandidateReport {
            index: c.index,
            allowed: verdicts.iter().all(|v| v.holds),
            outcome: c.outcome,
            verdicts,
            execution: c.execution,
        });
    }

    let mut by_outcome: BTreeMap<&Outcome, (bool, Vec<usize>)> = BTreeMap::new();
    for r in &reports {
        let entry = by_outcome.entry(&r.outcome).or_default();
        entry.0 |= r.allowed;
        entry.1.push(r.index);
    }
    let outcomes = by_outcome
        .into_iter()
        .map(|(o, (allowed, candidates))| OutcomeSummary {
            outcome: o.clone(),
            allowed,
            candidates,
        })
        .collect();
    let exists_allowed = test
        .condition
        .as_ref()
        .map(|c| reports.iter().any(|r| r.allowed && r.outcome.satisfies(c)));
    Ok(EnumerationReport {
        test: test.name.clone(),
        axioms: axioms.label(),
        candidates: reports,
        outcomes,
        exists_allowed,
    })
}
