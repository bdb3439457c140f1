//! Axiomatic weak-memory model checking.
//!
//! Candidate executions are event graphs `(events, po, co, rf)`. From them
//! we derive the communication relations (`fr`, `com`, `com⁺`, `pol`,
//! `rfe`, `fre`), decide coherence (SC per location, in cycle and pair
//! form), full SC, and the architecture-parameterised axioms, and enumerate
//! the candidate executions of small litmus programs.

pub mod axioms;
pub mod collapse;
pub mod enumerate;
pub mod error;
pub mod execution;
pub mod generators;
pub mod litmus;
pub mod relation;
pub mod skeleton;

pub use axioms::{
    architecture_by_name, check_all, find_forbidden_patterns, Architecture, ArchitectureResult, Axiom, AxiomVerdict,
    PatternInstance, PatternKind, ScArch, StoreBufferArch, Witness,
};
pub use collapse::{collapse_cycle, totality_case, TotalityCase, WitnessPair};
pub use enumerate::{allowed_outcomes, enumerate_candidates, AxiomSet, EnumerationOptions, EnumerationReport, Outcome};
pub use error::{Error, Result};
pub use execution::{DerivedRelations, Event, Execution, Kind, ProcId, Violation};
pub use generators::{exhaustive_executions, gen_execution, ExecutionGenerator, GenConfig};
pub use litmus::{parse_litmus, LitmusTest, ParseError};
pub use relation::{CycleWitness, EventId, Relation};
