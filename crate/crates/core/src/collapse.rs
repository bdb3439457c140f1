//! Shrinking a cycle in `pol ∪ com⁺` down to a single offending pair
//! `x pol y`, `y com⁺ x`, and the totality case split on `com⁺` that the
//! shrinking relies on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::execution::{DerivedRelations, Execution};
use crate::relation::{CycleWitness, EventId, Relation};

/// `x pol y` and `y com⁺ x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WitnessPair {
    pub x: EventId,
    pub y: EventId,
}

impl WitnessPair {
    pub fn validates(&self, derived: &DerivedRelations) -> bool {
        derived.pol.contains(self.x, self.y) && derived.com_plus.contains(self.y, self.x)
    }
}

impl fmt::Display for WitnessPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} pol {}, {} com+ {}", self.x, self.y, self.y, self.x)
    }
}

/// Which rewrite one collapse step applied to the cycle
/// `x -> p1 -> p2 -> rest.. -> x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollapseRule {
    /// `x -> p2 -> rest -> x` is still a cycle.
    SkipFirst,
    /// `x -> rest -> x` is still a cycle.
    SkipTwo,
    /// `p1 -> p2 -> p1` is a cycle.
    InnerPair,
    /// Otherwise `x -> p1 -> x` is a cycle.
    OuterPair,
    /// A two-cycle, read off directly.
    TwoCycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseStep {
    pub rule: CollapseRule,
    /// Cycle length (in events) before the step.
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseTrace {
    pub pair: WitnessPair,
    pub steps: Vec<CollapseStep>,
}

/// Shrinks `cycle` (in `pol ∪ com`, or `pol ∪ com⁺`) to a [`WitnessPair`].
pub fn collapse_cycle(exec: &Execution, derived: &DerivedRelations, cycle: &CycleWitness) -> Result<WitnessPair> {
    collapse_cycle_traced(exec, derived, cycle).map(|t| t.pair)
}

/// Like [`collapse_cycle`], also reporting each step taken. Every step
/// strictly shortens the cycle, so there are at most `cycle.len()` steps.
pub fn collapse_cycle_traced(
    exec: &Execution,
    derived: &DerivedRelations,
    cycle: &CycleWitness,
) -> Result<CollapseTrace> {
    if derived.pol.universe_size() != exec.len() {
        return Err(Error::UniverseMismatch {
            left: exec.len(),
            right: derived.pol.universe_size(),
        });
    }
    let step_rel = derived.pol.union(&derived.com_plus)?;
    if !cycle.validates(&step_rel) {
        return Err(Error::InvalidCycle(cycle.to_string()));
    }
    let is_cycle = |x: EventId, path: &[EventId]| -> bool {
        let mut prev = x;
        for &p in path {
            if !step_rel.contains(prev, p) {
                return false;
            }
            prev = p;
        }
        step_rel.contains(prev, x)
    };

    let mut x = cycle.nodes[0];
    let mut path: Vec<EventId> = cycle.nodes[1..].to_vec();
    let mut steps = Vec::new();
    loop {
        let length = path.len() + 1;
        match path.len() {
            0 => return Err(Error::InvalidCycle(format!("self-loop at {x}"))),
            1 => {
                steps.push(CollapseStep {
                    rule: CollapseRule::TwoCycle,
                    length,
                });
                let p = path[0];
                let pair = if derived.pol.contains(x, p) {
                    WitnessPair { x, y: p }
                } else {
                    WitnessPair { x: p, y: x }
                };
                return if pair.validates(derived) {
                    Ok(CollapseTrace { pair, steps })
                } else {
                    Err(Error::InvalidCycle(format!(
                        "two-cycle {x} <-> {p} is not pol against com+"
                    )))
                };
            }
            _ => {
                let (p1, p2) = (path[0], path[1]);
                let rule = if is_cycle(x, &path[1..]) {
                    path.remove(0);
                    CollapseRule::SkipFirst
                } else if is_cycle(x, &path[2..]) {
                    path.drain(..2);
                    CollapseRule::SkipTwo
                } else if is_cycle(p1, &[p2]) {
                    x = p1;
                    path = vec![p2];
                    CollapseRule::InnerPair
                } else {
                    path = vec![p1];
                    CollapseRule::OuterPair
                };
                steps.push(CollapseStep { rule, length });
            }
        }
    }
}

/// A pair violating the pair form of SC per location, obtained by
/// collapsing the shortest `pol ∪ com` cycle. `None` iff `pol ∪ com` is
/// acyclic.
pub fn violation_pair(exec: &Execution, derived: &DerivedRelations) -> Result<Option<(CycleWitness, CollapseTrace)>> {
    let rel: Relation = derived.pol.union(&derived.com)?;
    match rel.find_cycle() {
        None => Ok(None),
        Some(cycle) => {
            let trace = collapse_cycle_traced(exec, derived, &cycle)?;
            Ok(Some((cycle, trace)))
        }
    }
}

/// The four ways two same-address events relate under `com⁺`, in the order
/// they are tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TotalityCase {
    /// `x com⁺ y`
    ComPlusForward,
    /// both writes and `x = y`
    EqualWrites,
    /// both reads of the same write
    SameRfSourceReads,
    /// `y com⁺ x`
    ComPlusBackward,
}

/// Classifies two same-address events by the first applicable case.
pub fn totality_case(exec: &Execution, derived: &DerivedRelations, x: EventId, y: EventId) -> Result<TotalityCase> {
    let (ex, ey) = (exec.event(x)?, exec.event(y)?);
    if ex.addr != ey.addr {
        return Err(Error::AddressMismatch { x, y });
    }
    if derived.com_plus.contains(x, y) {
        return Ok(TotalityCase::ComPlusForward);
    }
    if ex.is_write() && ey.is_write() && x == y {
        return Ok(TotalityCase::EqualWrites);
    }
    if ex.is_read() && ey.is_read() && exec.rf_inv(x)? == exec.rf_inv(y)? {
        return Ok(TotalityCase::SameRfSourceReads);
    }
    if derived.com_plus.contains(y, x) {
        return Ok(TotalityCase::ComPlusBackward);
    }
    Err(Error::Unclassified { x, y })
}
