//! Decision procedures for the per-location coherence axioms, full
//! sequential consistency, and the three architecture-parameterised axioms
//! (No Thin Air, Observation, Propagation).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::execution::{DerivedRelations, Execution};
use crate::relation::{CycleWitness, EventId, Relation};

/// `(ppo, fence, prop)` as assigned by an architecture to one execution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchitectureResult {
    pub ppo: Relation,
    pub fence: Relation,
    pub prop: Relation,
}

impl ArchitectureResult {
    /// Checks that `ppo ⊆ po` and that `prop` relates writes only.
    pub fn validate(&self, exec: &Execution, arch: &str) -> Result<()> {
        let invalid = |reason: String| Error::InvalidArchitecture {
            name: arch.to_string(),
            reason,
        };
        for r in [&self.ppo, &self.fence, &self.prop] {
            if r.universe_size() != exec.len() {
                return Err(invalid(format!(
                    "relation over {} events for an execution of {}",
                    r.universe_size(),
                    exec.len()
                )));
            }
        }
        if let Some((a, b)) = self.ppo.iter().find(|&(a, b)| !exec.po().contains(a, b)) {
            return Err(invalid(format!("ppo pair ({a}, {b}) is not in po")));
        }
        let events = exec.events();
        if let Some((a, b)) = self
            .prop
            .iter()
            .find(|&(a, b)| !events[a.index()].is_write() || !events[b.index()].is_write())
        {
            return Err(invalid(format!("prop pair ({a}, {b}) is not between writes")));
        }
        Ok(())
    }

    /// `ppo ∪ fence ∪ rfe`.
    pub fn happens_before(&self, derived: &DerivedRelations) -> Relation {
        self.ppo
            .union(&self.fence)
            .and_then(|r| r.union(&derived.rfe))
            .expect("architecture relations share the execution universe")
    }
}

/// A memory architecture: a deterministic map from executions to
/// `(ppo, fence, prop)`.
pub trait Architecture: Send + Sync {
    fn name(&self) -> &str;

    fn derive(&self, exec: &Execution, derived: &DerivedRelations) -> ArchitectureResult;
}

/// Sample architecture keeping all of program order.
///
/// `ppo = po`, `fence = ∅`, `prop = co ∪ (com⁺ restricted to write pairs)`.
/// Schematic only; it does not model any real processor.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScArch;

impl Architecture for ScArch {
    fn name(&self) -> &str {
        "sc-arch"
    }

    fn derive(&self, exec: &Execution, derived: &DerivedRelations) -> ArchitectureResult {
        let events = exec.events();
        let write_pairs = derived
            .com_plus
            .filter(|a, b| events[a.index()].is_write() && events[b.index()].is_write());
        ArchitectureResult {
            ppo: exec.po().clone(),
            fence: Relation::empty(exec.len()),
            prop: exec.co().union(&write_pairs).expect("same universe"),
        }
    }
}

/// Sample store-buffer architecture: a write may be overtaken by a later
/// read of the same process.
///
/// `ppo = po \ (W × R)`, `fence = ∅`, `prop = co`. Schematic only.
#[derive(Clone, Copy, Debug, Default)]
pub struct StoreBufferArch;

impl Architecture for StoreBufferArch {
    fn name(&self) -> &str {
        "sb-arch"
    }

    fn derive(&self, exec: &Execution, _derived: &DerivedRelations) -> ArchitectureResult {
        let events = exec.events();
        ArchitectureResult {
            ppo: exec
                .po()
                .filter(|a, b| !(events[a.index()].is_write() && events[b.index()].is_read())),
            fence: Relation::empty(exec.len()),
            prop: exec.co().clone(),
        }
    }
}

pub const ARCHITECTURE_NAMES: [&str; 2] = ["sc-arch", "sb-arch"];

pub fn architecture_by_name(name: &str) -> Result<Box<dyn Architecture>> {
    match name.to_ascii_lowercase().as_str() {
        "sc-arch" | "sc" => Ok(Box::new(ScArch)),
        "sb-arch" | "sb" => Ok(Box::new(StoreBufferArch)),
        _ => Err(Error::UnknownArchitecture(name.to_string())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    ScPerLocation1,
    ScPerLocation2,
    FivePatterns,
    FullSc,
    NoThinAir,
    Observation,
    Propagation,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::ScPerLocation1 => "sc-per-location-1",
            Axiom::ScPerLocation2 => "sc-per-location-2",
            Axiom::FivePatterns => "five-patterns",
            Axiom::FullSc => "full-sc",
            Axiom::NoThinAir => "no-thin-air",
            Axiom::Observation => "observation",
            Axiom::Propagation => "propagation",
        };
        f.write_str(s)
    }
}

/// The five coherence shapes `x pol y` closed by a communication path from
/// `y` back to `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PatternKind {
    /// `w1 pol w2`, `w2 co w1`
    #[serde(rename = "CoWW")]
    CoWW,
    /// `r pol w`, `w rf r`
    #[serde(rename = "CoRW-rf")]
    CoRWRf,
    /// `w pol r`, `r fr w`
    #[serde(rename = "CoWR-fr")]
    CoWRFr,
    /// `r pol w1`, `w1 co w2 rf r`
    #[serde(rename = "CoRW-corf")]
    CoRWCoRf,
    /// `r1 pol r2`, `r2 fr w rf r1`
    #[serde(rename = "CoRR-frrf")]
    CoRRFrRf,
}

impl PatternKind {
    pub const ALL: [PatternKind; 5] = [
        PatternKind::CoWW,
        PatternKind::CoRWRf,
        PatternKind::CoWRFr,
        PatternKind::CoRWCoRf,
        PatternKind::CoRRFrRf,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            PatternKind::CoWW => "CoWW",
            PatternKind::CoRWRf => "CoRW-rf",
            PatternKind::CoWRFr => "CoWR-fr",
            PatternKind::CoRWCoRf => "CoRW-corf",
            PatternKind::CoRRFrRf => "CoRR-frrf",
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One occurrence of a forbidden shape: `first pol second`, closed by the
/// pattern's path from `second` back to `first` (through `via` for the two
/// composite shapes).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PatternInstance {
    pub pattern: PatternKind,
    pub first: EventId,
    pub second: EventId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via: Option<EventId>,
}

impl PatternInstance {
    pub fn events(&self) -> Vec<EventId> {
        let mut v = vec![self.first, self.second];
        v.extend(self.via);
        v
    }

    /// The instance as a cycle `first -> second [-> via] -> first`.
    pub fn cycle(&self) -> CycleWitness {
        CycleWitness::canonical(self.events())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    Cycle { nodes: Vec<EventId> },
    Pair { x: EventId, y: EventId },
    Pattern(PatternInstance),
    Event { event: EventId },
}

impl From<CycleWitness> for Witness {
    fn from(c: CycleWitness) -> Self {
        Witness::Cycle { nodes: c.nodes }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl AxiomVerdict {
    fn from_cycle(axiom: Axiom, cycle: Option<CycleWitness>) -> Self {
        AxiomVerdict {
            axiom,
            holds: cycle.is_none(),
            witness: cycle.map(Witness::from),
        }
    }

    /// Re-checks a failing verdict's witness against the relation that
    /// defines the axiom. Holding verdicts validate iff they carry no
    /// witness.
    pub fn witness_validates(
        &self,
        exec: &Execution,
        derived: &DerivedRelations,
        arch: Option<&ArchitectureResult>,
    ) -> bool {
        let Some(witness) = &self.witness else {
            return self.holds;
        };
        if self.holds {
            return false;
        }
        let cycle_in = |rel: &Relation| match witness {
            Witness::Cycle { nodes } => CycleWitness { nodes: nodes.clone() }.validates(rel),
            _ => false,
        };
        match self.axiom {
            Axiom::FullSc => cycle_in(&exec.po().union(&derived.com).expect("same universe")),
            Axiom::ScPerLocation1 => cycle_in(&derived.pol.union(&derived.com).expect("same universe")),
            Axiom::ScPerLocation2 => match witness {
                Witness::Pair { x, y } => derived.pol.contains(*x, *y) && derived.com_plus.contains(*y, *x),
                _ => false,
            },
            Axiom::FivePatterns => match witness {
                Witness::Pattern(p) => pattern_holds(exec, derived, p),
                _ => false,
            },
            Axiom::NoThinAir => arch.is_some_and(|a| cycle_in(&a.happens_before(derived))),
            Axiom::Observation => match (witness, arch) {
                (Witness::Event { event }, Some(a)) => observation_relation(derived, a).contains(*event, *event),
                _ => false,
            },
            Axiom::Propagation => arch.is_some_and(|a| cycle_in(&exec.co().union(&a.prop).expect("same universe"))),
        }
    }
}

/// Full sequential consistency: `po ∪ com` is acyclic.
pub fn sc_full(exec: &Execution, derived: &DerivedRelations) -> AxiomVerdict {
    let rel = exec.po().union(&derived.com).expect("same universe");
    AxiomVerdict::from_cycle(Axiom::FullSc, rel.find_cycle())
}

/// SC per location, cycle form: `pol ∪ com` is acyclic.
pub fn sc_per_location_1(derived: &DerivedRelations) -> AxiomVerdict {
    let rel = derived.pol.union(&derived.com).expect("same universe");
    AxiomVerdict::from_cycle(Axiom::ScPerLocation1, rel.find_cycle())
}

/// SC per location, pair form: no `x pol y` with `y com⁺ x`. The witness
/// is the first offending pair in row-major order.
pub fn sc_per_location_2(derived: &DerivedRelations) -> AxiomVerdict {
    let offending = derived.pol.iter().find(|&(x, y)| derived.com_plus.contains(y, x));
    AxiomVerdict {
        axiom: Axiom::ScPerLocation2,
        holds: offending.is_none(),
        witness: offending.map(|(x, y)| Witness::Pair { x, y }),
    }
}

/// Every instance of the five forbidden coherence shapes, in `pol` order.
pub fn find_forbidden_patterns(exec: &Execution, derived: &DerivedRelations) -> Vec<PatternInstance> {
    let rf = exec.rf();
    let first_via = |from: &Relation, y: EventId, x: EventId| from.successors(y).find(|&p| rf.contains(p, x));
    let mut out = Vec::new();
    for (x, y) in derived.pol.iter() {
        let instance = |pattern, via| PatternInstance {
            pattern,
            first: x,
            second: y,
            via,
        };
        if exec.co().contains(y, x) {
            out.push(instance(PatternKind::CoWW, None));
        } else if rf.contains(y, x) {
            out.push(instance(PatternKind::CoRWRf, None));
        } else if derived.fr.contains(y, x) {
            out.push(instance(PatternKind::CoWRFr, None));
        } else if let Some(p) = first_via(exec.co(), y, x) {
            out.push(instance(PatternKind::CoRWCoRf, Some(p)));
        } else if let Some(p) = first_via(&derived.fr, y, x) {
            out.push(instance(PatternKind::CoRRFrRf, Some(p)));
        }
    }
    out
}

fn pattern_holds(exec: &Execution, derived: &DerivedRelations, p: &PatternInstance) -> bool {
    let (x, y) = (p.first, p.second);
    if !derived.pol.contains(x, y) {
        return false;
    }
    match (p.pattern, p.via) {
        (PatternKind::CoWW, None) => exec.co().contains(y, x),
        (PatternKind::CoRWRf, None) => exec.rf().contains(y, x),
        (PatternKind::CoWRFr, None) => derived.fr.contains(y, x),
        (PatternKind::CoRWCoRf, Some(v)) => exec.co().contains(y, v) && exec.rf().contains(v, x),
        (PatternKind::CoRRFrRf, Some(v)) => derived.fr.contains(y, v) && exec.rf().contains(v, x),
        _ => false,
    }
}

/// The pattern scan as a verdict: holds iff no forbidden shape occurs.
pub fn five_patterns(exec: &Execution, derived: &DerivedRelations) -> AxiomVerdict {
    let first = find_forbidden_patterns(exec, derived).into_iter().next();
    AxiomVerdict {
        axiom: Axiom::FivePatterns,
        holds: first.is_none(),
        witness: first.map(Witness::Pattern),
    }
}

pub fn no_thin_air(exec: &Execution, derived: &DerivedRelations, arch: &dyn Architecture) -> Result<AxiomVerdict> {
    let result = architecture_result(exec, derived, arch)?;
    Ok(no_thin_air_with(derived, &result))
}

pub fn observation(exec: &Execution, derived: &DerivedRelations, arch: &dyn Architecture) -> Result<AxiomVerdict> {
    let result = architecture_result(exec, derived, arch)?;
    Ok(observation_with(derived, &result))
}

pub fn propagation(exec: &Execution, derived: &DerivedRelations, arch: &dyn Architecture) -> Result<AxiomVerdict> {
    let result = architecture_result(exec, derived, arch)?;
    Ok(propagation_with(exec, &result))
}

/// Runs `arch` and checks its result before any axiom looks at it.
pub fn architecture_result(
    exec: &Execution,
    derived: &DerivedRelations,
    arch: &dyn Architecture,
) -> Result<ArchitectureResult> {
    let result = arch.derive(exec, derived);
    result.validate(exec, arch.name())?;
    Ok(result)
}

/// `hb = ppo ∪ fence ∪ rfe` is acyclic.
pub fn no_thin_air_with(derived: &DerivedRelations, result: &ArchitectureResult) -> AxiomVerdict {
    AxiomVerdict::from_cycle(Axiom::NoThinAir, result.happens_before(derived).find_cycle())
}

fn observation_relation(derived: &DerivedRelations, result: &ArchitectureResult) -> Relation {
    let hb_star = result.happens_before(derived).reflexive_transitive_closure();
    derived
        .fre
        .compose(&result.prop)
        .and_then(|r| r.compose(&hb_star))
        .expect("same universe")
}

/// `fre ; prop ; hb*` is irreflexive. The witness is the smallest event
/// related to itself.
pub fn observation_with(derived: &DerivedRelations, result: &ArchitectureResult) -> AxiomVerdict {
    let rel = observation_relation(derived, result);
    let fixed = (0..rel.universe_size())
        .map(EventId::from)
        .find(|&e| rel.contains(e, e));
    AxiomVerdict {
        axiom: Axiom::Observation,
        holds: fixed.is_none(),
        witness: fixed.map(|event| Witness::Event { event }),
    }
}

/// `co ∪ prop` is acyclic.
pub fn propagation_with(exec: &Execution, result: &ArchitectureResult) -> AxiomVerdict {
    let rel = exec.co().union(&result.prop).expect("same universe");
    AxiomVerdict::from_cycle(Axiom::Propagation, rel.find_cycle())
}

/// Every axiom in a fixed order: both per-location forms, the pattern
/// scan, the three architecture axioms, then full SC.
pub fn check_all(exec: &Execution, arch: &dyn Architecture) -> Result<Vec<AxiomVerdict>> {
    let derived = exec.derive()?;
    let result = architecture_result(exec, &derived, arch)?;
    Ok(vec![
        sc_per_location_1(&derived),
        sc_per_location_2(&derived),
        five_patterns(exec, &derived),
        no_thin_air_with(&derived, &result),
        observation_with(&derived, &result),
        propagation_with(exec, &result),
        sc_full(exec, &derived),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::execution::fixtures::store_buffering;
    use crate::execution::ExecutionBuilder;

    fn verdict(list: &[AxiomVerdict], axiom: Axiom) -> &AxiomVerdict {
        list.iter().find(|v| v.axiom == axiom).unwrap()
    }

    /// Same process writes x twice, coherence order opposite to program order.
    fn coww() -> (Execution, EventId, EventId) {
        let mut b = ExecutionBuilder::default();
        let ix = b.init("x", 0);
        let w1 = b.write(0, "x", 1);
        let w2 = b.write(0, "x", 2);
        b.co_chain(&[ix, w2, w1]);
        (b.build().unwrap(), w1, w2)
    }

    /// `r pol w` with `w co w' rf r`.
    fn corw_corf() -> (Execution, [EventId; 3]) {
        let mut b = ExecutionBuilder::default();
        let ix = b.init("x", 0);
        let r = b.read(0, "x", 2);
        let w1 = b.write(0, "x", 1);
        let w2 = b.write(1, "x", 2);
        b.co_chain(&[ix, w1, w2]).rf(w2, r);
        (b.build().unwrap(), [r, w1, w2])
    }

    #[test]
    fn single_process_is_sc() {
        let mut b = ExecutionBuilder::default();
        let ix = b.init("x", 0);
        let w = b.write(0, "x", 1);
        let r = b.read(0, "x", 1);
        b.co(ix, w).rf(w, r);
        let e = b.build().unwrap();
        let d = e.derive().unwrap();
        assert!(sc_full(&e, &d).holds);
        assert!(sc_per_location_1(&d).holds);
    }

    #[test]
    fn store_buffering_relaxed_outcome_violates_sc() {
        let (e, [_, _, wx, ry, wy, rx]) = store_buffering(false, false);
        let d = e.derive().unwrap();
        let v = sc_full(&e, &d);
        assert!(!v.holds);
        // W x1 -po-> R y -fr-> W y1 -po-> R x -fr-> W x1
        assert_eq!(
            v.witness,
            Some(Witness::Cycle {
                nodes: vec![wx, ry, wy, rx]
            })
        );
        assert!(v.witness_validates(&e, &d, None));
        for (a, b) in [(false, true), (true, false), (true, true)] {
            let (e, _) = store_buffering(a, b);
            assert!(sc_full(&e, &e.derive().unwrap()).holds, "({a}, {b})");
        }
    }

    #[test]
    fn store_buffering_is_coherent() {
        for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
            let (e, _) = store_buffering(a, b);
            let d = e.derive().unwrap();
            assert!(sc_per_location_1(&d).holds);
            assert!(sc_per_location_2(&d).holds);
            assert!(find_forbidden_patterns(&e, &d).is_empty());
        }
        let d = Execution::empty().derive().unwrap();
        assert!(sc_per_location_1(&d).holds);
        assert!(sc_per_location_2(&d).holds);
    }

    #[test]
    fn coww_is_incoherent() {
        let (e, w1, w2) = coww();
        let d = e.derive().unwrap();
        let v1 = sc_per_location_1(&d);
        assert!(!v1.holds);
        assert_eq!(v1.witness, Some(Witness::Cycle { nodes: vec![w1, w2] }));
        let v2 = sc_per_location_2(&d);
        assert_eq!(v2.witness, Some(Witness::Pair { x: w1, y: w2 }));
        let patterns = find_forbidden_patterns(&e, &d);
        assert_eq!(
            patterns,
            vec![PatternInstance {
                pattern: PatternKind::CoWW,
                first: w1,
                second: w2,
                via: None
            }]
        );
        for v in [v1, v2, five_patterns(&e, &d)] {
            assert!(v.witness_validates(&e, &d, None));
        }
    }

    #[test]
    fn co_rf_pattern_pair() {
        let (e, [r, w1, w2]) = corw_corf();
        let d = e.derive().unwrap();
        let v = sc_per_location_2(&d);
        assert_eq!(v.witness, Some(Witness::Pair { x: r, y: w1 }));
        assert!(d.com_plus.contains(w1, r));
        let p = find_forbidden_patterns(&e, &d);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].pattern, PatternKind::CoRWCoRf);
        assert_eq!(p[0].via, Some(w2));
        assert_eq!(p[0].cycle().nodes, vec![r, w1, w2]);
    }

    #[test]
    fn pattern_serialization_uses_tags() {
        let json = serde_json::to_string(&PatternKind::CoRRFrRf).unwrap();
        assert_eq!(json, r#""CoRR-frrf""#);
        let tags: Vec<&str> = PatternKind::ALL.iter().map(|p| p.tag()).collect();
        assert_eq!(tags, ["CoWW", "CoRW-rf", "CoWR-fr", "CoRW-corf", "CoRR-frrf"]);
    }

    #[test]
    fn framework_axioms_on_store_buffering() {
        let (e, _) = store_buffering(false, false);
        let all = check_all(&e, &ScArch).unwrap();
        assert!(!verdict(&all, Axiom::FullSc).holds);
        for axiom in [
            Axiom::ScPerLocation1,
            Axiom::NoThinAir,
            Axiom::Observation,
            Axiom::Propagation,
        ] {
            assert!(verdict(&all, axiom).holds, "{axiom}");
        }
        let d = e.derive().unwrap();
        assert!(no_thin_air(&e, &d, &StoreBufferArch).unwrap().holds);
    }

    #[test]
    fn empty_execution_satisfies_everything() {
        for arch in [&ScArch as &dyn Architecture, &StoreBufferArch] {
            let all = check_all(&Execution::empty(), arch).unwrap();
            assert_eq!(all.len(), 7);
            assert!(all.iter().all(|v| v.holds && v.witness.is_none()));
        }
    }

    struct Custom {
        prop: Vec<(EventId, EventId)>,
        ppo_extra: Vec<(EventId, EventId)>,
    }

    impl Architecture for Custom {
        fn name(&self) -> &str {
            "custom"
        }

        fn derive(&self, exec: &Execution, _: &DerivedRelations) -> ArchitectureResult {
            let n = exec.len();
            let mut ppo = Relation::empty(n);
            for &(a, b) in &self.ppo_extra {
                ppo.insert(a, b);
            }
            ArchitectureResult {
                ppo,
                fence: Relation::empty(n),
                prop: Relation::from_pairs(n, self.prop.iter().copied()).unwrap(),
            }
        }
    }

    #[test]
    fn propagation_detects_co_opposing_prop() {
        let (e, [ix, _, wx, ..]) = store_buffering(false, false);
        let d = e.derive().unwrap();
        let empty = Custom {
            prop: vec![],
            ppo_extra: vec![],
        };
        assert!(propagation(&e, &d, &empty).unwrap().holds);
        assert!(observation(&e, &d, &empty).unwrap().holds);
        let opposing = Custom {
            prop: vec![(wx, ix)],
            ppo_extra: vec![],
        };
        let v = propagation(&e, &d, &opposing).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(Witness::Cycle { nodes: vec![ix, wx] }));
    }

    #[test]
    fn observation_detects_fre_prop_hb_cycle() {
        // R y -fre-> W y1 -prop-> W x1 -ppo-> R y
        let (e, [_, _, wx, ry, wy, _]) = store_buffering(false, false);
        let d = e.derive().unwrap();
        let arch = Custom {
            prop: vec![(wy, wx)],
            ppo_extra: vec![(wx, ry)],
        };
        let v = observation(&e, &d, &arch).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(Witness::Event { event: ry }));
        let result = architecture_result(&e, &d, &arch).unwrap();
        assert!(v.witness_validates(&e, &d, Some(&result)));
    }

    #[test]
    fn invalid_architecture_rejected() {
        let (e, [ix, iy, wx, ry, ..]) = store_buffering(false, false);
        let d = e.derive().unwrap();
        let bad_ppo = Custom {
            prop: vec![],
            ppo_extra: vec![(ry, wx)],
        };
        assert!(matches!(
            no_thin_air(&e, &d, &bad_ppo),
            Err(Error::InvalidArchitecture { .. })
        ));
        let bad_prop = Custom {
            prop: vec![(ix, ry)],
            ppo_extra: vec![],
        };
        assert!(observation(&e, &d, &bad_prop).is_err());
        let fine = Custom {
            prop: vec![(ix, iy)],
            ppo_extra: vec![],
        };
        assert!(propagation(&e, &d, &fine).unwrap().holds);
    }

    #[test]
    fn store_buffer_arch_drops_write_read_pairs() {
        let (e, [_, _, wx, ry, ..]) = store_buffering(false, false);
        let d = e.derive().unwrap();
        let sb = StoreBufferArch.derive(&e, &d);
        assert!(e.po().contains(wx, ry));
        assert!(!sb.ppo.contains(wx, ry));
        let sc = ScArch.derive(&e, &d);
        assert_eq!(sc.ppo, *e.po());
        assert_eq!(sc.prop, *e.co());
    }

    #[test]
    fn architecture_lookup() {
        assert_eq!(architecture_by_name("SC-arch").unwrap().name(), "sc-arch");
        assert_eq!(architecture_by_name("sb").unwrap().name(), "sb-arch");
        assert!(matches!(
            architecture_by_name("power"),
            Err(Error::UnknownArchitecture(_))
        ));
    }
}
