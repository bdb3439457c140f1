//! Candidate executions `(events, po, co, rf)` and the relations derived
//! from them.
//!
//! Initial memory is modelled by explicit init writes: one per address,
//! owned by [`ProcId::Init`], value taken from the program's initial state,
//! coherence-first at their address and unordered by `po`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::{EventId, Relation};
use crate::skeleton::program_order;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "R")]
    Read,
    #[serde(rename = "W")]
    Write,
}

/// The process an event belongs to. Init writes live in their own process.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcId {
    Init,
    Thread(u32),
}

impl fmt::Display for ProcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcId::Init => write!(f, "init"),
            ProcId::Thread(n) => write!(f, "P{n}"),
        }
    }
}

impl FromStr for ProcId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "init" {
            return Ok(ProcId::Init);
        }
        s.strip_prefix('P')
            .and_then(|n| n.parse().ok())
            .map(ProcId::Thread)
            .ok_or_else(|| format!("bad process `{s}`"))
    }
}

impl Serialize for ProcId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ProcId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Index into an execution's address table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AddrId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Event {
    pub id: EventId,
    pub proc: ProcId,
    pub kind: Kind,
    pub addr: AddrId,
    pub value: i64,
}

impl Event {
    pub fn is_read(&self) -> bool {
        self.kind == Kind::Read
    }

    pub fn is_write(&self) -> bool {
        self.kind == Kind::Write
    }

    pub fn is_init(&self) -> bool {
        self.proc == ProcId::Init
    }
}

/// One broken well-formedness clause.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum Violation {
    PoCrossProcess { a: EventId, b: EventId },
    PoInvolvesInit { a: EventId, b: EventId },
    PoReflexive { event: EventId },
    PoNotTransitive { a: EventId, b: EventId, c: EventId },
    PoNotTotal { a: EventId, b: EventId },
    CoNotOnWrites { a: EventId, b: EventId },
    CoAddressMismatch { a: EventId, b: EventId },
    CoReflexive { event: EventId },
    CoNotTransitive { a: EventId, b: EventId, c: EventId },
    CoNotTotal { a: EventId, b: EventId },
    RfNotWriteToRead { a: EventId, b: EventId },
    RfAddressMismatch { write: EventId, read: EventId },
    RfValueMismatch { write: EventId, read: EventId },
    ReadWithoutRfSource { read: EventId },
    DuplicateRfSource { read: EventId, sources: Vec<EventId> },
}

impl Violation {
    /// Machine-readable clause name, e.g. `duplicate-rf-source`.
    pub fn name(&self) -> &'static str {
        match self {
            Violation::PoCrossProcess { .. } => "po-cross-process",
            Violation::PoInvolvesInit { .. } => "po-involves-init",
            Violation::PoReflexive { .. } => "po-reflexive",
            Violation::PoNotTransitive { .. } => "po-not-transitive",
            Violation::PoNotTotal { .. } => "po-not-total",
            Violation::CoNotOnWrites { .. } => "co-not-on-writes",
            Violation::CoAddressMismatch { .. } => "co-address-mismatch",
            Violation::CoReflexive { .. } => "co-reflexive",
            Violation::CoNotTransitive { .. } => "co-not-transitive",
            Violation::CoNotTotal { .. } => "co-not-total",
            Violation::RfNotWriteToRead { .. } => "rf-not-write-to-read",
            Violation::RfAddressMismatch { .. } => "rf-address-mismatch",
            Violation::RfValueMismatch { .. } => "rf-value-mismatch",
            Violation::ReadWithoutRfSource { .. } => "read-without-rf-source",
            Violation::DuplicateRfSource { .. } => "duplicate-rf-source",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PoReflexive { event } | Violation::CoReflexive { event } => {
                write!(f, "{} at {event}", self.name())
            }
            Violation::ReadWithoutRfSource { read } => write!(f, "{} for {read}", self.name()),
            Violation::DuplicateRfSource { read, sources } => {
                let s: Vec<String> = sources.iter().map(ToString::to_string).collect();
                write!(f, "{} for {read}: {}", self.name(), s.join(", "))
            }
            Violation::PoNotTransitive { a, b, c } | Violation::CoNotTransitive { a, b, c } => {
                write!(f, "{} via {a}, {b}, {c}", self.name())
            }
            Violation::RfAddressMismatch { write, read } | Violation::RfValueMismatch { write, read } => {
                write!(f, "{} between {write} and {read}", self.name())
            }
            Violation::PoCrossProcess { a, b }
            | Violation::PoInvolvesInit { a, b }
            | Violation::PoNotTotal { a, b }
            | Violation::CoNotOnWrites { a, b }
            | Violation::CoAddressMismatch { a, b }
            | Violation::CoNotTotal { a, b }
            | Violation::RfNotWriteToRead { a, b } => write!(f, "{} between {a} and {b}", self.name()),
        }
    }
}

/// An execution `(events, po, co, rf)`.
///
/// Construction only checks that identifiers are dense and that the three
/// relations share the event universe; use [`Execution::validate`] for the
/// well-formedness clauses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ExecutionDoc", try_from = "ExecutionDoc")]
pub struct Execution {
    addresses: Vec<String>,
    events: Vec<Event>,
    po: Relation,
    co: Relation,
    rf: Relation,
}

impl Execution {
    pub fn new(addresses: Vec<String>, events: Vec<Event>, po: Relation, co: Relation, rf: Relation) -> Result<Self> {
        for (i, e) in events.iter().enumerate() {
            if e.id.index() != i {
                return Err(Error::Document(format!("event at position {i} has id {}", e.id.0)));
            }
            if e.addr.0 as usize >= addresses.len() {
                return Err(Error::Document(format!("event {} has an unknown address", e.id)));
            }
        }
        for r in [&po, &co, &rf] {
            if r.universe_size() != events.len() {
                return Err(Error::UniverseMismatch {
                    left: events.len(),
                    right: r.universe_size(),
                });
            }
        }
        Ok(Execution {
            addresses,
            events,
            po,
            co,
            rf,
        })
    }

    pub fn builder() -> ExecutionBuilder {
        ExecutionBuilder::default()
    }

    pub fn empty() -> Self {
        Execution {
            addresses: Vec::new(),
            events: Vec::new(),
            po: Relation::empty(0),
            co: Relation::empty(0),
            rf: Relation::empty(0),
        }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn event(&self, id: EventId) -> Result<&Event> {
        self.events.get(id.index()).ok_or(Error::UnknownEvent(id))
    }

    pub fn addresses(&self) -> &[String] {
        &self.addresses
    }

    pub fn address_name(&self, addr: AddrId) -> &str {
        &self.addresses[addr.0 as usize]
    }

    pub fn address_id(&self, name: &str) -> Option<AddrId> {
        self.addresses.iter().position(|a| a == name).map(|i| AddrId(i as u32))
    }

    pub fn po(&self) -> &Relation {
        &self.po
    }

    pub fn co(&self) -> &Relation {
        &self.co
    }

    pub fn rf(&self) -> &Relation {
        &self.rf
    }

    pub fn same_address(&self, a: EventId, b: EventId) -> bool {
        self.events[a.index()].addr == self.events[b.index()].addr
    }

    pub fn same_process(&self, a: EventId, b: EventId) -> bool {
        self.events[a.index()].proc == self.events[b.index()].proc
    }

    pub fn reads(&self) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(|e| e.is_read())
    }

    pub fn writes(&self) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(|e| e.is_write())
    }

    /// Human-readable label such as `P0:W x=1`.
    pub fn describe(&self, id: EventId) -> String {
        match self.events.get(id.index()) {
            Some(e) => {
                let k = if e.is_read() { "R" } else { "W" };
                format!("{id}({}:{k} {}={})", e.proc, self.address_name(e.addr), e.value)
            }
            None => id.to_string(),
        }
    }

    /// Checks every well-formedness clause, returning one entry per
    /// violation. An empty list means the execution is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        self.validate_po(&mut out);
        self.validate_co(&mut out);
        self.validate_rf(&mut out);
        out
    }

    fn validate_po(&self, out: &mut Vec<Violation>) {
        for (a, b) in self.po.iter() {
            let (ea, eb) = (&self.events[a.index()], &self.events[b.index()]);
            if ea.is_init() || eb.is_init() {
                out.push(Violation::PoInvolvesInit { a, b });
            } else if ea.proc != eb.proc {
                out.push(Violation::PoCrossProcess { a, b });
            }
        }
        let program: Vec<&Event> = self.events.iter().filter(|e| !e.is_init()).collect();
        strict_total_order(
            &self.po,
            &program,
            |x, y| x.proc == y.proc,
            |event| Violation::PoReflexive { event },
            |a, b, c| Violation::PoNotTransitive { a, b, c },
            |a, b| Violation::PoNotTotal { a, b },
            out,
        );
    }

    fn validate_co(&self, out: &mut Vec<Violation>) {
        for (a, b) in self.co.iter() {
            let (ea, eb) = (&self.events[a.index()], &self.events[b.index()]);
            if !ea.is_write() || !eb.is_write() {
                out.push(Violation::CoNotOnWrites { a, b });
            } else if ea.addr != eb.addr {
                out.push(Violation::CoAddressMismatch { a, b });
            }
        }
        let writes: Vec<&Event> = self.writes().collect();
        strict_total_order(
            &self.co,
            &writes,
            |x, y| x.addr == y.addr,
            |event| Violation::CoReflexive { event },
            |a, b, c| Violation::CoNotTransitive { a, b, c },
            |a, b| Violation::CoNotTotal { a, b },
            out,
        );
    }

    fn validate_rf(&self, out: &mut Vec<Violation>) {
        for (w, r) in self.rf.iter() {
            let (ew, er) = (&self.events[w.index()], &self.events[r.index()]);
            if !ew.is_write() || !er.is_read() {
                out.push(Violation::RfNotWriteToRead { a: w, b: r });
            } else if ew.addr != er.addr {
                out.push(Violation::RfAddressMismatch { write: w, read: r });
            } else if ew.value != er.value {
                out.push(Violation::RfValueMismatch { write: w, read: r });
            }
        }
        let rf_inv = self.rf.inverse();
        for r in self.reads() {
            let sources: Vec<EventId> = rf_inv.successors(r.id).collect();
            match sources.len() {
                0 => out.push(Violation::ReadWithoutRfSource { read: r.id }),
                1 => {}
                _ => out.push(Violation::DuplicateRfSource { read: r.id, sources }),
            }
        }
    }

    /// The unique write `read` takes its value from.
    pub fn rf_inv(&self, read: EventId) -> Result<EventId> {
        let e = self.event(read)?;
        if !e.is_read() {
            return Err(Error::NotARead(read));
        }
        let mut sources = (0..self.len())
            .map(EventId::from)
            .filter(|&w| self.rf.contains(w, read));
        match (sources.next(), sources.next()) {
            (Some(w), None) if self.events[w.index()].is_write() => Ok(w),
            (None, _) => Err(Error::IllFormed(vec![Violation::ReadWithoutRfSource { read }])),
            (Some(w), None) => Err(Error::IllFormed(vec![Violation::RfNotWriteToRead { a: w, b: read }])),
            (Some(a), Some(b)) => {
                let mut all = vec![a, b];
                all.extend(sources);
                Err(Error::IllFormed(vec![Violation::DuplicateRfSource {
                    read,
                    sources: all,
                }]))
            }
        }
    }

    /// Computes fr, com, pol, rfe, fre and com⁺. Fails on ill-formed input.
    pub fn derive(&self) -> Result<DerivedRelations> {
        self.ensure_well_formed()?;
        Ok(self.derive_unchecked())
    }

    fn derive_unchecked(&self) -> DerivedRelations {
        let fr = self.compute_fr();
        let com = self.com_from(&fr);
        let pol = self.po.filter(|a, b| self.same_address(a, b));
        let rfe = self.rf.filter(|a, b| !self.same_process(a, b));
        let fre = fr.filter(|a, b| !self.same_process(a, b));
        let com_plus = com.transitive_closure();
        DerivedRelations {
            fr,
            com,
            pol,
            rfe,
            fre,
            com_plus,
        }
    }

    /// com⁺ assembled as `com ∪ (co;rf) ∪ (fr;rf)` without taking a closure.
    pub fn com_plus_rewrite(&self) -> Result<Relation> {
        self.ensure_well_formed()?;
        let fr = self.compute_fr();
        let co_rf = self.co.compose(&self.rf)?;
        let fr_rf = fr.compose(&self.rf)?;
        self.com_from(&fr).union(&co_rf)?.union(&fr_rf)
    }

    pub fn ensure_well_formed(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::IllFormed(violations))
        }
    }

    fn compute_fr(&self) -> Relation {
        self.rf
            .inverse()
            .compose(&self.co)
            .expect("po, co and rf share one universe")
    }

    fn com_from(&self, fr: &Relation) -> Relation {
        self.co
            .union(&self.rf)
            .and_then(|r| r.union(fr))
            .expect("po, co and rf share one universe")
    }
}

/// Relation restricted to `members`, checked for being a strict total
/// order on each class of `related`.
fn strict_total_order(
    rel: &Relation,
    members: &[&Event],
    related: impl Fn(&Event, &Event) -> bool,
    reflexive: impl Fn(EventId) -> Violation,
    intransitive: impl Fn(EventId, EventId, EventId) -> Violation,
    partial: impl Fn(EventId, EventId) -> Violation,
    out: &mut Vec<Violation>,
) {
    for x in members {
        if rel.contains(x.id, x.id) {
            out.push(reflexive(x.id));
        }
    }
    for x in members {
        for y in members {
            if x.id >= y.id || !related(x, y) {
                continue;
            }
            if !rel.contains(x.id, y.id) && !rel.contains(y.id, x.id) {
                out.push(partial(x.id, y.id));
            }
        }
    }
    for (a, b) in rel.iter() {
        for c in rel.successors(b) {
            if !rel.contains(a, c) {
                out.push(intransitive(a, b, c));
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedRelations {
    pub fr: Relation,
    pub com: Relation,
    pub pol: Relation,
    pub rfe: Relation,
    pub fre: Relation,
    pub com_plus: Relation,
}

/// Incremental construction of an [`Execution`].
///
/// Program events are `po`-ordered in the order they are added to each
/// process; the resulting `po` is transitively closed.
#[derive(Default, Debug)]
pub struct ExecutionBuilder {
    addresses: Vec<String>,
    events: Vec<Event>,
    co: Vec<(EventId, EventId)>,
    rf: Vec<(EventId, EventId)>,
}

impl ExecutionBuilder {
    fn intern(&mut self, addr: &str) -> AddrId {
        match self.addresses.iter().position(|a| a == addr) {
            Some(i) => AddrId(i as u32),
            None => {
                self.addresses.push(addr.to_string());
                AddrId(self.addresses.len() as u32 - 1)
            }
        }
    }

    pub fn event(&mut self, proc: ProcId, kind: Kind, addr: &str, value: i64) -> EventId {
        let addr = self.intern(addr);
        let id = EventId::from(self.events.len());
        self.events.push(Event {
            id,
            proc,
            kind,
            addr,
            value,
        });
        id
    }

    /// An init write of `value`.
    pub fn init(&mut self, addr: &str, value: i64) -> EventId {
        self.event(ProcId::Init, Kind::Write, addr, value)
    }

    pub fn write(&mut self, proc: u32, addr: &str, value: i64) -> EventId {
        self.event(ProcId::Thread(proc), Kind::Write, addr, value)
    }

    pub fn read(&mut self, proc: u32, addr: &str, value: i64) -> EventId {
        self.event(ProcId::Thread(proc), Kind::Read, addr, value)
    }

    /// Orders `writes` in coherence order, adding every implied pair.
    pub fn co_chain(&mut self, writes: &[EventId]) -> &mut Self {
        for (i, &a) in writes.iter().enumerate() {
            for &b in &writes[i + 1..] {
                self.co.push((a, b));
            }
        }
        self
    }

    pub fn co(&mut self, a: EventId, b: EventId) -> &mut Self {
        self.co.push((a, b));
        self
    }

    pub fn rf(&mut self, write: EventId, read: EventId) -> &mut Self {
        self.rf.push((write, read));
        self
    }

    pub fn build(&self) -> Result<Execution> {
        let n = self.events.len();
        let po = program_order(&self.events);
        let co = Relation::from_pairs(n, self.co.iter().copied())?;
        let rf = Relation::from_pairs(n, self.rf.iter().copied())?;
        Execution::new(self.addresses.clone(), self.events.clone(), po, co, rf)
    }
}

/// On-disk form of an execution.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExecutionDoc {
    pub events: Vec<EventDoc>,
    pub po: Vec<(EventId, EventId)>,
    pub co: Vec<(EventId, EventId)>,
    pub rf: Vec<(EventId, EventId)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EventDoc {
    pub id: EventId,
    pub proc: ProcId,
    pub kind: Kind,
    pub addr: String,
    pub value: i64,
}

impl From<Execution> for ExecutionDoc {
    fn from(e: Execution) -> Self {
        ExecutionDoc {
            events: e
                .events
                .iter()
                .map(|ev| EventDoc {
                    id: ev.id,
                    proc: ev.proc,
                    kind: ev.kind,
                    addr: e.address_name(ev.addr).to_string(),
                    value: ev.value,
                })
                .collect(),
            po: e.po.iter().collect(),
            co: e.co.iter().collect(),
            rf: e.rf.iter().collect(),
        }
    }
}

impl TryFrom<ExecutionDoc> for Execution {
    type Error = Error;

    fn try_from(doc: ExecutionDoc) -> Result<Self> {
        let mut addresses: Vec<String> = Vec::new();
        let mut index: HashMap<String, AddrId> = HashMap::new();
        let mut events = Vec::with_capacity(doc.events.len());
        for ev in &doc.events {
            let addr = *index.entry(ev.addr.clone()).or_insert_with(|| {
                addresses.push(ev.addr.clone());
                AddrId(addresses.len() as u32 - 1)
            });
            events.push(Event {
                id: ev.id,
                proc: ev.proc,
                kind: ev.kind,
                addr,
                value: ev.value,
            });
        }
        let n = events.len();
        Execution::new(
            addresses,
            events,
            Relation::from_pairs(n, doc.po)?,
            Relation::from_pairs(n, doc.co)?,
            Relation::from_pairs(n, doc.rf)?,
        )
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn set(pairs: &[(EventId, EventId)]) -> std::collections::BTreeSet<(EventId, EventId)> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn empty_execution_is_well_formed() {
        assert!(Execution::empty().validate().is_empty());
        let d = Execution::empty().derive().unwrap();
        assert!(d.com_plus.is_empty());
    }

    #[test]
    fn store_buffering_is_well_formed() {
        for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
            let (e, _) = store_buffering(a, b);
            assert_eq!(e.validate(), vec![]);
        }
    }

    #[test]
    fn duplicate_rf_source_reported() {
        let mut b = Execution::builder();
        let ix = b.init("x", 0);
        let w = b.write(0, "x", 0);
        let r = b.read(1, "x", 0);
        b.co(ix, w).rf(ix, r).rf(w, r);
        let v = b.build().unwrap().validate();
        assert_eq!(
            v,
            vec![Violation::DuplicateRfSource {
                read: r,
                sources: vec![ix, w]
            }]
        );
        assert_eq!(v[0].name(), "duplicate-rf-source");
    }

    #[test]
    fn each_clause_has_a_violation() {
        let mut b = Execution::builder();
        let ix = b.init("x", 0);
        let iy = b.init("y", 0);
        let w1 = b.write(0, "x", 1);
        let w2 = b.write(1, "x", 2);
        let r = b.read(1, "y", 5);
        let r2 = b.read(2, "x", 0);
        b.co(ix, w1).co(w1, w2).co(iy, w1).rf(iy, r).rf(w1, r2);
        let names: Vec<&str> = b.build().unwrap().validate().iter().map(Violation::name).collect();
        assert!(names.contains(&"co-address-mismatch"));
        assert!(names.contains(&"co-not-transitive"));
        assert!(names.contains(&"co-not-total"));
        assert!(names.contains(&"rf-value-mismatch"));

        let mut b = Execution::builder();
        let ix = b.init("x", 0);
        let r = b.read(0, "x", 0);
        b.rf(r, r).co(r, ix);
        let names: Vec<&str> = b.build().unwrap().validate().iter().map(Violation::name).collect();
        assert!(names.contains(&"rf-not-write-to-read"));
        assert!(names.contains(&"co-not-on-writes"));

        let mut b = Execution::builder();
        b.read(0, "x", 0);
        let names: Vec<&str> = b.build().unwrap().validate().iter().map(Violation::name).collect();
        assert_eq!(names, vec!["read-without-rf-source"]);
    }

    #[test]
    fn po_clauses() {
        let mut b = Execution::builder();
        let ix = b.init("x", 0);
        let a = b.write(0, "x", 1);
        let c = b.write(1, "x", 2);
        b.co_chain(&[ix, a, c]);
        let e = b.build().unwrap();
        let mut po = e.po().clone();
        po.insert(a, c);
        po.insert(ix, a);
        po.insert(c, c);
        let bad = Execution::new(
            e.addresses().to_vec(),
            e.events().to_vec(),
            po,
            e.co().clone(),
            e.rf().clone(),
        )
        .unwrap();
        let names: Vec<&str> = bad.validate().iter().map(Violation::name).collect();
        assert!(names.contains(&"po-cross-process"));
        assert!(names.contains(&"po-involves-init"));
        assert!(names.contains(&"po-reflexive"));

        let mut b = Execution::builder();
        let ix = b.init("x", 0);
        let a = b.write(0, "x", 1);
        let c = b.write(0, "x", 2);
        b.co_chain(&[ix, a, c]);
        let e = b.build().unwrap();
        let bad = Execution::new(
            e.addresses().to_vec(),
            e.events().to_vec(),
            Relation::empty(3),
            e.co().clone(),
            e.rf().clone(),
        )
        .unwrap();
        assert_eq!(bad.validate(), vec![Violation::PoNotTotal { a, b: c }]);
    }

    #[test]
    fn rf_inv_finds_unique_source() {
        let (e, [ix, _, wx, ry, _, rx]) = store_buffering(false, true);
        assert_eq!(e.rf_inv(rx).unwrap(), wx);
        assert!(matches!(e.rf_inv(wx), Err(Error::NotARead(_))));
        let (e, _) = store_buffering(false, false);
        assert_eq!(e.rf_inv(rx).unwrap(), ix);
        assert!(e.rf_inv(ry).is_ok());

        let (e, [_, _, _, r11, ..]) = location_view();
        assert_eq!(e.rf_inv(r11).unwrap(), EventId(0));
        assert!(matches!(e.rf_inv(EventId(99)), Err(Error::UnknownEvent(_))));

        let mut b = Execution::builder();
        let r = b.read(0, "x", 0);
        assert!(matches!(b.build().unwrap().rf_inv(r), Err(Error::IllFormed(_))));
    }

    #[test]
    fn location_view_com_edges() {
        let (e, [w1, w2, w3, r11, r12, r21, r31]) = location_view();
        let d = e.derive().unwrap();
        let co = [(w1, w2), (w1, w3), (w2, w3)];
        let rf = [(w1, r11), (w1, r12), (w2, r21), (w3, r31)];
        let fr = [(r11, w2), (r11, w3), (r12, w2), (r12, w3), (r21, w3)];
        let fr_got: Vec<_> = d.fr.iter().collect();
        assert_eq!(set(&fr_got), set(&fr));
        let mut all = co.to_vec();
        all.extend(rf);
        all.extend(fr);
        let com: Vec<_> = d.com.iter().collect();
        assert_eq!(set(&com), set(&all));
        // fr as rf⁻¹;co directly through the relation algebra.
        assert_eq!(e.rf().inverse().compose(e.co()).unwrap(), d.fr);
        assert!(d.fr.contains(r11, w2) && d.fr.contains(r11, w3));
    }

    #[test]
    fn derived_relations_on_store_buffering() {
        let (e, [ix, iy, wx, ry, wy, rx]) = store_buffering(false, false);
        let d = e.derive().unwrap();
        assert!(d.pol.is_empty());
        assert_eq!(set(&d.fre.iter().collect::<Vec<_>>()), set(&[(ry, wy), (rx, wx)]));
        assert_eq!(set(&d.rfe.iter().collect::<Vec<_>>()), set(&[(iy, ry), (ix, rx)]));
        assert!(d.com_plus.is_irreflexive());
    }

    #[test]
    fn no_reads_means_no_fr() {
        let mut b = Execution::builder();
        let ix = b.init("x", 0);
        let w = b.write(0, "x", 1);
        b.co(ix, w);
        let e = b.build().unwrap();
        let d = e.derive().unwrap();
        assert!(d.fr.is_empty());
        assert_eq!(e.com_plus_rewrite().unwrap(), *e.co());
        assert_eq!(d.com_plus, *e.co());
    }

    #[test]
    fn rewrite_contains_co_rf_edge() {
        let (e, [w1, _, _, _, _, r21, _]) = location_view();
        let rewrite = e.com_plus_rewrite().unwrap();
        assert!(rewrite.contains(w1, r21));
        assert_eq!(rewrite, e.derive().unwrap().com_plus);
    }

    #[test]
    fn derive_rejects_ill_formed() {
        let mut b = Execution::builder();
        b.read(0, "x", 0);
        let e = b.build().unwrap();
        assert!(matches!(e.derive(), Err(Error::IllFormed(_))));
        assert!(e.com_plus_rewrite().is_err());
    }

    #[test]
    fn json_round_trip() {
        let (e, _) = location_view();
        let text = serde_json::to_string(&e).unwrap();
        let back: Execution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
        assert!(text.contains(r#""proc":"init""#));
        let bad = r#"{"events":[{"id":1,"proc":"P0","kind":"W","addr":"x","value":1}],"po":[],"co":[],"rf":[]}"#;
        assert!(serde_json::from_str::<Execution>(bad).is_err());
    }
}
