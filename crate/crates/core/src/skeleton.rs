//! Event skeletons: the events of an execution before coherence order and
//! reads-from are chosen. The enumerator and both generators instantiate
//! executions from a skeleton by picking one coherence permutation per
//! address and one source write per read.

use crate::execution::{AddrId, Event, Execution, Kind, ProcId};
use crate::relation::{EventId, Relation};

#[derive(Clone, Debug)]
pub struct Skeleton {
    addresses: Vec<String>,
    events: Vec<Event>,
    /// Non-init writes per address, in event order.
    writes: Vec<Vec<EventId>>,
    /// Init write per address.
    inits: Vec<EventId>,
    reads: Vec<EventId>,
}

impl Skeleton {
    /// Starts a skeleton with one init write per address.
    pub fn new(addresses: Vec<String>, initial: impl Fn(&str) -> i64) -> Self {
        let mut s = Skeleton {
            writes: vec![Vec::new(); addresses.len()],
            inits: Vec::with_capacity(addresses.len()),
            events: Vec::new(),
            reads: Vec::new(),
            addresses,
        };
        for a in 0..s.addresses.len() {
            let value = initial(&s.addresses[a]);
            let id = s.push(ProcId::Init, Kind::Write, AddrId(a as u32), value);
            s.inits.push(id);
        }
        s
    }

    fn push(&mut self, proc: ProcId, kind: Kind, addr: AddrId, value: i64) -> EventId {
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

    /// Appends a program write; `po` follows the order of appends.
    pub fn write(&mut self, proc: u32, addr: AddrId, value: i64) -> EventId {
        let id = self.push(ProcId::Thread(proc), Kind::Write, addr, value);
        self.writes[addr.0 as usize].push(id);
        id
    }

    /// Appends a program read. Its value is fixed at instantiation.
    pub fn read(&mut self, proc: u32, addr: AddrId) -> EventId {
        let id = self.push(ProcId::Thread(proc), Kind::Read, addr, 0);
        self.reads.push(id);
        id
    }

    pub fn address_id(&self, name: &str) -> Option<AddrId> {
        self.addresses.iter().position(|a| a == name).map(|i| AddrId(i as u32))
    }

    pub fn addresses(&self) -> &[String] {
        &self.addresses
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn program_event_count(&self) -> usize {
        self.events.len() - self.inits.len()
    }

    pub fn program_writes(&self, addr: AddrId) -> &[EventId] {
        &self.writes[addr.0 as usize]
    }

    pub fn reads(&self) -> &[EventId] {
        &self.reads
    }

    /// Candidate sources for `read`: the init write, then program writes to
    /// the same address in event order.
    pub fn sources(&self, read: EventId) -> Vec<EventId> {
        let a = self.events[read.index()].addr.0 as usize;
        std::iter::once(self.inits[a])
            .chain(self.writes[a].iter().copied())
            .collect()
    }

    /// Builds the execution with `co_orders[a]` the coherence order of the
    /// program writes at address `a` (init first) and `sources[i]` the
    /// write read by the `i`-th read.
    pub fn instantiate(&self, co_orders: &[Vec<EventId>], sources: &[EventId]) -> Execution {
        assert_eq!(co_orders.len(), self.addresses.len());
        assert_eq!(sources.len(), self.reads.len());
        let n = self.events.len();
        let mut events = self.events.clone();
        let mut rf = Relation::empty(n);
        for (&r, &w) in self.reads.iter().zip(sources) {
            events[r.index()].value = self.events[w.index()].value;
            rf.insert(w, r);
        }
        let mut co = Relation::empty(n);
        for (a, order) in co_orders.iter().enumerate() {
            let chain: Vec<EventId> = std::iter::once(self.inits[a]).chain(order.iter().copied()).collect();
            for (i, &x) in chain.iter().enumerate() {
                for &y in &chain[i + 1..] {
                    co.insert(x, y);
                }
            }
        }
        Execution::new(self.addresses.clone(), events.clone(), program_order(&events), co, rf)
            .expect("skeleton events are dense and share one universe")
    }
}

/// `po` for events listed in per-process program order; init events are
/// left unordered.
pub fn program_order(events: &[Event]) -> Relation {
    let mut po = Relation::empty(events.len());
    for (i, a) in events.iter().enumerate() {
        if a.is_init() {
            continue;
        }
        for b in &events[i + 1..] {
            if b.proc == a.proc {
                po.insert(a.id, b.id);
            }
        }
    }
    po
}

/// All permutations of `items` in lexicographic order of positions.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Mixed-radix counter over `radices`, yielding every digit vector in
/// lexicographic order. A zero radix yields nothing.
pub fn odometer(radices: Vec<usize>) -> impl Iterator<Item = Vec<usize>> {
    let mut next = if radices.iter().all(|&r| r > 0) {
        Some(vec![0; radices.len()])
    } else {
        None
    };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut digits = current.clone();
        for i in (0..digits.len()).rev() {
            digits[i] += 1;
            if digits[i] < radices[i] {
                next = Some(digits);
                return Some(current);
            }
            digits[i] = 0;
        }
        Some(current)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations::<u8>(&[]), vec![Vec::<u8>::new()]);
        assert_eq!(permutations(&[1, 2, 3]).len(), 6);
        assert_eq!(permutations(&[1, 2]), vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn odometer_counts() {
        assert_eq!(odometer(vec![]).count(), 1);
        assert_eq!(odometer(vec![2, 3]).count(), 6);
        assert_eq!(odometer(vec![2, 0]).count(), 0);
        let all: Vec<Vec<usize>> = odometer(vec![2, 2]).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn instantiation_is_well_formed() {
        let mut s = Skeleton::new(vec!["x".into()], |_| 0);
        let x = s.address_id("x").unwrap();
        let w1 = s.write(0, x, 1);
        let w2 = s.write(1, x, 2);
        let r = s.read(0, x);
        assert_eq!(s.sources(r), vec![EventId(0), w1, w2]);
        let e = s.instantiate(&[vec![w2, w1]], &[w2]);
        assert!(e.validate().is_empty());
        assert_eq!(e.events()[r.index()].value, 2);
        assert!(e.co().contains(w2, w1));
        assert!(e.po().contains(w1, r));
    }
}
