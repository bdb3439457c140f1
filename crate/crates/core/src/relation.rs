//! Finite binary relations over dense event identifiers.
//!
//! A [`Relation`] is a square bit matrix: row `a` holds the successors of
//! event `a`. The universe is always `0..n` for the `n` events of one
//! execution, which is what makes identity (and hence reflexive closure)
//! well defined.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of one event, dense within a single execution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(pub u32);

impl EventId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for EventId {
    fn from(i: usize) -> Self {
        EventId(i as u32)
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Relation {
    /// The empty relation over the universe `0..size`.
    pub fn empty(size: usize) -> Self {
        let words = size.div_ceil(WORD).max(1);
        Relation {
            size,
            words,
            bits: vec![0; words * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut r = Relation::empty(size);
        for i in 0..size {
            r.set(i, i);
        }
        r
    }

    pub fn from_pairs<I, A>(size: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, A)>,
        A: Into<EventId>,
    {
        let mut r = Relation::empty(size);
        for (a, b) in pairs {
            r.try_insert(a.into(), b.into())?;
        }
        Ok(r)
    }

    /// Number of events in the universe.
    pub fn universe_size(&self) -> usize {
        self.size
    }

    pub fn try_insert(&mut self, a: EventId, b: EventId) -> Result<()> {
        for e in [a, b] {
            if e.index() >= self.size {
                return Err(Error::OutOfUniverse {
                    event: e,
                    size: self.size,
                });
            }
        }
        self.set(a.index(), b.index());
        Ok(())
    }

    /// Inserts a pair.
    ///
    /// Panics if either endpoint lies outside the universe.
    pub fn insert(&mut self, a: EventId, b: EventId) {
        if let Err(e) = self.try_insert(a, b) {
            panic!("{e}");
        }
    }

    pub fn remove(&mut self, a: EventId, b: EventId) {
        if a.index() < self.size && b.index() < self.size {
            let (w, m) = self.locate(a.index(), b.index());
            self.bits[w] &= !m;
        }
    }

    pub fn contains(&self, a: EventId, b: EventId) -> bool {
        a.index() < self.size && b.index() < self.size && self.get(a.index(), b.index())
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// All pairs in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (EventId, EventId)> + '_ {
        (0..self.size).flat_map(move |a| self.successors(EventId::from(a)).map(move |b| (EventId::from(a), b)))
    }

    /// Successors of `a` in ascending order.
    pub fn successors(&self, a: EventId) -> impl Iterator<Item = EventId> + '_ {
        let row: &[u64] = if a.index() < self.size {
            self.row(a.index())
        } else {
            &[]
        };
        row.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(EventId::from(wi * WORD + t))
            })
        })
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.check_universe(other)?;
        let mut out = self.clone();
        for (dst, src) in out.bits.iter_mut().zip(&other.bits) {
            *dst |= *src;
        }
        Ok(out)
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.check_universe(other)?;
        let mut out = self.clone();
        for (dst, src) in out.bits.iter_mut().zip(&other.bits) {
            *dst &= *src;
        }
        Ok(out)
    }

    /// Sequencing: `(x, y)` is present iff some `p` has `x self p` and `p other y`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        self.check_universe(other)?;
        let mut out = Relation::empty(self.size);
        for x in 0..self.size {
            for p in self.successors(EventId::from(x)) {
                let (src, dst) = (other.row_range(p.index()), out.row_range(x));
                for k in 0..self.words {
                    out.bits[dst.start + k] |= other.bits[src.start + k];
                }
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Relation {
        let mut out = Relation::empty(self.size);
        for (a, b) in self.iter() {
            out.set(b.index(), a.index());
        }
        out
    }

    /// Keeps the pairs satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(EventId, EventId) -> bool) -> Relation {
        let mut out = Relation::empty(self.size);
        for (a, b) in self.iter() {
            if keep(a, b) {
                out.set(a.index(), b.index());
            }
        }
        out
    }

    pub fn is_subset(&self, other: &Relation) -> Result<bool> {
        self.check_universe(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    /// The smallest transitive relation containing `self`. Reflexive pairs
    /// appear only for events that lie on a cycle.
    pub fn transitive_closure(&self) -> Relation {
        let mut out = self.clone();
        let words = self.words;
        for k in 0..self.size {
            let k_row = out.row_range(k);
            for i in 0..self.size {
                if out.get(i, k) {
                    let i_row = out.row_range(i);
                    for w in 0..words {
                        let v = out.bits[k_row.start + w];
                        out.bits[i_row.start + w] |= v;
                    }
                }
            }
        }
        out
    }

    pub fn reflexive_transitive_closure(&self) -> Relation {
        let mut out = self.transitive_closure();
        for i in 0..self.size {
            out.set(i, i);
        }
        out
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.size).all(|i| !self.get(i, i))
    }

    /// Kahn's algorithm: acyclic iff every node can be peeled off at
    /// in-degree zero.
    pub fn is_acyclic(&self) -> bool {
        let mut indegree = vec![0usize; self.size];
        for (_, b) in self.iter() {
            indegree[b.index()] += 1;
        }
        let mut ready: Vec<usize> = (0..self.size).filter(|&i| indegree[i] == 0).collect();
        let mut removed = 0;
        while let Some(n) = ready.pop() {
            removed += 1;
            for s in self.successors(EventId::from(n)) {
                indegree[s.index()] -= 1;
                if indegree[s.index()] == 0 {
                    ready.push(s.index());
                }
            }
        }
        removed == self.size
    }

    /// A shortest directed cycle, rotated so its smallest event comes first.
    ///
    /// Among cycles of minimal length the one through the smallest start
    /// event is chosen, with breadth-first search visiting successors in
    /// ascending order, so the result is deterministic.
    pub fn find_cycle(&self) -> Option<CycleWitness> {
        let mut best: Option<Vec<EventId>> = None;
        for start in 0..self.size {
            let bound = best.as_ref().map_or(usize::MAX, Vec::len);
            if let Some(path) = self.shortest_cycle_through(start, bound) {
                if path.len() < bound {
                    best = Some(path);
                }
            }
        }
        best.map(CycleWitness::canonical)
    }

    fn shortest_cycle_through(&self, start: usize, bound: usize) -> Option<Vec<EventId>> {
        if self.get(start, start) {
            return Some(vec![EventId::from(start)]);
        }
        let mut parent: Vec<Option<usize>> = vec![None; self.size];
        let mut depth = vec![usize::MAX; self.size];
        let mut queue = VecDeque::new();
        depth[start] = 0;
        queue.push_back(start);
        while let Some(n) = queue.pop_front() {
            if depth[n] + 1 >= bound {
                break;
            }
            for s in self.successors(EventId::from(n)) {
                let s = s.index();
                if s == start {
                    let mut path = vec![EventId::from(n)];
                    let mut cur = n;
                    while let Some(p) = parent[cur] {
                        path.push(EventId::from(p));
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                if depth[s] == usize::MAX {
                    depth[s] = depth[n] + 1;
                    parent[s] = Some(n);
                    queue.push_back(s);
                }
            }
        }
        None
    }

    fn check_universe(&self, other: &Relation) -> Result<()> {
        if self.size != other.size {
            return Err(Error::UniverseMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }

    fn locate(&self, a: usize, b: usize) -> (usize, u64) {
        (a * self.words + b / WORD, 1u64 << (b % WORD))
    }

    fn set(&mut self, a: usize, b: usize) {
        let (w, m) = self.locate(a, b);
        self.bits[w] |= m;
    }

    fn get(&self, a: usize, b: usize) -> bool {
        let (w, m) = self.locate(a, b);
        self.bits[w] & m != 0
    }

    fn row_range(&self, a: usize) -> std::ops::Range<usize> {
        a * self.words..(a + 1) * self.words
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.bits[self.row_range(a)]
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation({}; ", self.size)?;
        f.debug_set().entries(self.iter().map(|(a, b)| (a.0, b.0))).finish()?;
        write!(f, ")")
    }
}

/// A directed cycle `n0 -> n1 -> ... -> nk -> n0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleWitness {
    pub nodes: Vec<EventId>,
}

impl CycleWitness {
    /// Rotates `nodes` so that the smallest identifier comes first.
    ///
    /// Panics on an empty node list.
    pub fn canonical(mut nodes: Vec<EventId>) -> Self {
        assert!(!nodes.is_empty(), "a cycle has at least one node");
        let min_pos = nodes
            .iter()
            .enumerate()
            .min_by_key(|(_, n)| **n)
            .map(|(i, _)| i)
            .unwrap_or(0);
        nodes.rotate_left(min_pos);
        CycleWitness { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Consecutive edges, including the closing edge back to the first node.
    pub fn edges(&self) -> impl Iterator<Item = (EventId, EventId)> + '_ {
        let n = self.nodes.len();
        (0..n).map(move |i| (self.nodes[i], self.nodes[(i + 1) % n]))
    }

    /// True iff every edge of the cycle is in `rel`.
    pub fn validates(&self, rel: &Relation) -> bool {
        !self.nodes.is_empty() && self.edges().all(|(a, b)| rel.contains(a, b))
    }
}

impl fmt::Display for CycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            write!(f, "{n} -> ")?;
        }
        match self.nodes.first() {
            Some(first) => write!(f, "{first}"),
            None => Ok(()),
        }
    }
}
