//! Random and exhaustive sources of well-formed executions for property
//! tests and oracle comparisons.
//!
//! Both build an event skeleton first, then pick a coherence permutation
//! per address and a source write per read, the same choice points the
//! litmus enumerator walks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::execution::{AddrId, Execution};
use crate::relation::EventId;
use crate::skeleton::{odometer, permutations, Skeleton};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    /// Upper bound on program (non-init) events; 0 yields init writes only.
    pub max_events: usize,
    pub max_procs: usize,
    pub max_addrs: usize,
    /// Probability that a program event is a read.
    pub read_fraction: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_events: 8,
            max_procs: 3,
            max_addrs: 2,
            read_fraction: 0.5,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_procs == 0 || self.max_addrs == 0 {
            return Err(Error::Config("max_procs and max_addrs must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.read_fraction) {
            return Err(Error::Config(format!(
                "read_fraction {} is outside [0, 1]",
                self.read_fraction
            )));
        }
        Ok(())
    }
}

fn address_names(n: usize) -> Vec<String> {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    (0..n)
        .map(|i| NAMES.get(i).map_or_else(|| format!("m{i}"), |s| s.to_string()))
        .collect()
}

/// A deterministic stream of random well-formed executions.
pub struct ExecutionGenerator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

impl ExecutionGenerator {
    pub fn new(cfg: GenConfig) -> Result<Self> {
        cfg.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(ExecutionGenerator { cfg, rng })
    }

    pub fn generate(&mut self) -> Execution {
        let rng = &mut self.rng;
        let n_events = rng.gen_range(0..=self.cfg.max_events);
        let n_procs = rng.gen_range(1..=self.cfg.max_procs) as u32;
        let n_addrs = rng.gen_range(1..=self.cfg.max_addrs);

        let mut skeleton = Skeleton::new(address_names(n_addrs), |_| 0);
        let mut next_value = vec![1i64; n_addrs];
        for _ in 0..n_events {
            let proc = rng.gen_range(0..n_procs);
            let a = rng.gen_range(0..n_addrs);
            if rng.gen_bool(self.cfg.read_fraction) {
                skeleton.read(proc, AddrId(a as u32));
            } else {
                skeleton.write(proc, AddrId(a as u32), next_value[a]);
                next_value[a] += 1;
            }
        }

        let co: Vec<Vec<EventId>> = (0..n_addrs)
            .map(|a| {
                let mut order = skeleton.program_writes(AddrId(a as u32)).to_vec();
                order.shuffle(rng);
                order
            })
            .collect();
        let rf: Vec<EventId> = skeleton
            .reads()
            .iter()
            .map(|&r| *skeleton.sources(r).choose(rng).expect("init write is always a source"))
            .collect();
        skeleton.instantiate(&co, &rf)
    }
}

impl Iterator for ExecutionGenerator {
    type Item = Execution;

    fn next(&mut self) -> Option<Execution> {
        Some(self.generate())
    }
}

/// The first execution of the stream seeded by `cfg`.
pub fn gen_execution(cfg: &GenConfig) -> Result<Execution> {
    Ok(ExecutionGenerator::new(cfg.clone())?.generate())
}

pub const MAX_EXHAUSTIVE_EVENTS: usize = 5;

/// Ordered splits of `n` into positive parts.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Restricted growth strings of length `n`: address labellings where each
/// new address is the next unused one.
fn address_labellings(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for a in 0..=max {
            prefix.push(a);
            go(prefix, if a == max { max + 1 } else { max }, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 0, n, &mut out);
    out
}

/// Event shape: process sizes, then kind and address per program event.
#[derive(Clone, Debug)]
struct Shape {
    procs: Vec<usize>,
    writes: Vec<bool>,
    addrs: Vec<usize>,
}

impl Shape {
    fn skeleton(&self) -> Skeleton {
        let n_addrs = self.addrs.iter().max().map_or(0, |m| m + 1);
        let mut s = Skeleton::new(address_names(n_addrs), |_| 0);
        let mut next_value = vec![1i64; n_addrs];
        let mut i = 0;
        for (p, &len) in self.procs.iter().enumerate() {
            for _ in 0..len {
                let a = self.addrs[i];
                if self.writes[i] {
                    s.write(p as u32, AddrId(a as u32), next_value[a]);
                    next_value[a] += 1;
                } else {
                    s.read(p as u32, AddrId(a as u32));
                }
                i += 1;
            }
        }
        s
    }
}

fn shapes(max_events: usize) -> impl Iterator<Item = Shape> {
    (1..=max_events).flat_map(|n| {
        let labellings = address_labellings(n);
        compositions(n).into_iter().flat_map(move |procs| {
            let labellings = labellings.clone();
            (0u32..(1 << n)).flat_map(move |mask| {
                let writes: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
                let procs = procs.clone();
                labellings.clone().into_iter().map(move |addrs| Shape {
                    procs: procs.clone(),
                    writes: writes.clone(),
                    addrs,
                })
            })
        })
    })
}

fn executions_of(skeleton: Skeleton) -> impl Iterator<Item = Execution> {
    let n_addrs = skeleton.addresses().len();
    let co_choices: Vec<Vec<Vec<EventId>>> = (0..n_addrs)
        .map(|a| permutations(skeleton.program_writes(AddrId(a as u32))))
        .collect();
    let rf_choices: Vec<Vec<EventId>> = skeleton.reads().iter().map(|&r| skeleton.sources(r)).collect();
    let mut radices: Vec<usize> = co_choices.iter().map(Vec::len).collect();
    radices.extend(rf_choices.iter().map(Vec::len));
    odometer(radices).map(move |digits| {
        let co: Vec<Vec<EventId>> = digits[..n_addrs]
            .iter()
            .zip(&co_choices)
            .map(|(&d, c)| c[d].clone())
            .collect();
        let rf: Vec<EventId> = digits[n_addrs..].iter().zip(&rf_choices).map(|(&d, c)| c[d]).collect();
        skeleton.instantiate(&co, &rf)
    })
}

/// Every well-formed execution with 1 to `max_events` program events, up
/// to relabelling of addresses. Processes are listed in order, so shapes
/// that differ only by a permutation of processes all appear.
pub fn exhaustive_executions(max_events: usize) -> Result<impl Iterator<Item = Execution>> {
    if max_events > MAX_EXHAUSTIVE_EVENTS {
        return Err(Error::BoundTooLarge {
            bound: max_events,
            max: MAX_EXHAUSTIVE_EVENTS,
        });
    }
    Ok(shapes(max_events).flat_map(|shape| executions_of(shape.skeleton())))
}
