use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::heuristic::{best_swap, candidate_swaps, heuristic_priority};
use super::locks::QubitLocks;
use super::{weighted_depth, RouteError, Routed, RouterConfig, Schedule, ScheduledGate};
use crate::commute::{cf_front_with, no_predecessor_front_with, QubitOpFlags};
use crate::gate::{Circuit, Gate, GateKind};
use crate::mapping::Mapping;
use crate::qam::{Architecture, CouplingGraph};
use crate::qasm::{validate, Diagnostic};

/// Operands of a two-qubit gate, as logical qubits.
type Pair = (usize, usize);

#[derive(Debug, Clone)]
struct Pending {
    origin: usize,
    gate: Gate,
}

#[derive(Debug, Clone)]
struct Decision {
    gate: Gate,
    start: u64,
    origin: Option<usize>,
}

/// Incremental routing state. [`super::route`] drives it to completion;
/// tests and tools can call the phases of a cycle one at a time.
#[derive(Debug)]
pub struct Router<'a> {
    arch: &'a Architecture,
    cfg: RouterConfig,
    pending: Vec<Pending>,
    init: Mapping,
    mapping: Mapping,
    locks: QubitLocks,
    time: u64,
    decisions: Vec<Decision>,
    flags: QubitOpFlags,
    stall_limit: u64,
    idle: u64,
    launched_this_cycle: bool,
    stall_events: usize,
    swap_count: usize,
    /// Source index of a force-routed gate; its qubits are off limits to SWAPs until it launches.
    pinned: Option<usize>,
}

impl<'a> Router<'a> {
    pub fn new(
        circuit: &Circuit,
        arch: &'a Architecture,
        init: Mapping,
        cfg: &RouterConfig,
    ) -> Result<Self, RouteError> {
        let mut diags = validate(circuit, arch.num_qubits());
        if let Some(pos) = diags
            .iter()
            .position(|d| matches!(d, Diagnostic::TooManyQubits { .. }))
        {
            if let Diagnostic::TooManyQubits { needed, available } = diags.swap_remove(pos) {
                return Err(RouteError::TooManyQubits { needed, available });
            }
        }
        if !diags.is_empty() {
            return Err(RouteError::InvalidCircuit(diags));
        }
        if init.num_logical() != circuit.num_qubits || init.num_physical() != arch.num_qubits() {
            return Err(RouteError::MappingShape {
                logical: init.num_logical(),
                physical: init.num_physical(),
            });
        }
        for kind in circuit.gates.iter().map(|g| g.kind).chain([GateKind::Swap]) {
            arch.duration_of(kind)
                .map_err(|_| RouteError::MissingDuration(kind))?;
        }
        let stall_limit = match cfg.stall_limit {
            Some(0) => return Err(RouteError::BadStallLimit),
            Some(n) => n,
            None => arch.duration_of(GateKind::Swap).unwrap_or(1).max(1),
        };
        Ok(Router {
            arch,
            cfg: cfg.clone(),
            pending: circuit
                .gates
                .iter()
                .enumerate()
                .map(|(origin, gate)| Pending {
                    origin,
                    gate: gate.clone(),
                })
                .collect(),
            mapping: init.clone(),
            init,
            locks: QubitLocks::new(arch.num_qubits()),
            time: 0,
            decisions: Vec::new(),
            flags: QubitOpFlags::new(circuit.num_qubits),
            stall_limit,
            idle: 0,
            launched_this_cycle: false,
            stall_events: 0,
            swap_count: 0,
            pinned: None,
        })
    }

    pub fn is_done(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn locks(&self) -> &QubitLocks {
        &self.locks
    }

    pub fn mapping(&self) -> &Mapping {
        &self.mapping
    }

    pub fn stall_events(&self) -> usize {
        self.stall_events
    }

    /// Source indices of the gates not yet launched, in program order.
    pub fn pending_origins(&self) -> Vec<usize> {
        self.pending.iter().map(|p| p.origin).collect()
    }

    /// Launched gates so far as `(physical gate, start cycle, source index)`.
    pub fn launched(&self) -> impl Iterator<Item = (&Gate, u64, Option<usize>)> {
        self.decisions.iter().map(|d| (&d.gate, d.start, d.origin))
    }

    fn true_duration(&self, kind: GateKind) -> u64 {
        // Presence is checked in `new`.
        self.arch.duration_of(kind).unwrap_or(1)
    }

    fn decision_duration(&self, kind: GateKind) -> u64 {
        let d = self.true_duration(kind);
        if self.cfg.duration_aware {
            d
        } else {
            d.min(1)
        }
    }

    /// Positions in `pending` of the executable-from-software gates.
    fn front(&mut self) -> Vec<usize> {
        let gates = self.pending.iter().map(|p| &p.gate);
        if self.cfg.commutativity {
            cf_front_with(
                &self.arch.commutation,
                gates,
                self.cfg.cf_window,
                &mut self.flags,
            )
        } else {
            no_predecessor_front_with(gates, self.cfg.cf_window)
        }
    }

    fn physical(&self, gate: &Gate) -> Gate {
        gate.remapped(|l| self.mapping.physical(l))
    }

    fn is_compliant(&self, pgate: &Gate) -> bool {
        match pgate.kind {
            GateKind::Cx | GateKind::Swap => self.arch.is_coupled(pgate.qubits[0], pgate.qubits[1]),
            _ => true,
        }
    }

    fn record(&mut self, gate: Gate, start: u64, origin: Option<usize>) {
        let duration = self.decision_duration(gate.kind);
        self.locks
            .acquire(&gate, start, duration)
            .expect("operands checked free before launch");
        self.decisions.push(Decision {
            gate,
            start,
            origin,
        });
        self.launched_this_cycle = true;
    }

    /// Launches every front gate that is coupled and lock free at the current
    /// cycle, earlier gates first. Returns the number launched.
    pub fn launch_ready(&mut self) -> usize {
        let mut total = 0;
        loop {
            let front = self.front();
            let mut launched = Vec::new();
            let mut zero_length = false;
            for idx in front {
                let pgate = self.physical(&self.pending[idx].gate);
                if !self.is_compliant(&pgate) || !self.locks.all_free(&pgate.qubits, self.time) {
                    continue;
                }
                let origin = self.pending[idx].origin;
                zero_length |= self.decision_duration(pgate.kind) == 0;
                self.record(pgate, self.time, Some(origin));
                if self.pinned == Some(origin) {
                    self.pinned = None;
                }
                launched.push(idx);
            }
            total += launched.len();
            if !launched.is_empty() {
                let mut k = 0;
                let mut next = launched.iter().peekable();
                self.pending.retain(|_| {
                    let keep = next.peek().is_none_or(|&&i| i != k);
                    if !keep {
                        next.next();
                    }
                    k += 1;
                    keep
                });
            }
            // Only a zero-duration launch can expose a gate that is free this same cycle.
            if !zero_length {
                return total;
            }
        }
    }

    /// Logical operand pairs of the two-qubit front gates, in program order,
    /// split into `(all, not coupled under the current mapping)`.
    pub fn front_two_qubit(&mut self) -> (Vec<Pair>, Vec<Pair>) {
        let front = self.front();
        let mut all = Vec::new();
        let mut blocked = Vec::new();
        for idx in front {
            let g = &self.pending[idx].gate;
            if !g.kind.is_two_qubit() {
                continue;
            }
            let pair = (g.qubits[0], g.qubits[1]);
            all.push(pair);
            let (pa, pb) = (self.mapping.physical(pair.0), self.mapping.physical(pair.1));
            if !self.arch.is_coupled(pa, pb) {
                blocked.push(pair);
            }
        }
        (all, blocked)
    }

    fn excluded_qubits(&self) -> Vec<usize> {
        let Some(origin) = self.pinned else {
            return Vec::new();
        };
        self.pending
            .iter()
            .find(|p| p.origin == origin)
            .map(|p| {
                p.gate
                    .qubits
                    .iter()
                    .map(|&l| self.mapping.physical(l))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Lock-free candidate SWAPs at the current cycle with their scores.
    pub fn scored_candidates(&mut self) -> Vec<((usize, usize), i64)> {
        let (all, blocked) = self.front_two_qubit();
        let excluded = self.excluded_qubits();
        candidate_swaps(
            &blocked,
            &self.mapping,
            &self.locks,
            self.time,
            &self.arch.graph,
            &excluded,
        )
        .into_iter()
        .map(|s| {
            (
                s,
                heuristic_priority(s, &all, &self.mapping, &self.arch.distances),
            )
        })
        .collect()
    }

    /// Repeatedly launches the best positive-score SWAP. Returns how many were inserted.
    pub fn insert_swaps(&mut self) -> usize {
        let mut inserted = 0;
        while let Some((a, b)) = best_swap(&self.scored_candidates()) {
            self.launch_swap(a, b, self.time);
            inserted += 1;
        }
        inserted
    }

    fn launch_swap(&mut self, a: usize, b: usize, start: u64) {
        self.record(Gate::swap(a, b), start, None);
        self.mapping.swap_physical(a, b);
        self.swap_count += 1;
    }

    /// Moves the oldest blocked front gate next to its partner along a
    /// shortest path, each SWAP starting as soon as its qubits are free.
    fn force_route(&mut self) -> bool {
        let front = self.front();
        let Some(idx) = front.into_iter().find(|&i| {
            let g = &self.pending[i].gate;
            g.kind.is_two_qubit() && !self.is_compliant(&self.physical(g))
        }) else {
            return false;
        };
        let (origin, la, lb) = {
            let p = &self.pending[idx];
            (p.origin, p.gate.qubits[0], p.gate.qubits[1])
        };
        let path = shortest_path(
            &self.arch.graph,
            self.mapping.physical(la),
            self.mapping.physical(lb),
        );
        for w in path.windows(2).take(path.len().saturating_sub(2)) {
            let start = self.locks.earliest_free(w, self.time);
            self.launch_swap(w[0], w[1], start);
        }
        self.pinned = Some(origin);
        self.stall_events += 1;
        true
    }

    /// One cycle: launch, insert SWAPs, handle stalls, advance time.
    pub fn step(&mut self) {
        self.launched_this_cycle = false;
        self.launch_ready();
        if !self.is_done() {
            self.insert_swaps();
        }
        if self.launched_this_cycle {
            self.idle = 0;
        } else {
            self.idle += 1;
            if self.idle >= self.stall_limit && self.pinned.is_none() && self.force_route() {
                self.idle = 0;
            }
        }
        self.time += 1;
    }

    /// Builds the final schedule by replaying the launch order as soon as
    /// possible with true durations.
    pub fn finish(self) -> Routed {
        let mut order: Vec<usize> = (0..self.decisions.len()).collect();
        order.sort_by_key(|&i| (self.decisions[i].start, i));
        let mut avail = vec![0u64; self.arch.num_qubits()];
        let mut items: Vec<(ScheduledGate, usize)> = Vec::with_capacity(order.len());
        for (rank, &i) in order.iter().enumerate() {
            let d = &self.decisions[i];
            let duration = self.true_duration(d.gate.kind);
            let start = d.gate.qubits.iter().map(|&q| avail[q]).max().unwrap_or(0);
            for &q in &d.gate.qubits {
                avail[q] = start + duration;
            }
            items.push((
                ScheduledGate {
                    gate: d.gate.clone(),
                    start,
                    duration,
                    decision_start: d.start,
                    origin: d.origin,
                },
                rank,
            ));
        }
        items.sort_by_key(|(it, rank)| (it.start, *rank));
        let items: Vec<ScheduledGate> = items.into_iter().map(|(it, _)| it).collect();
        let schedule = Schedule {
            weighted_depth: weighted_depth(&items),
            items,
            initial_mapping: self.init,
            final_mapping: self.mapping,
            swap_count: self.swap_count,
            stall_events: self.stall_events,
        };
        let circuit = schedule.to_circuit();
        Routed { schedule, circuit }
    }
}

/// BFS shortest path from `from` to `to`, preferring low-index neighbours.
fn shortest_path(graph: &CouplingGraph, from: usize, to: usize) -> Vec<usize> {
    let n = graph.num_qubits();
    let mut prev = vec![usize::MAX; n];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &v in graph.neighbors(u) {
            if prev[v] == usize::MAX {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}
