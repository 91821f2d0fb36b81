//! SWAP candidate generation and scoring.

use alloc::vec::Vec;

use super::locks::QubitLocks;
use crate::mapping::Mapping;
use crate::qam::{CouplingGraph, DistanceMatrix};

/// Lock-free coupling edges incident to a physical endpoint of one of the
/// `blocked` gates (given as logical operand pairs). Edges touching a qubit in
/// `excluded` are skipped. Output is sorted `(min, max)` pairs.
pub fn candidate_swaps(
    blocked: &[(usize, usize)],
    mapping: &Mapping,
    locks: &QubitLocks,
    t: u64,
    graph: &CouplingGraph,
    excluded: &[usize],
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &(la, lb) in blocked {
        for p in [mapping.physical(la), mapping.physical(lb)] {
            if !locks.is_free(p, t) || excluded.contains(&p) {
                continue;
            }
            for &n in graph.neighbors(p) {
                if locks.is_free(n, t) && !excluded.contains(&n) {
                    out.push((p.min(n), p.max(n)));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Total distance reduction over `gates` (logical operand pairs) if the
/// physical `swap` were applied. Positive means the gates move closer.
pub fn heuristic_priority(
    swap: (usize, usize),
    gates: &[(usize, usize)],
    mapping: &Mapping,
    distances: &DistanceMatrix,
) -> i64 {
    let moved = |p: usize| {
        if p == swap.0 {
            swap.1
        } else if p == swap.1 {
            swap.0
        } else {
            p
        }
    };
    gates
        .iter()
        .map(|&(la, lb)| {
            let (pa, pb) = (mapping.physical(la), mapping.physical(lb));
            i64::from(distances.get(pa, pb)) - i64::from(distances.get(moved(pa), moved(pb)))
        })
        .sum()
}

/// Highest strictly positive score; ties go to the lowest `(min, max)` edge.
pub fn best_swap(scored: &[((usize, usize), i64)]) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), i64)> = None;
    for &(edge, score) in scored {
        if score <= 0 {
            continue;
        }
        match best {
            Some((e, s)) if s > score || (s == score && e < edge) => {}
            _ => best = Some((edge, score)),
        }
    }
    best.map(|(e, _)| e)
}
