//! Exhaustive search, used as a test oracle.
//!
//! Cardinalities are tried from best to worst. For a fixed cardinality,
//! tuples `(T_1, ..., T_tau)` of solutions of that size are searched depth
//! first in lexicographic order, remembering dead `(t, T_t)` prefixes. The
//! move check uses its own augmenting-path matching rather than the
//! library's Hopcroft–Karp so that the two stay independent.

use super::{finish, Method, SolveResult, SolveStats};
use crate::error::{Error, Result};
use crate::problems::{ProblemDescriptor, Sense};
use crate::reconfig::TokenSet;
use crate::temporal::{StaticGraph, TemporalGraph};

pub const BRUTE_MAX_N: usize = 12;
pub const BRUTE_MAX_TAU: usize = 5;

fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Kuhn's augmenting paths on the stay-or-slide bipartite graph.
fn slides(s: &StaticGraph, from: u32, to: u32) -> bool {
    if from.count_ones() != to.count_ones() {
        return false;
    }
    let left = bits(from);
    let right = bits(to);
    let allowed = |x: usize, y: usize| x == y || s.adjacent(x, y);
    let mut owner: Vec<Option<usize>> = vec![None; right.len()];

    fn try_assign(
        l: usize,
        left: &[usize],
        right: &[usize],
        allowed: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for r in 0..right.len() {
            if seen[r] || !allowed(left[l], right[r]) {
                continue;
            }
            seen[r] = true;
            if owner[r].is_none_or(|o| try_assign(o, left, right, allowed, seen, owner)) {
                owner[r] = Some(l);
                return true;
            }
        }
        false
    }

    (0..left.len()).all(|l| {
        let mut seen = vec![false; right.len()];
        try_assign(l, &left, &right, &allowed, &mut seen, &mut owner)
    })
}

struct Search<'a> {
    g: &'a TemporalGraph,
    /// candidate masks per time-step, ascending
    layers: Vec<Vec<u32>>,
    dead: Vec<std::collections::HashSet<u32>>,
    nodes: u64,
}

impl Search<'_> {
    fn extend(&mut self, t: usize, current: u32, path: &mut Vec<u32>) -> bool {
        self.nodes += 1;
        path.push(current);
        if t == self.g.tau() {
            return true;
        }
        if !self.dead[t].contains(&current) {
            let snapshot = &self.g.snapshots()[t - 1];
            for i in 0..self.layers[t].len() {
                let next = self.layers[t][i];
                if slides(snapshot, current, next) && self.extend(t + 1, next, path) {
                    return true;
                }
            }
            self.dead[t].insert(current);
        }
        path.pop();
        false
    }
}

pub fn solve_brute(g: &TemporalGraph, prob: &ProblemDescriptor) -> Result<Option<SolveResult>> {
    let n = g.n();
    if n > BRUTE_MAX_N || g.tau() > BRUTE_MAX_TAU {
        return Err(Error::GuardExceeded(format!(
            "brute force is limited to n <= {BRUTE_MAX_N} and tau <= {BRUTE_MAX_TAU} (got n = {n}, tau = {})",
            g.tau()
        )));
    }
    let all: Vec<u32> = (0..1u32 << n).collect();
    let sizes: Vec<usize> = match prob.sense {
        Sense::Minimize => (0..=n).collect(),
        Sense::Maximize => (0..=n).rev().collect(),
    };
    let mut stats = SolveStats::default();
    for k in sizes {
        let layers: Vec<Vec<u32>> = g
            .snapshots()
            .iter()
            .map(|s| {
                all.iter()
                    .copied()
                    .filter(|m| m.count_ones() as usize == k)
                    .filter(|&m| prob.is_solution(s, &TokenSet::from_mask(m as u64)))
                    .collect()
            })
            .collect();
        if layers.iter().any(Vec::is_empty) {
            continue;
        }
        let mut search = Search {
            g,
            layers,
            dead: vec![Default::default(); g.tau() + 1],
            nodes: 0,
        };
        let mut path = Vec::with_capacity(g.tau());
        let starts = search.layers[0].clone();
        let found = starts.into_iter().any(|m| search.extend(1, m, &mut path));
        stats.dp_states += search.nodes;
        if found {
            let sets = path
                .into_iter()
                .map(|m| TokenSet::from_mask(m as u64))
                .collect();
            return finish(g, prob, sets, Method::Brute, stats).map(Some);
        }
    }
    Ok(None)
}
