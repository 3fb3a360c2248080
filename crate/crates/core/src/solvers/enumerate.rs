//! Forward reachability over all static solutions.
//!
//! `X_t` is every solution on `G_t`. The reachable layer `Y_1 = X_1`, and
//! `Y_t` keeps the members of `X_t` that some member of `Y_{t-1}` can be
//! reconfigured into along `G_{t-1}`. Each kept set stores the index of
//! the first such predecessor, so the best member of `Y_tau` unwinds into a
//! full sequence.

use std::collections::HashMap;

use super::{finish, Method, SolveResult, SolveStats};
use crate::error::{Error, Result};
use crate::problems::{EnumerationLimit, ProblemDescriptor};
use crate::reconfig::{is_reconfigurable, TokenSet};
use crate::temporal::TemporalGraph;

pub fn solve_enum(g: &TemporalGraph, prob: &ProblemDescriptor) -> Result<Option<SolveResult>> {
    solve_enum_with(g, prob, EnumerationLimit::default())
}

pub fn solve_enum_with(
    g: &TemporalGraph,
    prob: &ProblemDescriptor,
    limit: EnumerationLimit,
) -> Result<Option<SolveResult>> {
    if !prob.has_enumerator() {
        return Err(Error::Precondition(format!(
            "`{}` has no solution enumerator",
            prob.name
        )));
    }
    let enumerate = |t: usize| -> Result<Vec<TokenSet>> {
        prob.enumerate(&g.snapshots()[t - 1], limit)
            .expect("enumerator checked above")
    };

    // layers[t - 1] = (set, parent index into layers[t - 2])
    let mut layers: Vec<Vec<(TokenSet, usize)>> = Vec::with_capacity(g.tau());
    layers.push(enumerate(1)?.into_iter().map(|s| (s, usize::MAX)).collect());
    let mut stats = SolveStats {
        dp_states: layers[0].len() as u64,
        ..SolveStats::default()
    };

    for t in 2..=g.tau() {
        let prev = &layers[t - 2];
        let mut by_size: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, (s, _)) in prev.iter().enumerate() {
            by_size.entry(s.len()).or_default().push(i);
        }
        let snapshot = &g.snapshots()[t - 2];
        let next: Vec<(TokenSet, usize)> = enumerate(t)?
            .into_iter()
            .filter_map(|cand| {
                let parents = by_size.get(&cand.len())?;
                let p = parents
                    .iter()
                    .copied()
                    .find(|&p| is_reconfigurable(snapshot, &prev[p].0, &cand).is_some())?;
                Some((cand, p))
            })
            .collect();
        stats.dp_states += next.len() as u64;
        if next.is_empty() {
            return Ok(None);
        }
        layers.push(next);
    }

    let last = layers.last().expect("tau >= 1");
    let mut best: Option<usize> = None;
    for (i, (s, _)) in last.iter().enumerate() {
        if best.is_none_or(|b| prob.sense.better(s.len(), last[b].0.len())) {
            best = Some(i);
        }
    }
    let Some(mut idx) = best else {
        return Ok(None);
    };
    let mut sets = Vec::with_capacity(g.tau());
    for layer in layers.iter().rev() {
        let (set, parent) = &layer[idx];
        sets.push(set.clone());
        idx = *parent;
    }
    sets.reverse();
    finish(g, prob, sets, Method::Enum, stats).map(Some)
}
