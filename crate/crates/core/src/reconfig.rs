//! Reconfigurability of token sets.
//!
//! `a` is reconfigurable into `b` in snapshot `s` when some bijection
//! `a -> b` maps every token either to itself or across an edge of `s`.
//! That is exactly a perfect matching in the bipartite graph with a left
//! copy of `a`, a right copy of `b`, and an edge `x - y` whenever `x = y`
//! or `xy` is an edge of `s`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::matching::maximum_matching;
use crate::problems::ProblemDescriptor;
use crate::temporal::{StaticGraph, TemporalGraph, Time, Vertex};

/// A set of occupied vertices, at most one token per vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenSet(BTreeSet<Vertex>);

impl TokenSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        self.0.remove(&v)
    }

    /// Vertices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn max(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &TokenSet) -> TokenSet {
        self.0.union(&other.0).copied().collect()
    }

    /// Builds a set from the bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        (0..64).filter(|&i| mask >> i & 1 == 1).collect()
    }
}

impl FromIterator<Vertex> for TokenSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[Vertex; N]> for TokenSet {
    fn from(vs: [Vertex; N]) -> Self {
        vs.into_iter().collect()
    }
}

impl fmt::Display for TokenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        let mut first = true;
        for v in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Reconfiguration bijection as `(from, to)` pairs, sorted by `from`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReconfigWitness {
    pub pairs: Vec<(Vertex, Vertex)>,
}

impl ReconfigWitness {
    pub fn identity(set: &TokenSet) -> Self {
        Self {
            pairs: set.iter().map(|v| (v, v)).collect(),
        }
    }

    /// Checks that the pairs form a bijection `a -> b` using only stays and
    /// edges of `s`.
    pub fn certifies(&self, s: &StaticGraph, a: &TokenSet, b: &TokenSet) -> bool {
        let from: BTreeSet<Vertex> = self.pairs.iter().map(|p| p.0).collect();
        let to: BTreeSet<Vertex> = self.pairs.iter().map(|p| p.1).collect();
        from.len() == self.pairs.len()
            && to.len() == self.pairs.len()
            && from.iter().copied().eq(a.iter())
            && to.iter().copied().eq(b.iter())
            && self
                .pairs
                .iter()
                .all(|&(u, v)| u == v || (u < s.n() && v < s.n() && s.adjacent(u, v)))
    }
}

/// `(T_1, ..., T_tau)` plus one witness per consecutive pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenSequence {
    pub sets: Vec<TokenSet>,
    pub witnesses: Vec<ReconfigWitness>,
}

impl TokenSequence {
    /// Common cardinality `|T|` (0 for an empty sequence).
    pub fn size(&self) -> usize {
        self.sets.first().map_or(0, TokenSet::len)
    }
}

/// Why a sequence was rejected. Time-steps are 1-based; `NotReconfigurable
/// { t }` refers to the move from `T_t` to `T_{t+1}` along `G_t`.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("sequence has {found} sets but the lifetime is {expected}")]
    Length { expected: usize, found: usize },

    #[error("vertex {vertex} at t={t} is outside the graph")]
    VertexOutOfRange { t: Time, vertex: Vertex },

    #[error("property violated at t={t}")]
    Property { t: Time },

    #[error("T_{t} (size {from}) is not reconfigurable into T_{next} (size {to}) at t={t}", next = t + 1)]
    NotReconfigurable { t: Time, from: usize, to: usize },
}

/// A reconfiguration bijection from `a` to `b` in `s`, if one exists.
pub fn is_reconfigurable(s: &StaticGraph, a: &TokenSet, b: &TokenSet) -> Option<ReconfigWitness> {
    if a.len() != b.len() {
        return None;
    }
    let left: Vec<Vertex> = a.iter().collect();
    let right: Vec<Vertex> = b.iter().collect();
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|&x| {
            right
                .iter()
                .enumerate()
                .filter(|&(_, &y)| x == y || s.adjacent(x, y))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let matched = maximum_matching(right.len(), &adj);
    let pairs = matched
        .iter()
        .zip(&left)
        .map(|(m, &x)| m.map(|j| (x, right[j])))
        .collect::<Option<Vec<_>>>()?;
    Some(ReconfigWitness { pairs })
}

fn check_ranges(g: &TemporalGraph, seq: &[TokenSet]) -> Result<(), Violation> {
    if seq.len() != g.tau() {
        return Err(Violation::Length {
            expected: g.tau(),
            found: seq.len(),
        });
    }
    for (i, set) in seq.iter().enumerate() {
        if let Some(v) = set.max().filter(|&v| v >= g.n()) {
            return Err(Violation::VertexOutOfRange {
                t: i + 1,
                vertex: v,
            });
        }
    }
    Ok(())
}

fn step(g: &TemporalGraph, seq: &[TokenSet], t: Time) -> Result<ReconfigWitness, Violation> {
    let (a, b) = (&seq[t - 1], &seq[t]);
    is_reconfigurable(&g.snapshots()[t - 1], a, b).ok_or(Violation::NotReconfigurable {
        t,
        from: a.len(),
        to: b.len(),
    })
}

/// Witnesses for every step `T_t -> T_{t+1}` (checked in `G_t`), or the
/// first failing step.
pub fn check_sequence(
    g: &TemporalGraph,
    seq: &[TokenSet],
) -> Result<Vec<ReconfigWitness>, Violation> {
    check_ranges(g, seq)?;
    (1..g.tau()).map(|t| step(g, seq, t)).collect()
}

/// Full validity: every `T_t` solves the problem on `G_t` and the sequence
/// is reconfigurable. Reports the first violation in time order, checking
/// the property at `t` before the move out of `t`.
pub fn check_solution(
    g: &TemporalGraph,
    prob: &ProblemDescriptor,
    seq: &[TokenSet],
) -> Result<Vec<ReconfigWitness>, Violation> {
    check_ranges(g, seq)?;
    let mut witnesses = Vec::with_capacity(g.tau().saturating_sub(1));
    for t in 1..=g.tau() {
        if !prob.is_solution(&g.snapshots()[t - 1], &seq[t - 1]) {
            return Err(Violation::Property { t });
        }
        if t < g.tau() {
            witnesses.push(step(g, seq, t)?);
        }
    }
    Ok(witnesses)
}
