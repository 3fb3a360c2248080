//! Exact solver parameterised by temporal neighbourhood diversity and the
//! lifetime.
//!
//! Vertices are grouped into temporal twin classes. A candidate sequence
//! picks, for every time-step, which classes hold at least one token. For
//! each candidate that passes the problem's class-level check at every
//! step, a layered circulation network decides how many tokens each class
//! holds and how many move between classes; an optimal circulation turns
//! into an optimal token sequence compatible with the candidate. The best
//! such sequence over all candidates is optimal.
//!
//! Network layout for `k` classes and lifetime `tau`: node `0` is the
//! source, node `1` the target, and class `i` at step `t` owns the pair
//! `x = 2 + 2((t - 1)k + i)`, `y = x + 1`.
//!
//! - source -> `x(1, i)` for `i` in `Y_1`: cost 1, unbounded;
//! - `x(t, i)` -> `y(t, i)` for `i` in `Y_t`: bounds `[low, up]`, cost 0;
//! - `y(t, i)` -> `x(t + 1, i)` for `i` in `Y_t` and `Y_{t+1}` (tokens that
//!   stay), and `y(t, i)` -> `x(t + 1, j)` when classes `i` and `j` are
//!   joined at `t` (tokens that slide), unbounded, cost 0;
//! - `y(tau, i)` -> target for `i` in `Y_tau`, unbounded, cost 0.
//!
//! The circulation cost equals the number of tokens.

use rayon::prelude::*;

use super::{finish, Method, SolveResult, SolveStats};
use crate::error::{Error, Result};
use crate::flow::{
    solve_max_cost_circulation, solve_min_cost_circulation, Capacity, CirculationFlow,
    CirculationGraph,
};
use crate::problems::{ClassSet, Ndld, ProblemDescriptor, Sense, MAX_CLASSES};
use crate::reconfig::{ReconfigWitness, TokenSequence, TokenSet};
use crate::temporal::{
    tnd_graph, tnd_partition, TemporalGraph, Time, TndGraph, TndPartition, Vertex,
};

/// Per time-step class sets `Y_1, ..., Y_tau`. The derived order is the
/// lexicographic order used for tie-breaking.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateSequence {
    pub steps: Vec<ClassSet>,
}

impl CandidateSequence {
    pub fn new(steps: Vec<ClassSet>) -> Self {
        Self { steps }
    }

    pub fn tau(&self) -> Time {
        self.steps.len()
    }

    /// `Y_t`, 1-based.
    pub fn at(&self, t: Time) -> ClassSet {
        self.steps[t - 1]
    }
}

/// The circulation network of one candidate, with arc indices kept per role.
#[derive(Clone, Debug)]
pub struct ReconfiguringCirculation {
    pub graph: CirculationGraph,
    pub candidate: CandidateSequence,
    k: usize,
    /// source arc per class of `Y_1`
    s_arcs: Vec<Option<usize>>,
    /// `c_arcs[t - 1][i]`
    c_arcs: Vec<Vec<Option<usize>>>,
    /// `r_arcs[t - 1]` lists `(i, j, arc)` for the step `t -> t + 1`
    r_arcs: Vec<Vec<(usize, usize, usize)>>,
    /// target arc per class of `Y_tau`
    t_arcs: Vec<Option<usize>>,
}

impl ReconfiguringCirculation {
    pub fn build(tnd: &TndGraph, ndld: &dyn Ndld, candidate: &CandidateSequence) -> Result<Self> {
        let (k, tau) = (tnd.k(), tnd.tau());
        if candidate.tau() != tau {
            return Err(Error::InvalidArgument(format!(
                "candidate has {} steps, lifetime is {tau}",
                candidate.tau()
            )));
        }
        if let Some(y) = candidate.steps.iter().find(|y| y.iter().any(|i| i >= k)) {
            return Err(Error::InvalidArgument(format!(
                "candidate class set {:#x} names a class outside 0..{k}",
                y.bits()
            )));
        }
        let x = |t: Time, i: usize| 2 + 2 * ((t - 1) * k + i);
        let mut graph = CirculationGraph::new(2 + 2 * k * tau, 0, 1)?;
        let mut s_arcs = vec![None; k];
        let mut c_arcs = vec![vec![None; k]; tau];
        let mut r_arcs = vec![Vec::new(); tau.saturating_sub(1)];
        let mut t_arcs = vec![None; k];
        let mut big_m = 0u64;

        for i in candidate.at(1).iter() {
            s_arcs[i] = Some(graph.add_arc(0, x(1, i), 0, Capacity::Unbounded, 1)?);
        }
        for t in 1..=tau {
            let y = candidate.at(t);
            let mut layer = 0u64;
            for i in y.iter() {
                let (low, up) = (ndld.low(tnd, t, y, i), ndld.up(tnd, t, y, i));
                if low > up {
                    return Err(Error::InvalidCirculation(format!(
                        "class {i} at t={t} has low {low} above up {up}"
                    )));
                }
                c_arcs[t - 1][i] = Some(graph.add_arc(
                    x(t, i),
                    x(t, i) + 1,
                    low as u64,
                    Capacity::Finite(up as u64),
                    0,
                )?);
                layer += up as u64;
            }
            big_m = big_m.max(layer);
            if t < tau {
                let next = candidate.at(t + 1);
                for i in y.iter() {
                    for j in next.iter() {
                        if i == j || tnd.adjacent(t, i, j) {
                            let arc = graph.add_arc(
                                x(t, i) + 1,
                                x(t + 1, j),
                                0,
                                Capacity::Unbounded,
                                0,
                            )?;
                            r_arcs[t - 1].push((i, j, arc));
                        }
                    }
                }
            }
        }
        for i in candidate.at(tau).iter() {
            t_arcs[i] = Some(graph.add_arc(x(tau, i) + 1, 1, 0, Capacity::Unbounded, 0)?);
        }
        graph.set_unbounded_capacity(big_m);
        Ok(Self {
            graph,
            candidate: candidate.clone(),
            k,
            s_arcs,
            c_arcs,
            r_arcs,
            t_arcs,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tau(&self) -> Time {
        self.c_arcs.len()
    }

    /// Arc carrying the token count of class `i` at step `t`.
    pub fn class_arc(&self, t: Time, i: usize) -> Option<usize> {
        self.c_arcs[t - 1][i]
    }

    /// `(i, j, arc)` for every movement arc of the step `t -> t + 1`.
    pub fn movement_arcs(&self, t: Time) -> &[(usize, usize, usize)] {
        &self.r_arcs[t - 1]
    }

    pub fn source_arc(&self, i: usize) -> Option<usize> {
        self.s_arcs[i]
    }

    pub fn target_arc(&self, i: usize) -> Option<usize> {
        self.t_arcs[i]
    }

    fn count(&self, flow: &CirculationFlow, t: Time, i: usize) -> usize {
        self.c_arcs[t - 1][i].map_or(0, |a| flow.values[a] as usize)
    }
}

fn mismatch(msg: String) -> Error {
    Error::FlowMismatch(msg)
}

/// Turns a feasible circulation into a token sequence with
/// `|T_t ∩ V_i|` equal to the flow on the class arc of `(t, i)`.
///
/// Tokens start on the smallest vertices of each class. Across a step, the
/// smallest occupied vertices of a class keep their tokens; the remaining
/// tokens leave in ascending vertex order towards target classes in
/// ascending order and land on the smallest vertices of the target class
/// not held by a staying token.
pub fn reconstruct_from_flow(
    partition: &TndPartition,
    rc: &ReconfiguringCirculation,
    flow: &CirculationFlow,
) -> Result<TokenSequence> {
    rc.graph.verify(&flow.values)?;
    let (k, tau) = (rc.k(), rc.tau());
    if partition.len() != k {
        return Err(Error::InvalidArgument(format!(
            "partition has {} classes, circulation was built for {k}",
            partition.len()
        )));
    }

    let mut occupied: Vec<Vec<Vertex>> = (0..k)
        .map(|i| {
            let m = rc.count(flow, 1, i);
            let class = partition.class(i);
            if m > class.len() {
                return Err(mismatch(format!(
                    "class {i} holds {m} > {} tokens at t=1",
                    class.len()
                )));
            }
            Ok(class[..m].to_vec())
        })
        .collect::<Result<_>>()?;
    let mut sets = vec![to_set(&occupied)];
    let mut witnesses = Vec::with_capacity(tau.saturating_sub(1));

    for t in 1..tau {
        let mut stay = vec![0usize; k];
        let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
        for &(i, j, arc) in rc.movement_arcs(t) {
            let units = flow.values[arc] as usize;
            if i == j {
                stay[i] += units;
            } else if units > 0 {
                out[i].push((j, units));
            }
        }

        let mut next: Vec<Vec<Vertex>> = vec![Vec::new(); k];
        let mut arrivals: Vec<Vec<Vertex>> = vec![Vec::new(); k];
        let mut pairs = Vec::new();
        for i in 0..k {
            let leaving: usize = out[i].iter().map(|&(_, u)| u).sum();
            if stay[i] + leaving != occupied[i].len() {
                return Err(mismatch(format!(
                    "class {i} holds {} tokens at t={t} but {} leave its layer",
                    occupied[i].len(),
                    stay[i] + leaving
                )));
            }
            next[i].extend_from_slice(&occupied[i][..stay[i]]);
            pairs.extend(occupied[i][..stay[i]].iter().map(|&v| (v, v)));
            let mut movers = occupied[i][stay[i]..].iter().copied();
            for &(j, units) in &out[i] {
                arrivals[j].extend(movers.by_ref().take(units));
            }
        }
        for j in 0..k {
            let free: Vec<Vertex> = partition
                .class(j)
                .iter()
                .copied()
                .filter(|v| !next[j].contains(v))
                .collect();
            if arrivals[j].len() > free.len() {
                return Err(mismatch(format!(
                    "class {j} receives {} tokens at t={} but has only {} free vertices",
                    arrivals[j].len(),
                    t + 1,
                    free.len()
                )));
            }
            pairs.extend(arrivals[j].iter().copied().zip(free.iter().copied()));
            next[j].extend_from_slice(&free[..arrivals[j].len()]);
            next[j].sort_unstable();
            let expected = rc.count(flow, t + 1, j);
            if next[j].len() != expected {
                return Err(mismatch(format!(
                    "class {j} ends with {} tokens at t={} but its class arc carries {expected}",
                    next[j].len(),
                    t + 1
                )));
            }
        }
        pairs.sort_unstable();
        witnesses.push(ReconfigWitness { pairs });
        occupied = next;
        sets.push(to_set(&occupied));
    }
    Ok(TokenSequence { sets, witnesses })
}

fn to_set(occupied: &[Vec<Vertex>]) -> TokenSet {
    occupied.iter().flatten().copied().collect()
}

/// The forward direction of the correspondence: class counts on class arcs,
/// witness pairs counted per class pair on movement arcs. The result is
/// checked against the network's bounds and conservation.
pub fn encode_sequence_as_flow(
    partition: &TndPartition,
    rc: &ReconfiguringCirculation,
    seq: &TokenSequence,
) -> Result<CirculationFlow> {
    let (k, tau) = (rc.k(), rc.tau());
    if seq.sets.len() != tau || seq.witnesses.len() + 1 != tau {
        return Err(mismatch(format!(
            "sequence has {} sets and {} witnesses for lifetime {tau}",
            seq.sets.len(),
            seq.witnesses.len()
        )));
    }
    let mut values = vec![0u64; rc.graph.arcs().len()];
    let counts: Vec<Vec<u64>> = seq
        .sets
        .iter()
        .map(|s| {
            let mut c = vec![0u64; k];
            for v in s.iter() {
                c[partition.class_of(v)] += 1;
            }
            c
        })
        .collect();

    let place = |values: &mut [u64], arc: Option<usize>, units: u64, what: &str| -> Result<()> {
        match arc {
            Some(a) => {
                values[a] += units;
                Ok(())
            }
            None if units == 0 => Ok(()),
            None => Err(mismatch(format!("{units} tokens on missing {what} arc"))),
        }
    };
    #[allow(clippy::needless_range_loop)]
    for i in 0..k {
        place(&mut values, rc.source_arc(i), counts[0][i], "source")?;
        place(&mut values, rc.target_arc(i), counts[tau - 1][i], "target")?;
        for t in 1..=tau {
            place(&mut values, rc.class_arc(t, i), counts[t - 1][i], "class")?;
        }
    }
    for t in 1..tau {
        for &(u, v) in &seq.witnesses[t - 1].pairs {
            let (i, j) = (partition.class_of(u), partition.class_of(v));
            let arc = rc
                .movement_arcs(t)
                .iter()
                .find(|&&(a, b, _)| (a, b) == (i, j))
                .map(|&(_, _, arc)| arc);
            place(&mut values, arc, 1, "movement")?;
        }
    }
    let total_cost = rc.graph.verify(&values)?;
    Ok(CirculationFlow { values, total_cost })
}

/// Tuning knobs for [`solve_tnd_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TndOptions {
    /// Worker threads; `0` uses rayon's default pool, `1` runs inline.
    pub jobs: usize,
    /// Upper limit on the number of valid candidate sequences.
    pub max_candidates: u64,
    /// Upper limit on the number of classes.
    pub max_classes: usize,
}

impl Default for TndOptions {
    fn default() -> Self {
        Self {
            jobs: 1,
            max_candidates: 1 << 24,
            max_classes: 24,
        }
    }
}

/// What happened to one valid, unpruned candidate.
#[derive(Debug)]
pub struct CandidateReport<'a> {
    /// Position in the lexicographic order of valid candidates.
    pub index: u64,
    pub circulation: &'a ReconfiguringCirculation,
    /// `None` when the circulation is infeasible.
    pub flow: Option<&'a CirculationFlow>,
    /// The reconstructed sequence, present iff `flow` is.
    pub sequence: Option<&'a TokenSequence>,
}

/// Shared, immutable inputs of the solver for one instance and problem.
pub struct TndContext<'a> {
    pub graph: &'a TemporalGraph,
    pub problem: &'a ProblemDescriptor,
    pub partition: TndPartition,
    pub tnd: TndGraph,
    ndld: &'a dyn Ndld,
}

impl<'a> TndContext<'a> {
    pub fn new(graph: &'a TemporalGraph, problem: &'a ProblemDescriptor) -> Result<Self> {
        let ndld = problem.ndld().ok_or_else(|| {
            Error::Precondition(format!(
                "`{}` has no class-level check/low/up functions",
                problem.name
            ))
        })?;
        let partition = tnd_partition(graph);
        let tnd = tnd_graph(graph, &partition)?;
        Ok(Self {
            graph,
            problem,
            partition,
            tnd,
            ndld,
        })
    }

    pub fn ndld(&self) -> &dyn Ndld {
        self.ndld
    }

    /// Whether the class-level check passes at every step.
    pub fn is_valid(&self, candidate: &CandidateSequence) -> bool {
        candidate.tau() == self.tnd.tau()
            && (1..=self.tnd.tau()).all(|t| self.ndld.check(&self.tnd, t, candidate.at(t)))
    }

    /// Per-step sums of `low` and `up`.
    pub fn layer_bounds(&self, t: Time, y: ClassSet) -> (usize, usize) {
        y.iter().fold((0, 0), |(l, u), i| {
            (
                l + self.ndld.low(&self.tnd, t, y, i),
                u + self.ndld.up(&self.tnd, t, y, i),
            )
        })
    }

    /// Builds and solves the network of one candidate; the returned
    /// sequence is optimal among sequences compatible with it.
    pub fn evaluate(
        &self,
        candidate: &CandidateSequence,
    ) -> Result<(
        ReconfiguringCirculation,
        Option<(CirculationFlow, TokenSequence)>,
    )> {
        let rc = ReconfiguringCirculation::build(&self.tnd, self.ndld, candidate)?;
        let flow = match self.problem.sense {
            Sense::Minimize => solve_min_cost_circulation(&rc.graph)?,
            Sense::Maximize => solve_max_cost_circulation(&rc.graph)?,
        };
        let Some(flow) = flow else {
            return Ok((rc, None));
        };
        let seq = reconstruct_from_flow(&self.partition, &rc, &flow)?;
        if seq.size() as i64 != flow.total_cost {
            return Err(mismatch(format!(
                "reconstructed size {} differs from circulation cost {}",
                seq.size(),
                flow.total_cost
            )));
        }
        Ok((rc, Some((flow, seq))))
    }

    /// Valid class sets per step, ascending as binary counters.
    fn valid_layers(&self, opts: &TndOptions) -> Result<Vec<Vec<ClassSet>>> {
        let k = self.tnd.k();
        if k > opts.max_classes || k >= MAX_CLASSES {
            return Err(Error::GuardExceeded(format!(
                "{k} twin classes exceed the limit of {}",
                opts.max_classes.min(MAX_CLASSES - 1)
            )));
        }
        Ok((1..=self.tnd.tau())
            .map(|t| {
                (0..1u64 << k)
                    .map(ClassSet::from_bits)
                    .filter(|&y| self.ndld.check(&self.tnd, t, y))
                    .collect()
            })
            .collect())
    }
}

pub fn solve_tnd(g: &TemporalGraph, prob: &ProblemDescriptor) -> Result<Option<SolveResult>> {
    solve_tnd_with(g, prob, &TndOptions::default(), None)
}

type Observer<'o> = &'o (dyn Fn(&CandidateReport<'_>) + Sync);

struct Best {
    size: usize,
    index: u64,
    sets: Vec<TokenSet>,
}

/// Candidate search with explicit options and an optional observer that is
/// called for every candidate whose network gets solved.
///
/// Candidates are numbered in lexicographic order (`Y_1` most significant,
/// each `Y_t` compared as a binary counter). Every candidate gets a bound on
/// the size of any compatible sequence: `max_t Σ low` when minimising,
/// `min_t Σ up` when maximising. A candidate whose lows exceed its ups at
/// some pair of steps has no compatible sequence and is skipped. The rest
/// are solved in groups of equal bound, most promising group first; the
/// search stops once no remaining group can match the incumbent. Among
/// optimal candidates the smallest index wins, so the result does not
/// depend on how groups are split across workers.
pub fn solve_tnd_with(
    g: &TemporalGraph,
    prob: &ProblemDescriptor,
    opts: &TndOptions,
    observer: Option<Observer<'_>>,
) -> Result<Option<SolveResult>> {
    let ctx = TndContext::new(g, prob)?;
    let layers = ctx.valid_layers(opts)?;
    let total = layers
        .iter()
        .try_fold(1u64, |acc, l| acc.checked_mul(l.len() as u64))
        .filter(|&c| c <= opts.max_candidates)
        .ok_or_else(|| {
            Error::GuardExceeded(format!(
                "more than {} candidate sequences",
                opts.max_candidates
            ))
        })?;
    let bounds: Vec<Vec<(usize, usize)>> = layers
        .iter()
        .enumerate()
        .map(|(t, l)| l.iter().map(|&y| ctx.layer_bounds(t + 1, y)).collect())
        .collect();
    let sense = prob.sense;

    let digits = |index: u64| -> Vec<usize> {
        let mut d = vec![0usize; layers.len()];
        let mut rest = index;
        for t in (0..layers.len()).rev() {
            let base = layers[t].len() as u64;
            d[t] = (rest % base) as usize;
            rest /= base;
        }
        d
    };
    let key = |index: u64| -> Option<usize> {
        let d = digits(index);
        let low = d.iter().enumerate().map(|(t, &x)| bounds[t][x].0).max()?;
        let up = d.iter().enumerate().map(|(t, &x)| bounds[t][x].1).min()?;
        (low <= up).then_some(match sense {
            Sense::Minimize => low,
            Sense::Maximize => up,
        })
    };
    let evaluate = |index: u64| -> Result<Option<Best>> {
        let candidate = CandidateSequence::new(
            digits(index)
                .iter()
                .enumerate()
                .map(|(t, &x)| layers[t][x])
                .collect(),
        );
        let (rc, outcome) = ctx.evaluate(&candidate)?;
        if let Some(obs) = observer {
            obs(&CandidateReport {
                index,
                circulation: &rc,
                flow: outcome.as_ref().map(|(f, _)| f),
                sequence: outcome.as_ref().map(|(_, s)| s),
            });
        }
        Ok(outcome.map(|(_, seq)| Best {
            size: seq.size(),
            index,
            sets: seq.sets,
        }))
    };
    let pick = |a: Option<Best>, b: Option<Best>| -> Result<Option<Best>> {
        Ok(match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                let b_wins =
                    sense.better(b.size, a.size) || (b.size == a.size && b.index < a.index);
                Some(if b_wins { b } else { a })
            }
        })
    };

    let search = || -> Result<(Option<Best>, u64)> {
        let sequential = opts.jobs == 1;
        let histogram = |range: std::ops::Range<u64>| {
            let mut h = vec![0u64; g.n() + 1];
            for idx in range {
                if let Some(k) = key(idx) {
                    h[k] += 1;
                }
            }
            h
        };
        let counts = if sequential {
            histogram(0..total)
        } else {
            const CHUNK: u64 = 1 << 12;
            (0..total.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| histogram(c * CHUNK..((c + 1) * CHUNK).min(total)))
                .reduce(
                    || vec![0u64; g.n() + 1],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                        a
                    },
                )
        };
        let order: Vec<usize> = match sense {
            Sense::Minimize => (0..=g.n()).collect(),
            Sense::Maximize => (0..=g.n()).rev().collect(),
        };

        let mut best: Option<Best> = None;
        let mut solves = 0u64;
        for bucket in order.into_iter().filter(|&b| counts[b] > 0) {
            let limit = match &best {
                Some(b) if sense.better(b.size, bucket) => break,
                Some(b) if b.size == bucket => b.index,
                _ => total,
            };
            let members = |idx: &u64| key(*idx) == Some(bucket);
            let (found, n) = if sequential {
                let mut acc = None;
                let mut n = 0u64;
                for idx in (0..limit).filter(members) {
                    n += 1;
                    acc = pick(acc, evaluate(idx)?)?;
                }
                (acc, n)
            } else {
                (0..limit)
                    .into_par_iter()
                    .filter(members)
                    .map(|idx| evaluate(idx).map(|b| (b, 1u64)))
                    .try_reduce(|| (None, 0), |(a, na), (b, nb)| Ok((pick(a, b)?, na + nb)))?
            };
            solves += n;
            best = pick(best, found)?;
        }
        Ok((best, solves))
    };

    let (best, solves) = match opts.jobs {
        0 | 1 => search()?,
        jobs => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start workers: {e}")))?
            .install(search)?,
    };

    let stats = SolveStats {
        candidates_examined: total,
        candidates_pruned: total - solves,
        flow_solves: solves,
        dp_states: 0,
    };
    best.map(|b| finish(g, prob, b.sets, Method::Tnd, stats))
        .transpose()
}
