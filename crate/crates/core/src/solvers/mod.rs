//! Solution strategies. Every solver returns a sequence that has been
//! re-verified with [`check_solution`], witnesses included.

mod approx;
mod brute;
mod enumerate;
mod tnd;

use std::fmt;
use std::str::FromStr;

pub use approx::solve_approx;
pub use brute::{solve_brute, BRUTE_MAX_N, BRUTE_MAX_TAU};
pub use enumerate::{solve_enum, solve_enum_with};
pub use tnd::{
    encode_sequence_as_flow, reconstruct_from_flow, solve_tnd, solve_tnd_with, CandidateReport,
    CandidateSequence, ReconfiguringCirculation, TndContext, TndOptions,
};

use crate::error::{Error, Result};
use crate::problems::ProblemDescriptor;
use crate::reconfig::{check_solution, TokenSequence, TokenSet};
use crate::temporal::TemporalGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Brute,
    Enum,
    Tnd,
    Approx,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Brute, Method::Enum, Method::Tnd, Method::Approx];

    pub fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Enum => "enum",
            Method::Tnd => "tnd",
            Method::Approx => "approx",
        }
    }

    /// Exact methods return an optimum; `approx` does not.
    pub fn is_exact(self) -> bool {
        self != Method::Approx
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

/// Diagnostic counters; which fields are populated depends on the method.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Candidate sequences whose every step passed the class-level check.
    pub candidates_examined: u64,
    /// Of those, skipped because a per-step bound could not beat the incumbent.
    pub candidates_pruned: u64,
    pub flow_solves: u64,
    /// Reachable sets kept by the enumeration DP, or search nodes for brute force.
    pub dp_states: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub sequence: TokenSequence,
    pub method: Method,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn size(&self) -> usize {
        self.sequence.size()
    }
}

/// Runs the named method.
pub fn solve(
    g: &TemporalGraph,
    prob: &ProblemDescriptor,
    method: Method,
) -> Result<Option<SolveResult>> {
    match method {
        Method::Brute => solve_brute(g, prob),
        Method::Enum => solve_enum(g, prob),
        Method::Tnd => solve_tnd(g, prob),
        Method::Approx => solve_approx(g, prob).map(Some),
    }
}

fn finish(
    g: &TemporalGraph,
    prob: &ProblemDescriptor,
    sets: Vec<TokenSet>,
    method: Method,
    stats: SolveStats,
) -> Result<SolveResult> {
    let witnesses =
        check_solution(g, prob, &sets).map_err(|v| Error::Unverified(format!("{method}: {v}")))?;
    Ok(SolveResult {
        sequence: TokenSequence { sets, witnesses },
        method,
        stats,
    })
}
