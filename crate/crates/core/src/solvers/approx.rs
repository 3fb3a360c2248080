use super::{finish, Method, SolveResult, SolveStats};
use crate::error::{Error, Result};
use crate::problems::{ProblemDescriptor, Sense};
use crate::reconfig::TokenSet;
use crate::temporal::TemporalGraph;

/// Keeps the union of per-snapshot approximate solutions fixed for the
/// whole lifetime. Requires a minimisation problem closed under supersets,
/// which makes the union a solution at every step and the constant
/// sequence trivially reconfigurable; the size is within `tau` times the
/// static approximation factor of the optimum.
pub fn solve_approx(g: &TemporalGraph, prob: &ProblemDescriptor) -> Result<SolveResult> {
    if prob.sense != Sense::Minimize {
        return Err(Error::Precondition(format!(
            "approx needs a minimisation problem; `{}` is maximised",
            prob.name
        )));
    }
    if !prob.monotone_supersets {
        return Err(Error::Precondition(format!(
            "approx needs supersets of solutions to be solutions; `{}` does not declare it",
            prob.name
        )));
    }
    let mut union = TokenSet::new();
    for s in g.snapshots() {
        let part = prob.approximate(s).ok_or_else(|| {
            Error::Precondition(format!("`{}` has no static approximation", prob.name))
        })?;
        union = union.union(&part);
    }
    finish(
        g,
        prob,
        vec![union; g.tau()],
        Method::Approx,
        SolveStats::default(),
    )
}
