//! The time-expanded graph: one copy of the vertex set per time-step,
//! snapshot edges inside each layer, and movement and stay edges between
//! consecutive layers. Vertex `i` at time `t` has index `(t - 1) n + i`.

use crate::matching::maximum_matching;
use crate::reconfig::TokenSet;
use crate::temporal::{StaticGraph, TemporalGraph, Time, Vertex};

#[derive(Clone, Debug)]
pub struct TimeExpandedGraph {
    graph: StaticGraph,
    n: usize,
    tau: Time,
    /// `intra[t - 1]`: copies of the edges of `G_t` inside layer `t`
    intra: Vec<Vec<(usize, usize)>>,
    /// `inter[t - 1]`: edges between layers `t` and `t + 1`, layer-`t` end first
    inter: Vec<Vec<(usize, usize)>>,
}

impl TimeExpandedGraph {
    pub fn graph(&self) -> &StaticGraph {
        &self.graph
    }

    /// Vertices per layer.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> Time {
        self.tau
    }

    /// Index of vertex `i` in layer `t`.
    pub fn index(&self, i: Vertex, t: Time) -> usize {
        (t - 1) * self.n + i
    }

    /// Inverse of [`index`](Self::index).
    pub fn vertex(&self, index: usize) -> (Vertex, Time) {
        (index % self.n, index / self.n + 1)
    }

    /// Indices of layer `t`.
    pub fn layer(&self, t: Time) -> std::ops::Range<usize> {
        (t - 1) * self.n..t * self.n
    }

    pub fn intra_edges(&self, t: Time) -> &[(usize, usize)] {
        &self.intra[t - 1]
    }

    pub fn inter_edges(&self, t: Time) -> &[(usize, usize)] {
        &self.inter[t - 1]
    }

    /// Plain text form: `n <count>` followed by one `edge a b` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# vertex i at time t has index (t - 1) * {} + i\nn {}\n",
            self.n,
            self.graph.n()
        );
        for (a, b) in self.graph.edges() {
            out.push_str(&format!("edge {a} {b}\n"));
        }
        out
    }
}

pub fn build_time_expanded(g: &TemporalGraph) -> TimeExpandedGraph {
    let (n, tau) = (g.n(), g.tau());
    let idx = |i: Vertex, t: Time| (t - 1) * n + i;
    let mut intra = Vec::with_capacity(tau);
    let mut inter = Vec::with_capacity(tau.saturating_sub(1));
    for t in 1..=tau {
        let snap = &g.snapshots()[t - 1];
        intra.push(snap.edges().map(|(u, v)| (idx(u, t), idx(v, t))).collect());
        if t < tau {
            let mut between: Vec<(usize, usize)> =
                (0..n).map(|i| (idx(i, t), idx(i, t + 1))).collect();
            for (u, v) in snap.edges() {
                between.push((idx(u, t), idx(v, t + 1)));
                between.push((idx(v, t), idx(u, t + 1)));
            }
            between.sort_unstable();
            inter.push(between);
        }
    }
    let edges = intra.iter().chain(&inter).flatten().copied();
    let graph = StaticGraph::new(n * tau, edges).expect("layer indices are in range and distinct");
    TimeExpandedGraph {
        graph,
        n,
        tau,
        intra,
        inter,
    }
}

/// Reconfigurability decided inside the time-expanded graph: for every
/// step, a perfect matching between the marked copies of layers `t` and
/// `t + 1` using only edges between those layers.
pub fn check_sequence_via_expansion(g: &TemporalGraph, seq: &[TokenSet]) -> bool {
    if seq.len() != g.tau() || seq.iter().any(|s| s.max().is_some_and(|v| v >= g.n())) {
        return false;
    }
    let h = build_time_expanded(g);
    (1..g.tau()).all(|t| {
        let (a, b) = (&seq[t - 1], &seq[t]);
        if a.len() != b.len() {
            return false;
        }
        let left: Vec<usize> = a.iter().map(|v| h.index(v, t)).collect();
        let right: Vec<usize> = b.iter().map(|v| h.index(v, t + 1)).collect();
        let adj: Vec<Vec<usize>> = left
            .iter()
            .map(|&x| {
                right
                    .iter()
                    .enumerate()
                    .filter(|&(_, &y)| h.graph.adjacent(x, y))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        maximum_matching(right.len(), &adj)
            .iter()
            .all(Option::is_some)
    })
}
