use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Dense 0-based vertex index.
pub type Vertex = usize;

/// Time-steps start at 1.
pub type Time = usize;

/// Simple undirected graph with both adjacency lists and an adjacency
/// matrix. Snapshots, footprints and class graphs all use this type.
#[derive(Clone, Debug)]
pub struct StaticGraph {
    adj: Vec<Vec<Vertex>>,
    matrix: Vec<FixedBitSet>,
    edge_count: usize,
}

impl StaticGraph {
    pub fn edgeless(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            matrix: vec![FixedBitSet::with_capacity(n); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Repeated pairs are merged.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut g = Self::edgeless(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {u}-{v} references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            g.insert(u, v);
        }
        g.finish();
        Ok(g)
    }

    fn insert(&mut self, u: Vertex, v: Vertex) {
        if !self.matrix[u].contains(v) {
            self.matrix[u].insert(v);
            self.matrix[v].insert(u);
            self.adj[u].push(v);
            self.adj[v].push(u);
            self.edge_count += 1;
        }
    }

    fn finish(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn neighbor_set(&self, v: Vertex) -> &FixedBitSet {
        &self.matrix[v]
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.matrix[u].contains(v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TemporalEdge {
    pub u: Vertex,
    pub v: Vertex,
    /// Sorted, deduplicated, non-empty.
    pub labels: Vec<Time>,
}

/// A static graph on `n` vertices whose edges carry sets of active
/// time-steps, together with a lifetime `tau`.
///
/// `tau` is at least the largest label; it may be larger, in which case the
/// trailing snapshots are edgeless.
#[derive(Clone, Debug)]
pub struct TemporalGraph {
    n: usize,
    tau: Time,
    edges: Vec<TemporalEdge>,
    snapshots: Vec<StaticGraph>,
}

impl PartialEq for TemporalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.tau == other.tau && self.edges == other.edges
    }
}

impl Eq for TemporalGraph {}

impl TemporalGraph {
    pub fn new<I, L>(n: usize, tau: Time, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, L)>,
        L: IntoIterator<Item = Time>,
    {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        if tau == 0 {
            return Err(Error::InvalidGraph("lifetime must be positive".into()));
        }
        let mut list = Vec::new();
        for (a, b, labels) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {a}-{b} references a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {a}")));
            }
            let mut labels: Vec<Time> = labels.into_iter().collect();
            labels.sort_unstable();
            labels.dedup();
            if labels.is_empty() {
                return Err(Error::InvalidGraph(format!(
                    "edge {a}-{b} has no time labels"
                )));
            }
            if labels[0] == 0 {
                return Err(Error::InvalidGraph(format!("edge {a}-{b} has label 0")));
            }
            if let Some(&last) = labels.last() {
                if last > tau {
                    return Err(Error::InvalidGraph(format!(
                        "edge {a}-{b} has label {last} beyond lifetime {tau}"
                    )));
                }
            }
            list.push(TemporalEdge {
                u: a.min(b),
                v: a.max(b),
                labels,
            });
        }
        list.sort_unstable();
        if let Some(w) = list
            .windows(2)
            .find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v))
        {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {}-{}",
                w[0].u, w[0].v
            )));
        }

        let mut snapshots = vec![StaticGraph::edgeless(n); tau];
        for e in &list {
            for &t in &e.labels {
                snapshots[t - 1].insert(e.u, e.v);
            }
        }
        for s in &mut snapshots {
            s.finish();
        }
        Ok(Self {
            n,
            tau,
            edges: list,
            snapshots,
        })
    }

    /// Like [`TemporalGraph::new`] with the lifetime set to the largest label
    /// (1 when there are no edges).
    pub fn with_inferred_lifetime<I, L>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, L)>,
        L: IntoIterator<Item = Time>,
    {
        let edges: Vec<(Vertex, Vertex, Vec<Time>)> = edges
            .into_iter()
            .map(|(u, v, l)| (u, v, l.into_iter().collect()))
            .collect();
        let tau = edges
            .iter()
            .flat_map(|(_, _, l)| l.iter().copied())
            .max()
            .unwrap_or(1)
            .max(1);
        Self::new(n, tau, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> Time {
        self.tau
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    /// The static graph `G_t` of edges active at `t`.
    pub fn snapshot(&self, t: Time) -> Result<&StaticGraph> {
        if t == 0 || t > self.tau {
            return Err(Error::TimeOutOfRange { t, tau: self.tau });
        }
        Ok(&self.snapshots[t - 1])
    }

    /// All snapshots; index `t - 1` holds `G_t`.
    pub fn snapshots(&self) -> &[StaticGraph] {
        &self.snapshots
    }

    /// `|E|_max`, the largest snapshot edge count.
    pub fn max_snapshot_edges(&self) -> usize {
        self.snapshots
            .iter()
            .map(StaticGraph::edge_count)
            .max()
            .unwrap_or(0)
    }

    pub fn max_snapshot_degree(&self) -> usize {
        self.snapshots
            .iter()
            .map(StaticGraph::max_degree)
            .max()
            .unwrap_or(0)
    }
}

/// Union of all snapshots.
pub fn footprint(g: &TemporalGraph) -> StaticGraph {
    StaticGraph::new(g.n(), g.edges().iter().map(|e| (e.u, e.v)))
        .expect("temporal graph edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_after_last_label_is_edgeless() {
        let g = TemporalGraph::new(2, 3, [(0, 1, vec![1, 2])]).unwrap();
        assert_eq!(g.snapshot(3).unwrap().edge_count(), 0);
        assert_eq!(g.snapshot(2).unwrap().edge_count(), 1);
        assert!(matches!(
            g.snapshot(4),
            Err(Error::TimeOutOfRange { t: 4, tau: 3 })
        ));
        assert!(g.snapshot(0).is_err());
    }

    #[test]
    fn footprint_collects_every_active_edge() {
        let g = TemporalGraph::new(3, 3, [(0, 1, vec![1, 3])]).unwrap();
        let f = footprint(&g);
        assert_eq!(f.edges().collect::<Vec<_>>(), vec![(0, 1)]);

        let empty = TemporalGraph::new(4, 2, Vec::<(usize, usize, Vec<usize>)>::new()).unwrap();
        assert_eq!(footprint(&empty).edge_count(), 0);
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(TemporalGraph::new(2, 1, [(0, 0, vec![1])]).is_err());
        assert!(TemporalGraph::new(2, 1, [(0, 2, vec![1])]).is_err());
        assert!(TemporalGraph::new(2, 1, [(0, 1, vec![2])]).is_err());
        assert!(TemporalGraph::new(2, 1, [(0, 1, vec![0])]).is_err());
        assert!(TemporalGraph::new(2, 1, [(0, 1, vec![])]).is_err());
        assert!(TemporalGraph::new(2, 1, [(0, 1, vec![1]), (1, 0, vec![1])]).is_err());
    }

    #[test]
    fn labels_are_canonicalised() {
        let g = TemporalGraph::new(2, 2, [(1, 0, vec![2, 1, 2])]).unwrap();
        assert_eq!(
            g.edges()[0],
            TemporalEdge {
                u: 0,
                v: 1,
                labels: vec![1, 2]
            }
        );
    }

    #[test]
    fn inferred_lifetime_is_max_label() {
        let g =
            TemporalGraph::with_inferred_lifetime(3, [(0, 1, vec![4]), (1, 2, vec![2])]).unwrap();
        assert_eq!(g.tau(), 4);
    }
}
