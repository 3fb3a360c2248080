//! Temporal neighbourhood diversity.
//!
//! Two vertices `u`, `v` are temporal twins when `N_t(u) \ {v} = N_t(v) \ {u}`
//! at every time-step. The relation is an equivalence, so its classes form
//! the unique coarsest twin partition; its size is the temporal
//! neighbourhood diversity `tnd`.

use super::graph::{StaticGraph, TemporalGraph, Time, Vertex};
use crate::error::{Error, Result};

fn twins_in(s: &StaticGraph, u: Vertex, v: Vertex) -> bool {
    let mut nu = s.neighbor_set(u).clone();
    let mut nv = s.neighbor_set(v).clone();
    nu.set(v, false);
    nv.set(u, false);
    nu == nv
}

/// First time-step at which `u` and `v` are not twins.
fn twin_violation(g: &TemporalGraph, u: Vertex, v: Vertex) -> Option<Time> {
    g.snapshots()
        .iter()
        .position(|s| !twins_in(s, u, v))
        .map(|i| i + 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TndPartition {
    classes: Vec<Vec<Vertex>>,
    class_of: Vec<usize>,
}

impl TndPartition {
    /// Wraps an explicit list of classes. Checks that they partition
    /// `0..n`; the twin condition is checked by [`tnd_graph`].
    pub fn from_classes(n: usize, classes: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut class_of = vec![usize::MAX; n];
        let mut sorted = Vec::with_capacity(classes.len());
        for (i, mut class) in classes.into_iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidArgument(format!("class {i} is empty")));
            }
            class.sort_unstable();
            for &v in &class {
                if v >= n {
                    return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
                }
                if class_of[v] != usize::MAX {
                    return Err(Error::InvalidArgument(format!("vertex {v} in two classes")));
                }
                class_of[v] = i;
            }
            sorted.push(class);
        }
        if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidArgument(format!("vertex {v} in no class")));
        }
        Ok(Self {
            classes: sorted,
            class_of,
        })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<Vertex>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[Vertex] {
        &self.classes[i]
    }

    pub fn class_of(&self, v: Vertex) -> usize {
        self.class_of[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

/// The coarsest temporal twin partition. Classes are ordered by their
/// smallest vertex.
pub fn tnd_partition(g: &TemporalGraph) -> TndPartition {
    let mut classes: Vec<Vec<Vertex>> = Vec::new();
    let mut class_of = vec![0; g.n()];
    #[allow(clippy::needless_range_loop)]
    for v in 0..g.n() {
        // transitivity: comparing against one representative is enough
        match classes
            .iter()
            .position(|c| twin_violation(g, c[0], v).is_none())
        {
            Some(i) => {
                classes[i].push(v);
                class_of[v] = i;
            }
            None => {
                class_of[v] = classes.len();
                classes.push(vec![v]);
            }
        }
    }
    TndPartition { classes, class_of }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Clique,
    Independent,
}

/// Classes merged into single vertices, with per-time class kinds.
#[derive(Clone, Debug)]
pub struct TndGraph {
    graph: TemporalGraph,
    sizes: Vec<usize>,
    /// `kinds[t - 1][i]`
    kinds: Vec<Vec<ClassKind>>,
}

impl TndGraph {
    /// Number of classes.
    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn tau(&self) -> Time {
        self.graph.tau()
    }

    /// The class-level temporal graph.
    pub fn class_graph(&self) -> &TemporalGraph {
        &self.graph
    }

    pub fn size(&self, class: usize) -> usize {
        self.sizes[class]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Panics if `t` is outside `1..=tau`.
    pub fn kind(&self, t: Time, class: usize) -> ClassKind {
        self.kinds[t - 1][class]
    }

    /// Whether classes `i` and `j` are completely joined at `t`. Panics if
    /// `t` is outside `1..=tau`.
    pub fn adjacent(&self, t: Time, i: usize, j: usize) -> bool {
        i != j && self.graph.snapshots()[t - 1].adjacent(i, j)
    }
}

/// Merges the classes of `p`. Fails with a witness pair if `p` is not a
/// temporal twin partition of `g`.
pub fn tnd_graph(g: &TemporalGraph, p: &TndPartition) -> Result<TndGraph> {
    if p.class_of.len() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "partition covers {} vertices, graph has {}",
            p.class_of.len(),
            g.n()
        )));
    }
    for class in p.classes() {
        for (a, &u) in class.iter().enumerate() {
            for &v in &class[a + 1..] {
                if let Some(t) = twin_violation(g, u, v) {
                    return Err(Error::InvalidPartition { u, v, t });
                }
            }
        }
    }

    let k = p.len();
    let mut class_edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (u, v) = (p.class(i)[0], p.class(j)[0]);
            let labels: Vec<Time> = (1..=g.tau())
                .filter(|&t| g.snapshots()[t - 1].adjacent(u, v))
                .collect();
            if !labels.is_empty() {
                class_edges.push((i, j, labels));
            }
        }
    }
    let graph = TemporalGraph::new(k, g.tau(), class_edges)?;

    let kinds = g
        .snapshots()
        .iter()
        .map(|s| {
            p.classes()
                .iter()
                .map(|c| {
                    if c.len() == 1 || s.adjacent(c[0], c[1]) {
                        ClassKind::Clique
                    } else {
                        ClassKind::Independent
                    }
                })
                .collect()
        })
        .collect();

    Ok(TndGraph {
        graph,
        sizes: p.sizes(),
        kinds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::generate_random;

    fn complete(n: usize, tau: usize) -> TemporalGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v, (1..=tau).collect::<Vec<_>>()));
            }
        }
        TemporalGraph::new(n, tau, edges).unwrap()
    }

    #[test]
    fn complete_graph_is_one_clique_class() {
        let g = complete(5, 3);
        let p = tnd_partition(&g);
        assert_eq!(p.len(), 1);
        let h = tnd_graph(&g, &p).unwrap();
        assert!((1..=3).all(|t| h.kind(t, 0) == ClassKind::Clique));
    }

    #[test]
    fn edgeless_graph_is_one_class() {
        let g = TemporalGraph::new(4, 3, Vec::<(usize, usize, Vec<usize>)>::new()).unwrap();
        let p = tnd_partition(&g);
        assert_eq!(p.len(), 1);
        let h = tnd_graph(&g, &p).unwrap();
        assert_eq!(h.kind(2, 0), ClassKind::Independent);
    }

    #[test]
    fn persistent_edge_endpoints_are_adjacent_twins() {
        let g = TemporalGraph::new(2, 2, [(0, 1, vec![1, 2])]).unwrap();
        assert_eq!(tnd_partition(&g).len(), 1);
    }

    #[test]
    fn edge_flickering_separates_twins() {
        // 0-1 at t=1 only: at t=2 vertex 2 is adjacent to 0 but not 1
        let g = TemporalGraph::new(3, 2, [(0, 1, vec![1]), (0, 2, vec![2])]).unwrap();
        let p = tnd_partition(&g);
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn invalid_partition_reports_witness() {
        let g = TemporalGraph::new(3, 2, [(0, 1, vec![2])]).unwrap();
        let p = TndPartition::from_classes(3, vec![vec![0, 1, 2]]).unwrap();
        match tnd_graph(&g, &p) {
            Err(Error::InvalidPartition { u: 0, v: 2, t: 2 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn from_classes_rejects_non_partitions() {
        assert!(TndPartition::from_classes(3, vec![vec![0, 1]]).is_err());
        assert!(TndPartition::from_classes(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(TndPartition::from_classes(3, vec![vec![0, 1, 2], vec![]]).is_err());
    }

    #[test]
    fn random_partitions_are_valid_and_coarsest() {
        for seed in 0..40 {
            let g = generate_random(7, 3, if seed % 2 == 0 { 0.3 } else { 0.8 }, seed).unwrap();
            let p = tnd_partition(&g);
            let h = tnd_graph(&g, &p).expect("computed partition is valid");
            // coarsest: no pair of representatives from distinct classes are twins
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    assert!(twin_violation(&g, p.class(i)[0], p.class(j)[0]).is_some());
                }
            }
            // per-snapshot uniformity of class pairs
            for t in 1..=g.tau() {
                let s = g.snapshot(t).unwrap();
                for i in 0..p.len() {
                    for j in 0..p.len() {
                        for &u in p.class(i) {
                            for &v in p.class(j) {
                                if u == v {
                                    continue;
                                }
                                let expected = if i == j {
                                    h.kind(t, i) == ClassKind::Clique
                                } else {
                                    h.adjacent(t, i, j)
                                };
                                assert_eq!(s.adjacent(u, v), expected);
                            }
                        }
                    }
                }
            }
        }
    }
}
