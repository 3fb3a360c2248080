//! Min-cost circulation with lower and upper arc bounds.
//!
//! A circulation graph has a designated source and target that are exempt
//! from flow conservation. The solver joins them with internal arcs in
//! both directions, removes lower bounds by pre-sending them and
//! recording node imbalances, pre-saturates negative-cost arcs so every
//! residual arc starts with non-negative cost, and then routes the
//! imbalances from a super-source to a super-sink by successive shortest
//! paths (Dijkstra on reduced costs). The circulation is feasible iff all
//! imbalances can be routed.
//!
//! All arithmetic is integral. Unbounded arcs get a finite capacity
//! ("big-M") that callers can set; see [`CirculationGraph::unbounded_capacity`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Capacity {
    Finite(u64),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub lower: u64,
    pub upper: Capacity,
    pub cost: i64,
}

#[derive(Clone, Debug)]
pub struct CirculationGraph {
    nodes: usize,
    arcs: Vec<FlowArc>,
    source: usize,
    target: usize,
    unbounded_cap: Option<u64>,
}

/// Per-arc flow values (indexed like [`CirculationGraph::arcs`]) and their
/// total cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirculationFlow {
    pub values: Vec<u64>,
    pub total_cost: i64,
}

impl CirculationGraph {
    pub fn new(nodes: usize, source: usize, target: usize) -> Result<Self> {
        if source >= nodes || target >= nodes {
            return Err(Error::InvalidCirculation(format!(
                "source {source} / target {target} outside 0..{nodes}"
            )));
        }
        if source == target {
            return Err(Error::InvalidCirculation("source equals target".into()));
        }
        Ok(Self {
            nodes,
            arcs: Vec::new(),
            source,
            target,
            unbounded_cap: None,
        })
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(
        &mut self,
        from: usize,
        to: usize,
        lower: u64,
        upper: Capacity,
        cost: i64,
    ) -> Result<usize> {
        if from >= self.nodes || to >= self.nodes {
            return Err(Error::InvalidCirculation(format!(
                "arc {from}->{to} references a node outside 0..{}",
                self.nodes
            )));
        }
        if let Capacity::Finite(u) = upper {
            if lower > u {
                return Err(Error::InvalidCirculation(format!(
                    "arc {from}->{to} has lower bound {lower} above upper bound {u}"
                )));
            }
        }
        self.arcs.push(FlowArc {
            from,
            to,
            lower,
            upper,
            cost,
        });
        Ok(self.arcs.len() - 1)
    }

    pub fn set_unbounded_capacity(&mut self, cap: u64) {
        self.unbounded_cap = Some(cap);
    }

    /// Capacity used for unbounded arcs (and the internal source-target arcs): the
    /// value given to [`set_unbounded_capacity`](Self::set_unbounded_capacity),
    /// or else the sum of all finite upper bounds plus the lower bounds of
    /// unbounded arcs.
    pub fn unbounded_capacity(&self) -> u64 {
        self.unbounded_cap.unwrap_or_else(|| {
            self.arcs
                .iter()
                .map(|a| match a.upper {
                    Capacity::Finite(u) => u,
                    Capacity::Unbounded => a.lower,
                })
                .fold(0u64, u64::saturating_add)
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    fn effective_upper(&self, arc: &FlowArc) -> u64 {
        match arc.upper {
            Capacity::Finite(u) => u,
            Capacity::Unbounded => self.unbounded_capacity(),
        }
    }

    /// Checks capacity on every arc and conservation at every node other
    /// than source and target (unbounded arcs have no upper limit here).
    /// Returns the total cost.
    pub fn verify(&self, values: &[u64]) -> Result<i64> {
        if values.len() != self.arcs.len() {
            return Err(Error::FlowMismatch(format!(
                "{} flow values for {} arcs",
                values.len(),
                self.arcs.len()
            )));
        }
        let mut balance = vec![0i128; self.nodes];
        let mut cost = 0i128;
        for (i, (a, &g)) in self.arcs.iter().zip(values).enumerate() {
            let over = matches!(a.upper, Capacity::Finite(u) if g > u);
            if g < a.lower || over {
                return Err(Error::FlowMismatch(format!(
                    "arc {i} ({}->{}) carries {g}, outside its bounds",
                    a.from, a.to
                )));
            }
            balance[a.from] -= g as i128;
            balance[a.to] += g as i128;
            cost += g as i128 * a.cost as i128;
        }
        if let Some(v) =
            (0..self.nodes).find(|&v| v != self.source && v != self.target && balance[v] != 0)
        {
            return Err(Error::FlowMismatch(format!(
                "node {v} violates conservation by {}",
                balance[v]
            )));
        }
        i64::try_from(cost).map_err(|_| Error::CostOverflow)
    }

    /// One line per arc: `from to lower upper cost`, `inf` for unbounded.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "nodes {} source {} target {}\n",
            self.nodes, self.source, self.target
        );
        for a in &self.arcs {
            let upper = match a.upper {
                Capacity::Finite(u) => u.to_string(),
                Capacity::Unbounded => "inf".into(),
            };
            writeln!(out, "{} {} {} {} {}", a.from, a.to, a.lower, upper, a.cost).unwrap();
        }
        out
    }

    fn negated(&self) -> Result<Self> {
        let mut g = self.clone();
        for a in &mut g.arcs {
            a.cost = a.cost.checked_neg().ok_or(Error::CostOverflow)?;
        }
        Ok(g)
    }
}

/// Residual network for successive shortest paths.
struct Residual {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
    cost: Vec<i64>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Self {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
        }
    }

    /// Forward edge id; its reverse is `id ^ 1`.
    fn link(&mut self, u: usize, v: usize, cap: u64, cost: i64) -> usize {
        let id = self.to.len();
        self.head[u].push(id);
        self.to.push(v);
        self.cap.push(cap);
        self.cost.push(cost);
        self.head[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        self.cost.push(-cost);
        id
    }

    fn push(&mut self, e: usize, amount: u64) {
        self.cap[e] -= amount;
        self.cap[e ^ 1] += amount;
    }

    /// Routes up to `demand` units from `s` to `t` along cheapest paths.
    /// All residual costs must be non-negative on entry.
    fn route(&mut self, s: usize, t: usize, demand: u64) -> u64 {
        let n = self.head.len();
        let mut potential = vec![0i64; n];
        let mut sent = 0;
        while sent < demand {
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            let mut heap = BinaryHeap::new();
            dist[s] = 0;
            heap.push(Reverse((0i64, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &e in &self.head[u] {
                    if self.cap[e] == 0 {
                        continue;
                    }
                    let v = self.to[e];
                    let nd = d + self.cost[e] + potential[u] - potential[v];
                    if nd < dist[v] {
                        dist[v] = nd;
                        via[v] = e;
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            // unreachable nodes shift by the largest distance so that
            // reduced costs into the reachable part stay non-negative
            let reach = dist
                .iter()
                .copied()
                .filter(|&d| d != i64::MAX)
                .max()
                .unwrap_or(0);
            for v in 0..n {
                potential[v] += if dist[v] == i64::MAX { reach } else { dist[v] };
            }
            let mut bottleneck = demand - sent;
            let mut v = t;
            while v != s {
                let e = via[v];
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.push(e, bottleneck);
                v = self.to[e ^ 1];
            }
            sent += bottleneck;
        }
        sent
    }
}

/// A feasible circulation of minimum total cost, or `None` when the lower
/// bounds cannot be met.
pub fn solve_min_cost_circulation(cg: &CirculationGraph) -> Result<Option<CirculationFlow>> {
    let big = cg.unbounded_capacity();
    let n = cg.nodes;
    let (super_s, super_t) = (n, n + 1);
    let mut net = Residual::new(n + 2);
    let mut excess = vec![0i128; n];
    let mut magnitude = 0i128;

    let mut arcs: Vec<(usize, usize, u64, u64, i64)> = cg
        .arcs
        .iter()
        .map(|a| (a.from, a.to, a.lower, cg.effective_upper(a), a.cost))
        .collect();
    arcs.push((cg.target, cg.source, 0, big, 0));
    arcs.push((cg.source, cg.target, 0, big, 0));

    let mut edge_of = Vec::with_capacity(arcs.len());
    for &(from, to, lower, upper, cost) in &arcs {
        if lower > upper {
            return Err(Error::InvalidCirculation(format!(
                "arc {from}->{to} needs {lower} units but unbounded capacity is {upper}"
            )));
        }
        let spare = upper - lower;
        let e = net.link(from, to, spare, cost);
        let mut base = lower;
        if cost < 0 {
            net.push(e, spare);
            base = upper;
        }
        excess[to] += base as i128;
        excess[from] -= base as i128;
        magnitude += cost.unsigned_abs() as i128 * upper as i128;
        edge_of.push(e);
    }
    if magnitude > (i64::MAX / 4) as i128 {
        return Err(Error::CostOverflow);
    }

    let mut demand: u64 = 0;
    for (v, &x) in excess.iter().enumerate() {
        if x > 0 {
            net.link(super_s, v, x as u64, 0);
            demand += x as u64;
        } else if x < 0 {
            net.link(v, super_t, (-x) as u64, 0);
        }
    }
    if net.route(super_s, super_t, demand) < demand {
        return Ok(None);
    }

    let mut values: Vec<u64> = edge_of
        .iter()
        .zip(&arcs)
        .map(|(&e, &(_, _, lower, upper, _))| lower + (upper - lower) - net.cap[e])
        .collect();
    values.truncate(cg.arcs.len()); // drop the internal arcs
    let total_cost = cg.verify(&values)?;
    Ok(Some(CirculationFlow { values, total_cost }))
}

/// A feasible circulation of maximum total cost; costs are reported in the
/// caller's sign convention.
pub fn solve_max_cost_circulation(cg: &CirculationGraph) -> Result<Option<CirculationFlow>> {
    let negated = cg.negated()?;
    Ok(
        solve_min_cost_circulation(&negated)?.map(|f| CirculationFlow {
            total_cost: -f.total_cost,
            values: f.values,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_arc_chain() -> CirculationGraph {
        // source 0, a 1, target 2
        let mut g = CirculationGraph::new(3, 0, 2).unwrap();
        g.add_arc(0, 1, 0, Capacity::Finite(5), 1).unwrap();
        g.add_arc(1, 2, 2, Capacity::Finite(3), 0).unwrap();
        g
    }

    #[test]
    fn min_cost_meets_lower_bound_exactly() {
        let f = solve_min_cost_circulation(&two_arc_chain())
            .unwrap()
            .unwrap();
        assert_eq!(f.values, vec![2, 2]);
        assert_eq!(f.total_cost, 2);
    }

    #[test]
    fn max_cost_fills_to_upper_bound() {
        let f = solve_max_cost_circulation(&two_arc_chain())
            .unwrap()
            .unwrap();
        assert_eq!(f.values, vec![3, 3]);
        assert_eq!(f.total_cost, 3);
    }

    #[test]
    fn zero_lower_bounds_give_zero_flow() {
        let mut g = CirculationGraph::new(4, 0, 3).unwrap();
        g.add_arc(0, 1, 0, Capacity::Finite(4), 2).unwrap();
        g.add_arc(1, 2, 0, Capacity::Unbounded, 0).unwrap();
        g.add_arc(2, 3, 0, Capacity::Finite(1), 5).unwrap();
        let f = solve_min_cost_circulation(&g).unwrap().unwrap();
        assert_eq!(f.values, vec![0, 0, 0]);
        assert_eq!(f.total_cost, 0);
    }

    #[test]
    fn zero_cost_network_max_reports_zero() {
        let mut g = CirculationGraph::new(2, 0, 1).unwrap();
        g.add_arc(0, 1, 1, Capacity::Finite(3), 0).unwrap();
        assert_eq!(
            solve_max_cost_circulation(&g).unwrap().unwrap().total_cost,
            0
        );
    }

    #[test]
    fn lower_above_upper_is_rejected() {
        let mut g = CirculationGraph::new(2, 0, 1).unwrap();
        assert!(matches!(
            g.add_arc(0, 1, 3, Capacity::Finite(2), 0),
            Err(Error::InvalidCirculation(_))
        ));
        assert!(CirculationGraph::new(2, 1, 1).is_err());
        assert!(CirculationGraph::new(2, 0, 2).is_err());
    }

    #[test]
    fn infeasible_lower_bounds() {
        // internal node 1 must receive 2 units but can emit at most 1
        let mut g = CirculationGraph::new(3, 0, 2).unwrap();
        g.add_arc(0, 1, 2, Capacity::Finite(4), 0).unwrap();
        g.add_arc(1, 2, 0, Capacity::Finite(1), 0).unwrap();
        assert_eq!(solve_min_cost_circulation(&g).unwrap(), None);
        assert_eq!(solve_max_cost_circulation(&g).unwrap(), None);
    }

    #[test]
    fn negative_cycle_is_bounded_by_capacities() {
        // cycle 1->2->1 among internal nodes with negative cost
        let mut g = CirculationGraph::new(4, 0, 3).unwrap();
        g.add_arc(1, 2, 0, Capacity::Finite(3), -2).unwrap();
        g.add_arc(2, 1, 0, Capacity::Finite(5), 1).unwrap();
        let f = solve_min_cost_circulation(&g).unwrap().unwrap();
        assert_eq!(f.values, vec![3, 3]);
        assert_eq!(f.total_cost, -3);
    }

    #[test]
    fn explicit_big_m_limits_unbounded_arcs() {
        let mut g = CirculationGraph::new(2, 0, 1).unwrap();
        g.add_arc(0, 1, 0, Capacity::Unbounded, -1).unwrap();
        g.set_unbounded_capacity(7);
        let f = solve_min_cost_circulation(&g).unwrap().unwrap();
        assert_eq!(f.total_cost, -7);
        g.set_unbounded_capacity(0);
        g.add_arc(0, 1, 1, Capacity::Unbounded, 0).unwrap();
        assert!(matches!(
            solve_min_cost_circulation(&g),
            Err(Error::InvalidCirculation(_))
        ));
    }

    #[test]
    fn verify_reports_violations() {
        let g = two_arc_chain();
        assert_eq!(g.verify(&[2, 2]).unwrap(), 2);
        assert!(g.verify(&[2, 3]).is_err());
        assert!(g.verify(&[1, 1]).is_err());
        assert!(g.verify(&[2]).is_err());
    }

    #[test]
    fn dump_lists_arcs() {
        let mut g = two_arc_chain();
        g.add_arc(2, 0, 0, Capacity::Unbounded, 0).unwrap();
        assert_eq!(
            g.dump(),
            "nodes 3 source 0 target 2\n0 1 0 5 1\n1 2 2 3 0\n2 0 0 inf 0\n"
        );
    }
}
