//! Oracles and fixtures shared by the integration tests. Everything here is
//! written directly against bitmasks and adjacency queries so that it does
//! not reuse the library's matching, enumeration or flow code.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsr_core::prelude::*;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_static(rng: &mut impl Rng, n: usize, p: f64) -> StaticGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    StaticGraph::new(n, edges).unwrap()
}

/// A graph whose vertices come in classes that are cliques or independent
/// sets, completely joined or completely disjoint; `classes` lists them.
pub fn random_blow_up(rng: &mut impl Rng, n: usize) -> (StaticGraph, Vec<Vec<Vertex>>) {
    let mut classes: Vec<Vec<Vertex>> = Vec::new();
    let mut v = 0;
    while v < n {
        let size = rng.gen_range(1..=(n - v).min(4));
        classes.push((v..v + size).collect());
        v += size;
    }
    let k = classes.len();
    let clique: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.5)).collect();
    let mut edges = Vec::new();
    for i in 0..k {
        if clique[i] {
            for (a, &x) in classes[i].iter().enumerate() {
                for &y in &classes[i][a + 1..] {
                    edges.push((x, y));
                }
            }
        }
        for j in i + 1..k {
            if rng.gen_bool(0.4) {
                for &x in &classes[i] {
                    for &y in &classes[j] {
                        edges.push((x, y));
                    }
                }
            }
        }
    }
    (StaticGraph::new(n, edges).unwrap(), classes)
}

pub fn random_temporal(rng: &mut impl Rng, n: usize, tau: usize, p: f64) -> TemporalGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let labels: Vec<usize> = (1..=tau).filter(|_| rng.gen_bool(p)).collect();
            if !labels.is_empty() {
                edges.push((u, v, labels));
            }
        }
    }
    TemporalGraph::new(n, tau, edges).unwrap()
}

pub fn random_subset(rng: &mut impl Rng, n: usize, size: usize) -> Vec<Vertex> {
    let mut all: Vec<Vertex> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(size);
    all.sort_unstable();
    all
}

/// Open neighbourhoods as bitmasks.
pub fn adjacency(s: &StaticGraph) -> Vec<u64> {
    (0..s.n())
        .map(|u| {
            (0..s.n())
                .filter(|&v| s.adjacent(u, v))
                .fold(0, |m, v| m | 1 << v)
        })
        .collect()
}

pub fn mask_of(vs: impl IntoIterator<Item = Vertex>) -> u64 {
    vs.into_iter().fold(0, |m, v| m | 1 << v)
}

pub fn vertices_of(mask: u64) -> Vec<Vertex> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

pub fn dominates(adj: &[u64], mask: u64) -> bool {
    (0..adj.len()).all(|v| mask >> v & 1 == 1 || adj[v] & mask != 0)
}

pub fn independent(adj: &[u64], mask: u64) -> bool {
    (0..adj.len()).all(|v| mask >> v & 1 == 0 || adj[v] & mask == 0)
}

fn permutations_match(s: &StaticGraph, a: &[Vertex], b: &mut Vec<Vertex>, k: usize) -> bool {
    if k == b.len() {
        return a
            .iter()
            .zip(b.iter())
            .all(|(&x, &y)| x == y || s.adjacent(x, y));
    }
    for i in k..b.len() {
        b.swap(k, i);
        let ok = (a[k] == b[k] || s.adjacent(a[k], b[k])) && permutations_match(s, a, b, k + 1);
        b.swap(k, i);
        if ok {
            return true;
        }
    }
    false
}

/// Exhaustive search over all bijections `a -> b`.
pub fn slide_by_permutations(s: &StaticGraph, a: &[Vertex], b: &[Vertex]) -> bool {
    a.len() == b.len() && permutations_match(s, a, &mut b.to_vec(), 0)
}

/// Simple augmenting-path matching over stay-or-slide pairs.
pub fn slide_by_augmenting(adj: &[u64], a: &[Vertex], b: &[Vertex]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ok = |x: Vertex, y: Vertex| x == y || adj[x] >> y & 1 == 1;
    let mut owner: Vec<Option<usize>> = vec![None; b.len()];
    fn augment(
        l: usize,
        a: &[Vertex],
        b: &[Vertex],
        ok: &dyn Fn(Vertex, Vertex) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for r in 0..b.len() {
            if !seen[r] && ok(a[l], b[r]) {
                seen[r] = true;
                if owner[r].is_none_or(|o| augment(o, a, b, ok, seen, owner)) {
                    owner[r] = Some(l);
                    return true;
                }
            }
        }
        false
    }
    (0..a.len()).all(|l| augment(l, a, b, &ok, &mut vec![false; b.len()], &mut owner))
}

/// Sizes and per-step kinds (`C` clique, `I` independent) of the six-class
/// fixture, and its class-level edges per step (1-based class names).
pub const SIX_SIZES: [usize; 6] = [3, 4, 6, 6, 5, 2];
pub const SIX_KINDS: [&str; 6] = ["CIC", "IIC", "III", "CII", "CCI", "IIC"];
pub const SIX_CLASS_EDGES: [&[(usize, usize)]; 3] = [
    &[(2, 3), (4, 5), (4, 1), (4, 6), (5, 6), (1, 6), (1, 5)],
    &[(2, 1), (6, 1), (2, 6), (6, 5), (2, 4), (4, 5)],
    &[(2, 3), (5, 6), (5, 1), (5, 4)],
];

/// The six-class instance (vertices numbered class by class) and its classes.
pub fn six_classes() -> (TemporalGraph, Vec<Vec<Vertex>>) {
    let mut classes = Vec::new();
    let mut next = 0;
    for &size in &SIX_SIZES {
        classes.push((next..next + size).collect::<Vec<_>>());
        next += size;
    }
    let mut labels = std::collections::BTreeMap::<(usize, usize), Vec<usize>>::new();
    for t in 1..=3 {
        for (i, class) in classes.iter().enumerate() {
            if SIX_KINDS[i].as_bytes()[t - 1] == b'C' {
                for (a, &x) in class.iter().enumerate() {
                    for &y in &class[a + 1..] {
                        labels.entry((x, y)).or_default().push(t);
                    }
                }
            }
        }
        for &(i, j) in SIX_CLASS_EDGES[t - 1] {
            for &x in &classes[i - 1] {
                for &y in &classes[j - 1] {
                    labels.entry((x.min(y), x.max(y))).or_default().push(t);
                }
            }
        }
    }
    let edges: Vec<_> = labels.into_iter().map(|((u, v), l)| (u, v, l)).collect();
    (TemporalGraph::new(next, 3, edges).unwrap(), classes)
}

fn count_vectors(sizes: &[usize], y: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; sizes.len()]];
    for &i in y {
        out = out
            .into_iter()
            .flat_map(|c| {
                (1..=sizes[i]).map(move |m| {
                    let mut c = c.clone();
                    c[i] = m;
                    c
                })
            })
            .collect();
    }
    out
}

fn canonical(classes: &[Vec<Vertex>], counts: &[usize]) -> Vec<Vertex> {
    let mut v: Vec<Vertex> = classes
        .iter()
        .zip(counts)
        .flat_map(|(c, &m)| c[..m].iter().copied())
        .collect();
    v.sort_unstable();
    v
}

/// Whether some set with counts `to` is reachable in one step from the
/// canonical set with counts `from`. Sets hitting each class's canonical
/// part and its remainder the same number of times are equivalent, so one
/// representative per overlap pattern is tried.
fn step_possible(adj: &[u64], classes: &[Vec<Vertex>], from: &[usize], to: &[usize]) -> bool {
    let a = canonical(classes, from);
    let mut patterns: Vec<Vec<Vertex>> = vec![Vec::new()];
    for (i, class) in classes.iter().enumerate() {
        let (c, d, size) = (from[i], to[i], class.len());
        let lo = (c + d).saturating_sub(size);
        let hi = c.min(d);
        patterns = patterns
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |o| {
                    let mut p = p.clone();
                    p.extend_from_slice(&class[..o]);
                    p.extend_from_slice(&class[c..c + d - o]);
                    p
                })
            })
            .collect();
    }
    patterns.into_iter().any(|mut b| {
        b.sort_unstable();
        slide_by_augmenting(adj, &a, &b)
    })
}

/// Best size of a reconfigurable sequence whose step-`t` set meets exactly
/// the classes in `candidate[t - 1]`, each set passing `property`.
/// `classes` must be temporal twin classes of `g`.
pub fn compatible_optimum(
    g: &TemporalGraph,
    classes: &[Vec<Vertex>],
    candidate: &[Vec<usize>],
    property: &dyn Fn(&[u64], u64) -> bool,
    maximize: bool,
) -> Option<usize> {
    let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    let adj: Vec<Vec<u64>> = g.snapshots().iter().map(adjacency).collect();
    let layers: Vec<Vec<Vec<usize>>> = candidate
        .iter()
        .enumerate()
        .map(|(t, y)| {
            count_vectors(&sizes, y)
                .into_iter()
                .filter(|c| property(&adj[t], mask_of(canonical(classes, c))))
                .collect()
        })
        .collect();
    let mut totals: Vec<usize> = (0..=g.n()).collect();
    if maximize {
        totals.reverse();
    }
    totals.into_iter().find(|&s| {
        let of_size = |t: usize| -> Vec<&Vec<usize>> {
            layers[t]
                .iter()
                .filter(|c| c.iter().sum::<usize>() == s)
                .collect()
        };
        let mut reach = of_size(0);
        for t in 1..g.tau() {
            reach = of_size(t)
                .into_iter()
                .filter(|next| {
                    reach
                        .iter()
                        .any(|cur| step_possible(&adj[t - 1], classes, cur, next))
                })
                .collect();
        }
        !reach.is_empty()
    })
}

/// `H_m = 1 + 1/2 + ... + 1/m`.
pub fn harmonic(m: usize) -> f64 {
    (1..=m).map(|i| 1.0 / i as f64).sum()
}

/// Cheapest circulation by trying every integral assignment within the arc
/// bounds; `None` when no assignment conserves flow.
pub fn exhaustive_circulation(cg: &CirculationGraph) -> Option<i64> {
    let arcs = cg.arcs();
    let upper: Vec<u64> = arcs
        .iter()
        .map(|a| match a.upper {
            Capacity::Finite(u) => u,
            Capacity::Unbounded => panic!("exhaustive oracle needs finite bounds"),
        })
        .collect();
    let mut values: Vec<u64> = arcs.iter().map(|a| a.lower).collect();
    let mut best: Option<i64> = None;
    loop {
        let mut balance = vec![0i64; cg.nodes()];
        for (a, &x) in arcs.iter().zip(&values) {
            balance[a.from] -= x as i64;
            balance[a.to] += x as i64;
        }
        let conserved =
            (0..cg.nodes()).all(|v| v == cg.source() || v == cg.target() || balance[v] == 0);
        if conserved {
            let cost: i64 = arcs
                .iter()
                .zip(&values)
                .map(|(a, &x)| a.cost * x as i64)
                .sum();
            best = Some(best.map_or(cost, |b| b.min(cost)));
        }
        let mut i = 0;
        loop {
            if i == values.len() {
                return best;
            }
            if values[i] < upper[i] {
                values[i] += 1;
                break;
            }
            values[i] = arcs[i].lower;
            i += 1;
        }
    }
}

pub fn random_circulation(rng: &mut impl Rng) -> CirculationGraph {
    let nodes = rng.gen_range(2..=6);
    let arcs = rng.gen_range(1..=8);
    let mut cg = CirculationGraph::new(nodes, 0, 1).unwrap();
    for _ in 0..arcs {
        let from = rng.gen_range(0..nodes);
        let mut to = rng.gen_range(0..nodes - 1);
        if to >= from {
            to += 1;
        }
        let upper = rng.gen_range(0..=4);
        let lower = if rng.gen_bool(0.3) {
            rng.gen_range(0..=upper)
        } else {
            0
        };
        let cost = rng.gen_range(-5..=5);
        cg.add_arc(from, to, lower, Capacity::Finite(upper), cost)
            .unwrap();
    }
    cg
}
