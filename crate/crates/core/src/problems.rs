//! Vertex-selection problems.
//!
//! A [`ProblemDescriptor`] bundles a solution predicate with an objective
//! sense and the optional capabilities individual solvers need: an
//! enumerator (for the enumeration DP), a static approximator (for the
//! union approximation) and class-level bound functions (for the
//! class-partition solver).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::reconfig::TokenSet;
use crate::temporal::{ClassKind, StaticGraph, Time, TndGraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// Whether size `a` is strictly better than size `b`.
    pub fn better(self, a: usize, b: usize) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }
}

/// Upper limit on the number of classes a [`ClassSet`] can hold.
pub const MAX_CLASSES: usize = 64;

/// A set of partition classes, as a bitmask over class indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassSet(u64);

impl ClassSet {
    pub const EMPTY: ClassSet = ClassSet(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, class: usize) -> bool {
        class < MAX_CLASSES && self.0 >> class & 1 == 1
    }

    pub fn with(self, class: usize) -> Self {
        Self(self.0 | 1 << class)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_CLASSES).filter(move |&i| self.contains(i))
    }
}

impl FromIterator<usize> for ClassSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(ClassSet::EMPTY, ClassSet::with)
    }
}

/// Class-level decision and bound functions for one snapshot.
///
/// For a class set `y` with `check` true, a vertex set `X` solves the
/// problem on `G_t` and meets exactly the classes of `y` iff
/// `low <= |V_i ∩ X| <= up` for every class `V_i`.
pub trait Ndld: Send + Sync {
    fn check(&self, tnd: &TndGraph, t: Time, y: ClassSet) -> bool;
    fn low(&self, tnd: &TndGraph, t: Time, y: ClassSet, class: usize) -> usize;
    fn up(&self, tnd: &TndGraph, t: Time, y: ClassSet, class: usize) -> usize;
}

fn has_neighbour_in(tnd: &TndGraph, t: Time, y: ClassSet, class: usize) -> bool {
    y.iter().any(|j| tnd.adjacent(t, class, j))
}

/// Dominating set: `y` must dominate the class graph at `t`. A class in
/// `y` may hold any positive number of tokens if it is a clique or sees
/// another class of `y`; otherwise every one of its vertices is needed.
#[derive(Clone, Copy, Debug, Default)]
pub struct DominatingSetNdld;

impl DominatingSetNdld {
    fn bounds(tnd: &TndGraph, t: Time, y: ClassSet, class: usize) -> (usize, usize) {
        let size = tnd.size(class);
        if !y.contains(class) {
            (0, 0)
        } else if tnd.kind(t, class) == ClassKind::Clique || has_neighbour_in(tnd, t, y, class) {
            (1, size)
        } else {
            (size, size)
        }
    }
}

impl Ndld for DominatingSetNdld {
    fn check(&self, tnd: &TndGraph, t: Time, y: ClassSet) -> bool {
        (0..tnd.k()).all(|i| y.contains(i) || has_neighbour_in(tnd, t, y, i))
    }

    fn low(&self, tnd: &TndGraph, t: Time, y: ClassSet, class: usize) -> usize {
        Self::bounds(tnd, t, y, class).0
    }

    fn up(&self, tnd: &TndGraph, t: Time, y: ClassSet, class: usize) -> usize {
        Self::bounds(tnd, t, y, class).1
    }
}

/// Independent set: `y` must be independent in the class graph at `t`;
/// a clique class holds exactly one token, an independent class any
/// positive number.
#[derive(Clone, Copy, Debug, Default)]
pub struct IndependentSetNdld;

impl IndependentSetNdld {
    fn bounds(tnd: &TndGraph, t: Time, y: ClassSet, class: usize) -> (usize, usize) {
        if !y.contains(class) {
            (0, 0)
        } else if tnd.kind(t, class) == ClassKind::Clique {
            (1, 1)
        } else {
            (1, tnd.size(class))
        }
    }
}

impl Ndld for IndependentSetNdld {
    fn check(&self, tnd: &TndGraph, t: Time, y: ClassSet) -> bool {
        y.iter().all(|i| !has_neighbour_in(tnd, t, y, i))
    }

    fn low(&self, tnd: &TndGraph, t: Time, y: ClassSet, class: usize) -> usize {
        Self::bounds(tnd, t, y, class).0
    }

    fn up(&self, tnd: &TndGraph, t: Time, y: ClassSet, class: usize) -> usize {
        Self::bounds(tnd, t, y, class).1
    }
}

/// Bound on the exponent of subset enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimit {
    pub max_free_vertices: usize,
}

impl Default for EnumerationLimit {
    fn default() -> Self {
        Self {
            max_free_vertices: 20,
        }
    }
}

impl EnumerationLimit {
    fn admit(self, free: usize, what: &str) -> Result<()> {
        if free > self.max_free_vertices || free >= 63 {
            return Err(Error::GuardExceeded(format!(
                "{what} enumeration over {free} free vertices exceeds limit {}",
                self.max_free_vertices
            )));
        }
        Ok(())
    }
}

pub fn ds_is_solution(s: &StaticGraph, x: &TokenSet) -> bool {
    (0..s.n()).all(|v| x.contains(v) || s.neighbors(v).iter().any(|&u| x.contains(u)))
}

pub fn is_is_solution(s: &StaticGraph, x: &TokenSet) -> bool {
    x.iter()
        .all(|u| s.neighbors(u).iter().all(|&v| !x.contains(v)))
}

/// All dominating sets. Isolated vertices belong to every dominating set,
/// so only subsets of the non-isolated vertices are enumerated.
pub fn enumerate_dominating_sets(
    s: &StaticGraph,
    limit: EnumerationLimit,
) -> Result<Vec<TokenSet>> {
    let (free, forced): (Vec<Vertex>, Vec<Vertex>) = (0..s.n()).partition(|&v| s.degree(v) > 0);
    limit.admit(free.len(), "dominating set")?;
    let mut index = vec![usize::MAX; s.n()];
    for (i, &v) in free.iter().enumerate() {
        index[v] = i;
    }
    let closed: Vec<u64> = free
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            s.neighbors(v)
                .iter()
                .fold(1u64 << i, |m, &u| m | 1 << index[u])
        })
        .collect();

    let mut out = Vec::new();
    for mask in 0..1u64 << free.len() {
        if closed.iter().all(|&c| c & mask != 0) {
            let mut set: TokenSet = forced.iter().copied().collect();
            for (i, &v) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    set.insert(v);
                }
            }
            out.push(set);
        }
    }
    Ok(out)
}

pub fn enumerate_independent_sets(
    s: &StaticGraph,
    limit: EnumerationLimit,
) -> Result<Vec<TokenSet>> {
    limit.admit(s.n(), "independent set")?;
    let nbr: Vec<u64> = (0..s.n())
        .map(|v| s.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect();
    Ok((0..1u64 << s.n())
        .filter(|&mask| (0..s.n()).all(|v| mask >> v & 1 == 0 || nbr[v] & mask == 0))
        .map(TokenSet::from_mask)
        .collect())
}

/// Greedy set cover over closed neighbourhoods; within `H(Δ+1)` of the
/// optimum. Ties go to the smallest vertex.
pub fn ds_greedy_approx(s: &StaticGraph) -> TokenSet {
    let n = s.n();
    let mut dominated = vec![false; n];
    let mut remaining = n;
    let mut set = TokenSet::new();
    while remaining > 0 {
        let gain = |v: Vertex| {
            usize::from(!dominated[v]) + s.neighbors(v).iter().filter(|&&u| !dominated[u]).count()
        };
        let best = (0..n)
            .max_by_key(|&v| (gain(v), std::cmp::Reverse(v)))
            .expect("n > 0 while vertices remain");
        set.insert(best);
        for v in std::iter::once(best).chain(s.neighbors(best).iter().copied()) {
            if !dominated[v] {
                dominated[v] = true;
                remaining -= 1;
            }
        }
    }
    set
}

pub type SolutionPredicate = dyn Fn(&StaticGraph, &TokenSet) -> bool + Send + Sync;
pub type Enumerator = dyn Fn(&StaticGraph, EnumerationLimit) -> Result<Vec<TokenSet>> + Send + Sync;
pub type Approximator = dyn Fn(&StaticGraph) -> TokenSet + Send + Sync;

/// A static vertex-selection problem and the capabilities attached to it.
#[derive(Clone)]
pub struct ProblemDescriptor {
    pub name: String,
    pub sense: Sense,
    /// Declared, not inferred: every superset of a solution is a solution.
    pub monotone_supersets: bool,
    is_solution: Arc<SolutionPredicate>,
    enumerate: Option<Arc<Enumerator>>,
    approximate: Option<Arc<Approximator>>,
    ndld: Option<Arc<dyn Ndld>>,
}

impl fmt::Debug for ProblemDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDescriptor")
            .field("name", &self.name)
            .field("sense", &self.sense)
            .field("monotone_supersets", &self.monotone_supersets)
            .field("enumerate", &self.enumerate.is_some())
            .field("approximate", &self.approximate.is_some())
            .field("ndld", &self.ndld.is_some())
            .finish()
    }
}

impl ProblemDescriptor {
    pub fn new(
        name: impl Into<String>,
        sense: Sense,
        is_solution: impl Fn(&StaticGraph, &TokenSet) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            sense,
            monotone_supersets: false,
            is_solution: Arc::new(is_solution),
            enumerate: None,
            approximate: None,
            ndld: None,
        }
    }

    pub fn with_monotone_supersets(mut self, yes: bool) -> Self {
        self.monotone_supersets = yes;
        self
    }

    pub fn with_enumerator(
        mut self,
        f: impl Fn(&StaticGraph, EnumerationLimit) -> Result<Vec<TokenSet>> + Send + Sync + 'static,
    ) -> Self {
        self.enumerate = Some(Arc::new(f));
        self
    }

    pub fn with_approximator(
        mut self,
        f: impl Fn(&StaticGraph) -> TokenSet + Send + Sync + 'static,
    ) -> Self {
        self.approximate = Some(Arc::new(f));
        self
    }

    pub fn with_ndld(mut self, ndld: impl Ndld + 'static) -> Self {
        self.ndld = Some(Arc::new(ndld));
        self
    }

    pub fn dominating_set() -> Self {
        Self::new("ds", Sense::Minimize, ds_is_solution)
            .with_monotone_supersets(true)
            .with_enumerator(enumerate_dominating_sets)
            .with_approximator(ds_greedy_approx)
            .with_ndld(DominatingSetNdld)
    }

    pub fn independent_set() -> Self {
        Self::new("is", Sense::Maximize, is_is_solution)
            .with_enumerator(enumerate_independent_sets)
            .with_ndld(IndependentSetNdld)
    }

    pub fn is_solution(&self, s: &StaticGraph, x: &TokenSet) -> bool {
        (self.is_solution)(s, x)
    }

    /// `None` when the problem has no enumerator.
    pub fn enumerate(
        &self,
        s: &StaticGraph,
        limit: EnumerationLimit,
    ) -> Option<Result<Vec<TokenSet>>> {
        self.enumerate.as_ref().map(|f| f(s, limit))
    }

    pub fn has_enumerator(&self) -> bool {
        self.enumerate.is_some()
    }

    pub fn approximate(&self, s: &StaticGraph) -> Option<TokenSet> {
        self.approximate.as_ref().map(|f| f(s))
    }

    pub fn ndld(&self) -> Option<&dyn Ndld> {
        self.ndld.as_deref()
    }
}

/// Problems addressable by name.
#[derive(Clone, Debug, Default)]
pub struct ProblemRegistry {
    problems: BTreeMap<String, ProblemDescriptor>,
}

impl ProblemRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `ds` and `is`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(ProblemDescriptor::dominating_set());
        r.register(ProblemDescriptor::independent_set());
        r
    }

    /// Registers under `desc.name`, replacing any previous entry.
    pub fn register(&mut self, desc: ProblemDescriptor) {
        self.problems.insert(desc.name.clone(), desc);
    }

    pub fn get(&self, name: &str) -> Option<&ProblemDescriptor> {
        self.problems.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.problems.keys().map(String::as_str)
    }
}
