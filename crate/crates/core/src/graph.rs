//! Side-information digraphs.
//!
//! Vertex `u` is a receiver requesting message `x_u`; an arc `(u, v)` means
//! receiver `u` already holds `x_v`. All public ids are 1-indexed.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 1-indexed receiver / message id.
pub type VertexId = usize;

/// Default cap on the number of cycles produced by [`Digraph::enumerate_cycles`].
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("arc ({0}, {1}) is a self-arc")]
    SelfArc(VertexId, VertexId),
    #[error("arc ({u}, {v}) has an endpoint outside 1..={n}")]
    ArcOutOfRange { u: VertexId, v: VertexId, n: usize },
    #[error("vertex {id} is outside 1..={n}")]
    VertexOutOfRange { id: VertexId, n: usize },
    #[error("malformed digraph file: {0}")]
    Parse(String),
}

/// Directed side-information graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    out: Vec<BTreeSet<VertexId>>,
    inc: Vec<BTreeSet<VertexId>>,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n())
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl Digraph {
    /// Builds a digraph, collapsing duplicate arcs.
    pub fn new<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Digraph::empty(n);
        for (u, v) in arcs {
            g.insert_arc(u, v)?;
        }
        Ok(g)
    }

    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Digraph {
            out: vec![BTreeSet::new(); n],
            inc: vec![BTreeSet::new(); n],
        }
    }

    fn insert_arc(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let n = self.n();
        if u == 0 || v == 0 || u > n || v > n {
            return Err(GraphError::ArcOutOfRange { u, v, n });
        }
        if u == v {
            return Err(GraphError::SelfArc(u, v));
        }
        self.out[u - 1].insert(v);
        self.inc[v - 1].insert(u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(BTreeSet::len).sum()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&v| (i + 1, v)))
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        u >= 1 && u <= self.n() && self.out[u - 1].contains(&v)
    }

    fn check(&self, id: VertexId) -> Result<(), GraphError> {
        if id == 0 || id > self.n() {
            Err(GraphError::VertexOutOfRange { id, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// Messages held by receiver `i`, i.e. its out-neighbourhood.
    pub fn side_info(&self, i: VertexId) -> Result<&BTreeSet<VertexId>, GraphError> {
        self.check(i)?;
        Ok(&self.out[i - 1])
    }

    /// Out-neighbours of `v`. Panics on an out-of-range id.
    pub fn out_neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.out[v - 1]
    }

    /// In-neighbours of `v`. Panics on an out-of-range id.
    pub fn in_neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.inc[v - 1]
    }

    /// Copy of `self` without arc `(u, v)`.
    pub fn without_arc(&self, u: VertexId, v: VertexId) -> Digraph {
        let mut g = self.clone();
        if u >= 1 && u <= g.n() && g.out[u - 1].remove(&v) {
            g.inc[v - 1].remove(&u);
        }
        g
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let off = self.n();
        let arcs = self
            .arcs()
            .chain(other.arcs().map(|(u, v)| (u + off, v + off)));
        Digraph::new(off + other.n(), arcs).expect("shifted arcs stay in range")
    }

    /// Subdigraph induced on `vertices`. Vertex `mapping[i]` of `self`
    /// becomes vertex `i + 1` of the result; the mapping is sorted.
    pub fn induced_subdigraph(
        &self,
        vertices: &BTreeSet<VertexId>,
    ) -> Result<(Digraph, Vec<VertexId>), GraphError> {
        for &v in vertices {
            self.check(v)?;
        }
        let mapping: Vec<VertexId> = vertices.iter().copied().collect();
        let mut local = vec![0usize; self.n() + 1];
        for (i, &v) in mapping.iter().enumerate() {
            local[v] = i + 1;
        }
        let mut g = Digraph::empty(mapping.len());
        for &u in &mapping {
            for &v in &self.out[u - 1] {
                if local[v] != 0 {
                    g.insert_arc(local[u], local[v])?;
                }
            }
        }
        Ok((g, mapping))
    }

    /// Kahn's algorithm.
    pub fn is_acyclic(&self) -> bool {
        let n = self.n();
        let mut indeg: Vec<usize> = self.inc.iter().map(BTreeSet::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(u) = queue.pop_front() {
            seen += 1;
            for &v in &self.out[u] {
                indeg[v - 1] -= 1;
                if indeg[v - 1] == 0 {
                    queue.push_back(v - 1);
                }
            }
        }
        seen == n
    }

    /// Out-neighbourhoods as 0-indexed bitmasks. Requires `n <= 64`.
    pub(crate) fn out_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "bitmask view needs n <= 64");
        self.out
            .iter()
            .map(|s| s.iter().fold(0u64, |m, &v| m | 1 << (v - 1)))
            .collect()
    }

    /// Every elementary cycle, via Johnson's circuit algorithm.
    ///
    /// Cycles are grouped by their smallest vertex (listed first) in ascending
    /// order; within a group the order follows sorted adjacency. At most
    /// `max_count` cycles are returned.
    pub fn enumerate_cycles(&self, max_count: usize) -> CycleEnumeration {
        Johnson::new(self, max_count).run()
    }

    /// Canonical one-line JSON: `{"n":N,"arcs":[[u,v],...]}`.
    pub fn to_json(&self) -> String {
        let file = DigraphFile {
            n: self.n(),
            arcs: self.arcs().map(|(u, v)| [u, v]).collect(),
        };
        serde_json::to_string(&file).expect("digraph serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: DigraphFile =
            serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        Digraph::new(file.n, file.arcs.into_iter().map(|[u, v]| (u, v)))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DigraphFile {
    n: usize,
    arcs: Vec<[usize; 2]>,
}

/// An elementary cycle `v_1 -> v_2 -> ... -> v_L -> v_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle(Vec<VertexId>);

impl Cycle {
    /// Checks distinctness, length >= 2 and that every closing arc is in `g`.
    pub fn new(g: &Digraph, vertices: Vec<VertexId>) -> Option<Cycle> {
        let c = Cycle(vertices);
        c.is_valid_in(g).then_some(c)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn is_valid_in(&self, g: &Digraph) -> bool {
        let l = self.0.len();
        if l < 2 {
            return false;
        }
        let distinct: BTreeSet<_> = self.0.iter().collect();
        distinct.len() == l && (0..l).all(|a| g.has_arc(self.0[a], self.0[(a + 1) % l]))
    }
}

#[derive(Debug, Clone, Default)]
pub struct CycleEnumeration {
    pub cycles: Vec<Cycle>,
    pub truncated: bool,
}

struct Johnson<'a> {
    g: &'a Digraph,
    cap: usize,
    blocked: Vec<bool>,
    b: Vec<BTreeSet<usize>>,
    stack: Vec<usize>,
    allowed: Vec<bool>,
    out: CycleEnumeration,
}

impl<'a> Johnson<'a> {
    fn new(g: &'a Digraph, cap: usize) -> Self {
        let n = g.n();
        Johnson {
            g,
            cap,
            blocked: vec![false; n + 1],
            b: vec![BTreeSet::new(); n + 1],
            stack: Vec::new(),
            allowed: vec![false; n + 1],
            out: CycleEnumeration::default(),
        }
    }

    fn run(mut self) -> CycleEnumeration {
        let n = self.g.n();
        for s in 1..=n {
            if self.out.truncated {
                break;
            }
            // Restrict to the strong component of s within vertices >= s.
            let scc = strong_component(self.g, s, |v| v >= s);
            if scc.len() < 2 {
                continue;
            }
            for v in 1..=n {
                self.allowed[v] = false;
            }
            for &v in &scc {
                self.allowed[v] = true;
                self.blocked[v] = false;
                self.b[v].clear();
            }
            self.circuit(s, s);
        }
        self.out
    }

    fn circuit(&mut self, v: usize, s: usize) -> bool {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        let succ: Vec<usize> = self.g.out_neighbors(v).iter().copied().collect();
        for &w in &succ {
            if self.out.truncated {
                break;
            }
            if !self.allowed[w] {
                continue;
            }
            if w == s {
                if self.out.cycles.len() >= self.cap {
                    self.out.truncated = true;
                    break;
                }
                self.out.cycles.push(Cycle(self.stack.clone()));
                found = true;
            } else if !self.blocked[w] && self.circuit(w, s) {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in &succ {
                if self.allowed[w] {
                    self.b[w].insert(v);
                }
            }
        }
        self.stack.pop();
        found
    }

    fn unblock(&mut self, u: usize) {
        let mut work = vec![u];
        while let Some(x) = work.pop() {
            if !self.blocked[x] {
                continue;
            }
            self.blocked[x] = false;
            let waiting = std::mem::take(&mut self.b[x]);
            work.extend(waiting.into_iter().filter(|&w| self.blocked[w]));
        }
    }
}

/// Vertices that are mutually reachable with `s` inside the vertex filter.
fn strong_component(g: &Digraph, s: VertexId, keep: impl Fn(VertexId) -> bool) -> Vec<VertexId> {
    let reach = |forward: bool| {
        let mut seen = vec![false; g.n() + 1];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let nbrs = if forward {
                g.out_neighbors(u)
            } else {
                g.in_neighbors(u)
            };
            for &w in nbrs {
                if keep(w) && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    };
    let fwd = reach(true);
    let bwd = reach(false);
    (1..=g.n()).filter(|&v| fwd[v] && bwd[v]).collect()
}
