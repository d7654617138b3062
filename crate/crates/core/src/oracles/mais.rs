//! Maximum acyclic induced subgraph, as `n` minus a minimum feedback vertex set.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::{Digraph, VertexId};

use super::OracleError;

/// Largest `n` accepted by the branch-and-bound solver by default.
pub const DEFAULT_MAIS_BOUND: usize = 20;
/// Largest `n` accepted by the exhaustive subset oracle.
pub const EXHAUSTIVE_MAIS_BOUND: usize = 12;

/// Order of a maximum acyclic induced subgraph (branch and bound).
pub fn mais(g: &Digraph) -> Result<usize, OracleError> {
    mais_bounded(g, DEFAULT_MAIS_BOUND)
}

pub fn mais_bounded(g: &Digraph, bound: usize) -> Result<usize, OracleError> {
    Ok(g.n() - min_feedback_vertex_set(g, bound)?.len())
}

/// A minimum feedback vertex set, smallest-lexicographic among those the
/// search visits first.
pub fn min_feedback_vertex_set(
    g: &Digraph,
    bound: usize,
) -> Result<BTreeSet<VertexId>, OracleError> {
    let n = g.n();
    if n > bound || n > 64 {
        return Err(OracleError::TooLarge {
            n,
            bound: bound.min(64),
        });
    }
    let mut solver = Fvs {
        out: g.out_masks(),
        best: full(n),
        best_len: n,
    };
    solver.branch(full(n), 0, 0);
    Ok(bits(solver.best).map(|v| v + 1).collect())
}

/// Exhaustive oracle: scans every vertex subset. Independent of the
/// branch-and-bound path.
pub fn mais_exhaustive(g: &Digraph) -> Result<usize, OracleError> {
    let n = g.n();
    if n > EXHAUSTIVE_MAIS_BOUND {
        return Err(OracleError::TooLarge {
            n,
            bound: EXHAUSTIVE_MAIS_BOUND,
        });
    }
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let s: BTreeSet<VertexId> = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| i + 1)
            .collect();
        let (sub, _) = g
            .induced_subdigraph(&s)
            .expect("subset of the vertex range");
        if sub.is_acyclic() {
            best = size;
        }
    }
    Ok(best)
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

struct Fvs {
    out: Vec<u64>,
    best: u64,
    best_len: usize,
}

impl Fvs {
    /// `alive`: vertices still present; `removed`: chosen so far;
    /// `fixed`: alive vertices the current branch may not remove.
    fn branch(&mut self, alive: u64, removed: u64, fixed: u64) {
        let alive = self.prune(alive);
        let used = removed.count_ones() as usize;
        if used >= self.best_len {
            return;
        }
        let Some(cycle) = self.shortest_cycle(alive, fixed) else {
            // Acyclic, or every remaining cycle is fixed (infeasible).
            if self.shortest_cycle(alive, 0).is_none() {
                self.best = removed;
                self.best_len = used;
            }
            return;
        };
        if used + self.packing_bound(alive) >= self.best_len {
            return;
        }
        let mut keep = fixed;
        for &v in &cycle {
            if fixed >> v & 1 == 1 {
                continue;
            }
            self.branch(alive & !(1 << v), removed | 1 << v, keep & !(1 << v));
            keep |= 1 << v;
        }
    }

    /// Drops vertices that cannot lie on a cycle (no in- or out-arc inside `alive`).
    fn prune(&self, mut alive: u64) -> u64 {
        loop {
            let mut next = alive;
            let mut has_in = 0u64;
            for v in bits(alive) {
                has_in |= self.out[v] & alive;
            }
            for v in bits(alive) {
                if self.out[v] & alive == 0 || has_in >> v & 1 == 0 {
                    next &= !(1 << v);
                }
            }
            if next == alive {
                return alive;
            }
            alive = next;
        }
    }

    /// Shortest cycle in `alive` that has a removable (non-fixed) vertex.
    /// Any cycle made only of fixed vertices makes the branch infeasible, so
    /// those are reported as `None` when `fixed` is nonzero and the caller
    /// re-checks.
    fn shortest_cycle(&self, alive: u64, fixed: u64) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        if fixed != 0 && self.cycle_within(alive & fixed) {
            return None;
        }
        for s in bits(alive) {
            if let Some(c) = self.shortest_cycle_through(s, alive) {
                if best.as_ref().is_none_or(|b| c.len() < b.len()) {
                    best = Some(c);
                }
            }
        }
        best
    }

    fn cycle_within(&self, set: u64) -> bool {
        let alive = self.prune(set);
        alive != 0
    }

    /// BFS from `s` back to `s`.
    fn shortest_cycle_through(&self, s: usize, alive: u64) -> Option<Vec<usize>> {
        let mut parent = [usize::MAX; 64];
        let mut seen = 1u64 << s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for w in bits(self.out[u] & alive) {
                if w == s {
                    let mut cycle = vec![u];
                    let mut x = u;
                    while x != s {
                        x = parent[x];
                        cycle.push(x);
                    }
                    cycle.reverse();
                    return Some(cycle);
                }
                if seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Size of a greedy packing of vertex-disjoint cycles: each needs its own
    /// removed vertex.
    fn packing_bound(&self, mut alive: u64) -> usize {
        let mut count = 0;
        loop {
            alive = self.prune(alive);
            let mut shortest: Option<Vec<usize>> = None;
            for s in bits(alive) {
                if let Some(c) = self.shortest_cycle_through(s, alive) {
                    if shortest.as_ref().is_none_or(|b| c.len() < b.len()) {
                        shortest = Some(c);
                    }
                }
            }
            match shortest {
                None => return count,
                Some(c) => {
                    count += 1;
                    for v in c {
                        alive &= !(1 << v);
                    }
                }
            }
        }
    }
}
