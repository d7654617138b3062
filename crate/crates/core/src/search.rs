//! Finding vertex-disjoint ICC subgraphs of an arbitrary digraph.
//!
//! Exact mode runs a dynamic program over vertex subsets: `best[S]` is the
//! largest total saving `sum(k_i - 1)` achievable with pieces inside `S`.
//! For a candidate piece vertex set `T`, a backtracking embedder looks for
//! the largest `k` such that a k-ICC uses exactly the vertices of `T`. Since
//! adding arcs never raises the MAIS, `k - 1` is at most the minimum feedback
//! vertex set of `D[T]`, which bounds both the embedder and the DP.
//!
//! Greedy mode packs shortest cycles as 2-ICC pieces, then repeatedly tries
//! to merge two pieces, or grow one with a few uncovered vertices, into a
//! piece of larger `k`.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{Cycle, Digraph, VertexId};
use crate::schemes::{CoverPlan, Piece};
use crate::template::{cycle_to_template, IccTemplate, Labeling};

/// Default largest `n` for exact searches.
pub const DEFAULT_EXACT_BOUND: usize = 12;
/// Exact subset searches never go beyond this many vertices.
pub const MAX_EXACT_VERTICES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest `n` for which exact mode runs.
    pub exact_bound: usize,
    /// Largest vertex set the greedy merge step hands to the embedder.
    pub merge_bound: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            exact_bound: DEFAULT_EXACT_BOUND,
            merge_bound: DEFAULT_EXACT_BOUND,
        }
    }
}

impl SearchLimits {
    pub fn with_exact_bound(exact_bound: usize) -> Self {
        SearchLimits {
            exact_bound,
            ..Default::default()
        }
    }

    pub(crate) fn admits_exact(&self, n: usize) -> Result<(), SearchError> {
        let bound = self.exact_bound.min(MAX_EXACT_VERTICES);
        if n > bound {
            Err(SearchError::TooLarge { n, bound })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("exact search refused: n = {n} exceeds bound {bound}; use greedy mode")]
    TooLarge { n: usize, bound: usize },
}

/// Vertex-disjoint ICC subgraphs of `g` maximizing (exact) or heuristically
/// increasing (greedy) the total saving.
pub fn find_icc_subgraphs(
    g: &Digraph,
    mode: SearchMode,
    limits: &SearchLimits,
) -> Result<CoverPlan, SearchError> {
    match mode {
        SearchMode::Exact => exact_cover(g, limits),
        SearchMode::Greedy => Ok(greedy_cover(g, limits)),
    }
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

/// Bitmask view of a small digraph, 0-indexed.
pub(crate) struct Local {
    pub out: Vec<u64>,
    pub inc: Vec<u64>,
}

impl Local {
    pub fn new(g: &Digraph) -> Self {
        let out = g.out_masks();
        let mut inc = vec![0u64; g.n()];
        for (u, &m) in out.iter().enumerate() {
            for v in bits(m) {
                inc[v] |= 1 << u;
            }
        }
        Local { out, inc }
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn strongly_connected(&self, set: u64) -> bool {
        if set == 0 {
            return false;
        }
        let s = set.trailing_zeros() as usize;
        let reach = |adj: &[u64]| {
            let mut seen = 1u64 << s;
            let mut frontier = seen;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= adj[v] & set;
                }
                frontier = next & !seen;
                seen |= next;
            }
            seen
        };
        reach(&self.out) == set && reach(&self.inc) == set
    }

    /// `mais[S]` for every subset `S` of the vertex set.
    pub fn subset_mais(&self) -> Vec<u8> {
        let n = self.n();
        let size = 1usize << n;
        let mut acyclic = vec![false; size];
        let mut mais = vec![0u8; size];
        acyclic[0] = true;
        for s in 1..size {
            let set = s as u64;
            // A digraph is acyclic iff it has a sink whose removal leaves it acyclic.
            acyclic[s] = bits(set)
                .find(|&v| self.out[v] & set == 0)
                .is_some_and(|v| acyclic[s & !(1 << v)]);
            mais[s] = if acyclic[s] {
                set.count_ones() as u8
            } else {
                bits(set).map(|v| mais[s & !(1 << v)]).max().unwrap_or(0)
            };
        }
        mais
    }
}

/// A k-ICC found on a local bitmask graph: ids follow `template.coords()`.
#[derive(Debug, Clone)]
pub(crate) struct Embedding {
    pub template: IccTemplate,
    pub ids: Vec<usize>,
}

impl Embedding {
    fn into_piece(self, to_host: impl Fn(usize) -> VertexId) -> Piece {
        let ids: Vec<VertexId> = self.ids.iter().map(|&v| to_host(v)).collect();
        let labeling =
            Labeling::from_ordered(&self.template, &ids).expect("embedding ids are distinct");
        Piece {
            template: self.template,
            labeling,
        }
    }
}

/// Largest `k` in `lo..=hi` for which a k-ICC uses exactly the vertices of `set`.
pub(crate) fn embed_max_k(g: &Local, set: u64, lo: usize, hi: usize) -> Option<Embedding> {
    let size = set.count_ones() as usize;
    let lo = lo.max(2);
    let hi = hi.min(size);
    if lo > hi || !g.strongly_connected(set) {
        return None;
    }
    (lo..=hi).rev().find_map(|k| embed_exact(g, set, k))
}

/// A k-ICC (k >= 2) whose vertex set is exactly `set`, if any.
pub(crate) fn embed_exact(g: &Local, set: u64, k: usize) -> Option<Embedding> {
    let candidates: Vec<usize> = bits(set)
        .filter(|&v| (g.out[v] & set).count_ones() as usize >= k - 1)
        .collect();
    if k < 2 || candidates.len() < k {
        return None;
    }
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut last_into = vec![0usize; k];
    for (p, &(_, j)) in pairs.iter().enumerate() {
        last_into[j] = p;
    }
    let mut b = Builder {
        g,
        set,
        k,
        terms: Vec::with_capacity(k),
        paths: Vec::new(),
        used: 0,
        pairs,
        last_into,
        links: Vec::new(),
        reached_initial: vec![0; k],
    };
    b.choose_terminals(&candidates, 0)
}

struct Builder<'a> {
    g: &'a Local,
    set: u64,
    k: usize,
    terms: Vec<usize>,
    /// Type-I paths, initial vertex first.
    paths: Vec<Vec<usize>>,
    used: u64,
    pairs: Vec<(usize, usize)>,
    /// Index in `pairs` of the last connection landing on each path.
    last_into: Vec<usize>,
    /// Type-II vertices and 0-based landing position, per processed pair.
    links: Vec<(Vec<usize>, usize)>,
    /// Connections landing on position 0 of each path.
    reached_initial: Vec<usize>,
}

impl Builder<'_> {
    fn choose_terminals(&mut self, candidates: &[usize], from: usize) -> Option<Embedding> {
        if self.terms.len() == self.k {
            self.used = self.terms.iter().fold(0, |m, &t| m | 1 << t);
            self.paths = self.terms.iter().map(|&t| vec![t]).collect();
            return self.grow_type_i(0);
        }
        let need = self.k - self.terms.len();
        for idx in from..candidates.len() {
            if candidates.len() - idx < need {
                break;
            }
            self.terms.push(candidates[idx]);
            let found = self.choose_terminals(candidates, idx + 1);
            self.terms.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn terminal_mask(&self) -> u64 {
        self.terms.iter().fold(0, |m, &t| m | 1 << t)
    }

    /// Extends Type-I path `i` backwards from its current initial vertex.
    fn grow_type_i(&mut self, i: usize) -> Option<Embedding> {
        if i == self.k {
            return self.connect(0);
        }
        if let Some(e) = self.grow_type_i(i + 1) {
            return Some(e);
        }
        let head = self.paths[i][0];
        let choices = self.g.inc[head] & self.set & !self.used & !self.terminal_mask();
        for u in bits(choices) {
            self.paths[i].insert(0, u);
            self.used |= 1 << u;
            let found = self.grow_type_i(i);
            self.used &= !(1 << u);
            self.paths[i].remove(0);
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Every unplaced vertex must still be able to sit on some Type-II path.
    fn remaining_placeable(&self, p: usize) -> bool {
        let rest = self.set & !self.used;
        if rest == 0 {
            return true;
        }
        if p == self.pairs.len() {
            return false;
        }
        let sources = self.pairs[p..]
            .iter()
            .fold(0u64, |m, &(i, _)| m | 1 << self.terms[i]);
        let type_i = self.paths.iter().flatten().fold(0u64, |m, &v| m | 1 << v);
        bits(rest)
            .all(|r| self.g.inc[r] & (rest | sources) != 0 && self.g.out[r] & (rest | type_i) != 0)
    }

    /// Chooses the connection for pair `p` and recurses.
    fn connect(&mut self, p: usize) -> Option<Embedding> {
        if p == self.pairs.len() {
            return (self.used == self.set).then(|| self.finish());
        }
        if !self.remaining_placeable(p) {
            return None;
        }
        let (i, _) = self.pairs[p];
        let mut walk = Vec::new();
        self.walk(p, self.terms[i], &mut walk)
    }

    /// Tries landing from `from` (the terminal of `P_i` or the tip of the
    /// partial Type-II path in `walk`), then extending the walk.
    ///
    /// The landing position only matters for the initial-vertex condition,
    /// so position 1 is taken when available and otherwise the first
    /// reachable position stands for all of them.
    fn walk(&mut self, p: usize, from: usize, walk: &mut Vec<usize>) -> Option<Embedding> {
        let (_, j) = self.pairs[p];
        let landing =
            (0..self.paths[j].len()).find(|&q| self.g.out[from] >> self.paths[j][q] & 1 == 1);
        if let Some(q) = landing {
            if q == 0 {
                self.reached_initial[j] += 1;
            }
            let ok =
                p != self.last_into[j] || self.reached_initial[j] > 0 || self.paths[j].len() == 1;
            let mut found = None;
            if ok {
                self.links.push((walk.clone(), q));
                found = self.connect(p + 1);
                self.links.pop();
            }
            if q == 0 {
                self.reached_initial[j] -= 1;
            }
            if found.is_some() {
                return found;
            }
        }
        for u in bits(self.g.out[from] & self.set & !self.used) {
            walk.push(u);
            self.used |= 1 << u;
            let found = self.walk(p, u, walk);
            self.used &= !(1 << u);
            walk.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn finish(&self) -> Embedding {
        let k = self.k;
        let mut template =
            IccTemplate::with_direct_links(self.paths.iter().map(Vec::len).collect());
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            let (ref mid, q) = self.links[p];
            if !mid.is_empty() {
                template.type_ii.insert((i + 1, j + 1), mid.len());
            }
            template.attach.insert((i + 1, j + 1), q + 1);
        }
        let mut ids: Vec<usize> = self.terms.clone();
        for path in &self.paths {
            ids.extend(&path[..path.len() - 1]);
        }
        for (mid, _) in &self.links {
            ids.extend(mid);
        }
        debug_assert_eq!(template.k, k);
        debug_assert!(template.violations().is_empty(), "{template:?}");
        Embedding { template, ids }
    }
}

/// Embedding search state for one exact vertex set, searched top-down in k.
#[derive(Debug, Clone, Default)]
struct PieceMemo {
    /// Smallest k already ruled out (0 when nothing was searched).
    floor: usize,
    found: Option<Embedding>,
}

impl PieceMemo {
    /// The largest-k embedding with `k >= need`, if any.
    fn query(&mut self, g: &Local, set: u64, need: usize, top: usize) -> Option<&Embedding> {
        if self.found.is_none() {
            let from = if self.floor == 0 { top } else { self.floor - 1 };
            let need = need.max(2);
            if from >= need {
                self.found = embed_max_k(g, set, need, from);
                self.floor = need;
            }
        }
        self.found.as_ref().filter(|e| e.template.k >= need)
    }
}

fn exact_cover(g: &Digraph, limits: &SearchLimits) -> Result<CoverPlan, SearchError> {
    let n = g.n();
    limits.admits_exact(n)?;
    let local = Local::new(g);
    let mais = local.subset_mais();
    let size = 1usize << n;
    let fvs = |s: usize| (s as u64).count_ones() as usize - mais[s] as usize;

    let mut piece: Vec<PieceMemo> = vec![PieceMemo::default(); size];
    let mut best = vec![0usize; size];
    let mut choice = vec![0usize; size];
    for s in 1..size {
        let low = s & s.wrapping_neg();
        let rest = s & !low;
        best[s] = best[rest];
        choice[s] = 0;
        if fvs(s) == 0 {
            continue;
        }
        // Subsets T of s that contain the lowest vertex.
        let mut sub = rest;
        loop {
            let t = sub | low;
            let others = s & !t;
            let ub = fvs(t);
            if t != low && ub > 0 && ub + best[others] > best[s] {
                // Only a piece with k - 1 > best[s] - best[others] helps.
                let need = best[s] - best[others] + 2;
                if let Some(e) = piece[t].query(&local, t as u64, need, ub + 1) {
                    let val = e.template.k - 1 + best[others];
                    if val > best[s] {
                        best[s] = val;
                        choice[s] = t;
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    let mut pieces = Vec::new();
    let mut s = size - 1;
    while s != 0 {
        let t = choice[s];
        if t == 0 {
            s &= s - 1;
        } else {
            let e = piece[t].found.clone().expect("chosen piece was embedded");
            pieces.push(e.into_piece(|v| v + 1));
            s &= !t;
        }
    }
    Ok(CoverPlan::from_pieces(n, pieces))
}

/// Shortest cycle through vertices of `alive` (BFS from every vertex),
/// rotated so its smallest vertex comes first. Ties go to the smaller start.
pub(crate) fn shortest_cycle(g: &Digraph, alive: &BTreeSet<VertexId>) -> Option<Vec<VertexId>> {
    let mut best: Option<Vec<VertexId>> = None;
    for &s in alive {
        let mut parent = vec![0usize; g.n() + 1];
        let mut seen = BTreeSet::from([s]);
        let mut queue = VecDeque::from([s]);
        let mut found = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for &w in g.out_neighbors(u) {
                if !alive.contains(&w) {
                    continue;
                }
                if w == s {
                    found = Some(u);
                    break 'bfs;
                }
                if seen.insert(w) {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if let Some(end) = found {
            let mut cycle = vec![end];
            let mut x = end;
            while x != s {
                x = parent[x];
                cycle.push(x);
            }
            cycle.reverse();
            if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                best = Some(cycle);
            }
        }
    }
    best.map(|mut c| {
        let pos = c
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap();
        c.rotate_left(pos);
        c
    })
}

/// Vertex-disjoint shortest cycles, chosen one at a time.
pub(crate) fn greedy_cycles(g: &Digraph) -> Vec<Cycle> {
    let mut alive: BTreeSet<VertexId> = (1..=g.n()).collect();
    let mut out = Vec::new();
    while let Some(c) = shortest_cycle(g, &alive) {
        for v in &c {
            alive.remove(v);
        }
        out.push(Cycle::new(g, c).expect("BFS cycle is elementary"));
    }
    out
}

fn greedy_cover(g: &Digraph, limits: &SearchLimits) -> CoverPlan {
    let mut pieces: Vec<Piece> = greedy_cycles(g)
        .iter()
        .map(|c| {
            let (template, labeling) = cycle_to_template(c, 1).expect("cycles have length >= 2");
            Piece { template, labeling }
        })
        .collect();
    let bound = limits.merge_bound.min(MAX_EXACT_VERTICES);

    // Embeds a piece with at least `min_k` Type-I paths on exactly `vertices`.
    let try_embed = |vertices: &BTreeSet<VertexId>, min_k: usize| -> Option<Piece> {
        if vertices.len() > bound {
            return None;
        }
        let (sub, mapping) = g
            .induced_subdigraph(vertices)
            .expect("vertices are in range");
        let local = Local::new(&sub);
        let all = (1u64 << sub.n()) - 1;
        let mais = *local.subset_mais().last().unwrap() as usize;
        let hi = sub.n() - mais + 1;
        embed_max_k(&local, all, min_k, hi).map(|e| e.into_piece(|v| mapping[v]))
    };

    loop {
        let covered: BTreeSet<VertexId> =
            pieces.iter().flat_map(|p| p.labeling.vertices()).collect();
        let uncovered: Vec<VertexId> = (1..=g.n()).filter(|v| !covered.contains(v)).collect();
        let mut improved = false;

        'merge: for a in 0..pieces.len() {
            for b in a + 1..pieces.len() {
                let union: BTreeSet<_> = pieces[a]
                    .labeling
                    .vertices()
                    .union(&pieces[b].labeling.vertices())
                    .copied()
                    .collect();
                let want = pieces[a].template.k + pieces[b].template.k;
                if let Some(p) = try_embed(&union, want) {
                    pieces[a] = p;
                    pieces.remove(b);
                    improved = true;
                    break 'merge;
                }
            }
        }
        if improved {
            continue;
        }

        'grow: for piece in pieces.iter_mut() {
            let own = piece.labeling.vertices();
            let near: Vec<VertexId> = uncovered
                .iter()
                .copied()
                .filter(|&u| own.iter().any(|&v| g.has_arc(u, v) || g.has_arc(v, u)))
                .collect();
            let want = piece.template.k + 1;
            let mut extras: Vec<Vec<VertexId>> = near.iter().map(|&u| vec![u]).collect();
            for (x, &u) in near.iter().enumerate() {
                extras.extend(near[x + 1..].iter().map(|&w| vec![u, w]));
            }
            for extra in extras {
                let mut set = own.clone();
                set.extend(extra);
                if let Some(p) = try_embed(&set, want) {
                    *piece = p;
                    improved = true;
                    break 'grow;
                }
            }
        }
        if !improved {
            break;
        }
    }
    CoverPlan::from_pieces(g.n(), pieces)
}
