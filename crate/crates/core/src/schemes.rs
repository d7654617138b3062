//! Whole-digraph covering schemes and code assembly.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{self, CodecError, CodedSymbol, IndexCode, SymbolKind};
use crate::graph::{Cycle, Digraph, VertexId};
use crate::oracles::{self, DEFAULT_MAIS_BOUND};
use crate::packet::PacketVector;
use crate::search::{self, bits, greedy_cycles, Local, SearchError, SearchLimits, SearchMode};
use crate::template::{clique_to_template, cycle_to_template, IccTemplate, Labeling};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("piece {0} does not embed in the digraph")]
    Embedding(usize),
    #[error("plan pieces and uncovered vertices do not partition 1..={0}")]
    NotAPartition(usize),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// One coded subgraph of a cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub template: IccTemplate,
    pub labeling: Labeling,
}

impl Piece {
    pub fn saving(&self) -> usize {
        self.template.k - 1
    }
}

/// Vertex-disjoint coded pieces plus the vertices sent uncoded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPlan {
    pub n: usize,
    pub pieces: Vec<Piece>,
    pub uncovered: BTreeSet<VertexId>,
}

impl CoverPlan {
    /// Pieces are ordered by their smallest vertex; everything else is uncovered.
    pub fn from_pieces(n: usize, mut pieces: Vec<Piece>) -> Self {
        pieces.sort_by_key(|p| p.labeling.vertices().into_iter().next());
        let covered: BTreeSet<VertexId> =
            pieces.iter().flat_map(|p| p.labeling.vertices()).collect();
        let uncovered = (1..=n).filter(|v| !covered.contains(v)).collect();
        CoverPlan {
            n,
            pieces,
            uncovered,
        }
    }

    pub fn savings(&self) -> usize {
        self.pieces.iter().map(Piece::saving).sum()
    }

    pub fn code_length(&self) -> usize {
        self.n - self.savings()
    }

    /// Pieces and the uncovered set partition `1..=n`.
    pub fn is_partition(&self) -> bool {
        let mut seen = BTreeSet::new();
        let sets = self
            .pieces
            .iter()
            .map(|p| p.labeling.vertices())
            .chain([self.uncovered.clone()]);
        for s in sets {
            for v in s {
                if v == 0 || v > self.n || !seen.insert(v) {
                    return false;
                }
            }
        }
        seen.len() == self.n
    }
}

/// Lengths of the three schemes on one digraph, plus MAIS when computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeReport {
    pub n: usize,
    pub l_cyc: Option<usize>,
    pub l_cc: Option<usize>,
    pub l_icc: usize,
    pub mais: Option<usize>,
    pub optimal: bool,
}

impl SchemeReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }
}

/// Disjoint cycles, each coded as a 2-ICC. Length `n - |C|`.
pub fn cycle_cover(
    g: &Digraph,
    mode: SearchMode,
    limits: &SearchLimits,
) -> Result<CoverPlan, SchemeError> {
    let cycles = match mode {
        SearchMode::Greedy => greedy_cycles(g),
        SearchMode::Exact => exact_cycle_packing(g, limits)?,
    };
    let pieces = cycles
        .iter()
        .map(|c| {
            let (template, labeling) = cycle_to_template(c, 1).expect("cycles have length >= 2");
            Piece { template, labeling }
        })
        .collect();
    Ok(CoverPlan::from_pieces(g.n(), pieces))
}

/// Partition into cliques, each coded as one XOR. Length `n - sum(n_r - 1)`.
pub fn clique_cover(
    g: &Digraph,
    mode: SearchMode,
    limits: &SearchLimits,
) -> Result<CoverPlan, SchemeError> {
    let cliques = match mode {
        SearchMode::Greedy => greedy_cliques(g),
        SearchMode::Exact => exact_clique_partition(g, limits)?,
    };
    let pieces = cliques
        .iter()
        .filter(|k| k.len() >= 2)
        .map(|k| {
            let (template, labeling) = clique_to_template(g, k).expect("search returns cliques");
            Piece { template, labeling }
        })
        .collect();
    Ok(CoverPlan::from_pieces(g.n(), pieces))
}

/// Disjoint ICC subgraphs. Length `n - sum(k_i - 1)`.
pub fn icc_cover(
    g: &Digraph,
    mode: SearchMode,
    limits: &SearchLimits,
) -> Result<CoverPlan, SchemeError> {
    Ok(search::find_icc_subgraphs(g, mode, limits)?)
}

/// Concatenates the piece codes, then one uncoded symbol per uncovered
/// vertex in ascending order. Payloads are filled when `x` is given.
pub fn assemble_code(
    g: &Digraph,
    plan: &CoverPlan,
    x: Option<&PacketVector>,
) -> Result<IndexCode, SchemeError> {
    if plan.n != g.n() || !plan.is_partition() {
        return Err(SchemeError::NotAPartition(g.n()));
    }
    let mut symbols = Vec::new();
    for (idx, piece) in plan.pieces.iter().enumerate() {
        if !piece.template.check_embedding(g, &piece.labeling) {
            return Err(SchemeError::Embedding(idx));
        }
        let code = match x {
            Some(x) => codec::encode(&piece.template, &piece.labeling, x)?,
            None => codec::encode_supports(&piece.template, &piece.labeling)?,
        };
        symbols.extend(code.symbols);
    }
    for &v in &plan.uncovered {
        let payload = match x {
            Some(x) if v > x.len() => return Err(CodecError::MissingPacket(v).into()),
            Some(x) => Some(x.get(v).to_vec()),
            None => None,
        };
        symbols.push(CodedSymbol {
            support: BTreeSet::from([v]),
            payload,
            kind: SymbolKind::Uncoded,
        });
    }
    Ok(IndexCode { symbols })
}

/// The classical cycle code: `x_a + x_{a+1}` for consecutive cycle vertices,
/// dropping the closing pair.
pub fn cycle_chain_code(c: &Cycle) -> IndexCode {
    let vs = c.vertices();
    let symbols = vs
        .windows(2)
        .map(|w| CodedSymbol {
            support: BTreeSet::from([w[0], w[1]]),
            payload: None,
            kind: SymbolKind::Listed,
        })
        .collect();
    IndexCode { symbols }
}

/// Runs every scheme (exact when `n` is within the limits, greedy
/// otherwise) and MAIS when `n` is within its bound. `optimal` is only set
/// when MAIS was computed and matches the ICC length.
pub fn compare(g: &Digraph, limits: &SearchLimits) -> Result<SchemeReport, SchemeError> {
    let mode = if limits.admits_exact(g.n()).is_ok() {
        SearchMode::Exact
    } else {
        SearchMode::Greedy
    };
    let l_cyc = cycle_cover(g, mode, limits)?.code_length();
    let l_cc = clique_cover(g, mode, limits)?.code_length();
    let l_icc = icc_cover(g, mode, limits)?.code_length();
    let mais = oracles::mais_bounded(g, DEFAULT_MAIS_BOUND).ok();
    Ok(SchemeReport {
        n: g.n(),
        l_cyc: Some(l_cyc),
        l_cc: Some(l_cc),
        l_icc,
        mais,
        optimal: mais == Some(l_icc),
    })
}

/// `2k` vertices: `v_{k+i}` holds `x_i`, and `v_i` holds every `x_{k+j}`
/// with `j != i`.
pub fn gap_family(k: usize) -> Digraph {
    assert!(k >= 1, "k must be at least 1");
    let arcs = (1..=k)
        .map(|i| (k + i, i))
        .chain((1..=k).flat_map(|i| (1..=k).filter(move |&j| j != i).map(move |j| (i, k + j))));
    Digraph::new(2 * k, arcs).expect("family arcs are in range")
}

/// Maximum number of vertex-disjoint cycles via a subset DP over
/// Hamiltonian-cycle sets.
fn exact_cycle_packing(g: &Digraph, limits: &SearchLimits) -> Result<Vec<Cycle>, SchemeError> {
    let n = g.n();
    limits.admits_exact(n)?;
    let local = Local::new(g);
    let size = 1usize << n;
    // ends[S]: vertices v such that a path from min(S) through all of S ends at v.
    let mut ends = vec![0u64; size];
    for s in 0..n {
        ends[1 << s] = 1 << s;
    }
    for mask in 1..size {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        let low = mask.trailing_zeros() as usize;
        for v in bits(e) {
            for w in bits(local.out[v] & !(mask as u64)) {
                if w > low {
                    ends[mask | 1 << w] |= 1 << w;
                }
            }
        }
    }
    let closes = |mask: usize| -> bool {
        let low = mask.trailing_zeros() as usize;
        mask.count_ones() >= 2 && bits(ends[mask]).any(|v| local.out[v] >> low & 1 == 1)
    };
    let mut best = vec![0usize; size];
    let mut choice = vec![0usize; size];
    for s in 1..size {
        let low = s & s.wrapping_neg();
        let rest = s & !low;
        best[s] = best[rest];
        let mut sub = rest;
        while sub != 0 {
            let t = sub | low;
            if 1 + best[s & !t] > best[s] && closes(t) {
                best[s] = 1 + best[s & !t];
                choice[s] = t;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut cycles = Vec::new();
    let mut s = size - 1;
    while s != 0 {
        let t = choice[s];
        if t == 0 {
            s &= s - 1;
            continue;
        }
        // Walk the path DP backwards from a closing end vertex.
        let low = t.trailing_zeros() as usize;
        let mut v = bits(ends[t])
            .find(|&v| local.out[v] >> low & 1 == 1)
            .unwrap();
        let mut mask = t;
        let mut rev = vec![v];
        while mask != 1 << low {
            let prev = mask & !(1 << v);
            let u = bits(ends[prev])
                .find(|&u| local.out[u] >> v & 1 == 1)
                .unwrap();
            rev.push(u);
            mask = prev;
            v = u;
        }
        rev.reverse();
        let ids = rev.into_iter().map(|v| v + 1).collect();
        cycles.push(Cycle::new(g, ids).expect("DP reconstructs a cycle"));
        s &= !t;
    }
    Ok(cycles)
}

fn is_clique(local: &Local, set: u64) -> bool {
    bits(set).all(|v| local.out[v] & set == set & !(1 << v))
}

fn exact_clique_partition(
    g: &Digraph,
    limits: &SearchLimits,
) -> Result<Vec<BTreeSet<VertexId>>, SchemeError> {
    let n = g.n();
    limits.admits_exact(n)?;
    let local = Local::new(g);
    let size = 1usize << n;
    let mut best = vec![0usize; size];
    let mut choice = vec![0usize; size];
    for s in 1..size {
        let low = s & s.wrapping_neg();
        let rest = s & !low;
        best[s] = best[rest];
        let mut sub = rest;
        while sub != 0 {
            let t = sub | low;
            let gain = t.count_ones() as usize - 1;
            if gain + best[s & !t] > best[s] && is_clique(&local, t as u64) {
                best[s] = gain + best[s & !t];
                choice[s] = t;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut out = Vec::new();
    let mut s = size - 1;
    while s != 0 {
        let t = choice[s];
        if t == 0 {
            s &= s - 1;
        } else {
            out.push(bits(t as u64).map(|v| v + 1).collect());
            s &= !t;
        }
    }
    Ok(out)
}

/// Repeatedly takes the remaining vertex of highest bidirectional degree and
/// grows a maximal clique around it in the same degree order.
fn greedy_cliques(g: &Digraph) -> Vec<BTreeSet<VertexId>> {
    let mutual = |u: VertexId, v: VertexId| g.has_arc(u, v) && g.has_arc(v, u);
    let degree = |v: VertexId| g.out_neighbors(v).iter().filter(|&&u| mutual(v, u)).count();
    let mut order: Vec<VertexId> = (1..=g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(degree(v)), v));
    let mut left: BTreeSet<VertexId> = order.iter().copied().collect();
    let mut out = Vec::new();
    for &seed in &order {
        if !left.contains(&seed) {
            continue;
        }
        let mut clique = BTreeSet::from([seed]);
        for &v in &order {
            if left.contains(&v) && !clique.contains(&v) && clique.iter().all(|&u| mutual(u, v)) {
                clique.insert(v);
            }
        }
        for v in &clique {
            left.remove(v);
        }
        out.push(clique);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(l: usize) -> Digraph {
        Digraph::new(l, (1..=l).map(|a| (a, a % l + 1))).unwrap()
    }

    fn complete(l: usize) -> Digraph {
        Digraph::new(
            l,
            (1..=l).flat_map(|u| (1..=l).filter(move |&v| v != u).map(move |v| (u, v))),
        )
        .unwrap()
    }

    fn d1() -> Digraph {
        gap_family(3)
    }

    fn lengths(g: &Digraph, mode: SearchMode) -> (usize, usize, usize) {
        let lim = SearchLimits::default();
        (
            cycle_cover(g, mode, &lim).unwrap().code_length(),
            clique_cover(g, mode, &lim).unwrap().code_length(),
            icc_cover(g, mode, &lim).unwrap().code_length(),
        )
    }

    #[test]
    fn gap_family_shapes() {
        let expected = Digraph::new(
            6,
            [
                (4, 1),
                (5, 2),
                (6, 3),
                (1, 5),
                (1, 6),
                (2, 4),
                (2, 6),
                (3, 4),
                (3, 5),
            ],
        )
        .unwrap();
        assert_eq!(gap_family(3), expected);
        assert_eq!(gap_family(1).arcs().collect::<Vec<_>>(), vec![(2, 1)]);
    }

    #[test]
    fn d1_lengths() {
        assert_eq!(lengths(&d1(), SearchMode::Exact), (5, 6, 4));
        let r = compare(&d1(), &SearchLimits::default()).unwrap();
        assert_eq!(
            r.to_json(),
            r#"{"n":6,"l_cyc":5,"l_cc":6,"l_icc":4,"mais":4,"optimal":true}"#
        );
    }

    #[test]
    fn special_digraphs() {
        for l in 2..8 {
            let (cyc, cc, icc) = lengths(&ring(l), SearchMode::Exact);
            assert_eq!((cyc, icc), (l - 1, l - 1));
            assert!(cc >= icc);
            let (_, cc, icc) = lengths(&complete(l), SearchMode::Exact);
            assert_eq!((cc, icc), (1, 1));
        }
        let arcless = Digraph::empty(4);
        assert_eq!(lengths(&arcless, SearchMode::Exact), (4, 4, 4));
        assert_eq!(lengths(&arcless, SearchMode::Greedy), (4, 4, 4));
    }

    #[test]
    fn clique_plus_ring() {
        let g = complete(3).disjoint_union(&ring(4));
        let plan = icc_cover(&g, SearchMode::Exact, &SearchLimits::default()).unwrap();
        assert_eq!(plan.code_length(), 4);
        let code = assemble_code(&g, &plan, None).unwrap();
        assert_eq!(code.len(), 4);
        assert!(oracles::verify_code(&g, &code).unwrap().is_valid());
    }

    #[test]
    fn assembly_checks() {
        let g = d1();
        let plan = icc_cover(&g, SearchMode::Exact, &SearchLimits::default()).unwrap();
        let code = assemble_code(&g, &plan, None).unwrap();
        assert_eq!(code.len(), 4);
        let arcless = Digraph::empty(3);
        let empty = CoverPlan::from_pieces(3, vec![]);
        let code = assemble_code(&arcless, &empty, None).unwrap();
        assert_eq!(code.len(), 3);
        assert!(code.symbols.iter().all(|s| s.kind == SymbolKind::Uncoded));
        let bad = CoverPlan::from_pieces(6, plan.pieces.clone());
        assert_eq!(
            assemble_code(&g.without_arc(1, 5), &bad, None),
            Err(SchemeError::Embedding(0))
        );
        let mut overlap = plan.clone();
        overlap.uncovered.insert(1);
        assert_eq!(
            assemble_code(&g, &overlap, None),
            Err(SchemeError::NotAPartition(6))
        );
    }

    #[test]
    fn greedy_cliques_partition() {
        let g = complete(3)
            .disjoint_union(&complete(2))
            .disjoint_union(&Digraph::empty(1));
        let plan = clique_cover(&g, SearchMode::Greedy, &SearchLimits::default()).unwrap();
        assert_eq!(plan.code_length(), 3);
        assert!(plan.is_partition());
    }
}
