//! Independent certification of codes and of the optimality claims that go
//! with them.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::codec::{self, IndexCode};
use crate::graph::{Cycle, Digraph, VertexId, DEFAULT_CYCLE_CAP};
use crate::schemes::SchemeReport;
use crate::template::{IccTemplate, PathId, TemplateError};

pub mod gf2;
pub mod mais;

pub use gf2::{gf2_decodable, Gf2Matrix};
pub use mais::{mais, mais_bounded, mais_exhaustive, min_feedback_vertex_set, DEFAULT_MAIS_BOUND};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("message {id} outside 1..={n}")]
    Dimension { id: VertexId, n: usize },
    #[error("n = {n} exceeds the exact-search bound {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error(transparent)]
    Template(#[from] TemplateError),
}

/// Per-receiver outcome of [`verify_code`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeVerdict {
    /// `decodable[i - 1]` for receiver `i`.
    pub decodable: Vec<bool>,
}

impl CodeVerdict {
    pub fn is_valid(&self) -> bool {
        self.decodable.iter().all(|&d| d)
    }

    pub fn failing(&self) -> Vec<VertexId> {
        (1..=self.decodable.len())
            .filter(|&i| !self.decodable[i - 1])
            .collect()
    }
}

/// Checks, by elimination, that every receiver of `g` can solve for its
/// message from `code` and its side information.
pub fn verify_code(g: &Digraph, code: &IndexCode) -> Result<CodeVerdict, OracleError> {
    let m = Gf2Matrix::from_code(code, g.n())?;
    let decodable = (1..=g.n())
        .map(|i| gf2_decodable(&m, g.out_neighbors(i), i))
        .collect::<Result<_, _>>()?;
    Ok(CodeVerdict { decodable })
}

/// Outcome of [`certify_optimality`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalityReport {
    pub n: usize,
    pub k: usize,
    pub code_length: usize,
    pub mais: usize,
}

impl OptimalityReport {
    /// The code meets the MAIS lower bound.
    pub fn is_optimal(&self) -> bool {
        self.code_length == self.mais
    }

    /// Optimal broadcast rate for every packet length, when certified.
    pub fn broadcast_rate(&self) -> Option<usize> {
        self.is_optimal().then_some(self.code_length)
    }

    pub fn to_report(&self) -> SchemeReport {
        SchemeReport {
            n: self.n,
            l_cyc: None,
            l_cc: None,
            l_icc: self.code_length,
            mais: Some(self.mais),
            optimal: self.is_optimal(),
        }
    }
}

/// Compares the template code length against the MAIS of its digraph.
pub fn certify_optimality(t: &IccTemplate) -> Result<OptimalityReport, OracleError> {
    let (g, _) = t.build_digraph()?;
    Ok(OptimalityReport {
        n: g.n(),
        k: t.k,
        code_length: codec::code_length(t)?,
        mais: mais(&g)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContainmentVerdict {
    Holds,
    /// `cycle` passes through `vertex` but misses the terminal it must contain.
    Violated {
        cycle: Cycle,
        vertex: VertexId,
        terminal: VertexId,
    },
    /// Cycle enumeration hit its cap before finishing.
    Inconclusive,
}

/// Every cycle through a vertex of `P_i` contains the terminal of `P_i`;
/// every cycle through a vertex of `P_{i,j}` contains the terminal of `P_j`.
pub fn check_terminal_containment(t: &IccTemplate) -> Result<ContainmentVerdict, OracleError> {
    check_terminal_containment_capped(t, DEFAULT_CYCLE_CAP)
}

pub fn check_terminal_containment_capped(
    t: &IccTemplate,
    cap: usize,
) -> Result<ContainmentVerdict, OracleError> {
    let (g, l) = t.build_digraph()?;
    let cycles = g.enumerate_cycles(cap);
    if cycles.truncated {
        return Ok(ContainmentVerdict::Inconclusive);
    }
    for c in cycles.cycles {
        let members: BTreeSet<VertexId> = c.vertices().iter().copied().collect();
        for &v in c.vertices() {
            let coord = l.coord_of(v).expect("built labeling covers the digraph");
            let owner = match coord.path {
                PathId::TypeI(i) => i,
                PathId::TypeII(_, j) => j,
            };
            let terminal = l.vertex(t.terminal(owner));
            if !members.contains(&terminal) {
                return Ok(ContainmentVerdict::Violated {
                    cycle: c,
                    vertex: v,
                    terminal,
                });
            }
        }
    }
    Ok(ContainmentVerdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{CodedSymbol, SymbolKind};

    fn code(supports: &[&[VertexId]]) -> IndexCode {
        IndexCode {
            symbols: supports
                .iter()
                .map(|s| CodedSymbol {
                    support: s.iter().copied().collect(),
                    payload: None,
                    kind: SymbolKind::Listed,
                })
                .collect(),
        }
    }

    fn d1() -> Digraph {
        IccTemplate::with_direct_links(vec![2, 2, 2])
            .build_digraph()
            .unwrap()
            .0
    }

    #[test]
    fn d1_code_verdicts() {
        let g = d1();
        let full = code(&[&[4, 1], &[5, 2], &[6, 3], &[1, 2, 3]]);
        assert!(verify_code(&g, &full).unwrap().is_valid());
        let reduced = code(&[&[4, 1], &[5, 2], &[6, 3]]);
        assert_eq!(verify_code(&g, &reduced).unwrap().failing(), vec![1, 2, 3]);
        let m = Gf2Matrix::from_code(&full, 6).unwrap();
        for v in 1..=6 {
            assert!(gf2_decodable(&m, g.side_info(v).unwrap(), v).unwrap());
        }
        let uncoded = code(&[&[1], &[2], &[3], &[4], &[5], &[6]]);
        assert!(verify_code(&g, &uncoded).unwrap().is_valid());
        assert!(verify_code(&g, &code(&[&[7]])).is_err());
    }

    #[test]
    fn optimality() {
        let r = certify_optimality(&IccTemplate::with_direct_links(vec![2, 2, 2])).unwrap();
        assert!(r.is_optimal());
        assert_eq!(r.broadcast_rate(), Some(4));
        let r = certify_optimality(&IccTemplate::with_direct_links(vec![1, 2, 2])).unwrap();
        assert_eq!((r.code_length, r.mais), (3, 3));
        let json = r.to_report().to_json();
        assert_eq!(
            json,
            r#"{"n":5,"l_cyc":null,"l_cc":null,"l_icc":3,"mais":3,"optimal":true}"#
        );
    }

    #[test]
    fn terminal_containment_on_fixtures() {
        let d1 = IccTemplate::with_direct_links(vec![2, 2, 2]);
        assert_eq!(
            check_terminal_containment(&d1).unwrap(),
            ContainmentVerdict::Holds
        );
        assert_eq!(
            check_terminal_containment(&IccTemplate::cycle(2, 3)).unwrap(),
            ContainmentVerdict::Holds
        );
        assert_eq!(
            check_terminal_containment_capped(&d1, 1).unwrap(),
            ContainmentVerdict::Inconclusive
        );
    }
}
