//! Dense GF(2) matrices over packed `u64` rows.

use std::collections::BTreeSet;

use crate::codec::IndexCode;
use crate::graph::VertexId;

use super::OracleError;

/// Row `r` is the support vector of coded symbol `r`; column `c` is
/// message `c + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Gf2Matrix {
            cols,
            words,
            rows: vec![vec![0; words]; rows],
        }
    }

    /// Matrix of `code` over `n` messages.
    pub fn from_code(code: &IndexCode, n: usize) -> Result<Self, OracleError> {
        let mut m = Gf2Matrix::zeros(0, n);
        for s in &code.symbols {
            m.push_support(&s.support)?;
        }
        Ok(m)
    }

    pub fn push_support(&mut self, support: &BTreeSet<VertexId>) -> Result<(), OracleError> {
        let mut row = vec![0u64; self.words];
        for &id in support {
            if id == 0 || id > self.cols {
                return Err(OracleError::Dimension { id, n: self.cols });
            }
            row[(id - 1) / 64] |= 1 << ((id - 1) % 64);
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    /// Reduced row-echelon basis of the row space, keyed by pivot column.
    fn echelon(rows: impl IntoIterator<Item = Vec<u64>>) -> Vec<(usize, Vec<u64>)> {
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        for mut row in rows {
            reduce(&mut row, &basis);
            if let Some(p) = lowest_bit(&row) {
                for (_, b) in basis.iter_mut() {
                    if b[p / 64] >> (p % 64) & 1 == 1 {
                        xor_row(b, &row);
                    }
                }
                basis.push((p, row));
            }
        }
        basis
    }

    pub fn rank(&self) -> usize {
        Self::echelon(self.rows.iter().cloned()).len()
    }

    /// Same row space (requires equal column counts).
    pub fn same_row_space(&self, other: &Gf2Matrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let r = self.rank();
        r == other.rank() && Self::echelon(self.rows.iter().chain(&other.rows).cloned()).len() == r
    }
}

fn lowest_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

fn xor_row(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn reduce(row: &mut [u64], basis: &[(usize, Vec<u64>)]) {
    for (p, b) in basis {
        if row[p / 64] >> (p % 64) & 1 == 1 {
            xor_row(row, b);
        }
    }
}

/// Whether unit vector `e_target` lies in the span of the rows of `m`
/// together with `{e_j : j in side}`.
pub fn gf2_decodable(
    m: &Gf2Matrix,
    side: &BTreeSet<VertexId>,
    target: VertexId,
) -> Result<bool, OracleError> {
    let n = m.cols;
    let unit = |id: VertexId| -> Result<Vec<u64>, OracleError> {
        if id == 0 || id > n {
            return Err(OracleError::Dimension { id, n });
        }
        let mut r = vec![0u64; m.words];
        r[(id - 1) / 64] |= 1 << ((id - 1) % 64);
        Ok(r)
    };
    let mut rows = m.rows.clone();
    for &j in side {
        rows.push(unit(j)?);
    }
    let mut goal = unit(target)?;
    if side.contains(&target) {
        return Ok(true);
    }
    let basis = Gf2Matrix::echelon(rows);
    reduce(&mut goal, &basis);
    Ok(goal.iter().all(|&w| w == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(n: usize, supports: &[&[VertexId]]) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(0, n);
        for s in supports {
            m.push_support(&s.iter().copied().collect()).unwrap();
        }
        m
    }

    #[test]
    fn decodability_basics() {
        let m = matrix(2, &[&[1, 2]]);
        assert!(gf2_decodable(&m, &BTreeSet::from([2]), 1).unwrap());
        assert!(!gf2_decodable(&m, &BTreeSet::new(), 1).unwrap());
        assert!(gf2_decodable(&m, &BTreeSet::new(), 3).is_err());
        assert!(gf2_decodable(&m, &BTreeSet::from([5]), 1).is_err());
    }

    #[test]
    fn rank_and_span() {
        let a = matrix(4, &[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(a.rank(), 2);
        let b = matrix(4, &[&[1, 3], &[1, 2]]);
        assert!(a.same_row_space(&b));
        let c = matrix(4, &[&[1, 2], &[3, 4]]);
        assert!(!a.same_row_space(&c));
        assert_eq!(matrix(3, &[]).rank(), 0);
        assert!(a.get(0, 1) && !a.get(0, 2));
    }

    #[test]
    fn wide_rows() {
        let n = 200;
        let chain: Vec<Vec<VertexId>> = (1..n).map(|a| vec![a, a + 1]).collect();
        let refs: Vec<&[VertexId]> = chain.iter().map(Vec::as_slice).collect();
        let m = matrix(n, &refs);
        assert_eq!(m.rank(), n - 1);
        assert!(gf2_decodable(&m, &BTreeSet::from([n]), 1).unwrap());
        assert!(!gf2_decodable(&m, &BTreeSet::new(), 130).unwrap());
    }
}
