//! Zero/free patterns and their generic rank.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Boolean support of a structured matrix: `true` marks a free parameter,
/// `false` a fixed zero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl Pattern {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Pattern {
            rows,
            cols,
            data: vec![false; rows * cols],
        }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Pattern {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    /// Parses rows like `"x.x"` where `x` is free and `.` is zero.
    pub fn parse(rows: &[&str]) -> Self {
        let rows: Vec<Vec<bool>> = rows.iter().map(|r| r.chars().map(|c| c == 'x').collect()).collect();
        Pattern::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, free: bool) {
        self.data[i * self.cols + j] = free;
    }

    pub fn count_free(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (0..self.cols).all(|j| !self.get(i, j))
    }

    /// Entrywise OR; the support of a sum of independent structured matrices.
    pub fn or(&self, other: &Pattern) -> Pattern {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Pattern {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a || *b).collect(),
        }
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Pattern) -> Pattern {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Pattern::empty(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j));
            }
        }
        out
    }

    /// Applies the state permutation `perm` to rows (and to columns when
    /// `square`): entry `(i, j)` of the result is entry `(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize], permute_cols: bool) -> Pattern {
        assert_eq!(perm.len(), self.rows);
        let mut out = Pattern::empty(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let src_j = if permute_cols { perm[j] } else { j };
                out.set(i, j, self.get(perm[i], src_j));
            }
        }
        out
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.rows)
            .map(|i| (0..self.cols).filter(|&j| self.get(i, j)).collect())
            .collect()
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, " ")?;
            }
            for j in 0..self.cols {
                write!(f, "{}", if self.get(i, j) { 'x' } else { '.' })?;
            }
        }
        write!(f, "]")
    }
}

/// Maximum matching between rows and columns over free entries.
#[derive(Debug, Clone)]
pub struct Matching {
    pub row_to_col: Vec<Option<usize>>,
    pub col_to_row: Vec<Option<usize>>,
    pub size: usize,
}

/// Kuhn's augmenting-path matching; patterns here are small.
pub fn maximum_matching(pattern: &Pattern) -> Matching {
    let adj = pattern.adjacency();
    let mut row_to_col = vec![None; pattern.rows];
    let mut col_to_row = vec![None; pattern.cols];
    let mut size = 0;

    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        row_to_col: &mut [Option<usize>],
        col_to_row: &mut [Option<usize>],
    ) -> bool {
        for &c in &adj[u] {
            if seen[c] {
                continue;
            }
            seen[c] = true;
            let free = match col_to_row[c] {
                None => true,
                Some(r) => augment(r, adj, seen, row_to_col, col_to_row),
            };
            if free {
                row_to_col[u] = Some(c);
                col_to_row[c] = Some(u);
                return true;
            }
        }
        false
    }

    for u in 0..pattern.rows {
        let mut seen = vec![false; pattern.cols];
        if augment(u, &adj, &mut seen, &mut row_to_col, &mut col_to_row) {
            size += 1;
        }
    }

    Matching {
        row_to_col,
        col_to_row,
        size,
    }
}

/// Generic rank of a pattern with independent free entries: its term rank.
pub fn g_rank(pattern: &Pattern) -> usize {
    maximum_matching(pattern).size
}
