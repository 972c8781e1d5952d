use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use itertools::Itertools;
use thiserror::Error;

use crate::designs::{point_mask, MAX_POINTS};

#[derive(Debug, Error)]
pub enum ArrayError {
    #[error("line {line}: malformed token {token:?}")]
    Parse { line: usize, token: String },
    #[error("line {line}: header must be \"k N v\" ({reason})")]
    Header { line: usize, reason: String },
    #[error("{0}")]
    Shape(String),
    #[error("line {line}: value {value} is outside [1, {v}]")]
    Range { line: usize, value: u64, v: u32 },
    #[error("column {column}: value {value} appears twice")]
    RepeatedValue { column: usize, value: u32 },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A `k x N` storage array over the alphabet `[v]`. Column `j` is storage
/// node `j` and lists its `k` distinct symbols in on-disk order.
///
/// Columns are 0-based in this API.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfrArray {
    k: usize,
    v: u32,
    // column-major
    cells: Vec<u32>,
    masks: Vec<u128>,
}

impl CfrArray {
    pub fn from_columns<C: AsRef<[u32]>>(k: usize, v: u32, columns: &[C]) -> Result<Self, ArrayError> {
        if k == 0 || v == 0 || v > MAX_POINTS || k > v as usize {
            return Err(ArrayError::Shape(format!(
                "need 1 <= k <= v <= {MAX_POINTS} (got k={k}, v={v})"
            )));
        }
        let mut cells = Vec::with_capacity(k * columns.len());
        let mut masks = Vec::with_capacity(columns.len());
        for (j, column) in columns.iter().enumerate() {
            let column = column.as_ref();
            if column.len() != k {
                return Err(ArrayError::Shape(format!(
                    "column {} has {} entries, expected k={k}",
                    j + 1,
                    column.len()
                )));
            }
            let mut mask = 0u128;
            for &value in column {
                if value == 0 || value > v {
                    return Err(ArrayError::Shape(format!(
                        "column {}: value {value} is outside [1, {v}]",
                        j + 1
                    )));
                }
                let bit = 1u128 << (value - 1);
                if mask & bit != 0 {
                    return Err(ArrayError::RepeatedValue { column: j + 1, value });
                }
                mask |= bit;
            }
            cells.extend_from_slice(column);
            masks.push(mask);
        }
        Ok(CfrArray { k, v, cells, masks })
    }

    /// Parses the text format: a header line `k N v`, then `k` rows of `N`
    /// whitespace-separated values. Blank lines and `#` lines are skipped.
    pub fn parse(text: &str) -> Result<Self, ArrayError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| ArrayError::Shape("empty array file".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|tok| {
                tok.parse().map_err(|_| ArrayError::Parse { line: hline, token: tok.to_string() })
            })
            .collect::<Result<_, _>>()?;
        let [k, n, v] = dims[..] else {
            return Err(ArrayError::Header { line: hline, reason: format!("{} fields", dims.len()) });
        };
        if v as u64 > MAX_POINTS as u64 {
            return Err(ArrayError::Header { line: hline, reason: format!("v={v} exceeds {MAX_POINTS}") });
        }
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(k);
        for (line, raw) in lines {
            if rows.len() == k {
                return Err(ArrayError::Shape(format!("line {line}: more than k={k} rows")));
            }
            let mut row = Vec::with_capacity(n);
            for tok in raw.split_whitespace() {
                let value: u64 = tok
                    .parse()
                    .map_err(|_| ArrayError::Parse { line, token: tok.to_string() })?;
                if value == 0 || value > v as u64 {
                    return Err(ArrayError::Range { line, value, v: v as u32 });
                }
                row.push(value as u32);
            }
            if row.len() != n {
                return Err(ArrayError::Shape(format!(
                    "line {line}: row has {} values, expected N={n}",
                    row.len()
                )));
            }
            rows.push(row);
        }
        if rows.len() != k {
            return Err(ArrayError::Shape(format!("found {} rows, expected k={k}", rows.len())));
        }
        let columns: Vec<Vec<u32>> = (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        Self::from_columns(k, v as u32, &columns)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ArrayError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ArrayError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Header `k N v` followed by the `k` rows.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.k, self.len(), self.v);
        for row in 0..self.k {
            let _ = writeln!(out, "{}", (0..self.len()).map(|j| self.column(j)[row]).join(" "));
        }
        out
    }

    /// Rows per column.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Alphabet size.
    pub fn v(&self) -> u32 {
        self.v
    }

    /// Number of columns `N`.
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.cells[j * self.k..(j + 1) * self.k]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.cells.chunks_exact(self.k)
    }

    /// The value set of column `j` as a point mask.
    pub fn column_mask(&self, j: usize) -> u128 {
        self.masks[j]
    }

    /// The value set of column `j`, ascending.
    pub fn column_set(&self, j: usize) -> Vec<u32> {
        self.column(j).iter().copied().sorted_unstable().collect()
    }

    /// Replaces column `j` with a rearrangement of the same values.
    pub(crate) fn reorder_column(&mut self, j: usize, order: &[u32]) {
        debug_assert_eq!(point_mask(order), self.masks[j]);
        self.cells[j * self.k..(j + 1) * self.k].copy_from_slice(order);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "# 4x6 example\n4 6 6\n1 2 1 2 1 1\n2 3 3 4 3 2\n3 4 4 5 5 4\n5 6 5 6 6 6\n";

    #[test]
    fn parses_row_major_text() {
        let a = CfrArray::parse(EXAMPLE).unwrap();
        assert_eq!((a.k(), a.len(), a.v()), (4, 6, 6));
        assert_eq!(a.column(0), &[1, 2, 3, 5]);
        assert_eq!(a.column(4), &[1, 3, 5, 6]);
        assert_eq!(a.column_set(1), vec![2, 3, 4, 6]);
    }

    #[test]
    fn text_round_trip() {
        let a = CfrArray::parse(EXAMPLE).unwrap();
        let b = CfrArray::parse(&a.to_text()).unwrap();
        assert_eq!(a, b);
        assert!(a.to_text().starts_with("4 6 6\n1 2 1 2 1 1\n"));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(CfrArray::parse("4 6\n"), Err(ArrayError::Header { line: 1, .. })));
        assert!(matches!(CfrArray::parse("2 2 3\n1 2\n2 x\n"), Err(ArrayError::Parse { line: 3, .. })));
        assert!(matches!(CfrArray::parse("2 2 3\n1 2\n2 4\n"), Err(ArrayError::Range { line: 3, value: 4, .. })));
        assert!(matches!(CfrArray::parse("2 2 3\n1 2\n1 3\n"), Err(ArrayError::RepeatedValue { column: 1, value: 1 })));
        assert!(matches!(CfrArray::parse("2 2 3\n1 2\n"), Err(ArrayError::Shape(_))));
        assert!(matches!(CfrArray::parse("2 2 3\n1 2\n2 3 1\n"), Err(ArrayError::Shape(_))));
        assert!(CfrArray::from_columns(2, 3, &[vec![1, 2, 3]]).is_err());
    }
}
