//! The code matrix data model and the elementary transforms between code
//! families.
//!
//! A code is a `t x n` matrix over the alphabet `[0, q-1]`. Columns are the
//! codewords; rows are coordinates (fingerprint positions, time slots).

use std::fmt;

use crate::error::{Error, Result};

/// Stored symbol type. Alphabets up to 65536 symbols fit.
pub type Symbol = u16;

/// Largest alphabet size representable with [`Symbol`].
pub const MAX_ALPHABET: u32 = Symbol::MAX as u32 + 1;

/// A `t x n` matrix with entries in `[0, q-1]`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CodeMatrix {
    q: u32,
    t: usize,
    n: usize,
    entries: Vec<Symbol>,
}

impl CodeMatrix {
    /// Builds a matrix from row-major entries, checking dimensions and the
    /// alphabet bound.
    pub fn from_entries(q: u32, t: usize, n: usize, entries: Vec<Symbol>) -> Result<Self> {
        check_alphabet(q)?;
        if t == 0 || n == 0 {
            return Err(Error::Dimension(format!("empty matrix {t}x{n}")));
        }
        let cells = t
            .checked_mul(n)
            .ok_or_else(|| Error::Dimension(format!("{t}x{n} overflows")))?;
        if entries.len() != cells {
            return Err(Error::Dimension(format!(
                "expected {cells} entries for {t}x{n}, got {}",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&s| u32::from(s) >= q) {
            return Err(Error::Parameter(format!(
                "symbol {} at row {}, column {} is not below q = {q}",
                entries[pos],
                pos / n,
                pos % n
            )));
        }
        Ok(Self { q, t, n, entries })
    }

    pub fn from_rows<R: AsRef<[Symbol]>>(q: u32, rows: &[R]) -> Result<Self> {
        let t = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(bad) = rows.iter().position(|r| r.as_ref().len() != n) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].as_ref().len()
            )));
        }
        let entries = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::from_entries(q, t, n, entries)
    }

    /// Builds a matrix from its codewords.
    pub fn from_columns<C: AsRef<[Symbol]>>(q: u32, columns: &[C]) -> Result<Self> {
        let n = columns.len();
        let t = columns.first().map_or(0, |c| c.as_ref().len());
        if let Some(bad) = columns.iter().position(|c| c.as_ref().len() != t) {
            return Err(Error::Dimension(format!(
                "column {bad} has {} entries, expected {t}",
                columns[bad].as_ref().len()
            )));
        }
        let mut entries = vec![0; t * n];
        for (j, col) in columns.iter().enumerate() {
            for (i, &s) in col.as_ref().iter().enumerate() {
                entries[i * n + j] = s;
            }
        }
        Self::from_entries(q, t, n, entries)
    }

    pub fn zeros(q: u32, t: usize, n: usize) -> Result<Self> {
        Self::from_entries(q, t, n, vec![0; t.saturating_mul(n)])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of rows (the code length).
    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of columns (codewords).
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Symbol {
        self.entries[row * self.n + col]
    }

    pub fn row(&self, i: usize) -> &[Symbol] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Symbol]> + '_ {
        self.entries.chunks_exact(self.n)
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.t).map(move |i| self.get(i, j))
    }

    pub fn column_vec(&self, j: usize) -> Vec<Symbol> {
        self.column(j).collect()
    }

    pub fn entries(&self) -> &[Symbol] {
        &self.entries
    }

    /// Number of nonzero entries in column `j`.
    pub fn column_weight(&self, j: usize) -> Result<usize> {
        if j >= self.n {
            return Err(Error::Index { index: j, len: self.n });
        }
        Ok(self.column(j).filter(|&s| s != 0).count())
    }

    pub fn weight_profile(&self) -> ColumnWeightProfile {
        let mut weights = vec![0; self.n];
        for row in self.rows() {
            for (w, &s) in weights.iter_mut().zip(row) {
                *w += usize::from(s != 0);
            }
        }
        ColumnWeightProfile { weights }
    }

    /// Replaces every symbol `s` by `q - 1 - s`.
    pub fn complement(&self) -> Self {
        let top = (self.q - 1) as Symbol;
        Self {
            entries: self.entries.iter().map(|&s| top - s).collect(),
            ..self.clone()
        }
    }

    /// The rows of `self` followed by the rows of `other`.
    pub fn stack_rows(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::Dimension(format!(
                "cannot stack {}x{} (q={}) on {}x{} (q={})",
                self.t, self.n, self.q, other.t, other.n, other.q
            )));
        }
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        entries.extend_from_slice(&self.entries);
        entries.extend_from_slice(&other.entries);
        Ok(Self {
            q: self.q,
            t: self.t + other.t,
            n: self.n,
            entries,
        })
    }

    /// Binary image obtained by replacing each symbol `s` with the unit
    /// vector of length `q` that has its one at position `s`. Row `i` of the
    /// input becomes rows `q*i .. q*i + q` of the output.
    pub fn binary_expand(&self) -> Self {
        let q = self.q as usize;
        let mut entries = vec![0; q * self.t * self.n];
        for i in 0..self.t {
            for j in 0..self.n {
                let s = self.get(i, j) as usize;
                entries[(q * i + s) * self.n + j] = 1;
            }
        }
        Self {
            q: 2,
            t: q * self.t,
            n: self.n,
            entries,
        }
    }

    /// The submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.n) {
            return Err(Error::Index { index: bad, len: self.n });
        }
        let entries = self
            .rows()
            .flat_map(|row| cols.iter().map(move |&c| row[c]))
            .collect();
        Self::from_entries(self.q, self.t, cols.len(), entries)
    }
}

impl fmt::Debug for CodeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CodeMatrix(q={}, {}x{})", self.q, self.t, self.n)?;
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            writeln!(f, "  {}", line.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn check_alphabet(q: u32) -> Result<()> {
    if !(2..=MAX_ALPHABET).contains(&q) {
        return Err(Error::Parameter(format!("alphabet size q = {q} outside [2, {MAX_ALPHABET}]")));
    }
    Ok(())
}

/// Per-column count of nonzero entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnWeightProfile {
    pub weights: Vec<usize>,
}

impl ColumnWeightProfile {
    /// `Some(w)` when every column has weight `w`.
    pub fn constant(&self) -> Option<usize> {
        let first = *self.weights.first()?;
        self.weights.iter().all(|&w| w == first).then_some(first)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> CodeMatrix {
        let rows: Vec<Vec<Symbol>> = (0..n)
            .map(|i| (0..n).map(|j| Symbol::from(i == j)).collect())
            .collect();
        CodeMatrix::from_rows(2, &rows).unwrap()
    }

    #[test]
    fn column_weight_cases() {
        let z = CodeMatrix::zeros(3, 4, 2).unwrap();
        assert_eq!(z.column_weight(1).unwrap(), 0);

        let m = CodeMatrix::from_columns(3, &[[1, 0, 2, 0]]).unwrap();
        assert_eq!(m.column_weight(0).unwrap(), 2);

        let id = identity(5);
        for j in 0..5 {
            assert_eq!(id.column_weight(j).unwrap(), 1);
        }
        assert_eq!(id.column_weight(5), Err(Error::Index { index: 5, len: 5 }));
        assert_eq!(id.weight_profile().constant(), Some(1));
    }

    #[test]
    fn complement_cases() {
        let m = CodeMatrix::from_rows(2, &[[0, 1]]).unwrap();
        assert_eq!(m.complement(), CodeMatrix::from_rows(2, &[[1, 0]]).unwrap());

        let m = CodeMatrix::from_columns(5, &[[0, 4, 2]]).unwrap();
        assert_eq!(m.complement().column_vec(0), vec![4, 0, 2]);
        assert_eq!(m.complement().complement(), m);
    }

    #[test]
    fn stack_cases() {
        let a = CodeMatrix::from_rows(2, &[[0, 1]]).unwrap();
        let b = CodeMatrix::from_rows(2, &[[1, 0]]).unwrap();
        let s = a.stack_rows(&b).unwrap();
        assert_eq!(s, CodeMatrix::from_rows(2, &[[0, 1], [1, 0]]).unwrap());
        assert_eq!(a.stack_rows(&a.complement()).unwrap().t(), 2);

        let c = CodeMatrix::from_rows(3, &[[1, 0]]).unwrap();
        assert!(matches!(a.stack_rows(&c), Err(Error::Dimension(_))));
        let d = CodeMatrix::from_rows(2, &[[1, 0, 1]]).unwrap();
        assert!(matches!(a.stack_rows(&d), Err(Error::Dimension(_))));
    }

    #[test]
    fn binary_expand_cases() {
        let m = CodeMatrix::from_rows(2, &[[1]]).unwrap();
        assert_eq!(m.binary_expand().column_vec(0), vec![0, 1]);

        let m = CodeMatrix::from_rows(3, &[[0, 2], [1, 1]]).unwrap();
        let b = m.binary_expand();
        assert_eq!(b.q(), 2);
        assert_eq!(b.t(), 6);
        assert_eq!(b.column_vec(0), vec![1, 0, 0, 0, 1, 0]);
        assert_eq!(b.column_vec(1), vec![0, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(CodeMatrix::from_entries(3, 1, 2, vec![0, 3]).is_err());
        assert!(CodeMatrix::from_entries(3, 2, 2, vec![0, 1]).is_err());
        assert!(CodeMatrix::from_entries(1, 1, 1, vec![0]).is_err());
        assert!(CodeMatrix::from_rows(2, &[vec![0, 1], vec![0]]).is_err());
        assert!(CodeMatrix::zeros(2, 0, 3).is_err());
    }

    #[test]
    fn select_columns_keeps_order() {
        let m = CodeMatrix::from_rows(3, &[[0, 1, 2], [2, 1, 0]]).unwrap();
        let s = m.select_columns(&[2, 0]).unwrap();
        assert_eq!(s, CodeMatrix::from_rows(3, &[[2, 0], [0, 2]]).unwrap());
        assert!(m.select_columns(&[3]).is_err());
    }
}
