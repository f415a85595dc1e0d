//! Explicit frameproof codes of length `ceil(n / (q-1))`.

use crate::code::{check_alphabet, CodeMatrix, Symbol};
use crate::error::{param, Result};

/// Length of [`build_diagonal`]: `ceil(n / (q-1))`.
pub fn diagonal_length(q: u32, n: usize) -> usize {
    n.div_ceil(q as usize - 1)
}

/// The first `n` columns of `q-1` side-by-side `d x d` diagonal blocks,
/// block `s` carrying symbol `s` on its diagonal, `d = ceil(n / (q-1))`.
/// Column `j` holds symbol `j / d + 1` in row `j % d` and zeros elsewhere, so
/// every codeword owns a (row, symbol) pair no other codeword uses and the
/// code is `k`-frameproof for every `k <= n - 1`.
pub fn build_diagonal(q: u32, n: usize) -> Result<CodeMatrix> {
    check_alphabet(q)?;
    if n == 0 {
        return param("n must be at least 1");
    }
    let d = diagonal_length(q, n);
    let mut entries = vec![0 as Symbol; d * n];
    for j in 0..n {
        entries[(j % d) * n + j] = (j / d + 1) as Symbol;
    }
    CodeMatrix::from_entries(q, d, n, entries)
}
