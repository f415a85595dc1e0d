//! Exhaustive checkers for the frameproof, strongly selective and
//! `(lambda, w, n)`-matrix properties.
//!
//! All checks enumerate candidate violations in lexicographic order over
//! sorted column-index sets and stop at the first one, so the reported
//! witness is deterministic.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::code::{CodeMatrix, Symbol};
use crate::error::{Error, Result};

/// Upper limit on elementary checks an exhaustive oracle will attempt.
pub const CHECK_LIMIT: u128 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Frameproof,
    StronglySelective,
    LambdaMatrix,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Frameproof => "frameproof",
            Property::StronglySelective => "strongly_selective",
            Property::LambdaMatrix => "lambda_matrix",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    K(usize),
    LambdaW { lambda: usize, w: usize },
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parameter::K(k) => write!(f, "k={k}"),
            Parameter::LambdaW { lambda, w } => write!(f, "lambda={lambda} w={w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `coalition` leaves no usable row for `column`. For the frameproof
    /// property the coalition is the `k` other columns; for strong
    /// selectivity it is the rest of the offending `k`-tuple.
    Covered { column: usize, coalition: Vec<usize> },
    /// A column whose weight differs from the required one.
    WrongWeight { column: usize, weight: usize },
    /// Two columns sharing more than `lambda` nonzero symbols, with the rows
    /// where they agree.
    TooManyAgreements { columns: (usize, usize), rows: Vec<usize> },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Covered { column, coalition } => {
                write!(f, "column {column} covered by coalition {coalition:?}")
            }
            Witness::WrongWeight { column, weight } => {
                write!(f, "column {column} has weight {weight}")
            }
            Witness::TooManyAgreements { columns, rows } => write!(
                f,
                "columns {} and {} agree on nonzero symbols in rows {rows:?}",
                columns.0, columns.1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub property: Property,
    pub parameter: Parameter,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl VerificationReport {
    fn new(property: Property, parameter: Parameter, witness: Option<Witness>) -> Self {
        Self {
            property,
            parameter,
            passed: witness.is_none(),
            witness,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.property,
            self.parameter,
            if self.passed { "pass" } else { "fail" }
        )?;
        if let Some(w) = &self.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul(u128::from(n - i)) {
            Some(v) => v / u128::from(i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn guard(needed: u128) -> Result<()> {
    if needed > CHECK_LIMIT {
        Err(Error::Capacity {
            needed,
            limit: CHECK_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Row masks for every ordered column pair: bit `i` of `agree(a, b)` is set
/// when columns `a` and `b` hold the same symbol in row `i`.
struct AgreementTable {
    n: usize,
    masks: Vec<FixedBitSet>,
    nonzero: Vec<FixedBitSet>,
    t: usize,
}

impl AgreementTable {
    fn build(m: &CodeMatrix) -> Self {
        let (t, n) = (m.t(), m.n());
        let columns: Vec<Vec<Symbol>> = (0..n).map(|j| m.column_vec(j)).collect();
        let nonzero = columns
            .iter()
            .map(|col| {
                let mut mask = FixedBitSet::with_capacity(t);
                for (i, &s) in col.iter().enumerate() {
                    mask.set(i, s != 0);
                }
                mask
            })
            .collect();
        let mut masks = vec![FixedBitSet::with_capacity(t); n * n];
        for a in 0..n {
            for b in (a + 1)..n {
                let mut mask = FixedBitSet::with_capacity(t);
                for (i, (x, y)) in columns[a].iter().zip(&columns[b]).enumerate() {
                    mask.set(i, x == y);
                }
                masks[b * n + a] = mask.clone();
                masks[a * n + b] = mask;
            }
        }
        Self { n, masks, nonzero, t }
    }

    fn agree(&self, a: usize, b: usize) -> &FixedBitSet {
        &self.masks[a * self.n + b]
    }

    /// True when some row in `candidate` is outside every coalition mask.
    fn separated(&self, column: usize, candidate: &FixedBitSet, coalition: &[usize]) -> bool {
        let mut covered = FixedBitSet::with_capacity(self.t);
        for &j in coalition {
            covered.union_with(self.agree(column, j));
        }
        !candidate.is_subset(&covered)
    }
}

/// Depth-first enumeration of `k`-subsets of `pool` in lexicographic order,
/// carrying the running union of agreement masks. Calls `visit` on every
/// subset whose union covers `candidate`; stops early (returning false) once
/// `visit` returns false.
fn visit_coverings(
    table: &AgreementTable,
    column: usize,
    candidate: &FixedBitSet,
    pool: &[usize],
    k: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    struct Search<'a> {
        table: &'a AgreementTable,
        column: usize,
        candidate: &'a FixedBitSet,
        pool: &'a [usize],
        chosen: Vec<usize>,
    }

    impl Search<'_> {
        fn go(&mut self, start: usize, remaining: usize, acc: &FixedBitSet, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
            if remaining == 0 {
                return !self.candidate.is_subset(acc) || visit(&self.chosen);
            }
            for idx in start..=(self.pool.len() - remaining) {
                let j = self.pool[idx];
                let mut next = acc.clone();
                next.union_with(self.table.agree(self.column, j));
                self.chosen.push(j);
                let keep_going = self.go(idx + 1, remaining - 1, &next, visit);
                self.chosen.pop();
                if !keep_going {
                    return false;
                }
            }
            true
        }
    }

    if pool.len() < k {
        return true;
    }
    let mut search = Search {
        table,
        column,
        candidate,
        pool,
        chosen: Vec::with_capacity(k),
    };
    let empty = FixedBitSet::with_capacity(table.t);
    search.go(0, k, &empty, visit)
}

fn first_covering(
    table: &AgreementTable,
    column: usize,
    candidate: &FixedBitSet,
    pool: &[usize],
    k: usize,
) -> Option<Vec<usize>> {
    let mut found = None;
    visit_coverings(table, column, candidate, pool, k, &mut |coalition| {
        found = Some(coalition.to_vec());
        false
    });
    found
}

/// Visits every `(column, coalition)` with `|coalition| = k` such that in
/// every row some coalition member holds the column's symbol, in
/// lexicographic order, until `visit` returns false.
pub(crate) fn for_each_covered(m: &CodeMatrix, k: usize, mut visit: impl FnMut(usize, &[usize]) -> bool) {
    let n = m.n();
    let table = AgreementTable::build(m);
    let mut all_rows = FixedBitSet::with_capacity(m.t());
    all_rows.insert_range(..);
    for c in 0..n {
        let others: Vec<usize> = (0..n).filter(|&j| j != c).collect();
        if !visit_coverings(&table, c, &all_rows, &others, k, &mut |coalition| visit(c, coalition)) {
            return;
        }
    }
}

/// Checks that for every column `c` and every `k` other columns there is a
/// row where all `k` columns differ from `c`.
pub fn is_frameproof(m: &CodeMatrix, k: usize) -> Result<VerificationReport> {
    let n = m.n();
    if k == 0 || k >= n {
        return Err(Error::Parameter(format!("frameproof needs 1 <= k <= n-1, got k={k}, n={n}")));
    }
    let work = (n as u128)
        .saturating_mul(binomial_u128(n as u64 - 1, k as u64))
        .saturating_mul(m.t() as u128);
    guard(work)?;

    let table = AgreementTable::build(m);
    let mut all_rows = FixedBitSet::with_capacity(m.t());
    all_rows.insert_range(..);
    let witness = (0..n).find_map(|c| {
        let others: Vec<usize> = (0..n).filter(|&j| j != c).collect();
        first_covering(&table, c, &all_rows, &others, k)
            .map(|coalition| Witness::Covered { column: c, coalition })
    });
    Ok(VerificationReport::new(Property::Frameproof, Parameter::K(k), witness))
}

/// Checks that within every `k`-tuple of columns each member has a row
/// holding a nonzero symbol that no other member of the tuple holds in that
/// row.
pub fn is_strongly_selective(m: &CodeMatrix, k: usize) -> Result<VerificationReport> {
    let n = m.n();
    if k == 0 || k > n {
        return Err(Error::Parameter(format!(
            "strong selectivity needs 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let work = binomial_u128(n as u64, k as u64)
        .saturating_mul(k as u128)
        .saturating_mul(m.t() as u128);
    guard(work)?;

    let table = AgreementTable::build(m);
    let mut witness = None;
    for_each_subset(n, k, |tuple| {
        for (pos, &c) in tuple.iter().enumerate() {
            let rest: Vec<usize> = tuple
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &j)| j)
                .collect();
            if !table.separated(c, &table.nonzero[c], &rest) {
                witness = Some(Witness::Covered { column: c, coalition: rest });
                return false;
            }
        }
        true
    });
    Ok(VerificationReport::new(Property::StronglySelective, Parameter::K(k), witness))
}

/// Visits `k`-subsets of `0..n` in lexicographic order until `visit`
/// returns false.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return;
        };
        idx[pos] += 1;
        for p in (pos + 1)..k {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

/// Rows where columns `a` and `b` hold the same nonzero symbol.
pub fn nonzero_agreements(m: &CodeMatrix, a: usize, b: usize) -> Vec<usize> {
    m.rows()
        .enumerate()
        .filter(|(_, row)| row[a] != 0 && row[a] == row[b])
        .map(|(i, _)| i)
        .collect()
}

/// Checks that every column has weight `w` and every pair of columns agrees
/// on a nonzero symbol in at most `lambda` rows.
pub fn is_lambda_matrix(m: &CodeMatrix, lambda: usize, w: usize) -> VerificationReport {
    let param = Parameter::LambdaW { lambda, w };
    let profile = m.weight_profile();
    if let Some((column, &weight)) = profile.weights.iter().enumerate().find(|(_, &x)| x != w) {
        return VerificationReport::new(
            Property::LambdaMatrix,
            param,
            Some(Witness::WrongWeight { column, weight }),
        );
    }
    let n = m.n();
    for a in 0..n {
        for b in (a + 1)..n {
            let rows = nonzero_agreements(m, a, b);
            if rows.len() > lambda {
                return VerificationReport::new(
                    Property::LambdaMatrix,
                    param,
                    Some(Witness::TooManyAgreements { columns: (a, b), rows }),
                );
            }
        }
    }
    VerificationReport::new(Property::LambdaMatrix, param, None)
}

/// Re-checks a failing report's witness in isolation: true when the witness
/// still exhibits a violation of the reported property.
pub fn witness_holds(m: &CodeMatrix, report: &VerificationReport) -> bool {
    let Some(witness) = &report.witness else {
        return false;
    };
    match (report.property, witness, report.parameter) {
        (Property::Frameproof, Witness::Covered { column, coalition }, _) => m
            .rows()
            .all(|row| coalition.iter().any(|&j| row[j] == row[*column])),
        (Property::StronglySelective, Witness::Covered { column, coalition }, _) => m
            .rows()
            .all(|row| row[*column] == 0 || coalition.iter().any(|&j| row[j] == row[*column])),
        (Property::LambdaMatrix, Witness::WrongWeight { column, weight }, Parameter::LambdaW { w, .. }) => {
            m.column_weight(*column).ok() == Some(*weight) && *weight != w
        }
        (
            Property::LambdaMatrix,
            Witness::TooManyAgreements { columns: (a, b), rows },
            Parameter::LambdaW { lambda, .. },
        ) => rows.len() > lambda && nonzero_agreements(m, *a, *b) == *rows,
        _ => false,
    }
}

/// A `(k+1)`-strongly selective code is `k`-frameproof. Returns the truth of
/// the implication on `m` (vacuously true when `m` is not `(k+1)`-strongly
/// selective).
pub fn check_reduction_ss_to_fp(m: &CodeMatrix, k: usize) -> Result<bool> {
    if !is_strongly_selective(m, k + 1)?.passed {
        return Ok(true);
    }
    Ok(is_frameproof(m, k)?.passed)
}

/// Stacking a `k`-frameproof code on its complement yields a
/// `(k+1)`-strongly selective code. Vacuously true when `m` is not
/// `k`-frameproof.
pub fn check_reduction_fp_to_ss(m: &CodeMatrix, k: usize) -> Result<bool> {
    if !is_frameproof(m, k)?.passed {
        return Ok(true);
    }
    let doubled = m.stack_rows(&m.complement())?;
    Ok(is_strongly_selective(&doubled, k + 1)?.passed)
}

/// The binary expansion of a `k`-frameproof code is a binary `k`-strongly
/// selective code of length `q * t`. Vacuously true when `m` is not
/// `k`-frameproof.
pub fn check_binary_expansion(m: &CodeMatrix, k: usize) -> Result<bool> {
    if !is_frameproof(m, k)?.passed {
        return Ok(true);
    }
    let expanded = m.binary_expand();
    debug_assert_eq!(expanded.t(), m.q() as usize * m.t());
    Ok(is_strongly_selective(&expanded, k)?.passed)
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
    fn identity_is_frameproof_and_selective() {
        let id = identity(5);
        for k in 1..5 {
            assert!(is_frameproof(&id, k).unwrap().passed);
        }
        assert!(is_strongly_selective(&id, 5).unwrap().passed);
        assert!(is_lambda_matrix(&id, 0, 1).passed);
    }

    #[test]
    fn duplicate_columns_fail_frameproof() {
        let m = CodeMatrix::from_columns(3, &[[1, 2, 0], [0, 1, 1], [1, 2, 0]]).unwrap();
        let r = is_frameproof(&m, 1).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witness, Some(Witness::Covered { column: 0, coalition: vec![2] }));
        assert!(witness_holds(&m, &r));
    }

    #[test]
    fn all_zero_row_fails() {
        let m = CodeMatrix::zeros(2, 1, 3).unwrap();
        let r = is_frameproof(&m, 1).unwrap();
        assert!(!r.passed);
        assert!(witness_holds(&m, &r));
    }

    #[test]
    fn zero_column_is_never_selected() {
        let m = CodeMatrix::from_rows(2, &[[0, 1]]).unwrap();
        let r = is_strongly_selective(&m, 2).unwrap();
        assert_eq!(r.witness, Some(Witness::Covered { column: 0, coalition: vec![1] }));
        // the same code is 1-frameproof: the zero column differs from the other
        assert!(is_frameproof(&m, 1).unwrap().passed);
    }

    #[test]
    fn lambda_matrix_witnesses() {
        let m = CodeMatrix::from_columns(3, &[[1, 2, 0, 1], [1, 2, 0, 1]]).unwrap();
        let r = is_lambda_matrix(&m, 2, 3);
        assert_eq!(
            r.witness,
            Some(Witness::TooManyAgreements { columns: (0, 1), rows: vec![0, 1, 3] })
        );
        assert!(witness_holds(&m, &r));

        let r = is_lambda_matrix(&m, 2, 2);
        assert_eq!(r.witness, Some(Witness::WrongWeight { column: 0, weight: 3 }));
        assert!(witness_holds(&m, &r));
    }

    #[test]
    fn lambda_matrix_is_not_complement_invariant() {
        let m = CodeMatrix::from_rows(2, &[[0, 0]]).unwrap();
        assert!(is_lambda_matrix(&m, 0, 0).passed);
        let c = m.complement();
        assert!(!is_lambda_matrix(&c, 0, 1).passed);
        assert!(!is_lambda_matrix(&c, 0, 0).passed);
    }

    #[test]
    fn parameter_and_capacity_errors() {
        let id = identity(4);
        assert!(matches!(is_frameproof(&id, 0), Err(Error::Parameter(_))));
        assert!(matches!(is_frameproof(&id, 4), Err(Error::Parameter(_))));
        assert!(matches!(is_strongly_selective(&id, 5), Err(Error::Parameter(_))));

        let wide = CodeMatrix::zeros(2, 10, 200).unwrap();
        assert!(matches!(is_frameproof(&wide, 5), Err(Error::Capacity { .. })));
        assert!(matches!(is_strongly_selective(&wide, 6), Err(Error::Capacity { .. })));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial_u128(5, 2), 10);
        assert_eq!(binomial_u128(49, 3), 18424);
        assert_eq!(binomial_u128(3, 4), 0);
        assert_eq!(binomial_u128(1000, 500), u128::MAX);
    }

    #[test]
    fn subsets_in_lex_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn vacuous_reductions() {
        let m = CodeMatrix::zeros(2, 2, 4).unwrap();
        assert!(check_reduction_fp_to_ss(&m, 2).unwrap());
        assert!(check_reduction_ss_to_fp(&m, 2).unwrap());
        assert!(check_binary_expansion(&m, 2).unwrap());
    }
}
