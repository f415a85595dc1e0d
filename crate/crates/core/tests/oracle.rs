//! Verifier and formula checks against naive, definition-level oracles.

use frameproof::expurgate::{expurgation_length, p_qk_exact};
use frameproof::lll::{lll_satisfiability_check, ConstructionParams};
use frameproof::verify::{
    check_binary_expansion, check_reduction_fp_to_ss, check_reduction_ss_to_fp, is_frameproof,
    is_lambda_matrix, is_strongly_selective, witness_holds, Witness,
};
use frameproof::{read_code, write_code, CodeMatrix, Symbol};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// First `(column, coalition)` such that the coalition matches the column in
/// every row, scanning columns then lexicographic coalitions.
fn naive_frameproof_witness(m: &CodeMatrix, k: usize) -> Option<(usize, Vec<usize>)> {
    for c in 0..m.n() {
        let others: Vec<usize> = (0..m.n()).filter(|&j| j != c).collect();
        for coalition in others.into_iter().combinations(k) {
            let separated = (0..m.t()).any(|i| coalition.iter().all(|&b| m.get(i, b) != m.get(i, c)));
            if !separated {
                return Some((c, coalition));
            }
        }
    }
    None
}

/// First `(member, rest)` of a `k`-tuple in which the member has no row
/// holding a nonzero symbol absent from the rest of the tuple.
fn naive_selective_witness(m: &CodeMatrix, k: usize) -> Option<(usize, Vec<usize>)> {
    for tuple in (0..m.n()).combinations(k) {
        for &c in &tuple {
            let rest: Vec<usize> = tuple.iter().copied().filter(|&j| j != c).collect();
            let isolated = (0..m.t()).any(|i| {
                let s = m.get(i, c);
                s != 0 && rest.iter().all(|&b| m.get(i, b) != s)
            });
            if !isolated {
                return Some((c, rest));
            }
        }
    }
    None
}

fn covered(witness: Option<Witness>) -> Option<(usize, Vec<usize>)> {
    witness.map(|w| match w {
        Witness::Covered { column, coalition } => (column, coalition),
        other => panic!("unexpected witness {other:?}"),
    })
}

/// Smallest `t` with `(k+1) C(n+l, k) (1-p)^t <= 1`, by exact rational
/// arithmetic one `t` at a time.
fn naive_expurgation_length(q: u32, k: usize, n: usize) -> usize {
    let width = n + n / k;
    let binom = (0..k).fold(BigRational::one(), |acc, i| {
        acc * BigRational::new(BigInt::from(width - i), BigInt::from(i + 1))
    });
    let mut value = BigRational::from_integer(BigInt::from(k + 1)) * binom;
    let miss = BigRational::one() - p_qk_exact(q, k);
    let one = BigRational::one();
    let mut t = 0;
    while value > one {
        value *= &miss;
        t += 1;
    }
    t
}

fn matrix() -> impl Strategy<Value = CodeMatrix> {
    (2u32..=4, 1usize..=5, 2usize..=6).prop_flat_map(|(q, t, n)| {
        prop::collection::vec(0..q as Symbol, t * n)
            .prop_map(move |entries| CodeMatrix::from_entries(q, t, n, entries).unwrap())
    })
}

fn matrix_with_permutation() -> impl Strategy<Value = (CodeMatrix, Vec<usize>)> {
    matrix().prop_flat_map(|m| {
        let n = m.n();
        (Just(m), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

#[test]
fn expurgation_length_matches_exact_scan() {
    for q in 2..=5u32 {
        for k in 2..=4usize {
            for n in [k + 1, 6, 10, 17, 40] {
                assert_eq!(
                    expurgation_length(q, k, n).unwrap(),
                    naive_expurgation_length(q, k, n),
                    "q={q} k={k} n={n}"
                );
            }
        }
    }
}

#[test]
fn exact_probabilities() {
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    assert_eq!(p_qk_exact(3, 2), r(4, 9));
    assert_eq!(p_qk_exact(2, 2), r(2, 9));
    assert_eq!(p_qk_exact(2, 3), r(15, 128));
    assert!(p_qk_exact(7, 3) > BigRational::zero());
}

#[test]
fn lambda_matrix_is_not_complement_invariant() {
    let m = CodeMatrix::from_rows(2, &[[0, 0]]).unwrap();
    assert!(is_lambda_matrix(&m, 0, 0).passed);
    assert!(!is_lambda_matrix(&m.complement(), 0, 0).passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn frameproof_matches_naive_oracle(m in matrix(), k in 1usize..=5) {
        prop_assume!(k < m.n());
        let report = is_frameproof(&m, k).unwrap();
        prop_assert_eq!(covered(report.witness), naive_frameproof_witness(&m, k));
    }

    #[test]
    fn selective_matches_naive_oracle(m in matrix(), k in 1usize..=6) {
        prop_assume!(k <= m.n());
        let report = is_strongly_selective(&m, k).unwrap();
        prop_assert_eq!(covered(report.witness), naive_selective_witness(&m, k));
    }

    #[test]
    fn witnesses_revalidate(m in matrix(), k in 1usize..=5, lambda in 0usize..3, w in 0usize..4) {
        prop_assume!(k < m.n());
        let reports = [
            is_frameproof(&m, k).unwrap(),
            is_strongly_selective(&m, k).unwrap(),
            is_lambda_matrix(&m, lambda, w),
        ];
        for r in reports {
            prop_assert_eq!(r.passed, r.witness.is_none());
            if !r.passed {
                prop_assert!(witness_holds(&m, &r), "{}", r);
            }
        }
    }

    #[test]
    fn verdicts_ignore_column_order((m, perm) in matrix_with_permutation(), k in 1usize..=5) {
        prop_assume!(k < m.n());
        let p = m.select_columns(&perm).unwrap();
        prop_assert_eq!(is_frameproof(&m, k).unwrap().passed, is_frameproof(&p, k).unwrap().passed);
        prop_assert_eq!(
            is_strongly_selective(&m, k).unwrap().passed,
            is_strongly_selective(&p, k).unwrap().passed
        );
        prop_assert_eq!(is_lambda_matrix(&m, 1, 2).passed, is_lambda_matrix(&p, 1, 2).passed);
    }

    #[test]
    fn reductions_hold_on_arbitrary_codes(m in matrix(), k in 1usize..=4) {
        prop_assume!(k + 1 < m.n());
        prop_assert!(check_reduction_ss_to_fp(&m, k).unwrap());
        prop_assert!(check_reduction_fp_to_ss(&m, k).unwrap());
        prop_assert!(check_binary_expansion(&m, k).unwrap());
    }

    #[test]
    fn complement_is_an_involution(m in matrix()) {
        prop_assert_eq!(m.complement().complement(), m);
    }

    #[test]
    fn binary_expansion_shape(m in matrix()) {
        let b = m.binary_expand();
        prop_assert_eq!(b.q(), 2);
        prop_assert_eq!(b.t(), m.q() as usize * m.t());
        prop_assert_eq!(b.n(), m.n());
        prop_assert_eq!(b.weight_profile().constant(), Some(m.t()));
    }

    #[test]
    fn codec_round_trip(m in matrix()) {
        prop_assert_eq!(read_code(&write_code(&m)).unwrap(), m);
    }

    #[test]
    fn satisfiability_is_monotone_in_length(k in 2usize..=4, q in 2u32..=5, n in 3usize..=200, extra in 0usize..200) {
        let base = ConstructionParams::derive::<f64>(k, q, n, 0).unwrap();
        prop_assert!(lll_satisfiability_check::<f64>(&base));
        let mut shorter = base;
        let mut longer = base;
        longer.t += extra;
        prop_assert!(lll_satisfiability_check::<f64>(&longer));
        shorter.t = base.t.saturating_sub(extra).max(base.w);
        if lll_satisfiability_check::<f64>(&shorter) {
            for t in shorter.t..=base.t {
                let mut p = base;
                p.t = t;
                prop_assert!(lll_satisfiability_check::<f64>(&p));
            }
        }
    }

    #[test]
    fn expurgation_length_is_monotone_in_n(q in 2u32..=6, k in 2usize..=4, n in 5usize..=300) {
        prop_assert!(expurgation_length(q, k, n).unwrap() <= expurgation_length(q, k, n + 1).unwrap());
    }
}
