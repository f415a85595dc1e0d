//! Closed-form length bounds for frameproof and strongly selective codes,
//! and the numeric comparisons between them.
//!
//! Real-valued bounds are generic over [`Real`]; the comparison predicates
//! that reduce to inequalities between rationals are decided exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::expurgate::{corollary_length, expurgation_length, p_qk};
use crate::lll::{derive_lambda, derive_length, derive_weight};
use crate::real::{ceil_to_u64, inv_factorial, Real};

fn ln_2en<F: Real>(n: usize) -> F {
    (F::of(2.0) * F::E() * F::of_u64(n as u64)).ln()
}

/// Order-level reference `k^2 / v * ln(n/k)` for strongly selective codes,
/// `v = q - 1` when `q <= k` and `v = k` otherwise. No constant is known, so
/// this is never compared against other bounds.
pub fn debonis_order<F: Real>(q: u32, k: usize, n: usize) -> F {
    let v = if q as usize <= k { u64::from(q) - 1 } else { k as u64 };
    let kf = F::of_u64(k as u64);
    kf * kf / F::of_u64(v) * (F::of_u64(n as u64) / kf).ln()
}

/// Length achieved by the resampling construction for a `(k, w, n)`-strongly
/// selective code with `w = ceil(1 + (k-1) ln(2en))`:
/// `1 + max{2w - (w-1)/(k-1), (w-1)/(2(k-1)) + e w (k-1) / ((q-1)(w-1)) (w - (w-1)/(2(k-1)) + 1/2) (e(2n-4))^((k-1)/(w-1))}`.
pub fn weighted_selective_bound<F: Real>(q: u32, k: usize, n: usize) -> Result<F> {
    if n < 3 {
        return Err(Error::Applicability(format!("needs n >= 3, got {n}")));
    }
    let w = derive_weight::<F>(k, n)?;
    if w < 2 {
        return Err(Error::Applicability(format!("needs w >= 2, got {w}")));
    }
    let e = F::E();
    let one = F::one();
    let two = F::of(2.0);
    let wf = F::of_u64(w as u64);
    let k1 = F::of_u64(k as u64 - 1);
    let ratio = (wf - one) / k1;
    let structural = two * wf - ratio;
    let lll = ratio / two
        + e * wf * k1 / (F::of_u64(u64::from(q) - 1) * (wf - one))
            * (wf - ratio / two + one / two)
            * (e * F::of_u64(2 * n as u64 - 4)).powf(k1 / (wf - one));
    Ok(one + structural.max(lll))
}

/// `max{2(k-1) ln(2en) - ln n, ln(n)/2 + e^2 (k-1)^2/(q-1) ln(2en) + 7 e^2 (k-1) / (2(q-1))}`,
/// the strongly selective length for the optimised weight without its
/// additive constant.
pub fn selective_bound<F: Real>(q: u32, k: usize, n: usize) -> F {
    lll_shape::<F>(q, k as u64 - 1, n)
}

/// [`selective_bound`] for selectivity `k + 1`: the frameproof length of the
/// resampling construction, without its additive constant.
pub fn frameproof_lll_bound<F: Real>(q: u32, k: usize, n: usize) -> F {
    lll_shape::<F>(q, k as u64, n)
}

fn lll_shape<F: Real>(q: u32, m: u64, n: usize) -> F {
    let e2 = F::E() * F::E();
    let mf = F::of_u64(m);
    let l = ln_2en::<F>(n);
    let ln_n = F::of_u64(n as u64).ln();
    let qm1 = F::of_u64(u64::from(q) - 1);
    let first = F::of(2.0) * mf * l - ln_n;
    let second = ln_n / F::of(2.0) + e2 * mf * mf / qm1 * l + F::of(7.0) * e2 * mf / (F::of(2.0) * qm1);
    first.max(second)
}

/// `(15 + sqrt(33)) / 24`.
pub fn binary_selective_constant<F: Real>() -> F {
    (F::of(15.0) + F::of(33.0).sqrt()) / F::of(24.0)
}

/// The range `(ceil(n/(q-1)), ceil(min{n, (15+sqrt 33)/24 k^2} / q))` that
/// contains the minimum frameproof length: the diagonal construction above,
/// the binary strongly selective lower bound (through binary expansion)
/// below.
pub fn frameproof_length_range<F: Real>(q: u32, k: usize, n: usize) -> (u64, u64) {
    let upper = (n as u64).div_ceil(u64::from(q) - 1);
    let kf = F::of_u64(k as u64);
    let inner = F::of_u64(n as u64).min(binary_selective_constant::<F>() * kf * kf);
    let lower = ceil_to_u64(inner / F::of_u64(u64::from(q))).unwrap_or(u64::MAX);
    (upper, lower)
}

/// `-k ln(n k!/(k!-1)) / ln(1 - (1 - 1/q)^k)`, with
/// `ln(k!/(k!-1)) = -ln(1 - 1/k!)` evaluated through `ln_1p`.
pub fn stinson_bound<F: Real>(q: u32, k: usize, n: usize) -> F {
    let kf = F::of_u64(k as u64);
    let log_ratio = -(-inv_factorial::<F>(k as u64)).ln_1p();
    let numerator = -kf * (F::of_u64(n as u64).ln() + log_ratio);
    let denominator = (-(F::one() - F::one() / F::of_u64(u64::from(q))).powi(k as i32)).ln_1p();
    numerator / denominator
}

/// `ln[1 - (1 - (q-1)/(k+1)) ((q-1)/(k+1))^k - ((q-1)/(k+1)) (1 - 1/(k+1))^k]`.
pub fn shangguan_denominator<F: Real>(q: u32, k: usize) -> F {
    let one = F::one();
    let a = F::of_u64(u64::from(q) - 1) / F::of_u64(k as u64 + 1);
    let kk = k as i32;
    (-(one - a) * a.powi(kk) - a * (one - one / F::of_u64(k as u64 + 1)).powi(kk)).ln_1p()
}

/// `(-k ln n - (k+1) ln 2) / shangguan_denominator`, valid for `q <= k`.
pub fn shangguan_bound<F: Real>(q: u32, k: usize, n: usize) -> Result<F> {
    if q as usize > k {
        return Err(Error::Applicability(format!("needs q <= k, got q={q}, k={k}")));
    }
    let kf = F::of_u64(k as u64);
    let numerator = -kf * F::of_u64(n as u64).ln() - (kf + F::one()) * F::LN_2();
    Ok(numerator / shangguan_denominator::<F>(q, k))
}

/// Whether the expurgation bound beats the Stinson bound (regime `q > k`).
pub fn improves_on_stinson<F: Real>(q: u32, k: usize, n: usize) -> Result<bool> {
    if q as usize <= k {
        return Err(Error::Applicability(format!("needs q > k, got q={q}, k={k}")));
    }
    Ok(corollary_length::<F>(q, k, n) < stinson_bound::<F>(q, k, n))
}

/// Whether the expurgation bound beats the Shangguan bound (regime `q <= k`).
pub fn improves_on_shangguan<F: Real>(q: u32, k: usize, n: usize) -> Result<bool> {
    Ok(corollary_length::<F>(q, k, n) < shangguan_bound::<F>(q, k, n)?)
}

fn factorial_big(k: usize) -> BigInt {
    (2..=k as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `((k+1)/k)^k (k+1)/k!`, exactly.
pub fn expurgation_gap_lhs(k: usize) -> BigRational {
    let base = BigRational::new(BigInt::from(k + 1), BigInt::from(k));
    num_traits::pow(base, k) * BigRational::new(BigInt::from(k + 1), factorial_big(k))
}

/// `((k+1)/k)^k (k+1)/k! < (k!/(k!-1))^k`, decided exactly. Equivalent to
/// the expurgation bound beating the Stinson bound when `q > k`.
pub fn stinson_gap_holds(k: usize) -> bool {
    let f = factorial_big(k);
    let rhs = num_traits::pow(BigRational::new(f.clone(), f - 1), k);
    expurgation_gap_lhs(k) < rhs
}

/// `((k+1)/k)^k (k+1)/k! < 2^(k+1)`, decided exactly. Equivalent to the
/// expurgation bound beating the Shangguan bound when `q <= k`.
pub fn shangguan_gap_holds(k: usize) -> bool {
    let rhs = BigRational::from_integer(num_traits::pow(BigInt::from(2), k + 1));
    expurgation_gap_lhs(k) < rhs
}

/// `(e/k)^k (k+1) < 1`, the sufficient condition for
/// [`stinson_gap_holds`] that applies from `k = 5` on.
pub fn stinson_sufficient_condition<F: Real>(k: usize) -> bool {
    let kf = F::of_u64(k as u64);
    (F::E() / kf).powi(k as i32) * (kf + F::one()) < F::one()
}

/// A single bound entry's value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundValue<F> {
    Real(F),
    Integer(u64),
    Flag(bool),
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEntry<F> {
    pub value: BoundValue<F>,
    /// The bound holds only up to an unspecified additive constant or order.
    pub constant_free: bool,
}

impl<F: Real> BoundEntry<F> {
    fn real(x: F) -> Self {
        Self { value: BoundValue::Real(x), constant_free: false }
    }

    fn order(x: F) -> Self {
        Self { value: BoundValue::Real(x), constant_free: true }
    }

    fn integer(x: u64) -> Self {
        Self { value: BoundValue::Integer(x), constant_free: false }
    }

    fn from_result<T>(r: Result<T>, f: impl FnOnce(T) -> Self) -> Self {
        r.map(f).unwrap_or(Self { value: BoundValue::Inapplicable, constant_free: false })
    }

    /// Numeric value for comparisons (`None` for flags and inapplicable
    /// entries).
    pub fn as_f64(&self) -> Option<f64> {
        match self.value {
            BoundValue::Real(x) => x.to_f64(),
            BoundValue::Integer(x) => Some(x as f64),
            _ => None,
        }
    }
}

/// Report identifiers, in serialization order.
pub const SS_DEBONIS_ORDER: &str = "ss_debonis_order";
pub const LLL_LAMBDA_LENGTH: &str = "lll_lambda_length";
pub const SS_THEOREM35: &str = "ss_theorem35";
pub const SS_COROLLARY37: &str = "ss_corollary37";
pub const FP_THEOREM38: &str = "fp_theorem38";
pub const FP_UPPER_DIAG: &str = "fp_upper_diag";
pub const FP_LOWER_SHANN: &str = "fp_lower_shann";
pub const STINSON_41: &str = "stinson_41";
pub const SHANGGUAN_42: &str = "shangguan_42";
pub const EXPURGATION_43: &str = "expurgation_43";
pub const EXPURGATION_COR44: &str = "expurgation_cor44";
pub const COMPARE_45: &str = "compare_45";
pub const COMPARE_46: &str = "compare_46";

/// Upper bounds on the length of some code family, excluding order-level
/// references.
pub const UPPER_BOUNDS: &[&str] = &[
    LLL_LAMBDA_LENGTH,
    SS_THEOREM35,
    SS_COROLLARY37,
    FP_THEOREM38,
    FP_UPPER_DIAG,
    STINSON_41,
    SHANGGUAN_42,
    EXPURGATION_43,
    EXPURGATION_COR44,
];

/// Every evaluated bound for one `(q, k, n)`. Strongly selective entries
/// (`ss_*`, `lll_lambda_length`) are for selectivity `k`; the others are
/// frameproof bounds for coalitions of size `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<F> {
    pub q: u32,
    pub k: usize,
    pub n: usize,
    pub entries: BTreeMap<&'static str, BoundEntry<F>>,
}

pub fn bound_report<F: Real>(q: u32, k: usize, n: usize) -> Result<BoundReport<F>> {
    crate::code::check_alphabet(q)?;
    if k < 2 || n <= k {
        return Err(Error::Parameter(format!("report needs k >= 2 and n > k, got k={k}, n={n}")));
    }
    let mut entries = BTreeMap::new();
    entries.insert(SS_DEBONIS_ORDER, BoundEntry::order(debonis_order::<F>(q, k, n)));
    let lll_length = (|| -> Result<usize> {
        if n < 3 {
            return Err(Error::Applicability("needs n >= 3".into()));
        }
        let w = derive_weight::<F>(k, n)?;
        derive_length::<F>(derive_lambda(w, k)?, w, n, q)
    })();
    entries.insert(LLL_LAMBDA_LENGTH, BoundEntry::from_result(lll_length, |t| BoundEntry::integer(t as u64)));
    entries.insert(SS_THEOREM35, BoundEntry::from_result(weighted_selective_bound::<F>(q, k, n), BoundEntry::real));
    entries.insert(SS_COROLLARY37, BoundEntry::order(selective_bound::<F>(q, k, n)));
    entries.insert(FP_THEOREM38, BoundEntry::order(frameproof_lll_bound::<F>(q, k, n)));
    let (upper, lower) = frameproof_length_range::<F>(q, k, n);
    entries.insert(FP_UPPER_DIAG, BoundEntry::integer(upper));
    entries.insert(FP_LOWER_SHANN, BoundEntry::integer(lower));
    entries.insert(STINSON_41, BoundEntry::real(stinson_bound::<F>(q, k, n)));
    entries.insert(SHANGGUAN_42, BoundEntry::from_result(shangguan_bound::<F>(q, k, n), BoundEntry::real));
    entries.insert(
        EXPURGATION_43,
        BoundEntry::from_result(expurgation_length(q, k, n), |t| BoundEntry::integer(t as u64)),
    );
    entries.insert(EXPURGATION_COR44, BoundEntry::real(corollary_length::<F>(q, k, n)));
    let flag = |b: bool| BoundEntry { value: BoundValue::Flag(b), constant_free: false };
    entries.insert(COMPARE_45, BoundEntry::from_result(improves_on_stinson::<F>(q, k, n), flag));
    entries.insert(COMPARE_46, BoundEntry::from_result(improves_on_shangguan::<F>(q, k, n), flag));
    Ok(BoundReport { q, k, n, entries })
}

impl<F: Real> BoundReport<F> {
    pub fn get(&self, id: &str) -> Option<&BoundEntry<F>> {
        self.entries.get(id)
    }

    pub fn value(&self, id: &str) -> Option<f64> {
        self.get(id).and_then(BoundEntry::as_f64)
    }

    /// One `key value` line per field, keys sorted alphabetically. Reals use
    /// six significant digits (or their ceiling when `ceil` is set),
    /// inapplicable entries print `inapplicable`, and entries known only up
    /// to a constant carry a trailing `constant-free`.
    pub fn render(&self, ceil: bool) -> String {
        let mut fields: BTreeMap<&str, String> = BTreeMap::new();
        fields.insert("q", self.q.to_string());
        fields.insert("k", self.k.to_string());
        fields.insert("n", self.n.to_string());
        for (key, entry) in &self.entries {
            let mut text = match entry.value {
                BoundValue::Real(x) if ceil => ceil_to_u64(x).map_or_else(|| "inf".to_string(), |v| v.to_string()),
                BoundValue::Real(x) => format_significant(x.to_f64().unwrap_or(f64::NAN), 6),
                BoundValue::Integer(v) => v.to_string(),
                BoundValue::Flag(b) => b.to_string(),
                BoundValue::Inapplicable => "inapplicable".to_string(),
            };
            if entry.constant_free {
                text.push_str(" constant-free");
            }
            fields.insert(key, text);
        }
        let mut out = String::new();
        for (key, text) in fields {
            let _ = writeln!(out, "{key} {text}");
        }
        out
    }
}

/// `%g`-style formatting with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Common denominator of the expurgation and Shangguan bounds when `q <= k`.
pub fn expurgation_denominator<F: Real>(q: u32, k: usize) -> F {
    (-p_qk::<F>(q, k)).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn formatting() {
        assert_eq!(format_significant(44.92293574580164, 6), "44.9229");
        assert_eq!(format_significant(10.0, 6), "10");
        assert_eq!(format_significant(999999.7, 6), "1e+06");
        assert_eq!(format_significant(0.000123456789, 6), "0.000123457");
        assert_eq!(format_significant(1.5e-7, 6), "1.5e-07");
        assert_eq!(format_significant(-2.5, 6), "-2.5");
    }

    #[test]
    fn stinson_values() {
        assert!(close(stinson_bound::<f64>(4, 2, 100), 12.818325134854443, 1e-12));
        assert!(close(stinson_bound::<f64>(2, 2, 100), 36.83453279791079, 1e-12));
        assert!(stinson_bound::<f64>(3, 200, 1000).is_finite());
    }

    #[test]
    fn shangguan_values() {
        assert!(close(shangguan_bound::<f64>(2, 2, 100).unwrap(), 44.922935745801642, 1e-12));
        assert!(close(shangguan_bound::<f64>(2, 3, 100).unwrap(), 133.085477042901, 1e-12));
        assert!(matches!(shangguan_bound::<f64>(4, 3, 100), Err(Error::Applicability(_))));
    }

    #[test]
    fn range_values() {
        assert_eq!(frameproof_length_range::<f64>(2, 2, 100), (100, 2));
        assert_eq!(frameproof_length_range::<f64>(2, 20, 100), (100, 50));
        assert!(close(binary_selective_constant::<f64>(), 0.8643567769390845, 1e-14));
    }

    #[test]
    fn exact_gap_predicates() {
        // 27/8 < 8 and 27/8 < 4
        assert_eq!(expurgation_gap_lhs(2), BigRational::new(BigInt::from(27), BigInt::from(8)));
        assert!(shangguan_gap_holds(2));
        assert!(stinson_gap_holds(2));
        for k in 2..=50 {
            assert!(stinson_gap_holds(k), "k={k}");
            assert!(shangguan_gap_holds(k), "k={k}");
        }
    }

    #[test]
    fn regime_errors() {
        assert!(improves_on_stinson::<f64>(2, 2, 100).is_err());
        assert!(improves_on_shangguan::<f64>(3, 2, 100).is_err());
        assert!(improves_on_shangguan::<f64>(2, 2, 100).unwrap());
    }

    #[test]
    fn report_rendering() {
        let r = bound_report::<f64>(2, 2, 100).unwrap();
        let text = r.render(false);
        assert!(text.contains("shangguan_42 44.9229\n"), "{text}");
        assert!(text.contains("expurgation_cor44 41.4888\n"), "{text}");
        assert!(text.contains("compare_45 inapplicable\n"));
        assert!(text.contains("compare_46 true\n"));
        let keys: Vec<&str> = text.lines().map(|l| l.split(' ').next().unwrap()).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        assert_eq!(keys.len(), 16);

        let ceiled = r.render(true);
        assert!(ceiled.contains("shangguan_42 45\n"), "{ceiled}");
        assert!(bound_report::<f64>(2, 2, 2).is_err());
    }

    #[test]
    fn f32_tracks_f64() {
        for (q, k, n) in [(2, 2, 100), (5, 3, 1000), (3, 4, 50)] {
            let a = frameproof_lll_bound::<f64>(q, k, n);
            let b = f64::from(frameproof_lll_bound::<f32>(q, k, n));
            assert!(close(a, b, 1e-5));
            let a = corollary_length::<f64>(q, k, n);
            let b = f64::from(corollary_length::<f32>(q, k, n));
            assert!(close(a, b, 1e-4));
        }
    }
}
