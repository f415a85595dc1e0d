//! Frameproof codes by expurgation: draw a random code with `ell = floor(n/k)`
//! surplus columns, find every column covered coordinate-wise by some `k`
//! others, and delete the covered columns.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::{check_alphabet, CodeMatrix, Symbol};
use crate::error::{param, Error, Result};
use crate::real::{ceil_to_u64, ln_factorial, Real};
use crate::verify::{binomial_u128, for_each_covered};

/// Upper limit on `(n + ell) * C(n + ell - 1, k)` bad events enumerated per draw.
pub const EVENT_LIMIT: u128 = 100_000_000;

/// Consecutive redraws attempted before giving up.
pub const MAX_DRAWS: u64 = 50;

fn check_qk(q: u32, k: usize) -> Result<()> {
    check_alphabet(q)?;
    if k < 2 {
        return param(format!("k = {k} must be at least 2"));
    }
    Ok(())
}

/// Probability that a single row separates a column from `k` others under
/// the symbol distribution of [`symbol_distribution`]:
/// `(1 - 1/q)^k` for `q > k`, otherwise
/// `(1 - (q-1)/(k+1)) ((q-1)/(k+1))^k + ((q-1)/(k+1)) (1 - 1/(k+1))^k`.
pub fn p_qk<F: Real>(q: u32, k: usize) -> F {
    let kk = k as i32;
    let one = F::one();
    if q as usize > k {
        (one - one / F::of_u64(u64::from(q))).powi(kk)
    } else {
        let a = F::of_u64(u64::from(q) - 1) / F::of_u64(k as u64 + 1);
        (one - a) * a.powi(kk) + a * (one - one / F::of_u64(k as u64 + 1)).powi(kk)
    }
}

/// [`p_qk`] in exact rational arithmetic.
pub fn p_qk_exact(q: u32, k: usize) -> BigRational {
    let one = BigRational::one();
    let ratio = |a: u64, b: u64| BigRational::new(BigInt::from(a), BigInt::from(b));
    if q as usize > k {
        num_traits::pow(&one - ratio(1, u64::from(q)), k)
    } else {
        let a = ratio(u64::from(q) - 1, k as u64 + 1);
        let b = &one - ratio(1, k as u64 + 1);
        (&one - &a) * num_traits::pow(a.clone(), k) + a * num_traits::pow(b, k)
    }
}

/// Symbol distribution: uniform for `q > k`, otherwise `1/(k+1)` on each
/// nonzero symbol and the remaining mass on 0.
pub fn symbol_distribution(q: u32, k: usize) -> Vec<f64> {
    if q as usize > k {
        vec![1.0 / f64::from(q); q as usize]
    } else {
        let each = 1.0 / (k as f64 + 1.0);
        let mut mu = vec![each; q as usize];
        mu[0] = 1.0 - f64::from(q - 1) * each;
        mu
    }
}

/// Surplus column count `floor(n / k)`.
pub fn surplus(n: usize, k: usize) -> usize {
    n / k
}

fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// Exact test of `(k+1) C(n + ell, k) (1 - p_{q,k})^t <= 1`.
fn length_holds(count: &BigUint, survive_num: &BigUint, survive_den: &BigUint, t: u64) -> bool {
    let t = t as u32;
    count * survive_num.pow(t) <= survive_den.pow(t)
}

/// Smallest `t` with `(k+1) C(n + ell, k) (1 - p_{q,k})^t <= 1`, where the
/// upper binomial argument `n(1 + 1/k)` is taken as `n + floor(n/k)`.
pub fn expurgation_length(q: u32, k: usize, n: usize) -> Result<usize> {
    check_qk(q, k)?;
    if n < k {
        return param(format!("expurgation needs n >= k, got n={n}, k={k}"));
    }
    let p = p_qk_exact(q, k);
    if p <= BigRational::zero() || p >= BigRational::one() {
        return param(format!("p_(q,k) = {p} outside (0, 1)"));
    }
    let survive = BigRational::one() - p;
    let (num, den) = (
        survive.numer().to_biguint().expect("positive"),
        survive.denom().to_biguint().expect("positive"),
    );
    let width = (n + surplus(n, k)) as u64;
    let count = BigUint::from(k as u64 + 1) * binomial_big(width, k as u64);

    let log_count = (k as f64 + 1.0).ln() + ln_binomial::<f64>(width, k as u64);
    let rate = -(-p_qk::<f64>(q, k)).ln_1p();
    let mut t = ceil_to_u64(log_count / rate).ok_or_else(|| Error::Parameter("length estimate overflows".into()))?;
    while t > 0 && length_holds(&count, &num, &den, t - 1) {
        t -= 1;
    }
    while !length_holds(&count, &num, &den, t) {
        t += 1;
    }
    Ok(t as usize)
}

fn ln_binomial<F: Real>(n: u64, k: u64) -> F {
    (0..k).fold(F::zero(), |acc, i| acc + F::of_u64(n - i).ln()) - ln_factorial::<F>(k)
}

/// Closed-form relaxation of [`expurgation_length`]:
/// `(-k ln(n (k+1)/k) - ln((k+1)/k!)) / ln(1 - p_{q,k})`, unrounded.
pub fn corollary_length<F: Real>(q: u32, k: usize, n: usize) -> F {
    let kf = F::of_u64(k as u64);
    let k1 = kf + F::one();
    let numerator = -kf * (F::of_u64(n as u64) * k1 / kf).ln() - (k1.ln() - ln_factorial::<F>(k as u64));
    numerator / (-p_qk::<F>(q, k)).ln_1p()
}

/// Upper bound on the expected number of bad events at length `t`:
/// `(n + ell) C(n + ell - 1, k) (1 - p_{q,k})^t`.
pub fn expected_bad_events(q: u32, k: usize, n: usize, t: usize) -> f64 {
    let width = (n + surplus(n, k)) as u64;
    let log_events = (width as f64).ln() + ln_binomial::<f64>(width - 1, k as u64);
    (log_events + t as f64 * (-p_qk::<f64>(q, k)).ln_1p()).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpurgationParams {
    pub k: usize,
    pub q: u32,
    pub n: usize,
    pub ell: usize,
    pub t: usize,
    pub mu: Vec<f64>,
    pub seed: u64,
}

impl ExpurgationParams {
    pub fn derive(q: u32, k: usize, n: usize, seed: u64) -> Result<Self> {
        Ok(Self {
            k,
            q,
            n,
            ell: surplus(n, k),
            t: expurgation_length(q, k, n)?,
            mu: symbol_distribution(q, k),
            seed,
        })
    }

    /// Columns in the random draw, `n + ell`.
    pub fn width(&self) -> usize {
        self.n + self.ell
    }

    /// Bad events per draw, `(n + ell) C(n + ell - 1, k)`.
    pub fn event_count(&self) -> u128 {
        let w = self.width() as u64;
        (w as u128).saturating_mul(binomial_u128(w - 1, self.k as u64))
    }
}

/// Draws a `t x (n + ell)` matrix with i.i.d. entries from `mu` by inverse
/// CDF over symbols `0..q` in order, filling rows in order.
pub fn draw_matrix<R: Rng + ?Sized>(params: &ExpurgationParams, rng: &mut R) -> Result<CodeMatrix> {
    let mut cumulative = Vec::with_capacity(params.mu.len());
    let mut acc = 0.0;
    for &m in &params.mu {
        acc += m;
        cumulative.push(acc);
    }
    let last = params.mu.len() - 1;
    let entries: Vec<Symbol> = (0..params.t * params.width())
        .map(|_| {
            let u: f64 = rng.gen();
            cumulative.iter().position(|&c| u < c).unwrap_or(last) as Symbol
        })
        .collect();
    CodeMatrix::from_entries(params.q, params.t, params.width(), entries)
}

/// Bad events `(i, B)` of `m`: column `i` and `k` other columns `B` such
/// that in every row some column of `B` holds the symbol of column `i`.
/// Enumeration stops once more than `limit` events are found.
pub fn bad_events(m: &CodeMatrix, k: usize, limit: usize) -> Vec<(usize, Vec<usize>)> {
    let mut found = Vec::new();
    if k >= m.n() {
        return found;
    }
    for_each_covered(m, k, |i, coalition| {
        found.push((i, coalition.to_vec()));
        found.len() <= limit
    });
    found
}

#[derive(Debug, Clone)]
pub struct ExpurgatedCode {
    pub code: CodeMatrix,
    pub params: ExpurgationParams,
    /// Columns of the accepted draw that were deleted (sorted).
    pub deleted: Vec<usize>,
    /// Bad events found in the accepted draw.
    pub bad_events: usize,
    /// Draws rejected for having more than `ell` bad events.
    pub redraws: u64,
}

/// A `k`-frameproof code with `n` codewords and length
/// [`expurgation_length`]. Draw `r` uses seed `seed + r`.
pub fn build_expurgated(q: u32, k: usize, n: usize, seed: u64) -> Result<ExpurgatedCode> {
    check_qk(q, k)?;
    if n < k {
        return param(format!("expurgation needs n >= k, got n={n}, k={k}"));
    }
    let params = ExpurgationParams::derive(q, k, n, seed)?;
    let events = params.event_count();
    if events > EVENT_LIMIT {
        return Err(Error::Capacity {
            needed: events,
            limit: EVENT_LIMIT,
        });
    }

    for attempt in 0..MAX_DRAWS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let draw = draw_matrix(&params, &mut rng)?;
        let bad = bad_events(&draw, k, params.ell);
        if bad.len() > params.ell {
            continue;
        }
        let mut deleted: Vec<usize> = bad.iter().map(|(i, _)| *i).collect();
        deleted.sort_unstable();
        deleted.dedup();
        let keep: Vec<usize> = (0..params.width())
            .filter(|c| deleted.binary_search(c).is_err())
            .take(n)
            .collect();
        debug_assert_eq!(keep.len(), n);
        return Ok(ExpurgatedCode {
            code: draw.select_columns(&keep)?,
            params,
            deleted,
            bad_events: bad.len(),
            redraws: attempt,
        });
    }
    Err(Error::Construction(format!(
        "{MAX_DRAWS} consecutive draws had more than {} bad events (q={q}, k={k}, n={n}, seed={seed})",
        params.ell
    )))
}
