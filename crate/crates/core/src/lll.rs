//! Constant-weight codes with bounded pairwise agreement, built by
//! Moser-Tardos style resampling.
//!
//! A `(lambda, w, n)`-matrix has every column of weight `w` and lets any two
//! columns share a nonzero symbol in at most `lambda` rows. With
//! `lambda = floor((w-1)/(k-1))` such a matrix is a `k`-strongly selective
//! code, and a `(k+1)`-strongly selective code is `k`-frameproof. The bad
//! events are the column pairs exceeding `lambda` agreements; each depends on
//! at most `2n - 4` others, which fixes the length needed for the local lemma
//! condition `e * P * D <= 1`.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::code::{check_alphabet, CodeMatrix, Symbol};
use crate::error::{param, Error, Result};
use crate::real::{ceil_to_u64, Real};
use crate::rng::StreamSet;

/// Resample budget multiplier over `max(n, m/D)`.
pub const BUDGET_FACTOR: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionParams {
    /// Selectivity the parameters were derived for.
    pub k: usize,
    pub q: u32,
    pub n: usize,
    /// Column weight.
    pub w: usize,
    /// Maximum number of rows in which two columns may share a nonzero symbol.
    pub lambda: usize,
    pub t: usize,
    pub seed: u64,
}

impl ConstructionParams {
    /// Weight, agreement bound and length for a `k`-strongly selective code
    /// with `n` codewords over `q` symbols.
    pub fn derive<F: Real>(k: usize, q: u32, n: usize, seed: u64) -> Result<Self> {
        if n < 3 {
            return param(format!("resampling construction needs n >= 3, got {n}"));
        }
        check_alphabet(q)?;
        let w = derive_weight::<F>(k, n)?;
        let lambda = derive_lambda(w, k)?;
        let t = derive_length::<F>(lambda, w, n, q)?;
        let p = Self { k, q, n, w, lambda, t, seed };
        p.validate()?;
        Ok(p)
    }

    /// Checks the structural invariants `lambda < w <= t` and
    /// `t >= 2w - (lambda + 1)`.
    pub fn validate(&self) -> Result<()> {
        check_alphabet(self.q)?;
        if self.k < 2 {
            return param(format!("k = {} must be at least 2", self.k));
        }
        if self.w == 0 || self.lambda >= self.w || self.w > self.t {
            return param(format!(
                "need 0 <= lambda < w <= t, got lambda={}, w={}, t={}",
                self.lambda, self.w, self.t
            ));
        }
        if self.t + self.lambda + 1 < 2 * self.w {
            return param(format!(
                "t = {} below 2w - (lambda + 1) = {}",
                self.t,
                2 * self.w - self.lambda - 1
            ));
        }
        Ok(())
    }

    /// Number of bad events `m = n(n-1)/2`.
    pub fn event_count(&self) -> u64 {
        let n = self.n as u64;
        n * n.saturating_sub(1) / 2
    }

    /// Dependency degree `D = 2n - 4`.
    pub fn dependency_degree(&self) -> i64 {
        2 * self.n as i64 - 4
    }

    /// `m / D`, the bound on the expected number of resamplings.
    pub fn expected_resamples(&self) -> Option<f64> {
        let d = self.dependency_degree();
        (d > 0).then(|| self.event_count() as f64 / d as f64)
    }

    /// Resamples allowed before giving up: `100 * max(n, m/D)`.
    pub fn resample_budget(&self) -> u64 {
        let base = self
            .expected_resamples()
            .map_or(self.n as u64, |r| (self.n as f64).max(r).ceil() as u64);
        BUDGET_FACTOR * base.max(1)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResampleLog {
    /// Bad events resampled (each resamples two columns).
    pub total_resamples: u64,
    /// Scans performed: the initial full scan plus one incremental rescan per
    /// resampling.
    pub rounds: u64,
    /// `(round, violated pairs after that round)`.
    pub violated_pairs_history: Vec<(u64, usize)>,
}

/// `floor((w - 1) / (k - 1))`.
pub fn derive_lambda(w: usize, k: usize) -> Result<usize> {
    if k < 2 {
        return param(format!("k = {k} must be at least 2"));
    }
    if w == 0 {
        return param("w must be at least 1");
    }
    Ok((w - 1) / (k - 1))
}

/// `ceil(1 + (k - 1) ln(2en))`.
pub fn derive_weight<F: Real>(k: usize, n: usize) -> Result<usize> {
    if k < 2 || n <= k {
        return param(format!("weight needs k >= 2 and n > k, got k={k}, n={n}"));
    }
    let two_e_n = F::of(2.0) * F::E() * F::of_u64(n as u64);
    let value = F::one() + F::of_u64(k as u64 - 1) * two_e_n.ln();
    ceil_to_u64(value)
        .map(|w| w as usize)
        .ok_or_else(|| Error::Parameter(format!("weight for k={k}, n={n} overflows")))
}

/// The two real-valued terms whose ceilings give the length of a
/// `(lambda, w, n)`-matrix: the structural minimum `2w - (lambda + 1)` and
/// the local lemma term
/// `lambda/2 + (e w / (lambda+1)) (w - lambda/2) (e(2n-4))^(1/(lambda+1)) / (q-1)`.
pub fn length_terms<F: Real>(lambda: usize, w: usize, n: usize, q: u32) -> Result<(F, F)> {
    if n < 3 {
        return param(format!("length formula needs n >= 3 (2n - 4 > 0), got n={n}"));
    }
    if q < 2 {
        return param(format!("q = {q} must be at least 2"));
    }
    if lambda >= w {
        return param(format!("need lambda < w, got lambda={lambda}, w={w}"));
    }
    let e = F::E();
    let two = F::of(2.0);
    let lam = F::of_u64(lambda as u64);
    let lam1 = lam + F::one();
    let wf = F::of_u64(w as u64);
    let d = F::of_u64(2 * n as u64 - 4);

    let structural = two * wf - lam1;
    let lll = lam / two
        + (e * wf / lam1) * (wf - lam / two) * (e * d).powf(F::one() / lam1) / F::of_u64(u64::from(q) - 1);
    Ok((structural, lll))
}

/// Length of a `(lambda, w, n)`-matrix guaranteed by the local lemma.
pub fn derive_length<F: Real>(lambda: usize, w: usize, n: usize, q: u32) -> Result<usize> {
    let (a, b) = length_terms::<F>(lambda, w, n, q)?;
    let ceil = |x: F| {
        ceil_to_u64(x).ok_or_else(|| Error::Parameter(format!("length term {x} is not representable")))
    };
    Ok(ceil(a)?.max(ceil(b)?) as usize)
}

/// Natural log of `e * P * D`, with `P` the per-pair bad event bound
/// `(ew/(lambda+1))^(lambda+1) ((w - lambda/2)/(t - lambda/2))^(lambda+1) / (q-1)^(lambda+1)`.
/// `None` when `D <= 0` (no dependencies; the condition holds trivially).
pub fn lll_log_epd<F: Real>(p: &ConstructionParams) -> Option<F> {
    let d = p.dependency_degree();
    if d <= 0 {
        return None;
    }
    let two = F::of(2.0);
    let lam = F::of_u64(p.lambda as u64);
    let lam1 = lam + F::one();
    let w = F::of_u64(p.w as u64);
    let t = F::of_u64(p.t as u64);
    let half = lam / two;
    if t <= half {
        return Some(F::infinity());
    }
    let per_factor = (F::E() * w / lam1).ln() + ((w - half) / (t - half)).ln()
        - F::of_u64(u64::from(p.q) - 1).ln();
    Some(F::one() + F::of_u64(d as u64).ln() + lam1 * per_factor)
}

/// True iff `e * P * (2n - 4) <= 1`, up to [`Real::CEIL_SLACK`] relative
/// slack.
pub fn lll_satisfiability_check<F: Real>(p: &ConstructionParams) -> bool {
    match lll_log_epd::<F>(p) {
        None => true,
        Some(log_epd) => log_epd <= F::of(F::CEIL_SLACK),
    }
}

/// A column of length `t` with exactly `w` nonzero entries, uniform over all
/// `C(t, w) (q-1)^w` such vectors.
pub fn sample_column<R: Rng + ?Sized>(t: usize, w: usize, q: u32, rng: &mut R) -> Result<Vec<Symbol>> {
    if w > t {
        return param(format!("weight {w} exceeds length {t}"));
    }
    check_alphabet(q)?;
    let mut positions: Vec<usize> = (0..t).collect();
    let (support, _) = positions.partial_shuffle(rng, w);
    let mut column = vec![0; t];
    for &i in support.iter() {
        column[i] = rng.gen_range(1..q) as Symbol;
    }
    Ok(column)
}

fn too_many_agreements(a: &[Symbol], b: &[Symbol], lambda: usize) -> bool {
    let mut shared = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x != 0 && x == y {
            shared += 1;
            if shared > lambda {
                return true;
            }
        }
    }
    false
}

/// Resampling construction of a `(lambda, w, n)`-matrix.
///
/// All columns are drawn independently; then, while some pair of columns
/// shares more than `lambda` nonzero symbols, the lexicographically smallest
/// such pair is resampled (both columns) and only pairs touching those two
/// columns are re-examined. Column `j` always draws from random stream `j`,
/// so the result is a deterministic function of the parameters and seed.
pub fn build_lambda_matrix(p: &ConstructionParams) -> Result<(CodeMatrix, ResampleLog)> {
    check_alphabet(p.q)?;
    if p.n == 0 || p.t == 0 {
        return param(format!("empty shape {}x{}", p.t, p.n));
    }
    if p.w > p.t {
        return param(format!("weight {} exceeds length {}", p.w, p.t));
    }
    if p.n >= 3 && !lll_satisfiability_check::<f64>(p) {
        return param(format!(
            "local lemma condition e*P*D <= 1 fails for lambda={}, w={}, t={}, n={}, q={}",
            p.lambda, p.w, p.t, p.n, p.q
        ));
    }

    let n = p.n;
    let budget = p.resample_budget();
    let mut streams = StreamSet::new(p.seed, n);
    let mut columns: Vec<Vec<Symbol>> = (0..n)
        .map(|j| sample_column(p.t, p.w, p.q, streams.get(j)))
        .collect::<Result<_>>()?;

    let mut violated = BTreeSet::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if too_many_agreements(&columns[a], &columns[b], p.lambda) {
                violated.insert((a, b));
            }
        }
    }
    let mut log = ResampleLog {
        total_resamples: 0,
        rounds: 1,
        violated_pairs_history: vec![(0, violated.len())],
    };

    while let Some(&(i, j)) = violated.first() {
        if log.total_resamples >= budget {
            return Err(Error::ResampleBudget {
                budget,
                log: Box::new(log),
            });
        }
        columns[i] = sample_column(p.t, p.w, p.q, streams.get(i))?;
        columns[j] = sample_column(p.t, p.w, p.q, streams.get(j))?;
        log.total_resamples += 1;

        violated.retain(|&(a, b)| a != i && a != j && b != i && b != j);
        for x in 0..n {
            for &r in &[i, j] {
                if x == r || (r == j && x == i) {
                    continue;
                }
                if too_many_agreements(&columns[r], &columns[x], p.lambda) {
                    violated.insert((r.min(x), r.max(x)));
                }
            }
        }
        log.violated_pairs_history.push((log.rounds, violated.len()));
        log.rounds += 1;
    }

    Ok((CodeMatrix::from_columns(p.q, &columns)?, log))
}

/// Output of the resampling constructions.
#[derive(Debug, Clone)]
pub struct LllCode {
    pub code: CodeMatrix,
    pub params: ConstructionParams,
    pub log: ResampleLog,
}

/// A `k`-strongly selective code of constant column weight
/// `w = ceil(1 + (k-1) ln(2en))`.
pub fn build_strongly_selective(k: usize, q: u32, n: usize, seed: u64) -> Result<LllCode> {
    if k < 2 || n <= k || n < 3 {
        return param(format!("strong selectivity needs k >= 2, n > k, n >= 3; got k={k}, n={n}"));
    }
    let params = ConstructionParams::derive::<f64>(k, q, n, seed)?;
    let (code, log) = build_lambda_matrix(&params)?;
    Ok(LllCode { code, params, log })
}

/// A `k`-frameproof code, obtained as a `(k+1)`-strongly selective code.
/// The returned parameters are those of the `(k+1)` construction.
pub fn build_frameproof(k: usize, q: u32, n: usize, seed: u64) -> Result<LllCode> {
    if k < 2 || n <= k + 1 {
        return param(format!("frameproof construction needs k >= 2 and n > k + 1; got k={k}, n={n}"));
    }
    build_strongly_selective(k + 1, q, n, seed)
}
