//! Slotted multichannel conflict resolution driven by a code.
//!
//! Station `j` follows codeword (column) `j`: in slot `i` it stays silent if
//! the symbol is 0 and transmits on channel `s` if the symbol is `s >= 1`.
//! A transmission succeeds exactly when no other active station uses the same
//! channel in the same slot. There is no capture or noise.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rand::seq::index;
use rand::Rng;

use crate::code::CodeMatrix;
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::verify::{binomial_u128, CHECK_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScheduleOutcome {
    /// Sorted, deduplicated active stations.
    pub active_set: Vec<usize>,
    /// First slot in which each active station transmitted alone on its
    /// channel; `None` if it never did.
    pub success_slot: BTreeMap<usize, Option<usize>>,
    pub total_slots: usize,
    /// Slots in which each active station transmitted.
    pub attempts_per_station: BTreeMap<usize, usize>,
}

impl ScheduleOutcome {
    pub fn all_succeeded(&self) -> bool {
        self.success_slot.values().all(Option::is_some)
    }
}

impl fmt::Display for ScheduleOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "slots {}", self.total_slots)?;
        for (station, slot) in &self.success_slot {
            let slot = slot.map_or_else(|| "never".to_string(), |s| s.to_string());
            writeln!(
                f,
                "station {station} success {slot} attempts {}",
                self.attempts_per_station[station]
            )?;
        }
        Ok(())
    }
}

/// One (slot, channel) pair with at least one transmitter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub slot: usize,
    pub channel: u16,
    pub transmitters: Vec<usize>,
}

impl TraceLine {
    pub fn success(&self) -> bool {
        self.transmitters.len() == 1
    }
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}",
            self.slot,
            self.channel,
            self.transmitters.iter().join(","),
            if self.success() { "success" } else { "collision" }
        )
    }
}

/// Runs the schedule for the given active stations.
pub fn simulate(m: &CodeMatrix, active: &[usize]) -> Result<ScheduleOutcome> {
    simulate_traced(m, active).map(|(outcome, _)| outcome)
}

/// [`simulate`], also returning the per-slot channel activity in slot then
/// channel order.
pub fn simulate_traced(m: &CodeMatrix, active: &[usize]) -> Result<(ScheduleOutcome, Vec<TraceLine>)> {
    if let Some(&bad) = active.iter().find(|&&j| j >= m.n()) {
        return Err(Error::Index { index: bad, len: m.n() });
    }
    let stations: Vec<usize> = active.iter().copied().sorted_unstable().dedup().collect();
    let mut outcome = ScheduleOutcome {
        success_slot: stations.iter().map(|&j| (j, None)).collect(),
        attempts_per_station: stations.iter().map(|&j| (j, 0)).collect(),
        active_set: stations,
        total_slots: m.t(),
    };
    let mut trace = Vec::new();
    for (slot, row) in m.rows().enumerate() {
        let mut channels: BTreeMap<u16, Vec<usize>> = BTreeMap::new();
        for &j in &outcome.active_set {
            if row[j] != 0 {
                channels.entry(row[j]).or_default().push(j);
                *outcome.attempts_per_station.get_mut(&j).expect("active") += 1;
            }
        }
        for (channel, transmitters) in channels {
            if let [only] = transmitters[..] {
                outcome.success_slot.get_mut(&only).expect("active").get_or_insert(slot);
            }
            trace.push(TraceLine { slot, channel, transmitters });
        }
    }
    Ok((outcome, trace))
}

/// Samples `trials` active sets of size `1..=k` (trial `r` uses random
/// stream `r` of `seed`) and reports whether every active station succeeded
/// in every trial.
pub fn guarantee_check(m: &CodeMatrix, k: usize, trials: usize, seed: u64) -> bool {
    let n = m.n();
    let max_size = k.min(n);
    if max_size == 0 {
        return true;
    }
    (0..trials as u64).all(|trial| {
        let mut rng = stream(seed, trial);
        let size = rng.gen_range(1..=max_size);
        let active = index::sample(&mut rng, n, size).into_vec();
        simulate(m, &active).is_ok_and(|o| o.all_succeeded())
    })
}

/// Whether every station succeeds for every active set of exactly `k`
/// stations, by enumeration.
pub fn exhaustive_guarantee(m: &CodeMatrix, k: usize) -> Result<bool> {
    let n = m.n();
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let needed = binomial_u128(n as u64, k as u64).saturating_mul((k * m.t()) as u128);
    if needed > CHECK_LIMIT {
        return Err(Error::Capacity { needed, limit: CHECK_LIMIT });
    }
    for active in (0..n).combinations(k) {
        if !simulate(m, &active)?.all_succeeded() {
            return Ok(false);
        }
    }
    Ok(true)
}
