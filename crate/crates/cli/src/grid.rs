//! Grid specifications: `key=v1,v2,...` lists separated by `;`, expanded as
//! a Cartesian product over the keys `q`, `k` and `n`.

use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub q: u32,
    pub k: usize,
    pub n: usize,
}

/// Cells sorted by `(q, k, n)`, deduplicated.
pub fn parse(text: &str) -> Result<Vec<Cell>, String> {
    let mut lists: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, values) = part
            .split_once('=')
            .ok_or_else(|| format!("grid entry `{part}` is not key=values"))?;
        let key = key.trim();
        if !matches!(key, "q" | "k" | "n") {
            return Err(format!("unknown grid key `{key}`"));
        }
        let values = values
            .split(',')
            .map(|v| v.trim().parse::<u64>().map_err(|e| format!("grid value `{v}` for {key}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if lists.insert(key, values).is_some() {
            return Err(format!("grid key `{key}` given twice"));
        }
    }
    let get = |key: &str| lists.get(key).ok_or_else(|| format!("grid is missing `{key}`"));
    let (qs, ks, ns) = (get("q")?, get("k")?, get("n")?);
    let mut cells = Vec::with_capacity(qs.len() * ks.len() * ns.len());
    for &q in qs {
        let q = u32::try_from(q).map_err(|_| format!("q = {q} out of range"))?;
        for &k in ks {
            for &n in ns {
                cells.push(Cell { q, k: k as usize, n: n as usize });
            }
        }
    }
    cells.sort_unstable();
    cells.dedup();
    Ok(cells)
}
