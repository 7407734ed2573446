//! Turning snapshots into a tour.
//!
//! Candidates are restricted to valid Hamiltonian cycles from the start
//! site. Snapshot row `j` is aligned with path position `j`, and each
//! position contributes the factor `1 - ⟨Z_{p_j}⟩ ∈ [0, 2]`. The sum and
//! product of those factors are the two scores; the decoded tour is the
//! argmax, with ties going to the lexicographically smallest path.

use itertools::Itertools;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::par;
use crate::vqkan::LayerSnapshots;

/// Largest site count the factorial enumeration accepts.
pub const MAX_ENUM_SITES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecodeMode {
    Sum,
    Product,
}

impl DecodeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DecodeMode::Sum => "sum",
            DecodeMode::Product => "product",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathScore {
    pub path: Vec<usize>,
    pub score_sum: f64,
    pub score_product: f64,
}

/// Every cycle `start → ... → start` over `num_sites` sites, in
/// lexicographic order.
pub fn enumerate_cycles(num_sites: usize, start: usize) -> Result<Vec<Vec<usize>>> {
    if !(3..=MAX_ENUM_SITES).contains(&num_sites) {
        return Err(Error::Size(format!(
            "cycle enumeration supports 3..={MAX_ENUM_SITES} sites, got {num_sites}"
        )));
    }
    if start >= num_sites {
        return Err(Error::Index {
            what: "sites",
            index: start,
            len: num_sites,
        });
    }
    let others: Vec<usize> = (0..num_sites).filter(|&s| s != start).collect();
    Ok(others
        .iter()
        .copied()
        .permutations(others.len())
        .map(|perm| {
            let mut path = Vec::with_capacity(num_sites + 1);
            path.push(start);
            path.extend(perm);
            path.push(start);
            path
        })
        .collect())
}

/// Whether `path` starts and ends at `start` and visits every other site of
/// `0..num_sites` exactly once.
pub fn is_valid_cycle(path: &[usize], num_sites: usize, start: usize) -> bool {
    if path.len() != num_sites + 1 || path[0] != start || path[num_sites] != start {
        return false;
    }
    let mut seen = vec![false; num_sites];
    seen[start] = true;
    for &s in &path[1..num_sites] {
        if s >= num_sites || seen[s] {
            return false;
        }
        seen[s] = true;
    }
    true
}

fn check_path(path: &[usize], snapshots: &LayerSnapshots) -> Result<()> {
    if path.len() > snapshots.num_rows() {
        return Err(Error::argument(format!(
            "path has {} positions but only {} snapshot rows exist",
            path.len(),
            snapshots.num_rows()
        )));
    }
    if let Some(&bad) = path.iter().find(|&&s| s >= snapshots.num_qubits()) {
        return Err(Error::Index {
            what: "sites",
            index: bad,
            len: snapshots.num_qubits(),
        });
    }
    Ok(())
}

pub fn score_sum(path: &[usize], snapshots: &LayerSnapshots) -> Result<f64> {
    check_path(path, snapshots)?;
    Ok(path.iter().enumerate().map(|(j, &p)| 1.0 - snapshots.z(j, p)).sum())
}

pub fn score_product(path: &[usize], snapshots: &LayerSnapshots) -> Result<f64> {
    check_path(path, snapshots)?;
    Ok(path.iter().enumerate().map(|(j, &p)| 1.0 - snapshots.z(j, p)).product())
}

/// Scores every candidate cycle and keeps the best under `mode`.
pub fn decode(
    snapshots: &LayerSnapshots,
    num_sites: usize,
    start: usize,
    mode: DecodeMode,
) -> Result<PathScore> {
    let cycles = enumerate_cycles(num_sites, start)?;
    check_path(&cycles[0], snapshots)?;
    let scored = par::map(&cycles, |path| {
        let factors = path.iter().enumerate().map(|(j, &p)| 1.0 - snapshots.z(j, p));
        let sum: f64 = factors.clone().sum();
        let product: f64 = factors.product();
        (sum, product)
    });
    let key = |&(s, p): &(f64, f64)| match mode {
        DecodeMode::Sum => s,
        DecodeMode::Product => p,
    };
    // strict `>` keeps the earliest (lexicographically smallest) maximiser
    let mut best = 0;
    for i in 1..scored.len() {
        if key(&scored[i]) > key(&scored[best]) {
            best = i;
        }
    }
    let (score_sum, score_product) = scored[best];
    Ok(PathScore {
        path: cycles[best].clone(),
        score_sum,
        score_product,
    })
}

/// `0-2-1-3-0` style rendering used in CSV output.
pub fn format_path(path: &[usize]) -> String {
    path.iter().map(usize::to_string).join("-")
}
