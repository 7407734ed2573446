//! Exact shortest tours by exhaustive enumeration.

use crate::decoder::{enumerate_cycles, is_valid_cycle};
use crate::error::{Error, Result};
use crate::graph::TimedGraph;
use crate::par;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_path: Vec<usize>,
    pub best_length: f64,
    pub num_candidates: usize,
}

/// `Σ_j w(p_j, p_{j+1}, min(j, T-1))` for a valid cycle starting at `path[0]`.
pub fn path_length(graph: &TimedGraph, path: &[usize]) -> Result<f64> {
    let n = graph.num_sites();
    if path.is_empty() || !is_valid_cycle(path, n, path[0]) {
        return Err(Error::argument(format!(
            "{path:?} is not a Hamiltonian cycle over {n} sites"
        )));
    }
    Ok(unchecked_length(graph, path))
}

fn unchecked_length(graph: &TimedGraph, path: &[usize]) -> f64 {
    path.windows(2)
        .enumerate()
        .map(|(leg, w)| graph.leg_weight(w[0], w[1], leg))
        .sum()
}

/// Minimum over every cycle from `start`; ties go to the lexicographically
/// smallest path.
pub fn shortest_cycle(graph: &TimedGraph, start: usize) -> Result<OracleResult> {
    let cycles = enumerate_cycles(graph.num_sites(), start)?;
    let lengths = par::map(&cycles, |p| unchecked_length(graph, p));
    let mut best = 0;
    for i in 1..lengths.len() {
        if lengths[i] < lengths[best] {
            best = i;
        }
    }
    Ok(OracleResult {
        best_length: lengths[best],
        num_candidates: cycles.len(),
        best_path: cycles[best].clone(),
    })
}
