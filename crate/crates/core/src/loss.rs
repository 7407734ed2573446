//! Classical loss over layer snapshots: a tour-cost term plus a taboo
//! penalty against occupying one site at two different times.
//!
//! With `N_l + 1` snapshot rows, the cost couples consecutive rows
//! `(n, n + 1)` for `n < N_l` and the taboo compares rows `0..N_l`, leaving
//! the final row (the return to the start) out of the taboo.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::TimedGraph;
use crate::vqkan::LayerSnapshots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostMode {
    /// Product of raw `Z` expectations over ordered pairs, no edge lengths.
    Literal,
    /// `Σ_n Σ_{j≠k} w(j,k,n) q[n][j] q[n+1][k]`.
    #[default]
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TabooMode {
    /// `Σ_n Σ_{k≠n} Π_j (1 - ⟨Z_j⟩^n)(1 - ⟨Z_j⟩^k)`.
    Literal,
    /// `Σ_n Σ_{k≠n} Σ_j q[n][j] q[k][j]`.
    #[default]
    Effective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TabooSign {
    #[default]
    Plus,
    Minus,
}

impl TabooSign {
    fn factor(self) -> f64 {
        match self {
            TabooSign::Plus => 1.0,
            TabooSign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossConfig {
    pub cost_mode: CostMode,
    pub taboo_mode: TabooMode,
    pub taboo_sign: TabooSign,
    pub taboo_weight: f64,
    pub sample_weights: Vec<f64>,
}

impl LossConfig {
    /// Default modes, `λ = 1` and `a_m = 1/num_samples`.
    pub fn uniform(num_samples: usize) -> Self {
        Self {
            cost_mode: CostMode::default(),
            taboo_mode: TabooMode::default(),
            taboo_sign: TabooSign::default(),
            taboo_weight: 1.0,
            sample_weights: vec![1.0 / num_samples.max(1) as f64; num_samples],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.taboo_weight.is_finite() && self.taboo_weight >= 0.0) {
            return Err(Error::argument(format!(
                "taboo weight must be finite and nonnegative, got {}",
                self.taboo_weight
            )));
        }
        if self.sample_weights.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::argument("sample weights must be finite and nonnegative"));
        }
        if self.sample_weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::argument("sample weights must have a positive sum"));
        }
        Ok(())
    }
}

/// Occupancy `q = (1 - ⟨Z⟩)/2` for every row and qubit.
pub fn occupancy(snapshots: &LayerSnapshots) -> Vec<Vec<f64>> {
    snapshots
        .rows()
        .map(|row| row.iter().map(|z| 0.5 * (1.0 - z)).collect())
        .collect()
}

pub fn cost_term(snapshots: &LayerSnapshots, graph: &TimedGraph, mode: CostMode) -> Result<f64> {
    let nq = snapshots.num_qubits();
    if graph.num_sites() != nq {
        return Err(Error::argument(format!(
            "graph has {} sites but snapshots cover {nq} qubits",
            graph.num_sites()
        )));
    }
    let layers = snapshots.num_rows() - 1;
    let total = match mode {
        CostMode::Literal => (0..layers)
            .map(|n| {
                let mut prod = 1.0;
                for j in 0..nq {
                    for k in (0..nq).filter(|&k| k != j) {
                        prod *= snapshots.z(n, j) * snapshots.z(n + 1, k);
                    }
                }
                prod
            })
            .sum(),
        CostMode::Weighted => {
            let q = occupancy(snapshots);
            let mut sum = 0.0;
            for n in 0..layers {
                for j in 0..nq {
                    let qj = q[n][j];
                    if qj == 0.0 {
                        continue;
                    }
                    for k in (0..nq).filter(|&k| k != j) {
                        sum += graph.leg_weight(j, k, n) * qj * q[n + 1][k];
                    }
                }
            }
            sum
        }
    };
    Ok(total)
}

pub fn taboo(snapshots: &LayerSnapshots, mode: TabooMode) -> f64 {
    let nq = snapshots.num_qubits();
    let rows = snapshots.num_rows().saturating_sub(1).max(1);
    let mut sum = 0.0;
    match mode {
        TabooMode::Literal => {
            for n in 0..rows {
                for k in (0..rows).filter(|&k| k != n) {
                    sum += (0..nq)
                        .map(|j| (1.0 - snapshots.z(n, j)) * (1.0 - snapshots.z(k, j)))
                        .product::<f64>();
                }
            }
        }
        TabooMode::Effective => {
            let q = occupancy(snapshots);
            for n in 0..rows {
                for k in (0..rows).filter(|&k| k != n) {
                    sum += (0..nq).map(|j| q[n][j] * q[k][j]).sum::<f64>();
                }
            }
        }
    }
    sum
}

/// Loss of one sample: `cost ± λ·taboo`.
pub fn sample_loss(snapshots: &LayerSnapshots, graph: &TimedGraph, cfg: &LossConfig) -> Result<f64> {
    let cost = cost_term(snapshots, graph, cfg.cost_mode)?;
    if cfg.taboo_weight == 0.0 {
        return Ok(cost);
    }
    Ok(cost + cfg.taboo_sign.factor() * cfg.taboo_weight * taboo(snapshots, cfg.taboo_mode))
}

/// `L = Σ_m a_m l_m`.
pub fn total_loss(per_sample: &[LayerSnapshots], graphs: &[TimedGraph], cfg: &LossConfig) -> Result<f64> {
    if per_sample.len() != graphs.len() || per_sample.len() != cfg.sample_weights.len() {
        return Err(Error::argument(format!(
            "{} snapshot sets, {} graphs and {} sample weights must agree",
            per_sample.len(),
            graphs.len(),
            cfg.sample_weights.len()
        )));
    }
    let mut total = 0.0;
    for ((snaps, graph), &a) in per_sample.iter().zip(graphs).zip(&cfg.sample_weights) {
        total += a * sample_loss(snaps, graph, cfg)?;
    }
    Ok(total)
}
