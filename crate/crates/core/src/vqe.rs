//! One-hot VQE baseline on `N²` qubits.
//!
//! Qubit `t·N + j` is set when the salesman is at site `j` at position `t`.
//! Position `N` is the return to the start, so the cost Hamiltonian closes the
//! tour with the leg from row `N - 1` back to row 0:
//!
//! `H = Σ_t Σ_{j≠k} w(j,k,t) b_{t,j} b_{t+1 mod N,k}
//!      + A_row Σ_t (Σ_j b_{t,j} - 1)² + A_col Σ_j (Σ_t b_{t,j} - 1)²`
//!
//! The ansatz starts from the uniform superposition and applies the same
//! mixing + partial-swap layers as VQKAN, with swap pairs taken over all
//! `N²` qubits.

use crate::decoder::is_valid_cycle;
use crate::error::{Error, Result};
use crate::graph::TimedGraph;
use crate::par;
use crate::statevec::{StateVector, MAX_QUBITS};
use crate::vqkan::swap_pairs;

#[derive(Debug, Clone, PartialEq)]
pub struct VqeModel {
    num_sites: usize,
    num_layers: usize,
    pub row_penalty: f64,
    pub col_penalty: f64,
}

impl VqeModel {
    pub fn new(num_sites: usize, num_layers: usize, row_penalty: f64, col_penalty: f64) -> Result<Self> {
        if num_sites < 3 {
            return Err(Error::argument(format!("VQE baseline needs >= 3 sites, got {num_sites}")));
        }
        if num_sites * num_sites > MAX_QUBITS {
            return Err(Error::Size(format!(
                "VQE baseline on {num_sites} sites needs {} qubits, limit is {MAX_QUBITS}",
                num_sites * num_sites
            )));
        }
        if num_layers < 1 {
            return Err(Error::argument("VQE ansatz needs at least one layer"));
        }
        if !(row_penalty > 0.0 && col_penalty > 0.0) {
            return Err(Error::argument("VQE penalty weights must be positive"));
        }
        Ok(Self {
            num_sites,
            num_layers,
            row_penalty,
            col_penalty,
        })
    }

    /// Penalties `A_row = A_col = 2·N·max_w`, with `max_w` floored at 1 for
    /// all-zero graphs so the constraints never switch off.
    pub fn with_default_penalties(graph: &TimedGraph, num_layers: usize) -> Result<Self> {
        let n = graph.num_sites();
        let max_w = graph.max_weight();
        let a = 2.0 * n as f64 * if max_w > 0.0 { max_w } else { 1.0 };
        Self::new(n, num_layers, a, a)
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    pub fn num_qubits(&self) -> usize {
        self.num_sites * self.num_sites
    }

    pub fn qubit(&self, position: usize, site: usize) -> usize {
        position * self.num_sites + site
    }

    pub fn num_parameters(&self) -> usize {
        let q = self.num_qubits();
        self.num_layers * (q + q * (q - 1) / 2)
    }

    /// Uniform superposition followed by `num_layers` mixing + swap layers.
    pub fn prepare_state(&self, params: &[f64]) -> Result<StateVector> {
        if params.len() != self.num_parameters() {
            return Err(Error::argument(format!(
                "VQE ansatz expects {} parameters, got {}",
                self.num_parameters(),
                params.len()
            )));
        }
        let q = self.num_qubits();
        let pairs = swap_pairs(q);
        let mut state = StateVector::uniform(q)?;
        for layer in params.chunks(q + pairs.len()) {
            let (mix, swaps) = layer.split_at(q);
            for (j, &theta) in mix.iter().enumerate() {
                state.apply_ry(j, theta)?;
            }
            for (&(a, b), &theta) in pairs.iter().zip(swaps) {
                state.apply_pswap(a, b, theta)?;
            }
        }
        Ok(state)
    }

    /// Expands the Hamiltonian into QUBO form using `b² = b`.
    pub fn qubo(&self, graph: &TimedGraph) -> Result<Qubo> {
        let n = self.num_sites;
        if graph.num_sites() != n {
            return Err(Error::argument(format!(
                "graph has {} sites, VQE model has {n}",
                graph.num_sites()
            )));
        }
        let mut qubo = Qubo::zeros(self.num_qubits());
        // (Σ b - 1)² = 1 - Σ b + 2 Σ_{i<l} b_i b_l
        for t in 0..n {
            for j in 0..n {
                let i = self.qubit(t, j);
                qubo.add(i, i, -self.row_penalty - self.col_penalty);
                for k in j + 1..n {
                    qubo.add(i, self.qubit(t, k), 2.0 * self.row_penalty);
                }
                for u in t + 1..n {
                    qubo.add(i, self.qubit(u, j), 2.0 * self.col_penalty);
                }
            }
        }
        qubo.offset = n as f64 * (self.row_penalty + self.col_penalty);
        for t in 0..n {
            let next = (t + 1) % n;
            for j in 0..n {
                for k in (0..n).filter(|&k| k != j) {
                    qubo.add(self.qubit(t, j), self.qubit(next, k), graph.leg_weight(j, k, t));
                }
            }
        }
        Ok(qubo)
    }
}

/// `E(b) = offset + Σ_{i≤l} c_{il} b_i b_l` over binary variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Qubo {
    num_vars: usize,
    // upper triangle, row-major `num_vars × num_vars`
    coeffs: Vec<f64>,
    pub offset: f64,
}

impl Qubo {
    pub fn zeros(num_vars: usize) -> Self {
        Self {
            num_vars,
            coeffs: vec![0.0; num_vars * num_vars],
            offset: 0.0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Adds `c` to the coefficient of `b_i b_l` (order-insensitive).
    pub fn add(&mut self, i: usize, l: usize, c: f64) {
        let (a, b) = if i <= l { (i, l) } else { (l, i) };
        self.coeffs[a * self.num_vars + b] += c;
    }

    pub fn coeff(&self, i: usize, l: usize) -> f64 {
        let (a, b) = if i <= l { (i, l) } else { (l, i) };
        self.coeffs[a * self.num_vars + b]
    }

    /// Energy of the assignment whose bit `i` is `b_i`.
    pub fn energy(&self, bits: usize) -> f64 {
        let n = self.num_vars;
        let mut e = self.offset;
        let mut rest = bits;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let row = &self.coeffs[i * n..(i + 1) * n];
            e += row[i];
            let mut higher = rest;
            while higher != 0 {
                let l = higher.trailing_zeros() as usize;
                higher &= higher - 1;
                e += row[l];
            }
        }
        e
    }

    /// Energy of every basis state, indexed like the state vector.
    pub fn diagonal(&self) -> Vec<f64> {
        let len = 1usize << self.num_vars;
        let chunk = par::REDUCE_CHUNK.min(len);
        let starts: Vec<usize> = (0..len).step_by(chunk).collect();
        par::map(&starts, |&s| (s..s + chunk).map(|b| self.energy(b)).collect::<Vec<_>>())
            .concat()
    }
}

/// Precomputed Hamiltonian diagonal for repeated energy evaluations.
#[derive(Debug, Clone)]
pub struct VqeProblem {
    pub model: VqeModel,
    diagonal: Vec<f64>,
}

impl VqeProblem {
    pub fn new(model: VqeModel, graph: &TimedGraph) -> Result<Self> {
        let diagonal = model.qubo(graph)?.diagonal();
        Ok(Self { model, diagonal })
    }

    /// `⟨ψ|H|ψ⟩` for an arbitrary state on the model's qubits.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.num_qubits() != self.model.num_qubits() {
            return Err(Error::argument(format!(
                "state has {} qubits, VQE model needs {}",
                state.num_qubits(),
                self.model.num_qubits()
            )));
        }
        let amps = state.amplitudes();
        let partials = par::map_chunks(&self.diagonal, par::REDUCE_CHUNK, |s, d| {
            d.iter()
                .zip(&amps[s..s + d.len()])
                .map(|(e, a)| e * a.norm_sqr())
                .sum::<f64>()
        });
        Ok(partials.iter().sum())
    }

    pub fn energy(&self, params: &[f64]) -> Result<f64> {
        self.expectation(&self.model.prepare_state(params)?)
    }
}

/// Energy of the ansatz state for `params` on `graph`.
pub fn vqe_energy(model: &VqeModel, graph: &TimedGraph, params: &[f64]) -> Result<f64> {
    VqeProblem::new(model.clone(), graph)?.energy(params)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeDecoded {
    pub path: Vec<usize>,
    pub valid: bool,
}

/// Most occupied site per position, then the return to `start`. The result
/// is reported as-is; `valid` says whether it is a Hamiltonian cycle.
pub fn vqe_decode(model: &VqeModel, state: &StateVector, start: usize) -> Result<VqeDecoded> {
    let n = model.num_sites();
    if state.num_qubits() != model.num_qubits() {
        return Err(Error::argument(format!(
            "state has {} qubits, VQE model needs {}",
            state.num_qubits(),
            model.num_qubits()
        )));
    }
    if start >= n {
        return Err(Error::Index {
            what: "sites",
            index: start,
            len: n,
        });
    }
    let z = state.expect_z_all();
    let mut path: Vec<usize> = (0..n)
        .map(|t| {
            let occ = |j: usize| 0.5 * (1.0 - z[model.qubit(t, j)]);
            // first maximum wins ties
            (1..n).fold(0, |best, j| if occ(j) > occ(best) { j } else { best })
        })
        .collect();
    path.push(start);
    let valid = is_valid_cycle(&path, n, start);
    Ok(VqeDecoded { path, valid })
}

/// Basis index of the one-hot encoding of `path` (its first `N` positions).
pub fn encode_tour(model: &VqeModel, path: &[usize]) -> usize {
    path.iter()
        .take(model.num_sites())
        .enumerate()
        .fold(0, |bits, (t, &j)| bits | 1 << model.qubit(t, j))
}
