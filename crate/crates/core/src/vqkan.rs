//! The VQKAN forward pass.
//!
//! Each input `x ∈ [0,1]^Nq` is encoded by `Ry(acos(2x_j - 1) + π/2)` on
//! qubit `j`. Every layer `n` is a trainable `Ry` mixing layer followed by a
//! partial-swap network over all qubit pairs in lexicographic order. The
//! `Z` expectations of every qubit are recorded on the encoded state and
//! after each layer; those snapshots are all the classical side ever sees.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::statevec::StateVector;

/// Number of trainable angles for `num_qubits` qubits and `num_layers` layers.
pub fn num_parameters(num_qubits: usize, num_layers: usize) -> usize {
    num_layers * (num_qubits + num_pairs(num_qubits))
}

fn num_pairs(num_qubits: usize) -> usize {
    num_qubits * num_qubits.saturating_sub(1) / 2
}

/// All pairs `j < k` in lexicographic order.
pub fn swap_pairs(num_qubits: usize) -> Vec<(usize, usize)> {
    (0..num_qubits)
        .flat_map(|j| (j + 1..num_qubits).map(move |k| (j, k)))
        .collect()
}

/// Ansatz angles, stored flat and layer-major: for each layer the `Nq` mixing
/// angles come first, then one swap angle per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct VqkanParams {
    num_qubits: usize,
    num_layers: usize,
    values: Vec<f64>,
}

impl VqkanParams {
    pub fn zeros(num_qubits: usize, num_layers: usize) -> Result<Self> {
        Self::from_flat(num_qubits, num_layers, vec![0.0; num_parameters(num_qubits, num_layers)])
    }

    pub fn from_flat(num_qubits: usize, num_layers: usize, values: Vec<f64>) -> Result<Self> {
        if num_qubits < 2 || num_layers < 1 {
            return Err(Error::argument(format!(
                "ansatz needs >= 2 qubits and >= 1 layer, got {num_qubits} and {num_layers}"
            )));
        }
        let expected = num_parameters(num_qubits, num_layers);
        if values.len() != expected {
            return Err(Error::argument(format!(
                "expected {expected} parameters for ({num_qubits} qubits, {num_layers} layers), got {}",
                values.len()
            )));
        }
        Ok(Self {
            num_qubits,
            num_layers,
            values,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    fn layer_len(&self) -> usize {
        self.num_qubits + num_pairs(self.num_qubits)
    }

    pub fn mix_angles(&self, layer: usize) -> &[f64] {
        let start = layer * self.layer_len();
        &self.values[start..start + self.num_qubits]
    }

    pub fn swap_angles(&self, layer: usize) -> &[f64] {
        let start = layer * self.layer_len() + self.num_qubits;
        &self.values[start..start + num_pairs(self.num_qubits)]
    }

    pub fn mix_angles_mut(&mut self, layer: usize) -> &mut [f64] {
        let start = layer * self.layer_len();
        let n = self.num_qubits;
        &mut self.values[start..start + n]
    }

    pub fn swap_angles_mut(&mut self, layer: usize) -> &mut [f64] {
        let start = layer * self.layer_len() + self.num_qubits;
        let p = num_pairs(self.num_qubits);
        &mut self.values[start..start + p]
    }
}

/// Per-layer `⟨Z_j⟩` values. Row 0 is the encoded input state, row `n` the
/// state after layer `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerSnapshots {
    num_qubits: usize,
    values: Vec<f64>,
}

impl LayerSnapshots {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let num_qubits = rows.first().map_or(0, Vec::len);
        if num_qubits == 0 {
            return Err(Error::argument("snapshots need at least one non-empty row"));
        }
        let mut values = Vec::with_capacity(rows.len() * num_qubits);
        for (n, row) in rows.into_iter().enumerate() {
            if row.len() != num_qubits {
                return Err(Error::argument(format!(
                    "snapshot row {n} has {} entries, expected {num_qubits}",
                    row.len()
                )));
            }
            if let Some(z) = row.iter().find(|z| !(z.is_finite() && z.abs() <= 1.0)) {
                return Err(Error::Domain {
                    value: *z,
                    domain: "[-1, 1]",
                });
            }
            values.extend(row);
        }
        Ok(Self { num_qubits, values })
    }

    /// Snapshots built from occupancies `q = (1 - ⟨Z⟩)/2`.
    pub fn from_occupancy(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(|q| 1.0 - 2.0 * q).collect())
                .collect(),
        )
    }

    /// Row `n` has `⟨Z⟩ = -1` on `path[n]` and `+1` everywhere else.
    pub fn one_hot(path: &[usize], num_sites: usize) -> Result<Self> {
        if let Some(&bad) = path.iter().find(|&&s| s >= num_sites) {
            return Err(Error::Index {
                what: "sites",
                index: bad,
                len: num_sites,
            });
        }
        Self::new(
            path.iter()
                .map(|&s| (0..num_sites).map(|j| if j == s { -1.0 } else { 1.0 }).collect())
                .collect(),
        )
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_rows(&self) -> usize {
        self.values.len() / self.num_qubits
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.values[n * self.num_qubits..(n + 1) * self.num_qubits]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.num_qubits)
    }

    #[inline]
    pub fn z(&self, n: usize, j: usize) -> f64 {
        self.values[n * self.num_qubits + j]
    }
}

/// Encodes `x` as a product state.
pub fn encode_input(x: &[f64]) -> Result<StateVector> {
    let mut state = StateVector::zero(x.len())?;
    for (j, &xj) in x.iter().enumerate() {
        state.apply_ry(j, encoding_angle(xj)?)?;
    }
    Ok(state)
}

/// Rotation angle `acos(2x - 1) + π/2` for an input value in `[0, 1]`.
pub fn encoding_angle(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok((2.0 * x - 1.0).clamp(-1.0, 1.0).acos() + FRAC_PI_2)
}

/// Runs the encoded input through every layer and records `N_l + 1`
/// snapshots.
pub fn forward(params: &VqkanParams, x: &[f64]) -> Result<LayerSnapshots> {
    if x.len() != params.num_qubits() {
        return Err(Error::argument(format!(
            "input has {} entries but the ansatz has {} qubits",
            x.len(),
            params.num_qubits()
        )));
    }
    let nq = params.num_qubits();
    let pairs = swap_pairs(nq);
    let mut state = encode_input(x)?;
    let mut values = Vec::with_capacity((params.num_layers() + 1) * nq);
    values.extend(state.expect_z_all());
    for layer in 0..params.num_layers() {
        for (j, &theta) in params.mix_angles(layer).iter().enumerate() {
            state.apply_ry(j, theta)?;
        }
        for (&(j, k), &theta) in pairs.iter().zip(params.swap_angles(layer)) {
            state.apply_pswap(j, k, theta)?;
        }
        values.extend(state.expect_z_all());
    }
    // rounding can push |⟨Z⟩| a hair past 1
    for v in &mut values {
        *v = v.clamp(-1.0, 1.0);
    }
    Ok(LayerSnapshots {
        num_qubits: nq,
        values,
    })
}
