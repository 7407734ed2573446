//! Dense state-vector simulation for the VQKAN and VQE ansätze.
//!
//! Qubit 0 is the least significant bit of the basis index. All gates here
//! are real rotations, so global phase never enters a comparison; tests
//! compare probabilities or expectation values.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;

/// Largest register the simulator will allocate (2^20 amplitudes).
pub const MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_size(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::Size(format!(
            "{num_qubits} qubits requested, supported range is 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// `|0...0⟩` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let len = 1usize << num_qubits;
        if index >= len {
            return Err(Error::Index {
                what: "basis states",
                index,
                len,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); len];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Equal-weight superposition of every basis state.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let len = 1usize << num_qubits;
        let a = Complex64::new((len as f64).sqrt().recip(), 0.0);
        Ok(Self {
            num_qubits,
            amplitudes: vec![a; len],
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::Index {
                what: "qubits",
                index: qubit,
                len: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Rotation about the y axis: rows `(cos θ/2, -sin θ/2)` and
    /// `(sin θ/2, cos θ/2)` on the target qubit.
    pub fn apply_ry(&mut self, qubit: usize, theta: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        let (s, c) = (0.5 * theta).sin_cos();
        let stride = 1usize << qubit;
        let chunk = (2 * stride).max(par::REDUCE_CHUNK).min(self.amplitudes.len());
        par::for_each_chunk_mut(&mut self.amplitudes, chunk, |_, block| {
            for pair in block.chunks_mut(2 * stride) {
                let (lo, hi) = pair.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = x0 * c - x1 * s;
                    *a1 = x0 * s + x1 * c;
                }
            }
        });
        Ok(())
    }

    /// Partial swap between `q1` and `q2`.
    ///
    /// Identity on `|00⟩` and `|11⟩`; on the single-excitation pair it is the
    /// real rotation by `θ/2`, with `|01⟩` meaning `q1 = 0, q2 = 1`:
    /// `|01⟩ → cos(θ/2)|01⟩ + sin(θ/2)|10⟩`. `θ = π` is SWAP up to a sign.
    pub fn apply_pswap(&mut self, q1: usize, q2: usize, theta: f64) -> Result<()> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(Error::argument(format!(
                "partial swap needs two distinct qubits, got {q1} twice"
            )));
        }
        let (s, c) = (0.5 * theta).sin_cos();
        let (m1, m2) = (1usize << q1, 1usize << q2);
        let block = 2 * m1.max(m2);
        let chunk = block.max(par::REDUCE_CHUNK).min(self.amplitudes.len());
        par::for_each_chunk_mut(&mut self.amplitudes, chunk, |_, amps| {
            for i10 in 0..amps.len() {
                // visit each (01, 10) pair once, from its `q1 = 1, q2 = 0` member
                if i10 & m1 == 0 || i10 & m2 != 0 {
                    continue;
                }
                let i01 = i10 ^ m1 ^ m2;
                let (a01, a10) = (amps[i01], amps[i10]);
                amps[i01] = a01 * c - a10 * s;
                amps[i10] = a01 * s + a10 * c;
            }
        });
        Ok(())
    }

    /// Exact `⟨Z_qubit⟩`.
    pub fn expect_z(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = 1usize << qubit;
        let partials = par::map_chunks(&self.amplitudes, par::REDUCE_CHUNK, |start, amps| {
            amps.iter()
                .enumerate()
                .map(|(i, a)| {
                    let p = a.norm_sqr();
                    if (start + i) & mask == 0 {
                        p
                    } else {
                        -p
                    }
                })
                .sum::<f64>()
        });
        Ok(partials.iter().sum())
    }

    /// `⟨Z_j⟩` for every qubit in one pass over the amplitudes.
    pub fn expect_z_all(&self) -> Vec<f64> {
        let n = self.num_qubits;
        let partials = par::map_chunks(&self.amplitudes, par::REDUCE_CHUNK, |start, amps| {
            let mut acc = vec![0.0; n];
            for (i, a) in amps.iter().enumerate() {
                let p = a.norm_sqr();
                let idx = start + i;
                for (q, z) in acc.iter_mut().enumerate() {
                    if idx >> q & 1 == 0 {
                        *z += p;
                    } else {
                        *z -= p;
                    }
                }
            }
            acc
        });
        let mut out = vec![0.0; n];
        for part in partials {
            for (o, p) in out.iter_mut().zip(part) {
                *o += p;
            }
        }
        out
    }

    /// Born-rule probabilities `|amplitude|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        let partials = par::map_chunks(&self.amplitudes, par::REDUCE_CHUNK, |_, amps| {
            amps.iter().map(|a| a.norm_sqr()).sum::<f64>()
        });
        partials.iter().sum::<f64>().sqrt()
    }
}
