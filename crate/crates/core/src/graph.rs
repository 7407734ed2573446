//! Complete directed graphs whose edge lengths depend on the time step.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Edge lengths `w(j, k, t)` over `num_sites` sites and `num_steps` steps.
///
/// A tour leg departing at position `j` uses step `min(j, num_steps - 1)`,
/// so single-step graphs use their only step for every leg.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedGraph {
    num_sites: usize,
    num_steps: usize,
    // step-major, then row-major `num_sites × num_sites`; diagonal kept at 0
    weights: Vec<f64>,
}

impl TimedGraph {
    /// Builds a graph from `f(j, k, t)` evaluated on every off-diagonal entry.
    pub fn from_fn<F>(num_sites: usize, num_steps: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize, usize) -> f64,
    {
        if num_sites < 2 {
            return Err(Error::argument(format!("graph needs at least 2 sites, got {num_sites}")));
        }
        if num_steps == 0 {
            return Err(Error::argument("graph needs at least one time step"));
        }
        let n = num_sites;
        let mut weights = vec![0.0; num_steps * n * n];
        for t in 0..num_steps {
            for j in 0..n {
                for k in 0..n {
                    if j == k {
                        continue;
                    }
                    let w = f(j, k, t);
                    if !(w.is_finite() && w >= 0.0) {
                        return Err(Error::argument(format!(
                            "edge ({j},{k}) at step {t} has invalid length {w}"
                        )));
                    }
                    weights[(t * n + j) * n + k] = w;
                }
            }
        }
        Ok(Self {
            num_sites,
            num_steps,
            weights,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn num_steps(&self) -> usize {
        self.num_steps
    }

    /// Length of the edge `j → k` at step `t`. Self-loops are undefined.
    pub fn weight(&self, j: usize, k: usize, t: usize) -> Result<f64> {
        let n = self.num_sites;
        for (what, index, len) in [("sites", j, n), ("sites", k, n), ("time steps", t, self.num_steps)] {
            if index >= len {
                return Err(Error::Index { what, index, len });
            }
        }
        if j == k {
            return Err(Error::argument(format!("self-weight w({j},{j}) is undefined")));
        }
        Ok(self.weights[(t * n + j) * n + k])
    }

    /// Length of `j → k` for the leg departing at tour position `leg`.
    /// Indices are trusted; callers validate site indices up front.
    #[inline]
    pub fn leg_weight(&self, j: usize, k: usize, leg: usize) -> f64 {
        let t = leg.min(self.num_steps - 1);
        let n = self.num_sites;
        self.weights[(t * n + j) * n + k]
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.num_sites;
        (0..self.num_steps).all(|t| {
            (0..n).all(|j| (j + 1..n).all(|k| self.leg_weight(j, k, t) == self.leg_weight(k, j, t)))
        })
    }

    /// Single-step graph holding step `t`.
    pub fn slice(&self, t: usize) -> Result<Self> {
        if t >= self.num_steps {
            return Err(Error::Index {
                what: "time steps",
                index: t,
                len: self.num_steps,
            });
        }
        let n = self.num_sites;
        Ok(Self {
            num_sites: n,
            num_steps: 1,
            weights: self.weights[t * n * n..(t + 1) * n * n].to_vec(),
        })
    }

    /// Text form: `"N T"` then `T` blocks of `N` rows. Numbers use the
    /// shortest round-trip decimal representation, so parsing is exact.
    pub fn to_text(&self) -> String {
        let n = self.num_sites;
        let mut out = format!("{} {}\n", n, self.num_steps);
        for t in 0..self.num_steps {
            for j in 0..n {
                let row = &self.weights[(t * n + j) * n..(t * n + j + 1) * n];
                for (k, w) in row.iter().enumerate() {
                    if k > 0 {
                        out.push(' ');
                    }
                    let _ = write!(out, "{w}");
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_err = |line, message: String| Error::Parse { line, message };

        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty graph file".into()))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(parse_err(hline, format!("header must be \"N T\", got {header:?}")));
        }
        let n: usize = dims[0]
            .parse()
            .map_err(|_| parse_err(hline, format!("bad site count {:?}", dims[0])))?;
        let steps: usize = dims[1]
            .parse()
            .map_err(|_| parse_err(hline, format!("bad step count {:?}", dims[1])))?;
        if n < 2 || steps == 0 {
            return Err(parse_err(hline, format!("need N >= 2 and T >= 1, got {n} {steps}")));
        }

        let mut weights = vec![0.0; steps * n * n];
        for t in 0..steps {
            for j in 0..n {
                let (lineno, row) = lines.next().ok_or_else(|| {
                    parse_err(
                        text.lines().count() + 1,
                        format!("expected {} weight rows, file ended early", steps * n),
                    )
                })?;
                let values: Vec<&str> = row.split_whitespace().collect();
                if values.len() != n {
                    return Err(parse_err(
                        lineno,
                        format!("expected {n} values, found {}", values.len()),
                    ));
                }
                for (k, v) in values.iter().enumerate() {
                    let w: f64 = v
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("bad number {v:?}")))?;
                    if j == k {
                        continue;
                    }
                    if !w.is_finite() || w < 0.0 {
                        return Err(parse_err(lineno, format!("edge length {v} must be finite and nonnegative")));
                    }
                    weights[(t * n + j) * n + k] = w;
                }
            }
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(parse_err(lineno, "unexpected trailing data".into()));
        }
        Ok(Self {
            num_sites: n,
            num_steps: steps,
            weights,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn store(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Four sites on the corners of a square, labelled 0..3 around the
/// perimeter. Sides have length `|cos tπ|/√2`, diagonals `|cos tπ|`.
pub fn square_graph(t: f64) -> TimedGraph {
    let scale = (t * std::f64::consts::PI).cos().abs();
    TimedGraph::from_fn(4, 1, |j, k, _| {
        if (j + 2) % 4 == k {
            scale
        } else {
            scale * std::f64::consts::FRAC_1_SQRT_2
        }
    })
    .expect("square graph weights are nonnegative")
}

/// Six sites on a ring: ring edges 0.5, every other pair 1.
pub fn hexagon_graph() -> TimedGraph {
    TimedGraph::from_fn(6, 1, |j, k, _| {
        let d = (j + 6 - k) % 6;
        if d == 1 || d == 5 {
            0.5
        } else {
            1.0
        }
    })
    .expect("hexagon weights are nonnegative")
}

/// Directed random lengths, each drawn independently from `(0, 1]` for every
/// ordered pair and every step.
pub fn random_graph(seed: u64, num_sites: usize, num_steps: usize) -> Result<TimedGraph> {
    if num_sites < 3 {
        return Err(Error::argument(format!(
            "random graphs need at least 3 sites, got {num_sites}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // `random` draws from [0, 1); flip it onto (0, 1]
    TimedGraph::from_fn(num_sites, num_steps, |_, _, _| 1.0 - rng.random::<f64>())
}
