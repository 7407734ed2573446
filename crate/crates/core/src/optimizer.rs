//! Derivative-free minimisation with a hard evaluation budget.
//!
//! The search is a Nelder-Mead simplex with dimension-adaptive coefficients.
//! When the simplex collapses it restarts around the best point with a new
//! simplex whose edge signs and lengths come from the seeded RNG, so a run
//! is fully determined by `(x0, options)`. Every objective evaluation is
//! recorded as a [`TrialRecord`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub loss: f64,
    pub best_so_far: f64,
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub params: Vec<f64>,
    pub loss: f64,
    pub history: Vec<TrialRecord>,
}

#[derive(Debug, Clone)]
pub struct MinimizeOptions {
    /// Maximum number of objective evaluations.
    pub budget: usize,
    pub seed: u64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Simplex diameter below which the search restarts.
    pub xtol: f64,
    /// Spread of simplex values below which the search restarts.
    pub ftol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            budget: 500,
            seed: 0,
            initial_step: 0.5,
            xtol: 1e-8,
            ftol: 1e-12,
        }
    }
}

struct Tracker<F> {
    objective: F,
    budget: usize,
    history: Vec<TrialRecord>,
    best_x: Vec<f64>,
    best_f: f64,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    /// `None` once the budget is spent.
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.history.len() >= self.budget {
            return None;
        }
        let mut f = (self.objective)(x);
        if f.is_nan() {
            f = f64::INFINITY;
        }
        if self.history.is_empty() || f < self.best_f {
            self.best_f = f;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
        }
        self.history.push(TrialRecord {
            trial_index: self.history.len(),
            loss: f,
            best_so_far: self.best_f,
        });
        Some(f)
    }
}

/// Minimises `objective` from `x0` with default options, a given budget and
/// seed.
pub fn minimize<F>(objective: F, x0: &[f64], budget: usize, seed: u64) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> f64,
{
    minimize_with(
        objective,
        x0,
        &MinimizeOptions {
            budget,
            seed,
            ..Default::default()
        },
    )
}

pub fn minimize_with<F>(objective: F, x0: &[f64], opts: &MinimizeOptions) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> f64,
{
    if opts.budget < 1 {
        return Err(Error::argument("optimizer budget must be at least 1"));
    }
    if !(opts.initial_step.is_finite() && opts.initial_step > 0.0) {
        return Err(Error::argument("initial simplex step must be positive"));
    }
    let mut tracker = Tracker {
        objective,
        budget: opts.budget,
        history: Vec::with_capacity(opts.budget),
        best_x: x0.to_vec(),
        best_f: f64::INFINITY,
    };
    nelder_mead(&mut tracker, x0, opts);
    Ok(Minimum {
        params: tracker.best_x,
        loss: tracker.best_f,
        history: tracker.history,
    })
}

fn nelder_mead<F: FnMut(&[f64]) -> f64>(t: &mut Tracker<F>, x0: &[f64], opts: &MinimizeOptions) {
    let n = x0.len();
    let Some(f0) = t.eval(x0) else { return };
    if n == 0 {
        return;
    }
    let dim = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / dim, 0.75 - 0.5 / dim, 1.0 - 1.0 / dim);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut center = (x0.to_vec(), f0);
    let mut restart = false;
    loop {
        let mut simplex = Vec::with_capacity(n + 1);
        simplex.push(center.clone());
        for i in 0..n {
            let mut v = center.0.clone();
            if restart {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                v[i] += sign * opts.initial_step * rng.random_range(0.5..=1.0);
            } else {
                v[i] += opts.initial_step;
            }
            let Some(f) = t.eval(&v) else { return };
            simplex.push((v, f));
        }

        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let (fbest, fworst) = (simplex[0].1, simplex[n].1);
            let diameter = simplex[1..]
                .iter()
                .map(|(v, _)| max_abs_diff(v, &simplex[0].0))
                .fold(0.0, f64::max);
            if (fworst - fbest).abs() <= opts.ftol * (1.0 + fbest.abs()) || diameter <= opts.xtol {
                break;
            }

            let mut centroid = vec![0.0; n];
            for (v, _) in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / dim;
                }
            }
            let worst = simplex[n].0.clone();
            let along = |coef: f64, from: &[f64]| -> Vec<f64> {
                centroid.iter().zip(from).map(|(c, x)| c + coef * (x - c)).collect()
            };

            let xr = along(-alpha, &worst);
            let Some(fr) = t.eval(&xr) else { return };
            if fr < fbest {
                let xe = along(-alpha * gamma, &worst);
                let Some(fe) = t.eval(&xe) else { return };
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc, accept) = if fr < fworst {
                let xc = along(-alpha * rho, &worst);
                let Some(fc) = t.eval(&xc) else { return };
                (xc, fc, fc <= fr)
            } else {
                let xc = along(rho, &worst);
                let Some(fc) = t.eval(&xc) else { return };
                (xc, fc, fc < fworst)
            };
            if accept {
                simplex[n] = (xc, fc);
                continue;
            }
            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                for (x, a) in vertex.0.iter_mut().zip(&anchor) {
                    *x = a + sigma * (*x - a);
                }
                let Some(f) = t.eval(&vertex.0) else { return };
                vertex.1 = f;
            }
        }

        center = (t.best_x.clone(), t.best_f);
        restart = true;
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Angles drawn uniformly from `[-scale, scale]`.
pub fn random_init(num_params: usize, seed: u64, scale: f64) -> Result<Vec<f64>> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::argument(format!("init scale must be positive, got {scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..num_params).map(|_| rng.random_range(-scale..=scale)).collect())
}
