//! Menu selection accuracy as a function of item count.
//!
//! A selection is modelled as the target's centre direction plus Gaussian
//! angular noise, except that with probability `lapse` the direction is
//! uniformly random. A trial succeeds when the direction lands in the
//! target's sector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use statrs::function::erf::erf;
use thiserror::Error;

use crate::geom::Point;
use crate::menu::{select_from_displacement, PieMenuConfig};

/// Success rates reported for 2, 4, 8 and 16 items (48 trials × 5 subjects each).
pub const OBSERVED_RATES: [(usize, f64); 4] = [(2, 0.996), (4, 0.983), (8, 0.959), (16, 0.738)];

const SWIPE_LENGTH: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    /// Standard deviation of the angular error, degrees.
    pub sigma: f64,
    pub lapse: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("sigma must be positive, got {0}")]
    BadSigma(f64),
    #[error("lapse must be within [0, 1], got {0}")]
    BadLapse(f64),
    #[error("need at least {needed} observation(s), got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("observation for {n_items} items has rate {rate} outside [0, 1]")]
    BadRate { n_items: usize, rate: f64 },
    #[error("item count must be at least 2, got {0}")]
    BadItemCount(usize),
}

impl NoiseModel {
    pub fn new(sigma: f64, lapse: f64) -> Result<Self, FitError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(FitError::BadSigma(sigma));
        }
        if !(0.0..=1.0).contains(&lapse) {
            return Err(FitError::BadLapse(lapse));
        }
        Ok(Self { sigma, lapse })
    }
}

/// `(1 - lapse) * P(|e| < 180/n) + lapse / n` with `e ~ N(0, sigma²)`.
pub fn analytic_success(model: &NoiseModel, n_items: usize) -> f64 {
    let n = n_items as f64;
    let half = 180.0 / n;
    let hit = erf(half / (model.sigma * std::f64::consts::SQRT_2));
    (1.0 - model.lapse) * hit + model.lapse / n
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationResult {
    pub n_items: usize,
    pub trials: u64,
    pub successes: u64,
}

impl SimulationResult {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Monte Carlo of swipe selections through the real direction mapper.
pub fn simulate_exp1(model: &NoiseModel, n_items: usize, trials: u64, seed: u64) -> SimulationResult {
    let menu = PieMenuConfig::evenly_spaced(n_items);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, model.sigma).expect("sigma validated by NoiseModel");
    let mut successes = 0;
    for _ in 0..trials {
        let target = rng.gen_range(0..n_items);
        let direction = if rng.gen::<f64>() < model.lapse {
            rng.gen_range(0.0..360.0)
        } else {
            menu.items[target].center_angle + noise.sample(&mut rng)
        };
        let swipe = Point::from_angle(direction) * SWIPE_LENGTH;
        if select_from_displacement(swipe, &menu, 1.0) == Some(target) {
            successes += 1;
        }
    }
    SimulationResult { n_items, trials, successes }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub n_items: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub sigma_step: f64,
    pub sigma_max: f64,
    pub lapse_step: f64,
    pub lapse_max: f64,
    /// Hold the lapse rate fixed and fit sigma alone.
    pub fixed_lapse: Option<f64>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { sigma_step: 0.05, sigma_max: 45.0, lapse_step: 0.001, lapse_max: 0.1, fixed_lapse: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub n_items: usize,
    pub observed: f64,
    pub fitted: f64,
}

impl Residual {
    pub fn error(&self) -> f64 {
        self.fitted - self.observed
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: NoiseModel,
    pub sse: f64,
    pub residuals: Vec<Residual>,
    pub warnings: Vec<String>,
}

fn sse(obs: &[Observation], sigma: f64, lapse: f64) -> f64 {
    let m = NoiseModel { sigma, lapse };
    obs.iter().map(|o| (analytic_success(&m, o.n_items) - o.rate).powi(2)).sum()
}

/// Least-squares fit of `(sigma, lapse)`: exhaustive grid, then a
/// step-halving pattern search from the best grid point.
pub fn fit_noise_params(observed: &[Observation], opts: &FitOptions) -> Result<FitResult, FitError> {
    let needed = if opts.fixed_lapse.is_some() { 1 } else { 2 };
    if observed.len() < needed {
        return Err(FitError::TooFewObservations { needed, got: observed.len() });
    }
    for o in observed {
        if o.n_items < 2 {
            return Err(FitError::BadItemCount(o.n_items));
        }
        if !(0.0..=1.0).contains(&o.rate) {
            return Err(FitError::BadRate { n_items: o.n_items, rate: o.rate });
        }
    }
    if let Some(l) = opts.fixed_lapse {
        if !(0.0..=1.0).contains(&l) {
            return Err(FitError::BadLapse(l));
        }
    }

    let sigma_steps = (opts.sigma_max / opts.sigma_step).round() as usize;
    let lapse_grid: Vec<f64> = match opts.fixed_lapse {
        Some(l) => vec![l],
        None => {
            let steps = (opts.lapse_max / opts.lapse_step).round() as usize;
            (0..=steps).map(|j| j as f64 * opts.lapse_step).collect()
        }
    };
    let mut best = (f64::INFINITY, opts.sigma_step, lapse_grid[0]);
    for i in 1..=sigma_steps {
        let sigma = i as f64 * opts.sigma_step;
        for &lapse in &lapse_grid {
            let e = sse(observed, sigma, lapse);
            if e < best.0 {
                best = (e, sigma, lapse);
            }
        }
    }

    let (mut err, mut sigma, mut lapse) = best;
    let mut ds = opts.sigma_step / 2.0;
    let mut dl = if opts.fixed_lapse.is_some() { 0.0 } else { opts.lapse_step / 2.0 };
    while ds > 1e-10 || dl > 1e-12 {
        let mut moved = false;
        for (a, b) in [(ds, 0.0), (-ds, 0.0), (0.0, dl), (0.0, -dl)] {
            let (s, l) = (sigma + a, lapse + b);
            if s <= 0.0 || !(0.0..=1.0).contains(&l) || (a == 0.0 && b == 0.0) {
                continue;
            }
            let e = sse(observed, s, l);
            if e < err {
                (err, sigma, lapse, moved) = (e, s, l, true);
            }
        }
        if !moved {
            ds /= 2.0;
            dl /= 2.0;
        }
    }

    let model = NoiseModel { sigma, lapse };
    let mut warnings = Vec::new();
    if observed.iter().all(|o| o.rate >= 1.0) {
        warnings.push("all observed rates are 1.0; sigma sits at the lower search boundary".to_string());
    }
    let residuals = observed
        .iter()
        .map(|o| Residual { n_items: o.n_items, observed: o.rate, fitted: analytic_success(&model, o.n_items) })
        .collect();
    Ok(FitResult { model, sse: err, residuals, warnings })
}
