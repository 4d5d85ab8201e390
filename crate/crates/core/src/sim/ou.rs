//! Ornstein-Uhlenbeck integration in forward and backward time.
//!
//! A variable obeys `du/dτ = −g u + ξ(τ)` with `⟨ξ(τ)ξ(τ')⟩ = 2 g s δ(τ − τ')`,
//! so its stationary variance is the noise floor `s` (1/2 for a single
//! quadrature, 1 for the sum/difference variables). For backward variables
//! `τ = T − t`: the value is drawn at `t = T` and integrated toward `t = 0`,
//! which on the physical axis looks like growth.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian1D;
use crate::rng::RngStream;

/// Largest accepted `g·dt`.
pub const MAX_RATE_STEP: f64 = 0.1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// `u ← u e^{−gΔ} + N(0, (1 − e^{−2gΔ}) s)`; no time-step bias.
    #[default]
    Exact,
    /// `u ← u (1 − gΔ) + N(0, 2 g s Δ)`.
    EulerMaruyama,
}

/// Uniform time grid `t_k = k·dt`, `k = 0..=steps`, recorded every `stride` steps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub dt: f64,
    pub steps: usize,
    pub stride: usize,
}

impl TimeGrid {
    pub fn new(t_total: f64, dt: f64, stride: usize) -> Result<Self> {
        if !(t_total > 0.0 && dt > 0.0) || !t_total.is_finite() {
            return Err(Error::Config(format!("need T > 0 and dt > 0, got T={t_total}, dt={dt}")));
        }
        let ratio = t_total / dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) || steps < 1.0 {
            return Err(Error::Config(format!("T/dt = {ratio} is not a whole number of steps")));
        }
        let steps = steps as usize;
        if stride == 0 || !steps.is_multiple_of(stride) {
            return Err(Error::Config(format!("record stride {stride} must divide the {steps} steps")));
        }
        Ok(Self { dt: t_total / steps as f64, steps, stride })
    }

    /// The grid with `dt = min(0.01/g, T/200)`, rounded so `T/dt` is whole.
    pub fn default_for(rate: f64, t_total: f64) -> Result<Self> {
        let target = if rate > 0.0 { (0.01 / rate).min(t_total / 200.0) } else { t_total / 200.0 };
        let steps = (t_total / target).ceil().max(1.0);
        Self::new(t_total, t_total / steps, 1)
    }

    pub fn t_total(&self) -> f64 {
        self.dt * self.steps as f64
    }

    pub fn records(&self) -> usize {
        self.steps / self.stride + 1
    }

    pub fn recorded_times(&self) -> Vec<f64> {
        (0..self.records()).map(|i| (i * self.stride) as f64 * self.dt).collect()
    }

    pub fn with_stride(self, stride: usize) -> Result<Self> {
        if stride == 0 || !self.steps.is_multiple_of(stride) {
            return Err(Error::Config(format!("record stride {stride} must divide the {} steps", self.steps)));
        }
        Ok(Self { stride, ..self })
    }
}

/// Boundary distribution of a trajectory variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Boundary {
    Gaussian(Gaussian1D),
    /// `(weight, component)` pairs; weights sum to 1.
    Mixture(Vec<(f64, Gaussian1D)>),
}

impl Boundary {
    pub fn sample(&self, stream: &mut RngStream) -> f64 {
        match self {
            Boundary::Gaussian(g) => g.sample(stream),
            Boundary::Mixture(parts) => {
                let u = stream.uniform();
                let mut acc = 0.0;
                for (w, g) in parts {
                    acc += w;
                    if u <= acc {
                        return g.sample(stream);
                    }
                }
                parts.last().expect("mixture has components").1.sample(stream)
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Boundary::Gaussian(g) => g.mean,
            Boundary::Mixture(parts) => parts.iter().map(|(w, g)| w * g.mean).sum(),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            Boundary::Gaussian(g) => g.variance,
            Boundary::Mixture(parts) => {
                let m = self.mean();
                parts.iter().map(|(w, g)| w * (g.variance + (g.mean - m).powi(2))).sum()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let Boundary::Mixture(parts) = self {
            let total: f64 = parts.iter().map(|p| p.0).sum();
            if parts.is_empty() || parts.iter().any(|p| p.0 < 0.0) || (total - 1.0).abs() > 1e-12 {
                return Err(Error::Config(format!("mixture weights must be >= 0 and sum to 1, got sum {total}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OuProcess {
    pub rate: f64,
    /// Stationary variance.
    pub floor: f64,
    pub scheme: Scheme,
}

impl OuProcess {
    pub fn new(rate: f64, floor: f64, scheme: Scheme) -> Result<Self> {
        if !(rate >= 0.0) || !rate.is_finite() || !(floor >= 0.0) {
            return Err(Error::Config(format!("OU rate must be >= 0 and floor >= 0, got rate={rate}, floor={floor}")));
        }
        Ok(Self { rate, floor, scheme })
    }

    fn check_step(&self, dt: f64) -> Result<()> {
        if self.rate * dt > MAX_RATE_STEP {
            return Err(Error::Stability(self.rate * dt));
        }
        Ok(())
    }

    /// Coefficients `(a, b)` of the update `u ← a·u + b·z`, `z ~ N(0, 1)`.
    fn update(&self, dt: f64) -> (f64, f64) {
        match self.scheme {
            Scheme::Exact => {
                let a = (-self.rate * dt).exp();
                (a, ((1.0 - a * a) * self.floor).sqrt())
            }
            Scheme::EulerMaruyama => (1.0 - self.rate * dt, (2.0 * self.rate * self.floor * dt).sqrt()),
        }
    }

    /// One recorded path; `out[i]` is the value at recorded time `i`.
    pub(crate) fn path(&self, boundary: &Boundary, grid: &TimeGrid, backward: bool, stream: &mut RngStream) -> Vec<f64> {
        let (a, b) = self.update(grid.dt);
        let records = grid.records();
        let mut out = vec![0.0; records];
        let mut u = boundary.sample(stream);
        if backward {
            out[records - 1] = u;
            for k in (0..grid.steps).rev() {
                u = a * u + b * stream.normal();
                if k % grid.stride == 0 {
                    out[k / grid.stride] = u;
                }
            }
        } else {
            out[0] = u;
            for k in 1..=grid.steps {
                u = a * u + b * stream.normal();
                if k % grid.stride == 0 {
                    out[k / grid.stride] = u;
                }
            }
        }
        out
    }
}

pub(crate) fn integrate_check(process: &OuProcess, grid: &TimeGrid) -> Result<()> {
    process.check_step(grid.dt)
}

fn integrate(
    process: &OuProcess,
    boundary: &Boundary,
    grid: &TimeGrid,
    n: usize,
    seed: u64,
    slot: u8,
    backward: bool,
) -> Result<Vec<Vec<f64>>> {
    process.check_step(grid.dt)?;
    boundary.validate()?;
    Ok((0..n as u64).into_par_iter().map(|i| process.path(boundary, grid, backward, &mut RngStream::for_path(seed, i, slot))).collect())
}

/// Paths drawn from `terminal` at `t = T` and integrated back to `t = 0`.
/// Path `i` uses the stream `(seed, i, slot)`.
pub fn integrate_backward_ou(
    process: &OuProcess,
    terminal: &Boundary,
    grid: &TimeGrid,
    n: usize,
    seed: u64,
    slot: u8,
) -> Result<Vec<Vec<f64>>> {
    integrate(process, terminal, grid, n, seed, slot, true)
}

/// Paths drawn from `initial` at `t = 0` and integrated forward to `t = T`.
pub fn integrate_forward_ou(
    process: &OuProcess,
    initial: &Boundary,
    grid: &TimeGrid,
    n: usize,
    seed: u64,
    slot: u8,
) -> Result<Vec<Vec<f64>>> {
    integrate(process, initial, grid, n, seed, slot, false)
}
