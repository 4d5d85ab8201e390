use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ou::{Boundary, OuProcess, Scheme, TimeGrid};
use super::{Direction, Setting, SimConfig, TrajectoryEnsemble};
use crate::error::{Error, Result};
use crate::gaussian::{Gaussian1D, SqueezeParams, VACUUM_VARIANCE};
use crate::phase_space::PhasePoint;
use crate::rng::RngStream;

/// Default eigenstate width as a fraction of the component separation.
pub const DEFAULT_WIDTH_FRACTION: f64 = 0.05;

/// Single-mode run on an equal superposition of two near-eigenstates of `x̂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionConfig {
    pub x1: f64,
    pub x2: f64,
    pub g: f64,
    pub t_total: f64,
    pub dt: f64,
    pub n_traj: usize,
    pub seed: u64,
    /// Q-variance excess `v_e` of each component above vacuum.
    /// `None` means `(0.05·|x1 − x2|)²`.
    pub eigen_excess: Option<f64>,
    pub scheme: Scheme,
    pub record_stride: usize,
}

impl SuperpositionConfig {
    pub fn new(x1: f64, x2: f64, g: f64, t_total: f64, n_traj: usize, seed: u64) -> Result<Self> {
        let grid = TimeGrid::default_for(g, t_total)?;
        let cfg = Self { x1, x2, g, t_total, dt: grid.dt, n_traj, seed, eigen_excess: None, scheme: Scheme::Exact, record_stride: 1 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn excess(&self) -> f64 {
        self.eigen_excess.unwrap_or_else(|| (DEFAULT_WIDTH_FRACTION * (self.x1 - self.x2)).powi(2))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x1.is_finite() && self.x2.is_finite()) || self.x1 == self.x2 {
            return Err(Error::Config(format!("superposition needs two distinct finite centers, got {} and {}", self.x1, self.x2)));
        }
        if !(self.excess() > 0.0) || !self.excess().is_finite() {
            return Err(Error::Config(format!("eigenstate excess must be > 0, got {}", self.excess())));
        }
        self.sim_config().and_then(|c| c.validate())
    }

    fn sim_config(&self) -> Result<SimConfig> {
        Ok(SimConfig {
            squeeze: SqueezeParams::new(0.0)?,
            g: self.g,
            t_total: self.t_total,
            dt: self.dt,
            n_traj: self.n_traj,
            seed: self.seed,
            setting: Setting::SingleMode,
            scheme: self.scheme,
            record_stride: self.record_stride,
        })
    }
}

/// Boundary data of a superposition run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionInfo {
    pub x1: f64,
    pub x2: f64,
    pub eigen_excess: f64,
    /// Standard deviation of each amplified component at `T`.
    pub component_sd: f64,
    /// `e^{gT}|x1 − x2|`.
    pub separation: f64,
    /// `separation ≥ 4·component_sd`.
    pub resolvable: bool,
}

impl SuperpositionInfo {
    /// Centers of the two components in outcome units.
    pub fn centers(&self) -> [f64; 2] {
        [self.x1, self.x2]
    }
}

/// Backward `x` from the amplified two-component mixture, forward `p` from
/// the initial `p` marginal. Interference in the `x` marginal is neglected.
pub fn simulate_superposition(cfg: &SuperpositionConfig) -> Result<TrajectoryEnsemble> {
    cfg.validate()?;
    let sim = cfg.sim_config()?;
    let grid = sim.grid()?;
    let gain = sim.gain();
    let v_e = cfg.excess();
    let component_var = VACUUM_VARIANCE + gain * gain * v_e;
    let terminal = Boundary::Mixture(vec![
        (0.5, Gaussian1D::new(gain * cfg.x1, component_var)?),
        (0.5, Gaussian1D::new(gain * cfg.x2, component_var)?),
    ]);
    // x-squeezed components have p variance 1/(4 v_e) plus the vacuum
    let initial = Boundary::Gaussian(Gaussian1D::new(0.0, VACUUM_VARIANCE + 0.25 / v_e)?);
    let process = OuProcess::new(cfg.g, VACUUM_VARIANCE, cfg.scheme)?;
    super::ou::integrate_check(&process, &grid)?;

    let paths = (0..cfg.n_traj as u64)
        .into_par_iter()
        .map(|run| {
            let x = process.path(&terminal, &grid, true, &mut RngStream::for_path(cfg.seed, run, 0));
            let p = process.path(&initial, &grid, false, &mut RngStream::for_path(cfg.seed, run, 2));
            x.into_iter().zip(p).map(|(x, p)| PhasePoint::new(x, p, 0.0, 0.0)).collect()
        })
        .collect();

    let component_sd = component_var.sqrt();
    let separation = gain * (cfg.x1 - cfg.x2).abs();
    let info = SuperpositionInfo {
        x1: cfg.x1,
        x2: cfg.x2,
        eigen_excess: v_e,
        component_sd,
        separation,
        resolvable: separation >= 4.0 * component_sd,
    };
    Ok(TrajectoryEnsemble {
        times: grid.recorded_times(),
        paths,
        directions: [Direction::Backward, Direction::Forward, Direction::None, Direction::None],
        config: sim,
        superposition: Some(info),
    })
}
