//! Measurement as amplification, simulated with forward-backward
//! Ornstein-Uhlenbeck trajectories of the Q-function amplitudes.
//!
//! Amplified quadratures are solved backward from a boundary at `t = T`
//! given by the amplified Q marginal; attenuated quadratures are solved
//! forward from the initial Q marginal. Randomness is keyed by
//! `(seed, trajectory, variable slot)` so results do not depend on thread
//! count or ensemble size.

mod bands;
mod epr;
mod io;
mod ou;
mod superposition;

pub use bands::{classify_bands, classify_bands_on, BandReport};
pub use epr::{simulate, simulate_epr, simulate_schrodinger};
pub use io::{read_trajectory_csv, write_trajectory_csv, TrajectoryRow};
pub use ou::{integrate_backward_ou, integrate_forward_ou, Boundary, OuProcess, Scheme, TimeGrid, MAX_RATE_STEP};
pub use superposition::{simulate_superposition, SuperpositionConfig, SuperpositionInfo};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::SqueezeParams;
use crate::phase_space::PhasePoint;

/// Measurement settings at the two sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Setting {
    /// `X̂_A` and `X̂_B` (`g_A, g_B > 0`).
    XX,
    /// `P̂_A` and `P̂_B` (`g_A, g_B < 0`).
    PP,
    /// `X̂_A` and `P̂_B` (`g_A > 0 > g_B`).
    XP,
    #[serde(rename = "single_mode")]
    SingleMode,
}

impl std::str::FromStr for Setting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "XX" | "xx" => Ok(Setting::XX),
            "PP" | "pp" => Ok(Setting::PP),
            "XP" | "xp" => Ok(Setting::XP),
            "single_mode" | "single" => Ok(Setting::SingleMode),
            other => Err(Error::Config(format!("unknown setting '{other}' (expected XX, PP, XP or single_mode)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
    /// Variable not simulated (second mode of a single-mode run).
    None,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
            Direction::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variable {
    XA,
    PA,
    XB,
    PB,
}

impl Variable {
    pub const ALL: [Variable; 4] = [Variable::XA, Variable::PA, Variable::XB, Variable::PB];

    pub fn of(&self, pt: &PhasePoint) -> f64 {
        match self {
            Variable::XA => pt.x_a,
            Variable::PA => pt.p_a,
            Variable::XB => pt.x_b,
            Variable::PB => pt.p_b,
        }
    }

    fn index(&self) -> usize {
        *self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub squeeze: SqueezeParams,
    /// Amplification rate `|g|`; the sign at each site follows from `setting`.
    pub g: f64,
    pub t_total: f64,
    pub dt: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub setting: Setting,
    pub scheme: Scheme,
    /// Keep every `record_stride`-th grid time.
    pub record_stride: usize,
}

impl SimConfig {
    /// Config with the default grid `dt = min(0.01/g, T/200)`.
    pub fn new(squeeze: SqueezeParams, g: f64, t_total: f64, n_traj: usize, seed: u64, setting: Setting) -> Result<Self> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::Config(format!("amplification rate must be > 0, got {g}")));
        }
        let grid = TimeGrid::default_for(g, t_total)?;
        let cfg = Self { squeeze, g, t_total, dt: grid.dt, n_traj, seed, setting, scheme: Scheme::Exact, record_stride: 1 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0) || !self.g.is_finite() {
            return Err(Error::Config(format!("amplification rate must be > 0, got {}", self.g)));
        }
        if self.n_traj == 0 {
            return Err(Error::Config("n_traj must be >= 1".into()));
        }
        self.grid().map(|_| ())
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.t_total, self.dt, self.record_stride)
    }

    /// Signed rates `(g_A, g_B)`.
    pub fn site_rates(&self) -> (f64, f64) {
        match self.setting {
            Setting::XX | Setting::SingleMode => (self.g, self.g),
            Setting::PP => (-self.g, -self.g),
            Setting::XP => (self.g, -self.g),
        }
    }

    /// Total gain `G = e^{|g|T}`.
    pub fn gain(&self) -> f64 {
        (self.g * self.t_total).exp()
    }

    pub fn g_t(&self) -> f64 {
        self.g * self.t_total
    }
}

/// Simulated paths on a shared time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEnsemble {
    pub times: Vec<f64>,
    /// `paths[run][time]`
    pub paths: Vec<Vec<PhasePoint>>,
    /// Integration direction of `x_A, p_A, x_B, p_B`.
    pub directions: [Direction; 4],
    pub config: SimConfig,
    pub superposition: Option<SuperpositionInfo>,
}

impl TrajectoryEnsemble {
    pub fn n_runs(&self) -> usize {
        self.paths.len()
    }

    pub fn direction(&self, v: Variable) -> Direction {
        self.directions[v.index()]
    }

    /// Index of the recorded time equal to `t`.
    pub fn time_index(&self, t: f64) -> Result<usize> {
        let tol = 1e-9 * self.config.t_total.max(1.0);
        self.times.iter().position(|&s| (s - t).abs() <= tol).ok_or_else(|| Error::Config(format!("time {t} is not on the recorded grid")))
    }

    /// Values of `v` across runs at recorded time index `i`.
    pub fn column(&self, v: Variable, i: usize) -> Vec<f64> {
        self.paths.iter().map(|p| v.of(&p[i])).collect()
    }

    /// Amplification `e^{|g| t}` reached at time `t`.
    pub fn amplification_at(&self, t: f64) -> f64 {
        (self.config.g * t).exp()
    }

    /// Amplified values of `v` at index `i` scaled back to outcome units.
    pub fn inferred(&self, v: Variable, i: usize) -> Vec<f64> {
        let a = self.amplification_at(self.times[i]);
        self.paths.iter().map(|p| v.of(&p[i]) / a).collect()
    }

    /// The variable read out by the measurement at site A.
    pub fn primary(&self) -> Variable {
        match self.config.setting {
            Setting::PP => Variable::PA,
            _ => Variable::XA,
        }
    }
}
