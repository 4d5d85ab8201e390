//! Numerical laboratory for the Schrödinger form of the EPR paradox.
//!
//! - [`gaussian`]: moments and EPR-steering quantities of the two-mode squeezed state
//! - [`schrodinger`]: error budget for inferring `P_A²` from `P_B`
//! - [`wmr`]: macroscopic-realism bounds and the incompleteness criterion
//! - [`phase_space`]: Q and Wigner densities and exact Q samplers
//! - [`sim`]: forward-backward Ornstein-Uhlenbeck trajectories for measurement by amplification

pub mod error;
pub mod gaussian;
pub mod phase_space;
pub mod rng;
pub mod schrodinger;
pub mod sim;
pub mod special;
pub mod wmr;

#[cfg(any(test, feature = "testkit"))]
pub mod testkit;

pub use error::{Error, Result};
pub use gaussian::{CriterionVerdict, Gaussian1D, Gaussian2D, SqueezeParams};
pub use phase_space::{PhasePoint, Sector, SectorGaussian};
pub use rng::RngStream;
pub use schrodinger::ErrorBudget;
pub use sim::{BandReport, Direction, Setting, SimConfig, TrajectoryEnsemble};
pub use wmr::{BinningScheme, CriterionReport, MethodTag, RegionProbabilities};
