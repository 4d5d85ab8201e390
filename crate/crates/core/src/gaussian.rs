//! Closed-form statistics of the two-mode squeezed state.
//!
//! Quadratures are `X = (a + a†)/√2`, `P = (a − a†)/(i√2)`, so the vacuum
//! variance is 1/2. Outcomes of measuring `X̂_A` etc. are written in lower
//! case (`x_a`, `p_b`); upper and lower case name the same quantity.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Largest accepted squeeze parameter.
pub const MAX_SQUEEZE: f64 = 12.0;

/// Vacuum variance of a single quadrature.
pub const VACUUM_VARIANCE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParams {
    pub r: f64,
    /// `tanh r`
    pub eta: f64,
    /// Optimal inference gain `tanh 2r`.
    pub g0: f64,
    /// Variance of each quadrature, `cosh(2r)/2`.
    pub sigma_sq: f64,
}

impl SqueezeParams {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || !(0.0..=MAX_SQUEEZE).contains(&r) {
            return Err(Error::SqueezeRange(r));
        }
        Ok(Self { r, eta: r.tanh(), g0: (2.0 * r).tanh(), sigma_sq: 0.5 * (2.0 * r).cosh() })
    }

    pub fn cosh2r(&self) -> f64 {
        (2.0 * self.r).cosh()
    }

    pub fn sinh2r(&self) -> f64 {
        (2.0 * self.r).sinh()
    }

    /// Standard deviation of each quadrature.
    pub fn sigma(&self) -> f64 {
        self.sigma_sq.sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gaussian1D {
    pub mean: f64,
    pub variance: f64,
}

impl Gaussian1D {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !mean.is_finite() || !variance.is_finite() || variance <= 0.0 {
            return Err(Error::domain("Gaussian1D", format!("need finite mean and variance > 0, got ({mean}, {variance})")));
        }
        Ok(Self { mean, variance })
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let d = x - self.mean;
        (-d * d / (2.0 * self.variance)).exp() / (2.0 * PI * self.variance).sqrt()
    }

    pub fn sample(&self, stream: &mut RngStream) -> f64 {
        stream.gaussian(self.mean, self.variance)
    }
}

/// Bivariate Gaussian with a symmetric positive-definite covariance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gaussian2D {
    pub means: [f64; 2],
    pub cov: [[f64; 2]; 2],
}

impl Gaussian2D {
    pub fn new(means: [f64; 2], cov: [[f64; 2]; 2]) -> Result<Self> {
        let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
        if cov[0][1] != cov[1][0] || cov[0][0] <= 0.0 || det <= 0.0 {
            return Err(Error::domain("Gaussian2D", format!("covariance {cov:?} is not symmetric positive definite")));
        }
        Ok(Self { means, cov })
    }

    pub fn marginal(&self, i: usize) -> Gaussian1D {
        Gaussian1D { mean: self.means[i], variance: self.cov[i][i] }
    }

    /// Distribution of component `i` given component `1 - i` equals `value`.
    pub fn conditional(&self, i: usize, value: f64) -> Gaussian1D {
        let j = 1 - i;
        let k = self.cov[i][j] / self.cov[j][j];
        Gaussian1D { mean: self.means[i] + k * (value - self.means[j]), variance: self.cov[i][i] - k * self.cov[i][j] }
    }

    pub fn var_of_difference(&self) -> f64 {
        self.cov[0][0] + self.cov[1][1] - 2.0 * self.cov[0][1]
    }

    pub fn var_of_sum(&self) -> f64 {
        self.cov[0][0] + self.cov[1][1] + 2.0 * self.cov[0][1]
    }

    pub fn pdf(&self, x: [f64; 2]) -> f64 {
        let c = &self.cov;
        let det = c[0][0] * c[1][1] - c[0][1] * c[0][1];
        let (d0, d1) = (x[0] - self.means[0], x[1] - self.means[1]);
        let q = (c[1][1] * d0 * d0 - 2.0 * c[0][1] * d0 * d1 + c[0][0] * d1 * d1) / det;
        (-0.5 * q).exp() / (2.0 * PI * det.sqrt())
    }

    /// One draw via the Cholesky factor.
    pub fn sample(&self, stream: &mut RngStream) -> [f64; 2] {
        let l00 = self.cov[0][0].sqrt();
        let l10 = self.cov[1][0] / l00;
        let l11 = (self.cov[1][1] - l10 * l10).sqrt();
        let (z0, z1) = (stream.normal(), stream.normal());
        [self.means[0] + l00 * z0, self.means[1] + l10 * z0 + l11 * z1]
    }
}

pub fn quadrature_variance(p: &SqueezeParams) -> f64 {
    p.sigma_sq
}

/// Minimal inference variance `1/(2 cosh 2r)`, shared by `X_A` and `P_A`.
pub fn inference_variance_optimal(p: &SqueezeParams) -> f64 {
    1.0 / (2.0 * p.cosh2r())
}

/// `(Var(X_A − g X_B), Var(P_A + g P_B))` for an arbitrary gain `g`.
pub fn inference_variance_general(p: &SqueezeParams, g: f64) -> (f64, f64) {
    let v = 0.5 * (p.cosh2r() * (1.0 + g * g) - 2.0 * g * p.sinh2r());
    (v, v)
}

/// Distribution of `x_A` given the outcome `x_b`.
pub fn conditional_distribution_x(p: &SqueezeParams, x_b: f64) -> Gaussian1D {
    Gaussian1D { mean: p.g0 * x_b, variance: inference_variance_optimal(p) }
}

/// Distribution of `p_A` given the outcome `p_b`; anticorrelated with `p_b`.
pub fn conditional_distribution_p(p: &SqueezeParams, p_b: f64) -> Gaussian1D {
    Gaussian1D { mean: -p.g0 * p_b, variance: inference_variance_optimal(p) }
}

/// Joint distribution of `(x_A, x_B)`.
pub fn joint_distribution_x(p: &SqueezeParams) -> Gaussian2D {
    let (v, c) = (p.sigma_sq, 0.5 * p.sinh2r());
    Gaussian2D { means: [0.0; 2], cov: [[v, c], [c, v]] }
}

/// Joint distribution of `(p_A, p_B)`.
pub fn joint_distribution_p(p: &SqueezeParams) -> Gaussian2D {
    let (v, c) = (p.sigma_sq, -0.5 * p.sinh2r());
    Gaussian2D { means: [0.0; 2], cov: [[v, c], [c, v]] }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub product: f64,
    pub satisfied: bool,
}

/// EPR steering test `Δ_inf X · Δ_inf P < 1/2` (strict).
pub fn epr_criterion(dinf_x: f64, dinf_p: f64) -> Result<CriterionVerdict> {
    if !(dinf_x >= 0.0 && dinf_p >= 0.0) {
        return Err(Error::domain("epr_criterion", format!("inference deviations must be >= 0, got ({dinf_x}, {dinf_p})")));
    }
    let product = dinf_x * dinf_p;
    Ok(CriterionVerdict { product, satisfied: product < 0.5 })
}

/// `⟨n̂_A⟩ = sinh² r`.
pub fn mean_photon_number(p: &SqueezeParams) -> f64 {
    p.r.sinh().powi(2)
}

/// `⟨X_A² + P_A²⟩ = 1 + 2⟨n̂_A⟩ = cosh 2r`.
pub fn quadrature_sum_mean(p: &SqueezeParams) -> f64 {
    1.0 + 2.0 * mean_photon_number(p)
}
