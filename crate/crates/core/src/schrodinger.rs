//! Error in inferring `P_A²` from a measurement of `P_B`.
//!
//! Inferring `P_A` by `g₀ p_B` has a vanishing error for large `r`, but the
//! squared estimate carries an absolute error of order one. This is what
//! reconciles continuous `X_A`, `P_A` outcomes with `X_A² + P_A²` taking only
//! odd-integer values.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gaussian::{inference_variance_optimal, Gaussian1D, SqueezeParams};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub relative_error_e: f64,
    pub absolute_error_xi: f64,
    pub p_b_outcome: f64,
}

impl ErrorBudget {
    pub fn new(p: &SqueezeParams, p_b: f64) -> Result<Self> {
        Ok(Self { relative_error_e: relative_error(p, p_b)?, absolute_error_xi: absolute_error_xi(p, p_b), p_b_outcome: p_b })
    }

    /// The estimate `g₀ |p_B|` of `|p_A|`.
    pub fn p_estimate(&self, p: &SqueezeParams) -> f64 {
        p.g0 * self.p_b_outcome.abs()
    }
}

/// `e = Δ_inf p_A / |p_est|` with `p_est = g₀ p_B`.
pub fn relative_error(p: &SqueezeParams, p_b: f64) -> Result<f64> {
    let est = p.g0 * p_b;
    if est == 0.0 || !est.is_finite() {
        return Err(Error::domain(
            "relative_error",
            format!("estimate g0*p_B = {est} is zero or non-finite (r = {}, p_B = {p_b}); relative error undefined", p.r),
        ));
    }
    Ok(inference_variance_optimal(p).sqrt() / est.abs())
}

/// `ξ = 2 e p_est² = √2 tanh(2r) |p_B| / √cosh(2r)`.
pub fn absolute_error_xi(p: &SqueezeParams, p_b: f64) -> f64 {
    2.0f64.sqrt() / p.cosh2r().sqrt() * p.g0 * p_b.abs()
}

/// Mean of `|X|` for `X ~ N(0, σ²)`.
pub fn halfgauss_mean_abs(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain("halfgauss_mean_abs", format!("sigma must be > 0, got {sigma}")));
    }
    Ok(sigma * (2.0 / PI).sqrt())
}

/// Homodyne bookkeeping of `E²⟨X_A² + g₀² P_B²⟩` against `E²(1 + 2n̄)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomodyneCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub relative_gap: f64,
}

pub fn homodyne_sum_check(p: &SqueezeParams, lo_amplitude: f64) -> Result<HomodyneCheck> {
    if !(lo_amplitude > 0.0) {
        return Err(Error::domain("homodyne_sum_check", format!("local oscillator amplitude must be > 0, got {lo_amplitude}")));
    }
    let e2 = lo_amplitude * lo_amplitude;
    let c = p.cosh2r();
    let lhs = e2 * (c - 1.0 / (2.0 * c));
    let rhs = e2 * c;
    let gap = e2 / (2.0 * c);
    Ok(HomodyneCheck { lhs, rhs, gap, relative_gap: gap / rhs })
}

/// Coefficients of `P_A² − g² P_B²` in the vacuum inputs:
/// `a·P_A(0)² + b·P_B(0)² + c·P_A(0)P_B(0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualCoefficients {
    pub a: f64,
    pub b: f64,
    pub cross: f64,
}

pub fn p_squared_residual_coefficients(p: &SqueezeParams, g: f64) -> ResidualCoefficients {
    let (c2, s2) = (p.r.cosh().powi(2), p.r.sinh().powi(2));
    let g2 = g * g;
    ResidualCoefficients { a: c2 - g2 * s2, b: s2 - g2 * c2, cross: -p.sinh2r() * (1.0 - g2) }
}

/// Mean and variance of `P_A² − g² P_B²` over independent vacuum inputs.
///
/// Vacuum quadratures are zero-mean Gaussians of variance 1/2, so by Isserlis
/// `⟨P⁴⟩ = 3/4`, `Var(P²) = 1/2`, `Var(P_A(0) P_B(0)) = 1/4`, and the three
/// terms are mutually uncorrelated.
pub fn p_squared_residual_moments(p: &SqueezeParams, g: f64) -> Gaussian1D {
    let k = p_squared_residual_coefficients(p, g);
    Gaussian1D { mean: 0.5 * (k.a + k.b), variance: 0.5 * (k.a * k.a + k.b * k.b) + 0.25 * k.cross * k.cross }
}
