//! Husimi Q and Wigner representations of the two-mode squeezed state.
//!
//! Densities are written over the real quadrature coordinates
//! `(x_A, p_A, x_B, p_B)`. Over the complex amplitudes `α = (x_A + i p_A)/√2`,
//! `β = (x_B + i p_B)/√2` the Q prefactor is `(1 − η²)/π²`; the change of
//! variables has Jacobian 1/4, which gives the `(1 − η²)/(4π²)` used here.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gaussian::{Gaussian2D, SqueezeParams, VACUUM_VARIANCE};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x_a: f64,
    pub p_a: f64,
    pub x_b: f64,
    pub p_b: f64,
}

impl PhasePoint {
    pub fn new(x_a: f64, p_a: f64, x_b: f64, p_b: f64) -> Self {
        Self { x_a, p_a, x_b, p_b }
    }

    pub fn is_finite(&self) -> bool {
        self.x_a.is_finite() && self.p_a.is_finite() && self.x_b.is_finite() && self.p_b.is_finite()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    X,
    P,
}

/// Q-function statistics of one sector in the sum/difference variables
/// `u_± = u_A ± u_B`, which are uncorrelated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorGaussian {
    pub sector: Sector,
    /// `Var(u_A + u_B)`
    pub variance_sum: f64,
    /// `Var(u_A − u_B)`
    pub variance_diff: f64,
}

/// Two-mode Q function.
pub fn q_density(pt: &PhasePoint, p: &SqueezeParams) -> f64 {
    let (ep, em) = (1.0 + p.eta, 1.0 - p.eta);
    let exponent = -0.25
        * (ep * (pt.x_a - pt.x_b).powi(2)
            + ep * (pt.p_a + pt.p_b).powi(2)
            + em * (pt.x_a + pt.x_b).powi(2)
            + em * (pt.p_a - pt.p_b).powi(2));
    (1.0 - p.eta * p.eta) / (4.0 * PI * PI) * exponent.exp()
}

/// Normalized x-sector factor of the Q function.
pub fn q_density_x(x_a: f64, x_b: f64, p: &SqueezeParams) -> f64 {
    let norm = (1.0 - p.eta * p.eta).sqrt() / (2.0 * PI);
    norm * (-0.25 * ((1.0 + p.eta) * (x_a - x_b).powi(2) + (1.0 - p.eta) * (x_a + x_b).powi(2))).exp()
}

/// Normalized p-sector factor of the Q function.
pub fn q_density_p(p_a: f64, p_b: f64, p: &SqueezeParams) -> f64 {
    q_density_x(p_a, -p_b, p)
}

/// Sector variances after amplifying that sector for a time `gT`:
/// `1 + e^{2gT} e^{±2r}`, where the 1 is the non-amplified vacuum level.
pub fn q_sector_variances(p: &SqueezeParams, g_t: f64, sector: Sector) -> Result<SectorGaussian> {
    if !(g_t >= 0.0) || !g_t.is_finite() {
        return Err(Error::domain("q_sector_variances", format!("gT must be finite and >= 0, got {g_t}")));
    }
    let amp = (2.0 * g_t).exp();
    let (anti, squeezed) = (1.0 + amp * (2.0 * p.r).exp(), 1.0 + amp * (-2.0 * p.r).exp());
    Ok(match sector {
        Sector::X => SectorGaussian { sector, variance_sum: anti, variance_diff: squeezed },
        Sector::P => SectorGaussian { sector, variance_sum: squeezed, variance_diff: anti },
    })
}

/// `n` independent draws of `(u_+, u_−)` from the amplified sector marginal.
pub fn sample_q(p: &SqueezeParams, g_t: f64, sector: Sector, n: usize, stream: &mut RngStream) -> Result<Vec<(f64, f64)>> {
    let sg = q_sector_variances(p, g_t, sector)?;
    let (ss, sd) = (sg.variance_sum.sqrt(), sg.variance_diff.sqrt());
    Ok((0..n).map(|_| (ss * stream.normal(), sd * stream.normal())).collect())
}

/// Q variance of any single quadrature: symmetric variance plus the hidden vacuum 1/2.
pub fn q_single_quadrature_variance(p: &SqueezeParams) -> f64 {
    p.sigma_sq + VACUUM_VARIANCE
}

/// Q variance of a single quadrature after amplification by `e^{gT}`.
pub fn q_amplified_quadrature_variance(p: &SqueezeParams, g_t: f64) -> f64 {
    VACUUM_VARIANCE + (2.0 * g_t).exp() * p.sigma_sq
}

/// Two-mode Wigner function (non-negative for this state).
pub fn wigner_density(pt: &PhasePoint, p: &SqueezeParams) -> f64 {
    let (up, down) = ((2.0 * p.r).exp() / 2.0, (-2.0 * p.r).exp() / 2.0);
    let exponent =
        -up * ((pt.x_a - pt.x_b).powi(2) + (pt.p_a + pt.p_b).powi(2)) - down * ((pt.x_a + pt.x_b).powi(2) + (pt.p_a - pt.p_b).powi(2));
    exponent.exp() / (PI * PI)
}

/// Wigner marginal of `(x_A, p_B)`: two independent Gaussians of variance `cosh(2r)/2`.
pub fn wigner_marginal_xa_pb(p: &SqueezeParams) -> Gaussian2D {
    Gaussian2D { means: [0.0; 2], cov: [[p.sigma_sq, 0.0], [0.0, p.sigma_sq]] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{covariance, gauss_hermite, mean_var, var_std_error};

    fn sp(r: f64) -> SqueezeParams {
        SqueezeParams::new(r).unwrap()
    }

    /// Tensor-product Gauss-Hermite integral of `f` over R^4 with per-axis scale `s`.
    fn integrate_4d(f: impl Fn(&PhasePoint) -> f64, s: f64) -> f64 {
        let (x, w) = gauss_hermite(40);
        let mut total = 0.0;
        for i in 0..40 {
            for j in 0..40 {
                for k in 0..40 {
                    for l in 0..40 {
                        let pt = PhasePoint::new(s * x[i], s * x[j], s * x[k], s * x[l]);
                        let weight_inv = (x[i] * x[i] + x[j] * x[j] + x[k] * x[k] + x[l] * x[l]).exp();
                        total += w[i] * w[j] * w[k] * w[l] * f(&pt) * weight_inv;
                    }
                }
            }
        }
        total * s.powi(4)
    }

    #[test]
    fn q_vacuum_origin() {
        assert!((q_density(&PhasePoint::default(), &sp(0.0)) - 1.0 / (4.0 * PI * PI)).abs() < 1e-16);
    }

    #[test]
    fn q_concentrates_on_epr_lines() {
        let p = sp(3.0);
        let along = q_density(&PhasePoint::new(2.0, 2.0, 2.0, -2.0), &p);
        let against = q_density(&PhasePoint::new(2.0, 2.0, -2.0, -2.0), &p);
        assert!(along / against > 1e3);
        let against_p = q_density(&PhasePoint::new(2.0, 2.0, 2.0, 2.0), &p);
        assert!(along / against_p > 1e3);
    }

    #[test]
    fn q_and_wigner_normalize() {
        let p = sp(0.5);
        let q = integrate_4d(|pt| q_density(pt, &p), 1.6);
        assert!((q - 1.0).abs() < 1e-8, "{q}");
        let w = integrate_4d(|pt| wigner_density(pt, &p), 1.2);
        assert!((w - 1.0).abs() < 1e-8, "{w}");
    }

    #[test]
    fn q_factorizes_by_sector() {
        let mut s = RngStream::new(9, 0);
        for r in [0.0, 0.7, 2.5] {
            let p = sp(r);
            for _ in 0..200 {
                let pt = PhasePoint::new(3.0 * s.normal(), 3.0 * s.normal(), 3.0 * s.normal(), 3.0 * s.normal());
                let lhs = q_density(&pt, &p).ln();
                let rhs = q_density_x(pt.x_a, pt.x_b, &p).ln() + q_density_p(pt.p_a, pt.p_b, &p).ln();
                assert!((lhs - rhs).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sector_variance_values() {
        let v = q_sector_variances(&sp(0.0), 0.0, Sector::X).unwrap();
        assert_eq!((v.variance_diff, v.variance_sum), (2.0, 2.0));
        let v = q_sector_variances(&sp(2.0), 0.0, Sector::X).unwrap();
        assert!((v.variance_diff - 1.018_316).abs() < 1e-6);
        assert!((v.variance_sum - 55.598_150).abs() < 1e-6);
        let v = q_sector_variances(&sp(2.0), 2.0, Sector::X).unwrap();
        assert!((v.variance_diff - 2.0).abs() < 1e-12);
        assert!((v.variance_sum - (1.0 + 8f64.exp())).abs() < 1e-9);
        let vp = q_sector_variances(&sp(2.0), 2.0, Sector::P).unwrap();
        assert_eq!((vp.variance_sum, vp.variance_diff), (v.variance_diff, v.variance_sum));
        assert!(q_sector_variances(&sp(1.0), -1.0, Sector::X).is_err());
    }

    #[test]
    fn sector_variances_match_q_density_moments() {
        // the unamplified sector variances are the second moments of the Q density
        let p = sp(0.5);
        let v = q_sector_variances(&p, 0.0, Sector::X).unwrap();
        let m_diff = integrate_4d(|pt| (pt.x_a - pt.x_b).powi(2) * q_density(pt, &p), 1.6);
        let m_sum = integrate_4d(|pt| (pt.p_a + pt.p_b).powi(2) * q_density(pt, &p), 1.6);
        assert!((m_diff - v.variance_diff).abs() < 1e-8);
        let vp = q_sector_variances(&p, 0.0, Sector::P).unwrap();
        assert!((m_sum - vp.variance_sum).abs() < 1e-8);
    }

    #[test]
    fn hidden_vacuum_level() {
        for r in [0.0, 1.0, 2.0] {
            let p = sp(r);
            let x = q_sector_variances(&p, 0.0, Sector::X).unwrap();
            // Var(x_A) = (Var(x_+) + Var(x_-))/4
            let single = (x.variance_sum + x.variance_diff) / 4.0;
            assert!((single - q_single_quadrature_variance(&p)).abs() < 1e-12 * single);
            assert!((single - p.sigma_sq - 0.5).abs() < 1e-12 * single);
        }
        let v = q_sector_variances(&sp(4.0), 0.0, Sector::X).unwrap();
        assert!((v.variance_diff - 1.0).abs() < 1e-3);
    }

    #[test]
    fn q_sampler_moments_and_determinism() {
        let p = sp(1.0);
        let n = 1_000_000;
        let draws = sample_q(&p, 0.5, Sector::X, n, &mut RngStream::new(5, 2)).unwrap();
        let again = sample_q(&p, 0.5, Sector::X, n, &mut RngStream::new(5, 2)).unwrap();
        assert_eq!(draws, again);
        let plus: Vec<f64> = draws.iter().map(|d| d.0).collect();
        let minus: Vec<f64> = draws.iter().map(|d| d.1).collect();
        let want = q_sector_variances(&p, 0.5, Sector::X).unwrap();
        let (_, vm) = mean_var(&minus);
        let (_, vp) = mean_var(&plus);
        assert!((vm - want.variance_diff).abs() < 5.0 * var_std_error(want.variance_diff, n));
        assert!((vp - want.variance_sum).abs() < 5.0 * var_std_error(want.variance_sum, n));
        let cov = covariance(&plus, &minus);
        let se = (want.variance_sum * want.variance_diff / n as f64).sqrt();
        assert!(cov.abs() < 5.0 * se);
    }

    #[test]
    fn wigner_values() {
        assert!((wigner_density(&PhasePoint::default(), &sp(0.0)) - 0.101_32).abs() < 1e-5);
        let mut s = RngStream::new(10, 0);
        for r in [0.5, 2.0] {
            let p = sp(r);
            for _ in 0..100_000 {
                let pt = PhasePoint::new(4.0 * s.normal(), 4.0 * s.normal(), 4.0 * s.normal(), 4.0 * s.normal());
                assert!(wigner_density(&pt, &p) >= 0.0);
            }
        }
    }

    #[test]
    fn wigner_marginal_by_quadrature() {
        let p = sp(0.5);
        let m = wigner_marginal_xa_pb(&p);
        assert_eq!(m.cov[0][1], 0.0);
        assert!((m.cov[0][0] - 0.5 * 1f64.cosh()).abs() < 1e-15);
        assert!((wigner_marginal_xa_pb(&sp(2.0)).cov[1][1] - 13.654_1).abs() < 1e-4);
        let (x, w) = gauss_hermite(40);
        let s = 1.2;
        for (xa, pb) in [(0.0, 0.0), (0.7, -0.3), (-1.5, 1.1), (2.0, 2.0)] {
            let mut total = 0.0;
            for i in 0..40 {
                for j in 0..40 {
                    let pt = PhasePoint::new(xa, s * x[i], s * x[j], pb);
                    total += w[i] * w[j] * wigner_density(&pt, &p) * (x[i] * x[i] + x[j] * x[j]).exp();
                }
            }
            total *= s * s;
            assert!((total - m.pdf([xa, pb])).abs() < 1e-8, "({xa},{pb}): {total} vs {}", m.pdf([xa, pb]));
        }
    }
}
