//! Weak-macroscopic-realism bounds and the incompleteness criterion
//! `σ_real · σ_inf < 1/2`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::gaussian::{inference_variance_optimal, SqueezeParams};
use crate::special::{erf, std_normal_pdf, std_normal_sf};

/// Tail probabilities below this make the two-region bound meaningless.
pub const MIN_TAIL_PROBABILITY: f64 = 1e-15;

/// Bins of an amplified quadrature readout.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinningScheme {
    /// Bin width `Δ` of the amplified outcome.
    pub bin_width: f64,
    /// Overlap half-width `δ`; the macroscopic-distinctness level is `2δ`.
    pub overlap: f64,
    pub threshold_x1: f64,
    pub gain: f64,
}

impl BinningScheme {
    pub fn new(bin_width: f64, overlap: f64, threshold_x1: f64, gain: f64) -> Result<Self> {
        let ok = bin_width > 0.0 && overlap >= 0.0 && overlap < bin_width && threshold_x1 >= 0.0 && gain >= 1.0;
        if !ok || ![bin_width, overlap, threshold_x1, gain].iter().all(|v| v.is_finite()) {
            return Err(Error::domain(
                "BinningScheme",
                format!("need Δ > 0, 0 <= δ < Δ, x1 >= 0, G >= 1; got Δ={bin_width}, δ={overlap}, x1={threshold_x1}, G={gain}"),
            ));
        }
        Ok(Self { bin_width, overlap, threshold_x1, gain })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodTag {
    TwoRegion,
    BinnedAmplified,
    ConditionalMc,
}

/// Flat, serializable verdict of the incompleteness criterion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub sigma_real: f64,
    pub sigma_inf: f64,
    pub product: f64,
    pub satisfied: bool,
    pub distinctness_level: f64,
    pub method_tag: MethodTag,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionProbabilities {
    pub p_minus: f64,
    pub p_zero: f64,
    pub p_plus: f64,
}

fn check_threshold(op: &'static str, x1: f64) -> Result<()> {
    if !(x1 >= 0.0) {
        return Err(Error::domain(op, format!("threshold x1 must be >= 0, got {x1}")));
    }
    Ok(())
}

/// Probabilities of `X < −x1`, `|X| <= x1` and `X > x1` for `X ~ N(0, cosh(2r)/2)`.
pub fn region_probabilities(p: &SqueezeParams, x1: f64) -> Result<RegionProbabilities> {
    check_threshold("region_probabilities", x1)?;
    let z = x1 / p.sigma();
    let p_plus = std_normal_sf(z);
    Ok(RegionProbabilities { p_minus: p_plus, p_zero: erf(z / SQRT_2), p_plus })
}

/// Variance of the half-normal distribution, `σ²(1 − 2/π)`.
pub fn half_gaussian_variance(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::domain("half_gaussian_variance", format!("sigma must be > 0, got {sigma}")));
    }
    Ok(sigma * sigma * (1.0 - 2.0 / PI))
}

/// The same estimate with `1 − 2/π` rounded to 0.36.
pub fn half_gaussian_variance_rounded(sigma: f64) -> Result<f64> {
    half_gaussian_variance(sigma)?;
    Ok(0.36 * sigma * sigma)
}

/// Upper-tail moments of `P(X)` beyond `x1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailMoments {
    /// `∫_{x1}^∞ P(X) dX`
    pub p_plus: f64,
    pub p_zero: f64,
    /// `∫_{x1}^∞ X P(X) dX`
    pub s1: f64,
    /// `∫_{x1}^∞ X² P(X) dX`
    pub s2: f64,
}

pub fn tail_moments(p: &SqueezeParams, x1: f64) -> Result<TailMoments> {
    let regions = region_probabilities(p, x1)?;
    let sigma = p.sigma();
    let s1 = sigma * std_normal_pdf(x1 / sigma);
    Ok(TailMoments { p_plus: regions.p_plus, p_zero: regions.p_zero, s1, s2: sigma * sigma * regions.p_plus + x1 * s1 })
}

/// Measurable bound `U_B` on the variance of either two-region state:
/// `S₂/P₊ − (S₁/P₊)² + x1² P₀ + 2 x1 P₀ S₁/P₊`.
pub fn upper_bound_ub(p: &SqueezeParams, x1: f64) -> Result<f64> {
    let t = tail_moments(p, x1)?;
    if t.p_plus < MIN_TAIL_PROBABILITY {
        return Err(Error::Unbounded { op: "upper_bound_ub", x1, tail: t.p_plus });
    }
    let m = t.s1 / t.p_plus;
    // S₂/P₊ − m² written as σ² + m(x1 − m) to avoid cancelling two O(x1²) terms
    Ok(p.sigma_sq + m * (x1 - m) + x1 * x1 * t.p_zero + 2.0 * x1 * t.p_zero * m)
}

/// `σ_real = √U_B`; the bound is the same for both regions so the weighted
/// average over regions is `U_B` itself.
pub fn sigma_real_two_region(p: &SqueezeParams, x1: f64) -> Result<f64> {
    Ok(upper_bound_ub(p, x1)?.sqrt())
}

/// `(Δ + 2δ) / 2G`.
pub fn sigma_real_binned(b: &BinningScheme) -> f64 {
    (b.bin_width + 2.0 * b.overlap) / (2.0 * b.gain)
}

/// Inference deviation of `P_A` under amplified, binned readout.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplifiedInference {
    pub value: f64,
    /// `1/√(2cosh2r) + 2Δ_p/G`, reported when the large-r form is doubtful.
    pub exact_alternative: Option<f64>,
    /// False when `r < 1`, where `e^{−r}` is a poor stand-in for `1/√(2cosh2r)`.
    pub large_r_form_valid: bool,
}

pub fn sigma_inf_amplified_detail(p: &SqueezeParams, delta_p: f64, gain: f64, ideal: bool) -> Result<AmplifiedInference> {
    if !(gain >= 1.0) || !(delta_p >= 0.0) {
        return Err(Error::domain("sigma_inf_amplified", format!("need G >= 1 and Δ_p >= 0, got G={gain}, Δ_p={delta_p}")));
    }
    let exact = inference_variance_optimal(p).sqrt();
    if ideal {
        return Ok(AmplifiedInference { value: exact, exact_alternative: None, large_r_form_valid: true });
    }
    let bin_error = 2.0 * delta_p / gain;
    let valid = p.r >= 1.0;
    Ok(AmplifiedInference {
        value: (-p.r).exp() + bin_error,
        exact_alternative: (!valid).then_some(exact + bin_error),
        large_r_form_valid: valid,
    })
}

/// `1/√(2cosh2r)` when `ideal`, otherwise `e^{−r} + 2Δ_p/G`.
pub fn sigma_inf_amplified(p: &SqueezeParams, delta_p: f64, gain: f64, ideal: bool) -> Result<f64> {
    Ok(sigma_inf_amplified_detail(p, delta_p, gain, ideal)?.value)
}

/// Diagnostics of the binned conditional-variance estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalInference {
    pub sigma_inf: f64,
    pub bins_used: usize,
    pub samples_used: usize,
    /// Samples that fell in bins holding a single sample.
    pub samples_dropped: usize,
}

/// Largest fraction of samples allowed in singleton bins.
pub const MAX_DROPPED_FRACTION: f64 = 0.01;

/// `σ_inf² = Σ_J P_J σ²(p_A | J)` from `(p_A, p_B)` pairs, binning on `p_B`.
pub fn sigma_inf_conditional_detail(samples: &[(f64, f64)], bin_width: f64) -> Result<ConditionalInference> {
    if !(bin_width > 0.0) {
        return Err(Error::domain("sigma_inf_conditional", format!("bin width must be > 0, got {bin_width}")));
    }
    // Welford accumulators per bin: (count, mean, sum of squared deviations)
    let mut bins: BTreeMap<i64, (usize, f64, f64)> = BTreeMap::new();
    for &(pa, pb) in samples {
        let acc = bins.entry((pb / bin_width).floor() as i64).or_insert((0, 0.0, 0.0));
        acc.0 += 1;
        let d = pa - acc.1;
        acc.1 += d / acc.0 as f64;
        acc.2 += d * (pa - acc.1);
    }
    let (mut used, mut dropped, mut bins_used, mut weighted) = (0usize, 0usize, 0usize, 0.0);
    for &(n, _, m2) in bins.values() {
        if n < 2 {
            dropped += n;
            continue;
        }
        used += n;
        bins_used += 1;
        // P_J σ²_J with P_J = n_J / N and the unbiased within-bin variance
        weighted += n as f64 * m2 / (n - 1) as f64;
    }
    if used == 0 || dropped as f64 > MAX_DROPPED_FRACTION * samples.len() as f64 {
        return Err(Error::Estimation(format!(
            "{} samples over {} occupied bins of width {bin_width}: {dropped} in singleton bins, {bins_used} usable bins",
            samples.len(),
            bins.len()
        )));
    }
    Ok(ConditionalInference { sigma_inf: (weighted / used as f64).sqrt(), bins_used, samples_used: used, samples_dropped: dropped })
}

pub fn sigma_inf_conditional(samples: &[(f64, f64)], bin_width: f64) -> Result<f64> {
    Ok(sigma_inf_conditional_detail(samples, bin_width)?.sigma_inf)
}

/// Strict test of `σ_real σ_inf < 1/2`.
pub fn incompleteness_check(sigma_real: f64, sigma_inf: f64, distinctness: f64, method_tag: MethodTag) -> Result<CriterionReport> {
    if !(sigma_real >= 0.0 && sigma_inf >= 0.0 && distinctness >= 0.0) {
        return Err(Error::domain(
            "incompleteness_check",
            format!("inputs must be >= 0, got σ_real={sigma_real}, σ_inf={sigma_inf}, 2δ={distinctness}"),
        ));
    }
    let product = sigma_real * sigma_inf;
    Ok(CriterionReport { sigma_real, sigma_inf, product, satisfied: product < 0.5, distinctness_level: distinctness, method_tag })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    /// `(Δ + 2δ)(e^{−r} + 2Δ_p/G)`
    pub lhs: f64,
    /// `G`
    pub rhs: f64,
    pub feasible: bool,
    /// Large-G form `Δ + 2δ < G e^r`.
    pub large_gain_lhs: f64,
    pub large_gain_rhs: f64,
    pub large_gain_feasible: bool,
}

pub fn feasibility_case(p: &SqueezeParams, gain: f64, bin_width: f64, delta_p: f64, overlap: f64) -> Result<Feasibility> {
    if !(gain > 0.0 && bin_width > 0.0 && delta_p >= 0.0 && overlap >= 0.0) {
        return Err(Error::domain(
            "feasibility_case",
            format!("need positive G, Δ and non-negative Δ_p, δ; got G={gain}, Δ={bin_width}, Δ_p={delta_p}, δ={overlap}"),
        ));
    }
    let span = bin_width + 2.0 * overlap;
    let lhs = span * ((-p.r).exp() + 2.0 * delta_p / gain);
    let large_gain_rhs = gain * p.r.exp();
    Ok(Feasibility {
        lhs,
        rhs: gain,
        feasible: lhs < gain,
        large_gain_lhs: span,
        large_gain_rhs,
        large_gain_feasible: span < large_gain_rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub sigma_x: f64,
    pub sigma_p: f64,
}

/// `(Σ P_K σ²_x,K)(Σ P_K σ²_p,K)` for a mixture of uncertainty-respecting states.
pub fn mixture_variance_product(mixture: &[MixtureComponent]) -> Result<f64> {
    let total: f64 = mixture.iter().map(|c| c.weight).sum();
    if mixture.is_empty() || (total - 1.0).abs() > 1e-12 || mixture.iter().any(|c| c.weight < 0.0) {
        return Err(Error::domain("mixture_product_lemma_check", format!("weights must be >= 0 and sum to 1, sum = {total}")));
    }
    if let Some(c) = mixture.iter().find(|c| c.sigma_x * c.sigma_p < 0.5 * (1.0 - 1e-12)) {
        return Err(Error::domain(
            "mixture_product_lemma_check",
            format!("component violates σ_x σ_p >= 1/2: {} * {} = {}", c.sigma_x, c.sigma_p, c.sigma_x * c.sigma_p),
        ));
    }
    let vx: f64 = mixture.iter().map(|c| c.weight * c.sigma_x * c.sigma_x).sum();
    let vp: f64 = mixture.iter().map(|c| c.weight * c.sigma_p * c.sigma_p).sum();
    Ok(vx * vp)
}

/// Whether the mixture still obeys `product >= 1/4`, which holds by Cauchy-Schwarz.
pub fn mixture_product_lemma_check(mixture: &[MixtureComponent]) -> Result<bool> {
    Ok(mixture_variance_product(mixture)? >= 0.25 * (1.0 - 1e-12))
}
