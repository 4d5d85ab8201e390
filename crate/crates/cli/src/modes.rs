use serde_json::{json, Value};

use eprwmr_core::gaussian::{epr_criterion, inference_variance_optimal, mean_photon_number, quadrature_variance, SqueezeParams};
use eprwmr_core::phase_space::{q_amplified_quadrature_variance, q_sector_variances, q_single_quadrature_variance, wigner_marginal_xa_pb};
use eprwmr_core::schrodinger::{absolute_error_xi, halfgauss_mean_abs, homodyne_sum_check, p_squared_residual_moments, relative_error};
use eprwmr_core::sim::{self, classify_bands, simulate_superposition, SuperpositionConfig, Variable};
use eprwmr_core::wmr::{
    feasibility_case, incompleteness_check, region_probabilities, sigma_inf_amplified_detail, sigma_real_binned, sigma_real_two_region,
    tail_moments, upper_bound_ub,
};
use eprwmr_core::{BinningScheme, MethodTag, Sector, Setting, SimConfig, TrajectoryEnsemble};

use crate::artifacts::{sidecar, Sink, Table};
use crate::config::ExperimentConfig;
use crate::CliError;

pub(crate) fn squeeze(r: f64) -> Result<SqueezeParams, CliError> {
    Ok(SqueezeParams::new(r)?)
}

pub fn analytics(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<(), CliError> {
    let mut table = Table::new(&[
        "r",
        "eta",
        "g0",
        "quadrature_variance",
        "inference_variance",
        "epr_product",
        "epr_satisfied",
        "mean_photon_number",
        "q_quadrature_variance",
        "wigner_xa_pb_variance",
    ]);
    let mut reference = Vec::new();
    for &r in &cfg.r {
        let p = squeeze(r)?;
        let inf = inference_variance_optimal(&p);
        let verdict = epr_criterion(inf.sqrt(), inf.sqrt())?;
        let wigner = wigner_marginal_xa_pb(&p);
        table.push(vec![
            r,
            p.eta,
            p.g0,
            quadrature_variance(&p),
            inf,
            verdict.product,
            verdict.satisfied as u8 as f64,
            mean_photon_number(&p),
            q_single_quadrature_variance(&p),
            wigner.cov[0][0],
        ]);
        reference
            .push(json!({ "r": r, "epr_product": verdict.product, "epr_satisfied": verdict.satisfied, "cosh2r_over_2": p.cosh2r() / 2.0 }));
    }
    sink.table("analytics.csv", &table, format!("TMSS moments for {} value(s) of r", cfg.r.len()))?;
    let side = sidecar("analytics", cfg, &["analytics.csv"], json!({ "r": cfg.r }), json!({ "rows": reference }));
    sink.json("analytics.json", &side, "analytics sidecar")
}

/// Multiples of σ_P at which the error table is evaluated.
const ERROR_GRID: [f64; 8] = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0];

pub fn error(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<(), CliError> {
    let mut table = Table::new(&["r", "p_b", "relative_error", "xi"]);
    let mut reference = Vec::new();
    for &r in &cfg.r {
        let p = squeeze(r)?;
        let sigma = p.sigma();
        for k in ERROR_GRID {
            let p_b = k * sigma;
            table.push(vec![r, p_b, relative_error(&p, p_b)?, absolute_error_xi(&p, p_b)]);
        }
        let mean_abs = halfgauss_mean_abs(sigma)?;
        let residual = p_squared_residual_moments(&p, p.g0);
        let homodyne = homodyne_sum_check(&p, 1.0)?;
        reference.push(json!({
            "r": r,
            "sigma_p": sigma,
            "mean_abs_p_b": mean_abs,
            "xi_at_mean_abs_p_b": absolute_error_xi(&p, mean_abs),
            "xi_large_r_limit": (2.0 / std::f64::consts::PI).sqrt() * p.g0,
            "relative_error_at_mean_abs_p_b": relative_error(&p, mean_abs)?,
            "residual_mean": residual.mean,
            "residual_variance": residual.variance,
            "homodyne_lhs": homodyne.lhs,
            "homodyne_rhs": homodyne.rhs,
            "homodyne_relative_gap": homodyne.relative_gap,
        }));
    }
    sink.table("error.csv", &table, format!("inference error of P_A^2 on {} p_B values per r", ERROR_GRID.len()))?;
    let side = sidecar("error", cfg, &["error.csv"], json!({ "r": cfg.r, "p_b_over_sigma": ERROR_GRID }), json!({ "rows": reference }));
    sink.json("error.json", &side, "error sidecar")
}

pub fn criterion(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<(), CliError> {
    let r = cfg.r[0];
    let p = squeeze(r)?;
    let case = cfg.case.map(|c| c.parameters());
    let gain = cfg.gain.or(case.map(|c| c.0));
    let bin_width = cfg.bin_width.or(case.map(|c| c.1));

    let (report, parameters, detail) = match (gain, bin_width) {
        (Some(gain), Some(bin_width)) => {
            let overlap = cfg.delta.or(case.map(|c| c.2)).unwrap_or(0.0);
            let delta_p = cfg.delta_p.or(case.map(|c| c.3)).unwrap_or(0.0);
            let scheme = BinningScheme::new(bin_width, overlap, cfg.x1.unwrap_or(0.0), gain)?;
            let sigma_real = sigma_real_binned(&scheme);
            let inference = sigma_inf_amplified_detail(&p, delta_p, gain, false)?;
            let report = incompleteness_check(sigma_real, inference.value, 2.0 * overlap, MethodTag::BinnedAmplified)?;
            let feasibility = feasibility_case(&p, gain, bin_width, delta_p, overlap)?;
            let parameters = json!({ "r": r, "G": gain, "Delta": bin_width, "delta": overlap, "Delta_p": delta_p,
                "case": cfg.case.map(|c| format!("{c:?}")) });
            (report, parameters, json!({ "sigma_inf": inference, "feasibility": feasibility }))
        }
        (None, None) => {
            let x1 = cfg
                .x1
                .ok_or_else(|| CliError::Usage("criterion needs --case, both --G and --Delta, or a two-region threshold --x1".into()))?;
            let sigma_real = sigma_real_two_region(&p, x1)?;
            let sigma_inf = inference_variance_optimal(&p).sqrt();
            let report = incompleteness_check(sigma_real, sigma_inf, 2.0 * x1, MethodTag::TwoRegion)?;
            let parameters = json!({ "r": r, "x1": x1, "x1_over_sigma": x1 / p.sigma() });
            let detail = json!({
                "regions": region_probabilities(&p, x1)?,
                "tail_moments": tail_moments(&p, x1)?,
                "upper_bound": upper_bound_ub(&p, x1)?,
                "quadrature_variance": quadrature_variance(&p),
            });
            (report, parameters, detail)
        }
        _ => return Err(CliError::Usage("binned criterion needs both --G and --Delta".into())),
    };
    sink.json(
        "criterion.json",
        &serde_json::to_value(report).expect("report serializes"),
        format!("sigma_real*sigma_inf = {:.6} -> {}", report.product, if report.satisfied { "satisfied" } else { "not satisfied" }),
    )?;
    let side = sidecar("criterion", cfg, &["criterion.json"], parameters, detail);
    sink.json("criterion_detail.json", &side, "criterion sidecar")
}

pub(crate) fn sim_config(cfg: &ExperimentConfig, r: f64, setting: Setting) -> Result<SimConfig, CliError> {
    let mut sim = SimConfig::new(squeeze(r)?, cfg.g, cfg.t_total, cfg.n, cfg.seed, setting)?;
    if let Some(dt) = cfg.dt {
        sim.dt = dt;
        sim.validate()?;
    }
    Ok(sim)
}

pub(crate) fn superposition_config(cfg: &ExperimentConfig, x1: f64, x2: f64, t_total: f64) -> Result<SuperpositionConfig, CliError> {
    let mut sup = SuperpositionConfig::new(x1, x2, cfg.g, t_total, cfg.n, cfg.seed)?;
    if let Some(dt) = cfg.dt {
        sup.dt = dt;
        sup.validate()?;
    }
    Ok(sup)
}

fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var)
}

fn covariance(a: &[f64], b: &[f64]) -> f64 {
    let (ma, _) = moments(a);
    let (mb, _) = moments(b);
    if a.len() < 2 {
        return 0.0;
    }
    a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (a.len() - 1) as f64
}

/// Analytic targets and sample statistics at the final time, in outcome units.
pub(crate) fn ensemble_reference(e: &TrajectoryEnsemble) -> Result<Value, CliError> {
    let c = &e.config;
    let last = e.times.len() - 1;
    let gain = c.gain();
    let col = |v: Variable| e.inferred(v, last);
    Ok(match c.setting {
        Setting::XX | Setting::PP => {
            let sector = if c.setting == Setting::XX { Sector::X } else { Sector::P };
            let s = q_sector_variances(&c.squeeze, c.g_t(), sector)?;
            let (a, b, sign, squeezed) = match c.setting {
                Setting::XX => (col(Variable::XA), col(Variable::XB), -1.0, s.variance_diff),
                _ => (col(Variable::PA), col(Variable::PB), 1.0, s.variance_sum),
            };
            let combined: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + sign * y).collect();
            let (_, va) = moments(&a);
            let (_, vb) = moments(&b);
            json!({
                "sector_variance_sum": s.variance_sum,
                "sector_variance_diff": s.variance_diff,
                "inferred_combination": if c.setting == Setting::XX { "x_A - x_B" } else { "p_A + p_B" },
                "inferred_combination_variance_target": squeezed / (gain * gain),
                "inferred_combination_variance_sample": moments(&combined).1,
                "measured_target_large_gain": (-2.0 * c.squeeze.r).exp(),
                "correlation_sample": covariance(&a, &b) / (va * vb).sqrt(),
            })
        }
        Setting::XP => {
            let target = q_amplified_quadrature_variance(&c.squeeze, c.g_t()) / (gain * gain);
            let (xa, pb) = (col(Variable::XA), col(Variable::PB));
            json!({
                "marginal_variance_target": target,
                "quadrature_variance": quadrature_variance(&c.squeeze),
                "x_a_variance_sample": moments(&xa).1,
                "p_b_variance_sample": moments(&pb).1,
                "x_a_p_b_covariance_sample": covariance(&xa, &pb),
            })
        }
        Setting::SingleMode => {
            let info = e.superposition.ok_or_else(|| CliError::Usage("single-mode ensemble without superposition data".into()))?;
            let t_m = e.times[last / 2];
            let bands = classify_bands(e, t_m, &info.centers())?;
            json!({
                "superposition": info,
                "bands": {
                    "t_m": bands.t_m,
                    "band_centers": bands.band_centers,
                    "counts": bands.counts,
                    "fractions": bands.fractions,
                    "residual_spread": bands.residual_spread,
                    "predetermination_defect": bands.predetermination_defect,
                    "unresolved": bands.unresolved,
                },
            })
        }
    })
}

pub(crate) fn ensemble_parameters(e: &TrajectoryEnsemble) -> Value {
    let c = &e.config;
    json!({
        "setting": c.setting,
        "r": c.squeeze.r,
        "g": c.g,
        "T": c.t_total,
        "gT": c.g_t(),
        "G": c.gain(),
        "dt": c.dt,
        "n": c.n_traj,
        "seed": c.seed,
        "scheme": c.scheme,
        "directions": e.directions,
    })
}

pub fn simulate(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<(), CliError> {
    let ensemble = match cfg.setting {
        Setting::SingleMode => {
            let x1 = cfg.x1.unwrap_or(5.0);
            simulate_superposition(&superposition_config(cfg, x1, cfg.x2.unwrap_or(-x1), cfg.t_total)?)?
        }
        setting => sim::simulate(&sim_config(cfg, cfg.r[0], setting)?)?,
    };
    let reference = ensemble_reference(&ensemble)?;
    sink.trajectories(
        "trajectories.csv",
        &ensemble,
        format!("{} trajectories x {} times, setting {:?}", ensemble.n_runs(), ensemble.times.len(), ensemble.config.setting),
    )?;
    let side = sidecar("simulate", cfg, &["trajectories.csv"], ensemble_parameters(&ensemble), reference);
    sink.json("simulate.json", &side, "simulation sidecar")
}
