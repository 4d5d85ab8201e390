use serde_json::{json, Value};

use eprwmr_core::gaussian::{inference_variance_optimal, quadrature_variance, Gaussian1D};
use eprwmr_core::schrodinger::{absolute_error_xi, halfgauss_mean_abs};
use eprwmr_core::sim::{simulate, simulate_superposition};
use eprwmr_core::wmr::{half_gaussian_variance, half_gaussian_variance_rounded, region_probabilities, upper_bound_ub};
use eprwmr_core::Setting;

use crate::artifacts::{linspace, sidecar, Sink, Table};
use crate::config::{ExperimentConfig, Figure};
use crate::modes::{ensemble_parameters, ensemble_reference, sim_config, squeeze, superposition_config};
use crate::CliError;

const CURVE_POINTS: usize = 401;

pub fn reproduce(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<(), CliError> {
    let figure = cfg.figure.expect("reproduce mode resolves a figure");
    let r_or = |default: &[f64]| if cfg.explicit.r { cfg.r.clone() } else { default.to_vec() };
    match figure {
        Figure::PDistribution => p_distribution(cfg, sink, &r_or(&[0.5, 1.0, 2.0])),
        Figure::ErrorXi => error_xi(cfg, sink, &r_or(&[1.0, 2.0, 3.0])),
        Figure::DiagramBins => diagram_bins(cfg, sink, &r_or(&[2.0])),
        Figure::Bounds => bounds(cfg, sink, &r_or(&[2.0, 3.0])),
        Figure::SupDynamics => sup_dynamics(cfg, sink),
        Figure::Epr1 => trajectories(cfg, sink, &r_or(&[2.0, 0.5]), Setting::XX),
        Figure::Epr2 => trajectories(cfg, sink, &r_or(&[2.0, 0.5]), Setting::XP),
    }
}

fn finish(cfg: &ExperimentConfig, sink: &mut Sink, files: &[String], parameters: Value, reference: Value) -> Result<(), CliError> {
    let id = cfg.figure.expect("figure").id();
    let names: Vec<&str> = files.iter().map(String::as_str).collect();
    let side = sidecar("figure", cfg, &names, parameters, reference);
    sink.json(&format!("{id}.json"), &side, format!("{id} sidecar"))
}

fn p_distribution(cfg: &ExperimentConfig, sink: &mut Sink, rs: &[f64]) -> Result<(), CliError> {
    let mut table = Table::new(&["r", "p_b", "density"]);
    let mut reference = Vec::new();
    let widest = rs.iter().map(|&r| squeeze(r).map(|p| p.sigma())).collect::<Result<Vec<_>, _>>()?.into_iter().fold(0.0, f64::max);
    for &r in rs {
        let p = squeeze(r)?;
        let dist = Gaussian1D::new(0.0, quadrature_variance(&p))?;
        for x in linspace(-4.0 * widest, 4.0 * widest, CURVE_POINTS) {
            table.push(vec![r, x, dist.pdf(x)]);
        }
        reference.push(json!({ "r": r, "variance": dist.variance, "inference_variance": inference_variance_optimal(&p) }));
    }
    let file = "p-distribution.csv".to_string();
    sink.table(&file, &table, format!("P(p_B) for r = {rs:?}"))?;
    finish(cfg, sink, &[file], json!({ "r": rs }), json!({ "curves": reference }))
}

fn error_xi(cfg: &ExperimentConfig, sink: &mut Sink, rs: &[f64]) -> Result<(), CliError> {
    let mut table = Table::new(&["r", "p_b", "xi", "half_gaussian_density", "xi_times_density"]);
    let mut reference = Vec::new();
    let widest = rs.iter().map(|&r| squeeze(r).map(|p| p.sigma())).collect::<Result<Vec<_>, _>>()?.into_iter().fold(0.0, f64::max);
    for &r in rs {
        let p = squeeze(r)?;
        let dist = Gaussian1D::new(0.0, quadrature_variance(&p))?;
        for x in linspace(0.0, 4.0 * widest, CURVE_POINTS) {
            let xi = absolute_error_xi(&p, x);
            let half = 2.0 * dist.pdf(x);
            table.push(vec![r, x, xi, half, xi * half]);
        }
        let mean_abs = halfgauss_mean_abs(p.sigma())?;
        reference.push(json!({
            "r": r,
            "mean_abs_p_b": mean_abs,
            "xi_at_mean_abs_p_b": absolute_error_xi(&p, mean_abs),
            "xi_large_r_limit": (2.0 / std::f64::consts::PI).sqrt() * p.g0,
        }));
    }
    let file = "error-xi.csv".to_string();
    sink.table(&file, &table, format!("xi(p_B) for r = {rs:?}"))?;
    finish(cfg, sink, &[file], json!({ "r": rs }), json!({ "curves": reference }))
}

fn diagram_bins(cfg: &ExperimentConfig, sink: &mut Sink, rs: &[f64]) -> Result<(), CliError> {
    let mut table = Table::new(&["r", "x", "density", "region"]);
    let mut reference = Vec::new();
    for &r in rs {
        let p = squeeze(r)?;
        let x1 = cfg.x1.unwrap_or(0.25 * p.sigma());
        let dist = Gaussian1D::new(0.0, quadrature_variance(&p))?;
        for x in linspace(-4.0 * p.sigma(), 4.0 * p.sigma(), CURVE_POINTS) {
            let region = if x > x1 {
                1.0
            } else if x < -x1 {
                -1.0
            } else {
                0.0
            };
            table.push(vec![r, x, dist.pdf(x), region]);
        }
        reference.push(json!({ "r": r, "x1": x1, "sigma_x": p.sigma(), "regions": region_probabilities(&p, x1)? }));
    }
    let file = "diagram-bins.csv".to_string();
    sink.table(&file, &table, format!("P(x) with regions for r = {rs:?}"))?;
    finish(cfg, sink, &[file], json!({ "r": rs }), json!({ "curves": reference }))
}

/// Largest `x1/σ` on the grid below which `U_B` stays under `σ²`, refined by bisection.
fn criterion_edge(p: &eprwmr_core::SqueezeParams) -> Result<f64, CliError> {
    let s = p.sigma();
    let below = |u: f64| -> Result<bool, CliError> { Ok(upper_bound_ub(p, u * s)? < s * s) };
    let (mut lo, mut hi) = (1e-4, 1e-4);
    while below(hi)? {
        lo = hi;
        hi += 0.05;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if below(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn bounds(cfg: &ExperimentConfig, sink: &mut Sink, rs: &[f64]) -> Result<(), CliError> {
    let mut table = Table::new(&["r", "x1_over_sigma", "x1", "upper_bound", "quadrature_variance"]);
    let mut reference = Vec::new();
    let mut grid = linspace(0.0, 3.0, 301);
    grid[0] = 1e-4;
    for &r in rs {
        let p = squeeze(r)?;
        let s = p.sigma();
        let var = quadrature_variance(&p);
        for &u in &grid {
            table.push(vec![r, u, u * s, upper_bound_ub(&p, u * s)?, var]);
        }
        let edge = criterion_edge(&p)?;
        reference.push(json!({
            "r": r,
            "sigma_x": s,
            "quadrature_variance": var,
            "small_threshold_limit": half_gaussian_variance(s)?,
            "small_threshold_limit_rounded": half_gaussian_variance_rounded(s)?,
            "satisfied_below_x1_over_sigma": edge,
            "satisfied_below_x1": edge * s,
        }));
    }
    let file = "bounds.csv".to_string();
    sink.table(&file, &table, format!("U_B(x1/sigma) for r = {rs:?}"))?;
    let marker = std::f64::consts::FRAC_1_SQRT_2;
    finish(cfg, sink, &[file], json!({ "r": rs }), json!({ "quantum_noise_x1": marker, "curves": reference }))
}

fn sup_dynamics(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<(), CliError> {
    // the two panels shown for this figure: (x1, x2, gT)
    let panels: Vec<(f64, f64, f64)> = match cfg.x1 {
        Some(x1) => vec![(x1, cfg.x2.unwrap_or(-x1), cfg.t_total)],
        None if cfg.explicit.t_total => vec![(5.0, -5.0, cfg.t_total), (1.0, -1.0, cfg.t_total)],
        None => vec![(5.0, -5.0, 2.0 / cfg.g), (1.0, -1.0, 3.0 / cfg.g)],
    };
    let mut files = Vec::new();
    let mut reference = Vec::new();
    for (k, (x1, x2, t_total)) in panels.into_iter().enumerate() {
        let e = simulate_superposition(&superposition_config(cfg, x1, x2, t_total)?)?;
        let file = format!("sup-dynamics_panel{}.csv", k + 1);
        sink.trajectories(&file, &e, format!("superposition x1={x1}, x2={x2}, gT={}", e.config.g_t()))?;
        reference.push(json!({ "file": file, "parameters": ensemble_parameters(&e), "reference": ensemble_reference(&e)? }));
        files.push(file);
    }
    finish(cfg, sink, &files, json!({ "n": cfg.n, "seed": cfg.seed, "g": cfg.g }), json!({ "panels": reference }))
}

fn trajectories(cfg: &ExperimentConfig, sink: &mut Sink, rs: &[f64], setting: Setting) -> Result<(), CliError> {
    let id = cfg.figure.expect("figure").id();
    let mut files = Vec::new();
    let mut reference = Vec::new();
    for &r in rs {
        let e = simulate(&sim_config(cfg, r, setting)?)?;
        let file = format!("{id}_r{r}.csv");
        sink.trajectories(&file, &e, format!("{setting:?} trajectories at r={r}, gT={}", e.config.g_t()))?;
        reference.push(json!({ "file": file, "parameters": ensemble_parameters(&e), "reference": ensemble_reference(&e)? }));
        files.push(file);
    }
    finish(cfg, sink, &files, json!({ "r": rs, "setting": setting, "n": cfg.n, "seed": cfg.seed }), json!({ "panels": reference }))
}
