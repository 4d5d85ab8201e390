use rayon::prelude::*;

use super::ou::{Boundary, OuProcess};
use super::{Direction, Setting, SimConfig, TrajectoryEnsemble};
use crate::error::{Error, Result};
use crate::gaussian::{Gaussian1D, VACUUM_VARIANCE};
use crate::phase_space::{q_amplified_quadrature_variance, q_sector_variances, PhasePoint, Sector};
use crate::rng::RngStream;

// Stream slots by role, so that PP reuses exactly the numbers XX draws for the
// variable it maps onto (p_+ ↔ x_−, p_− ↔ x_+ and vice versa).
const SLOT_BACKWARD_SQUEEZED: u8 = 0;
const SLOT_BACKWARD_ANTI: u8 = 1;
const SLOT_FORWARD_SQUEEZED: u8 = 2;
const SLOT_FORWARD_ANTI: u8 = 3;

/// Runs `config` with the routine matching its setting.
pub fn simulate(config: &SimConfig) -> Result<TrajectoryEnsemble> {
    match config.setting {
        Setting::XX | Setting::PP => simulate_epr(config),
        Setting::XP => simulate_schrodinger(config),
        Setting::SingleMode => Err(Error::Config("single-mode runs need a superposition boundary; use simulate_superposition".into())),
    }
}

fn gaussian(variance: f64) -> Result<Boundary> {
    Ok(Boundary::Gaussian(Gaussian1D::new(0.0, variance)?))
}

/// Same-setting measurement at both sites (`XX` or `PP`).
///
/// The amplified sector is solved backward in `u_± = u_A ± u_B` from the
/// amplified Q marginal; the other sector forward from the initial Q. Both
/// members of a pair come from the same run and share its noise.
pub fn simulate_epr(config: &SimConfig) -> Result<TrajectoryEnsemble> {
    config.validate()?;
    let (amplified, attenuated) = match config.setting {
        Setting::XX => (Sector::X, Sector::P),
        Setting::PP => (Sector::P, Sector::X),
        Setting::XP => return simulate_schrodinger(config),
        Setting::SingleMode => return simulate(config),
    };
    let grid = config.grid()?;
    let p = &config.squeeze;
    let end = q_sector_variances(p, config.g_t(), amplified)?;
    let start = q_sector_variances(p, 0.0, attenuated)?;
    // (squeezed, anti-squeezed) variances; the squeezed combination is x_− or p_+
    let split = |s: &crate::phase_space::SectorGaussian| match s.sector {
        Sector::X => (s.variance_diff, s.variance_sum),
        Sector::P => (s.variance_sum, s.variance_diff),
    };
    let (end_sq, end_anti) = split(&end);
    let (start_sq, start_anti) = split(&start);
    let boundaries = [gaussian(end_sq)?, gaussian(end_anti)?, gaussian(start_sq)?, gaussian(start_anti)?];

    // sum/difference variables carry twice the single-quadrature noise
    let process = OuProcess::new(config.g, 2.0 * VACUUM_VARIANCE, config.scheme)?;
    super::ou::integrate_check(&process, &grid)?;

    let paths = (0..config.n_traj as u64)
        .into_par_iter()
        .map(|run| {
            let draw = |slot: u8, backward: bool| {
                process.path(&boundaries[slot as usize], &grid, backward, &mut RngStream::for_path(config.seed, run, slot))
            };
            let back_sq = draw(SLOT_BACKWARD_SQUEEZED, true);
            let back_anti = draw(SLOT_BACKWARD_ANTI, true);
            let fwd_sq = draw(SLOT_FORWARD_SQUEEZED, false);
            let fwd_anti = draw(SLOT_FORWARD_ANTI, false);
            (0..grid.records())
                .map(|i| match amplified {
                    // x_− squeezed, x_+ anti; p_+ squeezed, p_− anti
                    Sector::X => {
                        let (xp, xm, pp, pm) = (back_anti[i], back_sq[i], fwd_sq[i], fwd_anti[i]);
                        PhasePoint::new((xp + xm) / 2.0, (pp + pm) / 2.0, (xp - xm) / 2.0, (pp - pm) / 2.0)
                    }
                    Sector::P => {
                        let (pp, pm, xm, xp) = (back_sq[i], back_anti[i], fwd_sq[i], fwd_anti[i]);
                        PhasePoint::new((xp + xm) / 2.0, (pp + pm) / 2.0, (xp - xm) / 2.0, (pp - pm) / 2.0)
                    }
                })
                .collect()
        })
        .collect();

    let (amp, att) = (Direction::Backward, Direction::Forward);
    let directions = match amplified {
        Sector::X => [amp, att, amp, att],
        Sector::P => [att, amp, att, amp],
    };
    Ok(TrajectoryEnsemble { times: grid.recorded_times(), paths, directions, config: *config, superposition: None })
}

/// Mixed setting: `X̂_A` at site A, `P̂_B` at site B.
///
/// The `(x_A, p_B)` Q marginal factorizes, so `x_A` and `p_B` are solved
/// backward independently from their amplified marginals. The unamplified
/// partners `p_A`, `x_B` are solved forward from their initial Q marginals
/// and are paired with the backward variables by run only.
pub fn simulate_schrodinger(config: &SimConfig) -> Result<TrajectoryEnsemble> {
    config.validate()?;
    if config.setting != Setting::XP {
        return Err(Error::Config(format!("mixed-setting simulation needs g_A > 0 > g_B (setting XP), got {:?}", config.setting)));
    }
    let grid = config.grid()?;
    let p = &config.squeeze;
    let end = gaussian(q_amplified_quadrature_variance(p, config.g_t()))?;
    let start = gaussian(q_amplified_quadrature_variance(p, 0.0))?;
    let process = OuProcess::new(config.g, VACUUM_VARIANCE, config.scheme)?;
    super::ou::integrate_check(&process, &grid)?;

    let paths = (0..config.n_traj as u64)
        .into_par_iter()
        .map(|run| {
            let draw =
                |b: &Boundary, slot: u8, backward: bool| process.path(b, &grid, backward, &mut RngStream::for_path(config.seed, run, slot));
            let x_a = draw(&end, 0, true);
            let p_b = draw(&end, 1, true);
            let p_a = draw(&start, 2, false);
            let x_b = draw(&start, 3, false);
            (0..grid.records()).map(|i| PhasePoint::new(x_a[i], p_a[i], x_b[i], p_b[i])).collect()
        })
        .collect();

    Ok(TrajectoryEnsemble {
        times: grid.recorded_times(),
        paths,
        directions: [Direction::Backward, Direction::Forward, Direction::Forward, Direction::Backward],
        config: *config,
        superposition: None,
    })
}
