use serde::{Deserialize, Serialize};

use super::{TrajectoryEnsemble, Variable};
use crate::error::{Error, Result};

/// Nearest-center classification of amplified trajectories at time `t_m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandReport {
    pub variable: Variable,
    pub t_m: f64,
    /// Outcome units (amplified value divided by `e^{g t}`).
    pub band_centers: Vec<f64>,
    /// Band index per run.
    pub band_assignments: Vec<usize>,
    pub counts: Vec<usize>,
    pub fractions: Vec<f64>,
    /// In-band standard deviation at `t_m`, outcome units; 0 for bands with fewer than 2 members.
    pub residual_spread: Vec<f64>,
    /// Fraction of runs whose band at `t_m` differs from their band at `T`.
    /// `None` when `t_m` is the final time.
    pub predetermination_defect: Option<f64>,
    /// Set when the boundary components overlap after amplification.
    pub unresolved: bool,
}

/// Classifies the variable read out at site A.
pub fn classify_bands(e: &TrajectoryEnsemble, t_m: f64, centers: &[f64]) -> Result<BandReport> {
    classify_bands_on(e, e.primary(), t_m, centers)
}

pub fn classify_bands_on(e: &TrajectoryEnsemble, variable: Variable, t_m: f64, centers: &[f64]) -> Result<BandReport> {
    if e.paths.is_empty() {
        return Err(Error::Config("cannot classify an empty ensemble".into()));
    }
    if centers.is_empty() || centers.iter().any(|c| !c.is_finite()) {
        return Err(Error::Config("band centers must be a non-empty list of finite values".into()));
    }
    for (i, a) in centers.iter().enumerate() {
        if centers[i + 1..].contains(a) {
            return Err(Error::Config(format!("band center {a} is repeated")));
        }
    }
    let i_m = e.time_index(t_m)?;
    let i_end = e.times.len() - 1;
    let at_m = e.inferred(variable, i_m);
    let assign = |values: &[f64]| -> Vec<usize> { values.iter().map(|&v| nearest(centers, v)).collect() };
    let band_assignments = assign(&at_m);

    let k = centers.len();
    let mut counts = vec![0usize; k];
    let mut sums = vec![(0.0f64, 0.0f64); k];
    for (&b, &v) in band_assignments.iter().zip(&at_m) {
        counts[b] += 1;
        sums[b].0 += v;
    }
    for (&b, &v) in band_assignments.iter().zip(&at_m) {
        let mean = sums[b].0 / counts[b] as f64;
        sums[b].1 += (v - mean).powi(2);
    }
    let n = at_m.len() as f64;
    let fractions = counts.iter().map(|&c| c as f64 / n).collect();
    let residual_spread = counts.iter().zip(&sums).map(|(&c, &(_, ss))| if c > 1 { (ss / (c - 1) as f64).sqrt() } else { 0.0 }).collect();

    let predetermination_defect = (i_m < i_end).then(|| {
        let at_end = assign(&e.inferred(variable, i_end));
        at_end.iter().zip(&band_assignments).filter(|(a, b)| a != b).count() as f64 / n
    });

    Ok(BandReport {
        variable,
        t_m: e.times[i_m],
        band_centers: centers.to_vec(),
        band_assignments,
        counts,
        fractions,
        residual_spread,
        predetermination_defect,
        unresolved: e.superposition.is_some_and(|s| !s.resolvable),
    })
}

fn nearest(centers: &[f64], v: f64) -> usize {
    let mut best = 0;
    for (i, c) in centers.iter().enumerate() {
        if (v - c).abs() < (v - centers[best]).abs() {
            best = i;
        }
    }
    best
}
