//! Composite pipelines over the cooling engines and the 1RDM analysis.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::CoolingConfig;
use crate::eigenmodes::solve_modes;
use crate::error::{Error, Result};
use crate::gauss_prep::Cooling;
use crate::gaussian::{limit_cycle_average, periodic_steady_state, run_cooling, DephasingMode};
use crate::linalg::linear_fit;
use crate::noise::NoiseRates;
use crate::rdm::{vacuum_fidelity, OneBodyRDM};
use crate::tfim::ground_energy;

/// `E/E0` of the noiseless limit cycle, averaged over one reset period.
pub fn limit_cycle_ratio(cfg: &CoolingConfig) -> Result<f64> {
    let (_, avg) = limit_cycle_average(cfg)?;
    Ok(avg.energy / ground_energy(cfg.g, cfg.j, cfg.l)?)
}

/// Best limit-cycle energy ratio for one field.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CeilingPoint {
    pub g: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub ratio: f64,
    pub theta: f64,
    pub h: f64,
}

/// Maximize the limit-cycle `E/E0` over the `(θ, h)` grid for each `g/J`,
/// on an edge-cooled chain of length `l`.
pub fn cooling_ceiling(l: usize, j: f64, g_ratios: &[f64], thetas: &[f64], hs: &[f64]) -> Result<Vec<CeilingPoint>> {
    g_ratios
        .iter()
        .map(|&r| {
            let g = r * j;
            let grid: Vec<(f64, f64)> = thetas.iter().flat_map(|&t| hs.iter().map(move |&h| (t, h))).collect();
            let scored = grid
                .par_iter()
                .map(|&(theta, h)| {
                    let cfg = CoolingConfig::edge_cooled(l, g, j, theta, h, 0);
                    limit_cycle_ratio(&cfg).map(|ratio| CeilingPoint { g, j, ratio, theta, h })
                })
                .collect::<Result<Vec<_>>>()?;
            scored
                .into_iter()
                .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
                .ok_or_else(|| Error::Argument("empty (theta, h) grid".into()))
        })
        .collect()
}

/// Raw and purified vacuum fidelity of the dissipative protocol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FidelityRow {
    #[serde(rename = "L")]
    pub l: usize,
    pub raw: f64,
    pub purified: f64,
}

/// Dissipative steady-state fidelities under averaged dephasing.
pub fn fidelity_series(lengths: &[usize], noise: &NoiseRates, protocol: &Cooling) -> Result<Vec<FidelityRow>> {
    lengths
        .par_iter()
        .map(|&l| {
            let table = solve_modes(protocol.g, protocol.j, l)?;
            let run = run_cooling(
                &protocol.config(l, *noise),
                DephasingMode::Average,
                protocol.seed,
                false,
            )?;
            let s0 = run.layout.system[0];
            let rdm = OneBodyRDM::from_covariance(&run.state, s0..s0 + l);
            let raw = rdm.to_eigenbasis(&table)?.occupations()?;
            let pure = rdm.purify().rdm.to_eigenbasis(&table)?.occupations()?;
            Ok(FidelityRow {
                l,
                raw: vacuum_fidelity(&raw, None),
                purified: vacuum_fidelity(&pure, None),
            })
        })
        .collect()
}

/// Slope of `ln F` against `L`.
pub fn log_slope(rows: &[FidelityRow], purified: bool) -> Result<f64> {
    let x: Vec<f64> = rows.iter().map(|r| r.l as f64).collect();
    let y: Vec<f64> = rows
        .iter()
        .map(|r| if purified { r.purified } else { r.raw })
        .map(|f| {
            if f > 0.0 {
                Ok(f.ln())
            } else {
                Err(Error::FitDomain("zero fidelity".into()))
            }
        })
        .collect::<Result<_>>()?;
    if x.len() < 2 {
        return Err(Error::FitDomain("need at least two lengths".into()));
    }
    Ok(linear_fit(&x, &y).0)
}

/// System 1RDM right after a reset in the noiseless limit cycle of an
/// edge-cooled chain.
pub fn steady_rdm(l: usize, g: f64, j: f64, theta: f64, h: f64, reset_period: usize) -> Result<OneBodyRDM> {
    let mut cfg = CoolingConfig::edge_cooled(l, g, j, theta, h, 0);
    cfg.reset_period = reset_period;
    let (layout, state) = periodic_steady_state(&cfg)?;
    let s0 = layout.system[0];
    Ok(OneBodyRDM::from_covariance(&state, s0..s0 + l))
}

/// Correlators of site pairs centred in the chain: for separation `r`,
/// `j = (L − r)/2 + 1` and `k = j + r` (1-based), `r = 1..=max_r`.
pub fn centered_correlators(rdm: &OneBodyRDM, max_r: usize) -> Result<Vec<f64>> {
    let l = rdm.n_sites();
    (1..=max_r.min(l - 1))
        .map(|r| {
            let j = (l - r) / 2 + 1;
            rdm.quantum_correlator(j, j + r)
        })
        .collect()
}

/// Entropies in bits of the prefixes of length `1..=max_r`.
pub fn prefix_entropies(rdm: &OneBodyRDM, max_r: usize) -> Result<Vec<f64>> {
    (1..=max_r.min(rdm.n_sites())).map(|r| rdm.entropy(0..r)).collect()
}

/// `(max − min) / mean` of a profile.
pub fn relative_variation(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean.abs()
}
