use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::DenseState;
use crate::error::{Error, Result};

/// Ensemble mean and standard error of per-step observable vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryStats {
    pub n_traj: usize,
    /// `mean[step][k]`.
    pub mean: Vec<Vec<f64>>,
    /// Standard error of the mean; `None` for a single trajectory.
    pub stderr: Option<Vec<Vec<f64>>>,
}

/// Run `n_traj` independent trajectories from `init`.
///
/// `step(state, d, rng)` advances one cycle and `observe(state, d)` returns the
/// observables recorded after cycle `d` (and at `d = 0` before any step). Each
/// trajectory uses its own ChaCha stream derived from `seed`, so results do not
/// depend on thread scheduling.
pub fn run_trajectories<S, O>(
    init: &DenseState,
    cycles: usize,
    n_traj: usize,
    seed: u64,
    step: S,
    observe: O,
) -> Result<TrajectoryStats>
where
    S: Fn(&mut DenseState, usize, &mut ChaCha8Rng) -> Result<()> + Sync,
    O: Fn(&DenseState, usize) -> Vec<f64> + Sync,
{
    if n_traj == 0 {
        return Err(Error::Argument("n_traj must be positive".into()));
    }
    let runs: Result<Vec<Vec<Vec<f64>>>> = (0..n_traj)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mut s = init.clone();
            let mut rows = Vec::with_capacity(cycles + 1);
            rows.push(observe(&s, 0));
            for d in 0..cycles {
                step(&mut s, d, &mut rng)?;
                rows.push(observe(&s, d + 1));
            }
            Ok(rows)
        })
        .collect();
    let runs = runs?;
    let steps = cycles + 1;
    let width = runs[0][0].len();
    let nt = n_traj as f64;
    let mut mean = vec![vec![0.0; width]; steps];
    for run in &runs {
        for (d, row) in run.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                mean[d][k] += v / nt;
            }
        }
    }
    let stderr = (n_traj > 1).then(|| {
        let mut var = vec![vec![0.0; width]; steps];
        for run in &runs {
            for (d, row) in run.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    var[d][k] += (v - mean[d][k]).powi(2);
                }
            }
        }
        var.into_iter()
            .map(|r| r.into_iter().map(|s| (s / (nt - 1.0) / nt).sqrt()).collect())
            .collect()
    });
    Ok(TrajectoryStats { n_traj, mean, stderr })
}
