//! Weak-coupling rate theory of a chain cooled through one edge auxiliary.
//!
//! Rates are probabilities per reset period of `M` cycles. The creation rate
//! of mode `k` is `W⁺ = 2πMθ² (f⁻/L) δ_M(φ − πh)` and the annihilation rate is
//! `W⁻ = 2πMθ² (f⁺/L) δ_M(φ + πh)`, with `f± = L|ψ₁ ± iψ₂|²` the weight of
//! the standing wave on the coupled site.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigenmodes::{EigenmodeTable, Mode};
use crate::error::{Error, Result};
use crate::linalg::I;

/// Finite-`M` delta function `sin²(Mx/2) / (2πM sin²(x/2))`.
pub fn delta_m(x: f64, m: usize) -> f64 {
    let mf = m as f64;
    let s = (x / 2.0).sin();
    if s.abs() < 1e-12 {
        return mf / (2.0 * PI);
    }
    (mf * x / 2.0).sin().powi(2) / (2.0 * PI * mf * s * s)
}

/// Finite-`M` principal value `(1/M) Σ_{m=1}^{M} Σ_{l=1}^{m−1} sin(xl)`.
pub fn principal_m(x: f64, m: usize) -> f64 {
    let mut acc = 0.0;
    for outer in 1..=m {
        for l in 1..outer {
            acc += (x * l as f64).sin();
        }
    }
    acc / m as f64
}

/// Closed-form weights `(f⁺, f⁻)` of a mode with a real momentum.
pub fn closed_form_weights(mu: f64, xi: f64, delta: f64) -> (f64, f64) {
    let a = (delta - xi).sin();
    let b = (2.0 * mu).sin() * xi.sin();
    ((2.0 + 2.0 * a) * (1.0 - b), (2.0 - 2.0 * a) * (1.0 + b))
}

/// Weights `(f⁺, f⁻)` from the first-site amplitudes of the standing wave.
pub fn amplitude_weights(mode: &Mode, l: usize) -> (f64, f64) {
    let p1 = mode.psi[0] * mode.sw_norm;
    let p2 = mode.psi[1] * mode.sw_norm;
    let lf = l as f64;
    (lf * (p1 + I * p2).norm_sqr(), lf * (p1 - I * p2).norm_sqr())
}

/// Weights `(f⁺, f⁻)` of mode `alpha` (0-based), cross-checked against the amplitudes.
pub fn mode_weights(table: &EigenmodeTable, alpha: usize) -> Result<(f64, f64)> {
    let mode = table
        .modes
        .get(alpha)
        .ok_or_else(|| Error::Argument(format!("mode {alpha} not in table of {}", table.modes.len())))?;
    let amp = amplitude_weights(mode, table.l);
    match (mode.mu, mode.xi, mode.delta) {
        (Some(mu), Some(xi), Some(delta)) => {
            let cf = closed_form_weights(mu, xi, delta);
            let err = (cf.0 - amp.0).abs().max((cf.1 - amp.1).abs());
            if err > 1e-9 {
                return Err(Error::Convention(format!(
                    "mode {alpha}: closed-form weights {cf:?} disagree with amplitudes {amp:?}"
                )));
            }
            Ok(cf)
        }
        _ => Ok(amp),
    }
}

/// Parameters of the secular theory.
#[derive(Clone, Debug, PartialEq)]
pub struct SecularParams {
    /// Partial-iSWAP angle in radians.
    pub theta: f64,
    /// Auxiliary exponent.
    pub h: f64,
    /// Cycles between resets.
    pub m: usize,
    pub table: EigenmodeTable,
}

impl SecularParams {
    pub fn new(table: EigenmodeTable, theta: f64, h: f64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::config("M", "must be at least 1"));
        }
        Ok(SecularParams { theta, h, m, table })
    }

    pub fn with_h(&self, h: f64) -> Self {
        SecularParams { h, ..self.clone() }
    }
}

/// `(W⁺, W⁻)`: creation and annihilation probabilities of mode `alpha` per reset period.
pub fn rates(p: &SecularParams, alpha: usize) -> Result<(f64, f64)> {
    let (fp, fm) = mode_weights(&p.table, alpha)?;
    let phi = p.table.modes[alpha].phi;
    let pre = 2.0 * PI * p.m as f64 * p.theta * p.theta / p.table.l as f64;
    Ok((
        pre * fm * delta_m(phi - PI * p.h, p.m),
        pre * fp * delta_m(phi + PI * p.h, p.m),
    ))
}

/// Steady-state occupations with the modes whose rates both vanish.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Occupations {
    pub n: Vec<f64>,
    /// Modes with both rates below 1e-300, reported at n = 1/2.
    pub indeterminate: Vec<usize>,
}

/// Steady state `n = W⁺ / (W⁺ + W⁻)` of every mode.
pub fn steady_occupations(p: &SecularParams) -> Result<Occupations> {
    let mut n = Vec::with_capacity(p.table.modes.len());
    let mut indeterminate = Vec::new();
    for alpha in 0..p.table.modes.len() {
        let (fp, fm) = mode_weights(&p.table, alpha)?;
        let phi = p.table.modes[alpha].phi;
        let up = fm * delta_m(phi - PI * p.h, p.m);
        let down = fp * delta_m(phi + PI * p.h, p.m);
        if up < 1e-300 && down < 1e-300 {
            indeterminate.push(alpha);
            n.push(0.5);
        } else {
            n.push(up / (up + down));
        }
    }
    Ok(Occupations { n, indeterminate })
}

/// Integrate `dn/dt = W⁺(1 − n) − W⁻ n` with classical Runge–Kutta, `t` in reset periods.
pub fn integrate_occupations(p: &SecularParams, n0: &[f64], t_end: f64, steps: usize) -> Result<Vec<f64>> {
    if n0.len() != p.table.modes.len() {
        return Err(Error::Dimension(format!(
            "{} initial occupations for {} modes",
            n0.len(),
            p.table.modes.len()
        )));
    }
    let w: Vec<(f64, f64)> = (0..n0.len()).map(|a| rates(p, a)).collect::<Result<_>>()?;
    let dt = t_end / steps.max(1) as f64;
    let mut n = n0.to_vec();
    for (x, &(up, down)) in n.iter_mut().zip(&w) {
        let f = |y: f64| up * (1.0 - y) - down * y;
        for _ in 0..steps {
            let k1 = f(*x);
            let k2 = f(*x + 0.5 * dt * k1);
            let k3 = f(*x + 0.5 * dt * k2);
            let k4 = f(*x + dt * k3);
            *x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    Ok(n)
}

/// Auxiliary-induced quasienergy corrections `(Δ(q_k) · Mθ²/L per mode, Δ₀)`.
pub fn lamb_shift(p: &SecularParams) -> Result<(Vec<f64>, f64)> {
    let scale = p.m as f64 * p.theta * p.theta / p.table.l as f64;
    let mut shifts = Vec::with_capacity(p.table.modes.len());
    let mut delta0 = 0.0;
    for (alpha, mode) in p.table.modes.iter().enumerate() {
        let (fp, fm) = mode_weights(&p.table, alpha)?;
        let plus = principal_m(mode.phi + PI * p.h, p.m);
        let minus = principal_m(mode.phi - PI * p.h, p.m);
        shifts.push(scale * (fp * plus + fm * minus));
        delta0 += scale * fp * plus;
    }
    Ok((shifts, delta0))
}

/// Figure of merit for the auxiliary exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Minimize `Σ n_k`.
    MinTotalOccupation,
    /// Maximize `Π (1 − n_k)`.
    MaxVacuumProbability,
    /// Maximize `Σ W⁻_k`.
    MaxRemovalRate,
}

impl Objective {
    /// Value to be maximized.
    fn score(self, p: &SecularParams) -> Result<f64> {
        Ok(match self {
            Objective::MinTotalOccupation => -steady_occupations(p)?.n.iter().sum::<f64>(),
            Objective::MaxVacuumProbability => steady_occupations(p)?.n.iter().map(|n| 1.0 - n).product(),
            Objective::MaxRemovalRate => (0..p.table.modes.len())
                .map(|a| rates(p, a).map(|r| r.1))
                .sum::<Result<f64>>()?,
        })
    }
}

/// Result of the auxiliary-exponent search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HOptimum {
    pub h: f64,
    /// Objective value in its natural sign (total occupation, probability or rate).
    pub value: f64,
    /// Set when the objective is flat over the grid.
    pub degenerate: bool,
}

/// Grid search with golden-section refinement around the best grid point.
pub fn optimize_h(p: &SecularParams, objective: Objective, grid: &[f64]) -> Result<HOptimum> {
    if grid.is_empty() {
        return Err(Error::Argument("empty h grid".into()));
    }
    let score = |h: f64| objective.score(&p.with_h(h));
    let scores: Vec<f64> = grid.iter().map(|&h| score(h)).collect::<Result<_>>()?;
    let natural = |s: f64| {
        if objective == Objective::MinTotalOccupation {
            -s
        } else {
            s
        }
    };
    let (best, hi) = scores.iter().enumerate().fold(
        (0usize, f64::NEG_INFINITY),
        |acc, (i, &s)| if s > acc.1 { (i, s) } else { acc },
    );
    let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
    if hi - lo < 1e-12 {
        let mid = 0.5 * (grid[0] + grid[grid.len() - 1]);
        return Ok(HOptimum {
            h: mid,
            value: natural(score(mid)?),
            degenerate: true,
        });
    }
    let mut a = if best > 0 { grid[best - 1] } else { grid[best] };
    let mut b = if best + 1 < grid.len() {
        grid[best + 1]
    } else {
        grid[best]
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut s1, mut s2) = (score(x1)?, score(x2)?);
    for _ in 0..80 {
        if (b - a).abs() < 1e-10 {
            break;
        }
        if s1 >= s2 {
            b = x2;
            x2 = x1;
            s2 = s1;
            x1 = b - ratio * (b - a);
            s1 = score(x1)?;
        } else {
            a = x1;
            x1 = x2;
            s1 = s2;
            x2 = a + ratio * (b - a);
            s2 = score(x2)?;
        }
    }
    let (h, s) = if s1 >= s2 { (x1, s1) } else { (x2, s2) };
    let (h, s) = if s >= hi { (h, s) } else { (grid[best], hi) };
    Ok(HOptimum {
        h,
        value: natural(s),
        degenerate: false,
    })
}

/// Default search grid `0, 0.01, …, 2`.
pub fn default_h_grid() -> Vec<f64> {
    (0..=200).map(|i| i as f64 * 0.01).collect()
}
