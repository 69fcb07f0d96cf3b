//! Experiment descriptions shared by the engines and the command line.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::NoiseRates;

/// Initial state of a cooling run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Init {
    /// Every qubit in |1⟩.
    #[default]
    Vacuum,
    /// Seeded random state; a random orthogonal rotation in the Gaussian
    /// engine, a random CZ circuit in the dense engine.
    Scrambled { seed: u64 },
}

/// Dissipative cooling circuit on an open TFIM chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoolingConfig {
    /// System chain length.
    #[serde(rename = "L")]
    pub l: usize,
    /// Number of auxiliary qubits.
    #[serde(rename = "M")]
    pub m: usize,
    /// Attachment site (1-based) of each auxiliary; empty selects evenly spaced sites.
    #[serde(default)]
    pub placement: Vec<usize>,
    /// Transverse field in units of the cycle rotation (angle πg).
    pub g: f64,
    /// Ising coupling in units of the cycle rotation (angle πJ).
    #[serde(rename = "J")]
    pub j: f64,
    /// Partial-iSWAP angle in radians.
    pub theta: f64,
    /// Auxiliary phase exponent of Z^h.
    pub h: f64,
    /// Cycles between auxiliary resets.
    #[serde(default = "default_reset_period")]
    pub reset_period: usize,
    /// Total number of cycles.
    pub cycles: usize,
    #[serde(default)]
    pub noise: NoiseRates,
    #[serde(default)]
    pub init: Init,
}

fn default_reset_period() -> usize {
    4
}

/// Evenly spaced attachment sites including both chain ends.
pub fn default_placement(l: usize, m: usize) -> Vec<usize> {
    match m {
        0 => Vec::new(),
        1 => vec![1],
        _ => (0..m)
            .map(|k| 1 + ((k as f64) * (l as f64 - 1.0) / (m as f64 - 1.0)).round() as usize)
            .collect(),
    }
}

impl CoolingConfig {
    /// Chain of length `l` with one auxiliary on each end.
    pub fn edge_cooled(l: usize, g: f64, j: f64, theta: f64, h: f64, cycles: usize) -> Self {
        CoolingConfig {
            l,
            m: 2,
            placement: vec![1, l],
            g,
            j,
            theta,
            h,
            reset_period: 4,
            cycles,
            noise: NoiseRates::NONE,
            init: Init::Vacuum,
        }
    }

    /// Attachment sites, resolving the default.
    pub fn sites(&self) -> Vec<usize> {
        if self.placement.is_empty() {
            default_placement(self.l, self.m)
        } else {
            self.placement.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 1 {
            return Err(Error::config("L", "must be >= 1"));
        }
        for (name, v) in [("g", self.g), ("J", self.j), ("h", self.h), ("theta", self.theta)] {
            if !v.is_finite() {
                return Err(Error::config(name, "must be finite"));
            }
        }
        if !(0.0..=PI / 2.0).contains(&self.theta) {
            return Err(Error::config(
                "theta",
                format!("must lie in [0, pi/2], got {}", self.theta),
            ));
        }
        if self.reset_period < 1 {
            return Err(Error::config("reset_period", "must be >= 1"));
        }
        let sites = self.sites();
        if sites.len() != self.m {
            return Err(Error::config(
                "placement",
                format!("{} sites given for M = {}", sites.len(), self.m),
            ));
        }
        for (k, &s) in sites.iter().enumerate() {
            if s < 1 || s > self.l {
                return Err(Error::config(
                    format!("placement[{k}]"),
                    format!("site {s} outside [1, {}]", self.l),
                ));
            }
            if sites[..k].contains(&s) {
                return Err(Error::config(format!("placement[{k}]"), format!("site {s} used twice")));
            }
        }
        self.noise.validate()
    }
}

/// Boundary-driven Floquet XXZ chain: two auxiliaries around `n - 2` system qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XxzConfig {
    /// Total qubit count including both auxiliaries.
    #[serde(rename = "N")]
    pub n: usize,
    /// fSim swap angle.
    pub theta: f64,
    /// fSim conditional phase.
    pub phi: f64,
    /// Reset target of the left auxiliary.
    #[serde(default = "one")]
    pub m1: u8,
    /// Reset target of the right auxiliary.
    #[serde(default)]
    pub m2: u8,
    /// Number of cycles.
    pub cycles: usize,
    #[serde(default)]
    pub noise: NoiseRates,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> u8 {
    1
}

impl XxzConfig {
    pub fn new(n: usize, theta: f64, phi: f64, cycles: usize) -> Self {
        XxzConfig {
            n,
            theta,
            phi,
            m1: 1,
            m2: 0,
            cycles,
            noise: NoiseRates::NONE,
            seed: 0,
        }
    }

    /// Anisotropy φ / (2θ).
    pub fn anisotropy(&self) -> f64 {
        self.phi / (2.0 * self.theta)
    }

    pub fn system_len(&self) -> usize {
        self.n - 2
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::config("N", "must be >= 4"));
        }
        if self.m1 > 1 {
            return Err(Error::config("m1", "must be 0 or 1"));
        }
        if self.m2 > 1 {
            return Err(Error::config("m2", "must be 0 or 1"));
        }
        if !(self.theta.is_finite() && self.phi.is_finite()) {
            return Err(Error::config("theta", "angles must be finite"));
        }
        self.noise.validate()
    }
}
