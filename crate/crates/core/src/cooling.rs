//! Qubit layout and gate schedule of the dissipative cooling circuit.

use crate::config::CoolingConfig;
use crate::error::Result;
use crate::gates::Gate;

/// An auxiliary qubit and the system site it couples to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuxSlot {
    /// Position in the Jordan–Wigner order.
    pub qubit: usize,
    /// Attached system site, 1-based.
    pub site: usize,
}

/// Jordan–Wigner ordering of system and auxiliary qubits.
///
/// An auxiliary attached to site 1 precedes it; any other auxiliary follows
/// its site. Edge attachments therefore keep the system chain contiguous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoolingLayout {
    pub l: usize,
    pub n_qubits: usize,
    /// Position of system site `i + 1`.
    pub system: Vec<usize>,
    pub aux: Vec<AuxSlot>,
}

impl CoolingLayout {
    pub fn new(l: usize, sites: &[usize]) -> Self {
        let mut system = Vec::with_capacity(l);
        let mut aux = Vec::with_capacity(sites.len());
        let mut pos = 0;
        for site in 1..=l {
            let attached = sites.contains(&site);
            if attached && site == 1 {
                aux.push(AuxSlot { qubit: pos, site });
                pos += 1;
            }
            system.push(pos);
            pos += 1;
            if attached && site != 1 {
                aux.push(AuxSlot { qubit: pos, site });
                pos += 1;
            }
        }
        aux.sort_by_key(|a| sites.iter().position(|&s| s == a.site));
        CoolingLayout {
            l,
            n_qubits: pos,
            system,
            aux,
        }
    }

    pub fn from_config(cfg: &CoolingConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self::new(cfg.l, &cfg.sites()))
    }

    pub fn aux_qubits(&self) -> Vec<usize> {
        self.aux.iter().map(|a| a.qubit).collect()
    }

    /// True when the system occupies the positions `offset..offset + l`.
    pub fn system_contiguous(&self) -> bool {
        self.system.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

/// System-only Floquet step `exp(-iπJ/2 ΣXX) exp(iπg/2 ΣZ)`.
pub fn floquet_gates(layout: &CoolingLayout, g: f64, j: f64) -> Vec<Gate> {
    let mut gates: Vec<Gate> = layout.system.iter().map(|&q| Gate::field(q, g)).collect();
    for w in layout.system.windows(2) {
        gates.push(Gate::IsingXX { a: w[0], b: w[1], j });
    }
    gates
}

/// One cooling cycle: Floquet step, auxiliary exchange, auxiliary phase.
pub fn cycle_gates(layout: &CoolingLayout, g: f64, j: f64, theta: f64, h: f64) -> Vec<Gate> {
    let mut gates = floquet_gates(layout, g, j);
    for a in &layout.aux {
        gates.push(Gate::PartialIswap {
            a: a.qubit,
            b: layout.system[a.site - 1],
            theta,
        });
    }
    for a in &layout.aux {
        gates.push(Gate::PhaseZ { q: a.qubit, h });
    }
    gates
}

/// True when the auxiliaries are reset before cycle `d`.
pub fn resets_before(d: usize, reset_period: usize) -> bool {
    d % reset_period == 0
}
