//! Matchgate vocabulary of the cooling circuits.

use serde::{Deserialize, Serialize};

/// Gates that compile to Majorana rotations. Qubit indices are positions in
/// the Jordan–Wigner order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// `Z^h = diag(1, e^{iπh})`.
    PhaseZ {
        q: usize,
        h: f64,
    },
    /// `exp(-iπJ/2 X_a X_b)`.
    IsingXX {
        a: usize,
        b: usize,
        j: f64,
    },
    /// `exp(iθ/2 (X_a X_b + Y_a Y_b))`.
    PartialIswap {
        a: usize,
        b: usize,
        theta: f64,
    },
    PauliX(usize),
    PauliY(usize),
    PauliZ(usize),
}

impl Gate {
    /// Transverse-field kick `exp(iπg/2 Z)`, equal to `Z^{-g}` up to a global phase.
    pub fn field(q: usize, g: f64) -> Gate {
        Gate::PhaseZ { q, h: -g }
    }

    /// Qubits touched by the gate.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::PhaseZ { q, .. } | Gate::PauliX(q) | Gate::PauliY(q) | Gate::PauliZ(q) => vec![q],
            Gate::IsingXX { a, b, .. } | Gate::PartialIswap { a, b, .. } => vec![a, b],
        }
    }
}
