//! Per-cycle noise rates and their conversion from coherence times.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cycle duration of the reference hardware schedule: 49 µs over 384 cycles.
pub const REFERENCE_CYCLE_NS: f64 = 49_000.0 / 384.0;
/// Reference single-qubit relaxation time.
pub const REFERENCE_T1_US: f64 = 21.0;
/// Reference single-qubit dephasing time.
pub const REFERENCE_T2_US: f64 = 8.0;

/// Dimensionless per-cycle decay and dephasing rates.
///
/// One application of the single-qubit channel multiplies the excited
/// population by `exp(-gamma_decay)` and the coherences by
/// `exp(-gamma_dephase - gamma_decay / 2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseRates {
    #[serde(default)]
    pub gamma_decay: f64,
    #[serde(default)]
    pub gamma_dephase: f64,
}

/// How (T1, T2) map onto the two channel rates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateAssignment {
    /// Decay from T1, pure dephasing chosen so the coherence decays with T2.
    #[default]
    ChannelRoles,
    /// Decay rate set from T2 and dephasing from T1, the alternative labelling.
    SwappedLabels,
}

impl NoiseRates {
    pub const NONE: NoiseRates = NoiseRates {
        gamma_decay: 0.0,
        gamma_dephase: 0.0,
    };

    pub fn new(gamma_decay: f64, gamma_dephase: f64) -> Self {
        NoiseRates {
            gamma_decay,
            gamma_dephase,
        }
    }

    pub fn dephasing(gamma_dephase: f64) -> Self {
        NoiseRates {
            gamma_decay: 0.0,
            gamma_dephase,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.gamma_decay == 0.0 && self.gamma_dephase == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("noise.gamma_decay", self.gamma_decay),
            ("noise.gamma_dephase", self.gamma_dephase),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::config(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Per-cycle rates from coherence times and the cycle duration.
    pub fn from_coherence(t1_us: f64, t2_us: f64, cycle_ns: f64, assignment: RateAssignment) -> Result<Self> {
        if !(t1_us > 0.0 && t2_us > 0.0 && cycle_ns > 0.0) {
            return Err(Error::config("coherence", "T1, T2 and cycle time must be positive"));
        }
        if t2_us > 2.0 * t1_us {
            return Err(Error::config("coherence", "T2 must not exceed 2 T1"));
        }
        let t = cycle_ns * 1e-3;
        let rates = match assignment {
            RateAssignment::ChannelRoles => NoiseRates {
                gamma_decay: t / t1_us,
                gamma_dephase: t / t2_us - t / (2.0 * t1_us),
            },
            RateAssignment::SwappedLabels => NoiseRates {
                gamma_decay: t / t2_us,
                gamma_dephase: t / t1_us,
            },
        };
        rates.validate()?;
        Ok(rates)
    }

    /// Rates from the reference coherence times and cycle duration.
    pub fn reference(assignment: RateAssignment) -> Self {
        Self::from_coherence(REFERENCE_T1_US, REFERENCE_T2_US, REFERENCE_CYCLE_NS, assignment)
            .expect("reference coherence times are valid")
    }

    /// Probability of a Z flip per cycle in the dephasing unravelling.
    pub fn flip_probability(&self) -> f64 {
        0.5 * (1.0 - (-self.gamma_dephase).exp())
    }
}
