//! TOML run configuration: one optional section per subcommand, each with
//! built-in defaults.

use std::f64::consts::PI;
use std::path::Path;

use floqcool::dense::StabilizeConfig;
use floqcool::gauss_prep::Cooling;
use floqcool::secular::Objective;
use floqcool::{CoolingConfig, Init, NoiseRates, XxzConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Simulation engine requested on the command line or in the file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EngineChoice {
    Gaussian,
    Dense,
    #[default]
    Auto,
}

/// Engine actually used for a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Gaussian,
    Dense,
}

impl Engine {
    /// Resolve `auto`; `reason` is set when the experiment is not Gaussian.
    pub fn resolve(choice: EngineChoice, reason: Option<&str>) -> Result<Engine, CliError> {
        match (choice, reason) {
            (EngineChoice::Gaussian, Some(r)) => Err(CliError::Core(floqcool::Error::Capability(format!(
                "the Gaussian engine cannot run this experiment: {r}"
            )))),
            (EngineChoice::Gaussian, None) => Ok(Engine::Gaussian),
            (EngineChoice::Dense, _) | (EngineChoice::Auto, Some(_)) => Ok(Engine::Dense),
            (EngineChoice::Auto, None) => Ok(Engine::Gaussian),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Engine::Gaussian => "gaussian",
            Engine::Dense => "dense",
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub engine: Option<EngineChoice>,
    pub trajectories: Option<usize>,
    pub cool: Option<CoolSection>,
    pub eigenmodes: Option<EigenSection>,
    pub secular: Option<SecularSection>,
    pub rdm: Option<RdmSection>,
    pub xxz: Option<XxzSection>,
    pub compare_prep: Option<ComparePrepSection>,
    pub stabilize: Option<StabilizeConfig>,
    pub sweep: Option<SweepSection>,
    pub validate: Option<ValidateSection>,
}

/// Parse a configuration file, reporting the field path of any schema violation.
pub fn load(path: &Path) -> Result<ConfigFile, CliError> {
    let raw = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&raw)
}

pub fn parse(raw: &str) -> Result<ConfigFile, CliError> {
    let de = toml::de::Deserializer::parse(raw).map_err(|e| CliError::Schema {
        path: String::new(),
        message: e.to_string(),
    })?;
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// How dephasing enters a Gaussian cooling run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dephasing {
    #[default]
    Average,
    Trajectory,
}

/// Square-lattice layout for the dense engine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    /// `(x, y)` sites (0-based) carrying an auxiliary.
    pub aux: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoolSection {
    pub circuit: CoolingConfig,
    #[serde(default)]
    pub dephasing: Dephasing,
    #[serde(default)]
    pub entropies: bool,
    #[serde(default)]
    pub grid: Option<GridSpec>,
}

impl Default for CoolSection {
    fn default() -> Self {
        let mut circuit = Cooling::critical().config(6, NoiseRates::NONE);
        circuit.cycles = 100;
        CoolSection {
            circuit,
            dephasing: Dephasing::Average,
            entropies: false,
            grid: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenSection {
    pub g: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "L")]
    pub l: usize,
}

impl Default for EigenSection {
    fn default() -> Self {
        EigenSection { g: 0.2, j: 0.2, l: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecularSection {
    pub g: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "L")]
    pub l: usize,
    pub theta: f64,
    pub h: f64,
    /// Cycles between resets.
    #[serde(rename = "M")]
    pub m: usize,
    /// When set, also search the auxiliary exponent on `0, 0.01, …, 2`.
    #[serde(default)]
    pub objective: Option<Objective>,
}

impl Default for SecularSection {
    fn default() -> Self {
        SecularSection {
            g: 0.2,
            j: 0.2,
            l: 6,
            theta: 0.11 * PI,
            h: 1.65,
            m: 4,
            objective: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RdmSection {
    #[serde(rename = "L")]
    pub l: usize,
    pub protocol: Cooling,
    /// Noise of the protocol run; zero selects the exact limit cycle.
    #[serde(default)]
    pub noise: NoiseRates,
    /// Modes with quasienergy below this are excluded from the edge-excluded fidelity.
    pub edge_threshold: f64,
    /// Largest prefix length for entropies; defaults to `L/2`.
    #[serde(default)]
    pub max_r: Option<usize>,
}

impl Default for RdmSection {
    fn default() -> Self {
        RdmSection {
            l: 6,
            protocol: Cooling::critical(),
            noise: NoiseRates::NONE,
            edge_threshold: 0.01,
            max_r: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XxzSection {
    pub circuit: XxzConfig,
    /// Cycles averaged for the steady-state summary.
    pub tail: usize,
    /// Cycle window of the pumping-exponent fit.
    pub window: (usize, usize),
}

impl Default for XxzSection {
    fn default() -> Self {
        XxzSection {
            circuit: XxzConfig::new(10, PI / 4.0, PI / 2.0, 60),
            tail: 10,
            window: (2, 10),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparePrepSection {
    pub lengths: Vec<usize>,
    pub noise: NoiseRates,
    pub protocol: Cooling,
}

impl Default for ComparePrepSection {
    fn default() -> Self {
        ComparePrepSection {
            lengths: vec![4, 6, 8, 10],
            noise: NoiseRates::dephasing(0.016),
            protocol: Cooling::critical(),
        }
    }
}

/// Inclusive arithmetic grid `start, start + step, …, stop`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn points(&self, field: &str) -> Result<Vec<f64>, CliError> {
        let bad = |m: &str| CliError::Schema {
            path: field.into(),
            message: m.into(),
        };
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(bad("bounds must be finite"));
        }
        if self.stop < self.start {
            return Err(bad("stop must not be below start"));
        }
        if self.step <= 0.0 {
            return Err(bad("step must be positive"));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|k| self.start + k as f64 * self.step).collect())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub cooling: Option<CoolingSweep>,
    #[serde(default)]
    pub xxz: Option<XxzSweep>,
}

/// Energy ratio over a `(θ, h)` grid for an edge-cooled chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoolingSweep {
    #[serde(rename = "L")]
    pub l: usize,
    pub g: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub reset_period: usize,
    pub cycles_per_site: f64,
    /// Scrambled initial state seed.
    pub init_seed: u64,
    /// Noise of the runs; zero selects the exact limit cycle.
    pub noise: NoiseRates,
    /// Partial-iSWAP angle in units of π.
    pub theta_over_pi: Range,
    pub h: Range,
}

impl Default for CoolingSweep {
    fn default() -> Self {
        CoolingSweep {
            l: 6,
            g: 0.2,
            j: 0.2,
            reset_period: 4,
            cycles_per_site: 100.0 / 6.0,
            init_seed: 0,
            noise: NoiseRates::dephasing(0.016),
            theta_over_pi: Range {
                start: 0.05,
                stop: 0.2,
                step: 0.01,
            },
            h: Range {
                start: 1.0,
                stop: 2.0,
                step: 0.05,
            },
        }
    }
}

impl CoolingSweep {
    pub fn config(&self, theta: f64, h: f64) -> CoolingConfig {
        let mut cfg = CoolingConfig::edge_cooled(
            self.l,
            self.g,
            self.j,
            theta,
            h,
            (self.cycles_per_site * self.l as f64).round() as usize,
        );
        cfg.reset_period = self.reset_period;
        cfg.noise = self.noise;
        cfg.init = Init::Scrambled { seed: self.init_seed };
        cfg
    }
}

/// Steady-state bond currents against the fSim swap angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XxzSweep {
    #[serde(rename = "N")]
    pub n: usize,
    pub phi: f64,
    /// Swap angle in units of π.
    pub theta_over_pi: Range,
    pub cycles: usize,
    pub tail: usize,
    #[serde(default)]
    pub noise: NoiseRates,
}

impl Default for XxzSweep {
    fn default() -> Self {
        XxzSweep {
            n: 8,
            phi: PI / 2.0,
            theta_over_pi: Range {
                start: 1.0 / 6.0,
                stop: 11.0 / 24.0,
                step: 1.0 / 24.0,
            },
            cycles: 60,
            tail: 10,
            noise: NoiseRates::NONE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateSection {
    /// Number of random circuits.
    pub count: usize,
    /// Largest total qubit count.
    pub max_qubits: usize,
    /// Largest accepted engine difference.
    pub tolerance: f64,
}

impl Default for ValidateSection {
    fn default() -> Self {
        ValidateSection {
            count: 24,
            max_qubits: 6,
            tolerance: 1e-8,
        }
    }
}
