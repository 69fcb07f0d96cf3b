//! Dissipative cooling of Floquet transverse-field Ising chains.
//!
//! * [`gaussian`]: Majorana covariance engine for matchgate circuits with resets.
//! * [`dense`]: density-matrix and trajectory engine for small registers.
//! * [`eigenmodes`]: single-particle Floquet modes of the open chain.
//! * [`secular`]: weak-coupling rates and steady-state occupations.
//! * [`rdm`]: one-body reduced density matrices, purification and correlators.
//! * [`xxz`]: boundary-driven Floquet XXZ transport.
//! * [`gauss_prep`]: Givens-ladder preparation of the Floquet vacuum.

pub mod config;
pub mod cooling;
pub mod dense;
pub mod eigenmodes;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod gauss_prep;
pub mod gaussian;
pub mod linalg;
pub mod noise;
pub mod rdm;
pub mod secular;
pub mod tfim;
pub mod validate;
pub mod xxz;

pub use config::{CoolingConfig, Init, XxzConfig};
pub use cooling::CoolingLayout;
pub use error::{Error, Result};
pub use gates::Gate;
pub use gaussian::{CovarianceState, ObservableRecord};
pub use noise::{NoiseRates, RateAssignment};
