//! Steady-state and transient optical response of a three-level system with
//! all three transitions driven (a closed Δ-type loop).
//!
//! Because the loop is closed, the probe response depends on the relative
//! phase of the three fields. With a suitable auxiliary field the weak probe
//! is amplified while the probe transition stays non-inverted.
//!
//! ```
//! use deltalwi_core::{build_config, gain_probe, steady_state, ConfigurationKind, DecayRates};
//!
//! let drives = build_config(ConfigurationKind::A, 10.0, 0.1, 0.74, 0.0, -9.98).unwrap();
//! let decays = DecayRates::uniform(1.0).unwrap();
//! let state = steady_state(&drives, &decays).unwrap();
//! assert!(gain_probe(&state, &drives, ConfigurationKind::A) < 0.0);
//! assert!(state.s22 < state.s11);
//! ```

pub mod applications;
pub mod dynamics;
pub mod error;
pub mod evolve;
pub mod model;
pub mod optimize;
pub mod spectra;

pub use applications::{
    enantiomer_spectra, flux_qubit_rates, si_steady_time, EnantiomerReport, FluxQubitDrive, FluxQubitParams,
    FluxQubitRates,
};
pub use dynamics::{build_generator, eom_rhs, steady_state, steady_state_residual, GeneratorMatrix, StateVector8};
pub use error::{Error, Result};
pub use evolve::{evolve, evolve_sampled, time_to_steady, Trajectory};
pub use model::{
    build_config, detunings_from_lab, rho_from_sigma, wrap_phase, ConfigurationKind, DecayRates, DriveSet,
    LabFrameSpec, SigmaState,
};
pub use optimize::{optimal_aux_amplitude, scan_aux_amplitude, AuxOptimum, AuxScanCurve};
pub use spectra::{
    decompose_gain, find_extremum, gain_minima, gain_probe, gain_regions, population_inversion, scan_detuning,
    Extremum, GainDecomposition, GainSpectrum, ScanSettings, SpectrumRecord,
};
