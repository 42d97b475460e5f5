//! Physical realisations: superconducting flux qubits and chiral molecules.

use std::f64::consts::PI;

use crate::error::{ensure, Result};
use crate::evolve::time_to_steady;
use crate::model::{build_config, ConfigurationKind, DecayRates, SigmaState};
use crate::spectra::{scan_detuning, GainSpectrum, ScanSettings};

/// Reference matrix-element modulus that maps the measured 6.9e7 s⁻¹ rate
/// onto the quoted three-level decay rates.
pub const DEFAULT_T_REF: f64 = 0.66;
pub const DEFAULT_GAMMA_REF: f64 = 6.9e7;
/// Max-norm distance that counts as "stationary" for the SI estimate.
pub const SI_STEADY_EPS: f64 = 1e-3;

/// Transition-matrix-element moduli of the three lowest flux-qubit levels.
///
/// Flux-qubit states 0, 1, 2 map onto model levels 1, 2, 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxQubitParams {
    pub t01: f64,
    pub t02: f64,
    pub t12: f64,
    /// Measured relaxation rate in s⁻¹ for a transition of modulus `t_ref`.
    pub gamma_ref: f64,
    pub t_ref: f64,
}

impl Default for FluxQubitParams {
    fn default() -> Self {
        Self { t01: 0.19, t02: 0.14, t12: 0.19, gamma_ref: DEFAULT_GAMMA_REF, t_ref: DEFAULT_T_REF }
    }
}

impl FluxQubitParams {
    fn validate(&self) -> Result<()> {
        for (name, v) in [("t01", self.t01), ("t02", self.t02), ("t12", self.t12)] {
            ensure(v.is_finite() && v > 0.0, || format!("{name} must be positive, got {v}"))?;
        }
        ensure(self.gamma_ref.is_finite() && self.gamma_ref > 0.0, || {
            format!("gamma_ref must be positive, got {}", self.gamma_ref)
        })?;
        ensure(self.t_ref.is_finite() && self.t_ref > 0.0, || format!("t_ref must be positive, got {}", self.t_ref))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxQubitRates {
    /// Rates in s⁻¹.
    pub si: DecayRates,
    /// Rates in units of `gamma_unit`.
    pub normalized: DecayRates,
    /// The 2→1 rate in s⁻¹, used as γ.
    pub gamma_unit: f64,
}

/// Decay rates scaling as `gamma_ref (|t| / t_ref)²` per channel.
pub fn flux_qubit_rates(params: &FluxQubitParams) -> Result<FluxQubitRates> {
    params.validate()?;
    let rate = |t: f64| params.gamma_ref * (t / params.t_ref).powi(2);
    let si = DecayRates::new(rate(params.t02), rate(params.t01), rate(params.t12))?;
    let gamma_unit = si.gamma2();
    Ok(FluxQubitRates { si, normalized: si.scaled(gamma_unit)?, gamma_unit })
}

/// Drive amplitudes in units of the 2→1 decay rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxQubitDrive {
    pub kind: ConfigurationKind,
    pub g_coupling: f64,
    pub g_probe: f64,
    pub g_aux: f64,
    pub loop_phase: f64,
    pub detuning: f64,
}

impl Default for FluxQubitDrive {
    fn default() -> Self {
        Self {
            kind: ConfigurationKind::A,
            g_coupling: 10.0,
            g_probe: 0.1,
            g_aux: 0.74,
            loop_phase: 0.0,
            detuning: -9.98,
        }
    }
}

/// Seconds for the flux-qubit realisation, prepared in its ground state, to
/// come within [`SI_STEADY_EPS`] of its steady state.
pub fn si_steady_time(params: &FluxQubitParams, drive: &FluxQubitDrive) -> Result<f64> {
    let rates = flux_qubit_rates(params)?;
    let drives =
        build_config(drive.kind, drive.g_coupling, drive.g_probe, drive.g_aux, drive.loop_phase, drive.detuning)?;
    let t = time_to_steady(&drives, &rates.normalized, &SigmaState::ground(), SI_STEADY_EPS)?;
    Ok(t / rates.gamma_unit)
}

/// Spectra of a left/right enantiomer pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EnantiomerReport {
    pub left: GainSpectrum,
    pub right: GainSpectrum,
    /// Largest pointwise `|gain_left - gain_right|`.
    pub discrimination: f64,
    /// Detuning where the discrimination is attained.
    pub discrimination_at: f64,
}

/// Mirror-image molecules see every drive with opposite sign, so their
/// loop phases differ by π.
pub fn enantiomer_spectra(
    settings: &ScanSettings,
    decays: &DecayRates,
    d_min: f64,
    d_max: f64,
    n_points: usize,
) -> Result<EnantiomerReport> {
    enantiomer_spectra_with_offset(settings, decays, d_min, d_max, n_points, PI)
}

/// As [`enantiomer_spectra`] with an arbitrary left/right phase offset.
pub fn enantiomer_spectra_with_offset(
    settings: &ScanSettings,
    decays: &DecayRates,
    d_min: f64,
    d_max: f64,
    n_points: usize,
    offset: f64,
) -> Result<EnantiomerReport> {
    let left = scan_detuning(settings, decays, d_min, d_max, n_points)?;
    let right_settings = ScanSettings { loop_phase: settings.loop_phase - offset, ..*settings };
    let right = scan_detuning(&right_settings, decays, d_min, d_max, n_points)?;
    let (discrimination_at, discrimination) = left
        .records
        .iter()
        .zip(&right.records)
        .map(|(l, r)| (l.detuning, (l.gain - r.gain).abs()))
        .fold((d_min, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    Ok(EnantiomerReport { left, right, discrimination, discrimination_at })
}
