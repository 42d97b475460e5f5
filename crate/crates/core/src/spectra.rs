//! Probe gain/absorption observables and detuning scans.
//!
//! Sign convention: a positive probe response is absorption and a negative
//! one is gain.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::{steady_state, steady_state_residual};
use crate::error::{ensure, Error, Result};
use crate::model::{build_config, ConfigurationKind, DecayRates, DriveSet, SigmaState};

/// Residual above which [`decompose_gain`] refuses a state.
pub const STEADY_RESIDUAL_TOL: f64 = 1e-8;

/// Probe response. Kind A: `Im(s21 e^{-iΦ})`. Kind B: `Im(s32)`.
pub fn gain_probe(state: &SigmaState, drives: &DriveSet, kind: ConfigurationKind) -> f64 {
    match kind {
        ConfigurationKind::A => (state.s12.conj() * Complex64::from_polar(1.0, -drives.relative_phase())).im,
        ConfigurationKind::B => -state.s23.im,
    }
}

/// Population difference across the probe transition (upper minus lower).
pub fn population_inversion(state: &SigmaState, kind: ConfigurationKind) -> f64 {
    match kind {
        ConfigurationKind::A => state.s22 - state.s11,
        ConfigurationKind::B => state.s33() - state.s22,
    }
}

/// Steady-state probe response split into a population part and a
/// coherence-driven part, `total = population_term + coherence_term`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainDecomposition {
    pub population_term: f64,
    pub coherence_term: f64,
    pub total: f64,
    /// `dephasing² + detuning²` of the probe transition.
    pub scale: f64,
}

/// Split the probe response at a steady state, by solving the probe
/// coherence's own stationarity condition.
pub fn decompose_gain(
    state: &SigmaState,
    drives: &DriveSet,
    decays: &DecayRates,
    kind: ConfigurationKind,
) -> Result<GainDecomposition> {
    let residual = steady_state_residual(state, drives, decays);
    if residual.is_nan() || residual > STEADY_RESIDUAL_TOL {
        return Err(Error::NotSteady { residual });
    }
    let i = Complex64::i();
    let (g1, g2, g3) = (drives.g1(), drives.g2(), drives.g3());
    let (s12, s23) = (state.s12, state.s23);
    let s31 = state.s13.conj();
    let [s11, s22, s33] = state.populations();
    let back_phase = Complex64::from_polar(1.0, -drives.relative_phase());

    let (population_term, coherence_term, scale) = match kind {
        ConfigurationKind::A => {
            let width = decays.dephasing12();
            let delta = drives.delta2();
            let scale = width * width + delta * delta;
            let pop = g2 * width * (s11 - s22) / scale;
            let coh = (Complex64::new(width, -delta) * (i * g3 * s31 - i * g1 * s23) * back_phase / scale).im;
            (pop, coh, scale)
        }
        ConfigurationKind::B => {
            let width = decays.dephasing23();
            let delta = drives.delta3();
            let scale = width * width + delta * delta;
            let pop = g3 * width * (s22 - s33) / scale;
            let coh = (Complex64::new(width, -delta) * (i * g1 * s12 - i * g2 * s31 * back_phase) / scale).im;
            (pop, coh, scale)
        }
    };
    Ok(GainDecomposition { population_term, coherence_term, total: population_term + coherence_term, scale })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRecord {
    pub detuning: f64,
    pub gain: f64,
    pub pop_diff: f64,
    pub s11: f64,
    pub s22: f64,
    pub s33: f64,
}

impl SpectrumRecord {
    pub fn from_state(detuning: f64, state: &SigmaState, drives: &DriveSet, kind: ConfigurationKind) -> Self {
        let [s11, s22, s33] = state.populations();
        Self {
            detuning,
            gain: gain_probe(state, drives, kind),
            pop_diff: population_inversion(state, kind),
            s11,
            s22,
            s33,
        }
    }
}

/// Probe response versus probe detuning at fixed amplitudes and loop phase.
#[derive(Debug, Clone, PartialEq)]
pub struct GainSpectrum {
    pub kind: ConfigurationKind,
    pub loop_phase: f64,
    pub records: Vec<SpectrumRecord>,
}

impl GainSpectrum {
    pub fn new(kind: ConfigurationKind, loop_phase: f64, records: Vec<SpectrumRecord>) -> Result<Self> {
        ensure(records.windows(2).all(|w| w[1].detuning > w[0].detuning), || {
            "spectrum detunings must be strictly increasing".to_string()
        })?;
        Ok(Self { kind, loop_phase, records })
    }

    pub fn detunings(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.detuning).collect()
    }

    pub fn gains(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.gain).collect()
    }

    /// Records with `lo <= detuning <= hi`.
    pub fn window(&self, lo: f64, hi: f64) -> Self {
        let records = self.records.iter().filter(|r| r.detuning >= lo && r.detuning <= hi).copied().collect();
        Self { kind: self.kind, loop_phase: self.loop_phase, records }
    }
}

/// Amplitudes that stay fixed across a detuning scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSettings {
    pub kind: ConfigurationKind,
    pub g_coupling: f64,
    pub g_probe: f64,
    pub g_aux: f64,
    pub loop_phase: f64,
}

impl ScanSettings {
    pub fn drives_at(&self, detuning: f64) -> Result<DriveSet> {
        build_config(self.kind, self.g_coupling, self.g_probe, self.g_aux, self.loop_phase, detuning)
    }
}

/// `n` uniformly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|k| if k + 1 == n { hi } else { lo + step * k as f64 }).collect()
}

/// Steady-state spectrum on a uniform detuning grid.
///
/// Points are solved in parallel; record order always follows detuning.
pub fn scan_detuning(
    settings: &ScanSettings,
    decays: &DecayRates,
    d_min: f64,
    d_max: f64,
    n_points: usize,
) -> Result<GainSpectrum> {
    ensure(n_points >= 2, || format!("a scan needs at least 2 points, got {n_points}"))?;
    ensure(d_min.is_finite() && d_max.is_finite() && d_min < d_max, || {
        format!("detuning range must satisfy d_min < d_max, got [{d_min}, {d_max}]")
    })?;
    settings.drives_at(d_min)?;
    let records = uniform_grid(d_min, d_max, n_points)
        .into_par_iter()
        .map(|detuning| {
            let drives = settings.drives_at(detuning)?;
            let state =
                steady_state(&drives, decays).map_err(|e| Error::AtDetuning { detuning, source: Box::new(e) })?;
            Ok(SpectrumRecord::from_state(detuning, &state, &drives, settings.kind))
        })
        .collect::<Result<Vec<_>>>()?;
    GainSpectrum::new(settings.kind, settings.loop_phase, records)
}

/// Location and depth of a gain minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub detuning: f64,
    pub gain: f64,
    /// The discrete minimum sat on the first or last grid point.
    pub on_boundary: bool,
}

/// Vertex of the parabola through three equally spaced samples.
fn parabolic_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let h = x[1] - x[0];
    let curvature = y[0] - 2.0 * y[1] + y[2];
    if curvature <= 0.0 {
        return (x[1], y[1]);
    }
    let offset = 0.5 * h * (y[0] - y[2]) / curvature;
    let value = y[1] - 0.125 * (y[0] - y[2]) * (y[0] - y[2]) / curvature;
    (x[1] + offset, value)
}

fn refine_at(detunings: &[f64], gains: &[f64], k: usize) -> Extremum {
    if k == 0 || k + 1 == gains.len() {
        return Extremum { detuning: detunings[k], gain: gains[k], on_boundary: true };
    }
    let (detuning, gain) =
        parabolic_vertex([detunings[k - 1], detunings[k], detunings[k + 1]], [gains[k - 1], gains[k], gains[k + 1]]);
    Extremum { detuning, gain, on_boundary: false }
}

/// Most negative gain, refined by quadratic interpolation.
pub fn find_extremum(spectrum: &GainSpectrum) -> Result<Extremum> {
    ensure(spectrum.records.len() >= 3, || "need at least 3 records to locate an extremum".to_string())?;
    let detunings = spectrum.detunings();
    let gains = spectrum.gains();
    let k = gains.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(k, _)| k).expect("non-empty");
    Ok(refine_at(&detunings, &gains, k))
}

/// Every interior local minimum with negative gain, refined, in detuning order.
pub fn gain_minima(spectrum: &GainSpectrum) -> Vec<Extremum> {
    let detunings = spectrum.detunings();
    let gains = spectrum.gains();
    (1..gains.len().saturating_sub(1))
        .filter(|&k| gains[k] < 0.0 && gains[k] < gains[k - 1] && gains[k] <= gains[k + 1])
        .map(|k| refine_at(&detunings, &gains, k))
        .collect()
}

/// Maximal detuning intervals on which the scanned gain is negative.
pub fn gain_regions(spectrum: &GainSpectrum) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    let mut prev = f64::NAN;
    for r in &spectrum.records {
        match (r.gain < 0.0, start) {
            (true, None) => start = Some(r.detuning),
            (false, Some(s)) => {
                out.push((s, prev));
                start = None;
            }
            _ => {}
        }
        prev = r.detuning;
    }
    if let Some(s) = start {
        out.push((s, prev));
    }
    out
}
