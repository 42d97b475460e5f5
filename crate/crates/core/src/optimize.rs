//! One-dimensional search over the auxiliary-field amplitude.

use rayon::prelude::*;

use crate::dynamics::steady_state;
use crate::error::{ensure, Error, Result};
use crate::model::DecayRates;
use crate::spectra::{gain_probe, uniform_grid, ScanSettings};

/// Final bracket width of the golden-section refinement, in units of γ.
pub const AMPLITUDE_TOL: f64 = 1e-6;
/// Coarse grid used to bracket minima and to report the global grid minimum.
pub const GLOBAL_GRID_MAX: f64 = 12.0;
pub const GLOBAL_GRID_POINTS: usize = 240;

const BRACKET_GRID_POINTS: usize = 97;

/// Probe response as a function of the auxiliary amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxScanCurve {
    pub settings: ScanSettings,
    pub detuning: f64,
    /// `(g_aux, gain)`, with `g_aux` strictly increasing from 0.
    pub records: Vec<(f64, f64)>,
}

/// Steady-state probe response for the given auxiliary amplitude.
pub fn gain_at_aux(settings: &ScanSettings, detuning: f64, decays: &DecayRates, g_aux: f64) -> Result<f64> {
    let drives = ScanSettings { g_aux, ..*settings }.drives_at(detuning)?;
    let state = steady_state(&drives, decays)?;
    Ok(gain_probe(&state, &drives, settings.kind))
}

fn sample(settings: &ScanSettings, detuning: f64, decays: &DecayRates, grid: Vec<f64>) -> Result<Vec<(f64, f64)>> {
    grid.into_par_iter().map(|g| Ok((g, gain_at_aux(settings, detuning, decays, g)?))).collect()
}

/// Gain on a uniform grid `g_aux ∈ [0, g_max]`. `settings.g_aux` is ignored.
pub fn scan_aux_amplitude(
    settings: &ScanSettings,
    detuning: f64,
    decays: &DecayRates,
    g_max: f64,
    n_points: usize,
) -> Result<AuxScanCurve> {
    ensure(g_max.is_finite() && g_max > 0.0, || format!("g_max must be positive, got {g_max}"))?;
    ensure(n_points >= 2, || format!("a scan needs at least 2 points, got {n_points}"))?;
    let records = sample(settings, detuning, decays, uniform_grid(0.0, g_max, n_points))?;
    Ok(AuxScanCurve { settings: *settings, detuning, records })
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Returns the best point seen together with its value.
pub fn golden_section_min<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxOptimum {
    pub g_star: f64,
    pub gain_star: f64,
    /// Minimum of the coarse grid over `[0, max(12, bracket_hi)]`, set only
    /// when it lies more than one grid spacing away from `g_star`.
    pub global_grid_minimum: Option<(f64, f64)>,
}

/// Auxiliary amplitude giving the most negative gain inside `bracket`.
///
/// A coarse grid over the bracket locates the best sample; it must be
/// interior. Golden-section search then refines it between its neighbours.
pub fn optimal_aux_amplitude(
    settings: &ScanSettings,
    detuning: f64,
    decays: &DecayRates,
    bracket: (f64, f64),
) -> Result<AuxOptimum> {
    let (lo, hi) = bracket;
    ensure(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi, || {
        format!("bracket must satisfy 0 <= lo < hi, got [{lo}, {hi}]")
    })?;
    let coarse = sample(settings, detuning, decays, uniform_grid(lo, hi, BRACKET_GRID_POINTS))?;
    let best =
        coarse.iter().enumerate().min_by(|a, b| a.1 .1.total_cmp(&b.1 .1)).map(|(k, _)| k).expect("non-empty grid");
    if best == 0 || best + 1 == coarse.len() {
        return Err(Error::Bracketing { lo, hi });
    }
    let (left, right) = (coarse[best - 1].0, coarse[best + 1].0);
    let (mut g_star, mut gain_star) =
        golden_section_min(|g| gain_at_aux(settings, detuning, decays, g), left, right, AMPLITUDE_TOL)?;
    // never report worse than the grid sample that seeded the search
    if coarse[best].1 < gain_star {
        (g_star, gain_star) = coarse[best];
    }

    let global_max = GLOBAL_GRID_MAX.max(hi);
    let global = sample(settings, detuning, decays, uniform_grid(0.0, global_max, GLOBAL_GRID_POINTS + 1))?;
    let spacing = global_max / GLOBAL_GRID_POINTS as f64;
    let global_best = global.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).expect("non-empty grid");
    let global_grid_minimum =
        ((global_best.0 - g_star).abs() > spacing && global_best.1 < gain_star).then_some(global_best);

    Ok(AuxOptimum { g_star, gain_star, global_grid_minimum })
}
