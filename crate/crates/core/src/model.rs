//! Domain types for the driven three-level cyclic system.
//!
//! Levels are labelled 1, 2, 3 in order of increasing energy. All three
//! pairwise transitions are driven:
//!
//! | field      | transition | amplitude | phase | detuning |
//! |------------|------------|-----------|-------|----------|
//! | auxiliary* | 1 ↔ 3      | `g1`      | `phi1`| `delta1` |
//! | 1 ↔ 2      | 1 ↔ 2      | `g2`      | `phi2`| `delta2` |
//! | 2 ↔ 3      | 2 ↔ 3      | `g3`      | `phi3`| `delta3` |
//!
//! (*) in both standard configurations the 1 ↔ 3 field is the tunable one.
//!
//! Amplitudes are half Rabi frequencies and everything is expressed in units
//! of a reference decay rate γ. Spontaneous decay runs 3→1 at `gamma1`,
//! 2→1 at `gamma2` and 3→2 at `gamma3`.

use std::f64::consts::TAU;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{ensure, Result};

/// Tolerance on the closed-loop detuning condition `delta1 = delta2 + delta3`.
pub const DETUNING_LOOP_TOL: f64 = 1e-12;

/// Level decay rates in units of γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRates {
    gamma1: f64,
    gamma2: f64,
    gamma3: f64,
}

impl DecayRates {
    pub fn new(gamma1: f64, gamma2: f64, gamma3: f64) -> Result<Self> {
        for (name, v) in [("gamma1", gamma1), ("gamma2", gamma2), ("gamma3", gamma3)] {
            ensure(v.is_finite() && v >= 0.0, || format!("{name} must be finite and non-negative, got {v}"))?;
        }
        Ok(Self { gamma1, gamma2, gamma3 })
    }

    /// All three channels at the same rate.
    pub fn uniform(gamma: f64) -> Result<Self> {
        Self::new(gamma, gamma, gamma)
    }

    /// 3 → 1 decay rate.
    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }
    /// 2 → 1 decay rate.
    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }
    /// 3 → 2 decay rate.
    pub fn gamma3(&self) -> f64 {
        self.gamma3
    }

    /// Dephasing rate of the 1–2 coherence.
    pub fn dephasing12(&self) -> f64 {
        self.gamma2 / 2.0
    }
    /// Dephasing rate of the 1–3 coherence.
    pub fn dephasing13(&self) -> f64 {
        (self.gamma1 + self.gamma3) / 2.0
    }
    /// Dephasing rate of the 2–3 coherence.
    pub fn dephasing23(&self) -> f64 {
        (self.gamma1 + self.gamma2 + self.gamma3) / 2.0
    }

    pub fn min_rate(&self) -> f64 {
        self.gamma1.min(self.gamma2).min(self.gamma3)
    }

    /// Same rates expressed in units of `unit`.
    pub fn scaled(&self, unit: f64) -> Result<Self> {
        ensure(unit.is_finite() && unit > 0.0, || format!("rate unit must be positive, got {unit}"))?;
        Self::new(self.gamma1 / unit, self.gamma2 / unit, self.gamma3 / unit)
    }
}

/// Amplitudes, phases and detunings of the three driving fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSet {
    g1: f64,
    g2: f64,
    g3: f64,
    phi1: f64,
    phi2: f64,
    phi3: f64,
    delta1: f64,
    delta2: f64,
    delta3: f64,
}

impl DriveSet {
    /// `amplitudes = (g1, g2, g3)`, `phases = (phi1, phi2, phi3)`,
    /// `detunings = (delta1, delta2, delta3)`.
    pub fn new(amplitudes: [f64; 3], phases: [f64; 3], detunings: [f64; 3]) -> Result<Self> {
        for (i, g) in amplitudes.iter().enumerate() {
            ensure(g.is_finite() && *g >= 0.0, || {
                format!("amplitude g{} must be finite and non-negative, got {g}", i + 1)
            })?;
        }
        for v in phases.iter().chain(detunings.iter()) {
            ensure(v.is_finite(), || format!("phases and detunings must be finite, got {v}"))?;
        }
        let [d1, d2, d3] = detunings;
        ensure((d1 - (d2 + d3)).abs() <= DETUNING_LOOP_TOL, || {
            format!("detunings violate delta1 = delta2 + delta3: {d1} vs {d2} + {d3}")
        })?;
        let [g1, g2, g3] = amplitudes;
        let [phi1, phi2, phi3] = phases;
        Ok(Self { g1, g2, g3, phi1, phi2, phi3, delta1: d1, delta2: d2, delta3: d3 })
    }

    pub fn amplitudes(&self) -> [f64; 3] {
        [self.g1, self.g2, self.g3]
    }
    pub fn phases(&self) -> [f64; 3] {
        [self.phi1, self.phi2, self.phi3]
    }
    pub fn detunings(&self) -> [f64; 3] {
        [self.delta1, self.delta2, self.delta3]
    }

    pub fn g1(&self) -> f64 {
        self.g1
    }
    pub fn g2(&self) -> f64 {
        self.g2
    }
    pub fn g3(&self) -> f64 {
        self.g3
    }
    pub fn delta1(&self) -> f64 {
        self.delta1
    }
    pub fn delta2(&self) -> f64 {
        self.delta2
    }
    pub fn delta3(&self) -> f64 {
        self.delta3
    }

    /// Closed-loop phase `phi2 + phi3 - phi1`, reduced to `[0, 2π)`.
    pub fn relative_phase(&self) -> f64 {
        wrap_phase(self.phi2 + self.phi3 - self.phi1)
    }

    /// Copy with the 1 ↔ 3 amplitude replaced.
    pub fn with_g1(&self, g1: f64) -> Result<Self> {
        Self::new([g1, self.g2, self.g3], self.phases(), self.detunings())
    }
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Level energies and drive frequencies before moving to the rotating frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabFrameSpec {
    energies: [f64; 3],
    w31: f64,
    w21: f64,
    w32: f64,
}

impl LabFrameSpec {
    pub fn new(energies: [f64; 3], w31: f64, w21: f64, w32: f64) -> Result<Self> {
        let [e1, e2, e3] = energies;
        ensure(e3 > e2 && e2 > e1, || format!("energies must satisfy e3 > e2 > e1, got {energies:?}"))?;
        for v in [w31, w21, w32] {
            ensure(v.is_finite(), || format!("drive frequency must be finite, got {v}"))?;
        }
        Ok(Self { energies, w31, w21, w32 })
    }
}

/// Rotating-frame detunings `(delta1, delta2, delta3)` of the three fields.
///
/// These only yield a time-independent interaction Hamiltonian when
/// `delta1 = delta2 + delta3`; [`DriveSet::new`] enforces that.
pub fn detunings_from_lab(spec: &LabFrameSpec) -> [f64; 3] {
    let [e1, e2, e3] = spec.energies;
    [e3 - e1 - spec.w31, e2 - e1 - spec.w21, e3 - e2 - spec.w32]
}

/// Rotated density matrix: two populations and three coherences.
///
/// The third population is fixed by the trace, `s33 = 1 - s11 - s22`, and
/// the lower-triangle elements are the conjugates of the stored ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaState {
    pub s11: f64,
    pub s22: f64,
    pub s12: Complex64,
    pub s13: Complex64,
    pub s23: Complex64,
}

impl SigmaState {
    pub fn ground() -> Self {
        Self::diagonal(1.0, 0.0)
    }

    pub fn upper() -> Self {
        Self::diagonal(0.0, 0.0)
    }

    pub fn diagonal(s11: f64, s22: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self { s11, s22, s12: zero, s13: zero, s23: zero }
    }

    pub fn s33(&self) -> f64 {
        1.0 - self.s11 - self.s22
    }

    pub fn populations(&self) -> [f64; 3] {
        [self.s11, self.s22, self.s33()]
    }

    /// Full 3×3 Hermitian matrix.
    pub fn to_matrix(&self) -> Matrix3<Complex64> {
        let re = |x: f64| Complex64::new(x, 0.0);
        Matrix3::new(
            re(self.s11),
            self.s12,
            self.s13,
            self.s12.conj(),
            re(self.s22),
            self.s23,
            self.s13.conj(),
            self.s23.conj(),
            re(self.s33()),
        )
    }

    /// Build from the upper triangle of a (nominally Hermitian) matrix.
    pub fn from_matrix(m: &Matrix3<Complex64>) -> Self {
        Self { s11: m[(0, 0)].re, s22: m[(1, 1)].re, s12: m[(0, 1)], s13: m[(0, 2)], s23: m[(1, 2)] }
    }

    /// Smallest eigenvalue of the reconstructed matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.to_matrix())
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            (self.s11 - other.s11).abs(),
            (self.s22 - other.s22).abs(),
            (self.s33() - other.s33()).abs(),
            (self.s12 - other.s12).norm(),
            (self.s13 - other.s13).norm(),
            (self.s23 - other.s23).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub(crate) fn min_eigenvalue(m: &Matrix3<Complex64>) -> f64 {
    m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Which transition carries the strong resonant coupling field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConfigurationKind {
    /// Coupling on 2 ↔ 3, probe on 1 ↔ 2.
    A,
    /// Coupling on 1 ↔ 2, probe on 2 ↔ 3.
    B,
}

impl ConfigurationKind {
    pub fn label(&self) -> &'static str {
        match self {
            Self::A => "a",
            Self::B => "b",
        }
    }
}

impl std::str::FromStr for ConfigurationKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Self::A),
            "b" => Ok(Self::B),
            other => Err(format!("unknown configuration kind '{other}' (expected a or b)")),
        }
    }
}

/// Drive fields for one of the two standard configurations.
///
/// The coupling field is resonant. The probe and the 1 ↔ 3 auxiliary field
/// share `detuning`. The whole loop phase sits on the auxiliary field:
/// `phi2 = phi3 = 0` and `phi1 = -loop_phase`.
pub fn build_config(
    kind: ConfigurationKind,
    g_coupling: f64,
    g_probe: f64,
    g_aux: f64,
    loop_phase: f64,
    detuning: f64,
) -> Result<DriveSet> {
    let phases = [-loop_phase, 0.0, 0.0];
    match kind {
        ConfigurationKind::A => DriveSet::new([g_aux, g_probe, g_coupling], phases, [detuning, detuning, 0.0]),
        ConfigurationKind::B => DriveSet::new([g_aux, g_coupling, g_probe], phases, [detuning, 0.0, detuning]),
    }
}

/// Undo the phase gauge: `rho13 = s13 e^{-i phi1}`, `rho23 = s23 e^{-i phi3}`,
/// `rho12 = s12 e^{i(phi3 - phi1)}`.
pub fn rho_from_sigma(state: &SigmaState, drives: &DriveSet) -> Matrix3<Complex64> {
    let [phi1, _, phi3] = drives.phases();
    let rotated = SigmaState {
        s12: state.s12 * Complex64::from_polar(1.0, phi3 - phi1),
        s13: state.s13 * Complex64::from_polar(1.0, -phi1),
        s23: state.s23 * Complex64::from_polar(1.0, -phi3),
        ..*state
    };
    rotated.to_matrix()
}
