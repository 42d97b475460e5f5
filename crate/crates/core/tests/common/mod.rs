#![allow(dead_code)]

use std::f64::consts::TAU;

use deltalwi_core::{DecayRates, DriveSet, SigmaState};
use nalgebra::Matrix3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Amplitudes in [0, 20], every detuning within [-20, 20], rates in [0.5, 2].
pub fn random_problem(rng: &mut impl Rng) -> (DriveSet, DecayRates) {
    let amplitudes = [rng.random_range(0.0..20.0), rng.random_range(0.0..20.0), rng.random_range(0.0..20.0)];
    let phases = [rng.random_range(0.0..TAU), rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)];
    let d2: f64 = rng.random_range(-10.0..10.0);
    let d3: f64 = rng.random_range(-10.0..10.0);
    let drives = DriveSet::new(amplitudes, phases, [d2 + d3, d2, d3]).unwrap();
    let decays =
        DecayRates::new(rng.random_range(0.5..2.0), rng.random_range(0.5..2.0), rng.random_range(0.5..2.0)).unwrap();
    (drives, decays)
}

/// A random positive unit-trace density matrix.
pub fn random_density(rng: &mut impl Rng) -> SigmaState {
    let b = Matrix3::from_fn(|_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = b * b.adjoint();
    let tr = m.trace().re;
    SigmaState::from_matrix(&(m / Complex64::new(tr, 0.0)))
}

/// Arbitrary (not necessarily physical) state for linear-algebra identities.
pub fn random_state(rng: &mut impl Rng) -> SigmaState {
    let mut c = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let (s12, s13, s23) = (c(), c(), c());
    SigmaState { s11: rng.random_range(-1.0..1.0), s22: rng.random_range(-1.0..1.0), s12, s13, s23 }
}
