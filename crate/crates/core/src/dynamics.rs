//! Equations of motion for the rotated density matrix and their fixed point.
//!
//! With `s33 = 1 - s11 - s22` eliminated, the dynamics are affine in the
//! eight real unknowns
//!
//! ```text
//! x = (s11, s22, Re s12, Im s12, Re s13, Im s13, Re s23, Im s23)
//! ```
//!
//! so `dx/dt = A x + c` and the steady state solves `A x = -c`.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DecayRates, DriveSet, SigmaState};

/// Steady states whose generator exceeds this condition number are rejected.
pub const MAX_CONDITION: f64 = 1e12;

pub type Matrix8 = SMatrix<f64, 8, 8>;
pub type Vector8 = SVector<f64, 8>;

/// Real packing of a [`SigmaState`] in the order documented at module level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector8(pub Vector8);

impl From<&SigmaState> for StateVector8 {
    fn from(s: &SigmaState) -> Self {
        Self(Vector8::from([s.s11, s.s22, s.s12.re, s.s12.im, s.s13.re, s.s13.im, s.s23.re, s.s23.im]))
    }
}

impl From<&StateVector8> for SigmaState {
    fn from(v: &StateVector8) -> Self {
        let x = &v.0;
        SigmaState {
            s11: x[0],
            s22: x[1],
            s12: Complex64::new(x[2], x[3]),
            s13: Complex64::new(x[4], x[5]),
            s23: Complex64::new(x[6], x[7]),
        }
    }
}

/// Time derivative of a [`SigmaState`]. `d33` is implied by the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaDerivative {
    pub d11: f64,
    pub d22: f64,
    pub d12: Complex64,
    pub d13: Complex64,
    pub d23: Complex64,
}

impl SigmaDerivative {
    pub fn d33(&self) -> f64 {
        -(self.d11 + self.d22)
    }

    pub fn max_norm(&self) -> f64 {
        [self.d11.abs(), self.d22.abs(), self.d33().abs(), self.d12.norm(), self.d13.norm(), self.d23.norm()]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn packed(&self) -> Vector8 {
        Vector8::from([
            self.d11,
            self.d22,
            self.d12.re,
            self.d12.im,
            self.d13.re,
            self.d13.im,
            self.d23.re,
            self.d23.im,
        ])
    }
}

/// Right-hand side of the rotated master equation, evaluated directly in
/// complex arithmetic.
pub fn eom_rhs(state: &SigmaState, drives: &DriveSet, decays: &DecayRates) -> SigmaDerivative {
    let i = Complex64::i();
    let (g1, g2, g3) = (drives.g1(), drives.g2(), drives.g3());
    let (gamma1, gamma2, gamma3) = (decays.gamma1(), decays.gamma2(), decays.gamma3());
    let loop_factor = Complex64::from_polar(1.0, drives.relative_phase());

    let (s11, s22, s33) = (state.s11, state.s22, state.s33());
    let (s12, s13, s23) = (state.s12, state.s13, state.s23);
    let (s21, s32) = (s12.conj(), s23.conj());

    let t1 = i * g1 * s13 + i * g2 * s12 * loop_factor;
    let d11 = gamma1 * s33 + gamma2 * s22 - 2.0 * t1.re;

    let t2 = i * g2 * s12 * loop_factor - i * g3 * s23;
    let d22 = -gamma2 * s22 + gamma3 * s33 + 2.0 * t2.re;

    let d12 = Complex64::new(-decays.dephasing12(), drives.delta2()) * s12 - i * g3 * s13
        + i * g1 * s32
        + i * g2 * loop_factor.conj() * (s22 - s11);

    let d13 = Complex64::new(-decays.dephasing13(), drives.delta1()) * s13
        + i * g1 * (s33 - s11)
        + i * g2 * s23 * loop_factor.conj()
        - i * g3 * s12;

    let d23 = Complex64::new(-decays.dephasing23(), drives.delta3()) * s23 + i * g2 * s13 * loop_factor - i * g1 * s21
        + i * g3 * (s33 - s22);

    SigmaDerivative { d11, d22, d12, d13, d23 }
}

/// Affine form `dx/dt = matrix * x + constant` of [`eom_rhs`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    pub matrix: Matrix8,
    pub constant: Vector8,
}

impl GeneratorMatrix {
    pub fn apply(&self, x: &Vector8) -> Vector8 {
        self.matrix * x + self.constant
    }
}

/// Real 8×8 generator, written out coefficient by coefficient.
pub fn build_generator(drives: &DriveSet, decays: &DecayRates) -> GeneratorMatrix {
    let (g1, g2, g3) = (drives.g1(), drives.g2(), drives.g3());
    let [d1, d2, d3] = drives.detunings();
    let (ga1, ga2, ga3) = (decays.gamma1(), decays.gamma2(), decays.gamma3());
    let (w12, w13, w23) = (decays.dephasing12(), decays.dephasing13(), decays.dephasing23());
    let (sin, cos) = drives.relative_phase().sin_cos();

    #[rustfmt::skip]
    let matrix = Matrix8::from_row_slice(&[
        // s11        s22          Re12       Im12       Re13       Im13       Re23       Im23
        -ga1,         ga2 - ga1,   2.0*g2*sin, 2.0*g2*cos, 0.0,     2.0*g1,    0.0,       0.0,
        -ga3,        -ga2 - ga3,  -2.0*g2*sin,-2.0*g2*cos, 0.0,     0.0,       0.0,       2.0*g3,
        -g2*sin,      g2*sin,     -w12,      -d2,        0.0,       g3,        0.0,       g1,
        -g2*cos,      g2*cos,      d2,       -w12,      -g3,        0.0,       g1,        0.0,
         0.0,         0.0,         0.0,       g3,       -w13,      -d1,        g2*sin,   -g2*cos,
        -2.0*g1,     -g1,         -g3,        0.0,       d1,       -w13,       g2*cos,    g2*sin,
         0.0,         0.0,         0.0,      -g1,       -g2*sin,   -g2*cos,   -w23,      -d3,
        -g3,         -2.0*g3,     -g1,        0.0,       g2*cos,   -g2*sin,    d3,       -w23,
    ]);
    let constant = Vector8::from([ga1, ga3, 0.0, 0.0, 0.0, g1, 0.0, g3]);
    GeneratorMatrix { matrix, constant }
}

/// Fixed point of the dynamics, from one dense linear solve.
pub fn steady_state(drives: &DriveSet, decays: &DecayRates) -> Result<SigmaState> {
    let generator = build_generator(drives, decays);
    solve_fixed_point(&generator)
}

pub(crate) fn solve_fixed_point(generator: &GeneratorMatrix) -> Result<SigmaState> {
    let singular = generator.matrix.singular_values();
    let smax = singular.max();
    let smin = singular.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(Error::DegenerateSteadyState { condition });
    }
    let x = generator
        .matrix
        .full_piv_lu()
        .solve(&(-generator.constant))
        .ok_or(Error::DegenerateSteadyState { condition: f64::INFINITY })?;
    Ok(SigmaState::from(&StateVector8(x)))
}

/// Max-norm of [`eom_rhs`] at `state`.
pub fn steady_state_residual(state: &SigmaState, drives: &DriveSet, decays: &DecayRates) -> f64 {
    eom_rhs(state, drives, decays).max_norm()
}
