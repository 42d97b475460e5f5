//! Time evolution with classical RK4 and step-doubling error control.

use crate::dynamics::{build_generator, solve_fixed_point, GeneratorMatrix, StateVector8, Vector8};
use crate::error::{ensure, Error, Result};
use crate::model::{DecayRates, DriveSet, SigmaState};

/// Upper time limit for [`time_to_steady`], in units of 1/γ.
pub const STEADY_T_MAX: f64 = 1e4;

const SAMPLES_PER_DECADE: usize = 50;
const STEADY_T_MIN: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `(t, state)` at every accepted step, starting with `t = 0`.
    pub points: Vec<(f64, SigmaState)>,
}

impl Trajectory {
    pub fn final_state(&self) -> SigmaState {
        self.points.last().map(|p| p.1).expect("trajectory always holds the initial point")
    }

    pub fn final_time(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.0)
    }
}

struct Stepper<'a> {
    generator: &'a GeneratorMatrix,
    rel_tol: f64,
    h: f64,
}

impl<'a> Stepper<'a> {
    fn new(generator: &'a GeneratorMatrix, rel_tol: f64) -> Self {
        let scale = generator.matrix.amax() + generator.constant.amax() + 1.0;
        Self { generator, rel_tol, h: 0.1 / scale }
    }

    fn rk4(&self, x: &Vector8, h: f64) -> Vector8 {
        let f = |y: &Vector8| self.generator.apply(y);
        let k1 = f(x);
        let k2 = f(&(x + k1 * (h / 2.0)));
        let k3 = f(&(x + k2 * (h / 2.0)));
        let k4 = f(&(x + k3 * h));
        x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    }

    /// Advance `x` from `t` to `t_end`, calling `on_step` after every accepted step.
    fn advance(
        &mut self,
        x: &mut Vector8,
        t: &mut f64,
        t_end: f64,
        mut on_step: impl FnMut(f64, &Vector8),
    ) -> Result<()> {
        while *t < t_end {
            let last = self.h >= t_end - *t;
            let h = if last { t_end - *t } else { self.h };
            if h < 1e-14 * t_end.max(1.0) && !last {
                return Err(Error::Integration { t_reached: *t });
            }
            let full = self.rk4(x, h);
            let half = self.rk4(x, h / 2.0);
            let double = self.rk4(&half, h / 2.0);

            let mut err: f64 = 0.0;
            for k in 0..8 {
                let scale = self.rel_tol * double[k].abs().max(1.0);
                err = err.max((double[k] - full[k]).abs() / (15.0 * scale));
            }
            if err <= 1.0 {
                *x = double + (double - full) / 15.0;
                *t = if last { t_end } else { *t + h };
                on_step(*t, x);
            }
            let factor = if err == 0.0 { 4.0 } else { (0.9 * err.powf(-0.2)).clamp(0.1, 4.0) };
            if !(last && err <= 1.0) {
                self.h = h * factor;
            }
            if self.h < 1e-14 * t_end.max(1.0) {
                return Err(Error::Integration { t_reached: *t });
            }
        }
        Ok(())
    }
}

fn check_tolerance(rel_tol: f64) -> Result<()> {
    ensure(rel_tol > 1e-14 && rel_tol < 1e-3, || format!("rel_tol must lie in (1e-14, 1e-3), got {rel_tol}"))
}

/// Integrate from `t = 0` to `t_final`, recording every accepted step.
pub fn evolve(
    initial: &SigmaState,
    drives: &DriveSet,
    decays: &DecayRates,
    t_final: f64,
    rel_tol: f64,
) -> Result<Trajectory> {
    ensure(t_final.is_finite() && t_final > 0.0, || format!("t_final must be positive, got {t_final}"))?;
    check_tolerance(rel_tol)?;
    let generator = build_generator(drives, decays);
    let mut stepper = Stepper::new(&generator, rel_tol);
    let mut x = StateVector8::from(initial).0;
    let mut t = 0.0;
    let mut points = vec![(0.0, *initial)];
    stepper.advance(&mut x, &mut t, t_final, |t, y| points.push((t, SigmaState::from(&StateVector8(*y)))))?;
    Ok(Trajectory { points })
}

/// States at the requested (non-decreasing, non-negative) sample times.
pub fn evolve_sampled(
    initial: &SigmaState,
    drives: &DriveSet,
    decays: &DecayRates,
    times: &[f64],
    rel_tol: f64,
) -> Result<Vec<SigmaState>> {
    check_tolerance(rel_tol)?;
    ensure(times.windows(2).all(|w| w[1] >= w[0]) && times.first().is_none_or(|t| *t >= 0.0), || {
        "sample times must be non-negative and non-decreasing".to_string()
    })?;
    let generator = build_generator(drives, decays);
    let mut stepper = Stepper::new(&generator, rel_tol);
    let mut x = StateVector8::from(initial).0;
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        stepper.advance(&mut x, &mut t, target, |_, _| {})?;
        out.push(SigmaState::from(&StateVector8(x)));
    }
    Ok(out)
}

/// Time (units of 1/γ) after which the state stays within `eps` of the
/// steady state in max-norm.
///
/// The distance is sampled on a geometric grid from 1e-3 upward. The first
/// grid time after which every later sample stays below `eps` for a full
/// decade is returned.
pub fn time_to_steady(drives: &DriveSet, decays: &DecayRates, initial: &SigmaState, eps: f64) -> Result<f64> {
    ensure(eps > 1e-10 && eps < 1e-1, || format!("eps must lie in (1e-10, 1e-1), got {eps}"))?;
    let generator = build_generator(drives, decays);
    let target = solve_fixed_point(&generator)?;
    if initial.max_abs_diff(&target) < eps {
        return Ok(0.0);
    }
    let rel_tol = (eps * 1e-4).max(1e-13);
    let mut stepper = Stepper::new(&generator, rel_tol);
    let mut x = StateVector8::from(initial).0;
    let mut t = 0.0;

    let ratio = 10f64.powf(1.0 / SAMPLES_PER_DECADE as f64);
    let mut sample = STEADY_T_MIN;
    let mut entered: Option<f64> = None;
    while sample <= STEADY_T_MAX * (1.0 + 1e-12) {
        stepper.advance(&mut x, &mut t, sample, |_, _| {})?;
        let dist = SigmaState::from(&StateVector8(x)).max_abs_diff(&target);
        if dist < eps {
            let start = *entered.get_or_insert(sample);
            if sample >= 10.0 * start * (1.0 - 1e-12) {
                return Ok(start);
            }
        } else {
            entered = None;
        }
        sample *= ratio;
    }
    Err(Error::Timeout { t_max: STEADY_T_MAX })
}
