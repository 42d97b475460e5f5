use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    /// The affine steady-state system has no unique, well-conditioned solution.
    #[error("degenerate steady state (condition number {condition:.3e})")]
    DegenerateSteadyState { condition: f64 },

    #[error("step size underflow at t = {t_reached}")]
    Integration { t_reached: f64 },

    #[error("no convergence to the steady state before t = {t_max}")]
    Timeout { t_max: f64 },

    /// A routine that only holds at a fixed point received a transient state.
    #[error("state is not a steady state (residual {residual:.3e})")]
    NotSteady { residual: f64 },

    #[error("no interior minimum in bracket [{lo}, {hi}]")]
    Bracketing { lo: f64, hi: f64 },

    #[error("at detuning {detuning}: {source}")]
    AtDetuning {
        detuning: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Validation(msg()))
    }
}
