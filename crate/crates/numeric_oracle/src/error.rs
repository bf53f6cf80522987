use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("step size underflow at t = {t:e} s (h = {h:e}); the problem is too stiff for the requested tolerance")]
    StepUnderflow { t: f64, h: f64 },
    #[error("step budget of {max_steps} exhausted at t = {t:e} s")]
    TooManySteps { t: f64, max_steps: usize },
    #[error("no excitation above the noise floor {floor:e} in the scan window (max {max_probability:e})")]
    LineNotFound { max_probability: f64, floor: f64 },
    #[error("fit failure: {reason}")]
    FitFailure { reason: String },
    #[error("drive frequencies have no common period with denominator <= {max_denominator} (relative error {error:e})")]
    NoExactPeriod { max_denominator: u64, error: f64 },
    #[error("state dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Spin(#[from] spin_algebra::SpinError),
    #[error(transparent)]
    Dressing(#[from] dressing_engine::DressingError),
    #[error(transparent)]
    Magnus(#[from] magnus_corrections::MagnusError),
    #[error(transparent)]
    Comb(#[from] transition_comb::CombError),
    #[error(transparent)]
    Gate(#[from] ms_gate::GateError),
}
