use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("quaternion is not unit-normalized (|q|^2 - 1 = {defect:.3e})")]
    NonUnitQuaternion { defect: f64 },
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("singular configuration: {0}")]
    Singular(String),
    #[error("{what} outside its domain (value {value})")]
    Domain { what: &'static str, value: f64 },
    #[error("step budget {requested} below the resolution floor of {required} steps")]
    StepBudget { requested: usize, required: usize },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("optimizer did not converge (best residual {residual:.3e})")]
    Nonconvergence { residual: f64 },
    #[error("optimizer failure: {0}")]
    Optimizer(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
