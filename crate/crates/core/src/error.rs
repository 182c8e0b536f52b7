use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("bad interval ({lo}, {hi}): need lo < hi")]
    BadInterval { lo: f64, hi: f64 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("power series has vanishing constant term in {0}")]
    SeriesDivergence(&'static str),
    #[error("point ({x}, {y}) is outside the kernel domain")]
    OutOfDomain { x: f64, y: f64 },
    #[error("bad tuple: {0}")]
    BadTuple(String),
    #[error("transform constants missing for degree {0}")]
    SpecIncomplete(usize),
    #[error("quadrature did not reach tolerance (error estimate {estimate:e})")]
    QuadratureFailure { estimate: f64 },
    #[error("nodes must be distinct and strictly increasing")]
    BadNodes,
    #[error("moment system is singular (|D_m| = {det:e})")]
    SingularSystem { det: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization failure: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
