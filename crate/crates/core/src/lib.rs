//! Exact construction and counting of tamely ramified single-cycle covers of
//! the projective line in characteristic p.

pub mod addconst;
pub mod cli;
pub mod field;
pub mod linalg;
pub mod multconst;
pub mod poly;
pub mod ramify;
pub mod symhurwitz;
pub mod threepoint;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] field::FieldError),
    #[error(transparent)]
    Poly(#[from] poly::PolyError),
    #[error(transparent)]
    Ramify(#[from] ramify::RamifyError),
    #[error(transparent)]
    Hurwitz(#[from] symhurwitz::HurwitzError),
    #[error(transparent)]
    ThreePoint(#[from] threepoint::ThreePointError),
    #[error(transparent)]
    Mult(#[from] multconst::MultError),
    #[error(transparent)]
    Add(#[from] addconst::AddError),
    #[error("{0}")]
    Input(String),
}

impl Error {
    /// Stable identifier used in CLI error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Field(e) => e.code(),
            Error::Poly(e) => e.code(),
            Error::Ramify(e) => e.code(),
            Error::Hurwitz(e) => e.code(),
            Error::ThreePoint(e) => e.code(),
            Error::Mult(e) => e.code(),
            Error::Add(e) => e.code(),
            Error::Input(_) => "InvalidInput",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
