use thiserror::Error;

pub use crate::coalgebra::AxiomReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must lie in [2, 2^32], got {0}")]
    InvalidModulus(u64),

    #[error("{op}: dimension mismatch ({left:?} vs {right:?})")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{0}: operands live over different rings")]
    RingMismatch(&'static str),

    #[error("{0}: matrix is not square")]
    NotSquare(&'static str),

    #[error("{0}: operands are built over different coalgebras")]
    CoalgebraMismatch(&'static str),

    #[error("{what}: {needed} elements exceed the enumeration cap of {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: usize,
    },

    #[error("structure constants have the wrong shape: {0}")]
    Shape(String),

    #[error("axioms fail: {0}")]
    Axioms(AxiomReport),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

/// Limits applied to every exhaustive sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Caps {
    /// Upper bound on the number of elements of any module, ring or lattice
    /// that is enumerated element by element.
    pub max_elements: usize,
}

pub const DEFAULT_MAX_ELEMENTS: usize = 4096;

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_elements: DEFAULT_MAX_ELEMENTS,
        }
    }
}

impl Caps {
    pub fn new(max_elements: usize) -> Self {
        Caps { max_elements }
    }

    pub fn check(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.max_elements as u128 {
            Err(Error::CapExceeded {
                what,
                needed,
                cap: self.max_elements,
            })
        } else {
            Ok(())
        }
    }
}
