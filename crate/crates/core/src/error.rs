use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent k must be at least 1")]
    ZeroExponent,
    #[error("polynomial vanishes identically mod p")]
    ZeroPolynomial,
    #[error("curve reduces to the zero polynomial mod p")]
    ZeroReduction,
    #[error("curve reduces to a nonzero constant mod p")]
    ConstantReduction,
    #[error("line branch does not apply on axis {0}")]
    BranchMismatch(&'static str),
    #[error("valuation s = {s} outside the perturbation range for k = {k}")]
    ValuationOutOfRange { s: u32, k: u32 },
    #[error("point is not smooth on the reduction mod p")]
    NotSmooth,
    #[error("point is not a root mod p^{0}")]
    NotARoot(u32),
    #[error("precision p^{needed} exceeds the curve modulus p^{available}")]
    PrecisionExceeded { needed: u32, available: u32 },
    #[error("prime {p} exceeds the histogram ceiling {ceiling}")]
    PrimeTooLarge { p: u64, ceiling: u64 },
    #[error("oracle input p^{k} exceeds the ceiling {ceiling}")]
    OracleTooLarge { k: u32, ceiling: u64 },
    #[error("recursion tree exceeded the node budget of {0}")]
    NodeBudgetExceeded(usize),
    #[error("degenerate-fallback node has {points} curve points, over the budget of {budget}")]
    FallbackBudgetExceeded { points: u64, budget: u64 },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures caused by limits or bugs rather than by bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::PrimeTooLarge { .. }
                | Error::OracleTooLarge { .. }
                | Error::NodeBudgetExceeded(_)
                | Error::FallbackBudgetExceeded { .. }
                | Error::Internal(_)
        )
    }
}
