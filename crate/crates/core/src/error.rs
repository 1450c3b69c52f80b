use thiserror::Error;

/// Everything that can go wrong in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precision policy violated: e*N = {have} < e*f + 2 = {need}")]
    PrecisionPolicy { have: u32, need: u32 },
    #[error("unsupported size: {0}")]
    Unsupported(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("slot {slot}: p*A^-1 is not integral")]
    VNonIntegral { slot: usize },
    #[error("slot {slot}: determinant vanishes at working precision")]
    DegenerateDeterminant { slot: usize },
    #[error("slot {slot}: pairing incompatible with det(A)*d_i = p*sigma(d_(i-1))")]
    PairingIncompatible { slot: usize },
    #[error("slot {slot}: pairing scalar is zero")]
    DegeneratePairing { slot: usize },
    #[error("determinant valuation sum {sum} violates budget {budget} (first slot with positive valuation: {slot})")]
    DetBudget { sum: u32, budget: u32, slot: usize },
    #[error("module does not satisfy the Rapoport condition")]
    NotRapoport,
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("size guard: {size} exceeds cap {cap}")]
    SizeGuard { size: u128, cap: u128 },
    #[error("assignment keys do not match the deformation window: {0}")]
    KeyMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI error JSON and by the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::PrecisionPolicy { .. } => "precision_policy",
            Error::Unsupported(_) => "unsupported",
            Error::PrecisionExhausted(_) => "precision_exhausted",
            Error::VNonIntegral { .. } => "v_non_integral",
            Error::DegenerateDeterminant { .. } => "degenerate_determinant",
            Error::PairingIncompatible { .. } => "pairing_incompatible",
            Error::DegeneratePairing { .. } => "degenerate_pairing",
            Error::DetBudget { .. } => "det_budget",
            Error::NotRapoport => "not_rapoport",
            Error::Inconsistent(_) => "inconsistent",
            Error::SizeGuard { .. } => "size_guard",
            Error::KeyMismatch(_) => "key_mismatch",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
