use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live over different signatures")]
    SignatureMismatch,
    #[error("carrier is infinite")]
    InfiniteCarrier,
    #[error("carrier has {size} elements, bound is {bound}")]
    CarrierTooLarge { size: u128, bound: u64 },
    #[error("signature has a unit-interval factor; an algebraic signature is required")]
    NotAlgebraicSignature,
    #[error("signature does not fit this nucleus: {0}")]
    BadSignatureForNucleus(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("a unit-interval factor has no lu-group counterpart of the form <Z, n>")]
    UnitIntervalNotRepresentable,
    #[error("morphism does not preserve the strong unit: {0}")]
    NotUnitPreserving(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("value {0} lies outside its factor")]
    ValueOutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
