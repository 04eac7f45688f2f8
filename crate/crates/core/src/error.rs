use thiserror::Error;

use crate::presentation::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("presentation failed validation:\n{0}")]
    ValidationFailed(ValidationReport),
    #[error("the center of {0} contains a nonzero odd element")]
    OddCenter(String),
    #[error("p-map required but not present")]
    MissingPMap,
    #[error("restricted structure requires positive characteristic")]
    CharacteristicZero,
    #[error("basis is not adapted: center_ids are not set")]
    MissingJ,
    #[error("generator {0} is odd; the p-power map is defined on even generators only")]
    OddGenerator(String),
    #[error("variant mismatch: {0}")]
    VariantMismatch(String),
    #[error("window is infinite: {0}")]
    InfiniteWindow(String),
    #[error("element does not belong to this envelope: {0}")]
    PresentationMismatch(String),
    #[error("the zero element has no leading term")]
    ZeroElement,
    #[error("filtration is defined for the current variant only")]
    LoopVariantUnsupported,
    #[error("generator cannot be certified central: {0}")]
    NotCertifiable(String),
    #[error("unknown catalog key {0:?}")]
    UnknownKey(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
