use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set size {n} exceeds the supported maximum of {max}")]
    GroundTooLarge { n: u32, max: u32 },

    #[error("element {element} is outside the ground set [1, {n}]")]
    ElementOutOfRange { element: u32, n: u32 },

    #[error("member has cardinality {found}, family is {expected}-uniform")]
    CardinalityMismatch { expected: u32, found: u32 },

    #[error("level {m} exceeds ground set size {n}")]
    LevelExceedsGround { m: u32, n: u32 },

    #[error("families live on different ground sets ([{left}] vs [{right}])")]
    GroundMismatch { left: u32, right: u32 },

    #[error("ground set size {n} is not twice the colouring class size {m}")]
    NotBalanced { n: u32, m: u32 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what}: size {size} exceeds cap {cap}")]
    Infeasible { what: String, size: u64, cap: u64 },

    #[error("witness revalidation failed: {0}")]
    WitnessInvalid(String),

    #[error("tree is not pruned: node {node:?} at level {level} has no successor")]
    NotPruned { level: usize, node: Vec<u32> },

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("empty evaluation window")]
    EmptyWindow,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
