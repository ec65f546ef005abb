use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("cannot parse group spec {spec:?}: {reason}")]
    Parse { spec: String, reason: String },

    #[error("unsupported group atom {0:?}")]
    UnsupportedAtom(String),

    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    BoundExceeded { order: usize, bound: usize },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("invalid factor index set {0:?}")]
    InvalidIndexSet(Vec<usize>),

    #[error("factor mismatch: {0}")]
    FactorMismatch(String),

    #[error("fibre groups differ")]
    FibreMismatch,

    #[error("fibre group must be abelian")]
    NonAbelianFibre,

    #[error("not a group homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("the fibre group does not act freely")]
    NotFree,

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("inconsistent elementary biset data: {0}")]
    Inconsistent(String),

    #[error("fibre order {0} is not prime")]
    NotPrime(usize),

    #[error("catalog covers orders up to {have}, but all orders below {need} are required")]
    CatalogInsufficient { have: usize, need: usize },

    #[error("catalog order bound {0} is outside 1..=15")]
    CatalogRange(usize),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
