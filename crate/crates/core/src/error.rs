use thiserror::Error;

use crate::lie::Weight;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("bracket [{left}, {right}] leaves the materialized degree window")]
    WindowOverflow { left: String, right: String },

    #[error("basis element {0} is not materialized in this algebra")]
    NotMaterialized(String),

    #[error("elements belong to different algebras ({0} vs {1})")]
    AlgebraMismatch(String, String),

    #[error("subalgebra {name} is not closed under the bracket: [{left}, {right}] has a component on {outside}")]
    NotClosed { name: String, left: String, right: String, outside: String },

    #[error("unknown subalgebra selector `{0}`")]
    UnknownSelector(String),

    #[error("beta is nonzero on {0}, which has nonzero degree")]
    BetaOutsideDegreeZero(String),

    #[error("infinite PBW enumeration: {0}")]
    InfiniteEnumeration(String),

    #[error("weight {weight} needs module data at degree {needed}, beyond the materialized depth {depth}")]
    DepthExceeded { weight: Weight, needed: i64, depth: i64 },

    #[error("the algebra window [{lo}, {hi}] does not reach degree {needed} required at weight {weight}")]
    InsufficientWindow { weight: Weight, needed: i64, lo: i64, hi: i64 },

    #[error("d∘d ≠ 0 at weight {weight}, ghost degree {ghost} ({nonzero} nonzero entries in the residual)")]
    Anomaly { weight: Weight, ghost: i64, nonzero: usize },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("construction requires {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
