use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: bad items, bad selectors, unparsable documents.
    #[error("invalid input: {0}")]
    Input(String),

    /// An exponential oracle or set would exceed its configured cap.
    #[error("{what} requires {required}, budget is {limit}")]
    Budget { what: &'static str, required: String, limit: String },

    /// Adversary parameters fail one of the feasibility inequalities.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    /// An ordering function did not produce a strict order.
    #[error("ordering tie between items {}", fmt_items(.items))]
    OrderingTie { items: Vec<BigInt> },

    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A pick or move rejected by the game rules.
    #[error("illegal move: {0}")]
    Illegal(String),

    /// A step that the construction argument guarantees has failed.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

fn fmt_items(items: &[BigInt]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

impl Error {
    pub(crate) fn budget(what: &'static str, required: impl ToString, limit: impl ToString) -> Self {
        Error::Budget { what, required: required.to_string(), limit: limit.to_string() }
    }
}
