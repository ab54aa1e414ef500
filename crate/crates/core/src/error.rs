use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("position {position} out of range 1..={n}")]
    PositionOutOfRange { position: usize, n: usize },

    #[error("invalid graph parameters: {0}")]
    InvalidParams(String),

    #[error("invalid node label: {0}")]
    InvalidLabel(String),

    #[error("cannot parse label `{0}`")]
    LabelParse(String),

    #[error("rank {rank} out of range 0..{count}")]
    RankOutOfRange { rank: usize, count: usize },

    #[error("labels are not clique neighbours: {0}")]
    NotCliqueNeighbors(String),

    #[error("mismatched parameters: {0}")]
    MismatchedParams(String),

    #[error("head value {head} is not a member of the clique")]
    HeadNotInClique { head: usize },

    #[error("route_step called with current == target; caller must terminate")]
    RouteStepOnTarget,

    #[error("move budget of {budget} exceeded while routing")]
    MoveBudgetExceeded { budget: usize },

    #[error("router invariant breached: {0}")]
    RouterInvariant(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("no directed path from {from} to {to}")]
    Disconnected { from: String, to: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
