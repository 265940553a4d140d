use thiserror::Error;

use crate::coalition::Coalition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("voter count {0} out of range (supported: 1..=16)")]
    VoterCount(usize),

    #[error("voter {voter} is not in 1..={n}")]
    VoterIndex { voter: usize, n: usize },

    #[error("coalitions over different voter counts ({0} vs {1})")]
    MismatchedVoters(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("a linear game needs at least one generator")]
    NoGenerators,

    #[error("the empty coalition cannot be a generator (every coalition would win)")]
    EmptyGenerator,

    #[error("cannot induce a game on {target} voters from {from} voters")]
    InduceTarget { from: usize, target: usize },

    #[error("game is not weighted")]
    Unweighted,

    #[error("{0} is not a shift-minimal winning coalition of the game")]
    NotGenerator(Coalition),

    #[error("{0} is not a shift-maximal losing coalition of the game")]
    NotMaximalLosing(Coalition),

    #[error("the neighbouring game would be trivial (all-win or all-lose)")]
    TrivialNeighbor,

    #[error("weight vector is not normalized: {0}")]
    NotNormalized(String),

    #[error("weight vector is not generic: coalitions {0} and {1} have equal weight")]
    NotGeneric(Coalition, Coalition),

    #[error("malformed linear system: {0}")]
    MalformedSystem(String),

    #[error("chain is not saturated: {0}")]
    NotSaturated(String),

    #[error("{0}")]
    OutOfRange(String),

    #[error("game is not a node of this poset")]
    NotANode,
}
