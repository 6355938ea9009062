use thiserror::Error;

use crate::table::TableError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("elements belong to different Boolean algebras")]
    MixedParents,
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("generator list must not be empty")]
    NoGenerators,
    #[error("{count} generators exceed the supported maximum of {max}")]
    TooManyGenerators { count: usize, max: usize },
    #[error("no generator named `{0}`")]
    UnknownGenerator(String),
    #[error("lower end is not below upper end")]
    NotAnInterval,
    #[error("delta(y, x) requires x <= y")]
    NotComparable,
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("k = {k} exceeds the limit {max} for {what}")]
    TooLarge {
        k: usize,
        max: usize,
        what: &'static str,
    },
    #[error("element is not an atom")]
    NotAnAtom,
    #[error("signed set <{{}}, {{}}> (the top) has no associated atom")]
    TopSignedSet,
    #[error("signed set halves are not disjoint")]
    NotDisjoint,
    #[error("index set must not be empty")]
    EmptyIndexSet,
    #[error("phi(k, l) requires l <= k (got k = {k}, l = {l})")]
    PhiOutOfRange { k: u32, l: u32 },
    #[error("the construction assumes a non-empty generating set (m >= 1)")]
    EmptyGeneratingSet,
    #[error("closure limit of {0} elements exceeded")]
    ClosureLimit(usize),
    #[error("interval set is not closed under the cubic operations")]
    NotClosed,
    #[error(transparent)]
    Table(#[from] TableError),
}
