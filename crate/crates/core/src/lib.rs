//! Hierarchical supervisory control of partially observed discrete-event
//! systems.
//!
//! The crate is organised bottom-up:
//!
//! - [`automaton`]: finite automata, the `.des` format and language operations;
//! - [`projection`]: natural projections, composition, observer and LCC checks;
//! - [`relational`]: pair automata and the OC / MOC / LOC consistency checks;
//! - [`synthesis`]: controllability, observability, normality and supremal
//!   sublanguages;
//! - [`hierarchical`]: abstraction-based synthesis pipelines;
//! - [`testgen`]: instance generators and brute-force oracles.

pub mod automaton;
pub mod hierarchical;
pub mod projection;
pub mod relational;
mod search;
pub mod synthesis;
pub mod testgen;

pub use automaton::{Alphabet, Automaton, AutomatonError, EventFlags, EventId, Word};
pub use projection::ProjectionContext;
pub use relational::Verdict;

use thiserror::Error;

/// Errors of the analysis and synthesis layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("event `{event}` is outside the domain of projection {map}")]
    DomainViolation { event: EventId, map: &'static str },
    #[error("event `{0}` is not part of the context alphabet")]
    NotInContext(EventId),
    #[error("the plant is blocking")]
    BlockingPlant,
    #[error("the language is not prefix-closed (witness: {})", automaton::format_word(.0))]
    NotPrefixClosed(Word),
    #[error("the requirement is not a sublanguage of the plant (witness: {})", automaton::format_word(.0))]
    NotSublanguage(Word),
    #[error("the requirement is not contained in the abstraction (witness: {})", automaton::format_word(.0))]
    SpecNotInAbstraction(Word),
    #[error("synchronisation event `{0}` is not shared by both operands")]
    SyncSetNotShared(EventId),
    #[error("state `{0}` is not marked")]
    UnmarkedState(String),
    #[error("at least one operand is required")]
    NoOperands,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Outcome of a decidable property check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<C> {
    Holds,
    Fails(C),
}

impl<C> Outcome<C> {
    pub fn holds(&self) -> bool {
        matches!(self, Outcome::Holds)
    }

    pub fn counterexample(&self) -> Option<&C> {
        match self {
            Outcome::Holds => None,
            Outcome::Fails(c) => Some(c),
        }
    }
}
