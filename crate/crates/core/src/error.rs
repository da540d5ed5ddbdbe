use thiserror::Error;

/// Errors raised by the library.
///
/// Variants carry enough context to be reported directly; the CLI maps them
/// onto its exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("family must have at least {min} members, got {got}")]
    TooFewMembers { min: usize, got: usize },

    #[error("duplicate member {value} at positions {first} and {second}")]
    DuplicateMember {
        value: String,
        first: usize,
        second: usize,
    },

    #[error("member {value} at position {position} is 0 or 1")]
    TrivialMember { value: String, position: usize },

    #[error("member {value} at position {position} is not square-free")]
    NotSquarefree { value: String, position: usize },

    #[error("search exhausted after {examined} candidates in {class}")]
    SearchExhausted { class: String, examined: u64 },

    #[error("base family is not intersective")]
    NotIntersectiveBase,

    #[error("drop-one divisors of a family with {0} members are outside the supported range")]
    UnsupportedDivisorSize(usize),

    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),

    #[error("progression {residue} mod {modulus} has non-square-free gcd")]
    NonSquarefreeProgression { residue: String, modulus: String },

    #[error("construction postcondition failed: {0}")]
    Postcondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
