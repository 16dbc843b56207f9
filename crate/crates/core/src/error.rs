//! Crate-wide error type.
//!
//! Construction errors name the first violated axiom together with witness
//! indices so that a bad multiplication table can be debugged from the
//! message alone.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // -- group construction -------------------------------------------------
    #[error("a group needs at least one element")]
    EmptyGroup,

    #[error("table has {rows} rows but order is {order}")]
    BadRowCount { rows: usize, order: usize },

    #[error("table row {row} has {len} entries but order is {order}")]
    BadRowLength { row: usize, len: usize, order: usize },

    #[error("table entry at ({row}, {col}) is {value}, out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },

    #[error("no two-sided identity element")]
    NoIdentity,

    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },

    #[error("element {element} has two distinct inverses {first} and {second}")]
    AmbiguousInverse {
        element: usize,
        first: usize,
        second: usize,
    },

    #[error("operation is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("expected {order} element names, got {got}")]
    BadNameCount { order: usize, got: usize },

    #[error("element index {value} out of range for group of order {order}")]
    ElementOutOfRange { value: usize, order: usize },

    // -- builders and file formats ------------------------------------------
    #[error("unknown group builder `{0}`")]
    UnknownBuilder(String),

    #[error("bad builder argument: {0}")]
    BadBuilderArgument(String),

    #[error("table file line {line}: {msg}")]
    TableFormat { line: usize, msg: String },

    #[error("system file line {line}: {msg}")]
    SystemFormat { line: usize, msg: String },

    // -- words ---------------------------------------------------------------
    #[error("word context needs at least one variable")]
    NoVariables,

    #[error("syntax error at byte {pos}: {msg}")]
    WordSyntax { pos: usize, msg: String },

    #[error("variable x{display} out of range, context has {nvars} variables")]
    VarOutOfRange { display: usize, nvars: usize },

    #[error("constant g{index} used in a coefficient-free context")]
    ConstantWithoutCoefficients { index: usize },

    #[error("constant g{index} out of range for constants group of order {order}")]
    ConstantOutOfRange { index: usize, order: usize },

    #[error("exponent arithmetic overflowed")]
    ExponentOverflow,

    #[error("expanding exponent {exp} would produce more than {limit} letters")]
    ExponentTooLarge { exp: i64, limit: usize },

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("tuple has {got} entries, expected {expected}")]
    ArityMismatch { got: usize, expected: usize },

    // -- geometry ------------------------------------------------------------
    #[error("the empty set has no coordinate group; only nonempty sets carry one")]
    EmptyAlgebraicSet,

    #[error(
        "the empty set is not algebraic in a coefficient-free context: \
         every solution set contains the all-identity tuple"
    )]
    EmptyClosureUndefined,

    #[error("set is not algebraic; its closure also contains {missing_sample:?}")]
    NotAlgebraic { missing_sample: Vec<Vec<usize>> },

    #[error("endomorphism image count {got} does not match arity {expected}")]
    BadImageCount { got: usize, expected: usize },

    #[error("target list has {got} entries but the coordinate group has {expected} marked generators")]
    BadTargetCount { got: usize, expected: usize },

    // -- analysis ------------------------------------------------------------
    #[error("{what} needs {required} steps, over the budget of {budget}")]
    BudgetExceeded {
        what: String,
        required: u64,
        budget: u64,
    },

    #[error("subgroup family is empty")]
    EmptyFamily,

    #[error("subgroups come from different parent groups")]
    MixedParents,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency violation: {0}")]
    Internal(String),
}
