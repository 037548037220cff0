use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ground set size {0} outside 1..={max}", max = crate::domain::MAX_GROUND_SET)]
    GroundSetSize(usize),
    #[error("universe mismatch: {left} points vs {right} points")]
    UniverseMismatch { left: usize, right: usize },
    #[error("index {index} outside a ground set of {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("negative value {0} where a nonnegative value is required")]
    Negative(String),
    #[error("capacity table has {got} entries, expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("floor scaling is undefined on an infinite value (point {0})")]
    InfiniteFloor(usize),
    #[error("empty family of sets")]
    EmptyFamily,
    #[error("family of {0} sets exceeds the cap of {max}", max = crate::nesting::MAX_FAMILY)]
    FamilyTooLarge(usize),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("enumeration of {required} pairs exceeds the budget of {budget}")]
    Budget { required: u128, budget: u128 },
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("infinite capacity along the greedy chain at prefix {0}")]
    InfiniteChain(String),
    #[error("domination violated at step {step}, point {point}")]
    Domination { step: usize, point: usize },
    #[error("premise violated at step {0}")]
    Premise(usize),
    #[error("{0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}
