use core::fmt;

use alloc::string::String;

use crate::coord::Branch;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidInput(&'static str),
    /// A derivative oracle needed by the operation is not provided.
    MissingDerivative(&'static str),
    /// The base point is not coded to the requested depth (it lies in a gap).
    NotInCantorSet { y: f64, gap_step: usize },
    /// The two preimage sets carry different labels.
    LabelMismatch { label: String },
    /// The pairing of identically labeled preimages is not monotone.
    OrderMismatch { label: String },
    /// The kneading sequences of the two models differ along the fiber.
    KneadingMismatch {
        y: f64,
        side: Branch,
        index: usize,
    },
    /// A basin or orbit operation was called on an orbit it does not apply to.
    Precondition(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::MissingDerivative(which) => write!(f, "missing derivative oracle: {which}"),
            Error::NotInCantorSet { y, gap_step } => {
                write!(f, "y = {y} enters the gap at step {gap_step}")
            }
            Error::LabelMismatch { label } => write!(
                f,
                "combinatorially inequivalent: label {label} present on one side only"
            ),
            Error::OrderMismatch { label } => write!(
                f,
                "combinatorially inequivalent: label {label} breaks the monotone pairing"
            ),
            Error::KneadingMismatch { y, side, index } => write!(
                f,
                "combinatorially inequivalent: kneading of 0{side} at y = {y} differs at index {index}"
            ),
            Error::Precondition(msg) => write!(f, "precondition failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
