use thiserror::Error;

use crate::quaternion::Point4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QfcError {
    /// A quotient was taken by a (numerically) zero denominator.
    #[error("singular point at {0}")]
    Singular(Point4),

    #[error("the zero quaternion has no inverse")]
    ZeroQuaternion,

    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("line {line}: {source}")]
    Definition {
        line: usize,
        #[source]
        source: Box<QfcError>,
    },

    #[error("component f{component} is not real at {at} (imaginary part {imag:e})")]
    NotReal {
        component: usize,
        imag: f64,
        at: Point4,
    },

    #[error("inconclusive: only {unmasked} of {total} sample points are unmasked")]
    Inconclusive { unmasked: usize, total: usize },

    #[error("function does not vanish at {at} (|f1| = {f1:e}, |f2| = {f2:e})")]
    NotVanishing { at: Point4, f1: f64, f2: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, QfcError>;
