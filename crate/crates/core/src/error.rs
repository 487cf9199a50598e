//! Crate-wide error type.

use core::fmt;

/// Alias for results produced by this crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by tensor algebra, solvers, and the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand extents do not conform for the requested operation.
    ShapeMismatch {
        op: &'static str,
        lhs: (usize, usize, usize),
        rhs: (usize, usize, usize),
    },
    /// A buffer length does not match the extents it claims to describe.
    DataLength {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    /// The dictionary is identically zero, so no step size exists.
    ZeroDictionary,
    /// A non-finite value appeared where the algorithm guarantees finiteness.
    NonFinite { op: &'static str },
    /// Frequency slices claimed conjugate symmetry but violate it.
    SymmetryViolation { max_rel: f64 },
    /// The imaginary residue after an inverse transform of supposedly real
    /// data exceeds tolerance; an upstream algebra bug, not noise.
    ImagResidue { max_imag: f64, tol: f64 },
    /// A per-slice linear system could not be factored even after jitter.
    SingularSlice { slice: usize },
    /// A configuration value violates its documented invariant.
    InvalidConfig(&'static str),
    /// The image is smaller than the patch or window that must fit in it.
    ImageTooSmall { op: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch { op, lhs, rhs } => write!(
                f,
                "{op}: shapes {}x{}x{} and {}x{}x{} do not conform",
                lhs.0, lhs.1, lhs.2, rhs.0, rhs.1, rhs.2
            ),
            Error::DataLength { op, expected, got } => {
                write!(f, "{op}: expected {expected} scalars, got {got}")
            }
            Error::ZeroDictionary => write!(f, "dictionary is identically zero"),
            Error::NonFinite { op } => write!(f, "{op}: non-finite value encountered"),
            Error::SymmetryViolation { max_rel } => write!(
                f,
                "conjugate symmetry violated (max relative deviation {max_rel:.3e})"
            ),
            Error::ImagResidue { max_imag, tol } => write!(
                f,
                "imaginary residue {max_imag:.3e} exceeds tolerance {tol:.3e}"
            ),
            Error::SingularSlice { slice } => {
                write!(f, "frequency slice {slice}: singular system")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::ImageTooSmall { op } => write!(f, "{op}: image smaller than required extent"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
