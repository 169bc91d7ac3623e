//! Exact symbolic computation for graded quivers with potential.
//!
//! The library works over the completed graded path algebra of a double
//! quiver: cyclic words with exact rational coefficients, the necklace
//! Poisson bracket induced by the symplectic pairing of dual coordinates,
//! canonical cubic potentials and their master equation `{W, W} = 0`,
//! gauge actions, cyclic A-infinity structure constants, and bigraded
//! DGLA cohomology ranks on finite windows.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals and
//! all sign cancellations are required to be literal, not approximate.

pub mod ainfty;
pub mod calculus;
pub mod dgla;
mod linalg;
pub mod quiver;
pub mod sampling;
pub mod words;

pub use quiver::{Arrow, ExtTable, GradedQuiver, OrientationChoice, QuiverError, ValidationReport};
pub use words::{
    Alphabet, Coeff, CyclicSeries, CyclicWord, Grading, Kind, Letter, ParseError, PathSeries,
    Precision, WordError,
};
