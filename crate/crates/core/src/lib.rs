//! Exact computation of the E1 and E2 pages of the chord-diagram cohomology
//! spectral sequence for spaces of long knots in `R^n`.
//!
//! The engine is generic over the coefficient field ([`Scalar`]). Use the
//! rational aliases below unless you have a reason not to; the fixed-width
//! `Ratio<i64>` instantiation is handy for cross-checks on small cells but
//! can overflow on large ones.

pub mod cohomology;
pub mod diagrams;
pub mod exactla;
pub mod report;
pub mod spectral;
pub mod vassiliev;

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::Num;

pub use diagrams::{
    covers, normalize, parse, product, relabel, Chord, DiagramError, LinearCombo, Monomial, Parity, Sign,
    SignedMonomial,
};
pub use report::{BettiEntry, CellEntry, PageReport};
pub use spectral::SpectralError;

/// Coefficient field for the engine.
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + PartialEq + Send + Sync + 'static {}

impl<T> Scalar for T where T: Num + Neg<Output = T> + Clone + Debug + PartialEq + Send + Sync + 'static {}

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

pub type RationalMatrix = exactla::SparseMatrix<Rational>;
pub type RationalSubspace = exactla::Subspace<Rational>;
pub type RationalCombo = diagrams::LinearCombo<Rational>;
pub type CohomologySpace = cohomology::CohomologySpace<Rational>;
pub type E1Cell = spectral::E1Cell<Rational>;
pub type D1Matrix = spectral::D1Matrix<Rational>;
pub type E2Cell = spectral::E2Cell<Rational>;
pub type Engine = spectral::Engine<Rational>;
pub type DiagonalCell = vassiliev::DiagonalCell<Rational>;

/// Version string stamped into reports and cache entries.
pub const ENGINE_VERSION: &str = concat!("knotcalc-core ", env!("CARGO_PKG_VERSION"));
