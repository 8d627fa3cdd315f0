//! Exact computer algebra for deciding when rational maps can admit
//! meromorphic first integrals near a fixed point.
//!
//! The core is generic over the coefficient scalar through [`scalar::Coeff`];
//! all exact pipelines instantiate it at arbitrary-precision rationals, the
//! numeric harnesses at `f64`. Concrete aliases live at the crate root.

pub mod cyclo;
pub mod dense;
pub mod elim;
pub mod error;
pub mod factor;
pub mod gcd;
pub mod intfact;
pub mod map;
pub mod monomial;
pub mod obstruction;
pub mod multipoly;
pub mod polymod;
pub mod quadext;
pub mod ratfunc;
pub mod realroot;
pub mod resonance;
pub mod resultant;
pub mod scalar;
pub mod unipoly;
pub mod verifier;

pub use error::{MapError, PolyError};
pub use monomial::Monomial;
pub use multipoly::{MultiPoly, VarSet};
pub use ratfunc::RatFunc;
pub use scalar::{Coeff, Int, Rat};
pub use map::RationalMap;
pub use unipoly::UniPoly;

/// Exact multivariate polynomial over the rationals.
pub type QPoly = MultiPoly<Rat>;
/// Exact univariate view over the rationals.
pub type QUniPoly = UniPoly<Rat>;
/// Numeric multivariate polynomial for the float harnesses.
pub type FPoly = MultiPoly<f64>;
