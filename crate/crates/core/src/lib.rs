//! Exact commutative algebra for localizing Hilbert schemes of points:
//! polynomial arithmetic over `Q` and `F_p`, Gröbner-basis ideal operations,
//! fraction presentations inverting sections of invertible modules, norms of
//! finite flat algebras, and point counts over finite fields.

// structure constants and matrices are indexed by several coordinates at once
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod flat;
pub mod fraction;
pub mod hilb;
pub mod ideal;
pub mod linalg;
pub mod nonscheme;
pub mod poly;
pub mod scalar;

pub use error::{Error, Result};
pub use flat::{FiniteFlatAlgebra, ModuleSection};
pub use fraction::{
    FractionElement, FractionPresentation, InvertibleModule, MultiExponent, SectionPair,
};
pub use hilb::{AffineSpace, UnivFamilyA1};
pub use ideal::{
    Bounds, Colength, CoordinateRing, Engine, GbCache, GroebnerBasis, Ideal, QuotientBasis, RingMap,
};
pub use nonscheme::{FactoredFraction, Side};
pub use poly::{parse_poly, Monomial, MonomialOrder, Polynomial, Ring};
pub use scalar::{Field, Rational, Scalar};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
