//! Ideals, Gröbner bases, saturation, elimination and quotient rings.

mod engine;
mod groebner;
#[allow(clippy::module_inception)]
mod ideal;
mod quotient;

pub use engine::{Bounds, Engine, GbCache};
pub use groebner::GroebnerBasis;
pub(crate) use ideal::staircase;
pub use ideal::{Colength, Ideal, QuotientBasis};
pub use quotient::{CoordinateRing, RingMap};
