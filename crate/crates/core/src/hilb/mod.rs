//! Hilbert schemes of points on the affine line and plane: the universal
//! family, norms of sections, localized Hilbert schemes and point counts.

mod family;
mod points;

pub use family::{LocalizedHilb, UnivFamilyA1};
pub use points::{
    check_enumeration_bounds, enumerate_points, stalk_hilb, verify_localized_count,
    verify_open_subscheme, AffineSpace, DoubleCount, HilbPoint, OpenSubschemeReport, StalkCount,
};
