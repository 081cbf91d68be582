//! Generalized fraction rings `R_U` inverting sections of invertible modules.

mod module;
mod presentation;

pub use module::{InvertibleModule, MultiExponent, SectionPair};
pub use presentation::{
    Contraction, FactoredMap, Factorization, FractionElement, FractionPresentation,
};
