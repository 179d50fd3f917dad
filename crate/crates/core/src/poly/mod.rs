//! Polynomials and rational self-maps of the projective line.

mod bivariate;
pub mod io;
mod map;
pub(crate) mod polynomial;
mod squarefree;

pub use bivariate::{curve_multiplicity_at, Bivariate};
pub use map::{conjugate, Mobius, ProjPoint, RationalMap};
pub use polynomial::{mod_inverse, mod_pow, rational_mod, Polynomial};
pub use squarefree::{
    max_root_multiplicity, multiplicity_at, radical, rational_roots, squarefree_decomposition,
};
