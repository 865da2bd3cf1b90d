//! Moore-Penrose inverses in dagger categories.
//!
//! The [`category`] module fixes the contract every instance implements and
//! derives the special-map predicates and the M-P axiom check from it. Three
//! instances are provided: complex matrices ([`matrix::Mat`]), finite
//! relations ([`rel::Rel`]) and partial injections ([`pinj::Pinj`]). On top
//! of the contract sit the generic M-P constructions ([`mp`]), the dagger
//! Karoubi envelope ([`karoubi`]) and the compact SVD, SVD and polar
//! decompositions ([`decomp`]).
//!
//! Composition is diagrammatic: `compose(f, g)` is `f` followed by `g`.
//!
//! ```
//! use mpdagger::category::SpecialMaps;
//! use mpdagger::matrix::{ComplexMatrix, Mat};
//!
//! let mat = Mat::default();
//! let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
//! let g = mat.pinv(&a).unwrap();
//! assert!(mat.verify_mp(&a, &g).unwrap().all_hold());
//! ```

pub mod category;
pub mod decomp;
pub mod error;
pub mod karoubi;
pub mod matrix;
pub mod mp;
pub mod pinj;
pub mod rel;

pub use category::{Check, DaggerCategory, MpReport, SpecialMaps, Tolerance};
pub use error::{Capability, Error, Result};
