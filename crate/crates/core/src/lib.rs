//! Exact computations with commutative differential graded algebras over
//! cyclotomic fields: cohomology, Massey products, formality tests,
//! geometric structure checks and an equivariant isotopy construction.

pub mod catalog;
pub mod cdga;
pub mod cli;
pub mod error;
pub mod expr;
pub mod formality;
pub mod gca;
pub mod geomcheck;
pub mod homology;
pub mod io;
pub mod isotopy;
pub mod lattice;
pub mod linalg;
pub mod massey;
pub mod scalar;

pub use error::{Error, Result};
