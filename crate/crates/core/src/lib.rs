#![no_std]

extern crate alloc;

pub mod albert;
pub mod algebra;
pub mod cone_faces;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod rp5;
pub mod sample;
pub mod sections;
pub mod tolerance;

pub use algebra::{AlgebraError, Element, Field, HermitianMatrix, Matrix};
