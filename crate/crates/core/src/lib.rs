//! Elimination templates for zero-dimensional polynomial systems.
//!
//! The offline phase ([`template::build_template`]) computes a Gröbner basis
//! with full cofactor tracking over an exact field and packages a Macaulay-type
//! template matrix. The online phase ([`solver`]) refills that matrix from new
//! coefficient data, row-reduces it to an action matrix and reads solutions off
//! its eigenvectors.

pub mod coefficients;
pub mod polynomials;
pub mod groebner;
pub mod template;
pub mod solver;
pub mod corpus;
pub mod cli;
