//! Central L-values of elliptic curves and their quadratic twists via modular
//! symbols, 2-adic checks on twist families, and explicit 2-isogeny descent
//! for Neumann-Setzer curves.

pub mod analytic;
pub mod arith;
pub mod curves;
pub mod descent;
pub mod error;
pub mod linalg;
pub mod lvalues;
pub mod modsym;
pub mod numeric;
pub mod scan;

pub use error::{Error, Result};
