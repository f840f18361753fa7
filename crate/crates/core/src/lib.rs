//! Ramification invariants, standard forms and classification of totally
//! ramified extensions of local fields given by Eisenstein polynomials.

pub mod classify;
pub mod eisenstein;
pub mod error;
pub mod ext_arith;
pub mod fixtures;
pub mod io;
pub mod literal;
pub mod local_field;
pub mod reduce;
pub mod residue_field;
pub mod sampling;
pub mod standard_form;

pub use error::{Error, ErrorKind};
