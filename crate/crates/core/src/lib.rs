//! Quadratic forms over finite fields, their census and coset spectra, and
//! the weight distributions of second-order Reed-Muller codes built on them.

pub mod census;
pub mod codes;
pub mod error;
pub mod field;
pub mod forms;
pub mod linalg;
pub mod spectra;

pub use census::{census_exhaustive, census_formula, CensusClass, CensusTable};
pub use num_bigint::BigUint;

pub use codes::{CodeFamily, CodeParameters, WeightDistribution};
pub use error::{Error, Result};
pub use field::{Elem, FiniteField};
pub use forms::{QuadraticForm, RankType, Substitution, TypeTag};
pub use spectra::{CClass, CosetQuery, SpectrumMultiset};
