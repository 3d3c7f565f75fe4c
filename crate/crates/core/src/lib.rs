pub mod checks;
pub mod classical;
pub mod cocycle;
pub mod equidist;
pub mod error;
pub mod field;
pub mod hecke;
pub mod word;

pub use cocycle::{omega, GroupElement, QuarterInteger};
pub use error::{Error, Result};
pub use field::{FieldElement, LambdaField, Rational};
pub use word::{Generator, Letter, Word};
