//! Cap-curl diagrams and decomposition numbers for symplectic groups in the
//! p-core region.

pub mod characters;
pub mod diagrams;
pub mod error;
pub mod jantzen;
pub mod multiplicities;
pub mod order;
pub mod verify;
pub mod weights;

pub use characters::{BigCharacter, Coefficient, FormalCharacter, RootRef};
pub use error::{BrauerDomainError, Error, Result};
pub use weights::{GroupContext, Partition, Weight};

/// Characters with machine-integer coefficients.
pub type Character = FormalCharacter<i64>;
