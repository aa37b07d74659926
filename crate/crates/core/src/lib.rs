//! Exact computation in twisted virtual twin groups `TVT_n` and with the Gauss
//! data of twisted virtual doodle diagrams.

pub mod doodle;
pub mod error;
pub mod markov;
pub mod normalform;
pub mod oracle;
pub mod schreier;
pub mod word;

pub use error::{Error, Result};
pub use word::{AbelianImage, Letter, LetterKind, Permutation, Word};
