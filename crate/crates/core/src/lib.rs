pub mod alperin;
pub mod biset;
pub mod catalog;
pub mod error;
pub mod fusion;
pub mod group;
pub mod io;
pub mod lattice;
pub mod perm;
pub mod section;
pub mod thompson;

pub use error::{Error, Result};
pub use fusion::{FusionSystem, Injection};
pub use group::{ElemId, FiniteGroup, Subgroup};
pub use perm::Permutation;
pub use section::{AbelianSection, Coset};
