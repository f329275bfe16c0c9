//! Exact verification toolkit for the centres of the principal 3-blocks of
//! the small Ree groups `²G₂(q)`, `q = 3^(2k+1)`, and of their Sylow
//! 3-normalisers.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf3field`]: the field `F_q` and the twist `θ`.
//! - [`reegroup`]: the normaliser `N = P ⋊ C_(q-1)` and its conjugacy classes.
//! - [`cyclo`]: exact cyclotomic and `Q(√-3)` arithmetic, 3-adic valuations.
//! - [`ntable`]: the character table of `N` and column-label alignment.
//! - [`constants`]: class-algebra structure constants of `N` and law suites.
//! - [`gtable`]: class and character data of `²G₂(q)` and the mod-3 product engine.
//! - [`center`]: radicals and Loewy lengths of the block centres over `F_3`.
//! - [`verify`]: end-to-end pipelines producing serialisable reports.

pub mod center;
pub mod constants;
pub mod cyclo;
pub mod error;
pub mod gf3field;
pub mod gtable;
pub mod ntable;
pub mod reegroup;
pub mod verify;

pub use error::{Error, Result};
