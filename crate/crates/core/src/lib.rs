//! Classification of finitely generated modules over `Z/p^n` or `F_p[T]/(T^n)`
//! together with a submodule annihilated by `p^2`.

pub mod cli;
pub mod error;
pub mod fp;
pub mod functor;
pub mod homs;
pub mod linalg;
pub mod module;
pub mod oracle;
pub mod pairs;
pub mod posetrep;
pub mod ring;

pub use error::{Error, Result};
pub use ring::{RingElem, RingKind, RingSpec};
