pub mod bigserde;
pub mod error;
pub mod height;
pub mod interval;

pub use error::{Error, Result};
pub use height::{HeightValue, RationalPoint};
pub mod semigroup;
pub mod gf;
pub mod compositions;
pub mod approx;
pub mod solver;
pub mod census;
pub mod cli;
