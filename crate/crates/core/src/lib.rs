pub mod bohr;
pub mod constructions;
pub mod dissociation;
pub mod error;
pub mod group;
pub mod lab;
pub mod moments;
pub mod rational;
pub mod wiener;

pub use error::{Error, Result};
