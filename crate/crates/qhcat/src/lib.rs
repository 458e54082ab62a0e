pub mod cli;
pub mod error;
pub mod exactlin;
pub mod functors;
pub mod meshcat;
pub mod qhcheck;
pub mod quiver;
pub mod tensorqh;
pub mod tilting_za;

pub use error::{Error, Result};
