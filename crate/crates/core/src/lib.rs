pub mod cohomology;
pub mod error;
pub mod forms;
pub mod induction;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod modules;
pub mod pbw;

pub use error::{Error, Result};
