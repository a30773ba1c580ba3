pub mod error;
pub mod format;
pub mod generate;
pub mod hull;
pub mod ilp;
pub mod instance;
pub mod linalg;
pub mod oracle;
pub mod polytope;
pub mod reductions;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use instance::IqpInstance;
pub use polytope::Polytope;
