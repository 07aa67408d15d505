pub mod commutator_checker;
pub mod enveloping;
pub mod error;
pub mod grothendieck;
pub mod linalg;
pub mod loop_algebra;
pub mod modules;
pub mod rational;
pub mod root_system;
pub mod sugawara;

pub use error::{Error, Result};
pub use rational::Q;
