//! Independent oracles and synthetic fixtures for the storyline test suites.
//!
//! Nothing here calls into the algorithms it is used to check: the oracles
//! enumerate or sweep, the fixtures only build inputs.

pub mod fixtures;
pub mod oracles;

pub use fixtures::*;
pub use oracles::*;
