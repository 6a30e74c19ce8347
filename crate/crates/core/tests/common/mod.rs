//! Test-side oracles shared between integration tests.

pub mod soundness;
pub mod typing;
