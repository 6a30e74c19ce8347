//! A typed λ-calculus for multivariate functions: type checking, tuple
//! expansion, partial-derivative encoding, a scripted chain-rule derivation,
//! an exact polynomial interpretation and tensor transformation laws.

pub mod lang;
pub mod expansion;
pub mod render;
pub mod deriv;
pub mod rewrite;
pub mod interp;
pub mod gen;
pub mod tensor;
