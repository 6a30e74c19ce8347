//! Rewrite rules, the scripted chain-rule derivation and listing emission.

pub mod derivation;
pub mod listing;
pub mod rules;

pub use derivation::{derive_chain_rule, ChainRuleSpec, DerivationTrace, DeriveError, TensorAnnotation, TraceStep};
pub use listing::{emit_listing, ListingOptions};
pub use rules::{apply_rule, beta_normalize, eta_normalize, rewrite_local, subst_identities, RewriteError, Rule, RuleTag};
