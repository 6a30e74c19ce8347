use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use super::types::{GType, TypeExpr};

/// A display label for a variable. Names never take part in equality or
/// hashing: two variables are the same exactly when their indices agree.
#[derive(Clone, Default)]
pub struct Name(pub String);

impl Name {
    pub fn new(s: impl Into<String>) -> Self {
        Name(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Name {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Name {}

impl Hash for Name {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("de Bruijn index {index} out of range for context of length {len}")]
pub struct IndexOutOfRange {
    pub index: usize,
    pub len: usize,
}

/// Typing context: bindings in order, the most recent last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context<T = TypeExpr> {
    entries: Vec<(Name, T)>,
}

/// A context over possibly symbolic types.
pub type GContext = Context<GType>;

impl<T> Default for Context<T> {
    fn default() -> Self {
        Context { entries: Vec::new() }
    }
}

impl<T: Clone> Context<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<(Name, T)>) -> Self {
        Context { entries }
    }

    pub fn entries(&self) -> &[(Name, T)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// A new context with one more binding; `self` is left untouched.
    pub fn extend(&self, name: Name, ty: T) -> Self {
        let mut entries = self.entries.clone();
        entries.push((name, ty));
        Context { entries }
    }

    pub(crate) fn push(&mut self, name: Name, ty: T) {
        self.entries.push((name, ty));
    }

    pub(crate) fn pop(&mut self) {
        self.entries.pop();
    }

    /// Resolve a de Bruijn index; index 0 is the most recent binding.
    pub fn lookup(&self, index: usize) -> Result<&(Name, T), IndexOutOfRange> {
        let len = self.entries.len();
        if index < len {
            Ok(&self.entries[len - 1 - index])
        } else {
            Err(IndexOutOfRange { index, len })
        }
    }

    /// Insert a binding `depth` positions below the newest one.
    pub fn insert_at(&self, depth: usize, name: Name, ty: T) -> Self {
        let mut entries = self.entries.clone();
        let at = entries.len().saturating_sub(depth);
        entries.insert(at, (name, ty));
        Context { entries }
    }
}

impl Context<TypeExpr> {
    pub fn generic(&self) -> GContext {
        Context {
            entries: self
                .entries
                .iter()
                .map(|(n, t)| (n.clone(), t.generic()))
                .collect(),
        }
    }
}

impl GContext {
    pub fn concrete(&self) -> Option<Context<TypeExpr>> {
        let entries = self
            .entries
            .iter()
            .map(|(n, t)| t.concrete().map(|t| (n.clone(), t)))
            .collect::<Option<Vec<_>>>()?;
        Some(Context { entries })
    }
}
