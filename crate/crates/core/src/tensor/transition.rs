use crate::interp::{MultiPoly, Rational};

use super::jacobian::{jacobian, JacobianMatrix};
use super::TensorError;

/// A polynomial change of coordinates, with an optional polynomial inverse
/// that is checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMap {
    dim: usize,
    forward: Vec<MultiPoly>,
    inverse: Option<Vec<MultiPoly>>,
    label: String,
}

fn identity(dim: usize) -> Vec<MultiPoly> {
    (0..dim).map(|i| MultiPoly::var(dim, i)).collect()
}

fn compose_maps(outer: &[MultiPoly], inner: &[MultiPoly]) -> Result<Vec<MultiPoly>, TensorError> {
    Ok(outer.iter().map(|p| p.compose(inner)).collect::<Result<Vec<_>, _>>()?)
}

fn check_shape(dim: usize, map: &[MultiPoly]) -> Result<(), TensorError> {
    if map.len() != dim {
        return Err(TensorError::DimensionMismatch { expected: dim, found: map.len() });
    }
    if let Some(p) = map.iter().find(|p| p.nvars() != dim) {
        return Err(TensorError::DimensionMismatch { expected: dim, found: p.nvars() });
    }
    Ok(())
}

impl TransitionMap {
    pub fn new(
        dim: usize,
        forward: Vec<MultiPoly>,
        inverse: Option<Vec<MultiPoly>>,
        label: impl Into<String>,
    ) -> Result<Self, TensorError> {
        let label = label.into();
        check_shape(dim, &forward)?;
        if let Some(inv) = &inverse {
            check_shape(dim, inv)?;
            let id = identity(dim);
            if compose_maps(&forward, inv)? != id || compose_maps(inv, &forward)? != id {
                return Err(TensorError::InverseMismatch(label));
            }
        }
        Ok(TransitionMap { dim, forward, inverse, label })
    }

    pub fn identity(dim: usize) -> Self {
        TransitionMap { dim, forward: identity(dim), inverse: Some(identity(dim)), label: "id".into() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forward(&self) -> &[MultiPoly] {
        &self.forward
    }

    pub fn inverse(&self) -> Option<&[MultiPoly]> {
        self.inverse.as_deref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn require_inverse(&self) -> Result<&[MultiPoly], TensorError> {
        self.inverse().ok_or_else(|| TensorError::MissingInverse(self.label.clone()))
    }

    /// The same change of coordinates read backwards.
    pub fn reversed(&self) -> Result<Self, TensorError> {
        let inv = self.require_inverse()?.to_vec();
        Ok(TransitionMap {
            dim: self.dim,
            forward: inv,
            inverse: Some(self.forward.clone()),
            label: format!("({})⁻¹", self.label),
        })
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn after(&self, inner: &TransitionMap) -> Result<Self, TensorError> {
        if inner.dim != self.dim {
            return Err(TensorError::DimensionMismatch { expected: self.dim, found: inner.dim });
        }
        let forward = compose_maps(&self.forward, &inner.forward)?;
        let inverse = match (inner.inverse(), self.inverse()) {
            (Some(gi), Some(fi)) => Some(compose_maps(gi, fi)?),
            _ => None,
        };
        Ok(TransitionMap { dim: self.dim, forward, inverse, label: format!("{}∘{}", self.label, inner.label) })
    }

    pub fn jacobian(&self) -> Result<JacobianMatrix, TensorError> {
        jacobian(self.dim, &self.forward)
    }

    pub fn inverse_jacobian(&self) -> Result<JacobianMatrix, TensorError> {
        jacobian(self.dim, self.require_inverse()?)
    }

    /// True when every component has degree at most one.
    pub fn is_affine(&self) -> bool {
        self.forward.iter().all(|p| p.degree() <= 1)
    }

    /// Evaluate the forward map at a point.
    pub fn apply(&self, point: &[Rational]) -> Result<Vec<Rational>, TensorError> {
        Ok(self.forward.iter().map(|p| p.eval(point)).collect::<Result<Vec<_>, _>>()?)
    }
}
