use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::interp::{MultiPoly, Rational};

use super::jacobian::{determinant, JacobianMatrix};
use super::transition::TransitionMap;
use super::TensorError;

/// Contravariant rank `p`, covariant rank `q` and density weight `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TensorDensitySpec {
    pub p: usize,
    pub q: usize,
    pub omega: i32,
}

impl TensorDensitySpec {
    pub fn new(p: usize, q: usize, omega: i32) -> Result<Self, TensorError> {
        if p + q > 4 {
            return Err(TensorError::InvalidSpec(format!("rank p + q = {} exceeds 4", p + q)));
        }
        if !(-2..=2).contains(&omega) {
            return Err(TensorError::InvalidSpec(format!("weight {omega} outside -2..=2")));
        }
        Ok(TensorDensitySpec { p, q, omega })
    }
}

/// Upper indices first, then lower indices.
pub type MultiIndex = (Vec<usize>, Vec<usize>);

/// Every index combination of length `len` over `0..dim`, in lexicographic order.
fn combos(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (0..dim).map(move |i| [v.clone(), vec![i]].concat())).collect();
    }
    out
}

/// Components of a tensor density as functions of the coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentField {
    dim: usize,
    spec: TensorDensitySpec,
    components: BTreeMap<MultiIndex, MultiPoly>,
}

impl ComponentField {
    /// Build a field; index combinations that are not listed are zero.
    pub fn new(dim: usize, spec: TensorDensitySpec, listed: BTreeMap<MultiIndex, MultiPoly>) -> Result<Self, TensorError> {
        let spec = TensorDensitySpec::new(spec.p, spec.q, spec.omega)?;
        let mut components = BTreeMap::new();
        for up in combos(dim, spec.p) {
            for lo in combos(dim, spec.q) {
                components.insert((up.clone(), lo), MultiPoly::zero(dim));
            }
        }
        for (key, poly) in listed {
            if poly.nvars() != dim {
                return Err(TensorError::DimensionMismatch { expected: dim, found: poly.nvars() });
            }
            let slot = components.get_mut(&key).ok_or_else(|| {
                TensorError::InvalidSpec(format!("index {:?}/{:?} does not fit a ({},{}) field of dimension {dim}", key.0, key.1, spec.p, spec.q))
            })?;
            *slot = poly;
        }
        Ok(ComponentField { dim, spec, components })
    }

    /// A field whose components are the given constants, in index order.
    pub fn constant(dim: usize, spec: TensorDensitySpec, values: &[Rational]) -> Result<Self, TensorError> {
        let keys: Vec<MultiIndex> =
            combos(dim, spec.p).into_iter().flat_map(|u| combos(dim, spec.q).into_iter().map(move |l| (u.clone(), l))).collect();
        if keys.len() != values.len() {
            return Err(TensorError::DimensionMismatch { expected: keys.len(), found: values.len() });
        }
        let listed = keys.into_iter().zip(values).map(|(k, v)| (k, MultiPoly::constant(dim, v.clone()))).collect();
        ComponentField::new(dim, spec, listed)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> TensorDensitySpec {
        self.spec
    }

    pub fn components(&self) -> &BTreeMap<MultiIndex, MultiPoly> {
        &self.components
    }

    pub fn component(&self, upper: &[usize], lower: &[usize]) -> Option<&MultiPoly> {
        self.components.get(&(upper.to_vec(), lower.to_vec()))
    }

    fn map_all(&self, f: impl Fn(&MultiPoly) -> Result<MultiPoly, TensorError>) -> Result<Self, TensorError> {
        let components = self.components.iter().map(|(k, p)| Ok((k.clone(), f(p)?))).collect::<Result<_, TensorError>>()?;
        Ok(ComponentField { dim: self.dim, spec: self.spec, components })
    }

    /// Contract slot `slot` (upper when `upper`) with `m`: an upper index
    /// uses `m[new][old]`, a lower index `m[old][new]`.
    fn contract(&self, upper: bool, slot: usize, m: &JacobianMatrix) -> Result<Self, TensorError> {
        let mut components = BTreeMap::new();
        for key in self.components.keys() {
            let mut acc = MultiPoly::zero(self.dim);
            for i in 0..self.dim {
                let mut src = key.clone();
                let (coeff, src_idx) = if upper {
                    (m.entry(key.0[slot], i), &mut src.0[slot])
                } else {
                    (m.entry(i, key.1[slot]), &mut src.1[slot])
                };
                *src_idx = i;
                if coeff.is_zero() {
                    continue;
                }
                acc = acc.try_add(&coeff.try_mul(&self.components[&src])?)?;
            }
            components.insert(key.clone(), acc);
        }
        Ok(ComponentField { dim: self.dim, spec: self.spec, components })
    }
}

impl fmt::Display for ComponentField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        writeln!(f, "(spec {} {} {})", self.spec.p, self.spec.q, self.spec.omega)?;
        write!(f, "(dim {})", self.dim)?;
        for ((up, lo), p) in &self.components {
            write!(f, "\n(component ({}) ({}) \"{p}\")", list(up), list(lo))?;
        }
        Ok(())
    }
}

/// Which way to read a transition map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Forward,
    Inverse,
}

fn is_constant(p: &MultiPoly) -> bool {
    p.degree() == 0
}

/// Transform a field along `t` (or its inverse). With `f` the oriented map
/// and `b` the target coordinates, upper indices contract with
/// `J_f(f⁻¹(b))`, lower indices with `J_{f⁻¹}(b)`, the weight contributes
/// `det(J_{f⁻¹}(b))^ω`, and every component is precomposed with `f⁻¹`.
pub fn transform_components(field: &ComponentField, t: &TransitionMap, direction: Direction) -> Result<ComponentField, TensorError> {
    let map = match direction {
        Direction::Forward => t.clone(),
        Direction::Inverse => t.reversed()?,
    };
    if map.dim() != field.dim {
        return Err(TensorError::DimensionMismatch { expected: field.dim, found: map.dim() });
    }
    let spec = field.spec;
    let mut out = field.map_all(|p| {
        if is_constant(p) {
            Ok(p.clone())
        } else {
            Ok(p.compose(map.require_inverse()?)?)
        }
    })?;
    if spec.p > 0 {
        let jf = map.jacobian()?;
        let upper = if jf.rows().iter().flatten().all(is_constant) { jf } else { jf.compose(map.require_inverse()?)? };
        for slot in 0..spec.p {
            out = out.contract(true, slot, &upper)?;
        }
    }
    if spec.q > 0 {
        let lower = map.inverse_jacobian()?;
        for slot in 0..spec.q {
            out = out.contract(false, slot, &lower)?;
        }
    }
    if spec.omega != 0 {
        let det = determinant(&map.inverse_jacobian()?)?;
        let factor = if spec.omega > 0 {
            det.pow(spec.omega as u32)?
        } else {
            let c = match det.terms().get(&vec![0; field.dim]) {
                Some(c) if is_constant(&det) => c.clone(),
                _ => return Err(TensorError::NonUnitDeterminant(det.to_string())),
            };
            MultiPoly::constant(field.dim, (Rational::one() / c).pow(-spec.omega))
        };
        out = out.map_all(|p| Ok(p.try_mul(&factor)?))?;
    }
    Ok(out)
}

/// The outcome of a chained transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainResult {
    /// The field transformed map by map.
    pub field: ComponentField,
    /// The composite of the chain, first map innermost.
    pub composite: TransitionMap,
    /// The field transformed once through the composite, when its inverse
    /// is available or not needed.
    pub collapsed: Option<ComponentField>,
}

/// Transform through `maps` in order, check the result against a single
/// transformation through the composite map, and check that the product
/// of the precomposed Jacobians is the Jacobian of the composite.
pub fn chain_transform(field: &ComponentField, maps: &[TransitionMap]) -> Result<ChainResult, TensorError> {
    let mut out = field.clone();
    let mut composite = TransitionMap::identity(field.dim);
    let mut product = JacobianMatrix::identity(field.dim);
    for m in maps {
        out = transform_components(&out, m, Direction::Forward)?;
        product = m.jacobian()?.compose(composite.forward())?.mul(&product)?;
        composite = m.after(&composite)?;
    }
    if product != composite.jacobian()? {
        return Err(TensorError::ChainMismatch);
    }
    let collapsed = match transform_components(field, &composite, Direction::Forward) {
        Ok(c) if c == out => Some(c),
        Ok(_) => return Err(TensorError::ChainMismatch),
        Err(TensorError::MissingInverse(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ChainResult { field: out, composite, collapsed })
}

/// `J_f(f⁻¹(b)) · J_{f⁻¹}(b)` at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KroneckerPoint {
    pub point: Vec<Rational>,
    pub product: Vec<Vec<Rational>>,
}

impl KroneckerPoint {
    pub fn is_identity(&self) -> bool {
        self.product.iter().enumerate().all(|(r, row)| {
            row.iter().enumerate().all(|(c, v)| if r == c { v.is_one() } else { v.is_zero() })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KroneckerReport {
    pub points: Vec<KroneckerPoint>,
}

impl KroneckerReport {
    pub fn holds(&self) -> bool {
        self.points.iter().all(KroneckerPoint::is_identity)
    }
}

impl fmt::Display for KroneckerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[Rational]| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        for (n, p) in self.points.iter().enumerate() {
            if n > 0 {
                f.write_str("\n")?;
            }
            let rows: Vec<String> = p.product.iter().map(|r| format!("[{}]", row(r))).collect();
            write!(
                f,
                "at ({}): {} {}",
                row(&p.point).replace(' ', ", "),
                rows.join(" "),
                if p.is_identity() { "identity" } else { "NOT identity" }
            )?;
        }
        Ok(())
    }
}

/// Check at each point `b` that the two Jacobians of `t` multiply to the identity.
pub fn kronecker_check(t: &TransitionMap, points: &[Vec<Rational>]) -> Result<KroneckerReport, TensorError> {
    let inv = t.require_inverse()?;
    let jf = t.jacobian()?;
    let jinv = t.inverse_jacobian()?;
    let mut out = Vec::with_capacity(points.len());
    for b in points {
        if b.len() != t.dim() {
            return Err(TensorError::DimensionMismatch { expected: t.dim(), found: b.len() });
        }
        let a: Vec<Rational> = inv.iter().map(|p| p.eval(b)).collect::<Result<_, _>>()?;
        let left = jf.at(&a)?;
        let right = jinv.at(b)?;
        let n = t.dim();
        let product = (0..n)
            .map(|r| (0..n).map(|c| (0..n).map(|k| &left[r][k] * &right[k][c]).sum()).collect())
            .collect();
        out.push(KroneckerPoint { point: b.clone(), product });
    }
    Ok(KroneckerReport { points: out })
}
