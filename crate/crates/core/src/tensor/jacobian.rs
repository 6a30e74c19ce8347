use std::fmt;

use num_traits::One;

use crate::deriv::encode_in;
use crate::interp::{eval, Environment, MultiPoly, Rational, Value};
use crate::lang::{Context, Name, Term, TypeExpr};

use super::TensorError;

/// Largest dimension accepted by [`determinant`].
pub const MAX_DET_DIM: usize = 4;

/// Row `j`, column `i` holds `∂f^j/∂x^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianMatrix {
    rows: Vec<Vec<MultiPoly>>,
    nvars: usize,
}

impl JacobianMatrix {
    pub fn from_rows(nvars: usize, rows: Vec<Vec<MultiPoly>>) -> Result<Self, TensorError> {
        for row in &rows {
            for p in row {
                if p.nvars() != nvars {
                    return Err(TensorError::DimensionMismatch { expected: nvars, found: p.nvars() });
                }
            }
        }
        Ok(JacobianMatrix { rows, nvars })
    }

    pub fn rows(&self) -> &[Vec<MultiPoly>] {
        &self.rows
    }

    pub fn entry(&self, j: usize, i: usize) -> &MultiPoly {
        &self.rows[j][i]
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Number of indeterminates of every entry.
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Precompose every entry with `inner`.
    pub fn compose(&self, inner: &[MultiPoly]) -> Result<Self, TensorError> {
        let nvars = inner.first().map_or(0, MultiPoly::nvars);
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|p| p.compose(inner)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(JacobianMatrix { rows, nvars })
    }

    /// The matrix product `self · rhs`.
    pub fn mul(&self, rhs: &JacobianMatrix) -> Result<Self, TensorError> {
        if self.n_cols() != rhs.n_rows() {
            return Err(TensorError::DimensionMismatch { expected: self.n_cols(), found: rhs.n_rows() });
        }
        let mut rows = Vec::with_capacity(self.n_rows());
        for r in &self.rows {
            let mut out = Vec::with_capacity(rhs.n_cols());
            for c in 0..rhs.n_cols() {
                let mut acc = MultiPoly::zero(self.nvars);
                for (k, a) in r.iter().enumerate() {
                    acc = acc.try_add(&a.try_mul(&rhs.rows[k][c])?)?;
                }
                out.push(acc);
            }
            rows.push(out);
        }
        Ok(JacobianMatrix { rows, nvars: self.nvars })
    }

    /// Evaluate every entry at a point.
    pub fn at(&self, point: &[Rational]) -> Result<Vec<Vec<Rational>>, TensorError> {
        Ok(self
            .rows
            .iter()
            .map(|r| r.iter().map(|p| p.eval(point)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?)
    }

    pub fn identity(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|j| {
                (0..dim)
                    .map(|i| if i == j { MultiPoly::constant(dim, Rational::one()) } else { MultiPoly::zero(dim) })
                    .collect()
            })
            .collect();
        JacobianMatrix { rows, nvars: dim }
    }
}

impl fmt::Display for JacobianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, r) in self.rows.iter().enumerate() {
            if n > 0 {
                f.write_str("\n")?;
            }
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// The Jacobian of the polynomial map with components `map` (each in `m`
/// indeterminates). Every entry is the value of the encoded partial
/// derivative term.
pub fn jacobian(m: usize, map: &[MultiPoly]) -> Result<JacobianMatrix, TensorError> {
    let n = map.len();
    let ctx = Context::new().extend(Name::new("f"), TypeExpr::FunMN(m, n));
    let env = Environment::new(vec![Value::FunMN(m, map.to_vec())]);
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = Vec::with_capacity(m);
        for i in 0..m {
            let d = encode_in(&ctx, &Term::var("f", 0), j, i)?;
            match eval(&env, &d)? {
                Value::FunM1(p) => row.push(p),
                other => unreachable!("a partial derivative evaluates to a FunM1 value, got {}", other.ty()),
            }
        }
        rows.push(row);
    }
    JacobianMatrix::from_rows(m, rows)
}

/// All permutations of `0..n` with their signs.
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], odd: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), odd));
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            // Placing v after the prefix adds one inversion per larger value already placed.
            let inversions = prefix.iter().filter(|&&u| u > v).count();
            used[v] = true;
            prefix.push(v);
            go(prefix, used, odd ^ (inversions % 2 == 1), out);
            prefix.pop();
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], false, &mut out);
    out
}

/// The Leibniz expansion over all permutations.
pub fn determinant(j: &JacobianMatrix) -> Result<MultiPoly, TensorError> {
    let n = j.n_rows();
    if j.rows.iter().any(|r| r.len() != n) {
        return Err(TensorError::NonSquare { rows: n, cols: j.n_cols() });
    }
    if n > MAX_DET_DIM {
        return Err(TensorError::TooLarge(n));
    }
    let mut det = MultiPoly::zero(j.nvars);
    for (perm, odd) in permutations(n) {
        let mut term = MultiPoly::constant(j.nvars, Rational::one());
        for (row, &col) in perm.iter().enumerate() {
            term = term.try_mul(&j.rows[row][col])?;
        }
        if term.is_zero() {
            continue;
        }
        det = if odd { det.try_add(&-&term)? } else { det.try_add(&term)? };
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(m: usize, s: &str) -> MultiPoly {
        MultiPoly::parse(m, s).unwrap()
    }

    fn diff_quotient(q: &MultiPoly, i: usize) -> MultiPoly {
        let m = q.nvars();
        let shifted: Vec<MultiPoly> = (0..m)
            .map(|v| if v == i { &MultiPoly::var(m + 1, v) + &MultiPoly::var(m + 1, m) } else { MultiPoly::var(m + 1, v) })
            .collect();
        let plain: Vec<MultiPoly> = (0..m).map(|v| MultiPoly::var(m + 1, v)).collect();
        let d = &q.compose(&shifted).unwrap() - &q.compose(&plain).unwrap();
        let lin: Vec<_> = d.terms().iter().filter(|(e, _)| e[m] == 1).map(|(e, c)| (e[..m].to_vec(), c.clone())).collect();
        MultiPoly::from_terms(m, lin).unwrap()
    }

    /// Independent oracle: cofactor expansion along the first row.
    fn cofactor(rows: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
        if rows.len() == 1 {
            return rows[0][0].clone();
        }
        let mut acc = MultiPoly::zero(nvars);
        for c in 0..rows.len() {
            let minor: Vec<Vec<MultiPoly>> =
                rows[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, v)| v.clone()).collect()).collect();
            let t = &rows[0][c] * &cofactor(&minor, nvars);
            acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(jacobian(2, &[p(2, "x1"), p(2, "x2")]).unwrap(), JacobianMatrix::identity(2));
        let f = [p(2, "x1 + x2"), p(2, "x1 x2")];
        let j = jacobian(2, &f).unwrap();
        assert_eq!(j.to_string(), "[1, 1]\n[x2, x1]");
        for (r, fr) in f.iter().enumerate() {
            for i in 0..2 {
                assert_eq!(j.entry(r, i), &diff_quotient(fr, i));
            }
        }
        assert_eq!(jacobian(1, &[p(1, "x1^2")]).unwrap().entry(0, 0), &p(1, "2 x1"));
    }

    #[test]
    fn determinant_examples() {
        let c = |s: &str| p(1, s);
        let m = JacobianMatrix::from_rows(1, vec![vec![c("2"), c("3")], vec![c("5"), c("7")]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), c("-1"));
        for d in 1..=4 {
            assert_eq!(determinant(&JacobianMatrix::identity(d)).unwrap(), MultiPoly::constant(d, Rational::one()));
        }
        let j = jacobian(2, &[p(2, "x1 + x2"), p(2, "x1 x2")]).unwrap();
        assert_eq!(determinant(&j).unwrap(), p(2, "x1 + -1 x2"));
        assert_eq!(determinant(&j).unwrap(), cofactor(j.rows(), 2));
        let wide = JacobianMatrix::from_rows(1, vec![vec![c("1"), c("2")]]).unwrap();
        assert_eq!(determinant(&wide), Err(TensorError::NonSquare { rows: 1, cols: 2 }));
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().filter(|(_, odd)| *odd).count(), 3);
        assert!(perms.contains(&(vec![1, 0, 2], true)));
        assert!(perms.contains(&(vec![1, 2, 0], false)));
    }

    proptest! {
        #[test]
        fn leibniz_matches_cofactor(dim in 1usize..=4, seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<Vec<MultiPoly>> = (0..dim).map(|_| crate::gen::map(&mut rng, 2, dim, 2)).collect();
            let m = JacobianMatrix::from_rows(2, rows.clone()).unwrap();
            prop_assert_eq!(determinant(&m).unwrap(), cofactor(&rows, 2));
        }
    }
}
