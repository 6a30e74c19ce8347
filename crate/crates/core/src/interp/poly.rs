//! Exact multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{parse_rational, InterpError, Rational, MAX_DEGREE, MAX_TERMS};

/// A polynomial in `nvars` indeterminates `x1 … xn`. Zero coefficients are
/// never stored, so equality of term maps is equality of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The indeterminate `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "indeterminate {i} out of range for {nvars}");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// Build from `(exponents, coefficient)` pairs; like terms are combined.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self, InterpError> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(InterpError::ArityMismatch { expected: nvars, found: e.len() });
            }
            p.add_term(e, c);
        }
        p.check_limits()?;
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub(crate) fn check_limits(&self) -> Result<(), InterpError> {
        if self.terms.len() > MAX_TERMS {
            return Err(InterpError::ResourceLimit(format!("more than {MAX_TERMS} terms")));
        }
        if self.degree() > MAX_DEGREE {
            return Err(InterpError::ResourceLimit(format!("degree above {MAX_DEGREE}")));
        }
        Ok(())
    }

    fn same_arity(&self, other: &Self) -> Result<(), InterpError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(InterpError::ArityMismatch { expected: self.nvars, found: other.nvars })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, InterpError> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, InterpError> {
        self.same_arity(other)?;
        if self.degree() + other.degree() > MAX_DEGREE {
            return Err(InterpError::ResourceLimit(format!("degree above {MAX_DEGREE}")));
        }
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
            if out.terms.len() > MAX_TERMS {
                return Err(InterpError::ResourceLimit(format!("more than {MAX_TERMS} terms")));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Result<Self, InterpError> {
        let mut out = Self::constant(self.nvars, Rational::one());
        for _ in 0..n {
            out = out.try_mul(self)?;
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, InterpError> {
        if point.len() != self.nvars {
            return Err(InterpError::ArityMismatch { expected: self.nvars, found: point.len() });
        }
        let mut sum = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e) {
                t *= num_traits::pow(x.clone(), *k as usize);
            }
            sum += t;
        }
        Ok(sum)
    }

    /// The partial derivative in `x_{i+1}` by the coefficient rule.
    pub fn partial(&self, i: usize) -> Result<Self, InterpError> {
        if i >= self.nvars {
            return Err(InterpError::ArityMismatch { expected: self.nvars, found: i + 1 });
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * Rational::from_integer(e[i].into()));
        }
        Ok(out)
    }

    /// The derivative of a univariate polynomial.
    pub fn derivative(&self) -> Result<Self, InterpError> {
        if self.nvars != 1 {
            return Err(InterpError::ArityMismatch { expected: 1, found: self.nvars });
        }
        self.partial(0)
    }

    /// Substitute `inners[i]` for `x_{i+1}`; all inners share one arity.
    pub fn compose(&self, inners: &[MultiPoly]) -> Result<MultiPoly, InterpError> {
        if inners.len() != self.nvars {
            return Err(InterpError::ArityMismatch { expected: self.nvars, found: inners.len() });
        }
        let m = match inners.first() {
            Some(p) => p.nvars,
            None => 0,
        };
        if let Some(bad) = inners.iter().find(|p| p.nvars != m) {
            return Err(InterpError::ArityMismatch { expected: m, found: bad.nvars });
        }
        let mut powers: Vec<Vec<MultiPoly>> = inners.iter().map(|p| vec![Self::constant(m, Rational::one()), p.clone()]).collect();
        let mut out = Self::zero(m);
        for (e, c) in &self.terms {
            let mut t = Self::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().try_mul(&inners[i])?;
                    powers[i].push(next);
                }
                t = t.try_mul(&powers[i][k as usize])?;
            }
            out = out.try_add(&t)?;
        }
        out.check_limits()?;
        Ok(out)
    }

    /// Parse the literal form `3/2 x1^2 x2 + -1 x2` (1-based indeterminates).
    pub fn parse(nvars: usize, text: &str) -> Result<Self, InterpError> {
        let bad = |why: &str| InterpError::PolySyntax(format!("{why} in {text:?}"));
        let mut p = Self::zero(nvars);
        let text = text.trim();
        if text.is_empty() {
            return Err(bad("empty polynomial"));
        }
        for term in text.split('+') {
            let mut coeff = Rational::one();
            let mut e = vec![0u32; nvars];
            let mut seen = false;
            for (n, tok) in term.split_whitespace().enumerate() {
                seen = true;
                let (neg, tok) = match tok.strip_prefix('-') {
                    Some(rest) if rest.starts_with('x') => (true, rest),
                    _ => (false, tok),
                };
                if let Some(v) = tok.strip_prefix('x') {
                    let (idx, pow) = match v.split_once('^') {
                        Some((a, b)) => (a, b.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                        None => (v, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| bad("bad indeterminate"))?;
                    if idx == 0 || idx > nvars {
                        return Err(bad(&format!("indeterminate x{idx} outside x1..x{nvars}")));
                    }
                    e[idx - 1] += pow;
                    if neg {
                        coeff = -coeff;
                    }
                } else if n == 0 {
                    coeff = parse_rational(tok).ok_or_else(|| bad("bad coefficient"))?;
                } else {
                    return Err(bad(&format!("unexpected token {tok:?}")));
                }
            }
            if !seen {
                return Err(bad("empty term"));
            }
            p.add_term(e, coeff);
        }
        p.check_limits()?;
        Ok(p)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| if *k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                f.write_str(&vars.join(" "))?;
            } else if (-c.clone()).is_one() && c.is_negative() {
                write!(f, "-1 {}", vars.join(" "))?;
            } else {
                write!(f, "{c} {}", vars.join(" "))?;
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomial arities differ")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(&-rhs).expect("polynomial arities differ")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial product out of range")
    }
}
