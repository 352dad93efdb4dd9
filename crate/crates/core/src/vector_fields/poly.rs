use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LieError, Result};
use crate::rational::{format_rational, parse_rational, to_f64, Rational};

/// Polynomial in `nvars` variables with rational coefficients. Terms are
/// keyed by exponent vectors; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The coordinate `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exponents: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent length");
        let mut p = Self::zero(nvars);
        p.add_term(exponents, c);
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(LieError::mismatch(nvars, e.len()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Univariate polynomial from coefficients in increasing degree.
    pub fn univariate(coeffs: &[Rational]) -> Self {
        let mut p = Self::zero(1);
        for (d, c) in coeffs.iter().enumerate() {
            p.add_term(vec![d as u32], c.clone());
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
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

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(LieError::mismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut p = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        Ok(p)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self).expect("same arity");
        }
        acc
    }

    /// Partial derivative in the variable with 0-based index `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            p.add_term(d, c * Rational::from_integer(e[i].into()));
        }
        p
    }

    /// `u(f)` for a univariate `u`.
    pub fn compose_univariate(u: &Poly, f: &Poly) -> Result<Poly> {
        if u.nvars != 1 {
            return Err(LieError::mismatch(1, u.nvars));
        }
        // Horner's rule from the top degree down.
        let top = u.degree().unwrap_or(0);
        let mut acc = Poly::zero(f.nvars);
        for d in (0..=top).rev() {
            acc = acc.mul(f)?;
            if let Some(c) = u.terms.get(&vec![d]) {
                acc = acc.add(&Poly::constant(f.nvars, c.clone()))?;
            }
        }
        Ok(acc)
    }

    pub fn eval_exact(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.nvars {
            return Err(LieError::mismatch(self.nvars, x.len()));
        }
        let mut s = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, k) in x.iter().zip(e) {
                t *= num_traits::pow(xi.clone(), *k as usize);
            }
            s += t;
        }
        Ok(s)
    }

    pub fn to_compiled(&self) -> CompiledPoly {
        CompiledPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|&k| k as i32).collect(), to_f64(c)))
                .collect(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.to_compiled().eval(x)
    }
}

/// Floating-point copy of a [`Poly`] for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    terms: Vec<(Vec<i32>, f64)>,
}

impl CompiledPoly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&k, xi)| xi.powi(k)).product::<f64>())
            .sum()
    }
}

/// Monomial keys are `1` or products of `x<i>` and `x<i>^<k>` joined by
/// `*`, with 1-based variable indices.
pub fn format_monomial(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{k}", i + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

pub fn parse_monomial(s: &str, nvars: usize) -> Result<Vec<u32>> {
    let bad = || LieError::InvalidInput(format!("malformed monomial '{s}'"));
    let mut e = vec![0u32; nvars];
    let s = s.trim();
    if s == "1" {
        return Ok(e);
    }
    for factor in s.split('*') {
        let factor = factor.trim();
        let rest = factor.strip_prefix('x').ok_or_else(bad)?;
        let (idx, pow) = match rest.split_once('^') {
            Some((i, k)) => (i, k.parse::<u32>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let i: usize = idx.parse().map_err(|_| bad())?;
        if i == 0 || i > nvars {
            return Err(LieError::InvalidInput(format!(
                "variable x{i} out of range for {nvars} variables"
            )));
        }
        e[i - 1] += pow;
    }
    Ok(e)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest degree first.
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono = format_monomial(e);
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (mono.as_str(), mag.is_one()) {
                ("1", _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "{mono}")?,
                _ => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            m.serialize_entry(&format_monomial(e), &format_rational(c))?;
        }
        m.end()
    }
}

/// Wire form: a map from monomial keys to rational strings, read against a
/// known variable count.
#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(transparent)]
pub struct PolyDocument(pub BTreeMap<String, String>);

impl PolyDocument {
    pub fn to_poly(&self, nvars: usize) -> Result<Poly> {
        let mut terms = Vec::new();
        for (k, v) in &self.0 {
            terms.push((parse_monomial(k, nvars)?, parse_rational(v)?));
        }
        Poly::from_terms(nvars, terms)
    }

    pub fn from_poly(p: &Poly) -> Self {
        PolyDocument(
            p.terms
                .iter()
                .map(|(e, c)| (format_monomial(e), format_rational(c)))
                .collect(),
        )
    }
}

/// A univariate polynomial given either as a coefficient list (increasing
/// degree) or as a monomial map in `x1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateDocument(pub Poly);

impl<'de> Deserialize<'de> for UnivariateDocument {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            List(Vec<String>),
            Map(BTreeMap<String, String>),
        }
        let poly = match Raw::deserialize(d)? {
            Raw::List(v) => {
                let coeffs = v
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()
                    .map_err(D::Error::custom)?;
                Poly::univariate(&coeffs)
            }
            Raw::Map(m) => PolyDocument(m).to_poly(1).map_err(D::Error::custom)?,
        };
        Ok(UnivariateDocument(poly))
    }
}

impl FromStr for PolyDocument {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| LieError::InvalidInput(e.to_string()))
    }
}

/// Rank of the coefficient matrix of a list of polynomials (rows indexed by
/// polynomial, columns by monomial).
pub fn coefficient_rank(polys: &[Poly]) -> usize {
    use crate::linalg::RatMatrix;
    let mut monos: BTreeMap<&Vec<u32>, usize> = BTreeMap::new();
    for p in polys {
        for e in p.terms.keys() {
            let next = monos.len();
            monos.entry(e).or_insert(next);
        }
    }
    if monos.is_empty() {
        return 0;
    }
    let mut m = RatMatrix::zeros(polys.len(), monos.len());
    for (r, p) in polys.iter().enumerate() {
        for (e, c) in &p.terms {
            m.set(r, monos[e], c.clone());
        }
    }
    m.rank()
}
