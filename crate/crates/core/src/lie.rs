//! Finite-dimensional Lie algebras given by exact structure constants.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{LieError, Result};
use crate::linalg::{nullspace, solve, RatMatrix, Subspace};
use crate::rational::Rational;

/// Length of a derived or lower central series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl Length {
    pub fn is_finite(self) -> bool {
        matches!(self, Length::Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Length::Finite(l) => Some(l),
            Length::Infinite => None,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(l) => write!(f, "{l}"),
            Length::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Length::Finite(l) => s.serialize_u64(*l as u64),
            Length::Infinite => s.serialize_str("infinite"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Derived,
    LowerCentral,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    /// `terms[0]` is the whole algebra.
    pub terms: Vec<Subspace>,
    /// True when the series settled on a nonzero term.
    pub stabilized: bool,
    pub length: Length,
}

impl SeriesReport {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }
}

/// Lie algebra over Q with basis `e_1..e_n` and `[e_i, e_j] = sum_k c_ijk e_k`.
///
/// Only the brackets with `i < j` are stored; the rest follow from
/// antisymmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    name: String,
    basis_names: Vec<String>,
    upper: Vec<Vec<Rational>>,
    /// Nonzero `c_ijk` grouped by pair `(i, j)`, `i < j`; derived from
    /// `upper` and used by [`LieAlgebra::bracket`].
    sparse: Vec<SparseEntry>,
}

type SparseEntry = (usize, usize, Vec<(usize, Rational)>);

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl LieAlgebra {
    /// Builds an algebra and rejects structure constants that fail Jacobi.
    ///
    /// `brackets` lists `((i, j), [e_i, e_j])` with 0-based `i < j`; pairs not
    /// listed bracket to zero.
    pub fn new(
        name: impl Into<String>,
        basis_names: Vec<String>,
        brackets: Vec<((usize, usize), Vec<Rational>)>,
    ) -> Result<Self> {
        let g = Self::new_unchecked(name, basis_names, brackets)?;
        let bad = g.jacobi_check();
        if !bad.is_empty() {
            return Err(LieError::JacobiViolation(bad));
        }
        Ok(g)
    }

    /// Same as [`LieAlgebra::new`] but skips the Jacobi validation, so that
    /// corrupted tables can be inspected with [`LieAlgebra::jacobi_check`].
    pub fn new_unchecked(
        name: impl Into<String>,
        basis_names: Vec<String>,
        brackets: Vec<((usize, usize), Vec<Rational>)>,
    ) -> Result<Self> {
        let n = basis_names.len();
        let mut upper = vec![vec![Rational::zero(); n]; n * n.saturating_sub(1) / 2];
        for ((i, j), v) in brackets {
            if i >= j {
                return Err(LieError::InvalidInput(format!(
                    "bracket pair ({i}, {j}) must satisfy i < j"
                )));
            }
            if j >= n {
                return Err(LieError::InvalidInput(format!(
                    "bracket index {j} out of range for dimension {n}"
                )));
            }
            if v.len() != n {
                return Err(LieError::mismatch(n, v.len()));
            }
            upper[pair_index(n, i, j)] = v;
        }
        let mut sparse = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let terms: Vec<(usize, Rational)> = upper[pair_index(n, i, j)]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect();
                if !terms.is_empty() {
                    sparse.push((i, j, terms));
                }
            }
        }
        Ok(LieAlgebra {
            name: name.into(),
            basis_names,
            upper,
            sparse,
        })
    }

    pub fn abelian(name: impl Into<String>, dim: usize) -> Self {
        let names = (1..=dim).map(|i| format!("e{i}")).collect();
        Self::new_unchecked(name, names, Vec::new()).expect("abelian")
    }

    /// Structure constants of the span of linearly independent square
    /// matrices, which must be closed under the commutator.
    pub fn from_matrix_basis(
        name: impl Into<String>,
        basis_names: Vec<String>,
        basis: &[RatMatrix],
    ) -> Result<Self> {
        let coords = MatrixCoordinates::new(basis)?;
        let n = basis.len();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = basis[i].commutator(&basis[j])?;
                if c.is_zero() {
                    continue;
                }
                let v = coords.of(&c)?.ok_or_else(|| {
                    LieError::InvalidInput(format!(
                        "commutator of basis matrices {i} and {j} leaves the span"
                    ))
                })?;
                brackets.push(((i, j), v));
            }
        }
        Self::new(name, basis_names, brackets)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let n = self.dim();
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => vec![Rational::zero(); n],
            std::cmp::Ordering::Less => self.upper[pair_index(n, i, j)].clone(),
            std::cmp::Ordering::Greater => {
                self.upper[pair_index(n, j, i)].iter().map(|q| -q).collect()
            }
        }
    }

    /// `c_ijk` with antisymmetry applied.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        let n = self.dim();
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Rational::zero(),
            std::cmp::Ordering::Less => self.upper[pair_index(n, i, j)][k].clone(),
            std::cmp::Ordering::Greater => -&self.upper[pair_index(n, j, i)][k],
        }
    }

    /// Nonzero brackets `((i, j), [e_i, e_j])` with `i < j`.
    pub fn nonzero_brackets(&self) -> Vec<((usize, usize), &[Rational])> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = &self.upper[pair_index(n, i, j)];
                if v.iter().any(|q| !q.is_zero()) {
                    out.push(((i, j), v.as_slice()));
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.sparse.is_empty()
    }

    fn check_len(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(LieError::mismatch(self.dim(), x.len()));
        }
        Ok(())
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut out = vec![Rational::zero(); self.dim()];
        let product = |a: &Rational, b: &Rational| (!a.is_zero() && !b.is_zero()).then(|| a * b);
        for (i, j, terms) in &self.sparse {
            let coeff = match (product(&x[*i], &y[*j]), product(&x[*j], &y[*i])) {
                (None, None) => continue,
                (Some(a), None) => a,
                (None, Some(b)) => -b,
                (Some(a), Some(b)) => a - b,
            };
            if coeff.is_zero() {
                continue;
            }
            for (k, c) in terms {
                out[*k] += &coeff * c;
            }
        }
        Ok(out)
    }

    /// Basis triples `i < j < k` on which the Jacobi identity fails.
    ///
    /// Triples with a repeated index vanish by antisymmetry alone.
    pub fn jacobi_check(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let e = |i: usize| unit(n, i);
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = self.bracket(&self.bracket_basis(i, j), &e(k)).expect("dim");
                    let b = self.bracket(&self.bracket_basis(j, k), &e(i)).expect("dim");
                    let c = self.bracket(&self.bracket_basis(k, i), &e(j)).expect("dim");
                    if a.iter()
                        .zip(&b)
                        .zip(&c)
                        .any(|((a, b), c)| !(a + b + c).is_zero())
                    {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// Adjoint matrix of `x`: column `j` holds `[x, e_j]`.
    pub fn ad(&self, x: &[Rational]) -> Result<RatMatrix> {
        self.check_len(x)?;
        let n = self.dim();
        let mut m = RatMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.bracket(x, &unit(n, j))?;
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, j, v);
            }
        }
        Ok(m)
    }

    pub fn ad_basis(&self, i: usize) -> RatMatrix {
        self.ad(&unit(self.dim(), i)).expect("dim")
    }

    fn check_subspace(&self, u: &Subspace) -> Result<()> {
        if u.ambient_dim() != self.dim() {
            return Err(LieError::mismatch(self.dim(), u.ambient_dim()));
        }
        Ok(())
    }

    /// `[U, V]`: span of brackets of basis vectors.
    pub fn subspace_bracket(&self, u: &Subspace, v: &Subspace) -> Result<Subspace> {
        self.check_subspace(u)?;
        self.check_subspace(v)?;
        let mut vecs = Vec::new();
        for x in u.basis_vectors() {
            for y in v.basis_vectors() {
                let b = self.bracket(&x, &y)?;
                if b.iter().any(|q| !q.is_zero()) {
                    vecs.push(b);
                }
            }
        }
        Subspace::span(self.dim(), vecs)
    }

    fn series(&self, kind: SeriesKind) -> SeriesReport {
        let full = Subspace::full(self.dim());
        let mut terms = vec![full.clone()];
        loop {
            let last = terms.last().expect("nonempty");
            if last.is_zero() {
                let length = Length::Finite(terms.len() - 1);
                return SeriesReport {
                    kind,
                    terms,
                    stabilized: false,
                    length,
                };
            }
            let next = match kind {
                SeriesKind::Derived => self.subspace_bracket(last, last),
                SeriesKind::LowerCentral => self.subspace_bracket(&full, last),
            }
            .expect("ambient dims agree");
            if &next == last {
                return SeriesReport {
                    kind,
                    terms,
                    stabilized: true,
                    length: Length::Infinite,
                };
            }
            terms.push(next);
        }
    }

    /// `g^(0) = g`, `g^(j+1) = [g^(j), g^(j)]`.
    pub fn derived_series(&self) -> SeriesReport {
        self.series(SeriesKind::Derived)
    }

    pub fn derived_length(&self) -> Length {
        self.derived_series().length
    }

    /// `g_(0) = g`, `g_(j+1) = [g, g_(j)]`.
    pub fn lower_central_series(&self) -> SeriesReport {
        self.series(SeriesKind::LowerCentral)
    }

    pub fn nilpotency_class(&self) -> Length {
        self.lower_central_series().length
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_length().is_finite()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_class().is_finite()
    }

    /// `{x : [x, e_j] = 0 for all j}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        // Row (j, k), column i: c_ijk.
        let mut m = RatMatrix::zeros(n * n, n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = self.structure_constant(i, j, k);
                    if !c.is_zero() {
                        m.set(j * n + k, i, c);
                    }
                }
            }
        }
        nullspace(&m)
    }

    pub fn commutator_ideal(&self) -> Subspace {
        let full = Subspace::full(self.dim());
        self.subspace_bracket(&full, &full).expect("dims")
    }

    /// True when `[g, u] ⊆ u`.
    pub fn is_ideal(&self, u: &Subspace) -> Result<bool> {
        let full = Subspace::full(self.dim());
        u.contains_subspace(&self.subspace_bracket(&full, u)?)
    }

    /// The subalgebra spanned by `u`, in the canonical basis of `u`.
    pub fn subalgebra(&self, u: &Subspace, name: impl Into<String>) -> Result<LieAlgebra> {
        self.check_subspace(u)?;
        let basis = u.basis_vectors();
        let m = basis.len();
        let mut brackets = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                let v = self.bracket(&basis[a], &basis[b])?;
                if v.iter().all(Zero::is_zero) {
                    continue;
                }
                let coords = u.coordinates(&v)?.ok_or_else(|| {
                    LieError::Precondition("subspace is not closed under the bracket".into())
                })?;
                brackets.push(((a, b), coords));
            }
        }
        let names = (1..=m).map(|i| format!("u{i}")).collect();
        Self::new_unchecked(name, names, brackets)
    }

    /// Block direct sum; cross brackets vanish.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (n, m) = (self.dim(), other.dim());
        let total = n + m;
        let mut brackets = Vec::new();
        for ((i, j), v) in self.nonzero_brackets() {
            let mut w = v.to_vec();
            w.resize(total, Rational::zero());
            brackets.push(((i, j), w));
        }
        for ((i, j), v) in other.nonzero_brackets() {
            let mut w = vec![Rational::zero(); n];
            w.extend(v.iter().cloned());
            brackets.push(((n + i, n + j), w));
        }
        let names = self
            .basis_names
            .iter()
            .chain(&other.basis_names)
            .cloned()
            .collect();
        let name = format!("{}+{}", self.name, other.name);
        Self::new_unchecked(name, names, brackets).expect("block indices valid")
    }
}

pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// Expresses matrices in the coordinates of a fixed linearly independent
/// matrix basis.
pub(crate) struct MatrixCoordinates {
    columns: RatMatrix,
}

impl MatrixCoordinates {
    pub(crate) fn new(basis: &[RatMatrix]) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Ok(MatrixCoordinates {
                columns: RatMatrix::zeros(0, 0),
            });
        };
        let size = first.rows() * first.cols();
        let mut columns = RatMatrix::zeros(size, basis.len());
        for (c, b) in basis.iter().enumerate() {
            if b.rows() * b.cols() != size {
                return Err(LieError::mismatch(size, b.rows() * b.cols()));
            }
            for (r, v) in b.entries().iter().enumerate() {
                columns.set(r, c, v.clone());
            }
        }
        if columns.rank() != basis.len() {
            return Err(LieError::InvalidInput(
                "matrix basis is linearly dependent".into(),
            ));
        }
        Ok(MatrixCoordinates { columns })
    }

    pub(crate) fn of(&self, m: &RatMatrix) -> Result<Option<Vec<Rational>>> {
        if self.columns.cols() == 0 {
            return Ok(m.is_zero().then(Vec::new));
        }
        solve(&self.columns, m.entries())
    }
}
