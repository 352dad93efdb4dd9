//! Exact linear algebra over the rationals: row reduction, kernels, and
//! subspaces kept in canonical reduced row-echelon form.

use std::fmt;

use num_traits::{One, Zero};

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{LieError, Result};
use crate::rational::{format_rational, rat, to_f64, Rational};

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|q| q.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Serialized as a list of rows of `"p/q"` strings.
impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(LieError::mismatch(rows * cols, entries.len()));
        }
        Ok(RatMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows; all rows must share `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LieError::mismatch(cols, row.len()));
            }
            entries.extend(row);
        }
        Ok(RatMatrix {
            rows: n,
            cols,
            entries,
        })
    }

    /// Convenience constructor from small integers. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect();
        Self::from_rows(cols, data).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(LieError::mismatch(self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(LieError::mismatch(self.cols, x.len()));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), x)).collect())
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &RatMatrix,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<RatMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LieError::mismatch(
                self.rows * self.cols,
                other.rows * other.cols,
            ));
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    /// Matrix commutator `AB - BA`.
    pub fn commutator(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.cols {
            return Err(LieError::mismatch(self.cols, other.cols));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    pub fn rank(&self) -> usize {
        rref(self).rows_nonzero()
    }

    /// True when some power `self^k` with `k <= n` vanishes.
    pub fn is_nilpotent(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut p = self.clone();
        for _ in 0..self.rows {
            if p.is_zero() {
                return true;
            }
            p = p.mul(self).expect("square");
        }
        p.is_zero()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |r, c| to_f64(self.get(r, c)))
    }

    fn rows_nonzero(&self) -> usize {
        (0..self.rows)
            .filter(|&r| self.row(r).iter().any(|q| !q.is_zero()))
            .count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Canonical reduced row-echelon form: pivots equal 1, pivot columns are
/// otherwise zero, zero rows at the bottom. Same shape as the input.
pub fn rref(m: &RatMatrix) -> RatMatrix {
    let mut a = m.clone();
    let cols = a.cols;
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == a.rows {
            break;
        }
        let Some(p) = (pivot_row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(pivot_row, p);
        let inv = a.get(pivot_row, col).recip();
        for c in col..cols {
            let idx = pivot_row * cols + c;
            if !a.entries[idx].is_zero() {
                a.entries[idx] *= &inv;
            }
        }
        let pivot: Vec<(usize, Rational)> = (col..cols)
            .filter_map(|c| {
                let v = a.get(pivot_row, c);
                (!v.is_zero()).then(|| (c, v.clone()))
            })
            .collect();
        for r in 0..a.rows {
            if r == pivot_row {
                continue;
            }
            let factor = a.get(r, col).clone();
            if factor.is_zero() {
                continue;
            }
            for (c, v) in &pivot {
                let idx = r * cols + c;
                a.entries[idx] -= &factor * v;
            }
        }
        pivot_row += 1;
    }
    a
}

/// Pivot column of each nonzero row of a matrix already in RREF.
fn pivot_columns(r: &RatMatrix) -> Vec<usize> {
    (0..r.rows)
        .filter_map(|i| r.row(i).iter().position(|q| !q.is_zero()))
        .collect()
}

/// Kernel `{x : m x = 0}` with a canonical basis.
pub fn nullspace(m: &RatMatrix) -> Subspace {
    let r = rref(m);
    let pivots = pivot_columns(&r);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            let coeff = r.get(row, free);
            if !coeff.is_zero() {
                v[p] = -coeff.clone();
            }
        }
        basis.push(v);
    }
    Subspace::span(m.cols, basis).expect("kernel vectors have ambient length")
}

/// Solves `m x = b`, returning one solution if the system is consistent.
pub fn solve(m: &RatMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != m.rows {
        return Err(LieError::mismatch(m.rows, b.len()));
    }
    let mut aug = RatMatrix::zeros(m.rows, m.cols + 1);
    for (r, br) in b.iter().enumerate() {
        for c in 0..m.cols {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, m.cols, br.clone());
    }
    let red = rref(&aug);
    let pivots = pivot_columns(&red);
    if pivots.contains(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = red.get(row, m.cols).clone();
    }
    Ok(Some(x))
}

/// Kernel of a sparse system given row by row as `(column, value)` pairs.
///
/// Rows are folded into an echelon form one at a time, so tall sparse
/// systems (such as the derivation equations) never materialize densely.
pub fn sparse_nullspace(
    cols: usize,
    rows: impl IntoIterator<Item = Vec<(usize, Rational)>>,
) -> Subspace {
    use std::collections::BTreeMap;

    // pivot column -> normalized row (pivot entry is 1)
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
    for raw in rows {
        let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, v) in raw {
            if v.is_zero() {
                continue;
            }
            let e = row.entry(c).or_insert_with(Rational::zero);
            *e += v;
        }
        row.retain(|_, v| !v.is_zero());
        let mut cursor = 0;
        while let Some((&c, _)) = row.range(cursor..).next() {
            cursor = c + 1;
            let Some(prow) = pivots.get(&c) else {
                continue;
            };
            let f = row.remove(&c).expect("present");
            for (&pc, pv) in prow.range(c + 1..) {
                let e = row.entry(pc).or_insert_with(Rational::zero);
                *e -= &f * pv;
                if e.is_zero() {
                    row.remove(&pc);
                }
            }
        }
        if let Some((&lead, lv)) = row.iter().next() {
            let inv = lv.recip();
            for v in row.values_mut() {
                *v *= &inv;
            }
            pivots.insert(lead, row);
        }
    }
    // Back-substitute so every pivot column is zero outside its pivot row.
    let keys: Vec<usize> = pivots.keys().rev().copied().collect();
    for &p in &keys {
        let prow = pivots[&p].clone();
        for (_, other) in pivots.range_mut(..p) {
            if let Some(f) = other.remove(&p) {
                for (&pc, pv) in prow.range(p + 1..) {
                    let e = other.entry(pc).or_insert_with(Rational::zero);
                    *e -= &f * pv;
                    if e.is_zero() {
                        other.remove(&pc);
                    }
                }
            }
        }
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains_key(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (&p, prow) in &pivots {
            if let Some(coeff) = prow.get(&free) {
                v[p] = -coeff.clone();
            }
        }
        basis.push(v);
    }
    Subspace::span(cols, basis).expect("kernel vectors have ambient length")
}

/// Subspace of `Q^n` stored as the nonzero rows of its canonical RREF basis,
/// so equal subspaces compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RatMatrix,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Subspace", 3)?;
        st.serialize_field("ambient_dim", &self.ambient_dim)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("basis", &self.basis)?;
        st.end()
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RatMatrix::zeros(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RatMatrix::identity(ambient_dim),
        }
    }

    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        let m = RatMatrix::from_rows(ambient_dim, vectors)?;
        Ok(Self::row_space(&m))
    }

    /// Row space of a matrix.
    pub fn row_space(m: &RatMatrix) -> Self {
        let r = rref(m);
        let keep = r.rows_nonzero();
        let entries = r.entries[..keep * r.cols].to_vec();
        Subspace {
            ambient_dim: m.cols,
            basis: RatMatrix {
                rows: keep,
                cols: m.cols,
                entries,
            },
        }
    }

    /// Coordinate axis `e_i` (0-based).
    pub fn axis(ambient_dim: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); ambient_dim];
        v[i] = Rational::one();
        Self::span(ambient_dim, vec![v]).expect("axis")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    fn check_ambient(&self, n: usize) -> Result<()> {
        if self.ambient_dim != n {
            return Err(LieError::mismatch(self.ambient_dim, n));
        }
        Ok(())
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        self.check_ambient(x.len())?;
        if x.iter().all(Zero::is_zero) {
            return Ok(true);
        }
        // Reduce x against the RREF rows; membership iff the residue vanishes.
        let mut v = x.to_vec();
        for r in 0..self.basis.rows {
            let row = self.basis.row(r);
            let p = row.iter().position(|q| !q.is_zero()).expect("nonzero row");
            let f = v[p].clone();
            if f.is_zero() {
                continue;
            }
            for (vi, bi) in v.iter_mut().zip(row) {
                if !bi.is_zero() {
                    *vi -= &f * bi;
                }
            }
        }
        Ok(v.iter().all(Zero::is_zero))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other.ambient_dim)?;
        for r in 0..other.basis.rows {
            if !self.contains(other.basis.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient_dim)?;
        Ok(Subspace::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// Annihilator basis: rows `a` with `a . x = 0` for every `x` in the subspace.
    pub fn annihilator(&self) -> RatMatrix {
        let k = nullspace(&self.basis);
        k.basis
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient_dim)?;
        let constraints = self.annihilator().vstack(&other.annihilator())?;
        Ok(nullspace(&constraints))
    }

    /// Coordinates of `x` with respect to the stored basis rows, if `x` lies
    /// in the subspace.
    pub fn coordinates(&self, x: &[Rational]) -> Result<Option<Vec<Rational>>> {
        self.check_ambient(x.len())?;
        solve(&self.basis.transpose(), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_examples() {
        let id = RatMatrix::identity(2);
        assert_eq!(rref(&id), id);
        let m = RatMatrix::from_i64(&[&[2, 4], &[1, 2]]);
        assert_eq!(rref(&m), RatMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rref_normalizes_pivots() {
        let m = RatMatrix::from_i64(&[&[0, 3, 6], &[2, 0, 1]]);
        let r = rref(&m);
        assert_eq!(r.row(0), &[rat(1), rat(0), ratio(1, 2)][..]);
        assert_eq!(r.row(1), &[rat(0), rat(1), rat(2)][..]);
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&RatMatrix::identity(4)).is_zero());
        assert!(nullspace(&RatMatrix::zeros(3, 3)).is_full());
        let m = RatMatrix::from_i64(&[&[1, 1, 0], &[0, 0, 1]]);
        let k = nullspace(&m);
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&q(&[1, -1, 0])).unwrap());
    }

    #[test]
    fn subspace_sum_and_intersection() {
        let e1 = Subspace::axis(2, 0);
        let e2 = Subspace::axis(2, 1);
        assert!(e1.sum(&e2).unwrap().is_full());
        assert!(e1.intersection(&e2).unwrap().is_zero());
        assert_eq!(e1.sum(&e1).unwrap(), e1);
        assert_eq!(e1.intersection(&e1).unwrap(), e1);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(a.sum(&b).is_err());
        assert!(a.intersection(&b).is_err());
        assert!(a.contains(&q(&[1, 2, 3])).is_err());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(solve(&m, &q(&[1, 3])).unwrap().is_none());
        let x = solve(&m, &q(&[1, 2])).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), q(&[1, 2]));
    }

    #[test]
    fn sparse_nullspace_matches_dense() {
        let m =
            RatMatrix::from_i64(&[&[1, 2, 0, -1], &[2, 4, 1, 0], &[3, 6, 1, -1], &[0, 0, 0, 0]]);
        let rows = m
            .row_vecs()
            .into_iter()
            .map(|r| r.into_iter().enumerate().collect());
        assert_eq!(sparse_nullspace(4, rows), nullspace(&m));
    }

    #[test]
    fn nilpotency() {
        assert!(RatMatrix::from_i64(&[&[0, 1], &[0, 0]]).is_nilpotent());
        assert!(!RatMatrix::from_i64(&[&[1, 0], &[0, 0]]).is_nilpotent());
    }
}
