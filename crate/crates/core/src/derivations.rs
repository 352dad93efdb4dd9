//! Derivation algebras and the nilpotent-derivation obstruction to Lie
//! contractibility.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LieError, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{nullspace, sparse_nullspace, RatMatrix, Subspace};
use crate::rational::{rat, Rational};

/// Basis of `Der(g) = {D : D[x,y] = [Dx,y] + [x,Dy]}` as `n x n` matrices
/// acting on coordinate columns.
#[derive(Clone, Debug)]
pub struct DerivationAlgebra {
    pub parent: LieAlgebra,
    pub basis: Vec<RatMatrix>,
}

impl DerivationAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn flat_span(&self) -> Subspace {
        let n = self.parent.dim();
        let rows = self.basis.iter().map(|m| m.entries().to_vec()).collect();
        Subspace::span(n * n, rows).expect("n^2 entries")
    }

    /// Exact membership of a matrix in the derivation span.
    pub fn contains(&self, m: &RatMatrix) -> Result<bool> {
        let n = self.parent.dim();
        if m.rows() != n || m.cols() != n {
            return Err(LieError::mismatch(n, m.rows()));
        }
        self.flat_span().contains(m.entries())
    }

    /// Leibniz-rule residual check on every basis pair, for every basis element.
    pub fn all_satisfy_leibniz(&self) -> bool {
        self.basis.iter().all(|d| is_derivation(&self.parent, d))
    }

    /// True when `[D_a, D_b]` lies in the span for all basis pairs.
    pub fn is_commutator_closed(&self) -> bool {
        let span = self.flat_span();
        for a in 0..self.basis.len() {
            for b in a + 1..self.basis.len() {
                let c = self.basis[a].commutator(&self.basis[b]).expect("square");
                if !span.contains(c.entries()).expect("dims") {
                    return false;
                }
            }
        }
        true
    }
}

/// Exact Leibniz check for a single matrix.
pub fn is_derivation(g: &LieAlgebra, d: &RatMatrix) -> bool {
    let n = g.dim();
    if d.rows() != n || d.cols() != n {
        return false;
    }
    let cols: Vec<Vec<Rational>> = (0..n).map(|j| d.column(j)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = d.mul_vec(&g.bracket_basis(i, j)).expect("dims");
            let a = g.bracket(&cols[i], &crate::lie::unit(n, j)).expect("dims");
            let b = g.bracket(&crate::lie::unit(n, i), &cols[j]).expect("dims");
            if lhs
                .iter()
                .zip(a.iter().zip(&b))
                .any(|(l, (a, b))| !(l - a - b).is_zero())
            {
                return false;
            }
        }
    }
    true
}

/// Solves the linear Leibniz system over the `n^2` matrix entries.
///
/// Unknown `D[a][b]` (row `a`, column `b`) sits at index `a * n + b`; for
/// each `i < j` and output coordinate `k` the row encodes
/// `sum_m c_ijm D[k][m] - sum_a D[a][i] c_ajk - sum_a D[a][j] c_iak = 0`.
pub fn derivation_algebra(g: &LieAlgebra) -> DerivationAlgebra {
    let n = g.dim();
    let mut c = vec![Rational::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for (k, v) in g.bracket_basis(i, j).into_iter().enumerate() {
                c[(i * n + j) * n + k] = v;
            }
        }
    }
    let c_at = |i: usize, j: usize, k: usize| &c[(i * n + j) * n + k];
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let mut row: Vec<(usize, Rational)> = Vec::new();
                for m in 0..n {
                    let v = c_at(i, j, m);
                    if !v.is_zero() {
                        row.push((k * n + m, v.clone()));
                    }
                }
                for a in 0..n {
                    let v = c_at(a, j, k);
                    if !v.is_zero() {
                        row.push((a * n + i, -v.clone()));
                    }
                    let v = c_at(i, a, k);
                    if !v.is_zero() {
                        row.push((a * n + j, -v.clone()));
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = sparse_nullspace(n * n, rows);
    let basis = kernel
        .basis_vectors()
        .into_iter()
        .map(|v| RatMatrix::from_entries(n, n, v).expect("n^2 entries"))
        .collect();
    DerivationAlgebra {
        parent: g.clone(),
        basis,
    }
}

/// How [`is_nil_family`] reached its answer.
#[derive(Clone, Debug, PartialEq)]
pub enum NilCertificate {
    /// `0 = W_0 ⊂ W_1 ⊂ ... ⊂ W_r = V` with every family member mapping
    /// `W_{k+1}` into `W_k`; the span is strictly triangular on this flag.
    Flag(Vec<Subspace>),
    /// A member of the span that is not nilpotent.
    Witness(RatMatrix),
    /// No common flag exists but every element is nilpotent: the trace
    /// identities `tr(X^k) = 0` were verified on a grid that determines
    /// polynomials of the relevant degree.
    TraceIdentities { grid_points: usize },
    /// The common-kernel recursion stalled at `flag` and no witness was found
    /// by search. For commutator-closed spans this means the span is not nil.
    Stalled { flag: Vec<Subspace> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NilFamilyReport {
    pub nilpotent: bool,
    pub certificate: NilCertificate,
}

const WITNESS_SEARCH_TRIES: usize = 256;
const GRID_BUDGET: usize = 20_000;

/// Decides whether every element of `span(mats)` is nilpotent.
///
/// The common-kernel flag recursion runs first: `W_{k+1}` is the set of
/// vectors sent into `W_k` by every member. Reaching the whole space is a
/// certificate. If the recursion stalls, a non-nilpotent member is searched
/// for among the generators, their pairwise sums, and seeded integer
/// combinations; small families are then settled exactly on a grid.
pub fn is_nil_family(mats: &[RatMatrix], ambient_dim: usize) -> Result<NilFamilyReport> {
    for m in mats {
        if m.rows() != ambient_dim || m.cols() != ambient_dim {
            return Err(LieError::mismatch(ambient_dim, m.rows().max(m.cols())));
        }
    }
    let n = ambient_dim;
    let mut flag = vec![Subspace::zero(n)];
    loop {
        let w = flag.last().expect("nonempty");
        if w.is_full() {
            return Ok(NilFamilyReport {
                nilpotent: true,
                certificate: NilCertificate::Flag(flag),
            });
        }
        let ann = w.annihilator();
        let mut constraints = RatMatrix::zeros(0, n);
        for m in mats {
            constraints = constraints.vstack(&ann.mul(m)?)?;
        }
        let next = nullspace(&constraints);
        if &next == w {
            break;
        }
        flag.push(next);
    }

    if let Some(witness) = search_witness(mats) {
        return Ok(NilFamilyReport {
            nilpotent: false,
            certificate: NilCertificate::Witness(witness),
        });
    }

    let m = mats.len();
    let per_axis = n + 1;
    let grid_points = per_axis.checked_pow(m as u32).filter(|&g| g <= GRID_BUDGET);
    if let Some(grid_points) = grid_points {
        for idx in 0..grid_points {
            let mut rest = idx;
            let coeffs: Vec<i64> = (0..m)
                .map(|_| {
                    let c = (rest % per_axis) as i64;
                    rest /= per_axis;
                    c
                })
                .collect();
            let x = combination(mats, &coeffs, n);
            if !x.is_nilpotent() {
                return Ok(NilFamilyReport {
                    nilpotent: false,
                    certificate: NilCertificate::Witness(x),
                });
            }
        }
        return Ok(NilFamilyReport {
            nilpotent: true,
            certificate: NilCertificate::TraceIdentities { grid_points },
        });
    }

    Ok(NilFamilyReport {
        nilpotent: false,
        certificate: NilCertificate::Stalled { flag },
    })
}

fn combination(mats: &[RatMatrix], coeffs: &[i64], n: usize) -> RatMatrix {
    let mut x = RatMatrix::zeros(n, n);
    for (m, &c) in mats.iter().zip(coeffs) {
        if c != 0 {
            x = x.add(&m.scale(&rat(c))).expect("square");
        }
    }
    x
}

fn search_witness(mats: &[RatMatrix]) -> Option<RatMatrix> {
    if let Some(m) = mats.iter().find(|m| !m.is_nilpotent()) {
        return Some(m.clone());
    }
    for a in 0..mats.len() {
        for b in a + 1..mats.len() {
            let s = mats[a].add(&mats[b]).expect("square");
            if !s.is_nilpotent() {
                return Some(s);
            }
        }
    }
    let first = mats.first()?;
    let n = first.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_d3e1);
    for _ in 0..WITNESS_SEARCH_TRIES {
        let coeffs: Vec<i64> = mats.iter().map(|_| rng.gen_range(-3..=3)).collect();
        let x = combination(mats, &coeffs, n);
        if !x.is_nilpotent() {
            return Some(x);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq)]
pub enum ContractibilityVerdict {
    /// Every derivation is nilpotent; the flag certifies it. Lie
    /// contractibility is ruled out.
    Obstructed { flag: Vec<Subspace> },
    /// Some derivation is not nilpotent, so this test says nothing.
    Inconclusive { witness: Option<RatMatrix> },
}

impl ContractibilityVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            ContractibilityVerdict::Obstructed { .. } => "obstructed",
            ContractibilityVerdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_obstructed(&self) -> bool {
        matches!(self, ContractibilityVerdict::Obstructed { .. })
    }
}

pub fn contractibility_obstruction(g: &LieAlgebra) -> ContractibilityVerdict {
    contractibility_obstruction_with(&derivation_algebra(g))
}

pub fn contractibility_obstruction_with(der: &DerivationAlgebra) -> ContractibilityVerdict {
    let report = is_nil_family(&der.basis, der.parent.dim()).expect("square derivations");
    match (report.nilpotent, report.certificate) {
        (true, NilCertificate::Flag(flag)) => ContractibilityVerdict::Obstructed { flag },
        // Derivation spans are commutator-closed, so nil implies a flag.
        (true, _) => unreachable!("nil Lie algebra of matrices always admits a flag"),
        (false, NilCertificate::Witness(w)) => {
            ContractibilityVerdict::Inconclusive { witness: Some(w) }
        }
        (false, _) => ContractibilityVerdict::Inconclusive { witness: None },
    }
}
