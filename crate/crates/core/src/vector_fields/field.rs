use nalgebra::DMatrix;
use num_traits::{One, Zero};
use serde::Serialize;

use super::poly::{coefficient_rank, CompiledPoly, Poly};
use crate::error::{LieError, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{nullspace, RatMatrix, Subspace};
use crate::rational::Rational;

/// Polynomial vector field `sum_i V_i d/dx_i` on `R^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PolyVectorField {
    components: Vec<Poly>,
}

impl PolyVectorField {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        let n = components.len();
        if let Some(bad) = components.iter().find(|p| p.nvars() != n) {
            return Err(LieError::mismatch(n, bad.nvars()));
        }
        Ok(PolyVectorField { components })
    }

    pub fn zero(n: usize) -> Self {
        PolyVectorField {
            components: vec![Poly::zero(n); n],
        }
    }

    /// The coordinate field `d/dx_{i+1}`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.components[i] = Poly::one(n);
        v
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    fn zip(&self, other: &Self, f: impl Fn(&Poly, &Poly) -> Result<Poly>) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(LieError::mismatch(self.dim(), other.dim()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| f(a, b))
            .collect::<Result<_>>()?;
        Ok(PolyVectorField { components })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, Poly::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, Poly::sub)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyVectorField {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Pointwise product `u * V` with a function.
    pub fn multiply(&self, u: &Poly) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|p| u.mul(p))
            .collect::<Result<_>>()?;
        Ok(PolyVectorField { components })
    }

    /// Directional derivative `V(f) = sum_i V_i df/dx_i`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        if f.nvars() != self.dim() {
            return Err(LieError::mismatch(self.dim(), f.nvars()));
        }
        let mut acc = Poly::zero(self.dim());
        for (i, vi) in self.components.iter().enumerate() {
            acc = acc.add(&vi.mul(&f.derivative(i))?)?;
        }
        Ok(acc)
    }

    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Poly::degree).max()
    }

    pub fn compile(&self) -> CompiledField {
        CompiledField {
            components: self.components.iter().map(Poly::to_compiled).collect(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.compile().eval(x)
    }
}

/// Floating-point evaluator for a [`PolyVectorField`].
#[derive(Clone, Debug)]
pub struct CompiledField {
    components: Vec<CompiledPoly>,
}

impl CompiledField {
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|p| p.eval(x)).collect()
    }
}

/// `[V, W]_i = sum_j V_j dW_i/dx_j - W_j dV_i/dx_j`, i.e. `(DW)V - (DV)W`.
pub fn vf_bracket(v: &PolyVectorField, w: &PolyVectorField) -> Result<PolyVectorField> {
    if v.dim() != w.dim() {
        return Err(LieError::mismatch(v.dim(), w.dim()));
    }
    let components = (0..v.dim())
        .map(|i| v.apply(&w.components[i])?.sub(&w.apply(&v.components[i])?))
        .collect::<Result<_>>()?;
    Ok(PolyVectorField { components })
}

/// `(df/dx2, -df/dx1)` for `f` in two variables.
pub fn hamiltonian_field(f: &Poly) -> Result<PolyVectorField> {
    if f.nvars() != 2 {
        return Err(LieError::InvalidInput(format!(
            "hamiltonian fields need 2 variables, got {}",
            f.nvars()
        )));
    }
    PolyVectorField::new(vec![f.derivative(1), f.derivative(0).neg()])
}

/// `df(V)` as a polynomial.
pub fn annihilation_residual(f: &Poly, v: &PolyVectorField) -> Result<Poly> {
    v.apply(f)
}

/// Whether `df(V)` vanishes identically; `false` on mismatched dimensions.
pub fn annihilation_check(f: &Poly, v: &PolyVectorField) -> bool {
    annihilation_residual(f, v).is_ok_and(|r| r.is_zero())
}

/// Whether component `i` of `V` vanishes on the hyperplane `x_{i+1} = 0`,
/// i.e. `V` is tangent to it.
pub fn tangent_to_hyperplane(v: &PolyVectorField, i: usize) -> bool {
    v.components[i].terms().keys().all(|e| e[i] > 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutingFamily {
    pub fields: Vec<PolyVectorField>,
    /// Index pairs `(j, k)`, `j < k`, whose bracket is not identically zero.
    pub noncommuting_pairs: Vec<(usize, usize)>,
    pub commute: bool,
    pub coefficient_rank: usize,
    pub independent: bool,
}

/// `L_j = u_j(f) X`. Requires `X(f) = 0`.
pub fn commuting_family(f: &Poly, x: &PolyVectorField, u: &[Poly]) -> Result<CommutingFamily> {
    let residual = annihilation_residual(f, x)?;
    if !residual.is_zero() {
        return Err(LieError::Precondition(format!(
            "the field does not annihilate f: df(X) = {residual}"
        )));
    }
    let fields = u
        .iter()
        .map(|uj| x.multiply(&Poly::compose_univariate(uj, f)?))
        .collect::<Result<Vec<_>>>()?;
    let mut noncommuting_pairs = Vec::new();
    for j in 0..fields.len() {
        for k in j + 1..fields.len() {
            if !vf_bracket(&fields[j], &fields[k])?.is_zero() {
                noncommuting_pairs.push((j, k));
            }
        }
    }
    let rank = coefficient_rank(u);
    Ok(CommutingFamily {
        fields,
        commute: noncommuting_pairs.is_empty(),
        noncommuting_pairs,
        coefficient_rank: rank,
        independent: rank == u.len(),
    })
}

/// Infinitesimal projective action of an `(n+1) x (n+1)` matrix
/// `[[M, b], [c^T, d]]` in the affine chart: `X(x) = Mx + b - x (c.x + d)`.
pub fn projective_infinitesimal(a: &RatMatrix) -> Result<PolyVectorField> {
    if !a.is_square() || a.rows() == 0 {
        return Err(LieError::InvalidInput(format!(
            "expected a nonempty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows() - 1;
    let x = |i: usize| Poly::var(n, i);
    let konst = |c: &Rational| Poly::constant(n, c.clone());
    let mut denom = konst(a.get(n, n));
    for j in 0..n {
        denom = denom.add(&x(j).scale(a.get(n, j)))?;
    }
    let mut comps = Vec::with_capacity(n);
    for i in 0..n {
        let mut p = konst(a.get(i, n));
        for j in 0..n {
            p = p.add(&x(j).scale(a.get(i, j)))?;
        }
        comps.push(p.sub(&x(i).mul(&denom)?)?);
    }
    PolyVectorField::new(comps)
}

/// Coefficient vector of a field, indexed by `(component, monomial)` over
/// the given monomial list.
fn coefficient_vector(v: &PolyVectorField, monos: &[Vec<u32>]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(v.dim() * monos.len());
    for p in v.components() {
        for m in monos {
            out.push(p.terms().get(m).cloned().unwrap_or_else(Rational::zero));
        }
    }
    out
}

fn monomials_up_to(n: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().sum();
            for k in 0..=degree - used {
                let mut f = e.clone();
                f.push(k);
                next.push(f);
            }
        }
        out = next;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectiveKernel {
    /// Kernel of `A -> X_A` on `gl(n+1)`, in row-major matrix coordinates.
    pub kernel: Subspace,
    pub is_scalars: bool,
}

/// Kernel of `A -> X_A` on all of `gl(n+1)`, by an exact rank computation.
pub fn projective_kernel(n: usize) -> Result<ProjectiveKernel> {
    let m = n + 1;
    let monos = monomials_up_to(n, 2);
    let mut columns = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let mut e = RatMatrix::zeros(m, m);
            e.set(a, b, Rational::one());
            columns.push(coefficient_vector(&projective_infinitesimal(&e)?, &monos));
        }
    }
    let rows = columns[0].len();
    let mut mat = RatMatrix::zeros(rows, m * m);
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            mat.set(r, c, v.clone());
        }
    }
    let kernel = nullspace(&mat);
    let scalars = Subspace::span(m * m, vec![RatMatrix::identity(m).entries().to_vec()])?;
    let is_scalars = kernel == scalars;
    Ok(ProjectiveKernel { kernel, is_scalars })
}

/// A linear map from a Lie algebra to vector fields, given on a basis.
#[derive(Clone, Debug)]
pub struct VFAction {
    pub algebra: LieAlgebra,
    pub images: Vec<PolyVectorField>,
}

impl VFAction {
    pub fn new(algebra: LieAlgebra, images: Vec<PolyVectorField>) -> Result<Self> {
        if images.len() != algebra.dim() {
            return Err(LieError::mismatch(algebra.dim(), images.len()));
        }
        if let Some(first) = images.first() {
            if let Some(bad) = images.iter().find(|v| v.dim() != first.dim()) {
                return Err(LieError::mismatch(first.dim(), bad.dim()));
            }
        }
        Ok(VFAction { algebra, images })
    }

    /// Space dimension, 0 for an action of the zero algebra.
    pub fn space_dim(&self) -> usize {
        self.images.first().map_or(0, PolyVectorField::dim)
    }

    /// Image of a coordinate vector.
    pub fn image(&self, x: &[Rational]) -> Result<PolyVectorField> {
        if x.len() != self.algebra.dim() {
            return Err(LieError::mismatch(self.algebra.dim(), x.len()));
        }
        let mut acc = PolyVectorField::zero(self.space_dim());
        for (c, v) in x.iter().zip(&self.images) {
            if !c.is_zero() {
                acc = acc.add(&v.scale(c))?;
            }
        }
        Ok(acc)
    }
}

/// `sl(n+1)` acting on the affine chart `R^n` of projective space.
pub fn projective_action(n: usize) -> Result<VFAction> {
    let (names, mats) = crate::catalog::sl_basis(n + 1);
    let g = LieAlgebra::from_matrix_basis(format!("sl{}", n + 1), names, &mats)?;
    let images = mats
        .iter()
        .map(projective_infinitesimal)
        .collect::<Result<_>>()?;
    VFAction::new(g, images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomomorphismReport {
    /// `+1` or `-1`; when no sign works for every pair, the one with fewer
    /// violations.
    pub sign: i32,
    pub exact: bool,
    pub violations: Vec<(usize, usize)>,
}

/// Measures `eps` with `rho[e_i, e_j] = eps [rho e_i, rho e_j]` for all
/// basis pairs, preferring `+1` when both signs work.
pub fn action_homomorphism_check(rho: &VFAction) -> Result<HomomorphismReport> {
    let n = rho.algebra.dim();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = rho.image(&rho.algebra.bracket_basis(i, j))?;
            let rhs = vf_bracket(&rho.images[i], &rho.images[j])?;
            if lhs != rhs {
                plus.push((i, j));
            }
            if lhs != rhs.scale(&-Rational::one()) {
                minus.push((i, j));
            }
        }
    }
    let (sign, violations) = if minus.len() < plus.len() {
        (-1, minus)
    } else {
        (1, plus)
    };
    Ok(HomomorphismReport {
        sign,
        exact: violations.is_empty(),
        violations,
    })
}

/// Relative singular-value threshold for [`orbit_dimension`].
pub const ORBIT_RANK_THRESHOLD: f64 = 1e-9;
/// Relative singular values below this (but above the rank threshold) mark
/// the point as close to a lower-dimensional orbit.
pub const NEAR_DEGENERATE_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub dimension: usize,
    pub singular_values: Vec<f64>,
    pub near_degenerate: bool,
}

/// Numerical rank of the matrix with rows `rho(e_i)(p)`. Singular values are
/// compared against `1e-9 * max(s_max, 1)`.
pub fn orbit_dimension(rho: &VFAction, p: &[f64]) -> Result<OrbitReport> {
    let n = rho.space_dim();
    if p.len() != n {
        return Err(LieError::mismatch(n, p.len()));
    }
    let k = rho.images.len();
    if k == 0 || n == 0 {
        return Ok(OrbitReport {
            dimension: 0,
            singular_values: vec![],
            near_degenerate: false,
        });
    }
    let mut m = DMatrix::zeros(k, n);
    for (r, v) in rho.images.iter().enumerate() {
        for (c, x) in v.eval(p).into_iter().enumerate() {
            m[(r, c)] = x;
        }
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let scale = sv.first().copied().unwrap_or(0.0).max(1.0);
    let dimension = sv
        .iter()
        .filter(|&&s| s > ORBIT_RANK_THRESHOLD * scale)
        .count();
    let near_degenerate = sv
        .iter()
        .any(|&s| s > ORBIT_RANK_THRESHOLD * scale && s <= NEAR_DEGENERATE_THRESHOLD * scale);
    Ok(OrbitReport {
        dimension,
        singular_values: sv,
        near_degenerate,
    })
}

/// `p` is fixed by every image field.
pub fn fixed_point_check(rho: &VFAction, p: &[f64]) -> Result<bool> {
    Ok(orbit_dimension(rho, p)?.dimension == 0)
}
