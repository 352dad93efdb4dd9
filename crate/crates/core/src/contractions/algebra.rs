use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};
use serde::Serialize;

use super::profile::TransitionProfile;
use crate::catalog::{catalog, CatalogName};
use crate::error::{LieError, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{solve, RatMatrix, Subspace};
use crate::rational::{to_f64, Rational};
use crate::sampling::{random_rational, sample_rng};

/// Symbolic description of a deformation family.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeformationShape {
    /// `theta_t(e_k) = sigma(t)^{exponents[k]} e_k`.
    Scaling { exponents: Vec<u32> },
    /// `(outer # inner)_t = inner_{2t}` for `t <= 1/2` and
    /// `outer_{2t-1} ∘ inner_1` for `t >= 1/2`.
    Concatenation {
        outer: Box<AlgebraDeformation>,
        inner: Box<AlgebraDeformation>,
        #[serde(skip)]
        inclusion: RatMatrix,
        #[serde(skip)]
        retraction: RatMatrix,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraDeformation {
    #[serde(rename = "algebra", serialize_with = "serialize_name")]
    pub parent: LieAlgebra,
    pub profile: TransitionProfile,
    pub shape: DeformationShape,
}

fn serialize_name<S: serde::Serializer>(
    g: &LieAlgebra,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(g.name())
}

impl AlgebraDeformation {
    /// Diagonal scaling family; the exponents are not checked for the
    /// endomorphism law here (see [`AlgebraDeformation::endomorphism_exact`]).
    pub fn scaling(parent: LieAlgebra, exponents: Vec<u32>) -> Result<Self> {
        if exponents.len() != parent.dim() {
            return Err(LieError::mismatch(parent.dim(), exponents.len()));
        }
        Ok(AlgebraDeformation {
            parent,
            profile: TransitionProfile::FlatExponential,
            shape: DeformationShape::Scaling { exponents },
        })
    }

    pub fn dim(&self) -> usize {
        self.parent.dim()
    }

    /// `theta_t` as a matrix acting on coordinate columns.
    pub fn eval(&self, t: f64) -> DMatrix<f64> {
        match &self.shape {
            DeformationShape::Scaling { exponents } => {
                DMatrix::from_diagonal(&DVector::from_iterator(
                    exponents.len(),
                    exponents.iter().map(|&e| self.profile.power(t, e)),
                ))
            }
            DeformationShape::Concatenation {
                outer,
                inner,
                inclusion,
                retraction,
            } => {
                if t <= 0.5 {
                    inner.eval(2.0 * t)
                } else {
                    inclusion.to_f64() * outer.eval(2.0 * t - 1.0) * retraction.to_f64()
                }
            }
        }
    }

    /// Exact value of `theta_t` outside `(0, 1)`, where the profile is 0 or 1.
    pub fn eval_exact(&self, t: f64) -> Option<RatMatrix> {
        if t > 0.0 && t < 1.0 {
            return None;
        }
        match &self.shape {
            DeformationShape::Scaling { exponents } => {
                let n = exponents.len();
                let mut m = RatMatrix::zeros(n, n);
                for (k, &e) in exponents.iter().enumerate() {
                    if t <= 0.0 || e == 0 {
                        m.set(k, k, Rational::one());
                    }
                }
                Some(m)
            }
            DeformationShape::Concatenation {
                outer,
                inner,
                inclusion,
                retraction,
            } => {
                if t <= 0.0 {
                    inner.eval_exact(2.0 * t)
                } else {
                    let o = outer.eval_exact(2.0 * t - 1.0)?;
                    Some(inclusion.mul(&o).ok()?.mul(retraction).ok()?)
                }
            }
        }
    }

    /// Exact endomorphism test. For a scaling family `[e_i, e_j]` may only
    /// involve `e_k` with `exp(k) = exp(i) + exp(j)`; a concatenation needs
    /// both parts to pass and its inclusion to be a homomorphism.
    pub fn endomorphism_exact(&self) -> bool {
        match &self.shape {
            DeformationShape::Scaling { exponents } => self
                .parent
                .nonzero_brackets()
                .into_iter()
                .all(|((i, j), v)| {
                    v.iter()
                        .enumerate()
                        .all(|(k, c)| c.is_zero() || exponents[k] == exponents[i] + exponents[j])
                }),
            DeformationShape::Concatenation {
                outer,
                inner,
                inclusion,
                ..
            } => {
                outer.endomorphism_exact()
                    && inner.endomorphism_exact()
                    && is_homomorphism(&outer.parent, &self.parent, inclusion)
            }
        }
    }

    /// Junction times where the piecewise formula switches.
    pub fn junctions(&self) -> Vec<f64> {
        match &self.shape {
            DeformationShape::Scaling { .. } => vec![0.0, 1.0],
            DeformationShape::Concatenation { .. } => vec![0.0, 0.5, 1.0],
        }
    }
}

/// Exact check that `phi : h -> g` (columns are images of the basis of `h`)
/// satisfies `phi[x, y] = [phi x, phi y]` on basis pairs.
fn is_homomorphism(h: &LieAlgebra, g: &LieAlgebra, phi: &RatMatrix) -> bool {
    let cols: Vec<Vec<Rational>> = (0..h.dim()).map(|j| phi.column(j)).collect();
    for i in 0..h.dim() {
        for j in i + 1..h.dim() {
            let lhs = phi.mul_vec(&h.bracket_basis(i, j)).expect("dims");
            let rhs = g.bracket(&cols[i], &cols[j]).expect("dims");
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Deformation of `st(n)` fixing the diagonal and scaling `T(ij)` by
/// `sigma^{j-i}`; `theta_1` is the projection onto the diagonal.
pub fn st_deformation(n: usize) -> Result<AlgebraDeformation> {
    if n < 2 {
        return Err(LieError::InvalidInput("st deformation needs n >= 2".into()));
    }
    let g = catalog(&CatalogName::St(n))?;
    let mut exponents = vec![0u32; n - 1];
    exponents.extend(upper_exponents(n));
    AlgebraDeformation::scaling(g, exponents)
}

/// The restriction of [`st_deformation`] to the strict upper triangular
/// ideal; a Lie contraction.
pub fn st_prime_deformation(n: usize) -> Result<AlgebraDeformation> {
    if n < 2 {
        return Err(LieError::InvalidInput(
            "st' deformation needs n >= 2".into(),
        ));
    }
    let g = catalog(&CatalogName::StPrime(n))?;
    AlgebraDeformation::scaling(g, upper_exponents(n))
}

fn upper_exponents(n: usize) -> Vec<u32> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push((j - i) as u32);
        }
    }
    v
}

/// Scales every basis element of the traceless diagonal algebra by `sigma`.
pub fn diag_contraction(n: usize) -> Result<AlgebraDeformation> {
    if n < 2 {
        return Err(LieError::InvalidInput(
            "diagonal contraction needs n >= 2".into(),
        ));
    }
    let g = catalog(&CatalogName::D(n))?;
    AlgebraDeformation::scaling(g, vec![1; n - 1])
}

/// Concatenation `outer # inner`.
///
/// `inclusion` has one column per basis element of `outer.parent`, giving
/// its coordinates in `inner.parent`. `inner` must be a scaling family that
/// retracts into the included subalgebra: `inner_1` lands in it and every
/// `inner_t` preserves it.
pub fn concatenate(
    outer: AlgebraDeformation,
    inner: AlgebraDeformation,
    inclusion: RatMatrix,
) -> Result<AlgebraDeformation> {
    let (g, h) = (&inner.parent, &outer.parent);
    if inclusion.rows() != g.dim() || inclusion.cols() != h.dim() {
        return Err(LieError::mismatch(
            g.dim() * h.dim(),
            inclusion.rows() * inclusion.cols(),
        ));
    }
    if inclusion.rank() != h.dim() {
        return Err(LieError::Precondition("inclusion is not injective".into()));
    }
    if !is_homomorphism(h, g, &inclusion) {
        return Err(LieError::Precondition(
            "inclusion does not respect brackets".into(),
        ));
    }
    let DeformationShape::Scaling { exponents } = &inner.shape else {
        return Err(LieError::Precondition(
            "the retraction must be a scaling family".into(),
        ));
    };
    let image = Subspace::row_space(&inclusion.transpose());

    // Preserved by every inner_t iff the image splits along exponent classes.
    let mut classes: Vec<u32> = exponents.clone();
    classes.sort_unstable();
    classes.dedup();
    let mut graded_dim = 0;
    for e in classes {
        let axes: Vec<Vec<Rational>> = exponents
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == e)
            .map(|(k, _)| crate::lie::unit(g.dim(), k))
            .collect();
        let class = Subspace::span(g.dim(), axes)?;
        graded_dim += image.intersection(&class)?.dim();
    }
    if graded_dim != image.dim() {
        return Err(LieError::Precondition(
            "retraction does not preserve the subalgebra".into(),
        ));
    }

    let end = inner.eval_exact(1.0).expect("t = 1 is exact");
    let end_image = Subspace::row_space(&end.transpose());
    if !image.contains_subspace(&end_image)? {
        return Err(LieError::Precondition(
            "retraction endpoint leaves the subalgebra".into(),
        ));
    }
    // retraction = coordinates (in the basis of h) of inner_1 applied to each e_k.
    let mut retraction = RatMatrix::zeros(h.dim(), g.dim());
    for k in 0..g.dim() {
        let col = end.column(k);
        let coords = solve(&inclusion, &col)?.ok_or_else(|| {
            LieError::Precondition("retraction endpoint leaves the subalgebra".into())
        })?;
        for (r, v) in coords.into_iter().enumerate() {
            retraction.set(r, k, v);
        }
    }
    let parent = inner.parent.clone();
    Ok(AlgebraDeformation {
        parent,
        profile: inner.profile,
        shape: DeformationShape::Concatenation {
            outer: Box::new(outer),
            inner: Box::new(inner),
            inclusion,
            retraction,
        },
    })
}

/// `diag_contraction(n) # st_deformation(n)`, a Lie contraction of `st(n)`.
pub fn st_contraction(n: usize) -> Result<AlgebraDeformation> {
    let inner = st_deformation(n)?;
    let outer = diag_contraction(n)?;
    let dim = inner.dim();
    let mut inclusion = RatMatrix::zeros(dim, n - 1);
    for k in 0..n - 1 {
        inclusion.set(k, k, Rational::one());
    }
    concatenate(outer, inner, inclusion)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeformationReport {
    pub algebra: String,
    /// `theta_t` equals the identity at `t = -1` and `t = 0`, exactly.
    pub d1_exact: bool,
    /// `theta_1 = theta_2`, exactly.
    pub d2_exact: bool,
    /// Largest one-sided difference quotient (orders 1 to 3) at the
    /// junction times; flatness makes these vanish.
    pub smoothness_max_quotient: f64,
    pub endomorphism_exact: bool,
    pub endomorphism_residual: f64,
    /// `theta_1` is the zero map, exactly.
    pub contraction: bool,
    pub samples: usize,
    pub seed: u64,
}

impl DeformationReport {
    pub fn passes(&self, endomorphism_tol: f64, smoothness_tol: f64) -> bool {
        self.d1_exact
            && self.d2_exact
            && self.endomorphism_exact
            && self.endomorphism_residual <= endomorphism_tol
            && self.smoothness_max_quotient <= smoothness_tol
    }
}

fn bracket_f64(g: &LieAlgebra, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let n = g.dim();
    let mut out = DVector::zeros(n);
    for ((i, j), v) in g.nonzero_brackets() {
        let coeff = x[i] * y[j] - x[j] * y[i];
        if coeff == 0.0 {
            continue;
        }
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out[k] += coeff * to_f64(c);
            }
        }
    }
    out
}

const SMOOTHNESS_STEP: f64 = 1e-3;

/// D1/D2 exactly, D3 by difference quotients at the junctions, and the
/// endomorphism law on seeded random rational pairs at `t = 0.1, ..., 0.9`
/// plus one random `t` per sample.
pub fn verify_deformation(d: &AlgebraDeformation, samples: usize, seed: u64) -> DeformationReport {
    let n = d.dim();
    let id = RatMatrix::identity(n);
    let d1_exact = [-1.0, 0.0]
        .iter()
        .all(|&t| d.eval_exact(t).as_ref() == Some(&id));
    let end = d.eval_exact(1.0).expect("exact endpoint");
    let d2_exact = d.eval_exact(2.0).as_ref() == Some(&end);
    let contraction = end.is_zero();

    let h = SMOOTHNESS_STEP;
    let mut smooth: f64 = 0.0;
    for t0 in d.junctions() {
        for dir in [-1.0, 1.0] {
            let f = |k: f64| d.eval(t0 + dir * k * h);
            let (f0, f1, f2, f3) = (f(0.0), f(1.0), f(2.0), f(3.0));
            let q1 = (&f1 - &f0).amax() / h;
            let q2 = (&f2 - &f1 * 2.0 + &f0).amax() / (h * h);
            let q3 = (&f3 - &f2 * 3.0 + &f1 * 3.0 - &f0).amax() / (h * h * h);
            smooth = smooth.max(q1).max(q2).max(q3);
        }
    }

    let mut residual: f64 = 0.0;
    for s in 0..samples {
        let mut rng = sample_rng(seed, 11, s as u64);
        let x: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, 5)).collect();
        let y: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, 5)).collect();
        let xy = d.parent.bracket(&x, &y).expect("dims");
        let to_vec = |v: &[Rational]| DVector::from_iterator(n, v.iter().map(to_f64));
        let (xf, yf, xyf) = (to_vec(&x), to_vec(&y), to_vec(&xy));
        let mut times: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
        times.push(rand::Rng::gen_range(&mut rng, 0.0..1.0));
        for t in times {
            let m = d.eval(t);
            let lhs = &m * &xyf;
            let rhs = bracket_f64(&d.parent, &(&m * &xf), &(&m * &yf));
            residual = residual.max((lhs - rhs).amax());
        }
    }

    DeformationReport {
        algebra: d.parent.name().to_string(),
        d1_exact,
        d2_exact,
        smoothness_max_quotient: smooth,
        endomorphism_exact: d.endomorphism_exact(),
        endomorphism_residual: residual,
        contraction,
        samples,
        seed,
    }
}
