//! Named Lie algebras with documented basis orders.
//!
//! Matrix families use the elementary matrices `T(ij)` (a single 1 in row
//! `i`, column `j`). Traceless diagonals use `H_i = T(ii) - T(i+1,i+1)`.
//!
//! | identifier | algebra | basis order |
//! |---|---|---|
//! | `ab<m>` | abelian, dim `m` | `e1..em` |
//! | `h<2k+1>` | Heisenberg | `x1..xk, y1..yk, z`, `[x_i, y_i] = z` |
//! | `st<n>` | unimodular upper triangular | `H1..H(n-1)`, then `T(ij)`, `i<j` lexicographic |
//! | `n<n>` | strict upper triangular (commutator ideal of `st<n>`) | `T(ij)`, `i<j` |
//! | `t<n>` | upper triangular | `T(11)..T(nn)`, then `T(ij)`, `i<j` |
//! | `d<n>` | traceless diagonal | `H1..H(n-1)` |
//! | `sl<n>` | special linear | `H1..H(n-1)`, then `T(ij)`, `i != j` |
//! | `N<n>` | `n<n>` plus a one-dimensional abelian summand | `T(ij)`, then `c` |
//! | `mr7` | seven-dimensional nilpotent algebra with nilpotent derivations | `X1..X7` |
//! | `stc<n>`, `slc<n>` | realification of the complex `st`/`sl` | `B, iB` per complex basis element |

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{LieError, Result};
use crate::lie::LieAlgebra;
use crate::linalg::RatMatrix;
use crate::rational::{rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogName {
    Abelian(usize),
    Heisenberg(usize),
    St(usize),
    StPrime(usize),
    T(usize),
    D(usize),
    Sl(usize),
    N(usize),
    MuellerRoemer7,
    StComplex(usize),
    SlComplex(usize),
}

impl CatalogName {
    /// Short identifier such as `st3` or `mr7`.
    pub fn id(&self) -> String {
        match *self {
            CatalogName::Abelian(m) => format!("ab{m}"),
            CatalogName::Heisenberg(d) => format!("h{d}"),
            CatalogName::St(n) => format!("st{n}"),
            CatalogName::StPrime(n) => format!("n{n}"),
            CatalogName::T(n) => format!("t{n}"),
            CatalogName::D(n) => format!("d{n}"),
            CatalogName::Sl(n) => format!("sl{n}"),
            CatalogName::N(n) => format!("N{n}"),
            CatalogName::MuellerRoemer7 => "mr7".into(),
            CatalogName::StComplex(n) => format!("stc{n}"),
            CatalogName::SlComplex(n) => format!("slc{n}"),
        }
    }

    pub fn description(&self) -> String {
        match *self {
            CatalogName::Abelian(m) => format!("abelian algebra of dimension {m}"),
            CatalogName::Heisenberg(d) => format!("Heisenberg algebra of dimension {d}"),
            CatalogName::St(n) => format!("unimodular upper triangular {n}x{n} matrices"),
            CatalogName::StPrime(n) => format!("strict upper triangular {n}x{n} matrices"),
            CatalogName::T(n) => format!("upper triangular {n}x{n} matrices"),
            CatalogName::D(n) => format!("traceless diagonal {n}x{n} matrices"),
            CatalogName::Sl(n) => format!("traceless {n}x{n} matrices"),
            CatalogName::N(n) => format!("strict upper triangular {n}x{n} matrices plus a line"),
            CatalogName::MuellerRoemer7 => {
                "7-dimensional nilpotent algebra [X1,Xk]=X(k+1), [X2,X3]=X6, [X2,X4]=X7, [X3,X4]=X7, [X2,X5]=-X7".into()
            }
            CatalogName::StComplex(n) => format!("realified complex unimodular upper triangular {n}x{n}"),
            CatalogName::SlComplex(n) => format!("realified complex traceless {n}x{n}"),
        }
    }

    /// The value `m + 1` often quoted for the derived length of `st<m>`.
    /// Reports compare it with the computed value.
    pub fn quoted_derived_length(&self) -> Option<usize> {
        match *self {
            CatalogName::St(m) => Some(m + 1),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(LieError::InvalidInput(format!("{}: {why}", self.id())));
        match *self {
            CatalogName::Heisenberg(d) if d < 3 || d % 2 == 0 => {
                bad("Heisenberg dimension must be odd and at least 3")
            }
            CatalogName::St(n)
            | CatalogName::StPrime(n)
            | CatalogName::D(n)
            | CatalogName::Sl(n)
            | CatalogName::N(n)
            | CatalogName::StComplex(n)
            | CatalogName::SlComplex(n)
                if n < 2 =>
            {
                bad("matrix size must be at least 2")
            }
            CatalogName::T(0) => bad("matrix size must be at least 1"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for CatalogName {
    type Err = LieError;

    /// Accepts short identifiers (`st3`) and long forms (`st(3)`, `st_prime(4)`).
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || LieError::UnknownAlgebra(s.to_string());
        let s = s.trim();
        if s == "mr7" || s == "mueller_roemer7" {
            return Ok(CatalogName::MuellerRoemer7);
        }
        let (head, num) = if let Some(open) = s.find('(') {
            let inner = s[open + 1..].strip_suffix(')').ok_or_else(unknown)?;
            (&s[..open], inner)
        } else {
            let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?;
            (&s[..split], &s[split..])
        };
        let n: usize = num.trim().parse().map_err(|_| unknown())?;
        let name = match head {
            "ab" | "abelian" => CatalogName::Abelian(n),
            "h" | "heisenberg" => CatalogName::Heisenberg(n),
            "st" => CatalogName::St(n),
            "n" | "st_prime" => CatalogName::StPrime(n),
            "t" => CatalogName::T(n),
            "d" => CatalogName::D(n),
            "sl" => CatalogName::Sl(n),
            "N" => CatalogName::N(n),
            "stc" | "st_complex" => CatalogName::StComplex(n),
            "slc" | "sl_complex" => CatalogName::SlComplex(n),
            _ => return Err(unknown()),
        };
        name.validate()?;
        Ok(name)
    }
}

/// Every algebra exercised by the invariant checks and listed by the CLI.
pub fn standard_catalog() -> Vec<CatalogName> {
    use CatalogName::*;
    let mut v = vec![
        Abelian(1),
        Abelian(2),
        Abelian(3),
        Heisenberg(3),
        Heisenberg(5),
    ];
    v.extend((2..=6).map(St));
    v.extend((2..=6).map(StPrime));
    v.extend((1..=4).map(T));
    v.extend((2..=4).map(D));
    v.extend((2..=4).map(Sl));
    v.extend((2..=5).map(N));
    v.push(MuellerRoemer7);
    v.extend([StComplex(2), StComplex(3), SlComplex(2)]);
    v
}

pub fn catalog(name: &CatalogName) -> Result<LieAlgebra> {
    name.validate()?;
    let id = name.id();
    match *name {
        CatalogName::Abelian(m) => Ok(LieAlgebra::abelian(id, m)),
        CatalogName::Heisenberg(d) => heisenberg(id, (d - 1) / 2),
        CatalogName::St(n) => {
            let (names, mats) = st_basis(n);
            LieAlgebra::from_matrix_basis(id, names, &mats)
        }
        CatalogName::StPrime(n) => {
            let (names, mats) = strict_upper_basis(n);
            LieAlgebra::from_matrix_basis(id, names, &mats)
        }
        CatalogName::T(n) => {
            let mut names = Vec::new();
            let mut mats = Vec::new();
            for i in 0..n {
                names.push(format!("T{}{}", i + 1, i + 1));
                mats.push(elementary(n, i, i));
            }
            let (un, um) = strict_upper_basis(n);
            names.extend(un);
            mats.extend(um);
            LieAlgebra::from_matrix_basis(id, names, &mats)
        }
        CatalogName::D(n) => {
            let (names, mats) = traceless_diagonal_basis(n);
            LieAlgebra::from_matrix_basis(id, names, &mats)
        }
        CatalogName::Sl(n) => {
            let (names, mats) = sl_basis(n);
            LieAlgebra::from_matrix_basis(id, names, &mats)
        }
        CatalogName::N(n) => {
            let g = catalog(&CatalogName::StPrime(n))?;
            let mut sum = g.direct_sum(&LieAlgebra::abelian("line", 1)).with_name(id);
            sum = rename_last(sum, "c");
            Ok(sum)
        }
        CatalogName::MuellerRoemer7 => mueller_roemer7(),
        CatalogName::StComplex(n) => {
            let (names, mats) = st_basis(n);
            realify(id, names, &mats)
        }
        CatalogName::SlComplex(n) => {
            let (names, mats) = sl_basis(n);
            realify(id, names, &mats)
        }
    }
}

fn rename_last(g: LieAlgebra, label: &str) -> LieAlgebra {
    let mut names = g.basis_names().to_vec();
    if let Some(last) = names.last_mut() {
        *last = label.to_string();
    }
    let brackets = g
        .nonzero_brackets()
        .into_iter()
        .map(|(p, v)| (p, v.to_vec()))
        .collect();
    LieAlgebra::new_unchecked(g.name().to_string(), names, brackets).expect("same table")
}

/// `T(ij)` with 0-based indices.
pub fn elementary(n: usize, i: usize, j: usize) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    m.set(i, j, Rational::one());
    m
}

pub fn traceless_diagonal_basis(n: usize) -> (Vec<String>, Vec<RatMatrix>) {
    let mut names = Vec::new();
    let mut mats = Vec::new();
    for i in 0..n - 1 {
        let mut h = elementary(n, i, i);
        h.set(i + 1, i + 1, rat(-1));
        names.push(format!("H{}", i + 1));
        mats.push(h);
    }
    (names, mats)
}

pub fn strict_upper_basis(n: usize) -> (Vec<String>, Vec<RatMatrix>) {
    let mut names = Vec::new();
    let mut mats = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            names.push(format!("T{}{}", i + 1, j + 1));
            mats.push(elementary(n, i, j));
        }
    }
    (names, mats)
}

/// Basis of `st<n>`: traceless diagonal first, then strict uppers.
pub fn st_basis(n: usize) -> (Vec<String>, Vec<RatMatrix>) {
    let (mut names, mut mats) = traceless_diagonal_basis(n);
    let (un, um) = strict_upper_basis(n);
    names.extend(un);
    mats.extend(um);
    (names, mats)
}

pub fn sl_basis(n: usize) -> (Vec<String>, Vec<RatMatrix>) {
    let (mut names, mut mats) = traceless_diagonal_basis(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                names.push(format!("T{}{}", i + 1, j + 1));
                mats.push(elementary(n, i, j));
            }
        }
    }
    (names, mats)
}

fn heisenberg(name: String, k: usize) -> Result<LieAlgebra> {
    let dim = 2 * k + 1;
    let mut names: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    names.extend((1..=k).map(|i| format!("y{i}")));
    names.push("z".into());
    let mut z = vec![Rational::zero(); dim];
    z[dim - 1] = Rational::one();
    let brackets = (0..k).map(|i| ((i, k + i), z.clone())).collect();
    LieAlgebra::new(name, names, brackets)
}

fn mueller_roemer7() -> Result<LieAlgebra> {
    let names = (1..=7).map(|i| format!("X{i}")).collect();
    // (i, j, k, coefficient), 1-based: [X_i, X_j] = coefficient * X_k.
    let mut table = Vec::new();
    for k in 2..=6 {
        table.push((1, k, k + 1, 1));
    }
    table.extend([(2, 3, 6, 1), (2, 4, 7, 1), (3, 4, 7, 1), (2, 5, 7, -1)]);
    let brackets = table
        .into_iter()
        .map(|(i, j, k, c)| {
            let mut v = vec![Rational::zero(); 7];
            v[k - 1] = rat(c);
            ((i - 1, j - 1), v)
        })
        .collect();
    LieAlgebra::new("mr7", names, brackets)
}

/// Realification of the complex span of `mats`: each complex matrix `B`
/// contributes `B` and `iB`, embedded as real `2n x 2n` block matrices.
fn realify(name: String, names: Vec<String>, mats: &[RatMatrix]) -> Result<LieAlgebra> {
    let mut real_names = Vec::new();
    let mut real_mats = Vec::new();
    for (label, m) in names.into_iter().zip(mats) {
        real_mats.push(complex_to_real(m, &RatMatrix::zeros(m.rows(), m.cols())));
        real_mats.push(complex_to_real(&RatMatrix::zeros(m.rows(), m.cols()), m));
        real_names.push(label.clone());
        real_names.push(format!("i{label}"));
    }
    LieAlgebra::from_matrix_basis(name, real_names, &real_mats)
}

/// `re + i*im` as the real matrix with 2x2 blocks `[[a, -b], [b, a]]`.
fn complex_to_real(re: &RatMatrix, im: &RatMatrix) -> RatMatrix {
    let n = re.rows();
    let mut out = RatMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let a = re.get(r, c).clone();
            let b = im.get(r, c).clone();
            out.set(2 * r, 2 * c, a.clone());
            out.set(2 * r + 1, 2 * c + 1, a);
            out.set(2 * r, 2 * c + 1, -b.clone());
            out.set(2 * r + 1, 2 * c, b);
        }
    }
    out
}
