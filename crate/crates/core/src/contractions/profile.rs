use serde::Serialize;

/// Smooth step from 1 (for `t <= 0`) to 0 (for `t >= 1`), flat at both ends:
/// `sigma(t) = exp(-exp(-1/t) / (1 - t))` on `(0, 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionProfile {
    #[default]
    FlatExponential,
}

impl TransitionProfile {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            TransitionProfile::FlatExponential => {
                if t <= 0.0 {
                    1.0
                } else if t >= 1.0 {
                    0.0
                } else {
                    (-(-1.0 / t).exp() / (1.0 - t)).exp()
                }
            }
        }
    }

    /// `sigma(t)^e`, with `0^0 = 1` so exponent-zero elements are fixed.
    pub fn power(self, t: f64, e: u32) -> f64 {
        if e == 0 {
            1.0
        } else {
            self.eval(t).powi(e as i32)
        }
    }

    /// `1 - sigma(t)`: rises from 0 to 1.
    pub fn rising(self, t: f64) -> f64 {
        1.0 - self.eval(t)
    }
}

/// Integer exponents `e(i, j)` for the entry scaling `sigma^e(i,j)` of
/// upper triangular `n x n` matrices (0-based, `i <= j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentTable {
    n: usize,
    exps: Vec<u32>,
}

impl ExponentTable {
    /// `e(i, j) = j - i`.
    pub fn standard(n: usize) -> Self {
        let mut exps = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                exps[i * n + j] = (j - i) as u32;
            }
        }
        ExponentTable { n, exps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.exps[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: u32) {
        self.exps[i * self.n + j] = e;
    }

    /// `e(i, i) = 0` and `e(i, j) + e(j, k) = e(i, k)` for `i <= j <= k`,
    /// which makes `c_ij c_jk = c_ik` hold for every `t` at once.
    pub fn is_cocycle(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| self.get(i, i) == 0)
            && (0..n).all(|i| {
                (i..n).all(|j| (j..n).all(|k| self.get(i, j) + self.get(j, k) == self.get(i, k)))
            })
    }
}

pub fn cocycle_check(n: usize) -> bool {
    ExponentTable::standard(n).is_cocycle()
}
