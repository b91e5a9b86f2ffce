use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::psd::psd_exact;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, to_f64};

/// Real symmetric matrix with exact rational entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl SymMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> BigRational) -> Result<SymMatrix> {
        let data: Vec<BigRational> = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::from_rows(n, data)
    }

    pub fn from_rows(n: usize, data: Vec<BigRational>) -> Result<SymMatrix> {
        if data.len() != n * n {
            return Err(Error::invalid(format!("{} entries for a {n}×{n} matrix", data.len())));
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::invalid(format!("matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(SymMatrix { n, data })
    }

    pub fn identity(n: usize) -> SymMatrix {
        let one = BigRational::from_integer(1.into());
        SymMatrix::from_fn(n, |i, j| if i == j { one.clone() } else { BigRational::zero() }).expect("symmetric")
    }

    pub fn zero(n: usize) -> SymMatrix {
        SymMatrix { n, data: vec![BigRational::zero(); n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub(crate) fn get_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(to_f64).collect()
    }

    pub fn trace(&self) -> BigRational {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `x²`, symmetric again.
    pub fn square(&self) -> SymMatrix {
        let n = self.n;
        let data = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (0..n).map(|l| self.get(i, l) * self.get(l, j)).sum()
            })
            .collect();
        SymMatrix { n, data }
    }

    /// `U x Uᵀ` for the permutation matrix sending basis `s` to `perm[s]`:
    /// entry `(a, b)` is `x(perm⁻¹ a, perm⁻¹ b)`.
    pub fn conjugate_by(&self, perm: &[usize]) -> SymMatrix {
        let n = self.n;
        let mut out = SymMatrix::zero(n);
        for s in 0..n {
            for t in 0..n {
                out.data[perm[s] * n + perm[t]] = self.get(s, t).clone();
            }
        }
        out
    }

    /// Largest commutator entry `|Ux − xU|` for a permutation unitary.
    pub fn commutator_norm(&self, perm: &[usize]) -> BigRational {
        let c = self.conjugate_by(perm);
        self.data.iter().zip(&c.data).map(|(a, b)| (a - b).abs()).max().unwrap_or_else(BigRational::zero)
    }
}

/// A function on the state space or a symmetric matrix over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Observable {
    Function(Vec<BigRational>),
    Matrix(SymMatrix),
}

impl Observable {
    pub fn indicator(dim: usize, states: &[usize]) -> Result<Observable> {
        let mut v = vec![BigRational::zero(); dim];
        for &s in states {
            *v.get_mut(s).ok_or_else(|| Error::invalid(format!("state {s} out of range")))? =
                BigRational::from_integer(1.into());
        }
        Ok(Observable::Function(v))
    }

    pub fn constant(dim: usize, c: BigRational) -> Observable {
        Observable::Function(vec![c; dim])
    }

    pub fn dim(&self) -> usize {
        match self {
            Observable::Function(v) => v.len(),
            Observable::Matrix(m) => m.dim(),
        }
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self, Observable::Matrix(_))
    }

    /// Nonnegative values, or PSD by exact factorization.
    pub fn is_positive(&self) -> bool {
        match self {
            Observable::Function(v) => v.iter().all(|x| !x.is_negative()),
            Observable::Matrix(m) => psd_exact(m).psd,
        }
    }

    fn zip_with(&self, other: &Observable, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Result<Observable> {
        match (self, other) {
            (Observable::Function(a), Observable::Function(b)) if a.len() == b.len() => {
                Ok(Observable::Function(a.iter().zip(b).map(|(x, y)| f(x, y)).collect()))
            }
            (Observable::Matrix(a), Observable::Matrix(b)) if a.dim() == b.dim() => Ok(Observable::Matrix(SymMatrix {
                n: a.n,
                data: a.data.iter().zip(&b.data).map(|(x, y)| f(x, y)).collect(),
            })),
            _ => Err(Error::invalid("observables of different shape")),
        }
    }

    pub fn add(&self, other: &Observable) -> Result<Observable> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Observable) -> Result<Observable> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &BigRational) -> Observable {
        match self {
            Observable::Function(v) => Observable::Function(v.iter().map(|x| x * c).collect()),
            Observable::Matrix(m) => Observable::Matrix(SymMatrix { n: m.n, data: m.data.iter().map(|x| x * c).collect() }),
        }
    }

    /// Largest absolute value (function) or largest absolute entry (matrix).
    pub fn sup_norm(&self) -> BigRational {
        let vals = match self {
            Observable::Function(v) => v,
            Observable::Matrix(m) => &m.data,
        };
        vals.iter().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
    }

    pub fn values(&self) -> Option<&[BigRational]> {
        match self {
            Observable::Function(v) => Some(v),
            Observable::Matrix(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<&SymMatrix> {
        match self {
            Observable::Function(_) => None,
            Observable::Matrix(m) => Some(m),
        }
    }
}

/// JSON form of an observable; rationals are `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    Indicator(Vec<usize>),
    Function(Vec<String>),
    Matrix(Vec<Vec<String>>),
}

impl ObservableSpec {
    pub fn build(&self, dim: usize) -> Result<Observable> {
        match self {
            ObservableSpec::Indicator(states) => Observable::indicator(dim, states),
            ObservableSpec::Function(vals) => {
                if vals.len() != dim {
                    return Err(Error::invalid(format!("function has {} values for {dim} states", vals.len())));
                }
                Ok(Observable::Function(vals.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?))
            }
            ObservableSpec::Matrix(rows) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(Error::invalid(format!("matrix must be {dim}×{dim}")));
                }
                let data = rows.iter().flatten().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                Ok(Observable::Matrix(SymMatrix::from_rows(dim, data)?))
            }
        }
    }
}
