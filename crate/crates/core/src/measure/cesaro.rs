//! Densities of convolution powers restricted to an evaluation set.
//!
//! Only powers `ω^{(0)}, …, ω^{(J-1)}` are materialized; `ω^{(J)}` is
//! evaluated pointwise on the evaluation set, which keeps the largest support
//! out of memory.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{convolve, FinSupMeasure, Truncation};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::set::FiniteSubset;

/// `(μ ∗ ν)(g)` for each `g` in `eval`, without building `μ ∗ ν`.
pub fn convolve_on(mu: &FinSupMeasure, nu: &FinSupMeasure, eval: &[GroupElement]) -> Result<Vec<BigRational>> {
    if mu.kind() != nu.kind() {
        return Err(Error::GroupMismatch { left: mu.kind(), right: nu.kind() });
    }
    let denom = mu.denom() * nu.denom();
    let mut out = Vec::with_capacity(eval.len());
    for g in eval {
        let mut acc = BigInt::zero();
        if mu.support_len() <= nu.support_len() {
            // Σ_a μ(a) ν(a⁻¹g)
            for (a, na) in &mu.atoms {
                if let Some(nb) = nu.numerator(&a.inv()?.mul(g)?) {
                    acc += na * nb;
                }
            }
        } else {
            // Σ_b μ(g b⁻¹) ν(b)
            for (b, nb) in &nu.atoms {
                if let Some(na) = mu.numerator(&g.mul(&b.inv()?)?) {
                    acc += na * nb;
                }
            }
        }
        out.push(BigRational::new(acc, denom.clone()));
    }
    Ok(out)
}

/// `values[j][i] = dω^{(j)}/dλ(eval[i])` for `j = 0..=J`.
#[derive(Debug, Clone)]
pub struct PowerDensities {
    /// Evaluation points in canonical encoding order.
    pub eval: Vec<GroupElement>,
    pub values: Vec<Vec<BigRational>>,
    pub truncation: Truncation,
}

impl PowerDensities {
    pub fn is_exact(&self) -> bool {
        self.truncation == Truncation::Exact
    }
}

fn sorted_eval(eval: &FiniteSubset) -> Vec<GroupElement> {
    eval.sorted().into_iter().cloned().collect()
}

pub fn power_densities(
    omega: &FinSupMeasure,
    j_max: usize,
    eval: &FiniteSubset,
    cap: Option<usize>,
) -> Result<PowerDensities> {
    if eval.kind() != omega.kind() {
        return Err(Error::GroupMismatch { left: omega.kind(), right: eval.kind() });
    }
    let points = sorted_eval(eval);
    let mut values = Vec::with_capacity(j_max + 1);
    let mut current = FinSupMeasure::identity(omega.kind());
    values.push(points.iter().map(|g| current.mass(g)).collect());
    let mut truncation = Truncation::Exact;
    for j in 1..=j_max {
        if j == j_max {
            values.push(convolve_on(&current, omega, &points)?);
            truncation = truncation.join(current.truncation()).join(omega.truncation());
        } else {
            current = convolve(&current, omega, cap)?;
            truncation = truncation.join(current.truncation());
            values.push(points.iter().map(|g| current.mass(g)).collect());
        }
    }
    Ok(PowerDensities { eval: points, values, truncation })
}

/// Cesàro density `(1/N) Σ_{j<N} dω^{(j)}/dλ` on an evaluation set.
#[derive(Debug, Clone)]
pub struct CesaroDensity {
    pub eval: Vec<GroupElement>,
    pub values: Vec<BigRational>,
    /// `MassDropped` means each value is a lower bound of the exact one.
    pub truncation: Truncation,
}

impl CesaroDensity {
    pub fn get(&self, g: &GroupElement) -> Option<&BigRational> {
        self.eval.iter().position(|h| h == g).map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &BigRational)> {
        self.eval.iter().zip(&self.values)
    }

    pub fn min(&self) -> Option<(&GroupElement, &BigRational)> {
        self.iter().min_by(|a, b| a.1.cmp(b.1))
    }
}

pub fn cesaro_density(
    omega: &FinSupMeasure,
    n: u64,
    eval: &FiniteSubset,
    cap: Option<usize>,
) -> Result<CesaroDensity> {
    if n == 0 {
        return Err(Error::invalid("Cesàro length must be positive"));
    }
    if eval.is_empty() {
        return Err(Error::invalid("empty evaluation set"));
    }
    let pd = power_densities(omega, (n - 1) as usize, eval, cap)?;
    let scale = BigRational::from_integer(BigInt::from(n));
    let values = (0..pd.eval.len())
        .map(|i| {
            let s: BigRational = pd.values.iter().map(|row| &row[i]).sum();
            s / &scale
        })
        .collect();
    Ok(CesaroDensity { eval: pd.eval, values, truncation: pd.truncation })
}
