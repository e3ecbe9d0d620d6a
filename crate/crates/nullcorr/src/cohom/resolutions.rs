//! Koszul-type resolutions of exterior powers of `Q`, `Q*` and `N*` by split bundles, and
//! the Euler characteristics they give.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::expr::SheafExpr;
use crate::monad::Weights;
use crate::splitcalc::{ext_pow, hzeta_weights, split_euler, WeightList};

/// What is being resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolutionKind {
    /// `Λ^q Q` from the surjection `H -> Q`, for `1 ≤ q ≤ 2n+1`.
    Quotient,
    /// `Λ^q Q*` from the surjection `H(ζ) -> O(γ+ζ)`, for `1 ≤ q < 2n+1`.
    DualQuotient,
    /// `Λ^q N*` from `0 -> O(-γ) -> Q* -> N* -> 0`, for `1 ≤ q ≤ 2n`. Its terms are
    /// not split, so it only feeds Euler characteristics.
    DualBundle,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("{kind:?} resolution needs {lo} <= q <= {hi}, got {q}")]
    Range {
        kind: ResolutionKind,
        q: usize,
        lo: usize,
        hi: usize,
    },
    #[error("the {0:?} resolution has non-split terms")]
    NotSplit(ResolutionKind),
}

/// One term of a resolution, placed in cohomological degree `degree ≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionTerm {
    pub degree: i64,
    /// Exterior power of `H` used, before the twist.
    pub power: usize,
    pub twist: i64,
    pub weights: WeightList,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitResolution {
    pub kind: ResolutionKind,
    pub q: usize,
    /// From the leftmost term to the one mapping onto the resolved bundle.
    pub terms: Vec<ResolutionTerm>,
}

impl SplitResolution {
    /// The bundle being resolved.
    pub fn target(&self) -> SheafExpr {
        target_expr(self.kind, self.q)
    }

    /// `χ(target(t))`.
    pub fn euler(&self, t: i64) -> BigInt {
        self.terms
            .iter()
            .map(|term| {
                let chi = split_euler(&term.weights, t);
                if term.degree.rem_euclid(2) == 1 {
                    -chi
                } else {
                    chi
                }
            })
            .sum()
    }
}

pub fn target_expr(kind: ResolutionKind, q: usize) -> SheafExpr {
    match kind {
        ResolutionKind::Quotient => SheafExpr::Q.ext_pow(q),
        ResolutionKind::DualQuotient => SheafExpr::Q.dual().ext_pow(q),
        ResolutionKind::DualBundle => SheafExpr::N.dual().ext_pow(q),
    }
}

fn range(kind: ResolutionKind, n: usize) -> (usize, usize) {
    match kind {
        ResolutionKind::Quotient => (1, 2 * n + 1),
        ResolutionKind::DualQuotient | ResolutionKind::DualBundle => (1, 2 * n),
    }
}

fn check(kind: ResolutionKind, w: &Weights, q: usize) -> Result<(), ResolutionError> {
    let (lo, hi) = range(kind, w.n());
    if q < lo || q > hi {
        return Err(ResolutionError::Range { kind, q, lo, hi });
    }
    Ok(())
}

pub fn resolution_split(
    w: &Weights,
    kind: ResolutionKind,
    q: usize,
) -> Result<SplitResolution, ResolutionError> {
    check(kind, w, q)?;
    let h = hzeta_weights(w);
    let (gamma, zeta) = (w.gamma(), w.zeta() as i64);
    let term = |power: usize, twist: i64, degree: i64| ResolutionTerm {
        degree,
        power,
        twist,
        weights: ext_pow(&h, power).twist(twist),
    };
    let terms = match kind {
        ResolutionKind::Quotient => (0..=q)
            .map(|k| term(k, -(gamma + zeta) * (q - k) as i64, k as i64 - q as i64))
            .collect(),
        ResolutionKind::DualQuotient => (q + 1..=w.num_vars())
            .rev()
            .map(|j| {
                term(
                    j,
                    -gamma * (j - q) as i64 + zeta * q as i64,
                    -((j - q - 1) as i64),
                )
            })
            .collect(),
        ResolutionKind::DualBundle => return Err(ResolutionError::NotSplit(kind)),
    };
    Ok(SplitResolution { kind, q, terms })
}

/// `χ(Λ^q Q(t))`, `χ(Λ^q Q*(t))` or `χ(Λ^q N*(t))` by additivity along the resolution.
/// The `Λ^k Q*` terms of the last one are themselves evaluated through their resolutions.
pub fn euler_from_resolution(
    w: &Weights,
    kind: ResolutionKind,
    q: usize,
    t: i64,
) -> Result<BigInt, ResolutionError> {
    check(kind, w, q)?;
    match kind {
        ResolutionKind::Quotient | ResolutionKind::DualQuotient => {
            Ok(resolution_split(w, kind, q)?.euler(t))
        }
        ResolutionKind::DualBundle => {
            let gamma = w.gamma();
            let mut chi = BigInt::from(0);
            for k in 0..=q {
                let shift = t - gamma * (q - k) as i64;
                let term = if k == 0 {
                    split_euler(&WeightList::new(w.proj_dim(), vec![0]), shift)
                } else {
                    euler_from_resolution(w, ResolutionKind::DualQuotient, k, shift)?
                };
                if (q - k) % 2 == 1 {
                    chi -= term;
                } else {
                    chi += term;
                }
            }
            Ok(chi)
        }
    }
}
