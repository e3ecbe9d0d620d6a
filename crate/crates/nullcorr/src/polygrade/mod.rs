//! Graded pieces of `k[x_0, ..., x_{N-1}]` and the matrices of multiplication by forms.

mod form;
mod monomial;

use thiserror::Error;

pub use form::{parse_form, random_form, FormValue, COEFF_RANGE};
pub use monomial::{graded_dim, BasisCache, Exponent, MonomialBasis};

use serde::Serialize;

use crate::exactlin::{rank, Field, SparseMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("form {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: i64,
        found: i64,
    },
    #[error("expected {expected} forms, got {found}")]
    WrongFormCount { expected: usize, found: usize },
    #[error("forms live in {found} variables, expected {expected}")]
    VariableCount { expected: usize, found: usize },
    #[error("cannot parse form term {term:?}: {reason}")]
    Parse { term: String, reason: String },
    #[error("terms of degrees {0} and {1} in one form")]
    NonHomogeneous(i64, i64),
}

/// Matrix of `g -> f*g` from `S_d` to `S_{d + deg f}` in canonical monomial bases.
/// A negative source degree gives the empty 0-column matrix.
pub fn mult_map<F: Field>(f: &FormValue<F>, source_degree: i64) -> SparseMatrix<F> {
    let mut cache = BasisCache::new(f.num_vars());
    mult_map_cached(&mut cache, f, source_degree)
}

pub fn mult_map_cached<F: Field>(
    cache: &mut BasisCache,
    f: &FormValue<F>,
    source_degree: i64,
) -> SparseMatrix<F> {
    let field = f.field().clone();
    let target_degree = source_degree + f.degree() as i64;
    let src = cache.get(source_degree);
    let dst = cache.get(target_degree);
    let mut columns = Vec::with_capacity(src.len());
    let mut buf = vec![0u32; f.num_vars()];
    for mono in src.exponents() {
        let mut col: Vec<(usize, F::Elem)> = f
            .terms()
            .map(|(e, c)| {
                for (k, slot) in buf.iter_mut().enumerate() {
                    *slot = mono[k] + e[k];
                }
                (
                    dst.index_of(&buf)
                        .expect("product monomial has target degree"),
                    c.clone(),
                )
            })
            .collect();
        col.sort_by_key(|(i, _)| *i);
        columns.push(col);
    }
    SparseMatrix::from_columns(&field, dst.len(), columns)
}

/// Block row `[f_0 | f_1 | ...]` whose column space is the degree-`d` piece of the ideal.
pub fn ideal_piece<F: Field>(forms: &[FormValue<F>], d: i64) -> SparseMatrix<F> {
    let nv = forms.first().map_or(1, FormValue::num_vars);
    let field = forms.first().map(|f| f.field().clone());
    let mut cache = BasisCache::new(nv);
    let rows = graded_dim(nv, d) as usize;
    let Some(field) = field else {
        panic!("ideal_piece needs at least one form");
    };
    let mut acc = SparseMatrix::zeros(&field, rows, 0);
    for f in forms {
        let block = mult_map_cached(&mut cache, f, d - f.degree() as i64);
        acc = acc.hcat(&block).expect("all blocks land in S_d");
    }
    acc
}

/// Largest `dim S_D` the certificate will eliminate over; beyond it fill-in makes the
/// rank computation impractical and the verdict is `Inconclusive`.
pub const CERTIFICATE_ROW_BUDGET: u64 = 3000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shortfall {
    RankDeficient,
    OverBudget { rows: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BasepointCertificate {
    Certified { degree: i64 },
    Inconclusive { degree: i64, shortfall: Shortfall },
}

impl BasepointCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, BasepointCertificate::Certified { .. })
    }
}

/// Certifies that `N` forms in `N` variables have no common projective zero: the ideal
/// must fill `S_D` at `D = sum(deg - 1) + 1`, the socle degree of a complete intersection
/// plus one.
pub fn basepoint_free_certificate<F: Field>(
    forms: &[FormValue<F>],
    expected_degrees: &[i64],
) -> Result<BasepointCertificate, PolyError> {
    basepoint_free_certificate_within(forms, expected_degrees, CERTIFICATE_ROW_BUDGET)
}

pub fn basepoint_free_certificate_within<F: Field>(
    forms: &[FormValue<F>],
    expected_degrees: &[i64],
    row_budget: u64,
) -> Result<BasepointCertificate, PolyError> {
    let nv = forms.first().map_or(0, FormValue::num_vars);
    if forms.len() != nv || expected_degrees.len() != nv {
        return Err(PolyError::WrongFormCount {
            expected: nv.max(expected_degrees.len()),
            found: forms.len(),
        });
    }
    for (index, (f, &expected)) in forms.iter().zip(expected_degrees).enumerate() {
        if f.num_vars() != nv {
            return Err(PolyError::VariableCount {
                expected: nv,
                found: f.num_vars(),
            });
        }
        if f.degree() as i64 != expected {
            return Err(PolyError::DegreeMismatch {
                index,
                expected,
                found: f.degree() as i64,
            });
        }
    }
    let d: i64 = forms.iter().map(|f| f.degree() as i64 - 1).sum::<i64>() + 1;
    let full = graded_dim(nv, d);
    if full > row_budget {
        return Ok(BasepointCertificate::Inconclusive {
            degree: d,
            shortfall: Shortfall::OverBudget { rows: full },
        });
    }
    if rank(&ideal_piece(forms, d)) == full as usize {
        Ok(BasepointCertificate::Certified { degree: d })
    } else {
        Ok(BasepointCertificate::Inconclusive {
            degree: d,
            shortfall: Shortfall::RankDeficient,
        })
    }
}
