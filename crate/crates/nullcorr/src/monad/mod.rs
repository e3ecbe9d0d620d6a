//! The weighted null-correlation monad `O(-γ-ζ) -B-> H_ζ -A-> O(γ)` on `P^{2n+1}`: weights,
//! forms, the matrices `A`, `B`, `J`, and the numerical invariants of its cohomology bundle.

mod weights;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use weights::Weights;

use crate::exactlin::Field;
use crate::polygrade::{
    basepoint_free_certificate, random_form, BasepointCertificate, Exponent, FormValue, PolyError,
};
use crate::splitcalc::{euler_line, hzeta_weights, split_euler};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonadError {
    #[error("weight constraint violated: {0}")]
    WeightConstraintViolation(String),
    #[error("{form} has degree {found}, expected {expected}")]
    DegreeMismatch {
        form: String,
        expected: i64,
        found: i64,
    },
    #[error("expected {expected} forms {which}, got {found}")]
    WrongFormCount {
        which: char,
        expected: usize,
        found: usize,
    },
    #[error("{form} lives in {found} variables, expected {expected}")]
    VariableCount {
        form: String,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug)]
pub enum FormSource<F: Field> {
    SeededRandom(u64),
    Explicit {
        f: Vec<FormValue<F>>,
        g: Vec<FormValue<F>>,
    },
}

/// Monad data over an exact field. `a[k]` is the map from summand `k` of `H_ζ` to `O(γ)`,
/// `b[k]` the map from `O(-γ-ζ)` into summand `k`. Summand `k ≤ n` is `O(λ_{n-k})` and
/// summand `n+1+i` is `O(-λ_i-ζ)`.
#[derive(Clone, Debug)]
pub struct MonadData<F: Field> {
    pub weights: Weights,
    pub f: Vec<FormValue<F>>,
    pub g: Vec<FormValue<F>>,
    pub a: Vec<FormValue<F>>,
    pub b: Vec<FormValue<F>>,
    pub j: Vec<Vec<i64>>,
}

impl<F: Field> MonadData<F> {
    pub fn field(&self) -> &F {
        self.f[0].field()
    }
    pub fn num_vars(&self) -> usize {
        self.weights.num_vars()
    }
    /// Twists of the summands of `H_ζ` in matrix order.
    pub fn middle_weights(&self) -> Vec<i64> {
        let w = &self.weights;
        let n = w.n();
        let lam = w.lambda();
        (0..=n)
            .map(|k| lam[n - k])
            .chain(lam.iter().map(|l| -l - w.zeta() as i64))
            .collect()
    }
    /// Twist of `O(-γ-ζ)`.
    pub fn left_weight(&self) -> i64 {
        -self.weights.gamma() - self.weights.zeta() as i64
    }
    /// Twist of `O(γ)`.
    pub fn right_weight(&self) -> i64 {
        self.weights.gamma()
    }
}

/// Antidiagonal symplectic matrix: `J[r][2n+1-r]` is `-1` for `r ≤ n` and `+1` above.
pub fn symplectic_j(n: usize) -> Vec<Vec<i64>> {
    let size = 2 * n + 2;
    let mut j = vec![vec![0; size]; size];
    for (r, row) in j.iter_mut().enumerate() {
        row[size - 1 - r] = if r <= n { -1 } else { 1 };
    }
    j
}

/// `f_i = x_i`, `g_i = x_{n+1+i}`: the classical null-correlation monad when all degrees are 1.
pub fn coordinate_forms<F: Field>(field: &F, n: usize) -> (Vec<FormValue<F>>, Vec<FormValue<F>>) {
    let nv = 2 * n + 2;
    let f = (0..=n).map(|i| FormValue::variable(field, nv, i)).collect();
    let g = (0..=n)
        .map(|i| FormValue::variable(field, nv, n + 1 + i))
        .collect();
    (f, g)
}

pub fn build_monad<F: Field>(
    field: &F,
    w: &Weights,
    source: FormSource<F>,
) -> Result<MonadData<F>, MonadError> {
    let n = w.n();
    let nv = w.num_vars();
    let (f, g) = match source {
        FormSource::SeededRandom(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f: Vec<_> = (0..=n)
                .map(|i| random_form(field, nv, w.deg_f(i) as u32, &mut rng))
                .collect();
            let g: Vec<_> = (0..=n)
                .map(|i| random_form(field, nv, w.deg_g(i) as u32, &mut rng))
                .collect();
            (f, g)
        }
        FormSource::Explicit { f, g } => (f, g),
    };
    for (which, forms) in [('f', &f), ('g', &g)] {
        if forms.len() != n + 1 {
            return Err(MonadError::WrongFormCount {
                which,
                expected: n + 1,
                found: forms.len(),
            });
        }
        for (i, form) in forms.iter().enumerate() {
            let expected = if which == 'f' { w.deg_f(i) } else { w.deg_g(i) };
            let name = format!("{which}_{i}");
            if form.num_vars() != nv {
                return Err(MonadError::VariableCount {
                    form: name,
                    expected: nv,
                    found: form.num_vars(),
                });
            }
            if form.degree() as i64 != expected {
                return Err(MonadError::DegreeMismatch {
                    form: name,
                    expected,
                    found: form.degree() as i64,
                });
            }
        }
    }
    let a = g
        .iter()
        .rev()
        .cloned()
        .chain(f.iter().rev().map(FormValue::neg))
        .collect();
    let b = f.iter().chain(g.iter()).cloned().collect();
    Ok(MonadData {
        weights: w.clone(),
        f,
        g,
        a,
        b,
        j: symplectic_j(n),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub basepoint: BasepointCertificate,
}

impl ValidationReport {
    pub fn identities_hold(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
    pub fn all_pass(&self) -> bool {
        self.identities_hold() && self.basepoint.is_certified()
    }
}

/// Sum of products of forms, not necessarily homogeneous.
struct PolySum<F: Field> {
    field: F,
    terms: BTreeMap<Exponent, F::Elem>,
}

impl<F: Field> PolySum<F> {
    fn new(field: &F) -> Self {
        PolySum {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    fn add_product(&mut self, sign: i64, x: &FormValue<F>, y: &FormValue<F>) {
        let s = self.field.from_i64(sign);
        for (e, c) in x.mul(y).terms() {
            let v = self.field.mul(c, &s);
            let slot = self
                .terms
                .entry(e.clone())
                .or_insert_with(|| self.field.zero());
            *slot = self.field.add(slot, &v);
        }
    }

    fn add_form(&mut self, sign: i64, x: &FormValue<F>) {
        let s = self.field.from_i64(sign);
        for (e, c) in x.terms() {
            let v = self.field.mul(c, &s);
            let slot = self
                .terms
                .entry(e.clone())
                .or_insert_with(|| self.field.zero());
            *slot = self.field.add(slot, &v);
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.values().all(|c| self.field.is_zero(c))
    }
}

pub fn validate_monad<F: Field>(m: &MonadData<F>) -> Result<ValidationReport, MonadError> {
    let field = m.field();
    let size = m.a.len();
    let mut checks = Vec::new();

    let mut ab = PolySum::new(field);
    for (x, y) in m.a.iter().zip(&m.b) {
        ab.add_product(1, x, y);
    }
    checks.push(Check {
        name: "A.B = 0",
        passed: m.a.len() == m.b.len() && ab.is_zero(),
        detail: format!(
            "{} nonzero terms",
            ab.terms.values().filter(|c| !field.is_zero(c)).count()
        ),
    });

    // (A.J)_c = Σ_r A_r J_rc; transpose(B) + A.J must vanish entrywise
    let bad_b: Vec<usize> = (0..size)
        .filter(|&c| {
            let mut s = PolySum::new(field);
            s.add_form(1, &m.b[c]);
            for r in 0..size {
                if m.j[r][c] != 0 {
                    s.add_form(m.j[r][c], &m.a[r]);
                }
            }
            !s.is_zero()
        })
        .collect();
    checks.push(Check {
        name: "transpose(B) = -A.J",
        passed: bad_b.is_empty(),
        detail: format!("failing entries {bad_b:?}"),
    });

    let bad_a: Vec<usize> = (0..size)
        .filter(|&r| {
            let mut s = PolySum::new(field);
            s.add_form(1, &m.a[r]);
            for c in 0..size {
                if m.j[r][c] != 0 {
                    s.add_form(m.j[r][c], &m.b[c]);
                }
            }
            !s.is_zero()
        })
        .collect();
    checks.push(Check {
        name: "transpose(A) = -J.B",
        passed: bad_a.is_empty(),
        detail: format!("failing entries {bad_a:?}"),
    });

    let j2_ok = (0..size).all(|r| {
        (0..size).all(|c| {
            let v: i64 = (0..size).map(|k| m.j[r][k] * m.j[k][c]).sum();
            v == if r == c { -1 } else { 0 }
        })
    });
    checks.push(Check {
        name: "J^2 = -I",
        passed: j2_ok,
        detail: String::new(),
    });

    let forms: Vec<FormValue<F>> = m.f.iter().chain(&m.g).cloned().collect();
    let degrees: Vec<i64> = forms.iter().map(|x| x.degree() as i64).collect();
    let basepoint = basepoint_free_certificate(&forms, &degrees)?;
    Ok(ValidationReport { checks, basepoint })
}

/// `(c_1, c_2)` of the cohomology bundle: `c_1 = -ζn` and
/// `c_2 = γ² - Σλ² + ζ(γ + ζn(n-1)/2 - Σλ)`.
pub fn chern(w: &Weights) -> (i64, i64) {
    let n = w.n() as i64;
    let z = w.zeta() as i64;
    let g = w.gamma();
    let sum: i64 = w.lambda().iter().sum();
    let sq: i64 = w.lambda().iter().map(|l| l * l).sum();
    (-z * n, g * g - sq + z * (g + z * n * (n - 1) / 2 - sum))
}

/// Total Chern class truncated after `h^2`.
type Chern2 = [i128; 3];

fn line_class(a: i64) -> Chern2 {
    [1, a as i128, 0]
}

fn mul2(x: Chern2, y: Chern2) -> Chern2 {
    [1, x[1] + y[1], x[2] + x[1] * y[1] + y[2]]
}

fn inv2(x: Chern2) -> Chern2 {
    [1, -x[1], x[1] * x[1] - x[2]]
}

/// `c(H_ζ) / c(O(-γ-ζ))` truncated to degree 2.
pub fn quotient_chern_series(w: &Weights) -> Chern2 {
    let h = hzeta_weights(w)
        .weights()
        .iter()
        .fold([1, 0, 0], |acc, &a| mul2(acc, line_class(a)));
    mul2(h, inv2(line_class(-w.gamma() - w.zeta() as i64)))
}

/// `c(H_ζ) / (c(O(-γ-ζ)) c(O(γ)))` truncated to degree 2.
pub fn bundle_chern_series(w: &Weights) -> Chern2 {
    mul2(quotient_chern_series(w), inv2(line_class(w.gamma())))
}

/// Compares `chern` with the Whitney expansion of the monad, and `c_1(Q)` with `γ - ζn`.
pub fn chern_whitney_check(w: &Weights) -> bool {
    let (c1, c2) = chern(w);
    let n_series = bundle_chern_series(w);
    let q_series = quotient_chern_series(w);
    n_series[1] == c1 as i128
        && n_series[2] == c2 as i128
        && q_series[1] == (w.gamma() - w.zeta() as i64 * w.n() as i64) as i128
}

/// `χ(N(t)) = χ(H_ζ(t)) - χ(O(t-γ-ζ)) - χ(O(t+γ))`.
pub fn euler_n(w: &Weights, t: i64) -> BigInt {
    let m = w.proj_dim();
    split_euler(&hzeta_weights(w), t)
        - euler_line(m, t - w.gamma() - w.zeta() as i64)
        - euler_line(m, t + w.gamma())
}

/// `χ(Q(t)) = χ(H_ζ(t)) - χ(O(t-γ-ζ))`.
pub fn euler_q(w: &Weights, t: i64) -> BigInt {
    split_euler(&hzeta_weights(w), t) - euler_line(w.proj_dim(), t - w.gamma() - w.zeta() as i64)
}
