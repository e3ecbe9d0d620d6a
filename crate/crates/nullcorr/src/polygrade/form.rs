use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use super::monomial::{Exponent, MonomialBasis};
use super::PolyError;
use crate::exactlin::Field;

/// Random coefficients are drawn from `[-COEFF_RANGE, COEFF_RANGE] \ {0}` as integers and
/// then mapped into the field, so every field sees the same integer forms.
pub const COEFF_RANGE: i64 = 1000;

/// A homogeneous form with exact coefficients.
#[derive(Clone, Debug)]
pub struct FormValue<F: Field> {
    field: F,
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, F::Elem>,
}

impl<F: Field> PartialEq for FormValue<F> {
    fn eq(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars && self.degree == other.degree && self.terms == other.terms
    }
}

impl<F: Field> FormValue<F> {
    pub fn zero(field: &F, num_vars: usize, degree: u32) -> Self {
        FormValue {
            field: field.clone(),
            num_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn variable(field: &F, num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::monomial(field, e, field.one())
    }

    pub fn monomial(field: &F, exponent: Exponent, coeff: F::Elem) -> Self {
        let degree = exponent.iter().sum();
        let mut f = Self::zero(field, exponent.len(), degree);
        if !field.is_zero(&coeff) {
            f.terms.insert(exponent, coeff);
        }
        f
    }

    /// Builds from integer-coefficient terms; all terms must share one degree.
    pub fn from_int_terms(
        field: &F,
        num_vars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exponent, i64)>,
    ) -> Result<Self, PolyError> {
        let mut f = Self::zero(field, num_vars, degree);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(PolyError::VariableCount {
                    expected: num_vars,
                    found: e.len(),
                });
            }
            let d: u32 = e.iter().sum();
            if d != degree {
                return Err(PolyError::NonHomogeneous(degree as i64, d as i64));
            }
            f.add_term(e, field.from_i64(c));
        }
        Ok(f)
    }

    fn add_term(&mut self, e: Exponent, c: F::Elem) {
        let field = self.field.clone();
        let slot = self.terms.entry(e.clone()).or_insert_with(|| field.zero());
        *slot = field.add(slot, &c);
        if field.is_zero(slot) {
            self.terms.remove(&e);
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &F::Elem)> {
        self.terms.iter()
    }
    pub fn coeff(&self, e: &[u32]) -> F::Elem {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), self.field.neg(c)))
            .collect();
        FormValue {
            terms,
            ..self.clone()
        }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let mut out = Self::zero(&self.field, self.num_vars, self.degree);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), self.field.mul(c, s));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.degree != other.degree {
            return Err(PolyError::NonHomogeneous(
                self.degree as i64,
                other.degree as i64,
            ));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field, self.num_vars, self.degree + other.degree);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Exponent = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, self.field.mul(x, y));
            }
        }
        out
    }
}

impl<F: Field> fmt::Display for FormValue<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest monomial first
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{p}")?,
                }
            }
        }
        Ok(())
    }
}

/// Parses a list of terms such as `["3*x0^2*x1", "-x2*x3", "7*x1^3"]`.
pub fn parse_form<F: Field, S: AsRef<str>>(
    field: &F,
    num_vars: usize,
    terms: &[S],
) -> Result<FormValue<F>, PolyError> {
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        parsed.push(parse_term(t.as_ref(), num_vars)?);
    }
    let degree = parsed.first().map_or(0, |(e, _)| e.iter().sum());
    FormValue::from_int_terms(field, num_vars, degree, parsed)
}

fn parse_term(term: &str, num_vars: usize) -> Result<(Exponent, i64), PolyError> {
    let err = |reason: &str| PolyError::Parse {
        term: term.to_string(),
        reason: reason.to_string(),
    };
    let mut s = term.trim();
    let mut sign = 1i64;
    if let Some(rest) = s.strip_prefix('-') {
        sign = -1;
        s = rest.trim_start();
    } else if let Some(rest) = s.strip_prefix('+') {
        s = rest.trim_start();
    }
    if s.is_empty() {
        return Err(err("empty term"));
    }
    let mut coeff = 1i64;
    let mut e = vec![0u32; num_vars];
    for factor in s
        .split(|c: char| c == '*' || c.is_whitespace())
        .filter(|x| !x.is_empty())
    {
        if let Some(var) = factor.strip_prefix('x') {
            let (idx, pow) = match var.split_once('^') {
                Some((i, p)) => (i, p.parse::<u32>().map_err(|_| err("bad exponent"))?),
                None => (var, 1),
            };
            let idx: usize = idx.parse().map_err(|_| err("bad variable index"))?;
            if idx >= num_vars {
                return Err(err("variable index out of range"));
            }
            e[idx] += pow;
        } else {
            let c: i64 = factor.parse().map_err(|_| err("bad coefficient"))?;
            coeff = coeff
                .checked_mul(c)
                .ok_or_else(|| err("coefficient overflow"))?;
        }
    }
    Ok((e, sign * coeff))
}

/// Dense form of the given degree with every coefficient nonzero as an integer.
pub fn random_form<F: Field, R: Rng>(
    field: &F,
    num_vars: usize,
    degree: u32,
    rng: &mut R,
) -> FormValue<F> {
    let basis = MonomialBasis::new(num_vars, degree as i64);
    let terms = basis.exponents().iter().map(|e| {
        let mut c = 0;
        while c == 0 {
            c = rng.random_range(-COEFF_RANGE..=COEFF_RANGE);
        }
        (e.clone(), c)
    });
    FormValue::from_int_terms(field, num_vars, degree, terms)
        .expect("basis monomials have the right degree")
}
