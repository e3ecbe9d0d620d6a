use std::collections::HashMap;
use std::sync::Arc;

pub type Exponent = Vec<u32>;

/// `C(degree + num_vars - 1, num_vars - 1)`, or 0 for negative degree.
pub fn graded_dim(num_vars: usize, degree: i64) -> u64 {
    assert!(num_vars >= 1, "graded_dim needs at least one variable");
    if degree < 0 {
        return 0;
    }
    let k = (num_vars - 1) as u128;
    let n = degree as u128 + k;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    u64::try_from(acc).expect("graded dimension fits in u64")
}

/// Monomials of one degree in graded-lex order (x_0^d first).
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    num_vars: usize,
    degree: i64,
    exponents: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl MonomialBasis {
    pub fn new(num_vars: usize, degree: i64) -> Self {
        let mut exponents = Vec::with_capacity(graded_dim(num_vars, degree) as usize);
        if degree >= 0 {
            let mut cur = vec![0u32; num_vars];
            fill(&mut cur, 0, degree as u32, &mut exponents);
        }
        let index = exponents
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        MonomialBasis {
            num_vars,
            degree,
            exponents,
            index,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn len(&self) -> usize {
        self.exponents.len()
    }
    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
    pub fn exponents(&self) -> &[Exponent] {
        &self.exponents
    }
    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }
}

fn fill(cur: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Exponent>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(cur.to_vec());
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill(cur, pos + 1, remaining - e, out);
    }
    cur[pos] = 0;
}

/// Per-session memo of monomial bases for a fixed number of variables.
#[derive(Clone, Debug)]
pub struct BasisCache {
    num_vars: usize,
    bases: HashMap<i64, Arc<MonomialBasis>>,
}

impl BasisCache {
    pub fn new(num_vars: usize) -> Self {
        BasisCache {
            num_vars,
            bases: HashMap::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn get(&mut self, degree: i64) -> Arc<MonomialBasis> {
        let nv = self.num_vars;
        self.bases
            .entry(degree)
            .or_insert_with(|| Arc::new(MonomialBasis::new(nv, degree)))
            .clone()
    }
}
