//! Bounded complexes of split bundles whose differentials are matrices of forms.
//!
//! Every bundle the engine handles is quasi-isomorphic to one of these: `Q` and `N` are the
//! two- and three-term monad complexes, and duals, tensor products and exterior powers are
//! built termwise with Koszul signs.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;

use crate::exactlin::Field;
use crate::monad::MonadData;
use crate::polygrade::FormValue;
use crate::splitcalc::{split_euler, WeightList};

/// One nonzero entry of a differential: `form` maps summand `col` of the source term to
/// summand `row` of the target term.
#[derive(Clone, Debug)]
pub struct FormEntry<F: Field> {
    pub row: usize,
    pub col: usize,
    pub form: FormValue<F>,
}

/// A line summand `O(twist)` with a label naming where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub twist: i64,
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct SplitComplex<F: Field> {
    field: F,
    num_vars: usize,
    min_degree: i64,
    terms: Vec<Vec<Summand>>,
    /// `diffs[k]` goes from `terms[k]` to `terms[k + 1]`.
    diffs: Vec<Vec<FormEntry<F>>>,
}

impl<F: Field> SplitComplex<F> {
    /// A split bundle sitting in degree 0.
    pub fn line_sum(field: &F, num_vars: usize, twists: &[i64]) -> Self {
        let term = twists
            .iter()
            .map(|&t| Summand {
                twist: t,
                label: format!("O({t})"),
            })
            .collect();
        SplitComplex {
            field: field.clone(),
            num_vars,
            min_degree: 0,
            terms: vec![term],
            diffs: vec![],
        }
    }

    /// `O(-γ-ζ) -> H` in degrees -1, 0.
    pub fn quotient(m: &MonadData<F>) -> Self {
        let left = vec![Summand {
            twist: m.left_weight(),
            label: "K".into(),
        }];
        let diff =
            m.b.iter()
                .enumerate()
                .filter(|(_, f)| !f.is_zero())
                .map(|(k, f)| FormEntry {
                    row: k,
                    col: 0,
                    form: f.clone(),
                })
                .collect();
        SplitComplex {
            field: m.field().clone(),
            num_vars: m.num_vars(),
            min_degree: -1,
            terms: vec![left, middle_term(m)],
            diffs: vec![diff],
        }
    }

    /// `O(-γ-ζ) -> H -> O(γ)` in degrees -1, 0, 1.
    pub fn bundle(m: &MonadData<F>) -> Self {
        let mut cx = Self::quotient(m);
        let right = vec![Summand {
            twist: m.right_weight(),
            label: "C".into(),
        }];
        let diff =
            m.a.iter()
                .enumerate()
                .filter(|(_, f)| !f.is_zero())
                .map(|(k, f)| FormEntry {
                    row: 0,
                    col: k,
                    form: f.clone(),
                })
                .collect();
        cx.terms.push(right);
        cx.diffs.push(diff);
        cx
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }
    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }
    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.terms.len() as i64 - 1
    }
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_degree..=self.max_degree()
    }

    /// Summands in degree `p`; empty outside the support.
    pub fn term(&self, p: i64) -> &[Summand] {
        self.index(p).map_or(&[], |k| self.terms[k].as_slice())
    }

    /// Differential leaving degree `p`.
    pub fn diff(&self, p: i64) -> &[FormEntry<F>] {
        match self.index(p) {
            Some(k) if k < self.diffs.len() => &self.diffs[k],
            _ => &[],
        }
    }

    fn index(&self, p: i64) -> Option<usize> {
        let k = p - self.min_degree;
        (k >= 0 && (k as usize) < self.terms.len()).then_some(k as usize)
    }

    pub fn twist(&self, t: i64) -> Self {
        let mut out = self.clone();
        for s in out.terms.iter_mut().flatten() {
            s.twist += t;
        }
        out
    }

    /// Termwise dual: degree `p` becomes `-p`, twists are negated, differentials transposed.
    pub fn dual(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|term| {
                term.iter()
                    .map(|s| Summand {
                        twist: -s.twist,
                        label: format!("{}*", s.label),
                    })
                    .collect()
            })
            .collect();
        let diffs = self
            .diffs
            .iter()
            .rev()
            .map(|d| {
                d.iter()
                    .map(|e| FormEntry {
                        row: e.col,
                        col: e.row,
                        form: e.form.clone(),
                    })
                    .collect()
            })
            .collect();
        SplitComplex {
            field: self.field.clone(),
            num_vars: self.num_vars,
            min_degree: -self.max_degree(),
            terms,
            diffs,
        }
    }

    /// Total complex of the tensor product, `d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy`.
    pub fn tensor(&self, other: &Self) -> Self {
        let min_degree = self.min_degree + other.min_degree;
        let max_degree = self.max_degree() + other.max_degree();
        // Offsets of the (p1, p - p1) blocks inside total degree p.
        let mut offsets: HashMap<(i64, i64), usize> = HashMap::new();
        let mut terms = Vec::new();
        for p in min_degree..=max_degree {
            let mut term = Vec::new();
            for p1 in self.degrees() {
                let (xs, ys) = (self.term(p1), other.term(p - p1));
                if xs.is_empty() || ys.is_empty() {
                    continue;
                }
                offsets.insert((p, p1), term.len());
                for x in xs {
                    for y in ys {
                        term.push(Summand {
                            twist: x.twist + y.twist,
                            label: format!("{}⊗{}", x.label, y.label),
                        });
                    }
                }
            }
            terms.push(term);
        }
        let mut diffs = Vec::new();
        for p in min_degree..max_degree {
            let mut entries = Vec::new();
            for p1 in self.degrees() {
                let p2 = p - p1;
                let Some(&src) = offsets.get(&(p, p1)) else {
                    continue;
                };
                let ny = other.term(p2).len();
                // dx ⊗ y
                if let Some(&dst) = offsets.get(&(p + 1, p1 + 1)) {
                    for e in self.diff(p1) {
                        for y in 0..ny {
                            entries.push(FormEntry {
                                row: dst + e.row * ny + y,
                                col: src + e.col * ny + y,
                                form: e.form.clone(),
                            });
                        }
                    }
                }
                // ± x ⊗ dy
                if let Some(&dst) = offsets.get(&(p + 1, p1)) {
                    let ny_next = other.term(p2 + 1).len();
                    let odd = p1.rem_euclid(2) == 1;
                    for x in 0..self.term(p1).len() {
                        for e in other.diff(p2) {
                            entries.push(FormEntry {
                                row: dst + x * ny_next + e.row,
                                col: src + x * ny + e.col,
                                form: if odd { e.form.neg() } else { e.form.clone() },
                            });
                        }
                    }
                }
            }
            diffs.push(entries);
        }
        SplitComplex {
            field: self.field.clone(),
            num_vars: self.num_vars,
            min_degree,
            terms,
            diffs,
        }
        .trimmed()
    }

    /// Graded exterior power. Generators of even degree anticommute and square to zero,
    /// odd ones commute; `d` acts as an odd derivation. Quasi-isomorphic to `Λ^q` of the
    /// cohomology bundle when the characteristic exceeds `q`.
    pub fn ext_pow(&self, q: usize) -> Self {
        if q == 0 {
            return Self::line_sum(&self.field, self.num_vars, &[0]);
        }
        // Generators in (degree, index) order.
        let gens: Vec<(i64, usize)> = self
            .degrees()
            .flat_map(|p| (0..self.term(p).len()).map(move |i| (p, i)))
            .collect();
        let gen_pos: HashMap<(i64, usize), usize> =
            gens.iter().enumerate().map(|(k, g)| (*g, k)).collect();
        let valid = |mono: &[usize]| {
            mono.windows(2)
                .all(|w| w[0] != w[1] || gens[w[0]].0.rem_euclid(2) == 1)
        };
        let mut by_degree: HashMap<i64, Vec<Vec<usize>>> = HashMap::new();
        for mono in (0..gens.len()).combinations_with_replacement(q) {
            if valid(&mono) {
                let deg = mono.iter().map(|&g| gens[g].0).sum();
                by_degree.entry(deg).or_default().push(mono);
            }
        }
        let Some((&lo, &hi)) = by_degree.keys().minmax().into_option() else {
            return SplitComplex {
                field: self.field.clone(),
                num_vars: self.num_vars,
                min_degree: 0,
                terms: vec![vec![]],
                diffs: vec![],
            };
        };
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut terms = Vec::new();
        for p in lo..=hi {
            let monos = by_degree.remove(&p).unwrap_or_default();
            let mut term = Vec::with_capacity(monos.len());
            for (k, mono) in monos.iter().enumerate() {
                let label = mono
                    .iter()
                    .map(|&g| self.term(gens[g].0)[gens[g].1].label.as_str())
                    .join("∧");
                let twist = mono
                    .iter()
                    .map(|&g| self.term(gens[g].0)[gens[g].1].twist)
                    .sum();
                term.push(Summand { twist, label });
                index.insert(mono.clone(), k);
            }
            terms.push((term, monos));
        }
        let mut diffs = Vec::new();
        for (_, monos) in terms.iter().take(terms.len().saturating_sub(1)) {
            let mut acc: HashMap<(usize, usize), FormValue<F>> = HashMap::new();
            for (col, mono) in monos.iter().enumerate() {
                let mut prefix_parity = 0i64;
                for pos in 0..q {
                    let (p, i) = gens[mono[pos]];
                    for e in self.diff(p).iter().filter(|e| e.col == i) {
                        let target = gen_pos[&(p + 1, e.row)];
                        let mut word = mono.clone();
                        word[pos] = target;
                        let Some((sorted, sign)) = sort_graded(&word, &gens) else {
                            continue;
                        };
                        let Some(&row) = index.get(&sorted) else {
                            continue;
                        };
                        let negative = (prefix_parity % 2 == 1) != (sign < 0);
                        let form = if negative {
                            e.form.neg()
                        } else {
                            e.form.clone()
                        };
                        let slot = acc.entry((row, col));
                        match slot {
                            std::collections::hash_map::Entry::Occupied(mut o) => {
                                let sum = o
                                    .get()
                                    .add(&form)
                                    .expect("entries of one block share a degree");
                                *o.get_mut() = sum;
                            }
                            std::collections::hash_map::Entry::Vacant(v) => {
                                v.insert(form);
                            }
                        }
                    }
                    prefix_parity += p.rem_euclid(2);
                }
            }
            let mut entries: Vec<FormEntry<F>> = acc
                .into_iter()
                .filter(|(_, f)| !f.is_zero())
                .map(|((row, col), form)| FormEntry { row, col, form })
                .collect();
            entries.sort_by_key(|e| (e.col, e.row));
            diffs.push(entries);
        }
        SplitComplex {
            field: self.field.clone(),
            num_vars: self.num_vars,
            min_degree: lo,
            terms: terms.into_iter().map(|(t, _)| t).collect(),
            diffs,
        }
    }

    /// Drops empty terms at both ends.
    fn trimmed(mut self) -> Self {
        while self.terms.len() > 1 && self.terms.last().is_some_and(Vec::is_empty) {
            self.terms.pop();
            self.diffs.pop();
        }
        while self.terms.len() > 1 && self.terms[0].is_empty() {
            self.terms.remove(0);
            self.diffs.remove(0);
            self.min_degree += 1;
        }
        self
    }

    /// `Σ_p (-1)^p χ(C^p(t))`, computed from Bott alone.
    pub fn euler(&self, t: i64) -> BigInt {
        let m = self.num_vars - 1;
        self.degrees()
            .map(|p| {
                let wl = WeightList::new(m, self.term(p).iter().map(|s| s.twist).collect());
                let chi = split_euler(&wl, t);
                if p.rem_euclid(2) == 1 {
                    -chi
                } else {
                    chi
                }
            })
            .sum()
    }

    /// Alternating sum of ranks, the rank of the bundle the complex represents.
    pub fn rank(&self) -> i64 {
        self.degrees()
            .map(|p| {
                let r = self.term(p).len() as i64;
                if p.rem_euclid(2) == 1 {
                    -r
                } else {
                    r
                }
            })
            .sum()
    }

    /// Composite `d^{p+1} ∘ d^p` as a list of nonzero form entries; empty for a complex.
    pub fn d_squared_defects(&self) -> Vec<(i64, usize, usize)> {
        let mut out = Vec::new();
        for p in self.min_degree..self.max_degree() - 1 {
            let mut acc: HashMap<(usize, usize), FormValue<F>> = HashMap::new();
            for e1 in self.diff(p) {
                for e2 in self.diff(p + 1).iter().filter(|e| e.col == e1.row) {
                    let prod = e2.form.mul(&e1.form);
                    let key = (e2.row, e1.col);
                    let next = match acc.get(&key) {
                        Some(f) => f.add(&prod).expect("composite entries share a degree"),
                        None => prod,
                    };
                    acc.insert(key, next);
                }
            }
            out.extend(
                acc.into_iter()
                    .filter(|(_, f)| !f.is_zero())
                    .map(|((r, c), _)| (p, r, c)),
            );
        }
        out
    }
}

fn middle_term<F: Field>(m: &MonadData<F>) -> Vec<Summand> {
    m.middle_weights()
        .into_iter()
        .enumerate()
        .map(|(k, t)| Summand {
            twist: t,
            label: format!("H{k}"),
        })
        .collect()
}

/// Sorts a word of generators into canonical order. Adjacent swaps of `x, y` cost
/// `-(-1)^{|x||y|}`; a repeated generator of even degree kills the word.
fn sort_graded(word: &[usize], gens: &[(i64, usize)]) -> Option<(Vec<usize>, i32)> {
    let mut w = word.to_vec();
    let mut sign = 1i32;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            let (a, b) = (gens[w[j - 1]].0, gens[w[j]].0);
            if (a * b).rem_euclid(2) == 0 {
                sign = -sign;
            }
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    let dead = w
        .windows(2)
        .any(|p| p[0] == p[1] && gens[p[0]].0.rem_euclid(2) == 0);
    (!dead).then_some((w, sign))
}
