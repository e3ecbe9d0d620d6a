//! Direct sums of line bundles on `P^m` as weight multisets: Bott cohomology, Euler
//! characteristics, exterior powers and the maximal sub-line-bundle rule.

use std::ops::RangeInclusive;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::monad::Weights;
use crate::polygrade::graded_dim;

/// Multiset of twists `a` standing for `⊕ O(a)` on `P^proj_dim`, kept sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeightList {
    proj_dim: usize,
    weights: Vec<i64>,
}

impl WeightList {
    pub fn new(proj_dim: usize, mut weights: Vec<i64>) -> Self {
        weights.sort_unstable_by(|a, b| b.cmp(a));
        WeightList { proj_dim, weights }
    }

    pub fn proj_dim(&self) -> usize {
        self.proj_dim
    }
    pub fn rank(&self) -> usize {
        self.weights.len()
    }
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }
    /// First Chern class, i.e. the weight of the determinant.
    pub fn total(&self) -> i64 {
        self.weights.iter().sum()
    }

    pub fn twist(&self, t: i64) -> Self {
        Self::new(self.proj_dim, self.weights.iter().map(|a| a + t).collect())
    }

    pub fn dual(&self) -> Self {
        Self::new(self.proj_dim, self.weights.iter().map(|a| -a).collect())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let w = self
            .weights
            .iter()
            .cartesian_product(&other.weights)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.proj_dim, w)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(
            self.proj_dim,
            self.weights.iter().chain(&other.weights).copied().collect(),
        )
    }
}

/// Weights of `H_zeta`: `λ_0..λ_n` together with `-λ_i - ζ`.
pub fn hzeta_weights(w: &Weights) -> WeightList {
    let lam = w.lambda();
    let z = w.zeta() as i64;
    let weights = lam
        .iter()
        .copied()
        .chain(lam.iter().map(|l| -l - z))
        .collect();
    WeightList::new(w.proj_dim(), weights)
}

/// All `q`-subset sums; `ext_pow(wl, 0)` is the trivial line bundle.
pub fn ext_pow(wl: &WeightList, q: usize) -> WeightList {
    assert!(
        q <= wl.rank(),
        "exterior power {q} exceeds rank {}",
        wl.rank()
    );
    let w = wl
        .weights
        .iter()
        .combinations(q)
        .map(|c| c.into_iter().sum())
        .collect();
    WeightList::new(wl.proj_dim, w)
}

/// `h^i(P^m, O(t))`.
pub fn bott_h(m: usize, t: i64, i: usize) -> u64 {
    assert!(i <= m, "cohomological degree {i} above {m}");
    if i == 0 {
        graded_dim(m + 1, t)
    } else if i == m {
        graded_dim(m + 1, -t - m as i64 - 1)
    } else {
        0
    }
}

pub fn split_cohom(wl: &WeightList, twist: i64, i: usize) -> u64 {
    wl.weights
        .iter()
        .map(|a| bott_h(wl.proj_dim, a + twist, i))
        .sum()
}

/// `χ(O(t))` on `P^m`: the polynomial `(t+1)...(t+m)/m!`, valid for every integer `t`.
pub fn euler_line(m: usize, t: i64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 1..=m as i64 {
        num *= t + k;
        den *= k;
    }
    num / den
}

pub fn split_euler(wl: &WeightList, twist: i64) -> BigInt {
    wl.weights.iter().fold(BigInt::zero(), |acc, a| {
        acc + euler_line(wl.proj_dim, a + twist)
    })
}

/// Largest `t` with `O(t)` a summand; for an exterior power this is the top subset sum.
pub fn max_subline_twist(wl: &WeightList) -> Option<i64> {
    wl.weights.first().copied()
}

/// The closed form `Σ_{i=0}^{min(q-1,n)} λ_{n-i}` stated for the top twist of `Λ^q H_ζ`.
pub fn stated_max_twist(w: &Weights, q: usize) -> i64 {
    let n = w.n();
    let lam = w.lambda();
    (0..=(q.saturating_sub(1)).min(n)).map(|i| lam[n - i]).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SublineEntry {
    /// `None` for `h^0(Λ^q H(-k+a))`, `Some(p)` for `h^0(Λ^p H ⊗ Λ^q H(-kγ-b))`.
    pub p: Option<usize>,
    pub q: usize,
    pub k: i64,
    pub shift: i64,
    pub h0: u64,
    pub stated_max: i64,
    pub true_max: i64,
    pub formula_diverges: bool,
    /// Whether `h0 = 0` matches the stated equivalence (single powers only).
    pub iff_agrees: Option<bool>,
    pub sufficient_applies: bool,
    pub contradiction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SublineReport {
    pub threshold: i64,
    pub lambda_sum: i64,
    pub entries: Vec<SublineEntry>,
}

impl SublineReport {
    pub fn contradictions(&self) -> usize {
        self.entries.iter().filter(|e| e.contradiction).count()
    }
    pub fn divergences(&self) -> usize {
        self.entries.iter().filter(|e| e.formula_diverges).count()
    }
    pub fn iff_failures(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.iff_agrees == Some(false))
            .count()
    }
}

/// Shifts `a` (resp. `b`) allowed by the twisted variant: `|a| ≤ n` when `ζ = 1`, else `0`.
pub fn subline_shifts(w: &Weights) -> RangeInclusive<i64> {
    let s = if w.zeta() == 1 { w.n() as i64 } else { 0 };
    -s..=s
}

/// Single exterior powers `h^0(Λ^q H(-k+a))` for `k ≥ γ`, compared with both the stated
/// equivalence and its sufficient half `γ - ζn > Σλ`. Only a failure of the sufficient
/// half is a contradiction.
pub fn verify_subline_twists(w: &Weights, qs: RangeInclusive<usize>, ks: &[i64]) -> SublineReport {
    let h = hzeta_weights(w);
    let threshold = w.gamma() - w.zeta() as i64 * w.n() as i64;
    let lambda_sum: i64 = w.lambda().iter().sum();
    let mut entries = Vec::new();
    for q in qs.filter(|q| (1..=h.rank() - 1).contains(q)) {
        let pw = ext_pow(&h, q);
        let true_max = max_subline_twist(&pw).expect("nonempty exterior power");
        let stated_max = stated_max_twist(w, q);
        for &k in ks.iter().filter(|&&k| k >= w.gamma()) {
            for a in subline_shifts(w) {
                let h0 = split_cohom(&pw, -k + a, 0);
                let sufficient_applies = threshold > lambda_sum;
                entries.push(SublineEntry {
                    p: None,
                    q,
                    k,
                    shift: a,
                    h0,
                    stated_max,
                    true_max,
                    formula_diverges: stated_max != true_max,
                    iff_agrees: Some((h0 == 0) == (threshold > stated_max)),
                    sufficient_applies,
                    contradiction: sufficient_applies && h0 != 0,
                });
            }
        }
    }
    SublineReport {
        threshold,
        lambda_sum,
        entries,
    }
}

/// Products `h^0(Λ^p H ⊗ Λ^q H(-kγ-b))` for `k ≥ 2`, which must vanish once `γ - ζn > Σλ`.
pub fn verify_subline_products(
    w: &Weights,
    pqs: RangeInclusive<usize>,
    ks: &[i64],
) -> SublineReport {
    let h = hzeta_weights(w);
    let threshold = w.gamma() - w.zeta() as i64 * w.n() as i64;
    let lambda_sum: i64 = w.lambda().iter().sum();
    let powers: Vec<(usize, WeightList)> = pqs
        .filter(|q| (1..=h.rank() - 1).contains(q))
        .map(|q| (q, ext_pow(&h, q)))
        .collect();
    let mut entries = Vec::new();
    for ((p, pp), (q, pq)) in powers.iter().cartesian_product(&powers) {
        let prod = pp.tensor(pq);
        let true_max = max_subline_twist(&prod).expect("nonempty product");
        let stated_max = stated_max_twist(w, *p) + stated_max_twist(w, *q);
        for &k in ks.iter().filter(|&&k| k >= 2) {
            for b in subline_shifts(w) {
                let h0 = split_cohom(&prod, -k * w.gamma() - b, 0);
                let sufficient_applies = threshold > lambda_sum;
                entries.push(SublineEntry {
                    p: Some(*p),
                    q: *q,
                    k,
                    shift: b,
                    h0,
                    stated_max,
                    true_max,
                    formula_diverges: stated_max != true_max,
                    iff_agrees: None,
                    sufficient_applies,
                    contradiction: sufficient_applies && h0 != 0,
                });
            }
        }
    }
    SublineReport {
        threshold,
        lambda_sum,
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, zeta: u8, gamma: i64, lambda: &[i64]) -> Weights {
        Weights::new(n, zeta, gamma, lambda.to_vec()).unwrap()
    }

    #[test]
    fn hzeta_examples() {
        assert_eq!(hzeta_weights(&w(1, 0, 1, &[0, 0])).weights(), &[0, 0, 0, 0]);
        assert_eq!(
            hzeta_weights(&w(1, 1, 2, &[0, 0])).weights(),
            &[0, 0, -1, -1]
        );
        assert_eq!(
            hzeta_weights(&w(2, 0, 3, &[0, 1, 1])).weights(),
            &[1, 1, 0, 0, -1, -1]
        );
    }

    #[test]
    fn ext_pow_examples() {
        let p5 = hzeta_weights(&w(2, 0, 3, &[0, 1, 1]));
        let two = ext_pow(&p5, 2);
        assert_eq!(two.rank(), 15);
        assert_eq!(max_subline_twist(&two), Some(2));
        assert_eq!(two.weights().last(), Some(&-2));
        assert_eq!(ext_pow(&p5, 1), p5);
        let cl = WeightList::new(3, vec![0; 4]);
        assert_eq!(ext_pow(&cl, 2).weights(), &[0; 6]);
    }

    #[test]
    fn bott_examples() {
        assert_eq!(bott_h(3, 2, 0), 10);
        assert_eq!(bott_h(3, -4, 3), 1);
        assert_eq!(bott_h(5, -3, 2), 0);
    }

    #[test]
    fn split_examples() {
        let cl = hzeta_weights(&w(1, 0, 1, &[0, 0]));
        assert_eq!(split_cohom(&cl, 0, 0), 4);
        assert_eq!(split_cohom(&cl, -1, 0), 0);
        assert_eq!(split_euler(&cl, -1), BigInt::zero());
        assert_eq!(euler_line(3, -4), BigInt::from(-1));
    }

    #[test]
    fn subline_examples() {
        assert_eq!(
            max_subline_twist(&ext_pow(&hzeta_weights(&w(1, 0, 2, &[0, 1])), 2)),
            Some(1)
        );
        assert_eq!(
            max_subline_twist(&ext_pow(&WeightList::new(3, vec![0; 4]), 3)),
            Some(0)
        );
        assert_eq!(
            max_subline_twist(&ext_pow(&hzeta_weights(&w(1, 0, 3, &[1, 1])), 3)),
            Some(1)
        );
    }

    #[test]
    fn subline_twist_report() {
        let r = verify_subline_twists(&w(1, 0, 2, &[0, 1]), 1..=3, &[2]);
        assert_eq!(r.entries.len(), 3);
        assert_eq!(r.contradictions(), 0);
        assert_eq!(r.iff_failures(), 0);

        let r = verify_subline_twists(&w(1, 0, 1, &[0, 0]), 1..=3, &[1]);
        assert!(r.entries.iter().all(|e| e.h0 == 0 && e.sufficient_applies));

        let r = verify_subline_twists(&w(1, 0, 2, &[1, 1]), 3..=3, &[2]);
        let e = &r.entries[0];
        assert_eq!((e.true_max, e.stated_max, e.h0), (1, 2, 0));
        assert!(e.formula_diverges);
        assert_eq!(e.iff_agrees, Some(false));
        assert!(!e.contradiction);
    }

    #[test]
    fn subline_flags_divergence_for_top_powers() {
        let r = verify_subline_twists(&w(1, 0, 3, &[1, 1]), 3..=3, &[3]);
        let e = &r.entries[0];
        assert_eq!((e.stated_max, e.true_max), (2, 1));
        assert!(e.formula_diverges);
    }
}
