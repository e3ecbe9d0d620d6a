//! An independent check of the engine: plain dense elimination mod p on coefficient
//! matrices built straight from the monad forms, with no spectral sequence.
//!
//! Sections: `H^0(N(t)) = ker(A on ⊕ S_{w_k+t}) / B·S_{t-γ-ζ}`, since `H^1(O(s)) = 0`.
//! Endomorphisms: every endomorphism of `N` lifts uniquely to an endomorphism of the monad,
//! because `Hom(H, O(-γ-ζ)) = Hom(O(γ), H) = 0` and line bundles have no `Ext^1`, `Ext^2`
//! on `P^m`, `m >= 3`. So `h^0(End N)` counts triples `(a, β, c)` with `Aβ = cA`, `βB = aB`.

use std::collections::HashMap;

use nullcorr::cohom::{Session, SheafExpr};
use nullcorr::exactlin::PrimeField;
use nullcorr::modspace::{criterion_sweep, stability_criterion, sweep_grid, SweepVerdict};
use nullcorr::monad::{build_monad, FormSource, MonadData, Weights};

type Poly = HashMap<Vec<u32>, u64>;

struct Dense {
    p: u64,
    rows: Vec<Vec<u64>>,
    cols: usize,
}

impl Dense {
    fn new(p: u64, cols: usize) -> Self {
        Dense {
            p,
            rows: vec![],
            cols,
        }
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * b as u128 % self.p as u128) as u64;
            }
            b = (b as u128 * b as u128 % self.p as u128) as u64;
            e >>= 1;
        }
        r
    }

    fn rank(mut self) -> usize {
        let p = self.p as u128;
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(piv) = (rank..self.rows.len()).find(|&r| self.rows[r][c] != 0) else {
                continue;
            };
            self.rows.swap(rank, piv);
            let inv = self.pow(self.rows[rank][c], self.p - 2);
            let pivot_row: Vec<u64> = self.rows[rank]
                .iter()
                .map(|&x| (x as u128 * inv as u128 % p) as u64)
                .collect();
            for r in rank + 1..self.rows.len() {
                let f = self.rows[r][c];
                if f == 0 {
                    continue;
                }
                for (x, &y) in self.rows[r].iter_mut().zip(&pivot_row) {
                    *x = ((*x as u128 + p - (f as u128 * y as u128 % p)) % p) as u64;
                }
            }
            self.rows[rank] = pivot_row;
            rank += 1;
        }
        rank
    }
}

fn monomials(nv: usize, d: i64) -> Vec<Vec<u32>> {
    if d < 0 {
        return vec![];
    }
    if nv == 1 {
        return vec![vec![d as u32]];
    }
    (0..=d)
        .rev()
        .flat_map(|first| {
            monomials(nv - 1, d - first)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first as u32);
                    rest
                })
        })
        .collect()
}

fn poly(f: &nullcorr::polygrade::FormValue<PrimeField>) -> Poly {
    f.terms().map(|(e, c)| (e.clone(), *c)).collect()
}

/// Accumulates linear equations whose coefficients are polynomials in fixed unknown slots.
struct System {
    p: u64,
    unknowns: usize,
    /// equation id -> monomial -> column -> coefficient
    eqs: HashMap<(usize, Vec<u32>), HashMap<usize, u64>>,
}

impl System {
    fn add(&mut self, eq: usize, mono: Vec<u32>, col: usize, coeff: u64) {
        let slot = self
            .eqs
            .entry((eq, mono))
            .or_default()
            .entry(col)
            .or_insert(0);
        *slot = (*slot + coeff) % self.p;
    }

    /// `form * (monomial unknown at col)` added to equation `eq`.
    fn add_product(&mut self, eq: usize, form: &Poly, mono: &[u32], col: usize, sign: u64) {
        for (e, c) in form {
            let m: Vec<u32> = e.iter().zip(mono).map(|(a, b)| a + b).collect();
            self.add(
                eq,
                m,
                col,
                (*c as u128 * sign as u128 % self.p as u128) as u64,
            );
        }
    }

    fn solution_dim(self) -> usize {
        let mut d = Dense::new(self.p, self.unknowns);
        for (_, row) in self.eqs {
            let mut v = vec![0u64; self.unknowns];
            for (c, x) in row {
                v[c] = x;
            }
            d.rows.push(v);
        }
        self.unknowns - d.rank()
    }
}

fn oracle_sections(m: &MonadData<PrimeField>, t: i64) -> usize {
    let p = m.field().modulus();
    let nv = m.num_vars();
    let tw = m.middle_weights();
    let mut cols = vec![];
    for (k, w) in tw.iter().enumerate() {
        for mono in monomials(nv, w + t) {
            cols.push((k, mono));
        }
    }
    let mut sys = System {
        p,
        unknowns: cols.len(),
        eqs: HashMap::new(),
    };
    for (c, (k, mono)) in cols.iter().enumerate() {
        sys.add_product(0, &poly(&m.a[*k]), mono, c, 1);
    }
    let kernel = sys.solution_dim();
    kernel - monomials(nv, t + m.left_weight()).len()
}

fn oracle_endomorphisms(m: &MonadData<PrimeField>) -> usize {
    let p = m.field().modulus();
    let nv = m.num_vars();
    let tw = m.middle_weights();
    let r = tw.len();
    // columns: a, c, then β_{kl} coefficients
    let mut beta = vec![];
    for k in 0..r {
        for l in 0..r {
            for mono in monomials(nv, tw[k] - tw[l]) {
                beta.push((k, l, mono));
            }
        }
    }
    let (col_a, col_c) = (0, 1);
    let mut sys = System {
        p,
        unknowns: beta.len() + 2,
        eqs: HashMap::new(),
    };
    let zero = vec![0u32; nv];
    let neg = p - 1;
    // Aβ - cA = 0, one equation per column l; βB - aB = 0, one per row k.
    for l in 0..r {
        sys.add_product(l, &poly(&m.a[l]), &zero, col_c, neg);
    }
    for k in 0..r {
        sys.add_product(r + k, &poly(&m.b[k]), &zero, col_a, neg);
    }
    for (i, (k, l, mono)) in beta.iter().enumerate() {
        sys.add_product(*l, &poly(&m.a[*k]), mono, i + 2, 1);
        sys.add_product(r + k, &poly(&m.b[*l]), mono, i + 2, 1);
    }
    sys.solution_dim()
}

fn monad(n: usize, zeta: u8, gamma: i64, lambda: &[i64], seed: u64) -> MonadData<PrimeField> {
    let w = Weights::new(n, zeta, gamma, lambda.to_vec()).unwrap();
    build_monad(&PrimeField::default(), &w, FormSource::SeededRandom(seed)).unwrap()
}

#[test]
fn classical_sections_agree() {
    let m = monad(1, 0, 1, &[0, 0], 1);
    let s = Session::new(m.clone());
    let oracle: Vec<usize> = (-3..=2).map(|t| oracle_sections(&m, t)).collect();
    assert_eq!(oracle, vec![0, 0, 0, 0, 5, 16]);
    for (t, want) in (-3..=2).zip(&oracle) {
        assert_eq!(
            s.h(&SheafExpr::N, 0, t).unwrap(),
            Some(*want as u64),
            "t={t}"
        );
    }
}

#[test]
fn weighted_sections_agree() {
    for (n, z, g, l) in [
        (1, 0, 3, vec![0, 2]),
        (1, 1, 3, vec![0, 1]),
        (2, 0, 2, vec![0, 0, 1]),
    ] {
        let m = monad(n, z, g, &l, 4);
        let s = Session::new(m.clone());
        for t in -2..=2 {
            assert_eq!(
                s.h(&SheafExpr::N, 0, t).unwrap(),
                Some(oracle_sections(&m, t) as u64),
                "{} t={t}",
                m.weights
            );
        }
    }
}

#[test]
fn classical_is_simple() {
    assert_eq!(oracle_endomorphisms(&monad(1, 0, 1, &[0, 0], 1)), 1);
}

/// Every point of the `n = 1`, `γ <= 4` grid: the oracle and the engine agree on `h^0(End N)`.
#[test]
fn sweep_simpleness_agrees_with_oracle() {
    let f = PrimeField::default();
    let grid = sweep_grid(&[1], &[0, 1], 4);
    assert_eq!(grid.len(), 30);
    let entries = criterion_sweep(&f, &grid, 1).unwrap();
    for (w, e) in grid.iter().zip(&entries) {
        let m = build_monad(&f, w, FormSource::SeededRandom(1)).unwrap();
        assert_eq!(
            e.simpleness.dim(),
            Some(oracle_endomorphisms(&m) as u64),
            "{w}"
        );
    }
}

/// On the boundary `γ - 1 = Σλ` with `ζ = 1` the bundle is simple although the criterion
/// fails. The oracle confirms it independently of the engine.
#[test]
fn zeta_one_boundary_is_simple() {
    for l in [[1, 1], [1, 2]] {
        let g = l[0] + l[1] + 1;
        let m = monad(1, 1, g, &l, 1);
        assert!(!stability_criterion(&m.weights).bundle);
        assert_eq!(oracle_endomorphisms(&m), 1, "{}", m.weights);
    }
    let f = PrimeField::default();
    let entries = criterion_sweep(&f, &sweep_grid(&[1], &[0, 1], 4), 1).unwrap();
    let bad: Vec<String> = entries
        .iter()
        .filter(|e| e.verdict == SweepVerdict::Contradiction)
        .map(|e| e.weights.to_string())
        .collect();
    assert_eq!(
        bad,
        [
            "(n=1, zeta=1, gamma=3, lambda=[1, 1])",
            "(n=1, zeta=1, gamma=4, lambda=[1, 2])"
        ]
    );
}

#[test]
fn unstable_instance_has_extra_endomorphisms() {
    assert_eq!(oracle_endomorphisms(&monad(1, 0, 2, &[1, 1], 2)), 2);
    assert_eq!(oracle_endomorphisms(&monad(1, 0, 3, &[2, 2], 2)), 11);
}
