use std::fmt;

use serde::{Deserialize, Serialize};

use super::MonadError;

/// `(n, ζ, γ, λ_0..λ_n)` with `γ - ζ > λ_n ≥ ... ≥ λ_0 ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct Weights {
    n: usize,
    zeta: u8,
    gamma: i64,
    lambda: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    n: usize,
    zeta: u8,
    gamma: i64,
    lambda: Vec<i64>,
}

impl TryFrom<RawWeights> for Weights {
    type Error = MonadError;
    fn try_from(r: RawWeights) -> Result<Self, MonadError> {
        Weights::new(r.n, r.zeta, r.gamma, r.lambda)
    }
}

impl From<Weights> for RawWeights {
    fn from(w: Weights) -> Self {
        RawWeights {
            n: w.n,
            zeta: w.zeta,
            gamma: w.gamma,
            lambda: w.lambda,
        }
    }
}

impl Weights {
    pub fn new(n: usize, zeta: u8, gamma: i64, lambda: Vec<i64>) -> Result<Self, MonadError> {
        let bad = |msg: String| Err(MonadError::WeightConstraintViolation(msg));
        if n < 1 {
            return bad("n must be at least 1".into());
        }
        if zeta > 1 {
            return bad(format!("zeta must be 0 or 1, got {zeta}"));
        }
        if gamma <= 0 {
            return bad(format!("gamma must be positive, got {gamma}"));
        }
        if lambda.len() != n + 1 {
            return bad(format!("expected {} lambdas, got {}", n + 1, lambda.len()));
        }
        if lambda[0] < 0 {
            return bad(format!("lambda_0 = {} is negative", lambda[0]));
        }
        if let Some(i) = lambda.windows(2).position(|p| p[0] > p[1]) {
            return bad(format!(
                "lambda must be ascending, lambda_{} > lambda_{}",
                i,
                i + 1
            ));
        }
        if gamma - zeta as i64 <= lambda[n] {
            return bad(format!(
                "need gamma - zeta > lambda_n, got {} <= {}",
                gamma - zeta as i64,
                lambda[n]
            ));
        }
        Ok(Weights {
            n,
            zeta,
            gamma,
            lambda,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn zeta(&self) -> u8 {
        self.zeta
    }
    pub fn gamma(&self) -> i64 {
        self.gamma
    }
    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }
    pub fn lambda_sum(&self) -> i64 {
        self.lambda.iter().sum()
    }
    /// `2n + 1`.
    pub fn proj_dim(&self) -> usize {
        2 * self.n + 1
    }
    /// `2n + 2`.
    pub fn num_vars(&self) -> usize {
        2 * self.n + 2
    }
    /// Degree of `f_i`, the entry of `B` landing in `O(λ_{n-i})`.
    pub fn deg_f(&self, i: usize) -> i64 {
        self.gamma + self.zeta as i64 + self.lambda[self.n - i]
    }
    /// Degree of `g_i`, the entry of `A` leaving `O(λ_i)`.
    pub fn deg_g(&self, i: usize) -> i64 {
        self.gamma - self.lambda[i]
    }

    /// Every admissible weight vector with the given `n`, `ζ`, `γ`.
    pub fn admissible(n: usize, zeta: u8, gamma: i64) -> Vec<Weights> {
        let top = gamma - zeta as i64 - 1;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        fn rec(
            n: usize,
            zeta: u8,
            gamma: i64,
            lo: i64,
            top: i64,
            cur: &mut Vec<i64>,
            out: &mut Vec<Weights>,
        ) {
            if cur.len() == n + 1 {
                out.extend(Weights::new(n, zeta, gamma, cur.clone()));
                return;
            }
            for l in lo..=top {
                cur.push(l);
                rec(n, zeta, gamma, l, top, cur, out);
                cur.pop();
            }
        }
        rec(n, zeta, gamma, 0, top, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(n={}, zeta={}, gamma={}, lambda={:?})",
            self.n, self.zeta, self.gamma, self.lambda
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraints() {
        assert!(Weights::new(1, 0, 1, vec![0, 0]).is_ok());
        assert!(Weights::new(1, 1, 1, vec![0, 0]).is_err());
        assert!(Weights::new(1, 0, 2, vec![1, 0]).is_err());
        assert!(Weights::new(1, 0, 2, vec![0, 2]).is_err());
        assert!(Weights::new(0, 0, 2, vec![0]).is_err());
    }

    #[test]
    fn admissible_grid() {
        let ws = Weights::admissible(1, 0, 2);
        let lams: Vec<_> = ws.iter().map(|w| w.lambda().to_vec()).collect();
        assert_eq!(lams, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert!(Weights::admissible(1, 1, 1).is_empty());
    }

    #[test]
    fn serde_rejects_bad_order() {
        let bad = r#"{"n":1,"zeta":0,"gamma":2,"lambda":[1,0]}"#;
        assert!(serde_json::from_str::<Weights>(bad).is_err());
        let good: Weights =
            serde_json::from_str(r#"{"n":1,"zeta":0,"gamma":2,"lambda":[0,1]}"#).unwrap();
        assert_eq!(good.lambda(), &[0, 1]);
    }
}
