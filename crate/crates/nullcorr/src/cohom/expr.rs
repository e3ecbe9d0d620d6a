//! Sheaf expressions over one monad and their prefix syntax.
//!
//! ```text
//! expr := N | Q | H | Ndual | Qdual | O
//!       | linesum[w, ...]
//!       | twist(expr, int) | dual(expr) | tensor(expr, expr) | extpow(expr, nat)
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exterior powers of a non-split bundle are supported up to this degree.
pub const MAX_NONSPLIT_EXTPOW: usize = 2;
/// Maximum number of non-split factors in one expression.
pub const MAX_NONSPLIT_FACTORS: usize = 2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("parse error at byte {pos}: {reason}")]
    Parse { pos: usize, reason: String },
    #[error("{0} has more than {MAX_NONSPLIT_FACTORS} non-split factors")]
    TooManyFactors(String),
    #[error(
        "exterior power {q} of the non-split expression {expr} is outside the supported range"
    )]
    ExtPowUnsupported { expr: String, q: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SheafExpr {
    /// Split bundle with the listed twists. `linesum[0]` is the structure sheaf.
    LineSum(Vec<i64>),
    /// The middle term `H_ζ` of the monad.
    H,
    /// The quotient bundle, cokernel of the left map.
    Q,
    /// The monad cohomology bundle.
    N,
    Twist(Box<SheafExpr>, i64),
    Dual(Box<SheafExpr>),
    Tensor(Box<SheafExpr>, Box<SheafExpr>),
    ExtPow(Box<SheafExpr>, usize),
}

impl SheafExpr {
    pub fn twist(self, t: i64) -> Self {
        SheafExpr::Twist(Box::new(self), t)
    }
    pub fn dual(self) -> Self {
        SheafExpr::Dual(Box::new(self))
    }
    pub fn tensor(self, other: SheafExpr) -> Self {
        SheafExpr::Tensor(Box::new(self), Box::new(other))
    }
    pub fn ext_pow(self, q: usize) -> Self {
        SheafExpr::ExtPow(Box::new(self), q)
    }

    /// Number of `Q`/`N` factors, counting an exterior power `q` times.
    pub fn nonsplit_factors(&self) -> usize {
        match self {
            SheafExpr::LineSum(_) | SheafExpr::H => 0,
            SheafExpr::Q | SheafExpr::N => 1,
            SheafExpr::Twist(e, _) | SheafExpr::Dual(e) => e.nonsplit_factors(),
            SheafExpr::Tensor(a, b) => a.nonsplit_factors() + b.nonsplit_factors(),
            SheafExpr::ExtPow(e, q) => q * e.nonsplit_factors(),
        }
    }

    pub fn is_split(&self) -> bool {
        self.nonsplit_factors() == 0
    }

    /// Rejects expressions outside the supported scope.
    pub fn check_scope(&self) -> Result<(), ExprError> {
        self.check_extpow()?;
        if self.nonsplit_factors() > MAX_NONSPLIT_FACTORS {
            return Err(ExprError::TooManyFactors(self.to_string()));
        }
        Ok(())
    }

    fn check_extpow(&self) -> Result<(), ExprError> {
        match self {
            SheafExpr::ExtPow(e, q) => {
                if !e.is_split() && *q > MAX_NONSPLIT_EXTPOW {
                    return Err(ExprError::ExtPowUnsupported {
                        expr: e.to_string(),
                        q: *q,
                    });
                }
                e.check_extpow()
            }
            SheafExpr::Twist(e, _) | SheafExpr::Dual(e) => e.check_extpow(),
            SheafExpr::Tensor(a, b) => {
                a.check_extpow()?;
                b.check_extpow()
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SheafExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafExpr::LineSum(w) => {
                write!(f, "linesum[")?;
                for (k, x) in w.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            SheafExpr::H => write!(f, "H"),
            SheafExpr::Q => write!(f, "Q"),
            SheafExpr::N => write!(f, "N"),
            SheafExpr::Dual(e) if **e == SheafExpr::Q => write!(f, "Qdual"),
            SheafExpr::Dual(e) if **e == SheafExpr::N => write!(f, "Ndual"),
            SheafExpr::Twist(e, t) => write!(f, "twist({e},{t})"),
            SheafExpr::Dual(e) => write!(f, "dual({e})"),
            SheafExpr::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            SheafExpr::ExtPow(e, q) => write!(f, "extpow({e},{q})"),
        }
    }
}

impl From<SheafExpr> for String {
    fn from(e: SheafExpr) -> String {
        e.to_string()
    }
}

impl TryFrom<String> for SheafExpr {
    type Error = ExprError;
    fn try_from(s: String) -> Result<Self, ExprError> {
        s.parse()
    }
}

impl std::str::FromStr for SheafExpr {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, ExprError> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        e.check_scope()?;
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> ExprError {
        ExprError::Parse {
            pos: self.pos,
            reason: reason.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, c: char) -> Result<(), ExprError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<&str, ExprError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn int(&mut self) -> Result<i64, ExprError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let sign_len = usize::from(rest.starts_with(['-', '+']));
        let digits = rest[sign_len..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len() - sign_len);
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        let len = sign_len + digits;
        let v = rest[..len]
            .parse()
            .map_err(|_| self.error("integer out of range"))?;
        self.pos += len;
        Ok(v)
    }

    fn expr(&mut self) -> Result<SheafExpr, ExprError> {
        let start = self.pos;
        let name = self.ident()?.to_string();
        let e = match name.as_str() {
            "N" => SheafExpr::N,
            "Q" => SheafExpr::Q,
            "H" => SheafExpr::H,
            "O" => SheafExpr::LineSum(vec![0]),
            "Ndual" => SheafExpr::N.dual(),
            "Qdual" => SheafExpr::Q.dual(),
            "linesum" => {
                self.eat('[')?;
                let mut w = vec![self.int()?];
                loop {
                    self.skip_ws();
                    if self.eat(']').is_ok() {
                        break;
                    }
                    self.eat(',')?;
                    w.push(self.int()?);
                }
                SheafExpr::LineSum(w)
            }
            "twist" => {
                self.eat('(')?;
                let e = self.expr()?;
                self.eat(',')?;
                let t = self.int()?;
                self.eat(')')?;
                e.twist(t)
            }
            "dual" => {
                self.eat('(')?;
                let e = self.expr()?;
                self.eat(')')?;
                e.dual()
            }
            "tensor" => {
                self.eat('(')?;
                let a = self.expr()?;
                self.eat(',')?;
                let b = self.expr()?;
                self.eat(')')?;
                a.tensor(b)
            }
            "extpow" => {
                self.eat('(')?;
                let e = self.expr()?;
                self.eat(',')?;
                let q = self.int()?;
                self.eat(')')?;
                let q = usize::try_from(q)
                    .map_err(|_| self.error("exterior power must be nonnegative"))?;
                e.ext_pow(q)
            }
            _ => {
                self.pos = start;
                return Err(self.error(&format!("unknown name '{name}'")));
            }
        };
        Ok(e)
    }
}

/// Rewrites toward a normal form where duals sit directly on `Q` and twists are merged.
/// `N*` becomes `N(ζ)` via the symplectic isomorphism `N ≅ N*(-ζ)`.
pub fn normalize(e: &SheafExpr, zeta: u8, trace: &mut Vec<String>) -> SheafExpr {
    use SheafExpr::*;
    match e {
        LineSum(_) | H | Q | N => e.clone(),
        Twist(inner, t) => match normalize(inner, zeta, trace) {
            x if *t == 0 => x,
            LineSum(w) => LineSum(w.iter().map(|x| x + t).collect()),
            Twist(x, s) if s + t == 0 => *x,
            Twist(x, s) => Twist(x, s + t),
            x => Twist(Box::new(x), *t),
        },
        Dual(inner) => match normalize(inner, zeta, trace) {
            LineSum(w) => LineSum(w.iter().map(|x| -x).collect()),
            Dual(x) => *x,
            Twist(x, t) => normalize(&Twist(Box::new(Dual(x)), -t), zeta, trace),
            N => {
                trace.push(format!("N* -> N({zeta}) by the symplectic form"));
                normalize(&Twist(Box::new(N), zeta as i64), zeta, trace)
            }
            Tensor(a, b) => normalize(&Tensor(Box::new(Dual(a)), Box::new(Dual(b))), zeta, trace),
            ExtPow(x, q) => normalize(&ExtPow(Box::new(Dual(x)), q), zeta, trace),
            x => Dual(Box::new(x)),
        },
        Tensor(a, b) => {
            let (a, b) = (normalize(a, zeta, trace), normalize(b, zeta, trace));
            match (a, b) {
                (LineSum(x), LineSum(y)) => LineSum(
                    x.iter()
                        .flat_map(|p| y.iter().map(move |q| p + q))
                        .collect(),
                ),
                (LineSum(w), x) | (x, LineSum(w)) if w.len() == 1 => {
                    trace.push(format!("tensor with O({}) -> twist", w[0]));
                    normalize(&Twist(Box::new(x), w[0]), zeta, trace)
                }
                (Twist(x, s), y) | (y, Twist(x, s)) => {
                    normalize(&Twist(Box::new(Tensor(x, Box::new(y))), s), zeta, trace)
                }
                (x, y) => Tensor(Box::new(x), Box::new(y)),
            }
        }
        ExtPow(inner, q) => match (normalize(inner, zeta, trace), *q) {
            (_, 0) => LineSum(vec![0]),
            (x, 1) => x,
            (Twist(x, t), q) => {
                normalize(&Twist(Box::new(ExtPow(x, q)), t * q as i64), zeta, trace)
            }
            (LineSum(w), q) => {
                use itertools::Itertools;
                LineSum(
                    w.iter()
                        .combinations(q)
                        .map(|c| c.into_iter().sum())
                        .collect(),
                )
            }
            (x, q) => ExtPow(Box::new(x), q),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in [
            "twist(N,-1)",
            "tensor(N,Ndual)",
            "extpow(Qdual,2)",
            "linesum[0,0,-1]",
            "tensor(Qdual,twist(H,3))",
            "Ndual",
        ] {
            let e: SheafExpr = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(e.to_string().parse::<SheafExpr>().unwrap(), e);
        }
        let long: SheafExpr = "tensor(N, dual(N))".parse().unwrap();
        assert_eq!(long, SheafExpr::N.tensor(SheafExpr::N.dual()));
        let spaced: SheafExpr = " twist( N , -1 ) ".parse().unwrap();
        assert_eq!(spaced, SheafExpr::N.twist(-1));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            "twist(N)".parse::<SheafExpr>(),
            Err(ExprError::Parse { .. })
        ));
        assert!(matches!(
            "foo".parse::<SheafExpr>(),
            Err(ExprError::Parse { .. })
        ));
        assert!(matches!(
            "N extra".parse::<SheafExpr>(),
            Err(ExprError::Parse { .. })
        ));
        assert!(matches!(
            "tensor(N,tensor(N,Q))".parse::<SheafExpr>(),
            Err(ExprError::TooManyFactors(_))
        ));
        assert!(matches!(
            "extpow(N,3)".parse::<SheafExpr>(),
            Err(ExprError::ExtPowUnsupported { q: 3, .. })
        ));
        assert!("extpow(H,3)".parse::<SheafExpr>().is_ok());
    }

    #[test]
    fn normal_forms() {
        let mut tr = Vec::new();
        let e: SheafExpr = "dual(twist(N,-2))".parse().unwrap();
        assert_eq!(normalize(&e, 1, &mut tr), SheafExpr::N.twist(3));
        assert!(!tr.is_empty());
        let e: SheafExpr = "tensor(linesum[2],twist(Qdual,-1))".parse().unwrap();
        assert_eq!(normalize(&e, 0, &mut tr), SheafExpr::Q.dual().twist(1));
        let e: SheafExpr = "dual(tensor(N,N))".parse().unwrap();
        assert_eq!(normalize(&e, 0, &mut tr), SheafExpr::N.tensor(SheafExpr::N));
        let e: SheafExpr = "extpow(linesum[0,1,2],2)".parse().unwrap();
        assert_eq!(normalize(&e, 0, &mut tr), SheafExpr::LineSum(vec![1, 2, 3]));
        let e: SheafExpr = "twist(twist(N,1),-1)".parse().unwrap();
        assert_eq!(normalize(&e, 0, &mut tr), SheafExpr::N);
    }
}
