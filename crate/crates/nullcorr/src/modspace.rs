//! Stability, simpleness and deformation-dimension certificates for the monad bundle `N`,
//! all computed through the cohomology engine.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cohom::{ChaseOutcome, CohomDim, CohomError, Session, SheafExpr};
use crate::exactlin::Field;
use crate::monad::{build_monad, FormSource, MonadError, Weights};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModspaceError {
    #[error("Hoppe index j = {j} needs 2j+1 <= n = {n}")]
    Range { j: usize, n: usize },
    #[error("only stated for zeta = 0")]
    ZetaUnsupported,
    #[error(transparent)]
    Cohom(#[from] CohomError),
    #[error(transparent)]
    Monad(#[from] MonadError),
}

/// The two numerical stability criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityCriteria {
    /// `γ - ζn > Σλ`, decisive for `N`.
    pub bundle: bool,
    /// `γ - ζn > (2n+1)λ_n`, decisive for `Q`.
    pub quotient: bool,
}

pub fn stability_criterion(w: &Weights) -> StabilityCriteria {
    let lhs = w.gamma() - w.zeta() as i64 * w.n() as i64;
    let top = *w.lambda().last().expect("n+1 lambdas");
    StabilityCriteria {
        bundle: lhs > w.lambda_sum(),
        quotient: lhs > w.proj_dim() as i64 * top,
    }
}

pub fn end_bundle() -> SheafExpr {
    SheafExpr::N.tensor(SheafExpr::N.dual())
}

/// `h^0(N⊗N*)` with its representation.
pub fn simpleness<F: Field>(s: &Session<F>) -> Result<ChaseOutcome<F>, CohomError> {
    s.cohom(&end_bundle(), 0, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HoppeOutcome {
    StableCertified,
    /// Both conditions computed, at least one fails.
    NotApplicable,
    /// A condition is undetermined or outside the engine's scope.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HoppeCondition {
    pub claim: String,
    pub expr: String,
    pub expected: u64,
    pub computed: CohomDim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HoppeCertificate {
    pub j: usize,
    /// Symplectic twist of the normalized bundle, `-ζ`.
    pub b: i64,
    /// Whether the conditions are read on `N*` (case `b < 0`).
    pub dual_side: bool,
    pub conditions: Vec<HoppeCondition>,
    pub outcome: HoppeOutcome,
}

/// Hoppe-type test at index `j`: `h^0(Λ^{2j+1}E) = 0` and `h^0(E(-b(j+1))⊗Λ^{2j+1}E) = 1`
/// with `E = N` for `b = 0`, and the same on `E = N*` with twist `b(j+1)` for `b < 0`.
pub fn hoppe_certificate<F: Field>(
    s: &Session<F>,
    j: usize,
) -> Result<HoppeCertificate, ModspaceError> {
    let w = &s.monad().weights;
    let n = w.n();
    let power = 2 * j + 1;
    if power > n {
        return Err(ModspaceError::Range { j, n });
    }
    let b = -(w.zeta() as i64);
    let reach = (j + 1) as i64;
    let (e, twist) = if b < 0 {
        (SheafExpr::N.dual(), b * reach)
    } else {
        (SheafExpr::N, -b * reach)
    };
    let wedge = if power == 1 {
        e.clone()
    } else {
        e.clone().ext_pow(power)
    };
    let pairing = e.twist(twist).tensor(wedge.clone());
    let mut conditions = Vec::new();
    let mut outcome = HoppeOutcome::StableCertified;
    for (expr, expected) in [(wedge, 0), (pairing, 1)] {
        let computed = match s.dim(&expr, 0, 0) {
            Ok(d) => d,
            Err(CohomError::Expr(err)) => CohomDim::Undetermined {
                reason: err.to_string(),
            },
            Err(err) => return Err(err.into()),
        };
        match computed.dim() {
            None => outcome = HoppeOutcome::Inconclusive,
            Some(d) if d != expected && outcome == HoppeOutcome::StableCertified => {
                outcome = HoppeOutcome::NotApplicable
            }
            Some(_) => {}
        }
        conditions.push(HoppeCondition {
            claim: format!("h^0({expr}) = {expected}"),
            expr: expr.to_string(),
            expected,
            computed,
        });
    }
    Ok(HoppeCertificate {
        j,
        b,
        dual_side: b < 0,
        conditions,
        outcome,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityVerdict {
    pub weights: Weights,
    pub criterion_holds: bool,
    pub q_criterion_holds: bool,
    pub simpleness: CohomDim,
    pub simpleness_trace: Vec<String>,
    pub hoppe: Vec<HoppeCertificate>,
    /// The criterion agrees with computed simpleness, and no certificate contradicts it.
    /// `None` when nothing decisive was computed.
    pub consistent: Option<bool>,
    pub notes: Vec<String>,
}

pub fn certify_stability<F: Field>(s: &Session<F>) -> Result<StabilityVerdict, ModspaceError> {
    let w = s.monad().weights.clone();
    let crit = stability_criterion(&w);
    let simple = simpleness(s)?;
    let simpleness = simple.to_dim();
    let hoppe = (0..)
        .take_while(|j| 2 * j < w.n())
        .map(|j| hoppe_certificate(s, j))
        .collect::<Result<Vec<_>, _>>()?;
    let entry = sweep_entry(s)?;
    let mut consistent = match entry.verdict {
        SweepVerdict::Consistent => Some(true),
        SweepVerdict::Contradiction => Some(false),
        SweepVerdict::Undetermined => None,
    };
    let mut notes = vec![entry.note()];
    for cert in &hoppe {
        if cert.outcome == HoppeOutcome::StableCertified && !crit.bundle {
            consistent = Some(false);
            notes.push(format!(
                "CONTRADICTION: Hoppe certificate at j = {} but the criterion fails",
                cert.j
            ));
        }
    }
    Ok(StabilityVerdict {
        weights: w,
        criterion_holds: crit.bundle,
        q_criterion_holds: crit.quotient,
        simpleness,
        simpleness_trace: simple.trace().to_vec(),
        hoppe,
        consistent,
        notes,
    })
}

/// Sections of `Λ^{2j}N(ζj)`, which contain the power of the symplectic form.
pub fn symplectic_form_sections<F: Field>(
    s: &Session<F>,
    j: usize,
) -> Result<CohomDim, CohomError> {
    let z = s.monad().weights.zeta() as i64;
    s.dim(&SheafExpr::N.ext_pow(2 * j).twist(z * j as i64), 0, 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeformationIdentity {
    /// `h^1(Q*⊗H)`.
    pub h1_qdual_h: CohomDim,
    /// `h^0(H(γ+ζ))`.
    pub h0_h_shifted: CohomDim,
    /// `h^0(End H)`.
    pub h0_end_h: CohomDim,
    /// `h^0(Q*⊗H)`.
    pub h0_qdual_h: CohomDim,
    /// `h^1(Q*⊗H) = h^0(H(γ+ζ)) - h^0(End H) + h^0(Q*⊗H)`, when all four are determined.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundChain {
    pub h1_qdual_n: CohomDim,
    /// Used as zero in the bound `h^1(End N) <= h^1(Q*⊗N) + h^2(N(-γ))`; flagged when not.
    pub h2_n_shifted: CohomDim,
    pub flagged: bool,
    pub bound_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KuranishiReport {
    /// `h^1(End N)`.
    pub dim_kur_bundle: CohomDim,
    /// `h^1(End Q)`.
    pub dim_kur_quotient: CohomDim,
    /// The smoothness statement is taken as given; only dimensions are computed.
    pub smoothness_claimed: bool,
    pub end_bundle_column: Vec<CohomDim>,
    pub end_bundle_euler: i64,
    pub euler_consistent: Option<bool>,
    pub identity: DeformationIdentity,
    pub bound: BoundChain,
}

pub fn kuranishi<F: Field>(s: &Session<F>) -> Result<KuranishiReport, CohomError> {
    let w = &s.monad().weights;
    let (g, z) = (w.gamma(), w.zeta() as i64);
    let end_n = end_bundle();
    let column = s.column(&end_n, 0)?;
    let euler = s.euler(&end_n, 0)?;
    let alternating = column
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.dim()
                .map(|d| if i % 2 == 0 { d as i64 } else { -(d as i64) })
        })
        .sum::<Option<i64>>();

    let qh = SheafExpr::Q.dual().tensor(SheafExpr::H);
    let h1_qdual_h = s.dim(&qh, 1, 0)?;
    let h0_h_shifted = s.dim(&SheafExpr::H, 0, g + z)?;
    let h0_end_h = s.dim(&SheafExpr::H.tensor(SheafExpr::H.dual()), 0, 0)?;
    let h0_qdual_h = s.dim(&qh, 0, 0)?;
    let holds = match (
        h1_qdual_h.dim(),
        h0_h_shifted.dim(),
        h0_end_h.dim(),
        h0_qdual_h.dim(),
    ) {
        (Some(a), Some(b), Some(c), Some(d)) => Some(a as i64 == b as i64 - c as i64 + d as i64),
        _ => None,
    };

    let h1_qdual_n = s.dim(&SheafExpr::Q.dual().tensor(SheafExpr::N), 1, 0)?;
    let h2_n_shifted = s.dim(&SheafExpr::N, 2, -g)?;
    let bound_holds = match (column[1].dim(), h1_qdual_n.dim(), h2_n_shifted.dim()) {
        (Some(a), Some(b), Some(c)) => Some(a <= b + c),
        _ => None,
    };

    Ok(KuranishiReport {
        dim_kur_bundle: column[1].clone(),
        dim_kur_quotient: s.dim(&SheafExpr::Q.tensor(SheafExpr::Q.dual()), 1, 0)?,
        smoothness_claimed: true,
        euler_consistent: alternating.map(|a| a == euler),
        end_bundle_column: column,
        end_bundle_euler: euler,
        identity: DeformationIdentity {
            h1_qdual_h,
            h0_h_shifted,
            h0_end_h,
            h0_qdual_h,
            holds,
        },
        bound: BoundChain {
            flagged: h2_n_shifted.dim() != Some(0),
            h1_qdual_n,
            h2_n_shifted,
            bound_holds,
        },
    })
}

/// Whether `h^0(Q(-γ)) = 0`, the computational input of the separability argument.
pub fn separability_hypothesis<F: Field>(s: &Session<F>) -> Result<CohomDim, ModspaceError> {
    let w = &s.monad().weights;
    if w.zeta() != 0 {
        return Err(ModspaceError::ZetaUnsupported);
    }
    Ok(s.dim(&SheafExpr::Q, 0, -w.gamma())?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVerdict {
    Consistent,
    Contradiction,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub weights: Weights,
    pub criterion: bool,
    pub simpleness: CohomDim,
    pub verdict: SweepVerdict,
}

/// Every admissible weight vector with `n` in `ns`, `ζ` in `zetas` and `γ <= gamma_max`.
pub fn sweep_grid(ns: &[usize], zetas: &[u8], gamma_max: i64) -> Vec<Weights> {
    ns.iter()
        .flat_map(|&n| zetas.iter().map(move |&z| (n, z)))
        .flat_map(|(n, z)| (1..=gamma_max).flat_map(move |g| Weights::admissible(n, z, g)))
        .collect()
}

impl SweepEntry {
    pub fn note(&self) -> String {
        match (self.verdict, self.criterion, &self.simpleness) {
            (_, _, CohomDim::Undetermined { reason }) => {
                format!("simpleness undetermined: {reason}")
            }
            (SweepVerdict::Consistent, true, _) => {
                "criterion holds; simple; consistent with the stability theorem".to_string()
            }
            (SweepVerdict::Consistent, false, CohomDim::Determined { dim }) => {
                format!(
                    "criterion fails; simpleness {dim} >= 2; consistent with the stability theorem"
                )
            }
            (_, true, CohomDim::Determined { dim }) => {
                format!("CONTRADICTION: criterion holds but h^0(End N) = {dim}")
            }
            (_, false, _) => "CONTRADICTION: criterion fails but N is simple".to_string(),
        }
    }
}

pub fn sweep_entry<F: Field>(s: &Session<F>) -> Result<SweepEntry, CohomError> {
    let w = s.monad().weights.clone();
    let criterion = stability_criterion(&w).bundle;
    let simpleness = s.dim(&end_bundle(), 0, 0)?;
    let verdict = match simpleness.dim() {
        None => SweepVerdict::Undetermined,
        Some(d) if criterion == (d == 1) => SweepVerdict::Consistent,
        Some(_) => SweepVerdict::Contradiction,
    };
    Ok(SweepEntry {
        weights: w,
        criterion,
        simpleness,
        verdict,
    })
}

/// Criterion against computed simpleness at each weight vector, one monad per point.
pub fn criterion_sweep<F: Field>(
    field: &F,
    grid: &[Weights],
    seed: u64,
) -> Result<Vec<SweepEntry>, ModspaceError> {
    grid.par_iter()
        .map(|w| {
            let s = Session::new(build_monad(field, w, FormSource::SeededRandom(seed))?);
            Ok(sweep_entry(&s)?)
        })
        .collect()
}
