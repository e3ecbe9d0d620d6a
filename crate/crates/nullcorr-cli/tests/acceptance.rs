//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criterion 5 cannot pass: at `ζ = 1` the boundary instances `γ - n = Σλ` are simple
//! although the stated criterion fails there (confirmed by the dense oracle in the core
//! crate). It is reported as FAIL; the run fails if any other criterion fails, or if 5
//! starts passing, so the expectation is revisited.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use nullcorr::cohom::resolutions::{euler_from_resolution, ResolutionKind};
use nullcorr::cohom::{CohomDim, DualStrategy, Session, SheafExpr};
use nullcorr::exactlin::{Field, PrimeField, Rationals, ALT_PRIME};
use nullcorr::modspace::{
    criterion_sweep, hoppe_certificate, kuranishi, sweep_grid, HoppeOutcome, SweepVerdict,
};
use nullcorr::monad::{
    build_monad, chern, chern_whitney_check, euler_n, validate_monad, FormSource, Weights,
};
use nullcorr::polygrade::BasepointCertificate;
use nullcorr_cli::{preset, run, JobConfig};

/// Criteria expected to fail, with the reason recorded in the decisions ledger.
const EXPECTED_FAILURES: [usize; 1] = [5];

type Outcome = Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Outcome);

fn weights(n: usize, zeta: u8, gamma: i64, lambda: &[i64]) -> Weights {
    Weights::new(n, zeta, gamma, lambda.to_vec()).unwrap()
}

fn classical() -> Weights {
    weights(1, 0, 1, &[0, 0])
}

fn weighted_p5() -> Weights {
    weights(2, 0, 3, &[0, 1, 1])
}

fn session_with<F: Field>(field: &F, w: &Weights, strategy: DualStrategy) -> Session<F> {
    Session::with_strategy(
        build_monad(field, w, FormSource::SeededRandom(1)).unwrap(),
        strategy,
    )
}

fn session(w: &Weights) -> Session<PrimeField> {
    session_with(&PrimeField::default(), w, DualStrategy::Rewrite)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dims(col: &[CohomDim]) -> Vec<Option<u64>> {
    col.iter().map(CohomDim::dim).collect()
}

/// Expressions and twists evaluated by the duality and Euler criteria.
fn acceptance_entries() -> Vec<(Weights, SheafExpr, Vec<i64>)> {
    let q = SheafExpr::Q;
    let qd = SheafExpr::Q.dual();
    let n = SheafExpr::N;
    let near: Vec<i64> = (-5..=3).collect();
    vec![
        (classical(), n.clone(), near.clone()),
        (classical(), n.clone().dual(), near.clone()),
        (classical(), q.clone(), near.clone()),
        (classical(), qd.clone(), near.clone()),
        (classical(), q.clone().ext_pow(2), near.clone()),
        (classical(), qd.clone().ext_pow(2), near.clone()),
        (classical(), n.clone().dual().ext_pow(2), near.clone()),
        (
            classical(),
            n.clone().tensor(n.clone().dual()),
            vec![-1, 0, 1],
        ),
        (
            classical(),
            qd.clone().tensor(SheafExpr::H),
            vec![-2, -1, 0],
        ),
        (weights(1, 1, 3, &[0, 1]), n.clone(), near.clone()),
        (weights(1, 1, 3, &[0, 1]), qd.clone(), near.clone()),
        (weighted_p5(), qd.clone(), vec![0, -3, -6]),
        (weighted_p5(), n.clone(), vec![-3, -1, 0, 1]),
        (weighted_p5(), q.clone().ext_pow(2), vec![-4, -2, 0]),
    ]
}

fn c1_classical_monad() -> Outcome {
    let t0 = Instant::now();
    let m = build_monad(
        &PrimeField::default(),
        &classical(),
        FormSource::SeededRandom(1),
    )
    .unwrap();
    let v = validate_monad(&m).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    let names: Vec<&str> = v.checks.iter().map(|c| c.name).collect();
    ensure(v.checks.len() == 4 && v.identities_hold(), || {
        format!("identities failed: {:?}", v.checks)
    })?;
    ensure(
        matches!(v.basepoint, BasepointCertificate::Certified { .. }),
        || format!("basepoint {:?}", v.basepoint),
    )?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} hold, basepoint certified, {elapsed:?}",
        names.join(", ")
    ))
}

fn c2_chern() -> Outcome {
    ensure(chern(&classical()) == (0, 1), || {
        format!("chern = {:?}", chern(&classical()))
    })?;
    let grid = sweep_grid(&[1, 2, 3], &[0, 1], 4);
    let bad: Vec<String> = grid
        .iter()
        .filter(|w| !chern_whitney_check(w))
        .map(|w| w.to_string())
        .collect();
    ensure(grid.len() >= 10 && bad.is_empty(), || {
        format!("Whitney fails on {bad:?}")
    })?;
    Ok(format!(
        "(c1, c2) = (0, 1); Whitney agrees on {} admissible weights",
        grid.len()
    ))
}

fn c3_classical_bundle() -> Outcome {
    let s = session(&classical());
    let h1 = s.h(&SheafExpr::N, 1, -1).map_err(|e| e.to_string())?;
    ensure(h1 == Some(1), || format!("h^1(N(-1)) = {h1:?}"))?;
    for t in -3..=0 {
        let h0 = s.h(&SheafExpr::N, 0, t).map_err(|e| e.to_string())?;
        ensure(h0 == Some(0), || format!("h^0(N({t})) = {h0:?}"))?;
    }
    Ok("h^1(N(-1)) = 1, h^0(N(t)) = 0 for -3 <= t <= 0".into())
}

fn c4_quotient_table() -> Outcome {
    let t0 = Instant::now();
    let w = weighted_p5();
    let s = session(&w);
    let (q, top, g) = (1i64, w.proj_dim(), w.gamma());
    let mut reported = vec![];
    let mut checked = 0;
    for k in 0..=2i64 {
        let col = dims(
            &s.column(&SheafExpr::Q.dual(), -k * g)
                .map_err(|e| e.to_string())?,
        );
        ensure(col[0] == Some(0), || format!("k={k}: h^0 = {:?}", col[0]))?;
        checked += 1;
        for (i, cell) in col.iter().enumerate().take(top).skip(1) {
            let i = i as i64;
            let expected = match (i == q, k == q, k > q) {
                (_, _, true) => Some(0),
                (false, _, _) => Some(0),
                (true, true, _) => Some(1),
                (true, false, _) => None,
            };
            match expected {
                Some(e) => {
                    ensure(*cell == Some(e), || {
                        format!("k={k} i={i}: expected {e}, got {cell:?}")
                    })?;
                    checked += 1;
                }
                None => reported.push(format!("ε(k={k}) = {cell:?}")),
            }
        }
        reported.push(format!("h^{top}(k={k}) = {:?}", col[top]));
    }
    let elapsed = t0.elapsed();
    ensure(elapsed < Duration::from_secs(300), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{checked} cells match; reported {}; {elapsed:?}",
        reported.join(", ")
    ))
}

fn c5_criterion_sweep() -> Outcome {
    let grid = sweep_grid(&[1], &[0, 1], 4);
    let entries = criterion_sweep(&PrimeField::default(), &grid, 1).map_err(|e| e.to_string())?;
    let unstable = entries
        .iter()
        .find(|e| e.weights == weights(1, 0, 2, &[1, 1]))
        .unwrap();
    ensure(unstable.simpleness.dim().is_some_and(|d| d >= 2), || {
        format!("(2,(1,1)) simpleness {:?}", unstable.simpleness)
    })?;
    let determined = entries
        .iter()
        .filter(|e| e.verdict != SweepVerdict::Undetermined)
        .count();
    let bad: Vec<String> = entries
        .iter()
        .filter(|e| e.verdict == SweepVerdict::Contradiction)
        .map(|e| {
            format!(
                "{} criterion={} h0(End N)={:?}",
                e.weights,
                e.criterion,
                e.simpleness.dim()
            )
        })
        .collect();
    ensure(bad.is_empty(), || {
        format!(
            "{} contradictions of {determined}: {}",
            bad.len(),
            bad.join("; ")
        )
    })?;
    Ok(format!(
        "{determined} determined instances consistent; (2,(1,1)) simpleness {:?}",
        unstable.simpleness.dim()
    ))
}

fn c6_hoppe() -> Outcome {
    let cert = hoppe_certificate(&session(&classical()), 0).map_err(|e| e.to_string())?;
    let got: Vec<Option<u64>> = cert.conditions.iter().map(|c| c.computed.dim()).collect();
    ensure(
        cert.outcome == HoppeOutcome::StableCertified && got == [Some(0), Some(1)],
        || format!("{:?} with {got:?}", cert.outcome),
    )?;
    Ok("StableCertified: h^0(N) = 0, h^0(N⊗N) = 1".into())
}

/// `χ` from a resolution when one covers the expression.
fn resolution_euler(w: &Weights, e: &SheafExpr, t: i64) -> Option<i64> {
    let z = w.zeta() as i64;
    let chi = match e {
        SheafExpr::N => euler_n(w, t),
        SheafExpr::Q => euler_from_resolution(w, ResolutionKind::Quotient, 1, t).ok()?,
        SheafExpr::Dual(x) if **x == SheafExpr::Q => {
            euler_from_resolution(w, ResolutionKind::DualQuotient, 1, t).ok()?
        }
        SheafExpr::Dual(x) if **x == SheafExpr::N => {
            euler_from_resolution(w, ResolutionKind::DualBundle, 1, t).ok()?
        }
        SheafExpr::ExtPow(x, q) => match &**x {
            SheafExpr::Q => euler_from_resolution(w, ResolutionKind::Quotient, *q, t).ok()?,
            SheafExpr::Dual(y) if **y == SheafExpr::Q => {
                euler_from_resolution(w, ResolutionKind::DualQuotient, *q, t).ok()?
            }
            SheafExpr::Dual(y) if **y == SheafExpr::N => {
                euler_from_resolution(w, ResolutionKind::DualBundle, *q, t).ok()?
            }
            SheafExpr::N => {
                euler_from_resolution(w, ResolutionKind::DualBundle, *q, t - *q as i64 * z).ok()?
            }
            _ => return None,
        },
        _ => return None,
    };
    i64::try_from(chi).ok()
}

fn c7_euler() -> Outcome {
    let (mut three, mut two, mut partial) = (0, 0, 0);
    for (w, e, twists) in acceptance_entries() {
        let s = session(&w);
        for t in twists {
            let col = s.column(&e, t).map_err(|x| x.to_string())?;
            let Some(alt) = col
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    c.dim()
                        .map(|d| if i % 2 == 0 { d as i64 } else { -(d as i64) })
                })
                .sum::<Option<i64>>()
            else {
                partial += 1;
                continue;
            };
            let additive = s.euler(&e, t).map_err(|x| x.to_string())?;
            ensure(alt == additive, || {
                format!("{w} {e}({t}): Σ(-1)^i h^i = {alt}, additivity {additive}")
            })?;
            match resolution_euler(&w, &e, t) {
                Some(r) => {
                    ensure(r == alt, || {
                        format!("{w} {e}({t}): resolution gives {r}, engine {alt}")
                    })?;
                    three += 1;
                }
                None => two += 1,
            }
        }
    }
    ensure(three > 0, || "no entry covered by a resolution".into())?;
    Ok(format!("{three} columns agree three ways, {two} tensor columns two ways, {partial} partial skipped"))
}

fn c8_duality() -> Outcome {
    let mut compared = 0;
    for (w, e, twists) in acceptance_entries() {
        let rewrite = session(&w);
        let s = session_with(&PrimeField::default(), &w, DualStrategy::Structural);
        let m = s.top_degree();
        for t in twists {
            let lhs = s.column(&e, t).map_err(|x| x.to_string())?;
            let rhs = s
                .column(&e.clone().dual(), -t - m as i64 - 1)
                .map_err(|x| x.to_string())?;
            let via_rewrite = rewrite.column(&e, t).map_err(|x| x.to_string())?;
            for i in 0..=m {
                if let (Some(a), Some(b)) = (lhs[i].dim(), rhs[m - i].dim()) {
                    ensure(a == b, || {
                        format!("Serre: {w} {e}({t}) h^{i} = {a}, dual side {b}")
                    })?;
                    compared += 1;
                }
                if let (Some(a), Some(b)) = (lhs[i].dim(), via_rewrite[i].dim()) {
                    ensure(a == b, || {
                        format!("strategies differ on {w} {e}({t}) h^{i}: {a} vs {b}")
                    })?;
                }
            }
            if e == SheafExpr::N {
                let dual = s
                    .column(&SheafExpr::N.dual(), t - w.zeta() as i64)
                    .map_err(|x| x.to_string())?;
                for i in 0..=m {
                    if let (Some(a), Some(b)) = (lhs[i].dim(), dual[i].dim()) {
                        ensure(a == b, || {
                            format!("symplectic: {w} N({t}) h^{i} = {a}, N* side {b}")
                        })?;
                        compared += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{compared} determined pairs agree (structural duals, cross-checked against rewriting)"
    ))
}

fn c9_kuranishi() -> Outcome {
    let fixture: serde_json::Value = serde_json::from_str(include_str!(
        "../../nullcorr/tests/fixtures/kuranishi_classical.json"
    ))
    .unwrap();
    let golden = fixture["h1_end_bundle"].as_u64().unwrap();
    let k = kuranishi(&session(&classical())).map_err(|e| e.to_string())?;
    let id = &k.identity;
    ensure(id.holds == Some(true), || format!("identity fails: {id:?}"))?;
    ensure(k.dim_kur_bundle.dim() == Some(golden), || {
        format!("h^1(End N) = {:?}, golden {golden}", k.dim_kur_bundle)
    })?;
    Ok(format!(
        "h^1(Q*⊗H) = {:?} = {:?} - {:?} + {:?}; h^1(End N) = {golden}",
        id.h1_qdual_h.dim().unwrap(),
        id.h0_h_shifted.dim().unwrap(),
        id.h0_end_h.dim().unwrap(),
        id.h0_qdual_h.dim().unwrap()
    ))
}

fn tasks_json(cfg: JobConfig) -> Result<String, String> {
    let report = run(cfg, false).map_err(|e| e.to_string())?;
    serde_json::to_string(&report.tasks).map_err(|e| e.to_string())
}

fn c10_determinism() -> Outcome {
    use nullcorr::exactlin::FieldSpec;
    let mut runs = 0;
    for name in ["classical", "p5-weighted"] {
        let cfg = preset(name).map_err(|e| e.to_string())?;
        let a = run(cfg.clone(), false)
            .map_err(|e| e.to_string())?
            .to_json();
        let b = run(cfg.clone(), true).map_err(|e| e.to_string())?.to_json();
        ensure(a == b, || format!("{name}: repeated report differs"))?;
        let mut fields = vec![FieldSpec::PrimeField { p: ALT_PRIME }];
        if cfg.weights.n() == 1 {
            fields.push(FieldSpec::Rationals);
        }
        let base = tasks_json(cfg.clone())?;
        for f in fields {
            let other = tasks_json(
                cfg.clone()
                    .with_overrides(Some(f), None)
                    .map_err(|e| e.to_string())?,
            )?;
            ensure(base == other, || {
                format!("{name}: results differ over {f:?}")
            })?;
            runs += 1;
        }
    }
    let grid = sweep_grid(&[1], &[0, 1], 4);
    let a = criterion_sweep(&PrimeField::default(), &grid, 1).map_err(|e| e.to_string())?;
    let b = criterion_sweep(&PrimeField::new(ALT_PRIME).unwrap(), &grid, 1)
        .map_err(|e| e.to_string())?;
    ensure(a == b, || "sweep differs across primes".into())?;
    // Rational coefficient growth makes gamma = 4 take minutes, so the rational pass stops at 3.
    let small = sweep_grid(&[1], &[0, 1], 3);
    let c = criterion_sweep(&Rationals, &small, 1).map_err(|e| e.to_string())?;
    ensure(
        a.iter().filter(|e| small.contains(&e.weights)).eq(c.iter()),
        || "sweep differs over the rationals".into(),
    )?;
    Ok(format!(
        "reports repeat byte-for-byte; {runs} preset reruns agree across fields; sweep agrees over two primes ({} points) and the rationals ({} points)",
        a.len(),
        c.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            1,
            "classical monad identities and basepoint certificate",
            c1_classical_monad,
        ),
        (2, "Chern classes and Whitney check", c2_chern),
        (3, "classical bundle vanishing", c3_classical_bundle),
        (4, "quotient case table at n=2", c4_quotient_table),
        (5, "stability criterion sweep", c5_criterion_sweep),
        (6, "Hoppe certificate on the classical bundle", c6_hoppe),
        (7, "Euler characteristic consistency", c7_euler),
        (8, "Serre and symplectic duality", c8_duality),
        (9, "Kuranishi identity and golden value", c9_kuranishi),
        (10, "determinism and field robustness", c10_determinism),
    ];
    let mut failed = BTreeSet::new();
    for (k, name, check) in criteria {
        let t0 = Instant::now();
        let outcome = check();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {k:>2} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                let tag = if EXPECTED_FAILURES.contains(&k) {
                    " (expected, see decisions ledger)"
                } else {
                    ""
                };
                println!("criterion {k:>2} FAIL  {name}: {why}{tag} [{secs:.1}s]");
                failed.insert(k);
            }
        }
    }
    let expected: BTreeSet<usize> = EXPECTED_FAILURES.into_iter().collect();
    println!("{} of 10 criteria pass", 10 - failed.len());
    if failed != expected {
        println!("unexpected outcome: failed {failed:?}, expected {expected:?}");
        std::process::exit(1);
    }
}
