use rayon::prelude::*;
use serde::Serialize;

use nullcorr::cohom::suite::{verify_suite, Suite, SuiteReport, Verdict};
use nullcorr::cohom::{CohomDim, Session, Table};
use nullcorr::exactlin::{Field, FieldSpec, PrimeField, Rationals};
use nullcorr::modspace::{
    certify_stability, hoppe_certificate, kuranishi, sweep_entry, HoppeCertificate,
    KuranishiReport, StabilityVerdict, SweepEntry, SweepVerdict,
};
use nullcorr::monad::{
    build_monad, chern, chern_whitney_check, validate_monad, FormSource, ValidationReport,
};
use nullcorr::polygrade::parse_form;
use nullcorr::ENGINE_VERSION;

use crate::config::{ConfigError, Forms, JobConfig, Task};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChernResult {
    pub c1: i64,
    pub c2: i64,
    pub whitney_check: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaperReport {
    pub suites: Vec<SuiteReport>,
    pub stability: SweepEntry,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum TaskResult {
    Validate(ValidationReport),
    Chern(ChernResult),
    CohomTable(Table),
    Stability(StabilityVerdict),
    Hoppe(HoppeCertificate),
    Kuranishi(KuranishiReport),
    VerifyPaper(PaperReport),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskStatus {
    Ok,
    Contradiction,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaskReport {
    pub task: Task,
    pub status: TaskStatus,
    pub contradictions: usize,
    pub undetermined: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<TaskResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub contradictions: usize,
    pub task_errors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub engine_version: String,
    pub config: JobConfig,
    pub field: FieldSpec,
    pub tasks: Vec<TaskReport>,
    pub undetermined: usize,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// 0 pass, 1 a computed contradiction, 2 a task that could not run.
    pub fn exit_code(&self) -> i32 {
        if self.summary.contradictions > 0 {
            1
        } else if self.summary.task_errors > 0 {
            2
        } else {
            0
        }
    }

    /// CSV text of every cohom-table task, in task order.
    pub fn csv_tables(&self) -> Vec<String> {
        self.tasks
            .iter()
            .filter_map(|t| match &t.result {
                Some(TaskResult::CohomTable(table)) => Some(table.to_csv()),
                _ => None,
            })
            .collect()
    }
}

fn undetermined<'a>(dims: impl IntoIterator<Item = &'a CohomDim>) -> usize {
    dims.into_iter().filter(|d| !d.is_determined()).count()
}

fn tally(result: &TaskResult) -> (usize, usize) {
    match result {
        TaskResult::Validate(v) => (usize::from(!v.identities_hold()), 0),
        TaskResult::Chern(c) => (usize::from(!c.whitney_check), 0),
        TaskResult::CohomTable(t) => (
            t.rows
                .iter()
                .filter(|r| r.euler_consistent == Some(false))
                .count(),
            t.undetermined(),
        ),
        TaskResult::Stability(v) => (
            usize::from(v.consistent == Some(false)),
            undetermined(
                std::iter::once(&v.simpleness).chain(
                    v.hoppe
                        .iter()
                        .flat_map(|h| h.conditions.iter().map(|c| &c.computed)),
                ),
            ),
        ),
        TaskResult::Hoppe(h) => (0, undetermined(h.conditions.iter().map(|c| &c.computed))),
        TaskResult::Kuranishi(k) => {
            let broken = [k.euler_consistent, k.identity.holds, k.bound.bound_holds];
            let dims = [
                &k.dim_kur_quotient,
                &k.identity.h1_qdual_h,
                &k.identity.h0_h_shifted,
                &k.identity.h0_end_h,
                &k.identity.h0_qdual_h,
                &k.bound.h1_qdual_n,
                &k.bound.h2_n_shifted,
            ];
            (
                broken.iter().filter(|b| **b == Some(false)).count(),
                undetermined(k.end_bundle_column.iter().chain(dims)),
            )
        }
        TaskResult::VerifyPaper(p) => (
            p.suites
                .iter()
                .map(SuiteReport::contradictions)
                .sum::<usize>()
                + usize::from(p.stability.verdict == SweepVerdict::Contradiction),
            p.suites
                .iter()
                .map(|s| s.count(Verdict::Undetermined))
                .sum::<usize>()
                + usize::from(p.stability.verdict == SweepVerdict::Undetermined),
        ),
    }
}

fn verify_paper<F: Field>(s: &Session<F>) -> Result<PaperReport, String> {
    let suites: Vec<SuiteReport> = Suite::ALL
        .iter()
        .map(|&suite| verify_suite(s, suite))
        .collect();
    let stability = sweep_entry(s).map_err(|e| e.to_string())?;
    let mut notes = vec![stability.note()];
    for rep in &suites {
        if let Some(trace) = &rep.aborted {
            notes.push(format!("{} aborted: {}", rep.suite, trace[0]));
        }
    }
    Ok(PaperReport {
        suites,
        stability,
        notes,
    })
}

fn run_task<F: Field>(s: &Session<F>, cfg: &JobConfig, task: &Task, parallel: bool) -> TaskReport {
    let w = &cfg.weights;
    let result: Result<TaskResult, String> = match task {
        Task::Validate => validate_monad(s.monad())
            .map(TaskResult::Validate)
            .map_err(|e| e.to_string()),
        Task::Chern => {
            let (c1, c2) = chern(w);
            Ok(TaskResult::Chern(ChernResult {
                c1,
                c2,
                whitney_check: chern_whitney_check(w),
            }))
        }
        Task::CohomTable { expr } => s
            .table(expr, cfg.twist_range.0, cfg.twist_range.1, parallel)
            .map(TaskResult::CohomTable)
            .map_err(|e| e.to_string()),
        Task::CertifyStability => certify_stability(s)
            .map(TaskResult::Stability)
            .map_err(|e| e.to_string()),
        Task::Hoppe { j } => hoppe_certificate(s, *j)
            .map(TaskResult::Hoppe)
            .map_err(|e| e.to_string()),
        Task::Kuranishi => kuranishi(s)
            .map(TaskResult::Kuranishi)
            .map_err(|e| e.to_string()),
        Task::VerifyPaper => verify_paper(s).map(TaskResult::VerifyPaper),
    };
    match result {
        Ok(r) => {
            let (contradictions, undetermined) = tally(&r);
            TaskReport {
                task: task.clone(),
                status: if contradictions > 0 {
                    TaskStatus::Contradiction
                } else {
                    TaskStatus::Ok
                },
                contradictions,
                undetermined,
                result: Some(r),
                error: None,
            }
        }
        Err(e) => TaskReport {
            task: task.clone(),
            status: TaskStatus::Error,
            contradictions: 0,
            undetermined: 0,
            result: None,
            error: Some(e),
        },
    }
}

fn run_in<F: Field>(field: F, cfg: JobConfig, parallel: bool) -> Result<Report, ConfigError> {
    let source = match &cfg.forms {
        Forms::Random { seed } => FormSource::SeededRandom(*seed),
        Forms::Explicit { f, g } => {
            let nv = cfg.weights.num_vars();
            let parse = |forms: &[Vec<String>]| {
                forms
                    .iter()
                    .map(|terms| parse_form(&field, nv, terms))
                    .collect::<Result<Vec<_>, _>>()
            };
            FormSource::Explicit {
                f: parse(f).map_err(nullcorr::monad::MonadError::from)?,
                g: parse(g).map_err(nullcorr::monad::MonadError::from)?,
            }
        }
    };
    let session = Session::new(build_monad(&field, &cfg.weights, source)?);
    let tasks: Vec<TaskReport> = if parallel {
        cfg.tasks
            .par_iter()
            .map(|t| run_task(&session, &cfg, t, true))
            .collect()
    } else {
        cfg.tasks
            .iter()
            .map(|t| run_task(&session, &cfg, t, false))
            .collect()
    };
    let contradictions = tasks.iter().map(|t| t.contradictions).sum();
    let task_errors = tasks
        .iter()
        .filter(|t| t.status == TaskStatus::Error)
        .count();
    Ok(Report {
        engine_version: ENGINE_VERSION.to_string(),
        field: cfg.field,
        undetermined: tasks.iter().map(|t| t.undetermined).sum(),
        summary: Summary {
            passed: contradictions == 0 && task_errors == 0,
            contradictions,
            task_errors,
        },
        tasks,
        config: cfg,
    })
}

/// Runs every task in order. With `parallel`, tasks run concurrently and are reported in order.
pub fn run(cfg: JobConfig, parallel: bool) -> Result<Report, ConfigError> {
    cfg.validate()?;
    match cfg.field {
        FieldSpec::PrimeField { p } => run_in(PrimeField::new(p)?, cfg, parallel),
        FieldSpec::Rationals => run_in(Rationals, cfg, parallel),
    }
}
