//! Experiment runner: instance families x solvers x noise values, measuring
//! success rates and runtimes.
//!
//! Every claimed model is re-verified against the parsed theory before a run
//! counts as solved; a verification failure marks the run invalid and the
//! plan continues. For the `wsat` solver, instances are first translated by
//! the binary-counting compiler and the baseline walksat runs on the CNF;
//! reported times cover solving only, never parsing or compilation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use rayon::prelude::*;

use crate::compile::{compile_bc, CompiledCnf};
use crate::io::parse_ccnf;
use crate::solve::{solve, solve_cnf, Outcome, SolveResult, SolverConfig, SolverKind};
use crate::theory::{Assignment, Theory};

#[derive(Clone, Debug)]
pub struct BenchPlan {
    /// CCNF instance files.
    pub instances: Vec<PathBuf>,
    pub solvers: Vec<SolverKind>,
    pub noise: Vec<f64>,
    pub max_tries: u32,
    pub max_flips: u64,
    /// Per-run wall-clock budget.
    pub timeout: Duration,
    /// Runs per (instance, solver, noise) cell; repetition `r` uses seed
    /// `seed + r`.
    pub reps: u32,
    pub seed: u64,
    /// Concurrent cells. 1 keeps timing measurements clean.
    pub workers: usize,
}

impl Default for BenchPlan {
    fn default() -> BenchPlan {
        BenchPlan {
            instances: Vec::new(),
            solvers: vec![SolverKind::VirtualBreak, SolverKind::DoubleFlip],
            noise: vec![0.1, 0.2, 0.3, 0.4],
            max_tries: 100,
            max_flips: 100_000,
            timeout: Duration::from_secs(120),
            reps: 1,
            seed: 1,
            workers: 1,
        }
    }
}

/// One measured run.
#[derive(Clone, PartialEq, Debug)]
pub struct RunRecord {
    pub instance: String,
    pub solver: String,
    pub seed: u64,
    pub noise: f64,
    pub solved: bool,
    pub tries_used: u32,
    pub flips_used: u64,
    pub elapsed: Duration,
    /// Why an unsolved run failed, when it failed outside the solver.
    pub note: Option<String>,
}

/// Executes every (instance, solver, noise, repetition) cell. Per-cell
/// failures (unreadable instance, refused solver, invalid model) become
/// unsolved records with a note; the plan never aborts on one bad cell.
pub fn run_plan(plan: &BenchPlan) -> Vec<RunRecord> {
    struct Cell {
        instance: String,
        parsed: Result<Theory, String>,
        compiled: Option<CompiledCnf>,
        solver: SolverKind,
        noise: f64,
        seed: u64,
    }

    let mut cells = Vec::new();
    for path in &plan.instances {
        let instance = path.display().to_string();
        let parsed = std::fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|text| parse_ccnf(&text).map_err(|e| e.to_string()));
        // the wsat pipeline shares one compilation per instance
        let compiled = match (&parsed, plan.solvers.contains(&SolverKind::WsatCnf)) {
            (Ok(theory), true) => Some(compile_bc(theory)),
            _ => None,
        };
        for &solver in &plan.solvers {
            for &noise in &plan.noise {
                for rep in 0..plan.reps {
                    cells.push(Cell {
                        instance: instance.clone(),
                        parsed: parsed.clone(),
                        compiled: compiled.clone(),
                        solver,
                        noise,
                        seed: plan.seed + rep as u64,
                    });
                }
            }
        }
    }

    let run_cell = |cell: &Cell| -> RunRecord {
        let mut record = RunRecord {
            instance: cell.instance.clone(),
            solver: cell.solver.name().to_string(),
            seed: cell.seed,
            noise: cell.noise,
            solved: false,
            tries_used: 0,
            flips_used: 0,
            elapsed: Duration::ZERO,
            note: None,
        };
        let theory = match &cell.parsed {
            Ok(t) => t,
            Err(e) => {
                record.note = Some(format!("parse error: {e}"));
                return record;
            }
        };
        let cfg = SolverConfig {
            solver: cell.solver,
            max_tries: plan.max_tries,
            max_flips: plan.max_flips,
            noise: cell.noise,
            seed: cell.seed,
            timeout: Some(plan.timeout),
            df_joint_breakcount: false,
        };
        let outcome: Result<SolveResult, _> = match cell.solver {
            SolverKind::WsatCnf => {
                let compiled = cell.compiled.as_ref().expect("compiled for wsat");
                solve_cnf(&compiled.to_cnf(), &cfg).map(|result| {
                    let model = result
                        .model
                        .as_ref()
                        .map(|m| Assignment::from_values(compiled.project_model(m.values())));
                    SolveResult { model, ..result }
                })
            }
            _ => solve(theory, &cfg),
        };
        match outcome {
            Err(e) => record.note = Some(e.to_string()),
            Ok(result) => {
                record.tries_used = result.tries_used;
                record.flips_used = result.flips_used;
                record.elapsed = result.elapsed;
                if result.outcome == Outcome::ModelFound {
                    // independent verification gate
                    match result.model {
                        Some(model) if theory.eval(&model) => record.solved = true,
                        _ => record.note = Some("model failed verification".into()),
                    }
                }
            }
        }
        record
    };

    let mut records: Vec<RunRecord> = if plan.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(plan.workers)
            .build()
            .expect("thread pool");
        pool.install(|| cells.par_iter().map(run_cell).collect())
    } else {
        cells.iter().map(run_cell).collect()
    };

    // deterministic merge regardless of completion order
    records.sort_by(|a, b| {
        (&a.instance, &a.solver, a.noise, a.seed)
            .partial_cmp(&(&b.instance, &b.solver, b.noise, b.seed))
            .expect("noise values are never NaN")
    });
    records
}

/// Success-rate and mean-runtime table row for one (family, solver, noise).
#[derive(Clone, PartialEq, Debug)]
pub struct SummaryRow {
    pub family: String,
    pub solver: String,
    pub noise: f64,
    /// Distinct instances this cell solved in at least one repetition.
    pub solved: usize,
    /// Distinct instances of the family.
    pub instances: usize,
    /// Distinct instances of the family solved by any cell of the plan, the
    /// alternative denominator from the any-method convention.
    pub any_method_solved: usize,
    /// Runs in this cell (instances times repetitions).
    pub runs: usize,
    /// Mean elapsed milliseconds over this cell's solved runs, when any.
    pub mean_ms: Option<f64>,
}

impl SummaryRow {
    /// Success rate against the whole family. For planted families every
    /// instance is satisfiable and this is the measure to report.
    pub fn rate_total(&self) -> f64 {
        if self.instances == 0 {
            0.0
        } else {
            self.solved as f64 / self.instances as f64
        }
    }

    /// Success rate against the instances any method in the plan solved,
    /// for exploratory families without a satisfiability guarantee.
    pub fn rate_any_method(&self) -> Option<f64> {
        (self.any_method_solved > 0).then(|| self.solved as f64 / self.any_method_solved as f64)
    }
}

/// Groups records by (family, solver, noise), where an instance's family is
/// its parent directory name. Pure function of the records.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    type InstanceSet<'a> = std::collections::BTreeSet<&'a str>;
    let family_of = |instance: &str| -> String {
        PathBuf::from(instance)
            .parent()
            .and_then(|p| p.file_name())
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| ".".into())
    };

    // distinct instances and any-method solved sets per family
    let mut family_instances: BTreeMap<String, InstanceSet> = BTreeMap::new();
    let mut family_solved: BTreeMap<String, InstanceSet> = BTreeMap::new();
    for r in records {
        let fam = family_of(&r.instance);
        family_instances
            .entry(fam.clone())
            .or_default()
            .insert(&r.instance);
        if r.solved {
            family_solved.entry(fam).or_default().insert(&r.instance);
        }
    }

    struct Cell<'a> {
        solved: InstanceSet<'a>,
        runs: usize,
        solved_runs: usize,
        ms_sum: f64,
    }
    let mut cells: BTreeMap<(String, String, String), Cell> = BTreeMap::new();
    for r in records {
        let key = (
            family_of(&r.instance),
            r.solver.clone(),
            format!("{}", r.noise),
        );
        let cell = cells.entry(key).or_insert(Cell {
            solved: InstanceSet::new(),
            runs: 0,
            solved_runs: 0,
            ms_sum: 0.0,
        });
        cell.runs += 1;
        if r.solved {
            cell.solved.insert(&r.instance);
            cell.solved_runs += 1;
            cell.ms_sum += r.elapsed.as_secs_f64() * 1000.0;
        }
    }

    cells
        .into_iter()
        .map(|((family, solver, noise), cell)| SummaryRow {
            any_method_solved: family_solved.get(&family).map_or(0, InstanceSet::len),
            instances: family_instances.get(&family).map_or(0, InstanceSet::len),
            mean_ms: (cell.solved_runs > 0).then(|| cell.ms_sum / cell.solved_runs as f64),
            family,
            solver,
            noise: noise.parse().expect("formatted from f64"),
            solved: cell.solved.len(),
            runs: cell.runs,
        })
        .collect()
}

/// Renders the summary as an aligned text table with both success-rate
/// denominators (all instances, any-method-solved instances).
pub fn format_summary(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<20} {:<6} {:>5} {:>9} {:>9} {:>9} {:>10}",
        "family", "solver", "noise", "solved", "success", "succ_any", "mean_ms"
    )
    .unwrap();
    for row in rows {
        writeln!(
            out,
            "{:<20} {:<6} {:>5} {:>5}/{:<3} {:>8.0}% {:>9} {:>10}",
            row.family,
            row.solver,
            row.noise,
            row.solved,
            row.instances,
            row.rate_total() * 100.0,
            row.rate_any_method()
                .map_or_else(|| "-".into(), |r| format!("{:.0}%", r * 100.0)),
            row.mean_ms
                .map_or_else(|| "-".into(), |ms| format!("{ms:.1}")),
        )
        .unwrap();
    }
    out
}

/// Serializes records as CSV with a pinned header and stable ordering.
pub fn emit_csv(records: &[RunRecord]) -> String {
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.instance, &a.solver, a.noise, a.seed)
            .partial_cmp(&(&b.instance, &b.solver, b.noise, b.seed))
            .expect("noise values are never NaN")
    });
    let mut out = String::from("instance,solver,seed,noise,solved,tries_used,flips_used,time_ms\n");
    for r in sorted {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.instance,
            r.solver,
            r.seed,
            r.noise,
            r.solved,
            r.tries_used,
            r.flips_used,
            r.elapsed.as_millis()
        )
        .unwrap();
    }
    out
}
