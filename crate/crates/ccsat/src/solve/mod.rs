//! Walksat-style local search for theories with cardinality atoms.
//!
//! All solvers share one restart/flip skeleton: each try starts from a fresh
//! random assignment and performs up to `max_flips` flips; a flip picks a
//! uniformly random unsatisfied clause, computes break-counts for every atom
//! occurring in it (including atoms inside cardinality atoms), flips a
//! break-count-0 atom if one exists ("freebie"), and otherwise takes a
//! uniformly random candidate with probability `noise` or the
//! minimum-break-count atom with probability `1 - noise`. This is the
//! original walksat noise convention: `noise` is the probability of the
//! *random* move.
//!
//! The instantiations differ in the break-count and the flip:
//!
//! - [`SolverKind::VirtualBreak`]: single flips; break-counts are measured
//!   against the subset-expansion CNF image of the theory, computed in
//!   closed form without materializing it (see
//!   [`SolverInstance::vb_break`]). Break-count values can be binomial-sized,
//!   so they are exact big integers.
//! - [`SolverKind::DoubleFlip`]: standard break-counts over the
//!   propositional part of a *simple* theory; a flip that would break a
//!   counting constraint drags along an opposite-valued companion from the
//!   same constraint, so counting constraints stay satisfied from the
//!   specially drawn initial assignment onwards.
//! - [`SolverKind::WsatCnf`]: plain walksat on propositional clauses, the
//!   baseline for compile-then-solve pipelines.

mod double_flip;
mod instance;

pub use double_flip::DfContext;
pub use instance::{SearchState, SolverInstance};

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::io::Cnf;
use crate::theory::{classify_simple, Assignment, NotSimple, Theory};

/// Arbitrary-precision break-count value.
pub type UnboundedCount = BigUint;

/// Number of expansion clauses of a cardinality atom that are fully false at
/// true count `t`: `C(t, m+1) + C(n-t, n-k+1)` with effective bounds and
/// `C(a,b) = 0` for `b > a`. Nonzero exactly when the atom is false at `t`.
pub fn falsecount(c: &crate::theory::CAtom, t: u32) -> UnboundedCount {
    assert!(t <= c.size(), "true count exceeds set size");
    let n = c.size() as u64;
    let m_hat = c.effective_upper().min(c.size()) as u64;
    let k_hat = c.effective_lower().min(c.size() + 1) as u64;
    let (neg, pos) = falsecount_parts(n, k_hat, m_hat);
    &neg[t as usize] + &pos[t as usize]
}

/// Tables of the two falsecount terms for all true counts `0..=n`.
pub(crate) fn falsecount_parts(n: u64, k_hat: u64, m_hat: u64) -> (Vec<BigUint>, Vec<BigUint>) {
    use crate::compile::binomial;
    let neg: Vec<BigUint> = (0..=n).map(|t| binomial(t, m_hat + 1)).collect();
    let pos: Vec<BigUint> = (0..=n)
        .map(|t| {
            if k_hat == 0 {
                BigUint::ZERO
            } else {
                binomial(n - t, n + 1 - k_hat)
            }
        })
        .collect();
    (neg, pos)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolverKind {
    /// Native solver with virtual break-counts, single flips.
    VirtualBreak,
    /// Native solver with double flips; requires a simple theory.
    DoubleFlip,
    /// Plain walksat over propositional clauses only.
    WsatCnf,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::VirtualBreak => "vb",
            SolverKind::DoubleFlip => "df",
            SolverKind::WsatCnf => "wsat",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub solver: SolverKind,
    pub max_tries: u32,
    pub max_flips: u64,
    /// Probability of a random (non-greedy) move at a non-freebie step.
    pub noise: f64,
    pub seed: u64,
    /// Wall-clock budget; checked between flip batches.
    pub timeout: Option<Duration>,
    /// Double flip only: let the companion choice minimize the breakage of
    /// flipping both atoms together instead of the companion alone.
    pub df_joint_breakcount: bool,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            solver: SolverKind::VirtualBreak,
            max_tries: 100,
            max_flips: 100_000,
            noise: 0.4,
            seed: 1,
            timeout: None,
            df_joint_breakcount: false,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    ModelFound,
    Unknown,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub model: Option<Assignment>,
    pub tries_used: u32,
    pub flips_used: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("double-flip solver refused: {0}")]
    NotSimple(NotSimple),
    #[error("cnf walksat cannot handle cardinality atoms; compile first")]
    CardAtomsPresent,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl From<NotSimple> for SolveError {
    fn from(e: NotSimple) -> SolveError {
        SolveError::NotSimple(e)
    }
}

/// Solves a theory with the configured solver. The theory is normalized
/// internally; any returned model satisfies the *input* theory (checked via
/// [`Theory::eval`] before returning).
pub fn solve(theory: &Theory, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    validate(cfg)?;
    let normalized = theory.normalize();
    let inst = SolverInstance::new(&normalized);
    let result = match cfg.solver {
        SolverKind::VirtualBreak => run(&inst, cfg, &VbStrategy),
        SolverKind::DoubleFlip => {
            let partition = classify_simple(&normalized)?;
            let ctx = DfContext::new(&inst, &partition);
            if !ctx.feasible() {
                // some counting constraint admits no assignment at all
                return Ok(SolveResult {
                    outcome: Outcome::Unknown,
                    model: None,
                    tries_used: 0,
                    flips_used: 0,
                    elapsed: Duration::ZERO,
                });
            }
            let strategy = DfStrategy {
                ctx,
                joint: cfg.df_joint_breakcount,
            };
            run(&inst, cfg, &strategy)
        }
        SolverKind::WsatCnf => {
            if normalized
                .clauses()
                .iter()
                .any(|c| c.literals().iter().any(|l| !l.is_propositional()))
            {
                return Err(SolveError::CardAtomsPresent);
            }
            run(&inst, cfg, &CnfStrategy)
        }
    };
    if let Some(model) = &result.model {
        assert!(theory.eval(model), "solver returned a non-model");
    }
    Ok(result)
}

/// Plain walksat over a CNF. Unsatisfiable-by-empty-clause inputs report
/// `Unknown` immediately.
pub fn solve_cnf(cnf: &Cnf, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    validate(cfg)?;
    if cnf.has_empty_clause() {
        return Ok(SolveResult {
            outcome: Outcome::Unknown,
            model: None,
            tries_used: 0,
            flips_used: 0,
            elapsed: Duration::ZERO,
        });
    }
    let theory = cnf
        .to_theory()
        .map_err(|e| SolveError::InvalidConfig(e.to_string()))?;
    let inst = SolverInstance::new(&theory);
    let result = run(&inst, cfg, &CnfStrategy);
    if let Some(model) = &result.model {
        assert!(theory.eval(model), "solver returned a non-model");
    }
    Ok(result)
}

fn validate(cfg: &SolverConfig) -> Result<(), SolveError> {
    if !(0.0..=1.0).contains(&cfg.noise) {
        return Err(SolveError::InvalidConfig(format!(
            "noise {} not in [0,1]",
            cfg.noise
        )));
    }
    if cfg.max_tries < 1 || cfg.max_flips < 1 {
        return Err(SolveError::InvalidConfig(
            "max_tries and max_flips must be at least 1".into(),
        ));
    }
    Ok(())
}

/// How a concrete solver initializes, scores and flips.
pub(crate) trait Strategy {
    type Count: Ord + Zero;
    fn initial(&self, inst: &SolverInstance, rng: &mut ChaCha8Rng) -> Vec<bool>;
    fn break_count(&self, inst: &SolverInstance, state: &SearchState, atom: u32) -> Self::Count;
    fn flip(&self, inst: &SolverInstance, state: &mut SearchState, atom: u32, rng: &mut ChaCha8Rng);
}

struct VbStrategy;

impl Strategy for VbStrategy {
    type Count = BigUint;

    fn initial(&self, inst: &SolverInstance, rng: &mut ChaCha8Rng) -> Vec<bool> {
        (0..inst.num_atoms()).map(|_| rng.random()).collect()
    }

    fn break_count(&self, inst: &SolverInstance, state: &SearchState, atom: u32) -> BigUint {
        inst.vb_break(state, atom)
    }

    fn flip(
        &self,
        inst: &SolverInstance,
        state: &mut SearchState,
        atom: u32,
        _rng: &mut ChaCha8Rng,
    ) {
        inst.flip(state, atom);
    }
}

struct CnfStrategy;

impl Strategy for CnfStrategy {
    type Count = u64;

    fn initial(&self, inst: &SolverInstance, rng: &mut ChaCha8Rng) -> Vec<bool> {
        (0..inst.num_atoms()).map(|_| rng.random()).collect()
    }

    fn break_count(&self, inst: &SolverInstance, state: &SearchState, atom: u32) -> u64 {
        inst.cnf_break(state, atom, None)
    }

    fn flip(
        &self,
        inst: &SolverInstance,
        state: &mut SearchState,
        atom: u32,
        _rng: &mut ChaCha8Rng,
    ) {
        inst.flip(state, atom);
    }
}

struct DfStrategy {
    ctx: DfContext,
    joint: bool,
}

impl Strategy for DfStrategy {
    type Count = u64;

    fn initial(&self, inst: &SolverInstance, rng: &mut ChaCha8Rng) -> Vec<bool> {
        self.ctx.initial_assignment(inst, rng)
    }

    fn break_count(&self, inst: &SolverInstance, state: &SearchState, atom: u32) -> u64 {
        if self.joint {
            self.ctx.joint_break(inst, state, atom)
        } else {
            self.ctx.break_count(inst, state, atom)
        }
    }

    fn flip(
        &self,
        inst: &SolverInstance,
        state: &mut SearchState,
        atom: u32,
        rng: &mut ChaCha8Rng,
    ) {
        self.ctx.flip(inst, state, atom, self.joint, rng);
    }
}

/// Flips between wall-clock checks.
const TIMEOUT_BATCH: u64 = 1024;

fn run<S: Strategy>(inst: &SolverInstance, cfg: &SolverConfig, strategy: &S) -> SolveResult {
    let start = Instant::now();
    let deadline = cfg.timeout.map(|t| start + t);
    let mut flips_total: u64 = 0;

    for try_index in 1..=cfg.max_tries {
        // independent, reproducible substream per try
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(try_index as u64);

        let mut state = inst.new_state(strategy.initial(inst, &mut rng));

        for _ in 0..cfg.max_flips {
            if state.is_model() {
                return SolveResult {
                    outcome: Outcome::ModelFound,
                    model: Some(state.to_assignment()),
                    tries_used: try_index,
                    flips_used: flips_total,
                    elapsed: start.elapsed(),
                };
            }
            if let Some(deadline) = deadline {
                if flips_total.is_multiple_of(TIMEOUT_BATCH) && Instant::now() >= deadline {
                    return SolveResult {
                        outcome: Outcome::Unknown,
                        model: None,
                        tries_used: try_index,
                        flips_used: flips_total,
                        elapsed: start.elapsed(),
                    };
                }
            }

            let unsat = state.unsat_clauses();
            let clause = unsat[rng.random_range(0..unsat.len())];
            let candidates = inst.candidates(clause);
            debug_assert!(!candidates.is_empty());

            let breaks: Vec<S::Count> = candidates
                .iter()
                .map(|&a| strategy.break_count(inst, &state, a))
                .collect();

            let freebies: Vec<usize> = breaks
                .iter()
                .enumerate()
                .filter(|(_, b)| b.is_zero())
                .map(|(i, _)| i)
                .collect();

            let chosen = if !freebies.is_empty() {
                freebies[rng.random_range(0..freebies.len())]
            } else if rng.random::<f64>() < cfg.noise {
                rng.random_range(0..candidates.len())
            } else {
                // greedy: among minimum break-counts, uniformly
                let min = breaks.iter().min().expect("candidates non-empty");
                let mins: Vec<usize> = breaks
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| *b == min)
                    .map(|(i, _)| i)
                    .collect();
                mins[rng.random_range(0..mins.len())]
            };

            strategy.flip(inst, &mut state, candidates[chosen], &mut rng);
            flips_total += 1;
        }
    }

    SolveResult {
        outcome: Outcome::Unknown,
        model: None,
        tries_used: cfg.max_tries,
        flips_used: flips_total,
        elapsed: start.elapsed(),
    }
}
