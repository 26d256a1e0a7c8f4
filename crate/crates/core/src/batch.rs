//! Verification over many independent `(seed, rule)` cases.
//!
//! With the `parallel` feature (on by default) cases are spread over a rayon
//! pool; without it, or with `jobs == 1`, they run on the calling thread.
//! Every entry point returns results in input order either way.

use crate::cf::det_check;
use crate::engel::{check_growth, EngelState, SeedConfig};
use crate::error::Result;
use crate::series::{verify_theorem, TheoremReport};

/// One `(seed, rule)` pair to generate to `terms` terms and verify.
#[derive(Clone, Debug)]
pub struct VerifyCase {
    pub config: SeedConfig,
    pub terms: usize,
}

/// Every module-level check for one state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseReport {
    pub theorem: Vec<TheoremReport>,
    pub recurrence: Option<usize>,
    pub growth: Vec<(usize, bool)>,
    pub base_determinant: bool,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.theorem.iter().all(TheoremReport::passed)
            && self.recurrence.is_none()
            && self.growth.iter().all(|&(_, ok)| ok)
            && self.base_determinant
    }
}

/// Runs `verify_theorem` for `n = 1..=len`, plus the recurrence, growth and
/// base determinant checks.
pub fn check_state(state: &EngelState) -> CaseReport {
    let ns: Vec<usize> = (1..=state.len()).collect();
    let theorem = map(&ns, |&n| verify_theorem(state, n).expect("n <= len"));
    CaseReport {
        theorem,
        recurrence: state.recurrence_violation(),
        growth: check_growth(state),
        base_determinant: det_check(state.base_convergents()),
    }
}

pub fn run_case(case: &VerifyCase, digit_budget: u64) -> Result<CaseReport> {
    let state = EngelState::generate(case.config.clone(), case.terms, digit_budget)?;
    Ok(check_state(&state))
}

/// Runs every case, in parallel when the `parallel` feature is on.
pub fn verify_batch(cases: &[VerifyCase], digit_budget: u64) -> Vec<Result<CaseReport>> {
    map(cases, |c| run_case(c, digit_budget))
}

/// Always single-threaded, regardless of features.
pub fn verify_batch_sequential(cases: &[VerifyCase], digit_budget: u64) -> Vec<Result<CaseReport>> {
    cases.iter().map(|c| run_case(c, digit_budget)).collect()
}

/// Like [`verify_batch`] with at most `jobs` worker threads. `jobs <= 1` is sequential.
pub fn verify_batch_with_jobs(
    cases: &[VerifyCase],
    digit_budget: u64,
    jobs: usize,
) -> Vec<Result<CaseReport>> {
    if jobs <= 1 {
        return verify_batch_sequential(cases, digit_budget);
    }
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| verify_batch(cases, digit_budget)),
            Err(_) => verify_batch_sequential(cases, digit_budget),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        verify_batch_sequential(cases, digit_budget)
    }
}

/// Order-preserving map over a slice, parallel when available.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
