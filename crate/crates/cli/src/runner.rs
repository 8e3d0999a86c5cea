//! Hosted implementations of the core's grid runner and clock.

use std::time::Instant;

use ctproof_core::synd::{Clock, GridRunner, SequentialRunner};
use rayon::prelude::*;
use rayon::ThreadPool;

/// Evaluates grid points on a dedicated thread pool. `position_first`
/// reports the earliest failing index in slice order, so the result does
/// not depend on scheduling.
pub struct ParallelRunner {
    pool: ThreadPool,
}

impl ParallelRunner {
    pub fn new(jobs: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
        Ok(ParallelRunner { pool })
    }
}

impl GridRunner for ParallelRunner {
    fn first_failure(&self, indices: &[u64], ok: &(dyn Fn(u64) -> bool + Sync)) -> Option<usize> {
        self.pool.install(|| indices.par_iter().position_first(|&i| !ok(i)))
    }
}

/// Sequential for one job, a thread pool otherwise.
pub fn runner_for(jobs: usize) -> Result<Box<dyn GridRunner>, rayon::ThreadPoolBuildError> {
    if jobs <= 1 {
        Ok(Box::new(SequentialRunner))
    } else {
        Ok(Box::new(ParallelRunner::new(jobs)?))
    }
}

pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        WallClock(Instant::now())
    }
}

impl Clock for WallClock {
    fn now_micros(&self) -> u64 {
        u64::try_from(self.0.elapsed().as_micros()).unwrap_or(u64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_sequential() {
        let idx: Vec<u64> = (0..10_000).collect();
        let ok = |i: u64| i % 997 != 996 || i < 3000;
        let par = ParallelRunner::new(4).unwrap();
        assert_eq!(par.first_failure(&idx, &ok), SequentialRunner.first_failure(&idx, &ok));
        assert_eq!(par.first_failure(&idx, &ok), Some(3987));
        assert_eq!(par.first_failure(&idx, &|_| true), None);
    }
}
