//! The work pool. `FRECHET_APPROX_THREADS` caps its size; serial runs use
//! one thread so every reduction happens in a fixed order.

use crate::error::{CliError, CliResult};

pub const THREADS_VAR: &str = "FRECHET_APPROX_THREADS";

pub fn thread_count(serial: bool) -> CliResult<usize> {
    if serial {
        return Ok(1);
    }
    let available = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(available),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n.min(available)),
            _ => Err(CliError::Config(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))),
        },
    }
}

/// Runs `f` on a dedicated pool sized by [`thread_count`].
pub fn run_in_pool<T: Send>(serial: bool, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(serial)?)
        .build()
        .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}
