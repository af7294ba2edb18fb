use rayon::ThreadPoolBuilder;

pub const THREADS_ENV: &str = "PENCIL_MONODROMY_THREADS";

/// Thread cap from the environment, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n: &usize| n > 0)
}

/// Runs `f` on a pool honouring the thread cap, or the global pool.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    match thread_cap().and_then(|n| ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}
