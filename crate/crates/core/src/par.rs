//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) batch operations fan out over
//! rayon's global pool. Without it, or when a caller asks for
//! [`Execution::Sequential`], the same closures run on the calling thread.
//! Results are always returned in input order, so both paths produce
//! identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

pub fn flat_map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().flat_map_iter(f).collect();
    }
    let _ = exec;
    items.iter().flat_map(f).collect()
}

pub fn try_map<T, R, E, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let items: Vec<u32> = (0..1000).collect();
        let seq = map(Execution::Sequential, &items, |x| x * 3);
        let par = map(Execution::Parallel, &items, |x| x * 3);
        assert_eq!(seq, par);
        let seq = flat_map(Execution::Sequential, &items, |x| {
            vec![*x; (*x % 3) as usize]
        });
        let par = flat_map(Execution::Parallel, &items, |x| vec![*x; (*x % 3) as usize]);
        assert_eq!(seq, par);
    }
}
