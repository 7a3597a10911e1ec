//! Execution strategy for grid evaluations.
//!
//! Every sweep in the crate maps an independent function over a grid and
//! collects results in grid order, so output never depends on how the work
//! was partitioned. With the `parallel` feature the work is spread over the
//! rayon pool; without it (or with [`Exec::Sequential`]) it runs in a plain
//! iterator.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Like [`Exec::map`] but stops at an error. Which error is reported
    /// when several points fail is the first one in grid order.
    pub fn try_map<T, R, E, F>(self, items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(&T) -> Result<R, E> + Sync + Send,
    {
        // Collecting every result first keeps the reported error stable.
        self.map(items, f).into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_preserve_order() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.37).collect();
        let seq = Exec::Sequential.map(&xs, |x| x.sin() * x);
        let par = Exec::Parallel.map(&xs, |x| x.sin() * x);
        assert_eq!(seq, par);
    }

    #[test]
    fn try_map_reports_first_error() {
        let xs: Vec<i32> = (0..100).collect();
        let r: Result<Vec<i32>, i32> =
            Exec::Parallel.try_map(&xs, |&x| if x % 30 == 7 { Err(x) } else { Ok(x) });
        assert_eq!(r, Err(7));
    }
}
