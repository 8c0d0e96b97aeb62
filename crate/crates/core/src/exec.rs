//! Execution strategy for the data-parallel loops (scenario sweeps, column
//! entropies, batch ranking).
//!
//! With the `parallel` feature the default strategy fans work out over the
//! rayon global pool; without it everything runs on the calling thread.
//! Results are always collected in input order, so both strategies produce
//! bit-identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    /// Every strategy compiled into this build.
    pub fn available() -> &'static [Exec] {
        #[cfg(feature = "parallel")]
        {
            &[Exec::Sequential, Exec::Parallel]
        }
        #[cfg(not(feature = "parallel"))]
        {
            &[Exec::Sequential]
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Exec::Sequential => "sequential",
            #[cfg(feature = "parallel")]
            Exec::Parallel => "parallel",
        }
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }

    /// Like [`Exec::map`] but fallible. The error reported is always the one
    /// from the lowest failing index, regardless of strategy.
    pub fn try_map<T, R, F>(self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}
