//! Exact enumeration of points and fields of bounded height, and the
//! comparison of counts with predicted main terms.

pub mod points;
pub mod quadratic;
pub mod report;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use points::{count_imaginary_quadratic, count_primitive, count_rational, ellipse_count};
pub use quadratic::{
    count_quadratic_points_p1, delta_of_field, n_delta, n_disc, FieldCensusEntry, NDeltaReport, QuadraticCount,
};
pub use report::{
    field_report, primitive_report, quadratic_p1_constant, quadratic_p1_report, rational_report, residual_analysis,
    CountReport, CountRow, ResidualFit,
};

/// How work items are dealt to chunks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Partition {
    /// Consecutive blocks of the index range.
    Contiguous,
    /// Index `i` goes to chunk `i mod chunks`.
    Interleaved,
}

impl std::str::FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contiguous" => Ok(Partition::Contiguous),
            "interleaved" => Ok(Partition::Interleaved),
            other => Err(Error::Parse(format!("unknown partition strategy {other:?}"))),
        }
    }
}

/// Fixed partition schedule for a counting run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub workers: usize,
    pub partition: Partition,
    pub chunks: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            workers: 1,
            partition: Partition::Contiguous,
            chunks: 64,
        }
    }
}

impl Schedule {
    pub fn new(workers: usize, partition: Partition) -> Self {
        Schedule {
            workers: workers.max(1),
            partition,
            ..Schedule::default()
        }
    }

    fn chunk_indices(&self, len: usize, chunk: usize) -> Box<dyn Iterator<Item = usize>> {
        let k = self.chunks.max(1);
        match self.partition {
            Partition::Contiguous => {
                let size = len.div_ceil(k);
                let lo = (chunk * size).min(len);
                let hi = ((chunk + 1) * size).min(len);
                Box::new(lo..hi)
            }
            Partition::Interleaved => Box::new((chunk..len).step_by(k)),
        }
    }

    /// Folds `map(i)` for `i in 0..len` with an associative, commutative
    /// `combine`. Chunks run on a pool of `workers` threads; the chunk
    /// results are combined in chunk order.
    pub fn map_reduce<T, M, C>(&self, len: usize, identity: T, map: M, combine: C) -> Result<T>
    where
        T: Clone + Send + Sync,
        M: Fn(usize) -> Result<T> + Sync,
        C: Fn(T, T) -> T + Sync,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.max(1))
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        let parts: Vec<T> = pool.install(|| {
            (0..self.chunks.max(1))
                .into_par_iter()
                .map(|c| {
                    self.chunk_indices(len, c)
                        .try_fold(identity.clone(), |acc, i| Ok(combine(acc, map(i)?)))
                })
                .collect::<Result<Vec<T>>>()
        })?;
        Ok(parts.into_iter().fold(identity, combine))
    }
}
