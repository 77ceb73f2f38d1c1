//! Point-set generators used by tests, benchmarks and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{GridPoint, GridPointSet};
use crate::ratio::{self, Eps};

/// `len` points drawn uniformly (with repetition) from the grid.
pub fn uniform(n: u32, len: usize, seed: u64) -> Result<GridPointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..len)
        .map(|_| GridPoint::new(rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    GridPointSet::new(n, pts)
}

/// `(i, i)` for every column.
pub fn diagonal(n: u32) -> Result<GridPointSet> {
    GridPointSet::new(n, (0..n).map(|i| GridPoint::new(i, i)).collect())
}

/// `n` points in `ceil(1/eps)` co-located groups of `ceil(eps n)` points
/// (the last group takes the remainder), each group at a random cell.
pub fn clusters(n: u32, eps: Eps, seed: u64) -> Result<GridPointSet> {
    ratio::check_eps(eps)?;
    let size = ratio::ceil_mul(eps, u64::from(n)).max(1) as usize;
    if n == 0 {
        return Err(Error::param("grid side must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n as usize);
    while pts.len() < n as usize {
        let at = GridPoint::new(rng.gen_range(0..n), rng.gen_range(0..n));
        let take = size.min(n as usize - pts.len());
        pts.extend(std::iter::repeat_n(at, take));
    }
    GridPointSet::new(n, pts)
}

/// Named families for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Uniform,
    Diagonal,
    Clusters,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Uniform, Family::Diagonal, Family::Clusters];

    pub fn name(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Diagonal => "diagonal",
            Family::Clusters => "clusters",
        }
    }

    /// An `n`-point member on the `n x n` grid.
    pub fn generate(self, n: u32, eps: Eps, seed: u64) -> Result<GridPointSet> {
        match self {
            Family::Uniform => uniform(n, n as usize, seed),
            Family::Diagonal => diagonal(n),
            Family::Clusters => clusters(n, eps, seed),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::param(format!("unknown point family '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(uniform(16, 40, 1).unwrap().len(), 40);
        assert_eq!(uniform(16, 40, 1).unwrap(), uniform(16, 40, 1).unwrap());
        let d = diagonal(8).unwrap();
        assert!(d.points().iter().all(|q| q.x == q.y));
        let c = clusters(100, Eps::new(1, 8), 3).unwrap();
        assert_eq!(c.len(), 100);
        let mut distinct = c.points().to_vec();
        distinct.sort();
        distinct.dedup();
        assert!(distinct.len() <= 8);
        assert_eq!("clusters".parse::<Family>().unwrap(), Family::Clusters);
        assert!("grid".parse::<Family>().is_err());
    }
}
