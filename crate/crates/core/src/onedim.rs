//! The one-dimensional counting argument: `1/eps` clusters of `eps n`
//! co-located points on a line of `n` cells give `n^(1/eps)` placements, and
//! any two different point sets disagree by at least `eps n` on some prefix,
//! so a summary with additive error below `eps n / 2` must tell them apart.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ratio::Eps;

/// Largest number of ordered placements [`enumerate_onedim`] will visit.
pub const MAX_PLACEMENTS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneDimReport {
    pub n: u32,
    pub groups: u32,
    pub cluster_size: u32,
    /// Ordered cluster placements, `n^groups`.
    pub placements: u64,
    /// Different point sets among them (placements up to reordering).
    pub distinct_sets: u64,
    pub pairs_checked: u64,
    /// Smallest over pairs of the largest prefix-count difference.
    pub min_prefix_gap: u64,
}

impl OneDimReport {
    pub fn all_distinguished(&self) -> bool {
        self.pairs_checked == 0 || self.min_prefix_gap >= u64::from(self.cluster_size)
    }
}

/// Enumerates every placement of `1/eps` clusters of `eps n` points on
/// `0..n` and checks prefix distinguishability among the distinct sets.
pub fn enumerate_onedim(n: u32, eps: Eps) -> Result<OneDimReport> {
    if n == 0 {
        return Err(Error::param("n must be positive"));
    }
    if *eps.numer() != 1 || *eps.denom() == 0 {
        return Err(Error::param("1/eps must be an integer"));
    }
    let groups = *eps.denom();
    if !n.is_multiple_of(groups) {
        return Err(Error::param(format!(
            "eps n = {n}/{groups} must be an integer cluster size"
        )));
    }
    let cluster_size = n / groups;
    let placements = u64::from(n)
        .checked_pow(groups)
        .filter(|&p| p <= MAX_PLACEMENTS)
        .ok_or_else(|| {
            Error::param(format!(
                "{n}^{groups} placements exceed the limit of {MAX_PLACEMENTS}"
            ))
        })?;

    let mut sets: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut tuple = vec![0u32; groups as usize];
    for code in 0..placements {
        let mut rest = code;
        for slot in tuple.iter_mut() {
            *slot = (rest % u64::from(n)) as u32;
            rest /= u64::from(n);
        }
        let mut key = tuple.clone();
        key.sort_unstable();
        sets.insert(key);
    }

    // prefix(q) = cluster_size * #{clusters at positions < q}
    let prefixes: Vec<Vec<u64>> = sets
        .iter()
        .map(|s| {
            (0..=n)
                .map(|q| u64::from(cluster_size) * s.iter().filter(|&&p| p < q).count() as u64)
                .collect()
        })
        .collect();
    let mut pairs_checked = 0;
    let mut min_prefix_gap = u64::MAX;
    for a in 0..prefixes.len() {
        for b in a + 1..prefixes.len() {
            let gap = prefixes[a]
                .iter()
                .zip(&prefixes[b])
                .map(|(x, y)| x.abs_diff(*y))
                .max()
                .unwrap_or(0);
            min_prefix_gap = min_prefix_gap.min(gap);
            pairs_checked += 1;
        }
    }
    Ok(OneDimReport {
        n,
        groups,
        cluster_size,
        placements,
        distinct_sets: sets.len() as u64,
        pairs_checked,
        min_prefix_gap: if pairs_checked == 0 {
            0
        } else {
            min_prefix_gap
        },
    })
}

/// `C(n + g - 1, g)`, the number of multisets of `g` positions.
pub fn multiset_count(n: u64, g: u64) -> u64 {
    (0..g).fold(1u64, |acc, i| acc * (n + i) / (i + 1))
}
