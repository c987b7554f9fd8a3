//! How many terms of an enumerated zero set can meet a compact interval,
//! and a finite-horizon check for sequences staying away from a point.

use alloc::vec::Vec;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::num::{RatInterval, Rational};
use crate::zstability::{LocatedZeroSet, ZeroEnumeration};

/// Largest rank tried by [`finite_intersection_rank`].
pub const RANK_BUDGET: usize = 1 << 40;

/// Every `z_n` with `n > rank` lies at distance at least `sep` from `region`,
/// so the zeros inside `region` are among `z_1, ..., z_rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationCertificate {
    pub rank: usize,
    pub region: RatInterval,
    pub sep: Rational,
}

impl IsolationCertificate {
    /// The listed terms that actually fall inside the region.
    pub fn zeros_in_region(&self, e: &dyn ZeroEnumeration) -> Vec<Rational> {
        (1..=self.rank)
            .map(|n| e.term(n))
            .filter(|z| self.region.contains(z))
            .collect()
    }
}

fn enumeration(z: &LocatedZeroSet) -> Result<&dyn ZeroEnumeration> {
    match z {
        LocatedZeroSet::Enumerated(e) => Ok(e.as_ref()),
        LocatedZeroSet::Finite { .. } => Err(Error::Unsupported {
            op: "finite_intersection_rank",
            variant: "finite zero set",
        }),
    }
}

/// Least `N` with `tail_sep(N, region) > 0`, found by doubling then binary search.
pub fn finite_intersection_rank(
    z: &LocatedZeroSet,
    region: &RatInterval,
) -> Result<IsolationCertificate> {
    finite_intersection_rank_with_budget(z, region, RANK_BUDGET)
}

pub fn finite_intersection_rank_with_budget(
    z: &LocatedZeroSet,
    region: &RatInterval,
    budget: usize,
) -> Result<IsolationCertificate> {
    let e = enumeration(z)?;
    let separates = |n: usize| e.tail_sep(n, region).is_positive();
    let rank = if separates(0) {
        0
    } else {
        let mut hi = 1usize;
        while !separates(hi) {
            if hi >= budget {
                return Err(Error::TailDoesNotSeparate);
            }
            hi = hi.saturating_mul(2).min(budget);
        }
        // tail_sep is nondecreasing in n: separates(lo) is false, separates(hi) true.
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if separates(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok(IsolationCertificate {
        rank,
        region: region.clone(),
        sep: e.tail_sep(rank, region),
    })
}

/// `|x - seq[n]| >= delta` for every 1-based index `n` from `from` to the end
/// of the prefix. Only a finite-horizon check of the infinite property;
/// `from` beyond the prefix is vacuously true.
pub fn eventually_bounded_away_check(
    seq: &[Rational],
    x: &Rational,
    from: usize,
    delta: &Rational,
) -> bool {
    seq.iter()
        .skip(from.saturating_sub(1))
        .all(|s| &(x - s).abs() >= delta)
}
