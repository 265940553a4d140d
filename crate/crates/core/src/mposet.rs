//! The coalition poset `M(n)` under the shift order.

use std::sync::OnceLock;

use crate::coalition::{check_voters, mask_rank, upper_cover_masks, Coalition, MAX_VOTERS};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct CoalitionPoset {
    n: usize,
    elements: Vec<Coalition>,
    covers: Vec<(Coalition, Coalition)>,
}

impl CoalitionPoset {
    pub fn n(&self) -> usize {
        self.n
    }

    /// All `2^n` coalitions in canonical order (rank first).
    pub fn elements(&self) -> &[Coalition] {
        &self.elements
    }

    /// Hasse edges `(lower, upper)`.
    pub fn covers(&self) -> &[(Coalition, Coalition)] {
        &self.covers
    }

    pub fn rank(&self, a: &Coalition) -> usize {
        a.rank()
    }

    pub fn max_rank(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    /// Coefficients `a_r` of the rank-generating function, `r = 0..=max_rank`.
    pub fn rank_generating_function(&self) -> Vec<u64> {
        let mut coeffs = vec![0u64; self.max_rank() + 1];
        for e in &self.elements {
            coeffs[e.rank()] += 1;
        }
        coeffs
    }
}

/// Builds the full Hasse diagram of `M(n)`.
///
/// Covers are the rank-one moves (raise one member by one place, or add
/// voter 1); the tests check this against the transitive reduction of the
/// shift order.
pub fn build_m_poset(n: usize) -> Result<CoalitionPoset> {
    check_voters(n)?;
    let mut elements: Vec<Coalition> = (0..(1u32 << n))
        .map(|m| Coalition::from_mask_unchecked(n, m))
        .collect();
    elements.sort();
    let mut covers = Vec::new();
    for a in &elements {
        for up in upper_cover_masks(n, a.mask()) {
            covers.push((*a, Coalition::from_mask_unchecked(n, up)));
        }
    }
    covers.sort();
    Ok(CoalitionPoset { n, elements, covers })
}

/// Masks of `M(n)` sorted by rank; shared by every game on `n` voters.
pub(crate) fn rank_order(n: usize) -> &'static [u32] {
    static ORDERS: [OnceLock<Vec<u32>>; MAX_VOTERS + 1] = [const { OnceLock::new() }; MAX_VOTERS + 1];
    ORDERS[n].get_or_init(|| {
        let max = n * (n + 1) / 2;
        let mut buckets = vec![Vec::new(); max + 1];
        for m in 0..(1u32 << n) {
            buckets[mask_rank(m)].push(m);
        }
        buckets.into_iter().flatten().collect()
    })
}
