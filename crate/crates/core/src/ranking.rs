//! Strict rankings and the rank statistics used for learning and evaluation.
//!
//! Every ranking is a bijection onto `1..=n`; ties are broken by ascending
//! pattern id before any statistic sees the data.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type PatternId = u32;

/// Ranks of a set of patterns, stored sorted by id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankAssignment {
    ids: Vec<PatternId>,
    ranks: Vec<u32>,
}

impl RankAssignment {
    /// Rank 1 goes to the best score; equal scores fall back to ascending id.
    pub fn rank_by(scores: &[(PatternId, f64)], higher_is_better: bool) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::arg("cannot rank an empty set"));
        }
        if scores.iter().any(|(_, s)| !s.is_finite()) {
            return Err(Error::arg("scores must be finite"));
        }
        let mut order: Vec<(PatternId, f64)> = scores.to_vec();
        order.sort_by(|a, b| {
            let by_score = if higher_is_better {
                b.1.partial_cmp(&a.1)
            } else {
                a.1.partial_cmp(&b.1)
            };
            by_score.unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0))
        });
        let ids: Vec<PatternId> = order.into_iter().map(|(id, _)| id).collect();
        Self::from_order(&ids)
    }

    /// `order[0]` gets rank 1.
    pub fn from_order(order: &[PatternId]) -> Result<Self> {
        if order.is_empty() {
            return Err(Error::arg("cannot rank an empty set"));
        }
        let mut pairs: Vec<(PatternId, u32)> = order
            .iter()
            .enumerate()
            .map(|(pos, id)| (*id, pos as u32 + 1))
            .collect();
        pairs.sort_unstable_by_key(|p| p.0);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::arg("duplicate pattern id in ranking"));
        }
        let (ids, ranks) = pairs.into_iter().unzip();
        Ok(RankAssignment { ids, ranks })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Pattern ids, ascending.
    pub fn ids(&self) -> &[PatternId] {
        &self.ids
    }

    /// Ranks aligned with [`ids`](Self::ids).
    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn rank_of(&self, id: PatternId) -> Option<u32> {
        self.ids.binary_search(&id).ok().map(|i| self.ranks[i])
    }

    /// Ids from best to worst.
    pub fn order(&self) -> Vec<PatternId> {
        let mut out = vec![0; self.len()];
        for (id, r) in self.ids.iter().zip(&self.ranks) {
            out[*r as usize - 1] = *id;
        }
        out
    }

    pub fn reversed(&self) -> Self {
        let n = self.len() as u32;
        RankAssignment {
            ids: self.ids.clone(),
            ranks: self.ranks.iter().map(|r| n + 1 - r).collect(),
        }
    }

    /// Re-ranks the given subset to `1..=|subset|`, keeping relative order.
    pub fn restrict(&self, subset: &[PatternId]) -> Result<Self> {
        let mut scored = Vec::with_capacity(subset.len());
        for id in subset {
            let r = self
                .rank_of(*id)
                .ok_or_else(|| Error::arg(format!("pattern {id} is not ranked")))?;
            scored.push((*id, r as f64));
        }
        Self::rank_by(&scored, false)
    }

    fn check_same_set(&self, other: &Self) -> Result<()> {
        if self.ids != other.ids {
            return Err(Error::arg("rankings cover different pattern sets"));
        }
        Ok(())
    }
}

/// Two-judge Kendall's W: `3·Σ(R − R̄)² / (n³ − n)` over rank sums `R`.
pub fn kendall_w(a: &RankAssignment, b: &RankAssignment) -> Result<f64> {
    a.check_same_set(b)?;
    let n = a.len();
    if n < 2 {
        return Err(Error::arg("Kendall's W needs at least two patterns"));
    }
    // R̄ = n + 1 for two judges; integer arithmetic keeps the sum exact
    let mean2 = 2 * (n as i64 + 1);
    let alpha4: i64 = a
        .ranks
        .iter()
        .zip(&b.ranks)
        .map(|(x, y)| {
            let d = 2 * (*x as i64 + *y as i64) - mean2;
            d * d
        })
        .sum();
    let n = n as f64;
    Ok(3.0 * (alpha4 as f64 / 4.0) / (n * n * n - n))
}

/// Spearman's ρ for strict rankings.
pub fn spearman(learned: &RankAssignment, target: &RankAssignment) -> Result<f64> {
    learned.check_same_set(target)?;
    let n = learned.len();
    if n < 2 {
        return Err(Error::arg("Spearman's rho needs at least two patterns"));
    }
    let d2: u128 = learned
        .ranks
        .iter()
        .zip(&target.ranks)
        .map(|(x, y)| {
            let d = (*x as i64 - *y as i64).unsigned_abs() as u128;
            d * d
        })
        .sum();
    let n = n as f64;
    Ok(1.0 - 6.0 * d2 as f64 / (n * (n * n - 1.0)))
}

/// Share of the target's top-`k` that is also in the learned top-`k`.
pub fn recall_at(learned: &RankAssignment, target: &RankAssignment, k: usize) -> Result<f64> {
    learned.check_same_set(target)?;
    if k == 0 || k > learned.len() {
        return Err(Error::arg(format!("k = {k} outside 1..={}", learned.len())));
    }
    let k32 = k as u32;
    let hits = learned
        .ranks
        .iter()
        .zip(&target.ranks)
        .filter(|(x, y)| **x <= k32 && **y <= k32)
        .count();
    Ok(hits as f64 / k as f64)
}

/// Recall at the top `percent`% of `n`, with `k = ceil(p·n/100)` and at least 1.
pub fn recall_at_percent(learned: &RankAssignment, target: &RankAssignment, percent: f64) -> Result<f64> {
    if !(percent > 0.0 && percent <= 100.0) {
        return Err(Error::arg(format!("percent {percent} outside (0,100]")));
    }
    let k = percent_to_k(learned.len(), percent);
    recall_at(learned, target, k)
}

pub fn percent_to_k(n: usize, percent: f64) -> usize {
    ((percent * n as f64 / 100.0).ceil() as usize).clamp(1, n.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ranks(r: &[u32]) -> RankAssignment {
        // pattern i has rank r[i]
        let mut order = vec![0; r.len()];
        for (i, rank) in r.iter().enumerate() {
            order[*rank as usize - 1] = i as PatternId;
        }
        RankAssignment::from_order(&order).unwrap()
    }

    /// Direct evaluation with floating point mean, as written.
    fn kendall_direct(a: &[u32], b: &[u32]) -> f64 {
        let n = a.len() as f64;
        let r: Vec<f64> = a.iter().zip(b).map(|(x, y)| (*x + *y) as f64).collect();
        let mean = r.iter().sum::<f64>() / n;
        let alpha: f64 = r.iter().map(|v| (v - mean).powi(2)).sum();
        3.0 * alpha / (n.powi(3) - n)
    }

    #[test]
    fn rank_by_examples() {
        let r = RankAssignment::rank_by(&[(1, 0.9), (2, 0.1)], true).unwrap();
        assert_eq!(r.rank_of(1), Some(1));
        assert_eq!(r.rank_of(2), Some(2));
        let tie = RankAssignment::rank_by(&[(2, 0.5), (1, 0.5)], true).unwrap();
        assert_eq!(tie.order(), vec![1, 2]);
        let low = RankAssignment::rank_by(&[(1, 0.9), (2, 0.1)], false).unwrap();
        assert_eq!(low.order(), vec![2, 1]);
        assert!(RankAssignment::rank_by(&[], true).is_err());
        assert!(RankAssignment::rank_by(&[(1, f64::NAN)], true).is_err());
    }

    #[test]
    fn from_order_rejects_duplicates() {
        assert!(RankAssignment::from_order(&[1, 2, 1]).is_err());
    }

    #[test]
    fn kendall_examples() {
        let a = ranks(&[1, 2, 3, 4, 5]);
        assert_eq!(kendall_w(&a, &a).unwrap(), 1.0);
        assert_eq!(kendall_w(&a, &a.reversed()).unwrap(), 0.0);
        let w = kendall_w(&ranks(&[1, 2, 3]), &ranks(&[2, 1, 3])).unwrap();
        assert!((w - 0.75).abs() < 1e-15);
    }

    #[test]
    fn kendall_errors() {
        let a = ranks(&[1, 2]);
        let b = RankAssignment::from_order(&[5, 6]).unwrap();
        assert!(kendall_w(&a, &b).is_err());
        let one = ranks(&[1]);
        assert!(kendall_w(&one, &one).is_err());
    }

    #[test]
    fn pairwise_kendall_is_binary() {
        let a = ranks(&[1, 2]);
        assert_eq!(kendall_w(&a, &a).unwrap(), 1.0);
        assert_eq!(kendall_w(&a, &ranks(&[2, 1])).unwrap(), 0.0);
    }

    #[test]
    fn spearman_examples() {
        let a = ranks(&[1, 2, 3, 4]);
        assert_eq!(spearman(&a, &a).unwrap(), 1.0);
        assert_eq!(spearman(&a, &a.reversed()).unwrap(), -1.0);
    }

    #[test]
    fn recall_examples() {
        let a = ranks(&[1, 2, 3, 4]);
        for k in 1..=4 {
            assert_eq!(recall_at(&a, &a, k).unwrap(), 1.0);
        }
        assert_eq!(recall_at(&a, &a.reversed(), 2).unwrap(), 0.0);
        assert!(recall_at(&a, &a, 0).is_err());
        assert!(recall_at(&a, &a, 5).is_err());
    }

    #[test]
    fn percent_mapping() {
        assert_eq!(percent_to_k(1000, 10.0), 100);
        assert_eq!(percent_to_k(1000, 1.0), 10);
        assert_eq!(percent_to_k(5, 1.0), 1);
        assert_eq!(percent_to_k(15, 10.0), 2);
    }

    #[test]
    fn restrict_reranks_within_subset() {
        let full = RankAssignment::from_order(&[7, 6, 3, 5, 10, 8, 4, 2, 1, 9]).unwrap();
        let sub = full.restrict(&[3, 1, 5, 2, 4]).unwrap();
        assert_eq!(sub.order(), vec![3, 5, 4, 2, 1]);
        assert!(full.restrict(&[11]).is_err());
    }

    fn perm(n: usize) -> impl Strategy<Value = Vec<u32>> {
        Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle()
    }

    fn perm_pair() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
        (2usize..=12).prop_flat_map(|n| (perm(n), perm(n)))
    }

    proptest! {
        #[test]
        fn kendall_properties((x, y) in perm_pair()) {
            let a = ranks(&x);
            let b = ranks(&y);
            let w = kendall_w(&a, &b).unwrap();
            prop_assert!((w - kendall_direct(&x, &y)).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&w));
            prop_assert_eq!(w, kendall_w(&b, &a).unwrap());
            prop_assert_eq!(kendall_w(&a, &a).unwrap(), 1.0);
            prop_assert_eq!(kendall_w(&a, &a.reversed()).unwrap(), 0.0);
        }

        #[test]
        fn kendall_relabel_invariant((x, y) in perm_pair(), offset in 1u32..1000) {
            let a = ranks(&x);
            let b = ranks(&y);
            let shift = |r: &RankAssignment| {
                let order: Vec<PatternId> = r.order().iter().map(|id| id * 3 + offset).collect();
                RankAssignment::from_order(&order).unwrap()
            };
            prop_assert_eq!(kendall_w(&a, &b).unwrap(), kendall_w(&shift(&a), &shift(&b)).unwrap());
        }

        #[test]
        fn spearman_properties((x, y) in perm_pair()) {
            let a = ranks(&x);
            let b = ranks(&y);
            let rho = spearman(&a, &b).unwrap();
            prop_assert!((-1.0..=1.0).contains(&rho));
            prop_assert_eq!(rho, spearman(&b, &a).unwrap());
        }

        #[test]
        fn spearman_order_invariant(scores in prop::collection::vec(-10.0f64..10.0, 2..30), target in prop::collection::vec(0.0f64..1.0, 30)) {
            let ids: Vec<(PatternId, f64)> = scores.iter().enumerate().map(|(i, s)| (i as PatternId, *s)).collect();
            let tr: Vec<(PatternId, f64)> = ids.iter().map(|(i, _)| (*i, target[*i as usize])).collect();
            let transformed: Vec<(PatternId, f64)> = ids.iter().map(|(i, s)| (*i, s.exp() * 3.0 + 1.0)).collect();
            let t = RankAssignment::rank_by(&tr, true).unwrap();
            let base = RankAssignment::rank_by(&ids, true).unwrap();
            let moved = RankAssignment::rank_by(&transformed, true).unwrap();
            prop_assert_eq!(spearman(&base, &t).unwrap(), spearman(&moved, &t).unwrap());
        }
    }
}
