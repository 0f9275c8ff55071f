//! Frequent itemset mining and association rule generation.
//!
//! Itemsets are enumerated depth-first over vertical tid-lists (Eclat). The
//! output is exact and downward closed, and ordered lexicographically so that
//! downstream pattern ids are stable across runs.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dataset::{intersect_sorted, Item, Itemset, TransactionDb};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequentItemset {
    pub items: Itemset,
    pub freq: usize,
}

/// Rule `body → head` with disjoint sides and a non-empty head.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AssociationRule {
    pub body: Itemset,
    pub head: Itemset,
}

impl AssociationRule {
    pub fn new(body: Itemset, head: Itemset) -> Result<Self> {
        if head.is_empty() {
            return Err(Error::arg("rule head must not be empty"));
        }
        if !body.is_disjoint(&head) {
            return Err(Error::arg(format!("rule sides overlap: {body} → {head}")));
        }
        Ok(AssociationRule { body, head })
    }

    pub fn itemset(&self) -> Itemset {
        self.body.union(&self.head)
    }
}

impl std::fmt::Display for AssociationRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} → {}", self.body, self.head)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinedRule {
    pub rule: AssociationRule,
    /// `freq(body ∪ head)`.
    pub freq: usize,
    pub confidence: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RuleConfig {
    pub minconf: f64,
    /// Largest head size; `None` lifts the limit.
    pub max_head: Option<usize>,
    pub allow_empty_body: bool,
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            minconf: 0.0,
            max_head: Some(2),
            allow_empty_body: false,
        }
    }
}

/// 2×2 co-occurrence counts of a rule's body and head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub f11: u64,
    pub f10: u64,
    pub f01: u64,
    pub f00: u64,
    pub n: u64,
}

impl ContingencyTable {
    pub fn new(f11: u64, f10: u64, f01: u64, f00: u64) -> Self {
        ContingencyTable {
            f11,
            f10,
            f01,
            f00,
            n: f11 + f10 + f01 + f00,
        }
    }

    /// Builds the table from `freq(X∪Y)`, `freq(X)`, `freq(Y)` and `N`.
    pub fn from_frequencies(fxy: u64, fx: u64, fy: u64, n: u64) -> Result<Self> {
        if fxy > fx || fxy > fy || fx + fy > n + fxy {
            return Err(Error::arg(format!(
                "inconsistent frequencies fxy={fxy} fx={fx} fy={fy} n={n}"
            )));
        }
        Ok(ContingencyTable {
            f11: fxy,
            f10: fx - fxy,
            f01: fy - fxy,
            f00: n + fxy - fx - fy,
            n,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.f11 + self.f10 + self.f01 + self.f00 != self.n {
            return Err(Error::arg(format!("cells do not sum to N: {self:?}")));
        }
        Ok(())
    }

    pub fn freq_body(&self) -> u64 {
        self.f11 + self.f10
    }

    pub fn freq_head(&self) -> u64 {
        self.f11 + self.f01
    }
}

pub fn mine_frequent(db: &TransactionDb, minsup: usize) -> Result<Vec<FrequentItemset>> {
    mine_frequent_bounded(db, minsup, None)
}

/// Like [`mine_frequent`] but stops growing itemsets past `max_len` items.
pub fn mine_frequent_bounded(
    db: &TransactionDb,
    minsup: usize,
    max_len: Option<usize>,
) -> Result<Vec<FrequentItemset>> {
    if minsup < 1 {
        return Err(Error::arg("minsup must be at least 1"));
    }
    let max_len = max_len.unwrap_or(usize::MAX);
    let roots: Vec<(Item, Vec<u32>)> = db
        .items()
        .into_iter()
        .map(|i| (i, db.tidlist(i).to_vec()))
        .filter(|(_, tids)| tids.len() >= minsup)
        .collect();

    let mut out = Vec::new();
    let mut prefix = Vec::new();
    grow(&roots, &mut prefix, minsup, max_len, &mut out);
    out.sort_by(|a, b| a.items.cmp(&b.items));
    Ok(out)
}

fn grow(
    siblings: &[(Item, Vec<u32>)],
    prefix: &mut Vec<Item>,
    minsup: usize,
    max_len: usize,
    out: &mut Vec<FrequentItemset>,
) {
    for (idx, (item, tids)) in siblings.iter().enumerate() {
        prefix.push(*item);
        out.push(FrequentItemset {
            items: Itemset::new(prefix.iter().copied()),
            freq: tids.len(),
        });
        if prefix.len() < max_len {
            let children: Vec<(Item, Vec<u32>)> = siblings[idx + 1..]
                .iter()
                .map(|(other, other_tids)| (*other, intersect_sorted(tids, other_tids)))
                .filter(|(_, t)| t.len() >= minsup)
                .collect();
            if !children.is_empty() {
                grow(&children, prefix, minsup, max_len, out);
            }
        }
        prefix.pop();
    }
}

/// All rules `X → Y` over the frequent itemsets that meet `config.minconf`,
/// ordered by body then head.
pub fn generate_rules(
    frequents: &[FrequentItemset],
    db: &TransactionDb,
    config: &RuleConfig,
) -> Result<Vec<MinedRule>> {
    if !(0.0..=1.0).contains(&config.minconf) {
        return Err(Error::arg(format!("minconf {} outside [0,1]", config.minconf)));
    }
    let lookup: HashMap<&Itemset, usize> = frequents.iter().map(|f| (&f.items, f.freq)).collect();
    let max_head = config.max_head.unwrap_or(usize::MAX);
    let mut rules = Vec::new();

    for f in frequents {
        let items = f.items.items();
        let n = items.len();
        if n > 20 {
            return Err(Error::arg("itemsets longer than 20 items are not supported"));
        }
        for mask in 1u32..(1u32 << n) {
            let head_len = mask.count_ones() as usize;
            if head_len > max_head {
                continue;
            }
            if head_len == n && !config.allow_empty_body {
                continue;
            }
            let head = Itemset::new((0..n).filter(|b| mask & (1 << b) != 0).map(|b| items[b]));
            let body = f.items.difference(&head);
            let body_freq = if body.is_empty() {
                db.len()
            } else {
                match lookup.get(&body) {
                    Some(&c) => c,
                    None => {
                        return Err(Error::arg(format!(
                            "frequent set is not downward closed: {body} missing"
                        )))
                    }
                }
            };
            if body_freq == 0 {
                continue;
            }
            let confidence = f.freq as f64 / body_freq as f64;
            if confidence >= config.minconf {
                rules.push(MinedRule {
                    rule: AssociationRule { body, head },
                    freq: f.freq,
                    confidence,
                });
            }
        }
    }
    rules.sort_by(|a, b| a.rule.cmp(&b.rule));
    Ok(rules)
}

pub fn contingency(db: &TransactionDb, rule: &AssociationRule) -> ContingencyTable {
    let fxy = db.freq(&rule.itemset()) as u64;
    let fx = db.freq(&rule.body) as u64;
    let fy = db.freq(&rule.head) as u64;
    ContingencyTable::from_frequencies(fxy, fx, fy, db.len() as u64)
        .expect("frequencies from one database are always consistent")
}

fn join_items(items: &Itemset) -> String {
    items
        .items()
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("|")
}

/// Writes `body,head,frequency,confidence` rows with `|`-joined items.
pub fn write_rules_csv<W: Write>(rules: &[MinedRule], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["body", "head", "frequency", "confidence"])?;
    for r in rules {
        w.write_record([
            join_items(&r.rule.body),
            join_items(&r.rule.head),
            r.freq.to_string(),
            r.confidence.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
