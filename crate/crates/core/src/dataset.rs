//! Transaction databases in the FIMI plain-text format.
//!
//! One transaction per line, items are whitespace-separated non-negative
//! integers. Blank lines are skipped; LF and CRLF endings are both accepted.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Item = u32;

/// Sorted, duplicate-free set of items.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Itemset(Vec<Item>);

impl Itemset {
    pub fn new(items: impl IntoIterator<Item = Item>) -> Self {
        let mut items: Vec<Item> = items.into_iter().collect();
        items.sort_unstable();
        items.dedup();
        Itemset(items)
    }

    pub fn empty() -> Self {
        Itemset(Vec::new())
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: Item) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    /// Merge-based subset test over the sorted representation.
    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        let mut rest = other.0.iter();
        'outer: for x in &self.0 {
            for y in rest.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &Itemset) -> bool {
        self.0.iter().all(|x| !other.contains(*x))
    }

    pub fn union(&self, other: &Itemset) -> Itemset {
        Itemset::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn difference(&self, other: &Itemset) -> Itemset {
        Itemset(self.0.iter().copied().filter(|x| !other.contains(*x)).collect())
    }
}

impl From<Vec<Item>> for Itemset {
    fn from(items: Vec<Item>) -> Self {
        Itemset::new(items)
    }
}

impl<const N: usize> From<[Item; N]> for Itemset {
    fn from(items: [Item; N]) -> Self {
        Itemset::new(items)
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{item}")?;
        }
        write!(f, "}}")
    }
}

/// Immutable multiset of transactions with an item → transaction-id index.
#[derive(Clone, Debug, Default)]
pub struct TransactionDb {
    transactions: Vec<Itemset>,
    // Sorted transaction ids per item.
    tidlists: HashMap<Item, Vec<u32>>,
}

impl TransactionDb {
    pub fn from_transactions(transactions: impl IntoIterator<Item = Itemset>) -> Self {
        let transactions: Vec<Itemset> = transactions.into_iter().collect();
        let mut tidlists: HashMap<Item, Vec<u32>> = HashMap::new();
        for (tid, t) in transactions.iter().enumerate() {
            for &item in t.items() {
                tidlists.entry(item).or_default().push(tid as u32);
            }
        }
        TransactionDb { transactions, tidlists }
    }

    pub fn parse_fimi(text: &str) -> Result<Self> {
        Self::read_fimi(text.as_bytes())
    }

    pub fn read_fimi<R: BufRead>(reader: R) -> Result<Self> {
        let mut transactions = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let mut items = Vec::new();
            for token in line.split_whitespace() {
                let item = token.parse::<Item>().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    token: token.to_string(),
                })?;
                items.push(item);
            }
            transactions.push(Itemset::new(items));
        }
        Ok(Self::from_transactions(transactions))
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let file = fs::File::open(path)?;
        Self::read_fimi(io::BufReader::new(file))
    }

    pub fn write_fimi<W: Write>(&self, mut out: W) -> Result<()> {
        for t in &self.transactions {
            let line: Vec<String> = t.items().iter().map(|i| i.to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    /// Number of transactions.
    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn transactions(&self) -> &[Itemset] {
        &self.transactions
    }

    /// Distinct items, ascending.
    pub fn items(&self) -> Vec<Item> {
        let mut items: Vec<Item> = self.tidlists.keys().copied().collect();
        items.sort_unstable();
        items
    }

    pub fn tidlist(&self, item: Item) -> &[u32] {
        self.tidlists.get(&item).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of transactions containing every item of `x`. `freq(∅) = N`.
    pub fn freq(&self, x: &Itemset) -> usize {
        match x.items() {
            [] => self.len(),
            [single] => self.tidlist(*single).len(),
            items => {
                let mut lists: Vec<&[u32]> = items.iter().map(|i| self.tidlist(*i)).collect();
                lists.sort_by_key(|l| l.len());
                let mut acc: Vec<u32> = lists[0].to_vec();
                for l in &lists[1..] {
                    acc = intersect_sorted(&acc, l);
                    if acc.is_empty() {
                        break;
                    }
                }
                acc.len()
            }
        }
    }
}

pub(crate) fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
