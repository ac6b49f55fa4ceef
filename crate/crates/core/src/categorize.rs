//! Total (tau) and non-continued (nu) categories of a window.
//!
//! Entries are ranked by absolute error; a reduced fraction and all of its
//! multiples share one category and are told apart by the multiple index.

use std::cmp::Ordering;
use std::fmt;

use crate::approxarray::{partition, ApproxEntry, EntryClass, WindowB};
use crate::error::{Error, Result};

/// An entry with its rank inside one categorization pass.
#[derive(Debug, Clone)]
pub struct RankedEntry {
    pub entry: ApproxEntry,
    pub category: u32,
    pub multiple_index: Option<u64>,
}

impl RankedEntry {
    /// `⟨category⟩` or `⟨category|j⟩`.
    pub fn label(&self) -> String {
        format!("⟨{}⟩", rank_text(self.category, self.multiple_index))
    }
}

fn rank_text(category: u32, multiple_index: Option<u64>) -> String {
    match multiple_index {
        Some(j) => format!("{category}|{j}"),
        None => category.to_string(),
    }
}

/// Second label component: a non-continued rank or a class marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Nu {
    Rank(u32),
    Continued,
    SemiContinued,
}

impl fmt::Display for Nu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nu::Rank(n) => write!(f, "{n}"),
            Nu::Continued => f.write_str("c"),
            Nu::SemiContinued => f.write_str("sc"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CategorizedEntry {
    pub entry: ApproxEntry,
    pub tau: u32,
    pub multiple_index: Option<u64>,
    pub nu: Nu,
    /// `⟨tau, nu⟩` or `⟨tau|j, nu⟩`.
    pub label: String,
}

impl CategorizedEntry {
    fn new(entry: ApproxEntry, tau: u32, multiple_index: Option<u64>, nu: Nu) -> Self {
        let label = format!("⟨{}, {nu}⟩", rank_text(tau, multiple_index));
        CategorizedEntry { entry, tau, multiple_index, nu, label }
    }
}

/// Error order with ties broken by base denominator, then by denominator, so
/// a base sorts directly before its multiples.
fn rank_order(a: &ApproxEntry, b: &ApproxEntry) -> Ordering {
    a.delta
        .cmp_same_context(&b.delta)
        .then_with(|| a.base().den().cmp(&b.base().den()))
        .then_with(|| a.m.cmp(&b.m))
}

/// Sorts entries by absolute error and numbers the distinct reduced bases
/// 1, 2, ... in that order.
pub fn categorize(entries: &[ApproxEntry]) -> Result<Vec<RankedEntry>> {
    if let Some(first) = entries.first() {
        if entries.iter().any(|e| !e.delta.same_context(&first.delta)) {
            return Err(Error::Usage(
                "entries were computed against different constants or precisions".into(),
            ));
        }
    }
    let mut sorted = entries.to_vec();
    sorted.sort_by(rank_order);

    let mut category = 0;
    let mut previous = None;
    Ok(sorted
        .into_iter()
        .map(|entry| {
            let base = entry.base();
            if previous != Some(base) {
                category += 1;
                previous = Some(base);
            }
            let multiple_index = entry.multiple_index();
            RankedEntry { entry, category, multiple_index }
        })
        .collect())
}

/// The three sorted views of a window.
#[derive(Debug, Clone)]
pub struct Classification {
    /// Whole window ranked by tau.
    pub total: Vec<RankedEntry>,
    /// Non-continued partition ranked by nu.
    pub non_continued: Vec<RankedEntry>,
    /// Whole window with both categories, in tau order.
    pub merged: Vec<CategorizedEntry>,
}

impl Classification {
    /// Merged entries back in denominator order.
    pub fn by_denominator(&self) -> Vec<CategorizedEntry> {
        let mut rows = self.merged.clone();
        rows.sort_by_key(|c| c.entry.m);
        rows
    }

    pub fn find(&self, m: u64) -> Option<&CategorizedEntry> {
        self.merged.iter().find(|c| c.entry.m == m)
    }

    /// The first `count` non-continued categories. Without
    /// `include_multiples` each category contributes one entry (its base when
    /// the base lies in the window).
    pub fn best_non_continued(&self, count: usize, include_multiples: bool) -> Vec<CategorizedEntry> {
        let mut out: Vec<CategorizedEntry> = Vec::new();
        let mut seen = 0u32;
        for r in &self.non_continued {
            if r.category as usize > count {
                break;
            }
            let first_of_category = r.category > seen;
            seen = r.category;
            if first_of_category || include_multiples {
                if let Some(c) = self.find(r.entry.m) {
                    out.push(c.clone());
                }
            }
        }
        out
    }
}

/// Ranks a window by total error and its non-continued partition by
/// non-continued error, then merges both into labelled entries.
pub fn classify_window(window: &WindowB) -> Result<Classification> {
    let total = categorize(window.entries())?;
    let non_continued = categorize(&partition(window).non_continued)?;

    let merged = total
        .iter()
        .map(|r| {
            let nu = match r.entry.klass {
                EntryClass::Continued => Nu::Continued,
                EntryClass::SemiContinued => Nu::SemiContinued,
                EntryClass::NonContinued => {
                    let rank = non_continued
                        .iter()
                        .find(|v| v.entry.m == r.entry.m)
                        .map(|v| v.category)
                        .expect("non-continued entries are ranked");
                    Nu::Rank(rank)
                }
            };
            CategorizedEntry::new(r.entry.clone(), r.category, r.multiple_index, nu)
        })
        .collect();

    Ok(Classification { total, non_continued, merged })
}

/// The best `count` non-continued entries of a window; empty when the
/// window has none.
pub fn best_noncontinued(window: &WindowB, count: usize) -> Result<Vec<CategorizedEntry>> {
    Ok(classify_window(window)?.best_non_continued(count, false))
}
