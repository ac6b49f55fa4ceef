//! The best-round array: one nearest fraction per denominator, classified as
//! continued, semi-continued or non-continued, plus contiguous windows of it.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::contfrac::{best_convergents, expand_past_denominator, semiconvergents_bounded};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::numerics::{abs_error, AbsError, Fraction, RealConstant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryClass {
    /// A convergent.
    Continued,
    /// A secondary convergent that is a best approximation of the first kind.
    SemiContinued,
    /// Anything else in the array.
    NonContinued,
}

impl EntryClass {
    /// Short mark: `c`, `sc` or `nc`.
    pub fn mark(self) -> &'static str {
        match self {
            EntryClass::Continued => "c",
            EntryClass::SemiContinued => "sc",
            EntryClass::NonContinued => "nc",
        }
    }

    /// Continued or semi-continued.
    pub fn is_best(self) -> bool {
        !matches!(self, EntryClass::NonContinued)
    }
}

impl fmt::Display for EntryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mark())
    }
}

/// A reducible entry `j*p / j*q` and its reduced base `p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultipleOf {
    pub base: Fraction,
    pub index: u64,
}

/// One element of the best-round array.
#[derive(Debug, Clone)]
pub struct ApproxEntry {
    pub m: u64,
    pub k: u64,
    pub delta: AbsError,
    pub klass: EntryClass,
    pub multiple_of: Option<MultipleOf>,
    /// The reduced fraction is a secondary convergent, whatever its class.
    pub semiconvergent_flag: bool,
}

impl ApproxEntry {
    pub fn fraction(&self) -> Fraction {
        Fraction::new_unchecked(self.k, self.m)
    }

    /// The reduced form; equal to [`fraction`](Self::fraction) for non-multiples.
    pub fn base(&self) -> Fraction {
        self.multiple_of.map_or_else(|| self.fraction(), |mo| mo.base)
    }

    pub fn multiple_index(&self) -> Option<u64> {
        self.multiple_of.map(|mo| mo.index)
    }

    pub fn is_multiple(&self) -> bool {
        self.multiple_of.is_some()
    }
}

/// Numerator `k` minimising `|alpha - k/m|`. Exact half-way cases (rational
/// constants only) go to the even numerator.
pub fn best_numerator(alpha: &RealConstant, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::input("denominator must be at least 1"));
    }
    let scale = alpha.scale();
    let (q, r) = (alpha.numerator() * m).div_rem(scale);
    let q = q
        .to_u64()
        .ok_or_else(|| Error::input(format!("numerator for denominator {m} exceeds 64 bits")))?;
    let twice_r = r * 2u8;
    if !alpha.is_exact() {
        // alpha*m is known to within m/scale; the rounding must be certain.
        let band = num_bigint::BigUint::from(2 * m);
        let gap = if &twice_r >= scale { &twice_r - scale } else { scale - &twice_r };
        if gap <= band {
            return Err(Error::precision(format!(
                "{} digits cannot decide the nearest numerator for denominator {m}",
                alpha.precision()
            )));
        }
    }
    Ok(match twice_r.cmp(scale) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal if q % 2 == 0 => q,
        std::cmp::Ordering::Equal => q + 1,
    })
}

/// Structural classification of reduced fractions with denominators up to
/// a bound, derived from the continued-fraction expansion.
#[derive(Debug, Clone)]
pub struct Classifier {
    continued: HashSet<Fraction>,
    semi_best: HashSet<Fraction>,
    semi_all: HashSet<Fraction>,
}

impl Classifier {
    pub fn new(alpha: &RealConstant, q_max: u64) -> Result<Self> {
        let cf = expand_past_denominator(alpha, q_max)?;
        let continued = best_convergents(&cf, q_max).into_iter().collect();
        let semis = semiconvergents_bounded(&cf, alpha, q_max);
        let semi_best = semis.iter().filter(|s| s.best_first_kind).map(|s| s.fraction).collect();
        let semi_all = semis.iter().map(|s| s.fraction).collect();
        Ok(Classifier { continued, semi_best, semi_all })
    }

    /// Class of a reduced fraction.
    pub fn classify(&self, reduced: Fraction) -> EntryClass {
        if self.continued.contains(&reduced) {
            EntryClass::Continued
        } else if self.semi_best.contains(&reduced) {
            EntryClass::SemiContinued
        } else {
            EntryClass::NonContinued
        }
    }

    pub fn is_semiconvergent(&self, reduced: Fraction) -> bool {
        self.semi_all.contains(&reduced)
    }
}

/// Builds entries for denominators `1..=n_max`.
///
/// The constant's precision must already cover `n_max`
/// (see [`RealConstant::for_denominator_bound`]).
/// Largest array size accepted; each entry holds a big-integer error.
pub const MAX_DENOMINATOR: u64 = 10_000_000;

pub fn build_array(alpha: &RealConstant, n_max: u64) -> Result<Vec<ApproxEntry>> {
    build_array_with(alpha, n_max, Execution::default())
}

pub fn build_array_with(
    alpha: &RealConstant,
    n_max: u64,
    exec: Execution,
) -> Result<Vec<ApproxEntry>> {
    if n_max == 0 {
        return Err(Error::input("the array needs at least one denominator"));
    }
    if n_max > MAX_DENOMINATOR {
        return Err(Error::input(format!(
            "denominator bound {n_max} exceeds the supported maximum of {MAX_DENOMINATOR}"
        )));
    }
    if !alpha.supports_denominator(n_max) {
        return Err(Error::precision(format!(
            "{} digits are too few for denominators up to {n_max}; {} are required",
            alpha.precision(),
            crate::numerics::required_precision(n_max)
        )));
    }
    let classifier = Classifier::new(alpha, n_max)?;
    exec::try_map_range(exec, 1..=n_max, |m| {
        let k = best_numerator(alpha, m)?;
        let fraction = Fraction::new_unchecked(k, m);
        let base = fraction.reduced();
        let multiple_of = (base.den() != m).then(|| MultipleOf { base, index: m / base.den() });
        Ok(ApproxEntry {
            m,
            k,
            delta: abs_error(alpha, fraction),
            klass: classifier.classify(base),
            multiple_of,
            semiconvergent_flag: classifier.is_semiconvergent(base),
        })
    })
}

/// Contiguous slice of the array from denominator `start` to `end`.
#[derive(Debug, Clone)]
pub struct WindowB {
    start: u64,
    end: u64,
    entries: Vec<ApproxEntry>,
}

impl WindowB {
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn end(&self) -> u64 {
        self.end
    }

    pub fn entries(&self) -> &[ApproxEntry] {
        &self.entries
    }

    /// Element count `e - s + 1`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, m: u64) -> Option<&ApproxEntry> {
        if m < self.start || m > self.end {
            return None;
        }
        self.entries.get((m - self.start) as usize)
    }
}

/// Window over an array built from denominator 1.
pub fn window(array: &[ApproxEntry], start: u64, end: u64) -> Result<WindowB> {
    if start == 0 || start >= end || end > array.len() as u64 {
        return Err(Error::input(format!(
            "window {start}..{end} must satisfy 1 <= start < end <= {}",
            array.len()
        )));
    }
    let entries = array[(start - 1) as usize..end as usize].to_vec();
    debug_assert!(entries.iter().zip(start..).all(|(e, m)| e.m == m));
    Ok(WindowB { start, end, entries })
}

/// Window entries split by class; multiples follow their base's class.
#[derive(Debug, Clone, Default)]
pub struct Partition {
    pub continued: Vec<ApproxEntry>,
    pub semi_continued: Vec<ApproxEntry>,
    pub non_continued: Vec<ApproxEntry>,
}

pub fn partition(window: &WindowB) -> Partition {
    let mut out = Partition::default();
    for e in window.entries() {
        let bucket = match e.klass {
            EntryClass::Continued => &mut out.continued,
            EntryClass::SemiContinued => &mut out.semi_continued,
            EntryClass::NonContinued => &mut out.non_continued,
        };
        bucket.push(e.clone());
    }
    out
}
