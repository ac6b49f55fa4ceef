//! Equal divisions of the octave: the nearest step count to an interval and
//! the ranking of divisions by error category.
//!
//! Intervals are handled in the log domain: the approximated constant is
//! log2 of the frequency ratio (for the fifth, log2(3/2)), never the ratio.

use crate::approxarray::{build_array, window, EntryClass};
use crate::categorize::{classify_window, CategorizedEntry, Nu};
use crate::contfrac::{convergents, expand_past_denominator};
use crate::error::{Error, Result};
use crate::numerics::{AbsError, RealConstant};

/// Denominator of the common twelve-step scale, used to anchor default windows.
pub const COMMON_DIVISIONS: u64 = 12;

#[derive(Debug, Clone)]
pub struct EdoReport {
    pub divisions: u64,
    pub steps: u64,
    /// `1200 * |interval - steps/divisions|`.
    pub cents_error: f64,
    pub delta: AbsError,
    pub klass: EntryClass,
    pub tau: u32,
    pub multiple_index: Option<u64>,
    pub nu: Nu,
    pub label: String,
}

impl From<&CategorizedEntry> for EdoReport {
    fn from(c: &CategorizedEntry) -> Self {
        EdoReport {
            divisions: c.entry.m,
            steps: c.entry.k,
            cents_error: 1200.0 * c.entry.delta.to_f64(),
            delta: c.entry.delta.clone(),
            klass: c.entry.klass,
            tau: c.tau,
            multiple_index: c.multiple_index,
            nu: c.nu,
            label: c.label.clone(),
        }
    }
}

/// Default window `[q_n, q_{n+1}]`: the last convergent denominator not above
/// twelve and the next one. For log2(3/2) this is `[12, 41]`.
pub fn default_window(interval: &RealConstant) -> Result<(u64, u64)> {
    let cf = expand_past_denominator(interval, COMMON_DIVISIONS)?;
    let dens: Vec<u64> = convergents(&cf).fractions().map(|f| f.den()).collect();
    let lower = dens.iter().copied().filter(|&q| q <= COMMON_DIVISIONS).max().unwrap_or(1);
    match dens.iter().copied().find(|&q| q > lower) {
        Some(upper) => Ok((lower, upper)),
        None => Ok((1, COMMON_DIVISIONS)),
    }
}

fn ranked(interval: &RealConstant, (start, end): (u64, u64)) -> Result<Vec<EdoReport>> {
    if start == 0 || start >= end {
        return Err(Error::input(format!("window {start}:{end} must satisfy 1 <= start < end")));
    }
    let alpha = interval.for_denominator_bound(end)?;
    let array = build_array(&alpha, end)?;
    let classification = classify_window(&window(&array, start, end)?)?;
    Ok(classification.merged.iter().map(EdoReport::from).collect())
}

/// Report for `divisions` steps per octave within `window`.
pub fn edo_report(divisions: u64, interval: &RealConstant, window: (u64, u64)) -> Result<EdoReport> {
    if divisions < window.0 || divisions > window.1 {
        return Err(Error::input(format!(
            "{divisions}-EDO lies outside the window {}:{}; widen the window to include it",
            window.0, window.1
        )));
    }
    ranked(interval, window)?
        .into_iter()
        .find(|r| r.divisions == divisions)
        .ok_or_else(|| Error::input(format!("{divisions}-EDO not found in window")))
}

/// Every division in `window`, best first (by tau, then multiple index).
pub fn rank_edos(window: (u64, u64), interval: &RealConstant) -> Result<Vec<EdoReport>> {
    ranked(interval, window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{make_constant, Descriptor, NamedConstant};

    fn beta() -> RealConstant {
        RealConstant::named(NamedConstant::Beta, 60).unwrap()
    }

    #[test]
    fn seventeen_and_thirty_one() {
        let r = edo_report(17, &beta(), (12, 41)).unwrap();
        assert_eq!((r.steps, r.klass, r.tau, r.nu), (10, EntryClass::NonContinued, 4, Nu::Rank(1)));
        let r = edo_report(31, &beta(), (12, 41)).unwrap();
        assert_eq!((r.steps, r.nu), (18, Nu::Rank(2)));
    }

    #[test]
    fn twelve_cents() {
        let r = edo_report(12, &beta(), (12, 41)).unwrap();
        assert_eq!(r.steps, 7);
        // 1200 * (7/12 - log2(3/2)) in f64.
        let direct = 1200.0 * (1.5f64.log2() - 7.0 / 12.0).abs();
        assert!((r.cents_error - direct).abs() < 1e-9);
        assert!((r.cents_error - 1.955).abs() < 1e-3);
    }

    #[test]
    fn outside_window_is_input_error() {
        assert!(matches!(edo_report(53, &beta(), (12, 41)), Err(Error::Input(_))));
        assert!(rank_edos((12, 12), &beta()).is_err());
    }

    #[test]
    fn ranking() {
        let r = rank_edos((12, 41), &beta()).unwrap();
        let top: Vec<_> = r.iter().take(3).map(|x| x.divisions).collect();
        assert_eq!(top, [41, 29, 12]);
        let nc: Vec<_> = r.iter().filter(|x| x.nu == Nu::Rank(1) || x.nu == Nu::Rank(2)).filter(|x| x.multiple_index.is_none()).map(|x| x.divisions).collect();
        assert_eq!(nc, [17, 31]);
        let small = rank_edos((12, 13), &beta()).unwrap();
        assert_eq!(small.iter().map(|x| x.divisions).collect::<Vec<_>>(), [12, 13]);
    }

    #[test]
    fn default_windows() {
        assert_eq!(default_window(&beta()).unwrap(), (12, 41));
        let third = make_constant(Descriptor::log2_ratio(5, 4), 60).unwrap();
        assert_eq!(default_window(&third).unwrap(), (3, 28));
        let two = make_constant(Descriptor::log2_ratio(4, 1), 60).unwrap();
        assert_eq!(default_window(&two).unwrap(), (1, 12));
    }

    #[test]
    fn ratio_interval_resolves_to_beta() {
        let via_ratio = make_constant(Descriptor::log2_ratio(3, 2), 60).unwrap();
        let a = edo_report(12, &via_ratio, (12, 41)).unwrap();
        let b = edo_report(12, &beta(), (12, 41)).unwrap();
        assert_eq!(a.label, b.label);
        assert_eq!(a.cents_error, b.cents_error);
    }
}
