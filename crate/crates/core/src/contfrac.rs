//! Continued fractions, convergents, secondary convergents and brute-force
//! best-approximation oracles.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::numerics::{abs_error, AbsError, Fraction, RealConstant};

/// How many times [`expand`] doubles the precision before giving up.
pub const MAX_DOUBLINGS: u32 = 6;

/// Prefix `[a0; a1, ..., an]` of a continued-fraction expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFExpansion {
    terms: Vec<u64>,
    exact: bool,
}

impl CFExpansion {
    /// Builds an expansion from explicit terms. Terminating expansions are
    /// put in canonical form (no trailing 1 unless it is the only term).
    pub fn from_terms(mut terms: Vec<u64>, exact: bool) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::input("a continued fraction needs at least one term"));
        }
        if terms[1..].contains(&0) {
            return Err(Error::input("partial quotients after the first must be positive"));
        }
        if exact && terms.len() > 1 && terms.last() == Some(&1) {
            terms.pop();
            *terms.last_mut().expect("non-empty") += 1;
        }
        Ok(CFExpansion { terms, exact })
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// True when the constant is rational and the whole expansion is present.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether `a0/1` is a best approximation, i.e. the fractional part of
    /// the constant is strictly below one half.
    pub fn leading_convergent_is_best(&self) -> bool {
        match self.terms.get(1) {
            None => self.exact,
            Some(&a1) if a1 >= 3 => true,
            Some(&2) => self.terms.len() > 2 || !self.exact,
            Some(_) => false,
        }
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.terms[0])?;
        for (i, t) in self.terms[1..].iter().enumerate() {
            let sep = if i == 0 { "; " } else { ", " };
            write!(f, "{sep}{t}")?;
        }
        f.write_str("]")
    }
}

/// Rational `num / den` with `den > 0`, used while expanding interval endpoints.
#[derive(Clone)]
struct Rat {
    num: BigInt,
    den: BigInt,
}

impl Rat {
    fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    fn sub_int(&self, a: &BigInt) -> Rat {
        Rat { num: &self.num - a * &self.den, den: self.den.clone() }
    }

    fn recip(&self) -> Rat {
        Rat { num: self.den.clone(), den: self.num.clone() }
    }
}

fn term_to_u64(a: &BigInt) -> Result<u64> {
    a.to_u64()
        .ok_or_else(|| Error::input(format!("partial quotient {a} does not fit in 64 bits")))
}

/// Terms certified by the stored approximation, and whether the expansion
/// terminated.
fn certain_terms(alpha: &RealConstant, limit: usize) -> Result<(Vec<u64>, bool)> {
    let num = BigInt::from(alpha.numerator().clone());
    let den = BigInt::from(alpha.scale().clone());
    let mut terms = Vec::new();

    if alpha.is_exact() {
        let mut x = Rat { num, den };
        while terms.len() < limit {
            let a = x.floor();
            terms.push(term_to_u64(&a)?);
            let rest = x.sub_int(&a);
            if rest.num.is_zero() {
                return Ok((terms, true));
            }
            x = rest.recip();
        }
        return Ok((terms, false));
    }

    // The true value lies in the open interval (lo, hi).
    let mut lo = Rat { num: &num - 1, den: den.clone() };
    let mut hi = Rat { num: &num + 1, den };
    while terms.len() < limit {
        let a = lo.floor();
        if a != hi.floor() || a.sign() == num_bigint::Sign::Minus {
            break;
        }
        terms.push(term_to_u64(&a)?);
        let lo_rest = lo.sub_int(&a);
        let hi_rest = hi.sub_int(&a);
        if lo_rest.num.is_zero() {
            break;
        }
        lo = hi_rest.recip();
        hi = lo_rest.recip();
    }
    Ok((terms, false))
}

/// First `max_terms` partial quotients of `alpha`.
///
/// Only terms shared by every value inside the precision band are reported;
/// when fewer than `max_terms` are certain the precision is doubled, up to
/// [`MAX_DOUBLINGS`] times.
pub fn expand(alpha: &RealConstant, max_terms: usize) -> Result<CFExpansion> {
    if max_terms == 0 {
        return Err(Error::input("at least one term must be requested"));
    }
    let mut current = alpha.clone();
    let mut stable = 0;
    for _ in 0..=MAX_DOUBLINGS {
        let (terms, terminated) = certain_terms(&current, max_terms)?;
        if terminated || terms.len() >= max_terms {
            return CFExpansion::from_terms(terms, terminated);
        }
        stable = terms.len();
        current = current.with_precision(current.precision() * 2)?;
    }
    Err(Error::precision(format!(
        "only {stable} partial quotients of {} are stable at {} digits (last stable term index {})",
        alpha.descriptor(),
        current.precision() / 2,
        stable as i64 - 1
    )))
}

/// Expands until a convergent denominator exceeds `q_bound` or the expansion
/// terminates.
pub fn expand_past_denominator(alpha: &RealConstant, q_bound: u64) -> Result<CFExpansion> {
    let mut want = 8usize;
    loop {
        let cf = expand(alpha, want)?;
        if cf.is_exact() {
            return Ok(cf);
        }
        let seq = convergents(&cf);
        let complete = seq.entries.len() == cf.len();
        match seq.entries.last() {
            Some((_, f)) if f.den() > q_bound => return Ok(cf),
            _ if !complete => return Ok(cf),
            _ => want *= 2,
        }
    }
}

/// Convergents `p_n / q_n` with their indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentSeq {
    entries: Vec<(usize, Fraction)>,
}

impl ConvergentSeq {
    pub fn entries(&self) -> &[(usize, Fraction)] {
        &self.entries
    }

    pub fn fractions(&self) -> impl Iterator<Item = Fraction> + '_ {
        self.entries.iter().map(|&(_, f)| f)
    }

    pub fn get(&self, n: usize) -> Option<Fraction> {
        self.entries.get(n).map(|&(_, f)| f)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Convergents via the three-term recurrence. Stops early if a numerator or
/// denominator would overflow `u64`.
pub fn convergents(cf: &CFExpansion) -> ConvergentSeq {
    let mut entries = Vec::with_capacity(cf.len());
    let (mut p2, mut p1) = (0u64, 1u64);
    let (mut q2, mut q1) = (1u64, 0u64);
    for (n, &a) in cf.terms().iter().enumerate() {
        let next = a
            .checked_mul(p1)
            .and_then(|x| x.checked_add(p2))
            .zip(a.checked_mul(q1).and_then(|x| x.checked_add(q2)));
        let Some((p, q)) = next else { break };
        entries.push((n, Fraction::new_unchecked(p, q)));
        (p2, p1) = (p1, p);
        (q2, q1) = (q1, q);
    }
    ConvergentSeq { entries }
}

/// Secondary convergent `[a0; ..., a_{n-1}, partial]` with `0 < partial < a_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Semiconvergent {
    pub fraction: Fraction,
    pub parent_index: usize,
    pub partial: u64,
    /// Lies strictly between the errors of `p_n/q_n` and `p_{n-1}/q_{n-1}`.
    pub best_first_kind: bool,
}

/// All secondary convergents of `cf`, flagged by the strict error sandwich
/// against the neighbouring convergents.
pub fn semiconvergents(cf: &CFExpansion, alpha: &RealConstant) -> Vec<Semiconvergent> {
    semiconvergents_bounded(cf, alpha, u64::MAX)
}

/// [`semiconvergents`] restricted to denominators up to `q_max`.
pub fn semiconvergents_bounded(
    cf: &CFExpansion,
    alpha: &RealConstant,
    q_max: u64,
) -> Vec<Semiconvergent> {
    let seq = convergents(cf);
    let mut out = Vec::new();
    for n in 1..seq.len() {
        let a_n = cf.terms()[n];
        let prev = seq.get(n - 1).expect("n >= 1");
        let (p2, q2) = match n {
            1 => (1u64, 0u64),
            _ => {
                let f = seq.get(n - 2).expect("n >= 2");
                (f.num(), f.den())
            }
        };
        let here = seq.get(n).expect("in range");
        let err_here = abs_error(alpha, here);
        let err_prev = abs_error(alpha, prev);
        for partial in 1..a_n {
            let Some(q) = partial.checked_mul(prev.den()).and_then(|x| x.checked_add(q2)) else {
                break;
            };
            if q > q_max {
                break;
            }
            let p = partial * prev.num() + p2;
            let fraction = Fraction::new_unchecked(p, q);
            let err = abs_error(alpha, fraction);
            let best_first_kind = err_here.cmp_same_context(&err) == Ordering::Less
                && err.cmp_same_context(&err_prev) == Ordering::Less;
            out.push(Semiconvergent { fraction, parent_index: n, partial, best_first_kind });
        }
    }
    out
}

/// Convergents that are genuine best approximations, with denominators up to
/// `q_max`. `a0/1` is dropped when the fractional part is at least one half.
pub fn best_convergents(cf: &CFExpansion, q_max: u64) -> Vec<Fraction> {
    let seq = convergents(cf);
    let skip_leading = !cf.leading_convergent_is_best();
    seq.entries()
        .iter()
        .filter(|&&(n, f)| f.den() <= q_max && !(n == 0 && skip_leading))
        .map(|&(_, f)| f)
        .collect()
}

/// Nearest-numerator candidates `floor(alpha*s)` and `floor(alpha*s) + 1`
/// with their errors. The true nearest numerator is always among them.
fn candidates(alpha: &RealConstant, s: u64) -> Vec<(Fraction, AbsError)> {
    let floor = (alpha.numerator() * s) / alpha.scale();
    let r0 = floor.to_u64().expect("numerator fits in u64");
    [r0, r0 + 1]
        .into_iter()
        .map(|r| {
            let f = Fraction::new_unchecked(r, s);
            (f, abs_error(alpha, f))
        })
        .collect()
}

fn oracle_scan(
    alpha: &RealConstant,
    q_max: u64,
    exec: Execution,
    cmp: impl Fn(&AbsError, &AbsError) -> Ordering,
) -> Result<Vec<Fraction>> {
    if q_max == 0 {
        return Err(Error::input("denominator bound must be at least 1"));
    }
    let per_denominator = exec::map_range(exec, 1..=q_max, |s| candidates(alpha, s));
    let mut best_so_far: Option<AbsError> = None;
    let mut out = Vec::new();
    for cands in per_denominator {
        for (i, (f, err)) in cands.iter().enumerate() {
            let beats_smaller =
                best_so_far.as_ref().is_none_or(|b| cmp(err, b) == Ordering::Less);
            let beats_same = cands
                .iter()
                .enumerate()
                .all(|(j, (_, other))| i == j || cmp(err, other) == Ordering::Less);
            if beats_smaller && beats_same {
                out.push(*f);
            }
        }
        for (_, err) in cands {
            if best_so_far.as_ref().is_none_or(|b| cmp(&err, b) == Ordering::Less) {
                best_so_far = Some(err);
            }
        }
    }
    Ok(out)
}

/// Brute-force best approximations of the first kind with denominators up
/// to `q_max`: each strictly beats every other fraction with a smaller or
/// equal denominator in `|alpha - r/s|`.
pub fn oracle_first_kind(alpha: &RealConstant, q_max: u64) -> Result<Vec<Fraction>> {
    oracle_first_kind_with(alpha, q_max, Execution::default())
}

pub fn oracle_first_kind_with(
    alpha: &RealConstant,
    q_max: u64,
    exec: Execution,
) -> Result<Vec<Fraction>> {
    oracle_scan(alpha, q_max, exec, AbsError::cmp_same_context)
}

/// Brute-force best approximations of the second kind with denominators up
/// to `q_max`, ranked by `|s*alpha - r|`.
pub fn oracle_second_kind(alpha: &RealConstant, q_max: u64) -> Result<Vec<Fraction>> {
    oracle_second_kind_with(alpha, q_max, Execution::default())
}

pub fn oracle_second_kind_with(
    alpha: &RealConstant,
    q_max: u64,
    exec: Execution,
) -> Result<Vec<Fraction>> {
    oracle_scan(alpha, q_max, exec, AbsError::cmp_scaled_same_context)
}
