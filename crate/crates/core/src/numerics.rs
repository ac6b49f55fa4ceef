//! Exact fractions and decimal fixed-point real constants.
//!
//! A [`RealConstant`] stores either an exact rational `N / D` or a decimal
//! approximation `N / 10^P` whose distance from the true value is strictly
//! below one unit in the last place. Every comparison that could be decided
//! differently inside that band is reported as [`Ordering::Equal`] and left
//! to the caller's tie-break.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default working precision in significant decimal digits.
pub const DEFAULT_PRECISION: u32 = 60;
/// Smallest precision accepted by [`make_constant`].
pub const MIN_PRECISION: u32 = 30;

const GUARD_BITS: u64 = 64;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Decimal digits needed to keep every comparison among denominators up to
/// `m_max` well clear of the guard band.
pub fn required_precision(m_max: u64) -> u32 {
    let mut digits = 0u32;
    let mut power = 1u128;
    while power < u128::from(m_max) {
        power *= 10;
        digits += 1;
    }
    2 * digits + 20
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedConstant {
    /// log2(3/2), the octave fraction of a just perfect fifth.
    Beta,
    Pi,
    E,
    Sqrt2,
}

impl NamedConstant {
    pub fn name(self) -> &'static str {
        match self {
            NamedConstant::Beta => "beta",
            NamedConstant::Pi => "pi",
            NamedConstant::E => "e",
            NamedConstant::Sqrt2 => "sqrt2",
        }
    }
}

impl FromStr for NamedConstant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "beta" => Ok(NamedConstant::Beta),
            "pi" => Ok(NamedConstant::Pi),
            "e" => Ok(NamedConstant::E),
            "sqrt2" => Ok(NamedConstant::Sqrt2),
            other => Err(Error::input(format!("unknown constant '{other}'"))),
        }
    }
}

/// How a constant was specified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descriptor {
    Named(NamedConstant),
    /// Decimal literal; both '.' and ',' are accepted as the separator.
    Decimal(String),
    Ratio { num: BigUint, den: BigUint },
    /// log2(num / den).
    Log2Ratio { num: BigUint, den: BigUint },
}

impl Descriptor {
    pub fn ratio(num: u64, den: u64) -> Self {
        Descriptor::Ratio { num: num.into(), den: den.into() }
    }

    pub fn log2_ratio(num: u64, den: u64) -> Self {
        Descriptor::Log2Ratio { num: num.into(), den: den.into() }
    }

    /// Parses `p/q` (or a bare integer `p`) into a [`Descriptor::Ratio`].
    pub fn parse_ratio(text: &str) -> Result<Self> {
        let (num, den) = parse_pair(text)?;
        Ok(Descriptor::Ratio { num, den })
    }

    /// Parses `p/q` into a [`Descriptor::Log2Ratio`].
    pub fn parse_log2_ratio(text: &str) -> Result<Self> {
        let (num, den) = parse_pair(text)?;
        Ok(Descriptor::Log2Ratio { num, den })
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Named(c) => f.write_str(c.name()),
            Descriptor::Decimal(s) => f.write_str(s),
            Descriptor::Ratio { num, den } => write!(f, "{num}/{den}"),
            Descriptor::Log2Ratio { num, den } => write!(f, "log2({num}/{den})"),
        }
    }
}

fn parse_pair(text: &str) -> Result<(BigUint, BigUint)> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let parse = |s: &str| {
        BigUint::from_str(s).map_err(|_| Error::input(format!("cannot parse ratio '{text}'")))
    };
    Ok((parse(num)?, parse(den)?))
}

/// Exact non-negative fraction `num / den` with `den >= 1`.
///
/// Equality is structural (`2/4 != 1/2`); ordering compares values exactly and
/// breaks value ties by denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::input(format!("fraction {num}/0 has a zero denominator")));
        }
        Ok(Fraction { num, den })
    }

    pub(crate) fn new_unchecked(num: u64, den: u64) -> Self {
        debug_assert!(den > 0);
        Fraction { num, den }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn gcd(self) -> u64 {
        self.num.gcd(&self.den)
    }

    pub fn is_reduced(self) -> bool {
        self.gcd() == 1
    }

    pub fn reduced(self) -> Self {
        let g = self.gcd();
        Fraction { num: self.num / g, den: self.den / g }
    }

    /// True when both fractions denote the same rational number.
    pub fn value_eq(self, other: Fraction) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }

    pub fn cmp_value(self, other: Fraction) -> Ordering {
        let lhs = u128::from(self.num) * u128::from(other.den);
        let rhs = u128::from(other.num) * u128::from(self.den);
        lhs.cmp(&rhs)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Value rounded half-up to `places` decimal places.
    pub fn to_decimal(self, places: u32) -> String {
        format_ratio(&BigUint::from(self.num), &BigUint::from(self.den), places)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(*other).then(self.den.cmp(&other.den))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::input(format!("expected k/m, got '{s}'")))?;
        let parse = |t: &str| {
            t.trim().parse::<u64>().map_err(|_| Error::input(format!("cannot parse fraction '{s}'")))
        };
        Fraction::new(parse(n)?, parse(d)?)
    }
}

/// Positive real constant held as `num / scale`.
///
/// For exact constants `num / scale` is the reduced value. Otherwise
/// `scale = 10^precision` and the true value lies strictly within
/// `1 / scale` of `num / scale`.
#[derive(Debug, Clone)]
pub struct RealConstant {
    descriptor: Descriptor,
    precision: u32,
    num: BigUint,
    scale: Arc<BigUint>,
    exact: bool,
}

/// Evaluates `descriptor` to `precision` significant decimal digits.
pub fn make_constant(descriptor: Descriptor, precision: u32) -> Result<RealConstant> {
    if precision < MIN_PRECISION {
        return Err(Error::input(format!(
            "precision {precision} is below the minimum of {MIN_PRECISION} digits"
        )));
    }
    let (num, scale, exact) = evaluate(&descriptor, precision)?;
    if num.is_zero() {
        return Err(Error::input(format!("constant {descriptor} is not positive")));
    }
    Ok(RealConstant { descriptor, precision, num, scale: Arc::new(scale), exact })
}

impl RealConstant {
    pub fn named(constant: NamedConstant, precision: u32) -> Result<Self> {
        make_constant(Descriptor::Named(constant), precision)
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// True for rational constants, which are stored without error.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub(crate) fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub(crate) fn scale(&self) -> &BigUint {
        &self.scale
    }

    /// Re-evaluates the descriptor at another precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        make_constant(self.descriptor.clone(), precision)
    }

    /// Returns a copy whose precision satisfies [`required_precision`] for
    /// `m_max`, never lowering the current precision.
    pub fn for_denominator_bound(&self, m_max: u64) -> Result<Self> {
        let needed = required_precision(m_max);
        if needed > self.precision {
            self.with_precision(needed)
        } else {
            Ok(self.clone())
        }
    }

    /// Whether this constant may be used for denominators up to `m_max`.
    pub fn supports_denominator(&self, m_max: u64) -> bool {
        self.exact || self.precision >= required_precision(m_max)
    }

    /// Floor of the stored value.
    pub fn floor(&self) -> BigUint {
        &self.num / &*self.scale
    }

    /// Compares the constant with `f`; returns `Equal` when the stored
    /// approximation cannot separate them.
    pub fn cmp_fraction(&self, f: Fraction) -> Ordering {
        let lhs = &self.num * f.den;
        let rhs = &*self.scale * f.num;
        if self.exact {
            return lhs.cmp(&rhs);
        }
        let slack = BigUint::from(f.den);
        if abs_diff(&lhs, &rhs) <= slack {
            Ordering::Equal
        } else {
            lhs.cmp(&rhs)
        }
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.num, &self.scale)
    }

    /// Stored value rounded half-up to `places` decimal places.
    pub fn to_decimal(&self, places: u32) -> String {
        format_ratio(&self.num, &self.scale, places)
    }
}

impl fmt::Display for RealConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = if self.exact { 30 } else { self.precision };
        f.write_str(&self.to_decimal(places))
    }
}

/// Absolute error `|alpha - k/m|` held exactly as `diff / (scale * m)`.
#[derive(Debug, Clone)]
pub struct AbsError {
    diff: BigUint,
    den: u64,
    exact: bool,
    precision: u32,
    scale: Arc<BigUint>,
}

/// Absolute error of `f` against `alpha` at the constant's full precision.
pub fn abs_error(alpha: &RealConstant, f: Fraction) -> AbsError {
    let lhs = &alpha.num * f.den;
    let rhs = &*alpha.scale * f.num;
    AbsError {
        diff: abs_diff(&lhs, &rhs),
        den: f.den,
        exact: alpha.exact,
        precision: alpha.precision,
        scale: Arc::clone(&alpha.scale),
    }
}

/// Orders two absolute errors computed against the same constant.
///
/// Returns `Equal` when the difference is within the combined guard band
/// (two units of `1 / scale`); for exact constants the comparison is exact.
pub fn compare_errors(a: &AbsError, b: &AbsError) -> Result<Ordering> {
    a.check_context(b)?;
    Ok(a.cmp_same_context(b))
}

/// Orders `|m_a * alpha - k_a|` against `|m_b * alpha - k_b|`, the quantity
/// minimised by best approximations of the second kind.
pub fn compare_scaled_errors(a: &AbsError, b: &AbsError) -> Result<Ordering> {
    a.check_context(b)?;
    Ok(a.cmp_scaled_same_context(b))
}

impl AbsError {
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Denominator of the fraction this error was computed for.
    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.diff.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub(crate) fn same_context(&self, other: &AbsError) -> bool {
        self.precision == other.precision
            && self.exact == other.exact
            && (Arc::ptr_eq(&self.scale, &other.scale) || self.scale == other.scale)
    }

    fn check_context(&self, other: &AbsError) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "cannot compare errors computed at {} and {} digits of different constants",
                self.precision, other.precision
            )))
        }
    }

    pub(crate) fn cmp_same_context(&self, other: &AbsError) -> Ordering {
        let lhs = &self.diff * other.den;
        let rhs = &other.diff * self.den;
        if self.exact {
            return lhs.cmp(&rhs);
        }
        let slack = BigUint::from(2u8) * self.den * other.den;
        if abs_diff(&lhs, &rhs) <= slack {
            Ordering::Equal
        } else {
            lhs.cmp(&rhs)
        }
    }

    pub(crate) fn cmp_scaled_same_context(&self, other: &AbsError) -> Ordering {
        if self.exact {
            return self.diff.cmp(&other.diff);
        }
        let slack = BigUint::from(self.den) + other.den;
        if abs_diff(&self.diff, &other.diff) <= slack {
            Ordering::Equal
        } else {
            self.diff.cmp(&other.diff)
        }
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.diff, &(&*self.scale * self.den))
    }

    /// Error rounded half-up to `places` decimal places.
    pub fn to_decimal(&self, places: u32) -> String {
        format_ratio(&self.diff, &(&*self.scale * self.den), places)
    }

    /// `factor` times the error, rounded half-up to `places` decimal places.
    pub fn to_decimal_scaled(&self, factor: u64, places: u32) -> String {
        format_ratio(&(&self.diff * factor), &(&*self.scale * self.den), places)
    }
}

impl fmt::Display for AbsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.precision))
    }
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

fn format_ratio(num: &BigUint, den: &BigUint, places: u32) -> String {
    let pow = BigUint::from(10u8).pow(places);
    let scaled = (num * &pow * 2u8 + den) / (den * 2u8);
    let (int, frac) = scaled.div_rem(&pow);
    if places == 0 {
        return int.to_string();
    }
    format!("{int}.{:0>width$}", frac.to_string(), width = places as usize)
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // Keep ~64 significant bits in the integer quotient.
    let shift = (64 + den.bits()).saturating_sub(num.bits());
    let quotient = (num << shift) / den;
    let mantissa = quotient.to_f64().unwrap_or(f64::INFINITY);
    let exp = i32::try_from(shift).unwrap_or(i32::MAX);
    if exp > 1000 {
        mantissa * 2f64.powi(-1000) * 2f64.powi(-(exp - 1000))
    } else {
        mantissa * 2f64.powi(-exp)
    }
}

fn evaluate(descriptor: &Descriptor, precision: u32) -> Result<(BigUint, BigUint, bool)> {
    match descriptor {
        Descriptor::Named(c) => {
            let bits = working_bits(precision);
            let fixed = match c {
                NamedConstant::Beta => log2_fixed(&BigUint::from(3u8), &BigUint::from(2u8), bits),
                NamedConstant::Pi => pi_fixed(bits),
                NamedConstant::E => e_fixed(bits),
                NamedConstant::Sqrt2 => (BigUint::from(2u8) << (2 * bits)).sqrt(),
            };
            Ok(round_to_decimal(&fixed, bits, precision))
        }
        Descriptor::Decimal(text) => {
            let (num, den) = parse_decimal(text)?;
            Ok(reduce(num, den))
        }
        Descriptor::Ratio { num, den } => {
            if den.is_zero() {
                return Err(Error::input(format!("ratio {num}/{den} has a zero denominator")));
            }
            if num.is_zero() {
                return Err(Error::input(format!("ratio {num}/{den} is not positive")));
            }
            Ok(reduce(num.clone(), den.clone()))
        }
        Descriptor::Log2Ratio { num, den } => {
            if den.is_zero() {
                return Err(Error::input(format!("ratio {num}/{den} has a zero denominator")));
            }
            if num <= den {
                return Err(Error::input(format!(
                    "log2({num}/{den}) is not positive; the ratio must exceed 1"
                )));
            }
            let (num, den, _) = reduce(num.clone(), den.clone());
            if den.is_one() && num.count_ones() == 1 {
                // Exact power of two.
                return Ok((BigUint::from(num.bits() - 1), BigUint::one(), true));
            }
            let bits = working_bits(precision);
            Ok(round_to_decimal(&log2_fixed(&num, &den, bits), bits, precision))
        }
    }
}

fn reduce(num: BigUint, den: BigUint) -> (BigUint, BigUint, bool) {
    let g = num.gcd(&den);
    (num / &g, den / &g, true)
}

fn parse_decimal(text: &str) -> Result<(BigUint, BigUint)> {
    let trimmed = text.trim();
    let body = trimmed.strip_prefix('+').unwrap_or(trimmed);
    if body.starts_with('-') {
        return Err(Error::input(format!("value '{text}' is not positive")));
    }
    let (int_part, frac_part) = match body.find(['.', ',']) {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    let valid = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !valid(int_part) || !valid(frac_part) {
        return Err(Error::input(format!("cannot parse decimal '{text}'")));
    }
    let digits = format!("{int_part}{frac_part}");
    let num = BigUint::from_str(&digits).map_err(|_| Error::input(format!("cannot parse decimal '{text}'")))?;
    if num.is_zero() {
        return Err(Error::input(format!("value '{text}' is not positive")));
    }
    let den = BigUint::from(10u8).pow(frac_part.len() as u32);
    Ok((num, den))
}

fn working_bits(precision: u32) -> u64 {
    (f64::from(precision) * LOG2_10).ceil() as u64 + GUARD_BITS
}

/// Converts a binary fixed-point value `fixed / 2^bits` into `N / 10^precision`.
fn round_to_decimal(fixed: &BigUint, bits: u64, precision: u32) -> (BigUint, BigUint, bool) {
    let scale = BigUint::from(10u8).pow(precision);
    let half = BigUint::one() << (bits - 1);
    let num = (fixed * &scale + half) >> bits;
    (num, scale, false)
}

/// atanh(a / c) * 2^bits for 0 <= a < c.
fn atanh_fixed(a: &BigUint, c: &BigUint, bits: u64) -> BigUint {
    let a2 = a * a;
    let c2 = c * c;
    let mut term = (BigUint::one() << bits) * a / c;
    let mut sum = BigUint::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        sum += &term / (2 * k + 1);
        term = term * &a2 / &c2;
        k += 1;
    }
    sum
}

/// atan(1 / n) * 2^bits.
fn atan_recip_fixed(n: u64, bits: u64) -> BigInt {
    let n2 = BigUint::from(n * n);
    let mut term = (BigUint::one() << bits) / n;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        let t = BigInt::from_biguint(Sign::Plus, &term / (2 * k + 1));
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &n2;
        k += 1;
    }
    sum
}

fn pi_fixed(bits: u64) -> BigUint {
    let pi: BigInt = atan_recip_fixed(5, bits) * 16 - atan_recip_fixed(239, bits) * 4;
    pi.to_biguint().expect("pi is positive")
}

fn e_fixed(bits: u64) -> BigUint {
    let mut term = BigUint::one() << bits;
    let mut sum = BigUint::zero();
    let mut k = 1u64;
    while !term.is_zero() {
        sum += &term;
        term /= k;
        k += 1;
    }
    sum
}

/// log2(num / den) * 2^bits for num > den > 0.
fn log2_fixed(num: &BigUint, den: &BigUint, bits: u64) -> BigUint {
    // Split num/den = 2^k * r with 1 <= r < 2.
    let mut k = num.bits().saturating_sub(den.bits());
    while (den << k) > *num {
        k -= 1;
    }
    while (den << (k + 1)) <= *num {
        k += 1;
    }
    let shifted = den << k;
    let a = num - &shifted;
    let c = num + &shifted;
    let ln_r = atanh_fixed(&a, &c, bits) << 1u8;
    let ln2 = atanh_fixed(&BigUint::one(), &BigUint::from(3u8), bits) << 1u8;
    (BigUint::from(k) << bits) + (ln_r << bits) / ln2
}
