//! Rigorous interval evaluation over binary floating-point endpoints.
//!
//! Endpoints are dyadic numbers `mant · 2^exp` with arbitrary-precision
//! mantissas. Every operation rounds lower bounds down and upper bounds up,
//! so the true value always stays enclosed. Transcendental functions are
//! only ever evaluated for `B^x`, via `exp(f · ln B)` with explicit series
//! tail bounds.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{check_base, FieldElement, Radical, Rational};
use crate::tower::{ExpSum, PowNum};

/// Largest `|z|` for which `B^z` is evaluated.
pub const MAGNITUDE_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Round {
    Down,
    Up,
}

/// Exact binary float `mant · 2^exp`, normalized to an odd mantissa.
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn magnitude(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.mant.bits() as i64 - 1 + self.exp)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as usize)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
                .expect("nonzero denominator")
        }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.mant >> shift as usize).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi((self.exp + shift).clamp(-1100, 1100) as i32)
    }

    fn round(&self, prec: u64, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = (bits - prec) as usize;
        let mut q = &self.mant >> shift;
        if dir == Round::Up && (&q << shift) != self.mant {
            q += 1;
        }
        Dyadic::new(q, self.exp + shift as i64)
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    fn div_round(&self, other: &Dyadic, prec: u64, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "division by a zero endpoint");
        let s = (prec as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2).max(0);
        let num = &self.mant << s as usize;
        let (mut q, r) = num.div_mod_floor(&other.mant);
        if dir == Round::Up && !r.is_zero() {
            q += 1;
        }
        Dyadic::new(q, self.exp - other.exp - s).round(prec, dir)
    }

    /// `floor(x)` as an integer.
    fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            &self.mant >> (-self.exp) as usize
        }
    }

    fn from_rational(r: &Rational, prec: u64, dir: Round) -> Dyadic {
        let (n, d) = (r.numer(), r.denom());
        if (d & (d - BigInt::one())).is_zero() {
            let k = d.bits() as i64 - 1;
            return Dyadic::new(n.clone(), -k).round(prec, dir);
        }
        let s = (prec as i64 + d.bits() as i64 - n.bits() as i64 + 2).max(0);
        let (mut q, rem) = (n << s as usize).div_mod_floor(d);
        if dir == Round::Up && !rem.is_zero() {
            q += 1;
        }
        Dyadic::new(q, -s).round(prec, dir)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.add(&other.neg());
        diff.mant.sign().cmp(&num_bigint::Sign::NoSign)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

/// Closed interval `[lo, hi]` guaranteed to contain the represented real.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    precision: u64,
}

/// Sign of a real established by interval evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignResult {
    Negative,
    Positive,
    Undetermined,
}

impl Interval {
    fn new(lo: Dyadic, hi: Dyadic, precision: u64) -> Self {
        debug_assert!(lo <= hi, "inverted interval {lo:?} > {hi:?}");
        Interval { lo, hi, precision }
    }

    pub fn point(d: Dyadic, prec: u64) -> Self {
        Interval::new(d.round(prec, Round::Down), d.round(prec, Round::Up), prec)
    }

    pub fn from_rational(r: &Rational, prec: u64) -> Self {
        Interval::new(
            Dyadic::from_rational(r, prec, Round::Down),
            Dyadic::from_rational(r, prec, Round::Up),
            prec,
        )
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.add(&self.lo.neg())
    }

    /// `floor(log2(width))`, `None` for a point.
    pub fn width_log2(&self) -> Option<i64> {
        self.width().magnitude()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        let lo = self.lo.to_rational();
        let hi = self.hi.to_rational();
        &lo <= r && r <= &hi
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn sign(&self) -> SignResult {
        if self.lo.is_positive() {
            SignResult::Positive
        } else if self.hi.is_negative() {
            SignResult::Negative
        } else {
            SignResult::Undetermined
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    /// Largest `|x|` over the interval.
    pub fn mag(&self) -> Dyadic {
        let a = if self.lo.is_negative() {
            self.lo.neg()
        } else {
            self.lo.clone()
        };
        let b = if self.hi.is_negative() {
            self.hi.neg()
        } else {
            self.hi.clone()
        };
        a.max(b)
    }

    pub fn round_to(&self, prec: u64) -> Interval {
        Interval::new(
            self.lo.round(prec, Round::Down),
            self.hi.round(prec, Round::Up),
            prec,
        )
    }

    pub fn add(&self, other: &Interval, prec: u64) -> Interval {
        Interval::new(
            self.lo.add(&other.lo).round(prec, Round::Down),
            self.hi.add(&other.hi).round(prec, Round::Up),
            prec,
        )
    }

    pub fn neg(&self) -> Interval {
        Interval::new(self.hi.neg(), self.lo.neg(), self.precision)
    }

    pub fn sub(&self, other: &Interval, prec: u64) -> Interval {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Interval, prec: u64) -> Interval {
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Interval::new(lo.round(prec, Round::Down), hi.round(prec, Round::Up), prec)
    }

    fn shl(&self, k: i64) -> Interval {
        Interval::new(self.lo.shl(k), self.hi.shl(k), self.precision)
    }

    fn div_positive_int(&self, k: u64, prec: u64) -> Interval {
        let d = Dyadic::from_int(k);
        Interval::new(
            self.lo.div_round(&d, prec, Round::Down),
            self.hi.div_round(&d, prec, Round::Up),
            prec,
        )
    }

    fn recip(&self, prec: u64) -> Interval {
        assert!(
            !self.contains_zero(),
            "reciprocal of an interval containing zero"
        );
        let one = Dyadic::from_int(1);
        Interval::new(
            one.div_round(&self.hi, prec, Round::Down),
            one.div_round(&self.lo, prec, Round::Up),
            prec,
        )
    }

    /// Decimal enclosure `[lo, hi]` with `digits` significant digits,
    /// rounded outward.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            decimal(&self.lo, digits, Round::Down),
            decimal(&self.hi, digits, Round::Up)
        )
    }
}

fn decimal(x: &Dyadic, digits: usize, dir: Round) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if x.exp >= 0 && x.mant.bits() as i64 + x.exp <= 128 {
        return x.floor().to_string();
    }
    let v = x.to_rational();
    let neg = v.is_negative();
    let a = v.abs();
    let ten = Rational::from(10);
    // k = floor(log10 |v|)
    let mut k =
        ((x.mant.bits() as f64 - 1.0 + x.exp as f64) * std::f64::consts::LOG10_2).floor() as i64;
    loop {
        let p = ten.pow_int(k).expect("nonzero");
        if a < p {
            k -= 1;
        } else if a >= &p * &ten {
            k += 1;
        } else {
            break;
        }
    }
    let scaled = &a * &ten.pow_int(digits as i64 - 1 - k).expect("nonzero");
    // round |v| toward zero for (Down, positive) or (Up, negative), else away
    let toward_zero = (dir == Round::Down) != neg;
    let mut m = scaled.floor();
    if !toward_zero && !scaled.is_integer() {
        m += 1;
    }
    let mut s = m.to_string();
    if s.len() > digits {
        // carry into a new digit, e.g. 9.99 → 10.0
        k += 1;
        s.truncate(digits);
    }
    let sign = if neg { "-" } else { "" };
    let body = if (-6..21).contains(&k) {
        if k >= 0 {
            let int_len = (k + 1) as usize;
            if s.len() <= int_len {
                format!("{s}{}", "0".repeat(int_len - s.len()))
            } else {
                format!("{}.{}", &s[..int_len], &s[int_len..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-k - 1) as usize), s)
        }
    } else {
        let (head, tail) = s.split_at(1);
        if tail.is_empty() {
            format!("{head}e{k}")
        } else {
            format!("{head}.{tail}e{k}")
        }
    };
    format!("{sign}{}", body.trim_end_matches('.'))
}

fn ln_cache() -> &'static RwLock<HashMap<(u64, u64), Interval>> {
    static CACHE: OnceLock<RwLock<HashMap<(u64, u64), Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `2 · atanh(t) = ln((1 + t)/(1 − t))` for `0 ≤ t ≤ 1/3`.
fn two_atanh(t: &Rational, prec: u64) -> Interval {
    let t2 = t * t;
    let mut power = t.clone();
    let mut sum = Interval::from_rational(&Rational::zero(), prec);
    let cutoff = Rational::new(1, BigInt::one() << (prec as usize + 8)).expect("nonzero");
    let mut i: i64 = 0;
    while !power.is_zero() && power >= cutoff {
        let term = &power * &Rational::new(1, 2 * i + 1).expect("nonzero");
        sum = sum.add(&Interval::from_rational(&term, prec), prec);
        power = &power * &t2;
        i += 1;
    }
    // remainder ≤ power / ((2i+1)(1 − t²)) ≤ 9/8 · power
    let tail = &power * &Rational::new(9, 8).expect("nonzero");
    let tail = Interval::new(
        Dyadic::zero(),
        Dyadic::from_rational(&tail, prec, Round::Up),
        prec,
    );
    sum.add(&tail, prec).shl(1)
}

/// Enclosure of `ln B`, cached per base and precision class.
pub fn ln_base(base: u64, prec: u64) -> Interval {
    let class = prec.div_ceil(128) * 128;
    if let Some(v) = ln_cache().read().expect("ln cache").get(&(base, class)) {
        return v.clone();
    }
    let w = class + 16;
    let ln2 = two_atanh(&Rational::new(1, 3).expect("nonzero"), w);
    let k = 63 - base.leading_zeros() as u64;
    let pow2 = 1u64 << k;
    let mut v = ln2.mul(&Interval::from_rational(&Rational::from(k as i64), w), w);
    if base != pow2 {
        let t =
            Rational::new(base as i64 - pow2 as i64, base as i64 + pow2 as i64).expect("nonzero");
        v = v.add(&two_atanh(&t, w), w);
    }
    let v = v.round_to(class);
    ln_cache()
        .write()
        .expect("ln cache")
        .insert((base, class), v.clone());
    v
}

/// `exp(y)` for `y ≥ 0` by argument halving, Taylor series with a tail
/// bound, and repeated squaring.
fn exp_nonneg(y: &Interval, prec: u64) -> Interval {
    debug_assert!(!y.lo.is_negative());
    let r = match y.hi.magnitude() {
        Some(m) => (m + 6).max(0),
        None => return Interval::from_rational(&Rational::one(), prec),
    };
    let w = prec + r as u64 + 16;
    let u = y.shl(-r);
    let mut sum = Interval::from_rational(&Rational::one(), w);
    let mut term = sum.clone();
    let threshold = -(w as i64) - 4;
    let mut i = 1u64;
    loop {
        term = term.mul(&u, w).div_positive_int(i, w);
        sum = sum.add(&term, w);
        if term.hi.magnitude().is_none_or(|m| m < threshold) {
            break;
        }
        i += 1;
    }
    // u ≤ 1/32, so the remaining tail is below the last term
    sum = sum.add(&Interval::new(Dyadic::zero(), term.hi.clone(), w), w);
    for _ in 0..r {
        sum = sum.mul(&sum, w);
    }
    sum.round_to(prec)
}

/// Enclosure of `B^z` for an integer `z`.
fn int_power(base: u64, z: &BigInt, prec: u64) -> Interval {
    if base == 2 {
        let e = z.to_i64().expect("bounded by the magnitude cap");
        return Interval::point(Dyadic::new(BigInt::one(), e), prec);
    }
    let mut n = z.abs().to_u64().expect("bounded by the magnitude cap");
    let w = prec + 2 * (64 - n.leading_zeros() as u64) + 8;
    let mut acc = Interval::from_rational(&Rational::one(), w);
    let mut sq = Interval::from_rational(&Rational::from(base as i64), w);
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul(&sq, w);
        }
        n >>= 1;
        if n > 0 {
            sq = sq.mul(&sq, w);
        }
    }
    if z.is_negative() {
        acc = acc.recip(w);
    }
    acc.round_to(prec)
}

fn pow_point(t: &Dyadic, base: u64, prec: u64) -> Result<Interval> {
    let z = t.floor();
    if z.abs() > BigInt::from(MAGNITUDE_CAP) {
        return Err(Error::Magnitude(format!(
            "{base}^x with |x| beyond {MAGNITUDE_CAP}"
        )));
    }
    let f = t.add(&Dyadic::from_int(z.clone()).neg());
    let w = prec + 24;
    let bz = int_power(base, &z, w);
    if f.is_zero() {
        return Ok(bz.round_to(prec));
    }
    let y = Interval::point(f, w).mul(&ln_base(base, w), w);
    Ok(bz.mul(&exp_nonneg(&y, w), w).round_to(prec))
}

/// Rigorous `B^x`; monotone, so only the endpoints are evaluated.
pub fn eval_pow2(x: &Interval, base: u64, bits: u64) -> Result<Interval> {
    check_base(base)?;
    let w = bits + 16;
    let lo = pow_point(&x.lo, base, w)?;
    let hi = if x.is_point() {
        lo.clone()
    } else {
        pow_point(&x.hi, base, w)?
    };
    Ok(Interval::new(lo.lo, hi.hi, w).round_to(bits))
}

fn eval_expsum_at(e: &ExpSum, base: u64, w: u64) -> Result<Interval> {
    let mut acc = Interval::from_rational(e.constant_part(), w);
    for c in e.chains() {
        let inner = eval_expsum_at(c.inner(), base, w)?;
        let p = eval_pow2(&inner, base, w)?;
        let term = Interval::from_rational(c.coeff(), w).mul(&p, w);
        acc = acc.add(&term, w);
    }
    Ok(acc)
}

/// Enclosure of the real value of an exponent sum.
pub fn eval_expsum(e: &ExpSum, base: u64, bits: u64) -> Result<Interval> {
    check_base(base)?;
    let w = bits + 32 + 16 * e.depth() as u64;
    Ok(eval_expsum_at(e, base, w)?.round_to(bits))
}

/// Enclosure of the positive real `B^E`.
pub fn eval_pownum(x: &PowNum, bits: u64) -> Result<Interval> {
    let w = bits + 32 + 16 * x.exponent().depth() as u64;
    let e = eval_expsum_at(x.exponent(), x.base(), w)?;
    Ok(eval_pow2(&e, x.base(), w)?.round_to(bits))
}

pub fn eval_radical(x: &Radical, bits: u64) -> Result<Interval> {
    let w = bits + 32;
    let mut acc = Interval::from_rational(&Rational::zero(), w);
    for (f, c) in x.terms() {
        let p = eval_pow2(&Interval::from_rational(f, w), x.base(), w)?;
        acc = acc.add(&Interval::from_rational(c, w).mul(&p, w), w);
    }
    Ok(acc.round_to(bits))
}

pub fn eval_field(x: &FieldElement, bits: u64) -> Result<Interval> {
    eval_radical(&Radical::from_field_element(x)?, bits)
}

/// Precision schedule: 64 bits, doubling, capped at (and always ending on)
/// `max_bits`.
pub fn precision_schedule(max_bits: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut b = 64u64.min(max_bits.max(16));
    while b < max_bits {
        out.push(b);
        b *= 2;
    }
    out.push(max_bits.max(16));
    out
}

/// Sign of `e` with the narrowest enclosure seen; `Undetermined` whenever
/// every enclosure up to `max_bits` straddles zero (always, for an exact
/// zero) or evaluation overflows the magnitude cap.
pub fn sign_with_enclosure(e: &ExpSum, base: u64, max_bits: u64) -> (SignResult, Option<Interval>) {
    let mut best = None;
    for bits in precision_schedule(max_bits) {
        match eval_expsum(e, base, bits) {
            Ok(iv) => {
                let s = iv.sign();
                best = Some(iv);
                if s != SignResult::Undetermined {
                    return (s, best);
                }
            }
            Err(_) => return (sign_by_dominance(e, base, max_bits.min(128)), best),
        }
    }
    (SignResult::Undetermined, best)
}

fn log2_abs_rational(r: &Rational, prec: u64) -> Interval {
    // |r| = 2^e · m with m ∈ [1, 2); ln m = 2·atanh((m - 1)/(m + 1))
    let a = r.abs();
    let mut e = a.numer().bits() as i64 - a.denom().bits() as i64;
    let mut m = &a * &Rational::from(2).pow_int(-e).expect("nonzero");
    if m < Rational::one() {
        e -= 1;
        m = &m * &Rational::from(2);
    }
    let t = (&m - &Rational::one())
        .checked_div(&(&m + &Rational::one()))
        .expect("nonzero");
    let frac = two_atanh(&t, prec).mul(&ln_base(2, prec).recip(prec), prec);
    Interval::from_rational(&Rational::from(e), prec).add(&frac, prec)
}

/// Sign of a sum whose largest term dwarfs the rest, decided from
/// enclosures of `log2 |term|`. The huge powers themselves are never
/// evaluated, only their exponents.
pub fn sign_by_dominance(e: &ExpSum, base: u64, bits: u64) -> SignResult {
    if check_base(base).is_err() {
        return SignResult::Undetermined;
    }
    let w = bits.max(64);
    let log2b = ln_base(base, w).mul(&ln_base(2, w).recip(w), w);
    let mut terms: Vec<(Interval, bool)> = Vec::new();
    let c = e.constant_part();
    if !c.is_zero() {
        terms.push((log2_abs_rational(c, w), c.is_negative()));
    }
    for ch in e.chains() {
        let Ok(inner) = eval_expsum(ch.inner(), base, w) else {
            return SignResult::Undetermined;
        };
        let l = log2_abs_rational(ch.coeff(), w).add(&log2b.mul(&inner, w), w);
        terms.push((l, ch.coeff().is_negative()));
    }
    let Some(j) = (0..terms.len()).max_by(|&x, &y| terms[x].0.lo.cmp(&terms[y].0.lo)) else {
        return SignResult::Undetermined;
    };
    let sign = if terms[j].1 {
        SignResult::Negative
    } else {
        SignResult::Positive
    };
    let others: Vec<&Interval> = (0..terms.len())
        .filter(|&i| i != j)
        .map(|i| &terms[i].0)
        .collect();
    let Some(top_other) = others.iter().map(|iv| iv.hi.clone()).max() else {
        return sign;
    };
    // the others sum to at most len · 2^top_other
    let slack = 64 - (others.len() as u64 - 1).leading_zeros() as i64;
    if terms[j].0.lo > top_other.add(&Dyadic::from_int(slack)) {
        sign
    } else {
        SignResult::Undetermined
    }
}

pub fn sign_of(e: &ExpSum, base: u64, max_bits: u64) -> SignResult {
    sign_with_enclosure(e, base, max_bits).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::ExpSum;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn c(r: &str) -> ExpSum {
        ExpSum::constant(q(r))
    }

    // Independent oracle: floor(sqrt(2) · 2^k) by integer square root.
    fn sqrt2_scaled(k: u32) -> BigInt {
        (BigInt::from(2) << (2 * k as usize)).sqrt()
    }

    #[test]
    fn shifts_floor_negative_numbers() {
        assert_eq!(BigInt::from(-3) >> 1usize, BigInt::from(-2));
    }

    #[test]
    fn dyadic_rounding_is_directed() {
        let third_lo = Dyadic::from_rational(&q("1/3"), 20, Round::Down);
        let third_hi = Dyadic::from_rational(&q("1/3"), 20, Round::Up);
        assert!(third_lo.to_rational() < q("1/3"));
        assert!(third_hi.to_rational() > q("1/3"));
        let neg_lo = Dyadic::from_rational(&q("-1/3"), 20, Round::Down);
        assert!(neg_lo.to_rational() < q("-1/3"));
    }

    #[test]
    fn constants_are_points() {
        let iv = eval_expsum(&c("4"), 2, 64).unwrap();
        assert!(iv.is_point());
        assert_eq!(iv.lo().to_rational(), q("4"));
        assert!(eval_expsum(&c("-3/8"), 2, 64).unwrap().is_point());
    }

    #[test]
    fn pow_examples() {
        let one = Interval::from_rational(&q("1"), 64);
        let iv = eval_pow2(&one, 2, 64).unwrap();
        assert!(iv.is_point() && iv.lo().to_rational() == q("2"));
        let ten = Interval::from_rational(&q("10"), 64);
        assert_eq!(
            eval_pow2(&ten, 2, 64).unwrap().lo().to_rational(),
            q("1024")
        );
        let bits = 128;
        let half = Interval::from_rational(&q("-1/2"), bits);
        let iv = eval_pow2(&half, 2, bits).unwrap();
        // 2^(-1/2) = sqrt(2)/2
        let s = sqrt2_scaled(200);
        let lo = Rational::new(s.clone(), BigInt::one() << 201usize).unwrap();
        let hi = Rational::new(s + 1, BigInt::one() << 201usize).unwrap();
        assert!(iv.lo().to_rational() <= lo && hi <= iv.hi().to_rational());
        assert!(iv.width_log2().unwrap() < -(bits as i64) + 4);
        let big = Interval::from_rational(&Rational::from(1i64 << 21), 64);
        assert!(matches!(eval_pow2(&big, 2, 64), Err(Error::Magnitude(_))));
    }

    #[test]
    fn ln_matches_float() {
        for b in [2u64, 3, 5, 7, 97] {
            let iv = ln_base(b, 128);
            let f = (b as f64).ln();
            assert!((iv.midpoint_f64() - f).abs() < 1e-14, "ln {b}");
            assert!(iv.width_log2().unwrap() < -120);
        }
    }

    #[test]
    fn chain_enclosure_of_minus_inverse_sqrt2() {
        let e = ExpSum::chain(q("-1"), c("-1/2"));
        let iv = eval_expsum(&e, 2, 128).unwrap();
        assert!(iv.width_log2().unwrap() < -100);
        let s = sqrt2_scaled(200);
        let v = Rational::new(-s, BigInt::one() << 201usize).unwrap();
        assert!(iv.lo().to_rational() < v && v - q("1/1000000000") < iv.hi().to_rational());
        assert!((iv.midpoint_f64() + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn non_prime_bases_other_than_two() {
        let e = ExpSum::chain(q("1"), c("1/2"));
        let iv = eval_expsum(&e, 3, 96).unwrap();
        assert!((iv.midpoint_f64() - 3f64.sqrt()).abs() < 1e-15);
        let e = ExpSum::chain(q("2"), c("-7/3"));
        let iv = eval_expsum(&e, 5, 96).unwrap();
        assert!((iv.midpoint_f64() - 2.0 * 5f64.powf(-7.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn sign_examples() {
        assert_eq!(sign_of(&c("-1/3"), 2, 16), SignResult::Negative);
        // 2^(2^(-1/2)) ≈ 1.6325 < 2
        let e = ExpSum::chain(q("1"), ExpSum::chain(q("1"), c("-1/2"))).sub(&c("2"));
        assert_eq!(sign_of(&e, 2, 256), SignResult::Negative);
        assert_eq!(sign_of(&ExpSum::zero(), 2, 256), SignResult::Undetermined);
    }

    #[test]
    fn decimal_output() {
        let iv = eval_expsum(&c("16"), 2, 64).unwrap();
        assert_eq!(iv.to_decimal_string(10), "[16, 16]");
        let iv = eval_expsum(&c("-1/3"), 2, 64).unwrap();
        assert_eq!(iv.to_decimal_string(5), "[-0.33334, -0.33333]");
        let iv = eval_expsum(&c("1/1024"), 2, 64).unwrap();
        assert_eq!(iv.to_decimal_string(3), "[0.000976, 0.000977]");
    }

    #[test]
    fn dominance_handles_huge_powers() {
        let huge = Rational::from(40i64 << 40);
        let e = c("41943040").sub(&ExpSum::chain(q("40"), ExpSum::constant(huge.clone())));
        assert!(eval_expsum(&e, 2, 64).is_err());
        assert_eq!(sign_of(&e, 2, 256), SignResult::Negative);
        let close = ExpSum::chain(q("1"), ExpSum::constant(huge.clone())).sub(&ExpSum::chain(
            q("1"),
            ExpSum::constant(huge + Rational::from(1)),
        ));
        assert_eq!(sign_by_dominance(&close, 2, 128), SignResult::Negative);
        let wins = ExpSum::chain(q("3"), c("5000000")).sub(&ExpSum::chain(q("2"), c("5000000")));
        assert_eq!(sign_by_dominance(&wins, 2, 128), SignResult::Positive);
        // 2·2^X against 2^(X+1): equal magnitudes, nothing dominates
        let tie = ExpSum::chain(q("2"), c("5000000")).sub(&ExpSum::chain(q("1"), c("5000001")));
        assert_eq!(sign_by_dominance(&tie, 2, 128), SignResult::Undetermined);
        assert_eq!(sign_by_dominance(&c("-5"), 3, 64), SignResult::Negative);
    }

    #[test]
    fn schedule() {
        assert_eq!(precision_schedule(256), vec![64, 128, 256]);
        assert_eq!(precision_schedule(100), vec![64, 100]);
        assert_eq!(precision_schedule(32), vec![32]);
    }
}
