//! Exact arithmetic: rationals, the radical field `Q(B^(1/N))` in dense
//! coordinates, and a sparse form of the same numbers used by the decision
//! procedures.

mod field;
mod radical;
mod rational;

pub use field::FieldElement;
pub use radical::Radical;
pub use rational::{cmp as rational_cmp, Rational};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest power `B^z` (measured in bits of the result) that is ever
/// materialized as an exact integer.
pub const MAX_MATERIALIZED_BITS: u64 = 1 << 16;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_base(base: u64) -> Result<()> {
    if is_prime(base) {
        Ok(())
    } else {
        Err(Error::BaseNotSupported(base))
    }
}

pub(crate) fn log2_base(base: u64) -> f64 {
    (base as f64).log2()
}

/// Whether `B^z` is small enough to materialize.
pub fn power_fits(base: u64, z: &BigInt) -> bool {
    match z.abs().to_u64() {
        Some(m) => (m as f64) * log2_base(base) <= MAX_MATERIALIZED_BITS as f64,
        None => false,
    }
}

/// Exact `B^z` for an integer `z` of either sign.
pub fn base_pow(base: u64, z: &BigInt) -> Result<Rational> {
    if !power_fits(base, z) {
        return Err(Error::Magnitude(format!(
            "{base}^{z} is too large to materialize"
        )));
    }
    let m = z.abs().to_u32().expect("bounded by power_fits");
    let p = num_traits::pow(BigInt::from(base), m as usize);
    if z.is_negative() {
        Rational::new(1, p)
    } else {
        Ok(Rational::from_integer(p))
    }
}

/// Decides `q * B^d == target` for an integer `d` without materializing
/// `B^d` when the sizes already rule it out.
pub fn scaled_power_equals(q: &Rational, base: u64, d: &BigInt, target: &Rational) -> bool {
    if q.is_zero() || target.is_zero() {
        return q.is_zero() && target.is_zero();
    }
    if d.is_zero() {
        return q == target;
    }
    let ratio = target.checked_div(q).expect("q is nonzero");
    if !ratio.is_positive() {
        return false;
    }
    let approx = ratio.numer().bits() as f64 - ratio.denom().bits() as f64;
    let want = match d.to_f64() {
        Some(v) => v * log2_base(base),
        None => return false,
    };
    if (approx - want).abs() > 2.0 {
        return false;
    }
    match base_pow(base, d) {
        Ok(p) => p == ratio,
        Err(_) => false,
    }
}

/// `Some(s)` when `r == B^s` for an integer `s`.
pub fn power_of_base(r: &Rational, base: u64) -> Option<BigInt> {
    if !r.is_positive() {
        return None;
    }
    let b = BigInt::from(base);
    let valuation = |n: &BigInt| -> Option<u64> {
        let mut n = n.clone();
        let mut v = 0u64;
        while n.is_multiple_of(&b) {
            n /= &b;
            v += 1;
        }
        n.is_one().then_some(v)
    };
    if r.denom().is_one() {
        valuation(r.numer()).map(BigInt::from)
    } else if r.numer().is_one() {
        valuation(r.denom()).map(|v| -BigInt::from(v))
    } else {
        None
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}

pub(crate) fn denom_as_usize(r: &Rational) -> Result<usize> {
    r.denom()
        .to_usize()
        .filter(|&d| d <= 1 << 20)
        .ok_or_else(|| {
            Error::Promotion(format!("denominator of {r} is too large for a dense field"))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(check_base(4), Err(Error::BaseNotSupported(4)));
    }

    #[test]
    fn base_powers() {
        assert_eq!(
            base_pow(2, &BigInt::from(-3)).unwrap(),
            Rational::new(1, 8).unwrap()
        );
        assert_eq!(base_pow(3, &BigInt::from(4)).unwrap(), Rational::from(81));
        assert!(base_pow(2, &BigInt::from(1u64 << 40)).is_err());
    }

    #[test]
    fn power_recognition() {
        let q = |s: &str| s.parse::<Rational>().unwrap();
        assert_eq!(power_of_base(&q("1/4"), 2), Some(BigInt::from(-2)));
        assert_eq!(power_of_base(&q("1"), 2), Some(BigInt::from(0)));
        assert_eq!(power_of_base(&q("3"), 2), None);
        assert_eq!(power_of_base(&q("-4"), 2), None);
        assert!(scaled_power_equals(&q("1"), 2, &BigInt::from(1), &q("2")));
        assert!(!scaled_power_equals(
            &q("40"),
            2,
            &BigInt::from(1u64 << 40),
            &q("40")
        ));
        assert!(scaled_power_equals(
            &q("3/2"),
            2,
            &BigInt::from(-1),
            &q("3/4")
        ));
    }
}
