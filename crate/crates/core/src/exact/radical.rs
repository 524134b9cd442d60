use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;

use super::{base_pow, check_base, denom_as_usize, lcm, FieldElement, Rational};
use crate::error::{Error, Result};

/// Sparse element of `∪_N Q(B^(1/N))`: `Σ coeff · B^f` over fractional
/// exponents `f ∈ [0, 1)`.
///
/// Distinct `f` are linearly independent over `Q` (for prime `B`), so the
/// map from fractional exponent to nonzero coefficient is a canonical form.
/// Degrees never have to be fixed up front, which keeps values like
/// `B^(-5/2^18)` cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Radical {
    base: u64,
    terms: BTreeMap<Rational, Rational>,
}

impl Radical {
    pub fn zero(base: u64) -> Result<Self> {
        check_base(base)?;
        Ok(Radical {
            base,
            terms: BTreeMap::new(),
        })
    }

    pub fn from_rational(base: u64, r: Rational) -> Result<Self> {
        let mut x = Self::zero(base)?;
        x.insert(Rational::zero(), r);
        Ok(x)
    }

    /// `coeff · B^t` for any rational `t`; the integer part of `t` is
    /// folded into the coefficient.
    pub fn power(base: u64, coeff: Rational, t: &Rational) -> Result<Self> {
        let mut x = Self::zero(base)?;
        if !coeff.is_zero() {
            let scale = base_pow(base, &t.floor())?;
            x.insert(t.fract(), coeff * scale);
        }
        Ok(x)
    }

    pub fn from_field_element(x: &FieldElement) -> Result<Self> {
        let mut r = Self::zero(x.base())?;
        let n = x.degree() as i64;
        for (i, c) in x.coords().iter().enumerate() {
            r.insert(Rational::new(i as i64, n)?, c.clone());
        }
        Ok(r)
    }

    fn insert(&mut self, f: Rational, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(f).or_insert_with(Rational::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Rational::zero()).cloned(),
            _ => None,
        }
    }

    /// `(f, u)` with the value `u · B^f`, when exactly one term is present.
    pub fn as_monomial(&self) -> Option<(Rational, Rational)> {
        (self.terms.len() == 1).then(|| {
            let (f, u) = self.terms.iter().next().expect("one term");
            (f.clone(), u.clone())
        })
    }

    fn check_same_base(&self, other: &Radical) -> Result<()> {
        if self.base == other.base {
            Ok(())
        } else {
            Err(Error::BaseMismatch(self.base, other.base))
        }
    }

    pub fn add(&self, other: &Radical) -> Result<Radical> {
        self.check_same_base(other)?;
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.insert(f.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Radical) -> Result<Radical> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Radical {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, r: &Rational) -> Radical {
        let mut out = Radical {
            base: self.base,
            terms: BTreeMap::new(),
        };
        for (f, c) in &self.terms {
            out.insert(f.clone(), c * r);
        }
        out
    }

    /// Multiplication by `B^t`.
    pub fn shift(&self, t: &Rational) -> Result<Radical> {
        let mut out = Radical::zero(self.base)?;
        for (f, c) in &self.terms {
            let g = f + t;
            let scale = base_pow(self.base, &g.floor())?;
            out.insert(g.fract(), c * &scale);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Radical) -> Result<Radical> {
        self.check_same_base(other)?;
        let mut out = Radical::zero(self.base)?;
        for (f, c) in &other.terms {
            out = out.add(&self.scale(c).shift(f)?)?;
        }
        Ok(out)
    }

    /// Smallest `N` with every exponent in `(1/N)Z`.
    pub fn natural_degree(&self) -> Result<usize> {
        self.terms
            .keys()
            .try_fold(1usize, |acc, f| Ok(lcm(acc, denom_as_usize(f)?)))
    }

    /// Dense form in `K_N`; every exponent denominator must divide `N`.
    pub fn to_field_element(&self, degree: usize) -> Result<FieldElement> {
        let mut coords = vec![Rational::zero(); degree.max(1)];
        for (f, c) in &self.terms {
            let scaled = f * &Rational::from(degree as i64);
            if !scaled.is_integer() {
                return Err(Error::Promotion(format!(
                    "exponent {f} does not lie in K_{degree}"
                )));
            }
            let idx = scaled.numer().to_usize().expect("0 <= f < 1");
            coords[idx] = c.clone();
        }
        FieldElement::new(self.base, degree, coords)
    }
}

impl fmt::Debug for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                if e.is_zero() {
                    c.to_string()
                } else {
                    format!("{c}*{}^({e})", self.base)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn power_normalizes_integer_part() {
        // -2 · 2^(-1/2) = -1 · 2^(1/2)
        let x = Radical::power(2, q("-2"), &q("-1/2")).unwrap();
        assert_eq!(x.as_monomial(), Some((q("1/2"), q("-1"))));
        let y = Radical::power(2, q("3"), &q("2")).unwrap();
        assert_eq!(y.as_rational(), Some(q("12")));
    }

    #[test]
    fn agrees_with_dense_field() {
        let a = Radical::power(3, q("2"), &q("1/3")).unwrap();
        let b = Radical::power(3, q("-1"), &q("5/6")).unwrap();
        let dense = a
            .to_field_element(6)
            .unwrap()
            .mul(&b.to_field_element(6).unwrap())
            .unwrap();
        let sparse = a.mul(&b).unwrap();
        assert_eq!(sparse.to_field_element(6).unwrap(), dense);
        assert_eq!(Radical::from_field_element(&dense).unwrap(), sparse);
        assert_eq!(sparse.natural_degree().unwrap(), 6);
    }

    #[test]
    fn cancellation_and_errors() {
        let a = Radical::power(2, q("1"), &q("1/2")).unwrap();
        let b = Radical::power(2, q("2"), &q("-1/2")).unwrap();
        assert!(a.sub(&b).unwrap().is_zero());
        assert!(matches!(a.to_field_element(3), Err(Error::Promotion(_))));
        let c = Radical::from_rational(3, q("1")).unwrap();
        assert_eq!(a.add(&c), Err(Error::BaseMismatch(2, 3)));
    }
}
