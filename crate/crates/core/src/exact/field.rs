use std::fmt;

use num_bigint::BigInt;

use super::{base_pow, check_base, lcm, Rational};
use crate::error::{Error, Result};

/// Element of `K_N = Q(θ)` with `θ = B^(1/N)` the real positive root.
///
/// `coords[i]` is the coefficient of `θ^i`. With `B` prime, `x^N - B` is
/// irreducible (Eisenstein), so coordinates are unique and coordinate
/// equality is real-number equality.
#[derive(Clone)]
pub struct FieldElement {
    base: u64,
    degree: usize,
    coords: Vec<Rational>,
}

impl FieldElement {
    pub fn new(base: u64, degree: usize, coords: Vec<Rational>) -> Result<Self> {
        check_base(base)?;
        if degree == 0 {
            return Err(Error::Domain("field degree must be at least 1".into()));
        }
        if coords.len() != degree {
            return Err(Error::Arity {
                expected: degree,
                got: coords.len(),
            });
        }
        Ok(FieldElement {
            base,
            degree,
            coords,
        })
    }

    pub fn zero(base: u64, degree: usize) -> Result<Self> {
        Self::new(base, degree, vec![Rational::zero(); degree])
    }

    pub fn from_rational(base: u64, degree: usize, r: Rational) -> Result<Self> {
        let mut x = Self::zero(base, degree)?;
        x.coords[0] = r;
        Ok(x)
    }

    /// `θ^p` reduced by `θ^N = B`: `B^floor(p/N) · θ^(p mod N)`.
    pub fn theta_power(p: i64, base: u64, degree: usize) -> Result<Self> {
        let mut x = Self::zero(base, degree)?;
        let n = degree as i64;
        let scale = base_pow(base, &BigInt::from(p.div_euclid(n)))?;
        x.coords[p.rem_euclid(n) as usize] = scale;
        Ok(x)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    /// Lift into `K_{new_degree}` via `θ_N = θ_{N'}^(N'/N)`.
    pub fn promote(&self, new_degree: usize) -> Result<Self> {
        if new_degree == 0 || !new_degree.is_multiple_of(self.degree) {
            return Err(Error::Promotion(format!(
                "degree {new_degree} is not a multiple of {}",
                self.degree
            )));
        }
        let step = new_degree / self.degree;
        let mut coords = vec![Rational::zero(); new_degree];
        for (i, c) in self.coords.iter().enumerate() {
            coords[i * step] = c.clone();
        }
        Ok(FieldElement {
            base: self.base,
            degree: new_degree,
            coords,
        })
    }

    fn common(&self, other: &FieldElement) -> Result<(FieldElement, FieldElement)> {
        if self.base != other.base {
            return Err(Error::Promotion(format!(
                "incompatible bases {} and {}",
                self.base, other.base
            )));
        }
        let d = lcm(self.degree, other.degree);
        Ok((self.promote(d)?, other.promote(d)?))
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        let (mut a, b) = self.common(other)?;
        for (x, y) in a.coords.iter_mut().zip(&b.coords) {
            *x = &*x + y;
        }
        Ok(a)
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElement {
        self.scalar_mul(&-Rational::one())
    }

    pub fn scalar_mul(&self, r: &Rational) -> FieldElement {
        FieldElement {
            base: self.base,
            degree: self.degree,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// Polynomial product reduced modulo `θ^N = B`.
    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        let (a, b) = self.common(other)?;
        let n = a.degree;
        let b_scalar = Rational::from(a.base as i64);
        let mut out = vec![Rational::zero(); n];
        for (i, x) in a.coords.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.coords.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let prod = x * y;
                if i + j < n {
                    out[i + j] = &out[i + j] + &prod;
                } else {
                    out[i + j - n] = &out[i + j - n] + &(prod * &b_scalar);
                }
            }
        }
        Ok(FieldElement {
            base: a.base,
            degree: n,
            coords: out,
        })
    }

    /// Exact equality after promotion to a common degree.
    pub fn fe_eq(&self, other: &FieldElement) -> Result<bool> {
        let (a, b) = self.common(other)?;
        Ok(a.coords == b.coords)
    }

    pub fn is_rational(&self) -> Option<Rational> {
        self.coords[1..]
            .iter()
            .all(Rational::is_zero)
            .then(|| self.coords[0].clone())
    }

    /// `(j, u)` when exactly one coordinate is nonzero.
    pub fn monomial_decompose(&self) -> Option<(usize, Rational)> {
        let mut nonzero = self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (j, u) = nonzero.next()?;
        nonzero.next().is_none().then(|| (j, u.clone()))
    }

    /// Smallest degree dividing `N` that still holds this element.
    pub fn reduced(&self) -> FieldElement {
        let n = self.degree;
        let mut best = self.clone();
        for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
            let step = n / d;
            if self
                .coords
                .iter()
                .enumerate()
                .all(|(i, c)| i % step == 0 || c.is_zero())
            {
                best = FieldElement {
                    base: self.base,
                    degree: d,
                    coords: (0..d).map(|i| self.coords[i * step].clone()).collect(),
                };
                break;
            }
        }
        best
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.fe_eq(other).unwrap_or(false)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K[{}^(1/{})]{:?}", self.base, self.degree, self.coords)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                _ => format!("{c}*{}^({}/{})", self.base, i, self.degree),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn fe(base: u64, coords: &[&str]) -> FieldElement {
        FieldElement::new(base, coords.len(), coords.iter().map(|c| q(c)).collect()).unwrap()
    }

    #[test]
    fn make_examples() {
        let sqrt2 = fe(2, &["0", "1"]);
        assert_eq!(sqrt2.monomial_decompose(), Some((1, q("1"))));
        assert_eq!(fe(2, &["-1/2"]).is_rational(), Some(q("-1/2")));
        let x = fe(3, &["1", "1"]);
        assert_eq!(x.coords(), &[q("1"), q("1")]);
        assert_eq!(
            FieldElement::new(4, 2, vec![q("0"), q("1")]).unwrap_err(),
            Error::BaseNotSupported(4)
        );
        assert_eq!(
            FieldElement::new(2, 2, vec![q("1")]).unwrap_err(),
            Error::Arity {
                expected: 2,
                got: 1
            }
        );
        assert!(FieldElement::zero(2, 3).unwrap().is_zero());
    }

    #[test]
    fn arith_examples() {
        let theta = fe(2, &["0", "1"]);
        assert_eq!(theta.mul(&theta).unwrap().coords(), &[q("2"), q("0")]);
        // -2 * (θ/2) = -θ, the -√2 exponent of the (b) identity
        let half_theta = theta.scalar_mul(&q("1/2"));
        assert_eq!(half_theta.scalar_mul(&q("-2")), fe(2, &["0", "-1"]));
        assert!(fe(2, &["0", "1/2"])
            .add(&fe(2, &["0", "-1/2"]))
            .unwrap()
            .is_zero());
        assert!(matches!(
            fe(2, &["1"]).add(&fe(3, &["1"])),
            Err(Error::Promotion(_))
        ));
    }

    #[test]
    fn promote_examples() {
        let sqrt2 = fe(2, &["0", "1"]);
        let p = sqrt2.promote(4).unwrap();
        assert_eq!(p.coords(), &[q("0"), q("0"), q("1"), q("0")]);
        assert_eq!(
            fe(2, &["3"]).promote(2).unwrap().coords(),
            &[q("3"), q("0")]
        );
        assert_eq!(sqrt2.promote(2).unwrap().coords(), sqrt2.coords());
        assert!(matches!(sqrt2.promote(3), Err(Error::Promotion(_))));
        assert_eq!(p.reduced().degree(), 2);
    }

    #[test]
    fn theta_power_examples() {
        let inv = FieldElement::theta_power(-1, 2, 2).unwrap();
        assert_eq!(inv, fe(2, &["0", "1/2"]));
        // oracle: θ^(-1) · θ = 1
        let theta = fe(2, &["0", "1"]);
        assert_eq!(inv.mul(&theta).unwrap(), fe(2, &["1", "0"]));
        assert_eq!(
            FieldElement::theta_power(3, 2, 2).unwrap(),
            fe(2, &["0", "2"])
        );
        assert_eq!(
            FieldElement::theta_power(0, 2, 2).unwrap(),
            fe(2, &["1", "0"])
        );
    }

    #[test]
    fn rational_and_monomial_probes() {
        assert_eq!(fe(2, &["-1/2", "0"]).is_rational(), Some(q("-1/2")));
        assert_eq!(fe(2, &["0", "1"]).is_rational(), None);
        assert_eq!(
            fe(2, &["5"]).promote(4).unwrap().is_rational(),
            Some(q("5"))
        );
        assert_eq!(
            fe(2, &["0", "-1/4"]).monomial_decompose(),
            Some((1, q("-1/4")))
        );
        assert_eq!(fe(2, &["1", "1"]).monomial_decompose(), None);
        assert_eq!(fe(2, &["0", "0"]).monomial_decompose(), None);
    }

    #[test]
    fn theta_power_round_trips() {
        for base in [2, 3, 5] {
            for n in [1, 2, 3, 4, 6] {
                for p in -12..=12 {
                    let a = FieldElement::theta_power(p, base, n).unwrap();
                    let b = FieldElement::theta_power(-p, base, n).unwrap();
                    assert_eq!(a.mul(&b).unwrap().is_rational(), Some(q("1")));
                }
            }
        }
    }
}
