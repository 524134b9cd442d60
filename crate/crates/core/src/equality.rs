//! Three-valued decision of `E = 0` for exponent sums, and the solvers
//! built on it.
//!
//! The ladder is exact first: radical arithmetic for depth ≤ 1, then a
//! decomposition into classes of chains whose inners differ by a rational.
//! Zero or one surviving class decides the question outright; two classes
//! with algebraic inners are separated by Gelfond–Schneider. Everything
//! else goes to interval refutation, which can prove `≠` but never `=`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{base_pow, check_base, scaled_power_equals, FieldElement, Radical, Rational};
use crate::interval::{sign_with_enclosure, SignResult};
use crate::tower::{equation_sides, ExpChain, ExpSum, PowNum};

pub const DEFAULT_MAX_BITS: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Equal,
    NotEqual,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    ExactField,
    MonomialNormalForm,
    TranscendenceRule,
    IntervalSeparation,
    Structural,
}

impl Method {
    /// Whether the method proves equality or inequality without numerics.
    pub fn is_exact(self) -> bool {
        self != Method::IntervalSeparation
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub method: Method,
    pub detail: String,
    /// `floor(log2)` of the narrowest enclosure width seen, for interval
    /// verdicts.
    pub width_log2: Option<i64>,
}

impl Verdict {
    fn new(outcome: Outcome, method: Method, detail: impl Into<String>) -> Self {
        Verdict {
            outcome,
            method,
            detail: detail.into(),
            width_log2: None,
        }
    }

    fn exact(equal: bool, method: Method, detail: impl Into<String>) -> Self {
        let outcome = if equal {
            Outcome::Equal
        } else {
            Outcome::NotEqual
        };
        Verdict::new(outcome, method, detail)
    }

    pub fn is_equal(&self) -> bool {
        self.outcome == Outcome::Equal
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}): {}", self.outcome, self.method, self.detail)
    }
}

/// `α↑↑k · β↑↑m = γ↑↑n` with `α = B^a`, `β = B^b`, `γ = B^c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquationInstance {
    pub base: u64,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub k: i64,
    pub m: i64,
    pub n: i64,
}

impl EquationInstance {
    pub fn new(
        base: u64,
        a: Rational,
        b: Rational,
        c: Rational,
        k: i64,
        m: i64,
        n: i64,
    ) -> Result<Self> {
        check_base(base)?;
        for (name, h) in [("k", k), ("m", m), ("n", n)] {
            if h < 2 {
                return Err(Error::Domain(format!(
                    "height {name} must be >= 2, got {h}"
                )));
            }
        }
        Ok(EquationInstance {
            base,
            a,
            b,
            c,
            k,
            m,
            n,
        })
    }

    /// Canonical `(log_B LHS, log_B RHS)`.
    pub fn sides(&self) -> Result<(ExpSum, ExpSum)> {
        let atom = |q: &Rational| PowNum::atom(self.base, q.clone());
        equation_sides(
            &atom(&self.a)?,
            &atom(&self.b)?,
            &atom(&self.c)?,
            self.k,
            self.m,
            self.n,
        )
    }

    /// The instance with `(α, k)` and `(β, m)` exchanged.
    pub fn swapped(&self) -> Self {
        EquationInstance {
            a: self.b.clone(),
            b: self.a.clone(),
            k: self.m,
            m: self.k,
            ..self.clone()
        }
    }
}

/// Chains grouped by inner exponent modulo rationals. The class value is
/// `coeff · B^key`.
#[derive(Clone, Debug)]
pub(crate) struct Class {
    pub key: ClassKey,
    pub coeff: Radical,
}

#[derive(Clone, Debug)]
pub(crate) enum ClassKey {
    /// Chains with rational inners and the constant: key exponent 0.
    Rational,
    /// An irrational algebraic key exponent, known exactly.
    Algebraic(Radical),
    /// A key of depth ≥ 1, compared structurally only.
    Deep(ExpSum),
}

impl ClassKey {
    fn is_deep(&self) -> bool {
        matches!(self, ClassKey::Deep(_))
    }
}

/// Splits a canonical sum into its nonzero classes. Fails only when an
/// exact coefficient cannot be materialized.
pub(crate) fn decompose(e: &ExpSum, base: u64) -> Result<Vec<Class>> {
    let mut rational = Radical::from_rational(base, e.constant_part().clone())?;
    let mut classes: Vec<Class> = Vec::new();
    for c in e.chains() {
        let inner = c.inner();
        if let Some(t) = inner.as_constant() {
            // powers too large to materialize stay symbolic
            if let Ok(r) = Radical::power(base, c.coeff().clone(), t) {
                rational = rational.add(&r)?;
                continue;
            }
        }
        let algebraic = if inner.depth() == 1 {
            inner.to_radical(base).ok()
        } else {
            None
        };
        if let Some(t) = algebraic.as_ref().and_then(Radical::as_rational) {
            rational = rational.add(&Radical::power(base, c.coeff().clone(), &t)?)?;
            continue;
        }
        let mut placed = false;
        for class in classes.iter_mut() {
            let shift = match (&class.key, &algebraic) {
                (ClassKey::Algebraic(k), Some(rho)) => rho.sub(k)?.as_rational(),
                (ClassKey::Deep(k), None) => inner.sub(k).canonicalize(base).as_constant().cloned(),
                _ => None,
            };
            if let Some(d) = shift {
                class.coeff = class
                    .coeff
                    .add(&Radical::power(base, c.coeff().clone(), &d)?)?;
                placed = true;
                break;
            }
        }
        if !placed {
            let key = match algebraic {
                Some(rho) => ClassKey::Algebraic(rho),
                None => ClassKey::Deep(inner.clone()),
            };
            let coeff = Radical::from_rational(base, c.coeff().clone())?;
            classes.push(Class { key, coeff });
        }
    }
    let mut out = vec![Class {
        key: ClassKey::Rational,
        coeff: rational,
    }];
    out.extend(classes);
    out.retain(|c| !c.coeff.is_zero());
    Ok(out)
}

/// Sound decision of `e = 0`; `Unknown` when the exact steps do not apply
/// and intervals up to `max_bits` cannot exclude zero.
pub fn decide_zero(e: &ExpSum, base: u64, max_bits: u64) -> Verdict {
    let e = e.canonicalize(base);
    if e.depth() <= 1 {
        if let Ok(r) = e.to_radical(base) {
            let detail = if r.is_zero() {
                "exact radical value is 0".to_string()
            } else {
                format!("exact radical value {r} is nonzero")
            };
            return Verdict::exact(r.is_zero(), Method::ExactField, detail);
        }
    }
    if let Ok(classes) = decompose(&e, base) {
        let deep = classes.iter().any(|c| c.key.is_deep());
        let method = if deep {
            Method::Structural
        } else {
            Method::MonomialNormalForm
        };
        match classes.len() {
            0 => return Verdict::exact(true, method, "every class of chains cancels"),
            1 => {
                return Verdict::exact(
                    false,
                    method,
                    format!(
                        "single surviving class with coefficient {}",
                        classes[0].coeff
                    ),
                )
            }
            2 if !deep => return Verdict::exact(
                false,
                Method::TranscendenceRule,
                "two classes differing by an irrational algebraic exponent; B^d is transcendental",
            ),
            _ => {}
        }
    }
    interval_step(&e, base, max_bits)
}

fn interval_step(e: &ExpSum, base: u64, max_bits: u64) -> Verdict {
    let (sign, enclosure) = sign_with_enclosure(e, base, max_bits);
    let width_log2 = enclosure.as_ref().and_then(|iv| iv.width_log2());
    let mut v = match sign {
        SignResult::Negative | SignResult::Positive => Verdict::new(
            Outcome::NotEqual,
            Method::IntervalSeparation,
            match &enclosure {
                Some(iv) if iv.sign() == sign => {
                    format!("0 excluded at {} bits ({sign:?})", iv.precision())
                }
                _ => format!("one term dominates the rest on a log scale ({sign:?})"),
            },
        ),
        SignResult::Undetermined => Verdict::new(
            Outcome::Unknown,
            Method::IntervalSeparation,
            match &enclosure {
                Some(_) => format!("0 not excluded up to {max_bits} bits"),
                None => "value beyond the evaluation magnitude cap".to_string(),
            },
        ),
    };
    v.width_log2 = width_log2;
    v
}

fn chain_radical(c: &ExpChain, base: u64) -> Result<Radical> {
    let d = c.inner().depth();
    if d > 1 {
        return Err(Error::Depth(d + 1));
    }
    c.inner().canonicalize(base).to_radical(base)
}

/// Decides `q · B^e = q′ · B^e′` for inners of depth ≤ 1.
pub fn decide_chain_pair(x: &ExpChain, y: &ExpChain, base: u64) -> Result<Verdict> {
    let ex = chain_radical(x, base)?;
    let ey = chain_radical(y, base)?;
    let (q, q2) = (x.coeff(), y.coeff());
    let m = Method::MonomialNormalForm;
    if q.is_zero() || q2.is_zero() {
        return Ok(Verdict::exact(
            q.is_zero() && q2.is_zero(),
            m,
            "zero coefficient",
        ));
    }
    let d = ex.sub(&ey)?;
    Ok(match d.as_rational() {
        Some(d) if d.is_zero() => Verdict::exact(
            q == q2,
            m,
            format!("same exponent; coefficients {q} and {q2}"),
        ),
        Some(d) if d.is_integer() => Verdict::exact(
            scaled_power_equals(q, base, &d.floor(), q2),
            m,
            format!("exponents differ by the integer {d}"),
        ),
        Some(d) => Verdict::exact(
            false,
            m,
            format!("exponents differ by the non-integer rational {d}; B^d is irrational"),
        ),
        None => Verdict::exact(
            false,
            Method::TranscendenceRule,
            format!("exponents differ by the irrational algebraic {d}; B^d is transcendental"),
        ),
    })
}

/// A side that is exactly one monomial `q · B^e` with `e` of depth ≤ 1.
fn as_monomial(e: &ExpSum) -> Option<ExpChain> {
    match (e.as_constant(), e.chains()) {
        (Some(r), _) => Some(ExpChain::new(r.clone(), ExpSum::zero())),
        (None, [c]) if e.constant_part().is_zero() && c.inner().depth() <= 1 => Some(c.clone()),
        _ => None,
    }
}

/// Decides `lhs = rhs` for two canonical exponents.
pub fn verify_sides(lhs: &ExpSum, rhs: &ExpSum, base: u64, max_bits: u64) -> Verdict {
    if lhs.depth() > 0 || rhs.depth() > 0 {
        if let (Some(x), Some(y)) = (as_monomial(lhs), as_monomial(rhs)) {
            if let Ok(v) = decide_chain_pair(&x, &y, base) {
                return v;
            }
        }
    }
    decide_zero(&lhs.sub(rhs), base, max_bits)
}

pub fn verify_instance(inst: &EquationInstance, max_bits: u64) -> Result<Verdict> {
    let (lhs, rhs) = inst.sides()?;
    Ok(verify_sides(&lhs, &rhs, inst.base, max_bits))
}

/// All rational `c` with `c · B^c = x`.
pub fn recognize_monomial(x: &FieldElement) -> Vec<Rational> {
    match Radical::from_field_element(x) {
        Ok(r) => recognize_radical(&r),
        Err(_) => Vec::new(),
    }
}

/// [`recognize_monomial`] on the sparse form. Zero is `0 · B^0`.
pub fn recognize_radical(x: &Radical) -> Vec<Rational> {
    if x.is_zero() {
        return vec![Rational::zero()];
    }
    let Some((f, u)) = x.as_monomial() else {
        return Vec::new();
    };
    let base = x.base();
    let target = u.abs();
    let value = |z: i64| -> Option<Rational> {
        let p = base_pow(base, &BigInt::from(z)).ok()?;
        Some((&f + &Rational::from(z)) * p)
    };
    let mut out = Vec::new();
    let mut check = |z: i64| {
        if let Some(v) = value(z) {
            if v == u {
                out.push(&f + &Rational::from(z));
            }
        }
    };
    // |c · B^c| increases with z ≥ 0 and decreases for z ≤ -2.
    let mut z = 0i64;
    loop {
        check(z);
        match value(z) {
            Some(v) if v.abs() <= target => z += 1,
            _ => break,
        }
    }
    check(-1);
    let mut z = -2i64;
    loop {
        check(z);
        match value(z) {
            Some(v) if v.abs() >= target => z -= 1,
            _ => break,
        }
    }
    out.sort();
    out
}

/// Writes a sum in a single class as `q · B^e` when its coefficient is a
/// monomial.
fn as_scaled_power(l: &ExpSum, base: u64) -> Result<Option<(Rational, ExpSum)>> {
    let classes = decompose(l, base)?;
    let [class] = classes.as_slice() else {
        return Ok(None);
    };
    let Some((f, u)) = class.coeff.as_monomial() else {
        return Ok(None);
    };
    let key = match &class.key {
        ClassKey::Rational => ExpSum::zero(),
        ClassKey::Algebraic(_) | ClassKey::Deep(_) => {
            // recover the key exponent from any chain in the class
            let chain = l
                .chains()
                .iter()
                .find(|c| c.inner().as_constant().is_none())
                .expect("non-rational class has a chain");
            chain.inner().clone()
        }
    };
    let e = key.add(&ExpSum::constant(f)).canonicalize(base);
    Ok(Some((u, e)))
}

/// All `c` with `B^a↑↑k · B^b↑↑m = B^c↑↑n`, for `n ∈ {2, 3}` and
/// left-hand sides the exact solvers can handle.
pub fn solve_gamma(
    base: u64,
    a: &Rational,
    b: &Rational,
    k: i64,
    m: i64,
    n: i64,
) -> Result<Vec<Rational>> {
    let probe = EquationInstance::new(base, a.clone(), b.clone(), Rational::zero(), k, m, n)?;
    let (lhs, _) = probe.sides()?;
    if lhs.is_zero() {
        return Ok(vec![Rational::zero()]);
    }
    let unsupported = |why: &str| Error::UnsupportedShape(format!("n = {n}: {why}"));
    match n {
        2 => {
            if lhs.depth() <= 1 {
                let r = lhs
                    .to_radical(base)
                    .map_err(|_| unsupported("left side too large"))?;
                return Ok(recognize_radical(&r));
            }
            // c·B^c is algebraic; one irrational algebraic class makes the
            // left side transcendental.
            let classes = decompose(&lhs, base).map_err(|_| unsupported("left side too large"))?;
            let non_rational: Vec<&Class> = classes
                .iter()
                .filter(|c| !matches!(c.key, ClassKey::Rational))
                .collect();
            if non_rational.len() == 1 && matches!(non_rational[0].key, ClassKey::Algebraic(_)) {
                return Ok(Vec::new());
            }
            Err(unsupported("left side is not algebraic"))
        }
        3 => {
            let Some((q, e)) =
                as_scaled_power(&lhs, base).map_err(|_| unsupported("left side too large"))?
            else {
                if lhs.depth() <= 1 {
                    // an algebraic value c·B^(c·B^c) forces c ∈ Z and a monomial
                    return Ok(Vec::new());
                }
                return Err(unsupported("left side is not a single scaled power"));
            };
            if e.depth() > 1 {
                return Err(unsupported("exponent of the left side is too deep"));
            }
            let rho = e
                .to_radical(base)
                .map_err(|_| unsupported("left side too large"))?;
            match rho.as_rational() {
                Some(e) => Ok(solve_height3_rational(base, &q, &e)),
                None => Ok(solve_height3_irrational(base, &q, &rho)),
            }
        }
        _ => Err(unsupported("only n = 2 and n = 3 are solved directly")),
    }
}

/// `c · B^(c·B^c) = q · B^e` with `e` rational: then `c ∈ Z` and
/// `d = c·B^c − e` is an integer with `c = q / B^d`.
fn solve_height3_rational(base: u64, q: &Rational, e: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let log_q = (q.numer().bits() as i64 - q.denom().bits() as i64).abs() + 2;
    if q.is_positive() {
        for c in 1i64.. {
            let Ok(p) = base_pow(base, &BigInt::from(c)) else {
                break;
            };
            let d = &Rational::from(c) * &p - e.clone();
            if d.is_integer() && scaled_power_equals(&Rational::from(c), base, &d.floor(), q) {
                out.push(Rational::from(c));
            }
            // c · B^d = q needs |d| ≲ log q once c · B^c dominates e
            if d > Rational::from(log_q) + Rational::from(c) && Rational::from(c) > e.abs() {
                break;
            }
        }
    } else {
        // c ≤ -1 gives c·B^c ∈ [-1/2, 0), so d ∈ [-1/2 - e, -e)
        let d = (-e.clone()).floor();
        let d = if Rational::from(d.clone()) == -e.clone() {
            d - 1
        } else {
            d
        };
        let dr = Rational::from(d.clone());
        if dr >= -e.clone() - Rational::new(1, 2).expect("nonzero") {
            if let Ok(p) = base_pow(base, &d) {
                if let Ok(c) = q.checked_div(&p) {
                    if c.is_integer() && c.is_negative() {
                        if let Some(cz) = c.numer().to_i64() {
                            if let Ok(bc) = base_pow(base, &BigInt::from(cz)) {
                                if &c * &bc == e + &dr {
                                    out.push(c);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// `c · B^(c·B^c) = q · B^ρ` with `ρ = r₀ + u·B^f` irrational: `c` is not
/// an integer, `c·B^c = u·B^f`, and `-r₀ = d` with `c · B^d = q`.
fn solve_height3_irrational(base: u64, q: &Rational, rho: &Radical) -> Vec<Rational> {
    let r0 = rho
        .terms()
        .find(|(f, _)| f.is_zero())
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Rational::zero);
    let rest = rho
        .sub(&Radical::from_rational(base, r0.clone()).expect("valid base"))
        .expect("same base");
    if !r0.is_integer() || rest.as_monomial().is_none() {
        return Vec::new();
    }
    let d = (-r0).floor();
    recognize_radical(&rest)
        .into_iter()
        .filter(|c| !c.is_integer() && scaled_power_equals(c, base, &d, q))
        .collect()
}

/// `α = 1` with `β = γ` and matching heights, or symmetrically; the
/// all-ones triple is trivial at any heights.
pub fn is_trivial_solution(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    k: i64,
    m: i64,
    n: i64,
) -> bool {
    (a.is_zero() && b == c && (m == n || b.is_zero()))
        || (b.is_zero() && a == c && (k == n || a.is_zero()))
}
