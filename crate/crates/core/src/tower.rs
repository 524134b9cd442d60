//! Symbolic exponents of `B`, right-associated towers and their products.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{base_pow, check_base, power_fits, FieldElement, Radical, Rational};

/// `coeff · B^inner`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExpChain {
    coeff: Rational,
    inner: ExpSum,
}

/// `constant + Σ chains`: the base-`B` logarithm of a positive real.
///
/// In canonical form inners are canonical, no two chains share an inner,
/// no coefficient is zero, integer inners are folded into the constant
/// (unless `B^z` is too large to materialize) and rational inners that
/// differ by an integer are merged into one chain.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExpSum {
    constant: Rational,
    chains: Vec<ExpChain>,
}

/// The positive real `B^exponent`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PowNum {
    base: u64,
    exponent: ExpSum,
}

impl ExpChain {
    pub fn new(coeff: Rational, inner: ExpSum) -> Self {
        ExpChain { coeff, inner }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn inner(&self) -> &ExpSum {
        &self.inner
    }
}

impl Ord for ExpChain {
    fn cmp(&self, other: &Self) -> Ordering {
        self.inner
            .cmp(&other.inner)
            .then_with(|| self.coeff.cmp(&other.coeff))
    }
}

impl PartialOrd for ExpChain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExpSum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth()
            .cmp(&other.depth())
            .then_with(|| self.chains.cmp(&other.chains))
            .then_with(|| self.constant.cmp(&other.constant))
    }
}

impl PartialOrd for ExpSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl ExpSum {
    pub fn zero() -> Self {
        ExpSum::default()
    }

    pub fn constant(r: Rational) -> Self {
        ExpSum {
            constant: r,
            chains: Vec::new(),
        }
    }

    /// A single raw chain `coeff · B^inner`; call [`ExpSum::canonicalize`]
    /// before relying on structural properties.
    pub fn chain(coeff: Rational, inner: ExpSum) -> Self {
        ExpSum {
            constant: Rational::zero(),
            chains: vec![ExpChain::new(coeff, inner)],
        }
    }

    pub fn from_parts(constant: Rational, chains: Vec<ExpChain>) -> Self {
        ExpSum { constant, chains }
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn chains(&self) -> &[ExpChain] {
        &self.chains
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.chains.is_empty()
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        self.chains.is_empty().then_some(&self.constant)
    }

    /// 0 for a rational, 1 for an element of some `K_N`, and one more per
    /// level of nesting beyond that.
    pub fn depth(&self) -> usize {
        self.chains
            .iter()
            .map(|c| 1 + c.inner.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &ExpSum) -> ExpSum {
        let mut chains = self.chains.clone();
        chains.extend(other.chains.iter().cloned());
        ExpSum {
            constant: &self.constant + &other.constant,
            chains,
        }
    }

    pub fn neg(&self) -> ExpSum {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &ExpSum) -> ExpSum {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> ExpSum {
        ExpSum {
            constant: &self.constant * r,
            chains: self
                .chains
                .iter()
                .map(|c| ExpChain::new(&c.coeff * r, c.inner.clone()))
                .collect(),
        }
    }

    /// `self · B^g`, distributing over the terms of `self`.
    pub fn mul_pow(&self, g: &ExpSum) -> ExpSum {
        let mut chains = Vec::with_capacity(self.chains.len() + 1);
        if !self.constant.is_zero() {
            chains.push(ExpChain::new(self.constant.clone(), g.clone()));
        }
        for c in &self.chains {
            chains.push(ExpChain::new(c.coeff.clone(), c.inner.add(g)));
        }
        ExpSum::from_parts(Rational::zero(), chains)
    }

    /// Product of two sums (raw).
    pub fn mul(&self, other: &ExpSum) -> ExpSum {
        let mut out = self.scale(&other.constant);
        for c in &other.chains {
            out = out.add(&self.mul_pow(&c.inner).scale(&c.coeff));
        }
        out
    }

    pub fn canonicalize(&self, base: u64) -> ExpSum {
        let mut constant = self.constant.clone();
        let mut by_inner: BTreeMap<ExpSum, Rational> = BTreeMap::new();
        for c in &self.chains {
            if c.coeff.is_zero() {
                continue;
            }
            let inner = c.inner.canonicalize(base);
            if let Some(t) = inner.as_constant() {
                if t.is_integer() && power_fits(base, &t.floor()) {
                    let p = base_pow(base, &t.floor()).expect("power fits");
                    constant = constant + &c.coeff * &p;
                    continue;
                }
            }
            let slot = by_inner.entry(inner).or_insert_with(Rational::zero);
            *slot = &*slot + &c.coeff;
        }
        let chains: Vec<ExpChain> = by_inner
            .into_iter()
            .filter(|(_, q)| !q.is_zero())
            .map(|(inner, q)| ExpChain::new(q, inner))
            .collect();
        let mut chains = merge_rational_classes(chains, base);
        chains.sort();
        ExpSum { constant, chains }
    }

    /// Exact value as a sparse radical; requires depth ≤ 1.
    pub fn to_radical(&self, base: u64) -> Result<Radical> {
        let mut acc = Radical::from_rational(base, self.constant.clone())?;
        for c in &self.chains {
            let t = c
                .inner
                .as_constant()
                .ok_or_else(|| Error::Depth(self.depth()))?;
            acc = acc.add(&Radical::power(base, c.coeff.clone(), t)?)?;
        }
        Ok(acc)
    }

    /// Exact value in `K_N`; requires depth ≤ 1 and every inner denominator
    /// dividing `N`.
    pub fn to_field_element(&self, base: u64, degree: usize) -> Result<FieldElement> {
        let d = self.depth();
        if d > 1 {
            return Err(Error::Depth(d));
        }
        self.to_radical(base)?.to_field_element(degree)
    }
}

/// Chains with rational inners differing by integers are the same radical
/// up to a rational factor; merge each such class into one chain at its
/// smallest inner. Classes spread too wide to materialize are left alone.
fn merge_rational_classes(chains: Vec<ExpChain>, base: u64) -> Vec<ExpChain> {
    let mut out = Vec::with_capacity(chains.len());
    let mut classes: BTreeMap<Rational, Vec<(Rational, Rational)>> = BTreeMap::new();
    for c in chains {
        match c.inner.as_constant() {
            Some(t) => classes
                .entry(t.fract())
                .or_default()
                .push((t.clone(), c.coeff)),
            None => out.push(c),
        }
    }
    for (_, mut members) in classes {
        if members.len() == 1 {
            let (t, q) = members.pop().expect("one member");
            out.push(ExpChain::new(q, ExpSum::constant(t)));
            continue;
        }
        members.sort();
        let t_min = members[0].0.clone();
        let merged: Result<Rational> = members.iter().try_fold(Rational::zero(), |acc, (t, q)| {
            Ok(acc + q * &base_pow(base, &(t - &t_min).floor())?)
        });
        match merged {
            Ok(u) if u.is_zero() => {}
            Ok(u) => out.push(ExpChain::new(u, ExpSum::constant(t_min))),
            Err(_) => out.extend(
                members
                    .into_iter()
                    .map(|(t, q)| ExpChain::new(q, ExpSum::constant(t))),
            ),
        }
    }
    out
}

impl PowNum {
    /// `B^q`.
    pub fn atom(base: u64, q: Rational) -> Result<Self> {
        check_base(base)?;
        Ok(PowNum {
            base,
            exponent: ExpSum::constant(q),
        })
    }

    pub fn one(base: u64) -> Result<Self> {
        Self::atom(base, Rational::zero())
    }

    pub fn from_exponent(base: u64, exponent: &ExpSum) -> Result<Self> {
        check_base(base)?;
        Ok(PowNum {
            base,
            exponent: exponent.canonicalize(base),
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn exponent(&self) -> &ExpSum {
        &self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.exponent.is_zero()
    }

    /// Right-associated tower `x^(x^(…^x))` with `h` copies of `x`.
    pub fn tower(&self, h: i64) -> Result<PowNum> {
        if h < 1 {
            return Err(Error::Domain(format!("tower height must be >= 1, got {h}")));
        }
        let ex = &self.exponent;
        let mut e = ex.clone();
        for _ in 1..h {
            e = ex.mul_pow(&e).canonicalize(self.base);
        }
        Ok(PowNum {
            base: self.base,
            exponent: e,
        })
    }

    pub fn mul(&self, other: &PowNum) -> Result<PowNum> {
        if self.base != other.base {
            return Err(Error::BaseMismatch(self.base, other.base));
        }
        Ok(PowNum {
            base: self.base,
            exponent: self.exponent.add(&other.exponent).canonicalize(self.base),
        })
    }

    /// `self^y` for a real exponent `y` given as an exponent-space value.
    pub fn pow(&self, y: &ExpSum) -> PowNum {
        PowNum {
            base: self.base,
            exponent: self.exponent.mul(y).canonicalize(self.base),
        }
    }
}

/// `log_B(α↑↑k · β↑↑m) − log_B(γ↑↑n)`; the equation holds iff this is zero.
pub fn equation_exponent(
    alpha: &PowNum,
    beta: &PowNum,
    gamma: &PowNum,
    k: i64,
    m: i64,
    n: i64,
) -> Result<ExpSum> {
    let (lhs, rhs) = equation_sides(alpha, beta, gamma, k, m, n)?;
    Ok(lhs.sub(&rhs).canonicalize(alpha.base))
}

/// Canonical exponents of both sides, `(log_B LHS, log_B RHS)`.
pub fn equation_sides(
    alpha: &PowNum,
    beta: &PowNum,
    gamma: &PowNum,
    k: i64,
    m: i64,
    n: i64,
) -> Result<(ExpSum, ExpSum)> {
    for (name, h) in [("k", k), ("m", m), ("n", n)] {
        if h < 2 {
            return Err(Error::Domain(format!(
                "height {name} must be >= 2, got {h}"
            )));
        }
    }
    for other in [beta, gamma] {
        if other.base != alpha.base {
            return Err(Error::BaseMismatch(alpha.base, other.base));
        }
    }
    let lhs = alpha.tower(k)?.mul(&beta.tower(m)?)?;
    let rhs = gamma.tower(n)?;
    Ok((lhs.exponent, rhs.exponent))
}

/// Human-readable form of an exponent, e.g. `1/2 + -1*2^(-1/2)`.
pub fn format_exponent(e: &ExpSum, base: u64) -> String {
    format_with(e, &base.to_string())
}

fn format_with(e: &ExpSum, base: &str) -> String {
    let mut parts = Vec::new();
    if !e.constant.is_zero() || e.chains.is_empty() {
        parts.push(e.constant.to_string());
    }
    for c in &e.chains {
        parts.push(format!(
            "{}*{}^({})",
            c.coeff,
            base,
            format_with(&c.inner, base)
        ));
    }
    parts.join(" + ")
}

/// The canonical printed form, written so that parsing it back yields the
/// same value. A sum in an exponent is printed as a product of powers.
pub fn print_canonical(x: &PowNum) -> String {
    print_power(x.base, &x.exponent)
}

fn print_power(base: u64, e: &ExpSum) -> String {
    if e.is_zero() {
        return "1".to_string();
    }
    let mut factors = Vec::new();
    if !e.constant.is_zero() {
        factors.push(power_factor(
            base,
            &e.constant.to_string(),
            !e.constant.is_negative() && e.constant.is_integer(),
        ));
    }
    for c in &e.chains {
        let term = format!("{}*{}", c.coeff, print_power(base, &c.inner));
        factors.push(power_factor(base, &term, false));
    }
    factors.join("*")
}

fn power_factor(base: u64, exponent: &str, bare: bool) -> String {
    if bare {
        format!("{base}^{exponent}")
    } else {
        format!("{base}^({exponent})")
    }
}

impl fmt::Debug for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_with(self, "B"))
    }
}

impl fmt::Debug for ExpChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*B^({:?})", self.coeff, self.inner)
    }
}

impl fmt::Display for PowNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_canonical(self))
    }
}

impl fmt::Debug for PowNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_canonical(self))
    }
}
