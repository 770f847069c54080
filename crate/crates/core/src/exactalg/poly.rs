use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::AlgebraError;

/// A monomial stored sparsely as `(variable, exponent)` pairs sorted by
/// variable index. Exponents are never zero.
///
/// Ordering is graded lexicographic with `x0 > x1 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(usize, u32)>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(index: usize, exp: u32) -> Self {
        if exp == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: vec![(index, exp)],
            degree: exp,
        }
    }

    pub fn from_dense(exps: &[u32]) -> Self {
        let exps: Vec<(usize, u32)> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i, e))
            .collect();
        let degree = exps.iter().map(|&(_, e)| e).sum();
        Monomial { exps, degree }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs,
    /// merging repeats and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map: BTreeMap<usize, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        let exps: Vec<(usize, u32)> = map.into_iter().filter(|&(_, e)| e > 0).collect();
        let degree = exps.iter().map(|&(_, e)| e).sum();
        Monomial { exps, degree }
    }

    pub fn to_dense(&self, nvars: usize) -> Vec<u32> {
        let mut out = vec![0; nvars];
        for &(v, e) in &self.exps {
            out[v] = e;
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(usize, u32)] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Largest variable index occurring, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.exps.last().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (va, ea) = self.exps[i];
            let (vb, eb) = other.exps[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    exps.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut pairs = Vec::with_capacity(self.exps.len());
        for &(v, e) in &self.exps {
            let d = other.exponent(v);
            if d > e {
                return None;
            }
            if e > d {
                pairs.push((v, e - d));
            }
        }
        if other.exps.iter().any(|&(v, _)| self.exponent(v) == 0) {
            return None;
        }
        let degree = pairs.iter().map(|&(_, e)| e).sum();
        Some(Monomial { exps: pairs, degree })
    }

    pub fn with_exponent(&self, var: usize, exp: u32) -> Monomial {
        let mut pairs: Vec<(usize, u32)> =
            self.exps.iter().copied().filter(|&(v, _)| v != var).collect();
        if exp > 0 {
            pairs.push((var, exp));
        }
        Monomial::from_pairs(pairs)
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (n, &(v, e)) in self.exps.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial over the rationals in a fixed number of
/// variables `x0, ..., x{nvars-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        MultiPoly::monomial(nvars, Monomial::one(), c)
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Rational) -> Self {
        assert!(
            m.max_var().is_none_or(|v| v < nvars),
            "monomial uses a variable outside x0..x{}",
            nvars.saturating_sub(1)
        );
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { nvars, terms }
    }

    /// The coordinate function `x_index`.
    ///
    /// Panics if `index >= nvars`; see [`MultiPoly::try_var`].
    pub fn var(nvars: usize, index: usize) -> Self {
        MultiPoly::try_var(nvars, index).expect("variable index out of range")
    }

    pub fn try_var(nvars: usize, index: usize) -> Result<Self, AlgebraError> {
        if index >= nvars {
            return Err(AlgebraError::VariableOutOfRange { index, nvars });
        }
        Ok(MultiPoly::monomial(nvars, Monomial::var(index, 1), Rational::one()))
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self, AlgebraError> {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            if let Some(v) = m.max_var() {
                if v >= nvars {
                    return Err(AlgebraError::VariableOutOfRange { index: v, nvars });
                }
            }
            *map.entry(m).or_insert_with(Rational::zero) += &c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { nvars, terms: map })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Splits into homogeneous pieces keyed by degree. The zero polynomial
    /// has no components.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| MultiPoly::zero(self.nvars))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    fn check_arity(&self, other: &MultiPoly) -> Result<(), AlgebraError> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_arity(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m, c);
        }
        Ok(MultiPoly {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_arity(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m, &-c);
        }
        Ok(MultiPoly {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_arity(other)?;
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                add_term(&mut terms, &ma.mul(mb), &(ca * cb));
            }
        }
        Ok(MultiPoly {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        if self.terms.is_empty() {
            return Ok(Rational::zero());
        }
        // Sum over the common denominator lcm(coeff dens) * prod b_v^{maxdeg_v}
        // and reduce once at the end.
        let mut max_exp = vec![0u32; self.nvars];
        let mut coeff_lcm = BigInt::one();
        for (m, c) in &self.terms {
            for &(v, e) in m.pairs() {
                max_exp[v] = max_exp[v].max(e);
            }
            coeff_lcm = coeff_lcm.lcm(c.denom());
        }
        let powers = |x: &BigInt, top: u32| {
            let mut out = Vec::with_capacity(top as usize + 1);
            out.push(BigInt::one());
            for i in 0..top as usize {
                out.push(&out[i] * x);
            }
            out
        };
        let num_pows: Vec<Vec<BigInt>> = (0..self.nvars)
            .map(|v| powers(point[v].numer(), max_exp[v]))
            .collect();
        let den_pows: Vec<Vec<BigInt>> = (0..self.nvars)
            .map(|v| powers(point[v].denom(), max_exp[v]))
            .collect();
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.numer() * (&coeff_lcm / c.denom());
            for v in (0..self.nvars).filter(|&v| max_exp[v] > 0) {
                let e = m.exponent(v);
                t *= &num_pows[v][e as usize];
                t *= &den_pows[v][(max_exp[v] - e) as usize];
            }
            total += t;
        }
        let mut den = coeff_lcm;
        for v in 0..self.nvars {
            den *= &den_pows[v][max_exp[v] as usize];
        }
        Rational::new(total, den)
    }

    /// Partial derivative with respect to `x_var`.
    pub fn partial(&self, var: usize) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let dm = m.with_exponent(var, e - 1);
            add_term(&mut terms, &dm, &(c * &Rational::from(e as i64)));
        }
        MultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Substitutes the constant `value` for `x_var`, keeping the arity.
    pub fn substitute(&self, var: usize, value: &Rational) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                add_term(&mut terms, m, c);
            } else if !value.is_zero() {
                add_term(&mut terms, &m.with_exponent(var, 0), &(c * &value.pow(e)));
            }
        }
        MultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Largest `e` such that `x_var^e` divides every term; 0 for the zero polynomial.
    pub fn var_valuation(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(var))
            .min()
            .unwrap_or(0)
    }

    /// Divides by `x_var^e`, which must divide every term.
    pub fn div_var_power(&self, var: usize, e: u32) -> Result<MultiPoly, AlgebraError> {
        if e == 0 {
            return Ok(self.clone());
        }
        let d = Monomial::var(var, e);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let q = m.div(&d).ok_or(AlgebraError::NotDivisible)?;
            terms.insert(q, c.clone());
        }
        Ok(MultiPoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Exact quotient `self / divisor`; fails unless the division leaves no remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_arity(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(AlgebraError::DivisionByZero)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm).ok_or(AlgebraError::NotDivisible)?;
            let qc = c.checked_div(&lc)?;
            let step = MultiPoly::monomial(self.nvars, qm, qc);
            rem = rem.checked_sub(&step.checked_mul(divisor)?)?;
            quot = quot.checked_add(&step)?;
        }
        Ok(quot)
    }

    /// Re-embeds the polynomial into a ring with more (or equally many) variables.
    pub fn with_nvars(&self, nvars: usize) -> Result<MultiPoly, AlgebraError> {
        if let Some(v) = self.terms.keys().filter_map(Monomial::max_var).max() {
            if v >= nvars {
                return Err(AlgebraError::VariableOutOfRange { index: v, nvars });
            }
        }
        Ok(MultiPoly {
            nvars,
            terms: self.terms.clone(),
        })
    }

    /// Parses the format produced by `Display`, e.g. `"-x2^3 + 2*x1*x2*x3 - 1/2"`.
    pub fn parse(s: &str, nvars: usize) -> Result<MultiPoly, AlgebraError> {
        let s = s.trim();
        let err = |msg: &str| AlgebraError::Parse(format!("{msg} in '{s}'"));
        if s.is_empty() {
            return Err(err("empty polynomial"));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut negative = false;
        let mut current = String::new();
        for ch in s.chars() {
            match ch {
                '+' | '-' => {
                    if !current.trim().is_empty() {
                        pieces.push((negative, std::mem::take(&mut current)));
                        negative = ch == '-';
                    } else {
                        if ch == '-' {
                            negative = !negative;
                        }
                        current.clear();
                    }
                }
                _ => current.push(ch),
            }
        }
        if current.trim().is_empty() {
            return Err(err("dangling sign"));
        }
        pieces.push((negative, current));

        let mut terms = Vec::new();
        for (neg, piece) in pieces {
            let mut coeff = Rational::one();
            let mut pairs = Vec::new();
            for factor in piece.split('*') {
                let factor = factor.trim();
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, exp) = match rest.split_once('^') {
                        Some((i, e)) => (i, e.parse::<u32>().map_err(|_| err("bad exponent"))?),
                        None => (rest, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| err("bad variable"))?;
                    pairs.push((idx, exp));
                } else {
                    coeff *= &factor.parse::<Rational>()?;
                }
            }
            if neg {
                coeff = -coeff;
            }
            terms.push((Monomial::from_pairs(pairs), coeff));
        }
        MultiPoly::from_terms(nvars, terms)
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, Rational>, m: &Monomial, c: &Rational) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(m) {
        Some(existing) => {
            *existing += c;
            if existing.is_zero() {
                terms.remove(m);
            }
        }
        None => {
            terms.insert(m.clone(), c.clone());
        }
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in descending graded lex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (n, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands have different variable counts.
        impl $trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$checked(rhs).expect("polynomial arity mismatch")
            }
        }
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    exponents: Vec<u32>,
    coeff: Rational,
}

/// Serialized as a list of `{exponents, coeff}` records, leading term first.
impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| TermRecord {
                exponents: m.to_dense(self.nvars),
                coeff: c.clone(),
            })
            .collect();
        records.serialize(serializer)
    }
}

/// The variable count is taken from the exponent vectors; an empty list
/// yields the zero polynomial in zero variables (use [`MultiPoly::with_nvars`]
/// to re-embed).
impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        let nvars = records.first().map_or(0, |r| r.exponents.len());
        if records.iter().any(|r| r.exponents.len() != nvars) {
            return Err(D::Error::custom("inconsistent exponent vector lengths"));
        }
        MultiPoly::from_terms(
            nvars,
            records
                .into_iter()
                .map(|r| (Monomial::from_dense(&r.exponents), r.coeff)),
        )
        .map_err(D::Error::custom)
    }
}
