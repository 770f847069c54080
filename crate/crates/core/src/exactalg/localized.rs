use std::fmt;

use super::{Monomial, MultiPoly, Rational};
use crate::error::AlgebraError;

/// An element `numerator / x_var^power` of the localization of the
/// polynomial ring at a single variable.
///
/// Normal form: when `power > 0` the numerator is not divisible by `x_var`;
/// zero is `0 / x_var^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalizedPoly {
    numerator: MultiPoly,
    var: usize,
    power: u32,
}

impl LocalizedPoly {
    pub fn new(numerator: MultiPoly, var: usize, power: u32) -> Result<Self, AlgebraError> {
        if var >= numerator.nvars() {
            return Err(AlgebraError::VariableOutOfRange {
                index: var,
                nvars: numerator.nvars(),
            });
        }
        let mut out = LocalizedPoly {
            numerator,
            var,
            power,
        };
        out.normalize();
        Ok(out)
    }

    /// A plain polynomial viewed in the localization at `x_var`.
    pub fn from_poly(p: MultiPoly, var: usize) -> Self {
        LocalizedPoly::new(p, var, 0).expect("localized variable out of range")
    }

    pub fn zero(nvars: usize, var: usize) -> Self {
        LocalizedPoly::from_poly(MultiPoly::zero(nvars), var)
    }

    pub fn one(nvars: usize, var: usize) -> Self {
        LocalizedPoly::from_poly(MultiPoly::one(nvars), var)
    }

    pub fn constant(nvars: usize, var: usize, c: Rational) -> Self {
        LocalizedPoly::from_poly(MultiPoly::constant(nvars, c), var)
    }

    /// `x_var^e` for any integer `e`.
    pub fn var_power(nvars: usize, var: usize, e: i64) -> Self {
        if e >= 0 {
            LocalizedPoly::from_poly(
                MultiPoly::monomial(nvars, Monomial::var(var, e as u32), Rational::one()),
                var,
            )
        } else {
            LocalizedPoly::new(MultiPoly::one(nvars), var, (-e) as u32)
                .expect("localized variable out of range")
        }
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.power = 0;
            return;
        }
        let v = self.numerator.var_valuation(self.var).min(self.power);
        if v > 0 {
            self.numerator = self
                .numerator
                .div_var_power(self.var, v)
                .expect("valuation divides");
            self.power -= v;
        }
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.numerator
    }

    pub fn inverted_var(&self) -> usize {
        self.var
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.power == 0
    }

    /// The underlying polynomial when there is no denominator.
    pub fn as_polynomial(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.numerator)
    }

    fn check(&self, other: &LocalizedPoly) -> Result<(), AlgebraError> {
        if self.nvars() != other.nvars() {
            return Err(AlgebraError::ArityMismatch {
                left: self.nvars(),
                right: other.nvars(),
            });
        }
        if self.var != other.var {
            return Err(AlgebraError::LocalizationMismatch {
                left: self.var,
                right: other.var,
            });
        }
        Ok(())
    }

    fn lift_to(&self, power: u32) -> MultiPoly {
        self.numerator
            .mul_monomial(&Monomial::var(self.var, power - self.power))
    }

    pub fn checked_add(&self, other: &LocalizedPoly) -> Result<LocalizedPoly, AlgebraError> {
        self.check(other)?;
        let p = self.power.max(other.power);
        let num = self.lift_to(p).checked_add(&other.lift_to(p))?;
        LocalizedPoly::new(num, self.var, p)
    }

    pub fn checked_sub(&self, other: &LocalizedPoly) -> Result<LocalizedPoly, AlgebraError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &LocalizedPoly) -> Result<LocalizedPoly, AlgebraError> {
        self.check(other)?;
        let num = self.numerator.checked_mul(&other.numerator)?;
        LocalizedPoly::new(num, self.var, self.power + other.power)
    }

    /// Exact division in the localization: fails unless `other` divides
    /// `self` up to a power of the inverted variable.
    pub fn checked_div(&self, other: &LocalizedPoly) -> Result<LocalizedPoly, AlgebraError> {
        self.check(other)?;
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let s = other.numerator.var_valuation(self.var);
        let unit_free = other.numerator.div_var_power(self.var, s)?;
        let q = self.numerator.div_exact(&unit_free)?;
        // self / other = q * x^(other.power - self.power - s)
        let shift = other.power as i64 - self.power as i64 - s as i64;
        let q = LocalizedPoly::from_poly(q, self.var);
        q.checked_mul(&LocalizedPoly::var_power(self.nvars(), self.var, shift))
    }

    pub fn neg(&self) -> LocalizedPoly {
        LocalizedPoly {
            numerator: -&self.numerator,
            var: self.var,
            power: self.power,
        }
    }

    pub fn scale(&self, c: &Rational) -> LocalizedPoly {
        let mut out = LocalizedPoly {
            numerator: self.numerator.scale(c),
            var: self.var,
            power: self.power,
        };
        out.normalize();
        out
    }

    pub fn pow(&self, e: u32) -> LocalizedPoly {
        let mut acc = LocalizedPoly::one(self.nvars(), self.var);
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("same ring");
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, AlgebraError> {
        let num = self.numerator.eval(point)?;
        if self.power == 0 {
            return Ok(num);
        }
        let den = point[self.var].pow(self.power);
        num.checked_div(&den)
    }

    /// Parses `"poly"` or `"(poly) / xk^e"`.
    pub fn parse(s: &str, nvars: usize, var: usize) -> Result<LocalizedPoly, AlgebraError> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('(') {
            if let Some((num, den)) = rest.rsplit_once(") /") {
                let den = den.trim();
                let bad = || AlgebraError::Parse(format!("invalid denominator '{den}'"));
                let (v, e) = den
                    .strip_prefix('x')
                    .and_then(|d| d.split_once('^'))
                    .ok_or_else(bad)?;
                let v: usize = v.parse().map_err(|_| bad())?;
                let e: u32 = e.parse().map_err(|_| bad())?;
                if v != var {
                    return Err(bad());
                }
                return LocalizedPoly::new(MultiPoly::parse(num, nvars)?, var, e);
            }
        }
        LocalizedPoly::new(MultiPoly::parse(s, nvars)?, var, 0)
    }
}

impl fmt::Display for LocalizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / x{}^{}", self.numerator, self.var, self.power)
        }
    }
}
