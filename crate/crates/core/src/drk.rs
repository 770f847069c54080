//! The de Rham-Koszul complex `(Omega^*, D_f)` with `D_f w = dw + df ^ w`.
//!
//! Forms are polynomial differential forms on `C^v`, optionally with a simple
//! pole along one coordinate hyperplane `x_v = 0` (a form `(1/x_v) P`). Index
//! sets are strictly increasing; signs live in the coefficients.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{AlgebraError, Error, Result};
use crate::exactalg::{Monomial, MultiPoly, Rational, RowEchelon, SparseRow};
use crate::hankel::hankel_determinant;

/// A differential form of pure degree `k`, possibly with a simple pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtForm {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, MultiPoly>,
    log_pole: Option<usize>,
}

/// Sign of `dx_I ^ dx_J` relative to the sorted union, or `None` when the
/// index sets meet.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for &j in b {
        if a.contains(&j) {
            return None;
        }
        inversions += a.iter().filter(|&&i| i > j).count();
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

impl ExtForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        ExtForm {
            nvars,
            degree,
            terms: BTreeMap::new(),
            log_pole: None,
        }
    }

    /// The 0-form `p`.
    pub fn function(p: MultiPoly) -> Self {
        let mut out = ExtForm::zero(p.nvars(), 0);
        out.add_term(Vec::new(), p);
        out
    }

    pub fn dx(nvars: usize, i: usize) -> Result<Self> {
        ExtForm::monomial_form(MultiPoly::one(nvars), &[i])
    }

    /// `c dx_{i_1} ^ ... ^ dx_{i_k}` for indices in any order.
    pub fn monomial_form(c: MultiPoly, indices: &[usize]) -> Result<Self> {
        let nvars = c.nvars();
        if let Some(&bad) = indices.iter().find(|&&i| i >= nvars) {
            return Err(AlgebraError::VariableOutOfRange { index: bad, nvars }.into());
        }
        let mut out = ExtForm::zero(nvars, indices.len());
        let mut sorted: Vec<usize> = Vec::new();
        let mut negative = false;
        for &i in indices {
            match merge_sign(&sorted, &[i]) {
                None => return Ok(out),
                Some((m, s)) => {
                    sorted = m;
                    negative ^= s;
                }
            }
        }
        out.add_term(sorted, if negative { -c } else { c });
        Ok(out)
    }

    /// Builds a form from `(indices, coefficient)` pairs with sorted indices.
    pub fn from_terms(
        nvars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, MultiPoly)>,
        log_pole: Option<usize>,
    ) -> Result<Self> {
        let mut out = ExtForm::zero(nvars, degree);
        for (indices, c) in terms {
            if indices.len() != degree || indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "index set {indices:?} is not a strictly increasing {degree}-tuple"
                )));
            }
            if let Some(&bad) = indices.iter().find(|&&i| i >= nvars) {
                return Err(AlgebraError::VariableOutOfRange { index: bad, nvars }.into());
            }
            if c.nvars() != nvars {
                return Err(AlgebraError::ArityMismatch {
                    left: nvars,
                    right: c.nvars(),
                }
                .into());
            }
            out.add_term(indices, c);
        }
        if let Some(v) = log_pole {
            if v >= nvars {
                return Err(AlgebraError::VariableOutOfRange { index: v, nvars }.into());
            }
            out = out.with_pole(v);
        }
        Ok(out)
    }

    fn add_term(&mut self, indices: Vec<usize>, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&indices) {
            None => {
                self.terms.insert(indices, c);
            }
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.terms.insert(indices, sum);
                }
            }
        }
    }

    /// `(1/x_v) self`, reduced when every coefficient is divisible by `x_v`.
    pub fn with_pole(mut self, v: usize) -> Self {
        assert!(self.log_pole.is_none(), "form already has a pole");
        let divisible = self.terms.values().all(|c| c.var_valuation(v) > 0);
        if divisible {
            self.terms = self
                .terms
                .into_iter()
                .map(|(i, c)| (i, c.div_var_power(v, 1).expect("divisible")))
                .collect();
        } else {
            self.log_pole = Some(v);
        }
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn log_pole(&self) -> Option<usize> {
        self.log_pole
    }

    /// One flag per variable, set at the pole.
    pub fn log_flags(&self) -> Vec<bool> {
        (0..self.nvars).map(|i| self.log_pole == Some(i)).collect()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, MultiPoly> {
        &self.terms
    }

    pub fn coefficient(&self, indices: &[usize]) -> MultiPoly {
        self.terms
            .get(indices)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, other: &ExtForm) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            }
            .into());
        }
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(format!(
                "cannot add a {}-form and a {}-form",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &ExtForm) -> Result<ExtForm> {
        self.check_same(other)?;
        match (self.log_pole, other.log_pole) {
            (a, b) if a == b => {
                let mut out = self.clone();
                for (i, c) in &other.terms {
                    out.add_term(i.clone(), c.clone());
                }
                Ok(match out.log_pole.take() {
                    Some(v) => out.with_pole(v),
                    None => out,
                })
            }
            (Some(v), None) => self.checked_add(&other.over_pole(v)),
            (None, Some(v)) => self.over_pole(v).checked_add(other),
            _ => Err(Error::Precondition(
                "forms with poles along different hyperplanes".into(),
            )),
        }
    }

    /// The same holomorphic form written as `(x_v self) / x_v`, unreduced.
    fn over_pole(&self, v: usize) -> ExtForm {
        ExtForm {
            log_pole: Some(v),
            ..self.mul_poly(&MultiPoly::var(self.nvars, v))
        }
    }

    pub fn checked_sub(&self, other: &ExtForm) -> Result<ExtForm> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> ExtForm {
        let mut out = ExtForm { terms: BTreeMap::new(), ..self.clone() };
        for (i, p) in &self.terms {
            out.add_term(i.clone(), p.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by the polynomial `p`.
    pub fn mul_poly(&self, p: &MultiPoly) -> ExtForm {
        let mut out = ExtForm { terms: BTreeMap::new(), ..self.clone() };
        for (i, c) in &self.terms {
            out.add_term(i.clone(), c * p);
        }
        out
    }

    /// `self ^ other`; at most one factor may carry a pole.
    pub fn wedge(&self, other: &ExtForm) -> Result<ExtForm> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            }
            .into());
        }
        let pole = match (self.log_pole, other.log_pole) {
            (Some(_), Some(_)) => {
                return Err(Error::Precondition("wedge of two forms with poles".into()))
            }
            (a, b) => a.or(b),
        };
        let mut out = ExtForm::zero(self.nvars, self.degree + other.degree);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if let Some((merged, negative)) = merge_sign(i, j) {
                    let prod = a * b;
                    out.add_term(merged, if negative { -prod } else { prod });
                }
            }
        }
        Ok(match pole {
            Some(v) => out.with_pole(v),
            None => out,
        })
    }

    fn require_holomorphic(&self) -> Result<()> {
        if let Some(v) = self.log_pole {
            return Err(Error::Precondition(format!(
                "form has a pole along x{v}; use the connecting map"
            )));
        }
        Ok(())
    }

    /// Exterior derivative of a form without poles.
    pub fn exterior_derivative(&self) -> Result<ExtForm> {
        self.require_holomorphic()?;
        let mut out = ExtForm::zero(self.nvars, self.degree + 1);
        for (indices, c) in &self.terms {
            for j in 0..self.nvars {
                if indices.contains(&j) {
                    continue;
                }
                let dc = c.partial(j);
                if dc.is_zero() {
                    continue;
                }
                let (merged, negative) = merge_sign(&[j], indices).expect("disjoint");
                out.add_term(merged, if negative { -dc } else { dc });
            }
        }
        Ok(out)
    }

    /// Degrees `deg(coeff) + k` of all monomial terms; a pole counts `-1`.
    pub fn homogeneous_degrees(&self) -> Vec<i64> {
        let shift = self.degree as i64 - i64::from(self.log_pole.is_some());
        let mut out: Vec<i64> = self
            .terms
            .values()
            .flat_map(|c| c.terms().map(|(m, _)| m.degree() as i64 + shift).collect::<Vec<_>>())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Residue along the pole: writing the form as `b + a ^ dx_v / x_v`,
    /// returns `a` restricted to `x_v = 0`.
    pub fn residue(&self) -> Result<ExtForm> {
        let Some(v) = self.log_pole else {
            return Err(Error::Precondition("form has no pole".into()));
        };
        if self.degree == 0 {
            return Err(Error::Precondition("a function has no residue".into()));
        }
        let zero = Rational::zero();
        let mut out = ExtForm::zero(self.nvars, self.degree - 1);
        for (indices, c) in &self.terms {
            if !indices.contains(&v) {
                if c.var_valuation(v) == 0 {
                    return Err(Error::Precondition(format!(
                        "not a logarithmic form: {} has a pole without dx{v}",
                        c
                    )));
                }
                continue;
            }
            let rest: Vec<usize> = indices.iter().copied().filter(|&i| i != v).collect();
            let after = indices.iter().filter(|&&i| i > v).count();
            let r = c.substitute(v, &zero);
            out.add_term(rest, if after % 2 == 1 { -r } else { r });
        }
        Ok(out)
    }

    /// `(1/x_v) self ^ dx_v`, whose residue is `self` on `x_v = 0`.
    pub fn log_lift(&self, v: usize) -> Result<ExtForm> {
        self.require_holomorphic()?;
        let dxv = ExtForm::dx(self.nvars, v)?;
        let mut out = self.wedge(&dxv)?;
        out.log_pole = None;
        if out.is_zero() {
            return Err(Error::Precondition(format!("form already contains dx{v}")));
        }
        Ok(ExtForm {
            log_pole: Some(v),
            ..out
        })
    }

    /// The form restricted to `x_v = 0`, dropping terms containing `dx_v`.
    pub fn restrict(&self, v: usize) -> Result<ExtForm> {
        self.require_holomorphic()?;
        let zero = Rational::zero();
        let mut out = ExtForm::zero(self.nvars, self.degree);
        for (indices, c) in &self.terms {
            if !indices.contains(&v) {
                out.add_term(indices.clone(), c.substitute(v, &zero));
            }
        }
        Ok(out)
    }

    /// `c` with `self = c * other`, if the two forms are proportional.
    pub fn ratio_to(&self, other: &ExtForm) -> Option<Rational> {
        if self.nvars != other.nvars
            || self.degree != other.degree
            || self.log_pole != other.log_pole
            || other.is_zero()
        {
            return None;
        }
        let (indices, oc) = other.terms.iter().next()?;
        let (m, b) = oc.leading_term()?;
        let c = self.coefficient(indices).coefficient(m).checked_div(b).ok()?;
        if c.is_zero() || &other.scale(&c) != self {
            return None;
        }
        Some(c)
    }
}

impl fmt::Display for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some(v) = self.log_pole {
            write!(f, "1/x{v} * (")?;
        }
        for (n, (indices, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let dx: Vec<String> = indices.iter().map(|i| format!("dx{i}")).collect();
            match (c.num_terms(), dx.is_empty()) {
                (_, true) => write!(f, "({c})")?,
                (1, false) if c.is_constant() && c.coefficient(&Monomial::one()).is_one() => {
                    write!(f, "{}", dx.join("^"))?
                }
                _ => write!(f, "({c}) {}", dx.join("^"))?,
            }
        }
        if self.log_pole.is_some() {
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    indices: Vec<usize>,
    coeff: MultiPoly,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    nvars: usize,
    degree: usize,
    log: Vec<bool>,
    terms: Vec<TermJson>,
}

impl Serialize for ExtForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FormJson {
            nvars: self.nvars,
            degree: self.degree,
            log: self.log_flags(),
            terms: self
                .terms
                .iter()
                .map(|(i, c)| TermJson {
                    indices: i.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExtForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = FormJson::deserialize(deserializer)?;
        if raw.log.len() != raw.nvars {
            return Err(D::Error::custom("log flags must have one entry per variable"));
        }
        let poles: Vec<usize> = (0..raw.nvars).filter(|&i| raw.log[i]).collect();
        if poles.len() > 1 {
            return Err(D::Error::custom("at most one log pole is supported"));
        }
        let terms = raw
            .terms
            .into_iter()
            .map(|t| Ok((t.indices, t.coeff.with_nvars(raw.nvars)?)))
            .collect::<std::result::Result<Vec<_>, AlgebraError>>()
            .map_err(D::Error::custom)?;
        ExtForm::from_terms(raw.nvars, raw.degree, terms, poles.first().copied())
            .map_err(D::Error::custom)
    }
}

/// Homogeneous class `a mod N` of a form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedClass {
    pub residue: u32,
    pub modulus: u32,
}

impl GradedClass {
    pub fn new(residue: i64, modulus: u32) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        Ok(GradedClass {
            residue: residue.rem_euclid(modulus as i64) as u32,
            modulus,
        })
    }
}

/// The total differential `1-form df`.
pub fn df(f: &MultiPoly) -> ExtForm {
    let mut out = ExtForm::zero(f.nvars(), 1);
    for j in 0..f.nvars() {
        out.add_term(vec![j], f.partial(j));
    }
    out
}

/// `D_f w = dw + df ^ w` for a form without poles.
pub fn d_f(f: &MultiPoly, omega: &ExtForm) -> Result<ExtForm> {
    if f.nvars() != omega.nvars() {
        return Err(AlgebraError::ArityMismatch {
            left: f.nvars(),
            right: omega.nvars(),
        }
        .into());
    }
    omega.exterior_derivative()?.checked_add(&df(f).wedge(omega)?)
}

/// The common degree `deg(coeff) + k` modulo `modulus`.
pub fn homogeneous_class(omega: &ExtForm, modulus: u32) -> Result<GradedClass> {
    let degrees = omega.homogeneous_degrees();
    match degrees.as_slice() {
        [] => Err(Error::InvalidArgument("the zero form has no homogeneous class".into())),
        [d] => GradedClass::new(*d, modulus),
        _ => Err(Error::MixedDegrees(degrees)),
    }
}

/// Image of `omega` under the connecting map of the residue sequence along
/// the pole of `lift`: `D_f(lift)`, which has no pole when `omega` is closed.
pub fn connecting_map(f: &MultiPoly, omega: &ExtForm, lift: &ExtForm) -> Result<ExtForm> {
    let Some(v) = lift.log_pole() else {
        return Err(Error::Precondition("lift must have a log pole".into()));
    };
    if f.nvars() != lift.nvars() || omega.nvars() != lift.nvars() {
        return Err(AlgebraError::ArityMismatch {
            left: lift.nvars(),
            right: if f.nvars() != lift.nvars() { f.nvars() } else { omega.nvars() },
        }
        .into());
    }
    if lift.residue()? != omega.restrict(v)? {
        return Err(Error::Precondition(format!(
            "residue of the lift along x{v} is not the given form"
        )));
    }
    // lift = P / x_v:  D_f(lift) = (-dx_v ^ P + x_v dP + x_v df ^ P) / x_v^2
    let p = ExtForm {
        log_pole: None,
        ..lift.clone()
    };
    let xv = MultiPoly::var(lift.nvars(), v);
    let r = ExtForm::dx(lift.nvars(), v)?
        .wedge(&p)?
        .scale(&-Rational::one())
        .checked_add(&d_f(f, &p)?.mul_poly(&xv))?;
    let mut out = ExtForm::zero(r.nvars, r.degree);
    for (indices, c) in &r.terms {
        let q = c.div_var_power(v, 2).map_err(|_| {
            Error::Consistency(format!(
                "pole along x{v} survives the connecting map; the lift is not compatible"
            ))
        })?;
        out.add_term(indices.clone(), q);
    }
    Ok(out)
}

/// Two applications of the connecting map, first along `x_1` inside
/// `x_0 = 0`, then along `x_0`.
fn two_step(f: &MultiPoly, start: &ExtForm) -> Result<ExtForm> {
    let f0 = f.substitute(0, &Rational::zero());
    let beta = connecting_map(&f0, start, &start.log_lift(1)?)?;
    connecting_map(f, &beta, &beta.log_lift(0)?)
}

/// The top forms generating the `e^{2 pi i/3}` and `e^{4 pi i/3}` eigenspaces
/// of `H^4(F_2)`, obtained from `dx_2` and `x_2 dx_2`.
pub fn n2_eigenvectors() -> Result<(ExtForm, ExtForm)> {
    let f = hankel_determinant(2);
    let dx2 = ExtForm::dx(5, 2)?;
    let a1 = two_step(&f, &dx2)?;
    let a2 = two_step(&f, &dx2.mul_poly(&MultiPoly::var(5, 2)))?;
    for (name, a, class) in [("alpha_1", &a1, 1), ("alpha_2", &a2, 2)] {
        if !d_f(&f, a)?.is_zero() {
            return Err(Error::Consistency(format!("{name} is not closed")));
        }
        let got = homogeneous_class(a, 3)?;
        if got.residue != class {
            return Err(Error::Consistency(format!(
                "{name} has class {} instead of {class}",
                got.residue
            )));
        }
    }
    Ok((a1, a2))
}

/// `H^1` of `(Omega^*, D_g)` for `g = z^{m+1}` on `C`, as a basis of
/// monomial representatives; with `log`, forms with a pole at `0` are
/// allowed as well.
pub fn univariate_drk_cohomology(m: usize, log: bool) -> Result<Vec<ExtForm>> {
    let base = univariate_basis(m, log, 3 * (m + 1))?;
    let raised = univariate_basis(m, log, 4 * (m + 1))?;
    if base != raised {
        return Err(Error::Consistency(format!(
            "univariate cohomology for m={m} did not stabilize"
        )));
    }
    Ok(base)
}

/// Truncated computation: `Omega^0` spanned by `z^j`, `j <= trunc`, and
/// `Omega^1` by `z^j dz` with `j <= trunc + m` (and `dz/z` with `log`).
/// Returns the monomials not hit by pivots of the image of `D_g`.
pub fn univariate_basis(m: usize, log: bool, trunc: usize) -> Result<Vec<ExtForm>> {
    if m < 1 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let g = MultiPoly::var(1, 0).pow(m as u32 + 1);
    let shift = usize::from(log);
    // column c <-> z^{c - shift} dz; highest degree first so pivots sit on top terms
    let top = trunc + m + shift;
    let column = |j: usize| top - (j + shift);
    let mut echelon = RowEchelon::new();
    for j in 0..=trunc {
        let image = d_f(&g, &ExtForm::function(MultiPoly::var(1, 0).pow(j as u32)))?;
        let mut row = SparseRow::new();
        for (m, c) in image.coefficient(&[0]).terms() {
            row.insert(column(m.exponent(0) as usize), c.clone());
        }
        echelon.insert(row);
    }
    let pivots: Vec<usize> = echelon.pivot_columns().collect();
    if pivots.len() != trunc + 1 {
        return Err(Error::Consistency("D_g is not injective on functions".into()));
    }
    let mut basis = Vec::new();
    if log {
        basis.push(ExtForm::dx(1, 0)?.with_pole(0));
    }
    for j in 0..=trunc + m {
        if !pivots.contains(&column(j)) {
            basis.push(ExtForm::monomial_form(MultiPoly::var(1, 0).pow(j as u32), &[0])?);
        }
    }
    Ok(basis)
}

/// Cohomology dimensions of the truncated class-`a` subcomplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedDims {
    pub class: u32,
    pub modulus: u32,
    pub truncation: usize,
    /// `dims[k]` is `dim H^k` at this truncation.
    pub dims: Vec<usize>,
    /// Same dimensions at truncation `D - N`.
    pub stabilized: bool,
}

fn exponent_vectors(nvars: usize, degree: usize) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in exponent_vectors(nvars - 1, degree - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// Basis `x^e dx_I` of class-`a` `k`-forms with coefficient degree `<= max_deg`.
fn graded_basis(nvars: usize, k: usize, modulus: usize, class: usize, max_deg: isize) -> Vec<(Vec<u32>, Vec<usize>)> {
    let mut out = Vec::new();
    if max_deg < 0 {
        return out;
    }
    for c in 0..=max_deg as usize {
        if (c + k) % modulus != class {
            continue;
        }
        for e in exponent_vectors(nvars, c) {
            for s in subsets(nvars, k) {
                out.push((e.clone(), s));
            }
        }
    }
    out
}

fn rank_of_image(
    f: &MultiPoly,
    domain: &[(Vec<u32>, Vec<usize>)],
) -> Result<usize> {
    let nvars = f.nvars();
    let mut index: BTreeMap<(Vec<u32>, Vec<usize>), usize> = BTreeMap::new();
    let mut echelon = RowEchelon::new();
    for (e, s) in domain {
        let form = ExtForm::monomial_form(
            MultiPoly::monomial(nvars, Monomial::from_dense(e), Rational::one()),
            s,
        )?;
        let image = d_f(f, &form)?;
        let mut row = SparseRow::new();
        for (indices, c) in image.terms() {
            for (m, v) in c.terms() {
                let key = (m.to_dense(nvars), indices.clone());
                let next = index.len();
                let col = *index.entry(key).or_insert(next);
                row.insert(col, v.clone());
            }
        }
        echelon.insert(row);
    }
    Ok(echelon.rank())
}

fn dims_at(f: &MultiPoly, modulus: usize, class: usize, trunc: usize) -> Result<Vec<usize>> {
    let nvars = f.nvars();
    let shift = modulus as isize - 1;
    let work: Vec<(usize, usize)> = (0..=nvars)
        .flat_map(|k| [(k, 0), (k, 1)])
        .collect();
    // (k, 0): rank of D_f on T^k(D);  (k, 1): rank of D_f on T^{k-1}(D - N + 1)
    let ranks: Vec<Result<(usize, usize, usize)>> = work
        .par_iter()
        .map(|&(k, which)| {
            let dom = if which == 0 {
                graded_basis(nvars, k, modulus, class, trunc as isize)
            } else if k == 0 {
                Vec::new()
            } else {
                graded_basis(nvars, k - 1, modulus, class, trunc as isize - shift)
            };
            let r = if which == 0 && k == nvars { 0 } else { rank_of_image(f, &dom)? };
            let size = if which == 0 { dom.len() } else { 0 };
            Ok((k * 2 + which, r, size))
        })
        .collect();
    let mut table = vec![(0usize, 0usize); 2 * (nvars + 1)];
    for r in ranks {
        let (slot, rank, size) = r?;
        table[slot] = (rank, size);
    }
    Ok((0..=nvars)
        .map(|k| {
            let (rank_out, size) = table[2 * k];
            let (rank_in, _) = table[2 * k + 1];
            size - rank_out - rank_in
        })
        .collect())
}

/// `dim H^k` of the class-`a` subcomplex, truncated at coefficient degree
/// `D`: cycles in degree `<= D` modulo boundaries of forms of degree
/// `<= D - N + 1`.
pub fn truncated_drk_dims(f: &MultiPoly, modulus: u32, class: u32, truncation: usize) -> Result<TruncatedDims> {
    if f.is_zero() || !f.is_homogeneous() || f.total_degree() != Some(modulus) {
        return Err(Error::InvalidArgument(format!(
            "f must be homogeneous of degree {modulus}"
        )));
    }
    if truncation < modulus as usize {
        return Err(Error::InvalidArgument("truncation must be at least N".into()));
    }
    if class >= modulus {
        return Err(Error::InvalidArgument(format!("class {class} is not below {modulus}")));
    }
    let (n, a) = (modulus as usize, class as usize);
    let dims = dims_at(f, n, a, truncation)?;
    let lower = dims_at(f, n, a, truncation - n)?;
    Ok(TruncatedDims {
        class,
        modulus,
        truncation,
        stabilized: dims == lower,
        dims,
    })
}
