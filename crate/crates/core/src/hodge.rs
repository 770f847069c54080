//! Hodge polynomials in `t = uv`, the stratum sums computing them for the
//! Milnor fiber `F_n = {det H_n = 1}`, and Betti tables read off from them.
//!
//! The Milnor fiber cohomology is pure of Hodge-Tate type, so the
//! coefficient of `t^p` in the Hodge polynomial is the dimension of
//! `H_c^{2p}(F_n)`; Poincare duality on the smooth `2n`-fold `F_n` moves it
//! to `H^{2(2n-p)}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomtables::RootOfUnity;
use crate::compositions::{binomial, divisors, euler_phi, Composition};
use crate::error::{Error, Result};

/// Largest `n` accepted by the brute-force sums (`2^n` compositions of `n+1`).
pub const MAX_BRUTEFORCE_N: usize = 30;

/// A polynomial in `t` with integer coefficients, stored sparsely.
///
/// Serialized as a `{degree: coeff}` map.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
// String keys on the way in so the map also parses inside flattened structs.
#[serde(try_from = "BTreeMap<String, i64>", into = "BTreeMap<u32, i64>")]
pub struct HodgePoly {
    coeffs: BTreeMap<u32, i64>,
}

impl HodgePoly {
    pub fn zero() -> Self {
        HodgePoly::default()
    }

    pub fn constant(c: i64) -> Self {
        HodgePoly::monomial(0, c)
    }

    /// `c t^p`.
    pub fn monomial(p: u32, c: i64) -> Self {
        let mut out = HodgePoly::zero();
        out.add_term(p, c);
        out
    }

    /// `t`.
    pub fn t() -> Self {
        HodgePoly::monomial(1, 1)
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut out = HodgePoly::zero();
        for (p, c) in coeffs {
            out.add_term(p, c);
        }
        out
    }

    fn add_term(&mut self, p: u32, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(p).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&p);
        }
    }

    pub fn coefficient(&self, p: u32) -> i64 {
        self.coeffs.get(&p).copied().unwrap_or(0)
    }

    pub fn coefficients(&self) -> &BTreeMap<u32, i64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.coeffs
            .iter()
            .map(|(&p, &c)| c * t.pow(p))
            .sum()
    }

    pub fn pow(&self, e: u32) -> HodgePoly {
        (0..e).fold(HodgePoly::constant(1), |acc, _| &acc * self)
    }

    /// Coefficientwise comparison `self <= other`.
    pub fn dominated_by(&self, other: &HodgePoly) -> bool {
        self.coeffs
            .keys()
            .chain(other.coeffs.keys())
            .all(|&p| self.coefficient(p) <= other.coefficient(p))
    }

    /// The same polynomial written in `u, v`, e.g. `u^2v^2 + 2uv`.
    pub fn to_uv_string(&self) -> String {
        render(self, |p| match p {
            0 => String::new(),
            1 => "uv".into(),
            _ => format!("u^{p}v^{p}"),
        })
    }
}

fn render(poly: &HodgePoly, var: impl Fn(u32) -> String) -> String {
    if poly.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (&p, &c)) in poly.coeffs.iter().rev().enumerate() {
        let sign = if c < 0 { "-" } else { "+" };
        if i == 0 {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let v = var(p);
        let a = c.unsigned_abs();
        if v.is_empty() {
            out.push_str(&a.to_string());
        } else if a == 1 {
            out.push_str(&v);
        } else {
            out.push_str(&format!("{a}{v}"));
        }
    }
    out
}

impl fmt::Display for HodgePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = render(self, |p| match p {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{p}"),
        });
        f.write_str(&s)
    }
}

impl From<BTreeMap<u32, i64>> for HodgePoly {
    fn from(m: BTreeMap<u32, i64>) -> Self {
        HodgePoly::from_coeffs(m)
    }
}

impl TryFrom<BTreeMap<String, i64>> for HodgePoly {
    type Error = String;

    fn try_from(m: BTreeMap<String, i64>) -> std::result::Result<Self, String> {
        m.into_iter()
            .map(|(k, c)| k.parse::<u32>().map(|p| (p, c)).map_err(|_| format!("bad degree {k:?}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(HodgePoly::from_coeffs)
    }
}

impl From<HodgePoly> for BTreeMap<u32, i64> {
    fn from(p: HodgePoly) -> Self {
        p.coeffs
    }
}

impl Add for &HodgePoly {
    type Output = HodgePoly;
    fn add(self, rhs: &HodgePoly) -> HodgePoly {
        let mut out = self.clone();
        for (&p, &c) in &rhs.coeffs {
            out.add_term(p, c);
        }
        out
    }
}

impl Add for HodgePoly {
    type Output = HodgePoly;
    fn add(self, rhs: HodgePoly) -> HodgePoly {
        &self + &rhs
    }
}

impl Neg for &HodgePoly {
    type Output = HodgePoly;
    fn neg(self) -> HodgePoly {
        HodgePoly::from_coeffs(self.coeffs.iter().map(|(&p, &c)| (p, -c)))
    }
}

impl Sub for &HodgePoly {
    type Output = HodgePoly;
    fn sub(self, rhs: &HodgePoly) -> HodgePoly {
        self + &(-rhs)
    }
}

impl Mul for &HodgePoly {
    type Output = HodgePoly;
    fn mul(self, rhs: &HodgePoly) -> HodgePoly {
        let mut out = HodgePoly::zero();
        for (&p, &a) in &self.coeffs {
            for (&q, &b) in &rhs.coeffs {
                out.add_term(p + q, a * b);
            }
        }
        out
    }
}

impl Mul for HodgePoly {
    type Output = HodgePoly;
    fn mul(self, rhs: HodgePoly) -> HodgePoly {
        &self * &rhs
    }
}

impl std::iter::Sum for HodgePoly {
    fn sum<I: Iterator<Item = HodgePoly>>(iter: I) -> HodgePoly {
        iter.fold(HodgePoly::zero(), |a, b| &a + &b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "size")]
pub enum HodgeAtom {
    /// A finite set of points.
    Point(u32),
    Affine(u32),
    Torus(u32),
    Projective(u32),
}

pub fn hodge_atom(atom: HodgeAtom) -> Result<HodgePoly> {
    Ok(match atom {
        HodgeAtom::Point(0) => {
            return Err(Error::InvalidArgument("point count must be at least 1".into()))
        }
        HodgeAtom::Point(d) => HodgePoly::constant(d as i64),
        HodgeAtom::Affine(n) => HodgePoly::monomial(n, 1),
        HodgeAtom::Torus(l) => (HodgePoly::t() - HodgePoly::constant(1)).pow(l),
        HodgeAtom::Projective(n) => HodgePoly::from_coeffs((0..=n).map(|p| (p, 1))),
    })
}

impl Sub for HodgePoly {
    type Output = HodgePoly;
    fn sub(self, rhs: HodgePoly) -> HodgePoly {
        &self - &rhs
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

fn check_bruteforce(n: usize) -> Result<()> {
    check_n(n)?;
    if n > MAX_BRUTEFORCE_N {
        return Err(Error::InvalidArgument(format!(
            "brute force is limited to n <= {MAX_BRUTEFORCE_N}"
        )));
    }
    Ok(())
}

/// `(t-1)^e` expanded.
fn torus_power(e: u32) -> HodgePoly {
    HodgePoly::from_coeffs((0..=e).map(|i| {
        let sign = if (e - i).is_multiple_of(2) { 1 } else { -1 };
        (i, sign * binomial(e as i64, i as i64) as i64)
    }))
}

/// Sums `weight(P) t^n (t-1)^{|P| - 1 + extra}` over compositions `P` of
/// `n+1`, visiting every composition.
fn stratum_sum(n: usize, extra: u32, weight: impl Fn(&Composition) -> i64 + Sync) -> HodgePoly {
    // (number of parts) -> accumulated weight
    let by_len = (0..1u64 << n)
        .into_par_iter()
        .fold(
            || vec![0i64; n + 2],
            |mut acc, mask| {
                let c = Composition::from_mask(n + 1, mask);
                acc[c.len()] += weight(&c);
                acc
            },
        )
        .reduce(
            || vec![0i64; n + 2],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let tn = HodgePoly::monomial(n as u32, 1);
    by_len
        .into_iter()
        .enumerate()
        .filter(|&(_, w)| w != 0)
        .map(|(len, w)| &(&tn * &torus_power(len as u32 - 1 + extra)) * &HodgePoly::constant(w))
        .sum()
}

/// `sum_P gcd(P) t^n (t-1)^{|P|-1}` over the compositions `P` of `n+1`.
pub fn milnor_hodge_bruteforce(n: usize) -> Result<HodgePoly> {
    check_bruteforce(n)?;
    Ok(stratum_sum(n, 0, |c| c.gcd() as i64))
}

/// `t^{n-1} sum_{d | n+1} phi((n+1)/d) t^d`.
pub fn milnor_hodge_closed(n: usize) -> Result<HodgePoly> {
    check_n(n)?;
    let m = n + 1;
    Ok(HodgePoly::from_coeffs(
        divisors(m)
            .into_iter()
            .map(|d| ((n - 1 + d) as u32, euler_phi((m / d) as u64) as i64)),
    ))
}

fn check_divisor(n: usize, d: usize) -> Result<()> {
    check_n(n)?;
    if d == 0 || !(n + 1).is_multiple_of(d) {
        return Err(Error::InvalidArgument(format!("{d} does not divide n+1 = {}", n + 1)));
    }
    Ok(())
}

/// Hodge polynomial of `F_n / mu_d`:
/// `t^{n-1} sum t^m phi((n+1)/m)` over `(n+1)/d | m | n+1`.
pub fn quotient_hodge(n: usize, d: usize) -> Result<HodgePoly> {
    check_divisor(n, d)?;
    let total = n + 1;
    let base = total / d;
    Ok(HodgePoly::from_coeffs(
        divisors(total)
            .into_iter()
            .filter(|m| m % base == 0)
            .map(|m| ((n - 1 + m) as u32, euler_phi((total / m) as u64) as i64)),
    ))
}

/// Hodge polynomial of the `C^*`-bundle `G_{n,d}`: `(t-1) quotient_hodge(n, d)`.
pub fn gbundle_hodge(n: usize, d: usize) -> Result<HodgePoly> {
    Ok(torus_power(1) * quotient_hodge(n, d)?)
}

/// `sum_P gcd(d, P) t^n (t-1)^{|P|}` over compositions `P` of `n+1`.
pub fn gbundle_bruteforce(n: usize, d: usize) -> Result<HodgePoly> {
    check_divisor(n, d)?;
    check_bruteforce(n)?;
    Ok(stratum_sum(n, 1, |c| {
        num_integer::gcd(d, c.gcd()) as i64
    }))
}

/// Per-degree metadata of a [`BettiTable`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeAnnotation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
    /// The cohomological degree, when the table is indexed by half-degrees.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomological_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eigenvalues: Vec<RootOfUnity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Dimensions indexed by degree `0, 1, 2, ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub degrees: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<DegreeAnnotation>,
}

impl BettiTable {
    pub fn new(degrees: Vec<u64>) -> Self {
        BettiTable {
            degrees,
            annotations: Vec::new(),
        }
    }

    pub fn get(&self, j: usize) -> u64 {
        self.degrees.get(j).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn total_dimension(&self) -> u64 {
        self.degrees.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .enumerate()
            .map(|(j, &b)| if j % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.degrees.iter().eq(self.degrees.iter().rev())
    }

    /// Annotation slot for degree `j`, growing the list as needed.
    pub fn annotation_mut(&mut self, j: usize) -> &mut DegreeAnnotation {
        if self.annotations.len() < self.degrees.len() {
            self.annotations.resize(self.degrees.len(), DegreeAnnotation::default());
        }
        &mut self.annotations[j]
    }
}

/// Cohomology of `F_n`, indexed by `i = n+1-d` for `d | n+1`.
///
/// The entry at index `i` lives in cohomological degree `2i` with weight `2i`;
/// the annotations record both.
pub fn milnor_betti(n: usize) -> Result<BettiTable> {
    let hodge = milnor_hodge_closed(n)?;
    let mut table = BettiTable::new(vec![0; n + 1]);
    for (&p, &c) in hodge.coefficients() {
        // t^p spans H_c^{2p}; duality on the 2n-dimensional fiber.
        let i = 2 * n - p as usize;
        table.degrees[i] = c as u64;
    }
    for i in 0..=n {
        let a = table.annotation_mut(i);
        a.weight = Some(2 * i as i64);
        a.cohomological_degree = Some(2 * i);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(u32, i64)]) -> HodgePoly {
        HodgePoly::from_coeffs(c.iter().copied())
    }

    #[test]
    fn atoms() {
        assert_eq!(hodge_atom(HodgeAtom::Point(3)).unwrap(), HodgePoly::constant(3));
        assert_eq!(hodge_atom(HodgeAtom::Torus(1)).unwrap(), poly(&[(1, 1), (0, -1)]));
        assert_eq!(
            hodge_atom(HodgeAtom::Projective(2)).unwrap(),
            poly(&[(0, 1), (1, 1), (2, 1)])
        );
        assert_eq!(hodge_atom(HodgeAtom::Affine(4)).unwrap(), HodgePoly::monomial(4, 1));
        assert!(hodge_atom(HodgeAtom::Point(0)).is_err());
    }

    #[test]
    fn hand_computed_milnor_polynomials() {
        assert_eq!(milnor_hodge_bruteforce(1).unwrap(), poly(&[(2, 1), (1, 1)]));
        assert_eq!(milnor_hodge_bruteforce(2).unwrap(), poly(&[(4, 1), (2, 2)]));
        assert_eq!(milnor_hodge_closed(1).unwrap(), poly(&[(2, 1), (1, 1)]));
        assert_eq!(milnor_hodge_closed(2).unwrap(), poly(&[(4, 1), (2, 2)]));
        assert_eq!(milnor_hodge_closed(4).unwrap(), poly(&[(8, 1), (4, 4)]));
        assert_eq!(milnor_hodge_bruteforce(3).unwrap(), milnor_hodge_closed(3).unwrap());
    }

    #[test]
    fn quotients() {
        assert_eq!(quotient_hodge(2, 3).unwrap(), milnor_hodge_closed(2).unwrap());
        assert_eq!(quotient_hodge(2, 1).unwrap(), HodgePoly::monomial(4, 1));
        assert_eq!(quotient_hodge(5, 3).unwrap(), poly(&[(6, 2), (10, 1)]));
        assert!(quotient_hodge(2, 2).is_err());
    }

    #[test]
    fn gbundles() {
        let tm1 = poly(&[(1, 1), (0, -1)]);
        assert_eq!(gbundle_hodge(2, 1).unwrap(), &tm1 * &HodgePoly::monomial(4, 1));
        assert_eq!(
            gbundle_hodge(2, 3).unwrap(),
            &tm1 * &milnor_hodge_closed(2).unwrap()
        );
        assert_eq!(gbundle_bruteforce(2, 1).unwrap(), gbundle_hodge(2, 1).unwrap());
        assert_eq!(gbundle_bruteforce(2, 3).unwrap(), gbundle_hodge(2, 3).unwrap());
    }

    #[test]
    fn milnor_betti_tables() {
        assert_eq!(milnor_betti(2).unwrap().degrees, vec![1, 0, 2]);
        assert_eq!(milnor_betti(3).unwrap().degrees, vec![1, 0, 1, 2]);
        assert_eq!(milnor_betti(5).unwrap().degrees, vec![1, 0, 0, 1, 2, 2]);
        let t = milnor_betti(2).unwrap();
        assert_eq!(t.annotations[2].cohomological_degree, Some(4));
        assert_eq!(t.total_dimension(), 3);
    }

    #[test]
    fn rendering_and_json() {
        let p = poly(&[(4, 1), (2, 2)]);
        assert_eq!(p.to_string(), "t^4 + 2t^2");
        assert_eq!(p.to_uv_string(), "u^4v^4 + 2u^2v^2");
        assert_eq!(poly(&[(1, 1), (0, -1)]).to_string(), "t - 1");
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"2":2,"4":1}"#);
        let back: HodgePoly = serde_json::from_str(r#"{"2":2,"4":1}"#).unwrap();
        assert_eq!(back, p);
        assert_eq!(HodgePoly::zero().to_string(), "0");
    }
}
