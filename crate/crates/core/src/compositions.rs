//! Ordered partitions (compositions) of an integer and the arithmetic
//! functions used to count them by gcd and length.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` accepted by the closed-form counters (keeps `2^(n-1)` in `i128`).
pub const MAX_COUNT_N: usize = 120;

/// A nonempty tuple of positive integers. Serialized as a JSON integer array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("composition must have at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "composition parts must be positive: {parts:?}"
            )));
        }
        Ok(Composition { parts })
    }

    /// The composition of `n` whose cut points `{s : bit s-1 of mask set}`
    /// split `1 + 1 + ... + 1`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n >= 1 && (n == 1 || mask < (1u64 << (n - 1))));
        let mut parts = Vec::new();
        let mut start = 0;
        for s in 1..n {
            if mask & (1 << (s - 1)) != 0 {
                parts.push(s - start);
                start = s;
            }
        }
        parts.push(n - start);
        Composition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn gcd(&self) -> usize {
        self.parts.iter().fold(0, |g, &p| g.gcd(&p))
    }

    /// `self / d`, defined when `d` divides every part.
    pub fn divide(&self, d: usize) -> Option<Composition> {
        if d == 0 || self.parts.iter().any(|p| p % d != 0) {
            return None;
        }
        Some(Composition {
            parts: self.parts.iter().map(|p| p / d).collect(),
        })
    }

    pub fn scale(&self, d: usize) -> Composition {
        assert!(d > 0);
        Composition {
            parts: self.parts.iter().map(|p| p * d).collect(),
        }
    }
}

impl TryFrom<Vec<usize>> for Composition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Composition::new(parts)
    }
}

impl From<Composition> for Vec<usize> {
    fn from(c: Composition) -> Self {
        c.parts
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All `2^(n-1)` compositions of `n`, ordered by cut-point mask.
pub fn enumerate_compositions(n: usize) -> Result<Vec<Composition>> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if n > 63 {
        return Err(Error::InvalidArgument(format!("cannot enumerate 2^{} compositions", n - 1)));
    }
    Ok((0..1u64 << (n - 1))
        .map(|mask| Composition::from_mask(n, mask))
        .collect())
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Prime factorization by trial division, as `(prime, multiplicity)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi is defined for n >= 1");
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

fn check_count_range(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if n > MAX_COUNT_N {
        return Err(Error::InvalidArgument(format!("n must be at most {MAX_COUNT_N}")));
    }
    Ok(())
}

/// Number of compositions of `n` with gcd 1: `sum_{d|n} mu(n/d) 2^(d-1)`.
pub fn count_coprime(n: usize) -> Result<i128> {
    check_count_range(n)?;
    Ok(divisors(n)
        .into_iter()
        .map(|d| mobius((n / d) as u64) as i128 * (1i128 << (d - 1)))
        .sum())
}

/// Number of compositions of `n` with `len` parts and gcd 1:
/// `sum_{d|n} mu(n/d) C(d-1, len-1)`.
pub fn count_coprime_by_length(n: usize, len: usize) -> Result<i128> {
    check_count_range(n)?;
    if len < 1 || len > n {
        return Err(Error::InvalidArgument(format!(
            "length {len} outside 1..={n}"
        )));
    }
    Ok(divisors(n)
        .into_iter()
        .map(|d| mobius((n / d) as u64) as i128 * binomial(d as i64 - 1, len as i64 - 1))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_phi(n: u64) -> u64 {
        (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(
            enumerate_compositions(1).unwrap(),
            vec![Composition::new(vec![1]).unwrap()]
        );
        let three: Vec<Vec<usize>> = enumerate_compositions(3)
            .unwrap()
            .into_iter()
            .map(Vec::from)
            .collect();
        assert_eq!(three, vec![vec![3], vec![1, 2], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(enumerate_compositions(5).unwrap().len(), 16);
        assert!(enumerate_compositions(0).is_err());
    }

    #[test]
    fn coprime_counts() {
        assert_eq!(count_coprime(1).unwrap(), 1);
        assert_eq!(count_coprime(3).unwrap(), 3);
        assert_eq!(count_coprime(6).unwrap(), 27);
        assert_eq!(count_coprime_by_length(4, 2).unwrap(), 2);
        assert_eq!(count_coprime_by_length(6, 3).unwrap(), 9);
        for n in 1..10 {
            assert_eq!(count_coprime_by_length(n, n).unwrap(), 1);
        }
        assert!(count_coprime_by_length(4, 5).is_err());
        assert!(count_coprime_by_length(4, 0).is_err());
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!((mobius(1), euler_phi(1)), (1, 1));
        assert_eq!((mobius(12), euler_phi(12)), (0, 4));
        assert_eq!((mobius(30), euler_phi(30)), (-1, 8));
        for n in 1..200 {
            assert_eq!(euler_phi(n), brute_phi(n), "phi({n})");
        }
    }

    #[test]
    fn composition_validation_and_json() {
        assert!(Composition::new(vec![]).is_err());
        assert!(Composition::new(vec![2, 0]).is_err());
        let c = Composition::new(vec![4, 2, 6]).unwrap();
        assert_eq!(c.gcd(), 2);
        assert_eq!(c.divide(2).unwrap().parts(), &[2, 1, 3]);
        assert_eq!(serde_json::to_string(&c).unwrap(), "[4,2,6]");
        assert!(serde_json::from_str::<Composition>("[1,0]").is_err());
        assert_eq!(c.to_string(), "(4,2,6)");
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(2, -1), 0);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
