use std::collections::HashMap;

use super::{LocalizedPoly, MultiPoly, Rational};
use crate::error::AlgebraError;

/// Largest size for which `det` uses memoized cofactor expansion.
pub const COFACTOR_LIMIT: usize = 6;

/// Dense matrix of localized polynomials, all in the same ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LocalizedPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LocalizedPoly>) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(first) = entries.first() {
            for e in &entries[1..] {
                if e.nvars() != first.nvars() {
                    return Err(AlgebraError::ArityMismatch {
                        left: first.nvars(),
                        right: e.nvars(),
                    });
                }
                if e.inverted_var() != first.inverted_var() {
                    return Err(AlgebraError::LocalizationMismatch {
                        left: first.inverted_var(),
                        right: e.inverted_var(),
                    });
                }
            }
        }
        Ok(PolyMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> LocalizedPoly,
    ) -> Result<Self, AlgebraError> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix::new(rows, cols, entries)
    }

    /// Matrix of plain polynomials, viewed in the localization at `x_var`.
    pub fn from_polys(rows: usize, cols: usize, polys: Vec<MultiPoly>, var: usize) -> Result<Self, AlgebraError> {
        PolyMatrix::new(
            rows,
            cols,
            polys
                .into_iter()
                .map(|p| LocalizedPoly::from_poly(p, var))
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LocalizedPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: LocalizedPoly) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[LocalizedPoly] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn scale(&self, c: &LocalizedPoly) -> Result<PolyMatrix, AlgebraError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.checked_mul(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn checked_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let (nvars, var) = self.ring().or(other.ring()).unwrap_or((0, 0));
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LocalizedPoly::zero(nvars.max(1), var);
                if nvars == 0 {
                    entries.push(acc);
                    continue;
                }
                for t in 0..self.cols {
                    let a = self.get(i, t);
                    let b = other.get(t, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.checked_add(&a.checked_mul(b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    fn ring(&self) -> Option<(usize, usize)> {
        self.entries.first().map(|e| (e.nvars(), e.inverted_var()))
    }

    fn require_square(&self) -> Result<(), AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Exact determinant: cofactor expansion up to [`COFACTOR_LIMIT`],
    /// fraction-free elimination above.
    pub fn det(&self) -> Result<LocalizedPoly, AlgebraError> {
        self.require_square()?;
        if self.rows <= COFACTOR_LIMIT {
            self.det_cofactor()
        } else {
            self.det_bareiss()
        }
    }

    /// Laplace expansion along successive rows with minors memoized by
    /// their column set.
    pub fn det_cofactor(&self) -> Result<LocalizedPoly, AlgebraError> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Err(AlgebraError::NotSquare { rows: 0, cols: 0 });
        }
        assert!(n < 64, "cofactor expansion limited to fewer than 64 columns");
        let (nvars, var) = self.ring().expect("nonempty");
        let mut memo: HashMap<u64, LocalizedPoly> = HashMap::new();
        let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        self.minor(0, full, nvars, var, &mut memo)
    }

    fn minor(
        &self,
        row: usize,
        mask: u64,
        nvars: usize,
        var: usize,
        memo: &mut HashMap<u64, LocalizedPoly>,
    ) -> Result<LocalizedPoly, AlgebraError> {
        if row == self.rows {
            return Ok(LocalizedPoly::one(nvars, var));
        }
        if let Some(v) = memo.get(&mask) {
            return Ok(v.clone());
        }
        let mut acc = LocalizedPoly::zero(nvars, var);
        let mut position = 0;
        for c in 0..self.cols {
            if mask & (1 << c) == 0 {
                continue;
            }
            let entry = self.get(row, c);
            if !entry.is_zero() {
                let sub = self.minor(row + 1, mask & !(1 << c), nvars, var, memo)?;
                let term = entry.checked_mul(&sub)?;
                acc = if position % 2 == 0 {
                    acc.checked_add(&term)?
                } else {
                    acc.checked_sub(&term)?
                };
            }
            position += 1;
        }
        memo.insert(mask, acc.clone());
        Ok(acc)
    }

    /// Bareiss fraction-free elimination; every division is exact.
    pub fn det_bareiss(&self) -> Result<LocalizedPoly, AlgebraError> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Err(AlgebraError::NotSquare { rows: 0, cols: 0 });
        }
        let (nvars, var) = self.ring().expect("nonempty");
        let mut m: Vec<Vec<LocalizedPoly>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = LocalizedPoly::one(nvars, var);
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        negate = !negate;
                    }
                    None => return Ok(LocalizedPoly::zero(nvars, var)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j]
                        .checked_mul(&m[k][k])?
                        .checked_sub(&m[i][k].checked_mul(&m[k][j])?)?;
                    m[i][j] = num.checked_div(&prev)?;
                }
                m[i][k] = LocalizedPoly::zero(nvars, var);
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { det.neg() } else { det })
    }

    /// Entries rendered row by row with `Display`.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn rational_det(mut m: Vec<Vec<Rational>>) -> Result<Rational, AlgebraError> {
    let n = m.len();
    if let Some(bad) = m.iter().find(|r| r.len() != n) {
        return Err(AlgebraError::NotSquare {
            rows: n,
            cols: bad.len(),
        });
    }
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = m[i][k].checked_div(&pivot)?;
            let (upper, lower) = m.split_at_mut(i);
            for (x, p) in lower[0][k..n].iter_mut().zip(&upper[k][k..n]) {
                *x -= &(&factor * p);
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hankel(n: usize) -> PolyMatrix {
        let nvars = 2 * n + 1;
        PolyMatrix::from_fn(n + 1, n + 1, |i, j| {
            LocalizedPoly::from_poly(MultiPoly::var(nvars, i + j), 0)
        })
        .unwrap()
    }

    #[test]
    fn one_by_one() {
        let d = hankel(0).det().unwrap();
        assert_eq!(d.as_polynomial().unwrap(), &MultiPoly::var(1, 0));
    }

    #[test]
    fn two_by_two_cofactor() {
        let d = hankel(1).det().unwrap();
        let x = |i| MultiPoly::var(3, i);
        assert_eq!(d.as_polynomial().unwrap(), &(&(&x(0) * &x(2)) - &x(1).pow(2)));
    }

    #[test]
    fn three_by_three_hankel() {
        let d = hankel(2).det().unwrap();
        let expected = MultiPoly::parse(
            "-x2^3 + 2*x1*x2*x3 - x0*x3^2 - x1^2*x4 + x0*x2*x4",
            5,
        )
        .unwrap();
        assert_eq!(d.as_polynomial().unwrap(), &expected);
        assert_eq!(hankel(2).det_bareiss().unwrap(), d);
    }

    #[test]
    fn bareiss_matches_cofactor_on_hankel() {
        for n in 1..=4 {
            let h = hankel(n);
            assert_eq!(h.det_cofactor().unwrap(), h.det_bareiss().unwrap(), "n={n}");
        }
    }

    #[test]
    fn non_square_rejected() {
        let m = PolyMatrix::from_fn(2, 3, |_, _| LocalizedPoly::one(1, 0)).unwrap();
        assert_eq!(m.det(), Err(AlgebraError::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn rational_det_small() {
        let r = |v: i64| Rational::from(v);
        let m = vec![vec![r(2), r(3)], vec![r(5), r(7)]];
        assert_eq!(rational_det(m).unwrap(), r(-1));
        let singular = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
        assert_eq!(rational_det(singular).unwrap(), r(0));
    }
}
