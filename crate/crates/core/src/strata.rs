//! The stratification of `C^{2n+1}` by compositions of `n+1`, and the torus
//! normal form of a monomial.
//!
//! Iterating the block reduction splits `H_n` into skew-triangular Hankel
//! blocks of sizes `p_1, ..., p_l`; block `i` starts at row `r_i = p_1 + ... +
//! p_{i-1}` and its antidiagonal carries the variable of index
//! `q_i = 2 r_i + p_i - 1`. On `Y_P` the determinant is `prod y_{q_i}^{p_i}`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::compositions::{enumerate_compositions, Composition};
use crate::error::{Error, Result};

/// One block of the block-diagonal form of `H_n` on a stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTrace {
    pub size: usize,
    /// First row (and column) of the block.
    pub row_offset: usize,
    /// Index of the variable on the block's antidiagonal.
    pub anchor: usize,
}

/// A variable power `y_var^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarPower {
    pub var: usize,
    pub exp: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumDescriptor {
    pub composition: Composition,
    pub gcd: usize,
    /// `f|_{Y_P}`, one factor per block.
    pub monomial: Vec<VarPower>,
    /// Number of parts; the `(C^*)^l` factor of `Y_P`.
    pub torus_rank: usize,
    /// The `C^n` factor of `Y_P`.
    pub affine_rank: usize,
    pub exponent_vector: Vec<usize>,
    /// `f` does not vanish on `Y_P`.
    pub f_nonvanishing: bool,
    /// `f` vanishes identically on the companion stratum `Y_{P,0}`.
    pub zero_stratum_in_hypersurface: bool,
}

impl StratumDescriptor {
    /// Dimension of `Y_P`, equal to `l + n`.
    pub fn dimension(&self) -> usize {
        self.torus_rank + self.affine_rank
    }

    /// The monomial as text, e.g. `y1^2*y4`.
    pub fn monomial_string(&self) -> String {
        self.monomial
            .iter()
            .map(|m| {
                if m.exp == 1 {
                    format!("y{}", m.var)
                } else {
                    format!("y{}^{}", m.var, m.exp)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Block sizes and antidiagonal variables for the stratum of `P`.
pub fn stratum_coordinate_trace(n: usize, p: &Composition) -> Result<Vec<BlockTrace>> {
    if p.total() != n + 1 {
        return Err(Error::InvalidArgument(format!(
            "{p} is a composition of {}, expected {}",
            p.total(),
            n + 1
        )));
    }
    let mut row = 0;
    Ok(p.parts()
        .iter()
        .map(|&size| {
            let block = BlockTrace {
                size,
                row_offset: row,
                anchor: 2 * row + size - 1,
            };
            row += size;
            block
        })
        .collect())
}

fn descriptor(n: usize, composition: Composition) -> StratumDescriptor {
    let trace = stratum_coordinate_trace(n, &composition).expect("composition of n+1");
    StratumDescriptor {
        gcd: composition.gcd(),
        monomial: trace
            .iter()
            .map(|b| VarPower {
                var: b.anchor,
                exp: b.size,
            })
            .collect(),
        torus_rank: composition.len(),
        affine_rank: n,
        exponent_vector: composition.parts().to_vec(),
        f_nonvanishing: true,
        zero_stratum_in_hypersurface: true,
        composition,
    }
}

/// One descriptor per composition of `n+1`, in enumeration order.
pub fn stratify(n: usize) -> Result<Vec<StratumDescriptor>> {
    Ok(enumerate_compositions(n + 1)?
        .into_iter()
        .map(|c| descriptor(n, c))
        .collect())
}

/// Integer change of torus coordinates turning `prod y_i^{e_i}` into `z^d`.
///
/// Row `position` of `matrix`, times `exponent`, is the original exponent
/// vector; `matrix` is unimodular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnimodularChange {
    pub matrix: Vec<Vec<i64>>,
    pub exponent: u64,
    pub position: usize,
}

impl UnimodularChange {
    pub fn determinant(&self) -> i128 {
        integer_det(&self.matrix)
    }

    /// `exponent * matrix[position]`.
    pub fn pullback(&self) -> Vec<i64> {
        self.matrix[self.position]
            .iter()
            .map(|&u| u * self.exponent as i64)
            .collect()
    }
}

impl fmt::Display for UnimodularChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| format!("{r:?}"))
            .collect();
        write!(f, "z{}^{} via [{}]", self.position, self.exponent, rows.join(", "))
    }
}

/// Euclidean reduction of the exponent vector on consecutive nonzero
/// entries, left to right, until one entry is left.
pub fn torus_normal_form(exponents: &[u64]) -> Result<UnimodularChange> {
    if exponents.is_empty() {
        return Err(Error::InvalidArgument("empty exponent vector".into()));
    }
    if exponents.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "exponents must be positive: {exponents:?}"
        )));
    }
    let len = exponents.len();
    let mut c: Vec<u64> = exponents.to_vec();
    let mut u: Vec<Vec<i64>> = (0..len)
        .map(|i| (0..len).map(|j| i64::from(i == j)).collect())
        .collect();

    loop {
        let nonzero: Vec<usize> = (0..len).filter(|&i| c[i] != 0).collect();
        if nonzero.len() == 1 {
            let position = nonzero[0];
            return Ok(UnimodularChange {
                matrix: u,
                exponent: c[position],
                position,
            });
        }
        for w in nonzero.windows(2) {
            let (i, j) = (w[0], w[1]);
            if c[i] == 0 || c[j] == 0 {
                continue;
            }
            let (big, small) = if c[i] >= c[j] { (i, j) } else { (j, i) };
            let (q, r) = c[big].div_rem(&c[small]);
            let q = q as i64;
            let big_row = u[big].clone();
            for (x, y) in u[small].iter_mut().zip(&big_row) {
                *x += q * y;
            }
            c[big] = r;
        }
    }
}

/// Fraction-free determinant of a small integer matrix.
pub fn integer_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut sign = 1;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn find(strata: &[StratumDescriptor], parts: &[usize]) -> StratumDescriptor {
        strata
            .iter()
            .find(|s| s.composition.parts() == parts)
            .unwrap()
            .clone()
    }

    #[test]
    fn n2_monomials() {
        let strata = stratify(2).unwrap();
        assert_eq!(strata.len(), 4);
        assert_eq!(find(&strata, &[1, 1, 1]).monomial_string(), "y0*y2*y4");
        assert_eq!(find(&strata, &[2, 1]).monomial_string(), "y1^2*y4");
        assert_eq!(find(&strata, &[1, 2]).monomial_string(), "y0*y3^2");
        let top = find(&strata, &[3]);
        assert_eq!(top.monomial_string(), "y2^3");
        assert_eq!(top.gcd, 3);
        assert_eq!(find(&strata, &[1, 1, 1]).dimension(), 5);
    }

    #[test]
    fn coordinate_traces() {
        let t = stratum_coordinate_trace(2, &comp(&[1, 2])).unwrap();
        assert_eq!(t.iter().map(|b| b.size).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(t.iter().map(|b| b.anchor).collect::<Vec<_>>(), vec![0, 3]);
        let single = stratum_coordinate_trace(2, &comp(&[3])).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].anchor, 2);
        for n in 0..8 {
            let t = stratum_coordinate_trace(n, &comp(&[n + 1])).unwrap();
            assert_eq!(t[0].anchor, n);
        }
        assert!(stratum_coordinate_trace(2, &comp(&[1, 1])).is_err());
    }

    #[test]
    fn normal_form_examples() {
        let one = torus_normal_form(&[7]).unwrap();
        assert_eq!(one.matrix, vec![vec![1]]);
        assert_eq!(one.exponent, 7);

        let two = torus_normal_form(&[2, 2]).unwrap();
        assert_eq!(two.exponent, 2);
        assert_eq!(two.matrix, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(two.pullback(), vec![2, 2]);

        let c = torus_normal_form(&[5, 3]).unwrap();
        assert_eq!(c.exponent, 1);
        assert_eq!(c.determinant().abs(), 1);
        assert_eq!(c.pullback(), vec![5, 3]);

        let stalls_if_adjacent = torus_normal_form(&[2, 4, 3]).unwrap();
        assert_eq!(stalls_if_adjacent.exponent, 1);
        assert_eq!(stalls_if_adjacent.pullback(), vec![2, 4, 3]);
    }

    #[test]
    fn normal_form_rejects_bad_input() {
        assert!(torus_normal_form(&[]).is_err());
        assert!(torus_normal_form(&[3, 0]).is_err());
    }

    #[test]
    fn integer_det_small() {
        assert_eq!(integer_det(&[vec![2, 3], vec![5, 7]]), -1);
        assert_eq!(integer_det(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(integer_det(&[vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn descriptor_json() {
        let s = find(&stratify(2).unwrap(), &[2, 1]);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["composition"], serde_json::json!([2, 1]));
        assert_eq!(v["gcd"], 1);
        assert_eq!(v["monomial"][0], serde_json::json!({"var": 1, "exp": 2}));
        let back: StratumDescriptor = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}
