//! Hankel matrices and the block-reduction coordinate change on
//! `Y_k = {x_j = 0 for j < k, x_k != 0}`.
//!
//! On `Y_k` the functions `p_0, ..., p_{2n-k}` defined by `p_0 x_k = 1` and
//! `p_0 x_{k+l} + p_1 x_{k+l-1} + ... + p_l x_k = 0` assemble into the upper
//! triangular Toeplitz matrix `P`, and `N = P^T H_n P` splits into a
//! `(k+1)x(k+1)` skew-triangular Hankel block and an `(n-k)x(n-k)` Hankel
//! block. Everything here is computed in the localization at `x_k`.

use std::fmt;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{rational_det, LocalizedPoly, MultiPoly, PolyMatrix, Rational};

/// The square Hankel matrix `H_n`, of size `(n+1)x(n+1)` in `x_0..x_{2n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HankelSpec {
    pub n: usize,
}

impl HankelSpec {
    pub fn nvars(&self) -> usize {
        2 * self.n + 1
    }
}

/// `H_n` with entry `(i, j) = x_{i+j}`, localized at `x_0`.
pub fn hankel_matrix(spec: HankelSpec) -> PolyMatrix {
    let nvars = spec.nvars();
    let entries: Vec<LocalizedPoly> = (0..nvars)
        .map(|i| LocalizedPoly::from_poly(MultiPoly::var(nvars, i), 0))
        .collect();
    hankel_from_entries(&entries).expect("2n+1 entries")
}

/// `f = det H_n` as a polynomial in `2n+1` variables.
pub fn hankel_determinant(n: usize) -> MultiPoly {
    let det = hankel_matrix(HankelSpec { n }).det().expect("square");
    det.as_polynomial().expect("polynomial entries").clone()
}

/// The Hankel matrix whose antidiagonals are `entries[0], entries[1], ...`;
/// needs an odd number of entries.
pub fn hankel_from_entries(entries: &[LocalizedPoly]) -> Result<PolyMatrix> {
    if entries.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "a square Hankel matrix needs an odd number of entries, got {}",
            entries.len()
        )));
    }
    let size = entries.len() / 2 + 1;
    Ok(PolyMatrix::from_fn(size, size, |i, j| entries[i + j].clone())?)
}

/// Output of [`block_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockReduction {
    pub n: usize,
    pub k: usize,
    /// `p_0, ..., p_{2n-k}`.
    pub p_seq: Vec<LocalizedPoly>,
    pub p_matrix: PolyMatrix,
    pub n_matrix: PolyMatrix,
    /// `y_0, ..., y_{2n-k}`.
    pub y_coords: Vec<LocalizedPoly>,
}

impl BlockReduction {
    pub fn nvars(&self) -> usize {
        2 * self.n + 1
    }

    /// `H_n` restricted to `Y_k`.
    pub fn restricted_hankel(&self) -> PolyMatrix {
        restricted_hankel(self.n, self.k)
    }

    fn p(&self, i: usize) -> &LocalizedPoly {
        &self.p_seq[i]
    }
}

fn restricted_vars(n: usize, k: usize) -> Vec<LocalizedPoly> {
    let nvars = 2 * n + 1;
    (0..nvars)
        .map(|j| {
            if j < k {
                LocalizedPoly::zero(nvars, k)
            } else {
                LocalizedPoly::from_poly(MultiPoly::var(nvars, j), k)
            }
        })
        .collect()
}

fn restricted_hankel(n: usize, k: usize) -> PolyMatrix {
    hankel_from_entries(&restricted_vars(n, k)).expect("odd entry count")
}

fn check_range(n: usize, k: usize) -> Result<()> {
    if n == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "block reduction needs 0 <= k <= n-1, got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// Runs the block-reduction coordinate change for `0 <= k <= n-1`.
pub fn block_reduce(n: usize, k: usize) -> Result<BlockReduction> {
    check_range(n, k)?;
    let nvars = 2 * n + 1;
    let x = restricted_vars(n, k);
    let top = 2 * n - k;

    let p0 = LocalizedPoly::var_power(nvars, k, -1);
    let mut p_seq = vec![p0.clone()];
    for l in 1..=top {
        let mut acc = LocalizedPoly::zero(nvars, k);
        for (i, p) in p_seq.iter().enumerate() {
            acc = acc.checked_add(&p.checked_mul(&x[k + l - i])?)?;
        }
        p_seq.push(acc.checked_mul(&p0)?.neg());
    }

    let zero = LocalizedPoly::zero(nvars, k);
    let p_matrix = PolyMatrix::from_fn(n + 1, n + 1, |i, j| {
        if j >= i {
            p_seq[j - i].clone()
        } else {
            zero.clone()
        }
    })?;
    let h = hankel_from_entries(&x)?;
    let n_matrix = p_matrix.transpose().checked_mul(&h.checked_mul(&p_matrix)?)?;

    let xk = LocalizedPoly::var_power(nvars, k, 1);
    let xk2 = LocalizedPoly::var_power(nvars, k, 2);
    let mut y_coords = vec![xk];
    for (i, p) in p_seq.iter().enumerate().skip(1) {
        let y = p.checked_mul(&xk2)?;
        y_coords.push(if i <= k { y } else { y.neg() });
    }

    Ok(BlockReduction {
        n,
        k,
        p_seq,
        p_matrix,
        n_matrix,
        y_coords,
    })
}

/// The four identities checked by [`verify_block_reduction`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockCase {
    /// (a) top-left block: zero above the antidiagonal, `p_{i+j-k}` below.
    TopLeft,
    /// (b) both off-diagonal blocks vanish.
    OffDiagonal,
    /// (c) bottom-right block is Hankel with entries `-p_{i+j-k}`.
    BottomRight,
    /// (d) `det(p_0^{-2} N) = det H_n`.
    Determinant,
}

impl BlockCase {
    pub fn label(&self) -> &'static str {
        match self {
            BlockCase::TopLeft => "a",
            BlockCase::OffDiagonal => "b",
            BlockCase::BottomRight => "c",
            BlockCase::Determinant => "d",
        }
    }
}

impl fmt::Display for BlockCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BlockCase::TopLeft => "top-left block",
            BlockCase::OffDiagonal => "off-diagonal blocks",
            BlockCase::BottomRight => "bottom-right block",
            BlockCase::Determinant => "determinant",
        };
        write!(f, "({}) {name}", self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseCheck {
    pub case: BlockCase,
    pub passed: bool,
    /// First offending `(row, col)` of `N`, for the entrywise cases.
    pub offending_entry: Option<(usize, usize)>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub k: usize,
    pub checks: Vec<CaseCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CaseCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, case: BlockCase) -> Option<&CaseCheck> {
        self.checks.iter().find(|c| c.case == case)
    }

    /// Converts the first failing case into an error.
    pub fn ensure(&self) -> Result<()> {
        match self.first_failure() {
            None => Ok(()),
            Some(c) => Err(Error::Verification {
                case: c.case.to_string(),
                detail: match (c.offending_entry, &c.detail) {
                    (Some((i, j)), _) => format!("entry ({i}, {j}) of N"),
                    (None, Some(d)) => d.clone(),
                    (None, None) => "identity does not hold".into(),
                },
            }),
        }
    }
}

fn entry_check(
    r: &BlockReduction,
    case: BlockCase,
    cells: impl Iterator<Item = (usize, usize)>,
    expected: impl Fn(usize, usize) -> LocalizedPoly,
) -> CaseCheck {
    for (i, j) in cells {
        let want = expected(i, j);
        if r.n_matrix.get(i, j) != &want {
            return CaseCheck {
                case,
                passed: false,
                offending_entry: Some((i, j)),
                detail: Some(format!(
                    "expected {want}, found {}",
                    r.n_matrix.get(i, j)
                )),
            };
        }
    }
    CaseCheck {
        case,
        passed: true,
        offending_entry: None,
        detail: None,
    }
}

/// Checks the block pattern of `N` and the determinant identity as exact
/// symbolic identities.
pub fn verify_block_reduction(r: &BlockReduction) -> VerificationReport {
    let (n, k) = (r.n, r.k);
    let nvars = r.nvars();
    let zero = LocalizedPoly::zero(nvars, k);
    let block = |lo: usize, hi: usize| {
        (lo..hi).flat_map(move |i| (lo..hi).map(move |j| (i, j)))
    };

    let top_left = entry_check(r, BlockCase::TopLeft, block(0, k + 1), |i, j| {
        if i + j < k {
            zero.clone()
        } else {
            r.p(i + j - k).clone()
        }
    });
    let off = (0..=k)
        .flat_map(|i| (k + 1..=n).flat_map(move |j| [(i, j), (j, i)]));
    let off_diagonal = entry_check(r, BlockCase::OffDiagonal, off, |_, _| zero.clone());
    let bottom_right = entry_check(r, BlockCase::BottomRight, block(k + 1, n + 1), |i, j| {
        r.p(i + j - k).neg()
    });

    let determinant = match determinant_identity(r) {
        Ok(true) => CaseCheck {
            case: BlockCase::Determinant,
            passed: true,
            offending_entry: None,
            detail: None,
        },
        Ok(false) => CaseCheck {
            case: BlockCase::Determinant,
            passed: false,
            offending_entry: None,
            detail: Some("det(p_0^-2 N) differs from det H_n".into()),
        },
        Err(e) => CaseCheck {
            case: BlockCase::Determinant,
            passed: false,
            offending_entry: None,
            detail: Some(e.to_string()),
        },
    };

    VerificationReport {
        n,
        k,
        checks: vec![top_left, off_diagonal, bottom_right, determinant],
    }
}

fn determinant_identity(r: &BlockReduction) -> Result<bool> {
    let xk2 = LocalizedPoly::var_power(r.nvars(), r.k, 2);
    let scaled = r.n_matrix.scale(&xk2)?;
    Ok(scaled.det()? == r.restricted_hankel().det()?)
}

/// The sign `(-1)^{k(k+1)/2}` of the skew-triangular top-left block, which
/// the factorization of `f` picks up.
pub fn factorization_sign(k: usize) -> i64 {
    if (k * (k + 1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `sign(k) y_0^{k+1} det H_{n-k-1}(y_{k+2}, ..., y_{2n-k})` as a localized
/// polynomial.
pub fn reduced_determinant(r: &BlockReduction) -> Result<LocalizedPoly> {
    let inner = hankel_from_entries(&r.y_coords[r.k + 2..])?;
    let monomial = r.y_coords[0].pow(r.k as u32 + 1);
    let signed = monomial.scale(&Rational::from(factorization_sign(r.k)));
    Ok(signed.checked_mul(&inner.det()?)?)
}

/// Whether `f = sign(k) y_0^{k+1} det H_{n-k-1}(y_{k+2}, ...)` holds
/// symbolically on `Y_k`.
pub fn factorization_holds(r: &BlockReduction) -> Result<bool> {
    Ok(reduced_determinant(r)? == r.restricted_hankel().det()?)
}

/// A uniformly random rational `a/b` with `a, b` in `[-20, 20]`, `b != 0`.
pub fn random_small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let a: i64 = rng.gen_range(-20..=20);
    let mut b: i64 = 0;
    while b == 0 {
        b = rng.gen_range(-20..=20);
    }
    Rational::new(a, b).expect("nonzero denominator")
}

/// A random point of `Y_k`: zeros before index `k`, nonzero at `k`.
pub fn random_point_on_stratum<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<Rational> {
    (0..2 * n + 1)
        .map(|j| {
            if j < k {
                return Rational::zero();
            }
            loop {
                let v = random_small_rational(rng);
                if j != k || !v.is_zero() {
                    return v;
                }
            }
        })
        .collect()
}

/// Evaluates both sides of the factorization at `samples` random points of
/// `Y_k`; returns the first point where they differ as an error.
pub fn check_factorization_at_points<R: Rng + ?Sized>(
    r: &BlockReduction,
    samples: usize,
    rng: &mut R,
) -> Result<usize> {
    let size = r.n - r.k;
    for _ in 0..samples {
        let point = random_point_on_stratum(r.n, r.k, rng);
        let lhs = hankel_det_at(&point, r.n + 1)?;
        let y = r
            .y_coords
            .iter()
            .map(|y| y.eval(&point))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let inner: Vec<Vec<Rational>> = (0..size)
            .map(|i| (0..size).map(|j| y[r.k + 2 + i + j].clone()).collect())
            .collect();
        let rhs = y[0].pow(r.k as u32 + 1)
            * rational_det(inner)?
            * Rational::from(factorization_sign(r.k));
        if lhs != rhs {
            let shown: Vec<String> = point.iter().map(ToString::to_string).collect();
            return Err(Error::Verification {
                case: "factorization".into(),
                detail: format!("f = {lhs} but y-side = {rhs} at ({})", shown.join(", ")),
            });
        }
    }
    Ok(samples)
}

fn hankel_det_at(point: &[Rational], size: usize) -> Result<Rational> {
    let m: Vec<Vec<Rational>> = (0..size)
        .map(|i| (0..size).map(|j| point[i + j].clone()).collect())
        .collect();
    Ok(rational_det(m)?)
}

#[derive(Serialize, Deserialize)]
struct BlockReductionJson {
    n: usize,
    k: usize,
    p_seq: Vec<String>,
    p_matrix: Vec<Vec<String>>,
    n_matrix: Vec<Vec<String>>,
    y_coords: Vec<String>,
}

/// Entries are written as `"poly"` or `"(poly) / xk^e"` strings.
impl Serialize for BlockReduction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BlockReductionJson {
            n: self.n,
            k: self.k,
            p_seq: self.p_seq.iter().map(ToString::to_string).collect(),
            p_matrix: self.p_matrix.to_string_rows(),
            n_matrix: self.n_matrix.to_string_rows(),
            y_coords: self.y_coords.iter().map(ToString::to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BlockReduction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = BlockReductionJson::deserialize(deserializer)?;
        let nvars = 2 * raw.n + 1;
        let parse = |s: &String| LocalizedPoly::parse(s, nvars, raw.k).map_err(D::Error::custom);
        let parse_matrix = |rows: &Vec<Vec<String>>| -> std::result::Result<PolyMatrix, D::Error> {
            let r = rows.len();
            let c = rows.first().map_or(0, Vec::len);
            let entries = rows
                .iter()
                .flatten()
                .map(parse)
                .collect::<std::result::Result<Vec<_>, _>>()?;
            PolyMatrix::new(r, c, entries).map_err(D::Error::custom)
        };
        Ok(BlockReduction {
            n: raw.n,
            k: raw.k,
            p_seq: raw.p_seq.iter().map(parse).collect::<std::result::Result<_, _>>()?,
            p_matrix: parse_matrix(&raw.p_matrix)?,
            n_matrix: parse_matrix(&raw.n_matrix)?,
            y_coords: raw.y_coords.iter().map(parse).collect::<std::result::Result<_, _>>()?,
        })
    }
}
