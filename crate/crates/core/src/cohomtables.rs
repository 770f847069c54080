//! Numerical cohomology tables: intersection cohomology of secant varieties
//! of a genus-`g` curve, symmetric products, singular cohomology of `Sec^2`,
//! the monodromy eigenvalues of `F_n`, and the eigenvalue/support table of
//! the nearby cycles of `det H_n`.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::compositions::{binomial, divisors};
use crate::error::{Error, Result};
use crate::hodge::{milnor_betti, BettiTable};

/// `e^{2 pi i p / q}` with `0 <= p < q` and `gcd(p, q) = 1`.
///
/// Ordered by `q`, then `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRoot")]
pub struct RootOfUnity {
    p: u64,
    q: u64,
}

#[derive(Deserialize)]
struct RawRoot {
    p: u64,
    q: u64,
}

impl TryFrom<RawRoot> for RootOfUnity {
    type Error = Error;
    fn try_from(r: RawRoot) -> Result<Self> {
        RootOfUnity::new(r.p, r.q)
    }
}

impl RootOfUnity {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p >= q || p.gcd(&q) != 1 {
            return Err(Error::InvalidArgument(format!(
                "e^(2 pi i {p}/{q}) is not a reduced root of unity"
            )));
        }
        Ok(RootOfUnity { p, q })
    }

    pub fn one() -> Self {
        RootOfUnity { p: 0, q: 1 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The order of the root.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_one(&self) -> bool {
        self.q == 1
    }

    /// All primitive `q`-th roots, by increasing `p`.
    pub fn primitive(q: u64) -> Vec<RootOfUnity> {
        (0..q)
            .filter(|p| p.gcd(&q) == 1)
            .map(|p| RootOfUnity { p, q })
            .collect()
    }

    pub fn to_latex(&self) -> String {
        match (self.p, self.q) {
            (0, 1) => "1".into(),
            (1, 2) => "-1".into(),
            (p, q) => format!("e^{{2\\pi i \\cdot {p}/{q}}}"),
        }
    }
}

impl Ord for RootOfUnity {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.p).cmp(&(other.q, other.p))
    }
}

impl PartialOrd for RootOfUnity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p, self.q) {
            (0, 1) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (p, q) => write!(f, "e^(2pi i*{p}/{q})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusParams {
    pub g: u32,
}

impl GenusParams {
    pub fn h1_dim(&self) -> u32 {
        2 * self.g
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummandKind {
    ConstantSheaf,
    #[serde(rename = "ic_of_rank1_local_system")]
    IcOfRank1LocalSystem,
}

/// One eigenvalue summand of the nearby cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearbyCycleSummand {
    pub eigenvalue: RootOfUnity,
    /// The support is `X_k`; `X_0` is the origin.
    pub support_index: usize,
    pub rank: u32,
    pub weight: u32,
    pub kind: SummandKind,
}

/// An eigenvalue of the monodromy on `H^*(F_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenEntry {
    pub eigenvalue: RootOfUnity,
    /// Index in the Milnor Betti table.
    pub degree: usize,
    pub cohomological_degree: usize,
    pub multiplicity: u32,
}

/// `sum_i C(2g, j - 2i)` over `max(j-k, 0) <= 2i <= j`.
fn low_ih(g: u32, k: u32, j: u32) -> u64 {
    let lo = j.saturating_sub(k);
    (0..=j / 2)
        .filter(|i| 2 * i >= lo)
        .map(|i| binomial(2 * g as i64, (j - 2 * i) as i64) as u64)
        .sum()
}

/// Intersection cohomology Betti numbers of `Sec^k` of a genus-`g` curve, in
/// degrees `0..=4k-2`.
pub fn ih_betti(g: u32, k: u32) -> Result<BettiTable> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let top = 4 * k - 2;
    let degrees = (0..=top)
        .map(|j| if j < 2 * k { low_ih(g, k, j) } else { low_ih(g, k, top - j) })
        .collect();
    let mut table = BettiTable::new(degrees);
    for j in 0..=top as usize {
        table.annotation_mut(j).weight = Some(j as i64);
    }
    Ok(table)
}

/// `dim H^j(C^{(k)}) = sum_{i >= 0} C(2g, j - 2i)`, valid for `j <= k`.
pub fn sym_power_betti(g: u32, k: u32, j: u32) -> Result<u64> {
    if j > k {
        return Err(Error::OutOfRange(format!(
            "degree {j} is above the range j <= k = {k} where the formula holds"
        )));
    }
    Ok((0..=j / 2)
        .map(|i| binomial(2 * g as i64, (j - 2 * i) as i64) as u64)
        .sum())
}

/// Singular cohomology of `Sec^2` of a genus-`g` curve, degrees `0..=6`.
pub fn sec2_singular_betti(g: u32) -> BettiTable {
    let g64 = g as u64;
    let two_g = 2 * g as i64;
    let degrees = vec![
        1,
        0,
        1,
        g64 * (2 * g64 + 1),
        binomial(two_g, 2) as u64 + 1,
        2 * g64,
        1,
    ];
    let mut table = BettiTable::new(degrees);
    for j in 0..=6 {
        let a = table.annotation_mut(j);
        a.weight = Some(if j == 3 { 2 } else { j as i64 });
        if j == 3 {
            a.label = Some("Sym^2 H^1(C)".into());
        }
    }
    table
}

fn check_n(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

/// For each `d | n+1`, the primitive `(n+1)/d`-th roots of unity, each with
/// multiplicity one at index `n+1-d`. Sorted by degree, then eigenvalue.
pub fn monodromy_eigentable(n: usize) -> Result<Vec<EigenEntry>> {
    check_n(n)?;
    let m = n + 1;
    let mut out = Vec::new();
    for d in divisors(m).into_iter().rev() {
        for root in RootOfUnity::primitive((m / d) as u64) {
            out.push(EigenEntry {
                eigenvalue: root,
                degree: m - d,
                cohomological_degree: 2 * (m - d),
                multiplicity: 1,
            });
        }
    }
    Ok(out)
}

/// Eigenvalue summands of the nearby cycles of `det H_n`.
pub fn nearby_vanishing_decomposition(n: usize) -> Result<Vec<NearbyCycleSummand>> {
    check_n(n)?;
    let weight = 2 * n as u32;
    let mut out = vec![NearbyCycleSummand {
        eigenvalue: RootOfUnity::one(),
        support_index: n,
        rank: 1,
        weight,
        kind: SummandKind::ConstantSheaf,
    }];
    for q in 2..=n + 1 {
        for root in RootOfUnity::primitive(q as u64) {
            out.push(NearbyCycleSummand {
                eigenvalue: root,
                support_index: n + 1 - q,
                rank: 1,
                weight,
                kind: SummandKind::IcOfRank1LocalSystem,
            });
        }
    }
    Ok(out)
}

/// The stalk at the origin of the summands whose eigenvalue order divides
/// `n+1`, placed at the degree where they appear in `H^*(F_n)`.
pub fn restrict_to_origin(summands: &[NearbyCycleSummand], n: usize) -> Vec<EigenEntry> {
    let m = n + 1;
    let mut out: Vec<EigenEntry> = summands
        .iter()
        .filter(|s| m.is_multiple_of(s.eigenvalue.q() as usize))
        .map(|s| {
            let degree = m - m / s.eigenvalue.q() as usize;
            EigenEntry {
                eigenvalue: s.eigenvalue,
                degree,
                cohomological_degree: 2 * degree,
                multiplicity: s.rank,
            }
        })
        .collect();
    out.sort_by_key(|a| (a.degree, a.eigenvalue));
    out
}

/// `milnor_betti(n)` with each degree annotated by its monodromy eigenvalues.
pub fn annotated_milnor_betti(n: usize) -> Result<BettiTable> {
    let mut table = milnor_betti(n)?;
    for e in monodromy_eigentable(n)? {
        table.annotation_mut(e.degree).eigenvalues.push(e.eigenvalue);
    }
    Ok(table)
}

/// A `tabular` with a degree row and a dimension row, degrees ascending.
pub fn betti_latex(table: &BettiTable) -> String {
    let cols = table.len();
    let mut out = format!("\\begin{{tabular}}{{l{}}}\n", "|c".repeat(cols.min(1)) + &"c".repeat(cols.saturating_sub(1)));
    let header: Vec<String> = (0..cols).map(|j| j.to_string()).collect();
    out.push_str(&row("$j$", &header));
    if cols > 0 {
        out.push_str("\\hline\n");
        let dims: Vec<String> = table.degrees.iter().map(|b| b.to_string()).collect();
        out.push_str(&row("$\\dim$", &dims));
    }
    out.push_str("\\end{tabular}\n");
    out
}

fn row(first: &str, cells: &[String]) -> String {
    let mut r = first.to_string();
    for c in cells {
        r.push_str(" & ");
        r.push_str(c);
    }
    r.push_str(" \\\\\n");
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity() {
        assert!(RootOfUnity::new(2, 4).is_err());
        assert!(RootOfUnity::new(3, 3).is_err());
        assert_eq!(RootOfUnity::primitive(4).len(), 2);
        assert_eq!(RootOfUnity::primitive(1), vec![RootOfUnity::one()]);
        let r = RootOfUnity::new(1, 3).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"p":1,"q":3}"#);
        assert!(serde_json::from_str::<RootOfUnity>(r#"{"p":2,"q":4}"#).is_err());
        assert!(RootOfUnity::new(1, 2).unwrap() < r);
    }

    #[test]
    fn ih_examples() {
        for k in 1..=5 {
            let t = ih_betti(0, k).unwrap();
            assert_eq!(t.len(), 4 * k as usize - 1);
            for (j, &b) in t.degrees.iter().enumerate() {
                assert_eq!(b, u64::from(j % 2 == 0), "k={k} j={j}");
            }
        }
        assert_eq!(ih_betti(1, 2).unwrap().degrees, vec![1, 2, 2, 2, 2, 2, 1]);
        assert_eq!(ih_betti(2, 1).unwrap().degrees, vec![1, 4, 1]);
        assert!(ih_betti(1, 0).is_err());
    }

    #[test]
    fn symmetric_products() {
        assert_eq!(sym_power_betti(3, 4, 0).unwrap(), 1);
        assert_eq!(sym_power_betti(1, 3, 2).unwrap(), 2);
        assert!(sym_power_betti(1, 2, 3).is_err());
        for g in 0..4 {
            for k in 1..5 {
                let t = ih_betti(g, k).unwrap();
                for j in 0..=k {
                    assert_eq!(sym_power_betti(g, k, j).unwrap(), t.get(j as usize));
                }
            }
        }
    }

    #[test]
    fn sec2_tables() {
        assert_eq!(sec2_singular_betti(0).degrees, vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(sec2_singular_betti(1).get(3), 3);
        assert_eq!(sec2_singular_betti(2).get(3), 10);
        assert_eq!(sec2_singular_betti(2).annotations[3].weight, Some(2));
        assert_eq!(sec2_singular_betti(2).annotations[4].weight, Some(4));
    }

    #[test]
    fn eigentables() {
        let t = monodromy_eigentable(2).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!((t[0].eigenvalue, t[0].degree), (RootOfUnity::one(), 0));
        assert_eq!(t[1].eigenvalue, RootOfUnity::new(1, 3).unwrap());
        assert_eq!((t[2].eigenvalue.p(), t[2].degree), (2, 2));

        let t3 = monodromy_eigentable(3).unwrap();
        let pairs: Vec<(u64, u64, usize)> = t3
            .iter()
            .map(|e| (e.eigenvalue.p(), e.eigenvalue.q(), e.degree))
            .collect();
        assert_eq!(pairs, vec![(0, 1, 0), (1, 2, 2), (1, 4, 3), (3, 4, 3)]);
    }

    #[test]
    fn nearby_cycles() {
        let n1 = nearby_vanishing_decomposition(1).unwrap();
        assert_eq!(n1.len(), 2);
        assert_eq!(n1[0].kind, SummandKind::ConstantSheaf);
        assert_eq!((n1[1].eigenvalue.to_string(), n1[1].support_index), ("-1".into(), 0));

        let n2 = nearby_vanishing_decomposition(2).unwrap();
        let supports: Vec<(u64, usize)> = n2.iter().map(|s| (s.eigenvalue.q(), s.support_index)).collect();
        assert_eq!(supports, vec![(1, 2), (2, 1), (3, 0), (3, 0)]);
        assert!(n2.iter().all(|s| s.weight == 4 && s.rank == 1));

        for n in 1..8 {
            let restricted = restrict_to_origin(&nearby_vanishing_decomposition(n).unwrap(), n);
            assert_eq!(restricted, monodromy_eigentable(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn latex_tables() {
        let empty = betti_latex(&BettiTable::default());
        assert_eq!(empty, "\\begin{tabular}{l}\n$j$ \\\\\n\\end{tabular}\n");
        let t = betti_latex(&milnor_betti(2).unwrap());
        assert!(t.starts_with("\\begin{tabular}{l|ccc}\n"));
        assert!(t.contains("$\\dim$ & 1 & 0 & 2 \\\\"));
        assert!(t.is_ascii());
    }
}
