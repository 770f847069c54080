use std::collections::BTreeMap;

use super::Rational;

/// Sparse row vector over the rationals.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Incremental row echelon form: rows are reduced against the pivots seen
/// so far and kept when something survives. Pivots are leading (smallest)
/// column indices.
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl RowEchelon {
    pub fn new() -> Self {
        RowEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `row` against the current pivots, returning the remainder.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        row.retain(|_, v| !v.is_zero());
        let mut start = 0;
        loop {
            let Some((&col, lead)) = row.range(start..).find(|(c, _)| self.pivots.contains_key(c))
            else {
                return row;
            };
            let pivot = &self.pivots[&col];
            let factor = lead.clone();
            for (c, v) in pivot {
                let delta = &factor * v;
                let entry = row.entry(*c).or_insert_with(Rational::zero);
                *entry -= &delta;
                if entry.is_zero() {
                    row.remove(c);
                }
            }
            start = col + 1;
        }
    }

    /// Adds a row; returns whether the rank went up.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((&lead, lead_value)) = row.iter().next() else {
            return false;
        };
        let inv = lead_value.recip().expect("nonzero lead");
        let normalized: SparseRow = row.iter().map(|(&c, v)| (c, v * &inv)).collect();
        self.pivots.insert(lead, normalized);
        true
    }
}

/// Rank of a list of sparse rows.
pub fn sparse_rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = RowEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(c, v)| (c, Rational::from(v))).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            row(&[(0, 1), (1, 2)]),
            row(&[(0, 2), (1, 4)]),
            row(&[(1, 1), (2, 1)]),
            row(&[(0, 1), (1, 3), (2, 1)]),
        ];
        assert_eq!(sparse_rank(rows), 2);
    }

    #[test]
    fn reduction_against_pivots() {
        let mut e = RowEchelon::new();
        assert!(e.insert(row(&[(1, 3), (4, 1)])));
        assert!(e.insert(row(&[(0, 1), (1, 1)])));
        // (0,1)+(1,1) reduced by pivot at column 0 leaves nothing new
        let r = e.reduce(row(&[(0, 2), (1, 2)]));
        assert!(r.is_empty());
        assert_eq!(e.pivot_columns().collect::<Vec<_>>(), vec![0, 1]);
        assert!(!e.insert(row(&[])));
    }
}
