#![allow(dead_code)]

use proptest::collection::vec;
use proptest::prelude::*;
use secant_core::drk::ExtForm;
use secant_core::exactalg::{LocalizedPoly, Monomial, MultiPoly, PolyMatrix, Rational};

pub fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(a, b)| Rational::new(a, b).unwrap())
}

pub fn poly(nvars: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
    vec((vec(0..=max_exp, nvars), rational()), 0..=max_terms).prop_map(move |terms| {
        MultiPoly::from_terms(
            nvars,
            terms.into_iter().map(|(e, c)| (Monomial::from_dense(&e), c)),
        )
        .unwrap()
    })
}

/// Exponent vectors of total degree `deg` in `nvars` variables.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![deg]];
    }
    (0..=deg)
        .flat_map(|first| {
            monomials_of_degree(nvars - 1, deg - first)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// A nonzero homogeneous polynomial of degree `deg`.
pub fn homogeneous_poly(nvars: usize, deg: u32) -> impl Strategy<Value = MultiPoly> {
    let basis = monomials_of_degree(nvars, deg);
    let n = basis.len();
    (vec(-4i64..=4, n), 0..n).prop_map(move |(coeffs, forced)| {
        MultiPoly::from_terms(
            nvars,
            basis.iter().zip(&coeffs).enumerate().map(|(i, (e, &c))| {
                let c = if i == forced && c == 0 { 1 } else { c };
                (Monomial::from_dense(e), Rational::from(c))
            }),
        )
        .unwrap()
    })
}

/// A form of degree `k` with up to three terms.
pub fn form(nvars: usize) -> impl Strategy<Value = ExtForm> {
    (0..=nvars).prop_flat_map(move |k| {
        vec((proptest::sample::subsequence((0..nvars).collect::<Vec<_>>(), k), poly(nvars, 3, 3)), 0..=3)
            .prop_map(move |terms| ExtForm::from_terms(nvars, k, terms, None).unwrap())
    })
}

pub fn matrix(size: usize, nvars: usize) -> impl Strategy<Value = PolyMatrix> {
    vec(poly(nvars, 3, 2), size * size).prop_map(move |entries| {
        PolyMatrix::from_polys(size, size, entries, 0).unwrap()
    })
}

pub fn as_poly(l: &LocalizedPoly) -> MultiPoly {
    l.as_polynomial().expect("polynomial").clone()
}
