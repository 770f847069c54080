//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_integer::Integer;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::SeedableRng;

use secant_core::cohomtables::{
    ih_betti, monodromy_eigentable, nearby_vanishing_decomposition, restrict_to_origin,
    sym_power_betti, RootOfUnity,
};
use secant_core::compositions::{count_coprime, count_coprime_by_length, enumerate_compositions};
use secant_core::drk::{
    d_f, homogeneous_class, n2_eigenvectors, truncated_drk_dims, univariate_basis,
    univariate_drk_cohomology, ExtForm,
};
use secant_core::exactalg::{MultiPoly, Rational};
use secant_core::hankel::{
    block_reduce, check_factorization_at_points, factorization_sign, verify_block_reduction,
};
use secant_core::hodge::{milnor_betti, milnor_hodge_bruteforce, milnor_hodge_closed};
use secant_core::strata::torus_normal_form;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

/// All compositions of `n` by recursion on the first part.
fn compositions_oracle(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions_oracle(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn gcd_all(parts: &[usize]) -> usize {
    parts.iter().fold(0, |g, &p| g.gcd(&p))
}

fn phi_oracle(m: usize) -> u64 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u64
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for n in 1..=14usize {
        let enumerated = enumerate_compositions(n).map_err(|e| e.to_string())?;
        ensure(enumerated.len() == 1 << (n - 1), || format!("n={n}: {} compositions", enumerated.len()))?;
        let oracle = compositions_oracle(n);
        let ours: BTreeSet<Vec<usize>> = enumerated.iter().map(|c| c.parts().to_vec()).collect();
        let theirs: BTreeSet<Vec<usize>> = oracle.iter().cloned().collect();
        ensure(ours == theirs, || format!("n={n}: enumeration differs from recursion"))?;
        let coprime = oracle.iter().filter(|p| gcd_all(p) == 1).count() as i128;
        ensure(count_coprime(n).unwrap() == coprime, || format!("g({n}) mismatch"))?;
        for len in 1..=n {
            let brute = oracle.iter().filter(|p| p.len() == len && gcd_all(p) == 1).count() as i128;
            ensure(count_coprime_by_length(n, len).unwrap() == brute, || {
                format!("g_{len}({n}) mismatch")
            })?;
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("n <= 14 in {:.2?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for n in 1..=16 {
        let brute = milnor_hodge_bruteforce(n).map_err(|e| e.to_string())?;
        let closed = milnor_hodge_closed(n).map_err(|e| e.to_string())?;
        ensure(brute == closed, || format!("n={n}: {brute} != {closed}"))?;
        ensure(closed.eval(1) == n as i64 + 1, || format!("n={n}: h(1) = {}", closed.eval(1)))?;
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("n <= 16 in {:.2?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    for n in 1..=4 {
        for k in 0..n {
            let r = block_reduce(n, k).map_err(|e| e.to_string())?;
            verify_block_reduction(&r)
                .ensure()
                .map_err(|e| format!("n={n} k={k}: {e}"))?;
        }
    }
    let mut rng = StdRng::seed_from_u64(20_260_101);
    let mut pairs = 0;
    for n in 1..=8 {
        for k in 0..n {
            let r = block_reduce(n, k).map_err(|e| e.to_string())?;
            check_factorization_at_points(&r, 100, &mut rng).map_err(|e| format!("n={n} k={k}: {e}"))?;
            pairs += 1;
        }
    }
    ensure(factorization_sign(1) == -1, || "sign convention changed".into())?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "symbolic n <= 4; 100 points for each of {pairs} (n,k) with n <= 8, sign (-1)^(k(k+1)/2); {:.2?}",
        start.elapsed()
    ))
}

fn criterion_4() -> Outcome {
    let expected: [(usize, Vec<u64>); 3] = [
        (2, vec![1, 0, 2]),
        (3, vec![1, 0, 1, 2]),
        (5, vec![1, 0, 0, 1, 2, 2]),
    ];
    for (n, want) in expected {
        let got = milnor_betti(n).map_err(|e| e.to_string())?.degrees;
        ensure(got == want, || format!("n={n}: {got:?}"))?;
        let m = n + 1;
        let mut oracle = vec![0u64; m];
        for d in (1..=m).filter(|d| m % d == 0) {
            oracle[m - d] = phi_oracle(m / d);
        }
        ensure(got == oracle, || format!("n={n}: totient formula gives {oracle:?}"))?;
    }
    Ok("(1,0,2), (1,0,1,2), (1,0,0,1,2,2)".into())
}

fn criterion_5() -> Outcome {
    let (a1, a2) = n2_eigenvectors().map_err(|e| e.to_string())?;
    let top = vec![0, 1, 2, 3, 4];
    let p = |s: &str| MultiPoly::parse(s, 5).unwrap();
    let alpha1 = ExtForm::from_terms(5, 5, [(top.clone(), p("2*x1*x3 - 2*x2^2"))], None).unwrap();
    let alpha2 = ExtForm::from_terms(5, 5, [(top, p("2*x1*x2*x3 - 2*x2^3"))], None).unwrap();
    let c1 = a1.ratio_to(&alpha1).ok_or_else(|| format!("alpha_1 not proportional: {a1}"))?;
    let c2 = a2.ratio_to(&alpha2).ok_or_else(|| format!("alpha_2 not proportional: {a2}"))?;
    let f = secant_core::hankel::hankel_determinant(2);
    for (name, a) in [("alpha_1", &a1), ("alpha_2", &a2)] {
        ensure(d_f(&f, a).unwrap().is_zero(), || format!("{name} not closed"))?;
    }
    let classes = (
        homogeneous_class(&a1, 3).unwrap().residue,
        homogeneous_class(&a2, 3).unwrap().residue,
    );
    ensure(classes == (1, 2), || format!("classes {classes:?}"))?;
    Ok(format!("scalars {c1} and {c2}, classes (1, 2) mod 3"))
}

fn criterion_6() -> Outcome {
    for m in 1..=10usize {
        for log in [false, true] {
            let basis = univariate_drk_cohomology(m, log).map_err(|e| e.to_string())?;
            let want = m + usize::from(log);
            ensure(basis.len() == want, || format!("m={m} log={log}: dim {}", basis.len()))?;
            let low = univariate_basis(m, log, 2 * (m + 1)).unwrap();
            let high = univariate_basis(m, log, 5 * (m + 1)).unwrap();
            ensure(low == basis && high == basis, || format!("m={m} log={log}: unstable"))?;
        }
        // the same count from the graded truncation, summed over classes
        let g = MultiPoly::var(1, 0).pow(m as u32 + 1);
        let modulus = m as u32 + 1;
        let mut h1 = 0;
        for a in 0..modulus {
            let t = truncated_drk_dims(&g, modulus, a, 3 * (m + 1)).unwrap();
            ensure(t.stabilized, || format!("m={m} class {a} not stabilized"))?;
            ensure(t.dims[0] == 0, || format!("m={m}: H^0 nonzero"))?;
            h1 += t.dims[1];
        }
        ensure(h1 == m, || format!("m={m}: graded H^1 total {h1}"))?;
    }
    Ok("dims m and m+1 for m <= 10, stable across truncations".into())
}

fn criterion_7() -> Outcome {
    for k in 1..=8 {
        let t = ih_betti(0, k).unwrap();
        let want: Vec<u64> = (0..=4 * k - 2).map(|j| u64::from(j % 2 == 0)).collect();
        ensure(t.degrees == want, || format!("g=0 k={k}: {:?}", t.degrees))?;
    }
    for g in 0..=4 {
        for k in 1..=6 {
            let t = ih_betti(g, k).unwrap();
            ensure(t.is_palindromic(), || format!("g={g} k={k} not palindromic"))?;
            for j in 0..=k {
                let s = sym_power_betti(g, k, j).unwrap();
                ensure(t.get(j as usize) == s, || format!("g={g} k={k} j={j}"))?;
            }
        }
    }
    Ok("P^1 tables k <= 8, duality g <= 4 k <= 6, symmetric products j <= k".into())
}

fn criterion_8() -> Outcome {
    for n in 1..=12usize {
        let table = monodromy_eigentable(n).unwrap();
        let betti = milnor_betti(n).unwrap();
        let mut counts = vec![0u64; n + 1];
        for e in &table {
            counts[e.degree] += e.multiplicity as u64;
        }
        ensure(counts == betti.degrees, || format!("n={n}: {counts:?} vs {:?}", betti.degrees))?;

        let summands = nearby_vanishing_decomposition(n).unwrap();
        ensure(restrict_to_origin(&summands, n) == table, || format!("n={n}: origin restriction"))?;

        let got: BTreeSet<RootOfUnity> = summands.iter().map(|s| s.eigenvalue).collect();
        ensure(got.len() == summands.len(), || format!("n={n}: repeated eigenvalue"))?;
        let mut want = BTreeSet::new();
        for q in 1..=n as u64 + 1 {
            for p in 0..q {
                if p.gcd(&q) == 1 {
                    want.insert(RootOfUnity::new(p, q).unwrap());
                }
            }
        }
        ensure(got == want, || format!("n={n}: eigenvalue set"))?;
    }
    Ok("n <= 12".into())
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn criterion_9() -> Outcome {
    run_property(
        200,
        (2usize..=5).prop_flat_map(|v| (common::homogeneous_poly(v, 3), common::form(v))),
        |(f, w)| {
            let twice = d_f(&f, &d_f(&f, &w).unwrap()).unwrap();
            prop_assert!(twice.is_zero(), "D_f^2 w = {}", twice);
            Ok(())
        },
    )
    .map_err(|e| format!("D_f^2: {e}"))?;

    run_property(500, proptest::collection::vec(1u64..=50, 1..=6), |e| {
        let u = torus_normal_form(&e).unwrap();
        prop_assert_eq!(u.determinant().abs(), 1);
        let pulled: Vec<i64> = e.iter().map(|&x| x as i64).collect();
        prop_assert_eq!(u.pullback(), pulled);
        prop_assert_eq!(u.exponent, e.iter().fold(0u64, |g, &x| g.gcd(&x)));
        Ok(())
    })
    .map_err(|e| format!("torus normal form: {e}"))?;

    let p = || common::poly(3, 4, 3);
    run_property(500, (p(), p(), p()), |(a, b, c)| {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &MultiPoly::one(3), a.clone());
        prop_assert_eq!(&a + &MultiPoly::zero(3), a.clone());
        let two = Rational::from(2);
        prop_assert_eq!(a.scale(&two), &a + &a);
        Ok(())
    })
    .map_err(|e| format!("ring axioms: {e}"))?;

    Ok("D_f^2 = 0 (200), torus normal form (500), ring axioms (500)".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("composition combinatorics", criterion_1),
        ("Hodge polynomial identity", criterion_2),
        ("block reduction", criterion_3),
        ("Milnor Betti tables", criterion_4),
        ("eigenvector pipeline", criterion_5),
        ("univariate de Rham-Koszul", criterion_6),
        ("IH tables", criterion_7),
        ("eigenvalue/decomposition consistency", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg)
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
