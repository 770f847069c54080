use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use serde_json::Value;

use secant_core::cli::{
    Envelope, EigenvectorOutput, HodgeOutput, MonodromyOutput, NearbyOutput, StrataOutput,
    VerifyOutput,
};
use secant_core::cohomtables::{
    ih_betti, monodromy_eigentable, nearby_vanishing_decomposition, sec2_singular_betti,
};
use secant_core::drk::n2_eigenvectors;
use secant_core::hankel::{block_reduce, BlockReduction};
use secant_core::hodge::{gbundle_hodge, milnor_hodge_closed, BettiTable};
use secant_core::strata::stratify;

fn secant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = secant(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn parse<T: DeserializeOwned>(args: &[&str]) -> T {
    let env: Envelope<T> = serde_json::from_str(&stdout(args)).unwrap();
    assert_eq!(env.schema, "1");
    env.payload
}

#[test]
fn golden_outputs() {
    let cases: [(&[&str], &str); 5] = [
        (&["strata", "-n", "2"], include_str!("golden/strata_n2.json")),
        (&["--format", "table", "strata", "-n", "2"], include_str!("golden/strata_n2.txt")),
        (&["betti", "--milnor", "-n", "2"], include_str!("golden/betti_milnor_n2.json")),
        (&["--format", "latex", "betti", "--milnor", "-n", "2"], include_str!("golden/betti_milnor_n2.tex")),
        (&["ih", "-g", "0", "-k", "3", "--format", "table"], include_str!("golden/ih_g0_k3.txt")),
    ];
    for (args, expected) in cases {
        assert_eq!(stdout(args), expected, "{args:?}");
    }
}

#[test]
fn milnor_betti_json_has_the_expected_degrees() {
    let v: Value = serde_json::from_str(&stdout(&["betti", "--milnor", "-n", "2", "--format", "json"])).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["degrees"], serde_json::json!([1, 0, 2]));
}

#[test]
fn outputs_are_byte_identical_across_runs_and_job_counts() {
    let commands: [&[&str]; 5] = [
        &["strata", "-n", "6"],
        &["hodge", "-n", "9", "--bruteforce"],
        &["monodromy", "-n", "11"],
        &["eigenvectors"],
        &["blockreduce", "-n", "4", "-k", "2"],
    ];
    for args in commands {
        let first = secant(args).stdout;
        assert_eq!(first, secant(args).stdout, "{args:?}");
        let mut with_jobs = vec!["--jobs", "1"];
        with_jobs.extend_from_slice(args);
        assert_eq!(first, secant(&with_jobs).stdout, "{args:?} with one job");
    }
}

#[test]
fn json_round_trips_into_library_types() {
    assert_eq!(parse::<StrataOutput>(&["strata", "-n", "4"]).strata, stratify(4).unwrap());

    let h: HodgeOutput = parse(&["hodge", "-n", "5"]);
    assert_eq!(h.polynomial, milnor_hodge_closed(5).unwrap());
    assert_eq!(h.text, h.polynomial.to_string());
    let g: HodgeOutput = parse(&["hodge", "-n", "5", "-d", "3", "--gbundle"]);
    assert_eq!((g.d, g.polynomial), (Some(3), gbundle_hodge(5, 3).unwrap()));

    let milnor: BettiTable = parse(&["betti", "--milnor", "-n", "5"]);
    assert_eq!(milnor, secant_core::cohomtables::annotated_milnor_betti(5).unwrap());
    let sec2: BettiTable = parse(&["betti", "--sec2", "-g", "2"]);
    assert_eq!(sec2, sec2_singular_betti(2));
    let ih: BettiTable = parse(&["ih", "-g", "2", "-k", "3"]);
    assert_eq!(ih, ih_betti(2, 3).unwrap());

    assert_eq!(parse::<MonodromyOutput>(&["monodromy", "-n", "7"]).eigenvalues, monodromy_eigentable(7).unwrap());
    assert_eq!(parse::<NearbyOutput>(&["nearby", "-n", "7"]).summands, nearby_vanishing_decomposition(7).unwrap());

    let e: EigenvectorOutput = parse(&["eigenvectors"]);
    let (a1, a2) = n2_eigenvectors().unwrap();
    assert_eq!((e.alpha_1, e.alpha_2, e.classes, e.modulus), (a1, a2, vec![1, 2], 3));

    let r: BlockReduction = parse(&["blockreduce", "-n", "3", "-k", "1"]);
    assert_eq!(r, block_reduce(3, 1).unwrap());

    let v: VerifyOutput = parse(&["verify", "-n", "3", "-k", "2"]);
    assert!(v.report.passed() && v.random_points_passed);
    assert_eq!(v.random_points, 100);
}

#[test]
fn latex_output_is_ascii() {
    for args in [
        &["--format", "latex", "monodromy", "-n", "5"][..],
        &["--format", "latex", "nearby", "-n", "4"],
        &["--format", "latex", "eigenvectors"],
        &["--format", "latex", "hodge", "-n", "3"],
        &["--format", "latex", "strata", "-n", "3"],
    ] {
        let s = stdout(args);
        assert!(s.is_ascii() && !s.is_empty(), "{args:?}");
    }
}

#[test]
fn argument_errors_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &["strata"],
        &["strata", "-n", "99"],
        &["hodge", "-n", "3", "-d", "5"],
        &["hodge", "-n", "3", "--gbundle"],
        &["betti", "--milnor", "--sec2", "-n", "2", "-g", "1"],
        &["blockreduce", "-n", "3", "-k", "3"],
        &["verify", "-n", "8", "-k", "1"],
        &["--format", "yaml", "strata", "-n", "2"],
    ] {
        let out = secant(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}
