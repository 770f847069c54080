//! The `secant` command line: every computation as JSON, a plain text table,
//! or a LaTeX fragment.

use std::io::Write;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::cohomtables::{
    annotated_milnor_betti, betti_latex, ih_betti, monodromy_eigentable,
    nearby_vanishing_decomposition, sec2_singular_betti, EigenEntry, NearbyCycleSummand,
    SummandKind,
};
use crate::drk::{homogeneous_class, n2_eigenvectors, ExtForm};
use crate::error::{Error, Result};
use crate::hankel::{
    block_reduce, check_factorization_at_points, verify_block_reduction, BlockReduction,
    VerificationReport,
};
use crate::hodge::{
    gbundle_bruteforce, gbundle_hodge, milnor_hodge_bruteforce, milnor_hodge_closed,
    quotient_hodge, BettiTable, HodgePoly, MAX_BRUTEFORCE_N,
};
use crate::strata::{stratify, StratumDescriptor};

pub const SCHEMA_VERSION: &str = "1";

const MAX_STRATA_N: usize = 16;
const MAX_TABLE_N: usize = 200;
const MAX_GENUS: u32 = 30;
const MAX_SECANT_K: u32 = 60;
const MAX_BLOCK_N: usize = 10;
const MAX_VERIFY_N: usize = 7;
const VERIFY_SAMPLES: usize = 100;

#[derive(Parser, Debug)]
#[command(name = "secant", version, about = "Invariants of Hankel determinants and secant varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads for internal parallelism; never changes the output.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Latex,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Strata of C^{2n+1} indexed by compositions of n+1.
    Strata {
        #[arg(short)]
        n: usize,
    },
    /// Hodge polynomial of the Milnor fiber, its quotients and C*-bundles.
    Hodge(HodgeArgs),
    /// Betti numbers of the Milnor fiber or of Sec^2.
    Betti(BettiArgs),
    /// Intersection cohomology of Sec^k of a genus-g curve.
    Ih {
        #[arg(short)]
        g: u32,
        #[arg(short)]
        k: u32,
    },
    /// Monodromy eigenvalues on the Milnor fiber cohomology.
    Monodromy {
        #[arg(short)]
        n: usize,
    },
    /// Eigenvalue summands of the nearby cycles.
    Nearby {
        #[arg(short)]
        n: usize,
    },
    /// The two top forms for n = 2.
    Eigenvectors,
    /// Block reduction of H_n on Y_k.
    Blockreduce {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
    },
    /// Symbolic and random-point checks of the block reduction.
    Verify {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
    },
}

#[derive(Args, Debug)]
pub struct HodgeArgs {
    #[arg(short)]
    pub n: usize,
    /// Quotient by the order-d subgroup of the monodromy.
    #[arg(short)]
    pub d: Option<usize>,
    /// The C*-bundle G_{n,d} instead of the quotient (needs -d).
    #[arg(long, requires = "d")]
    pub gbundle: bool,
    /// Sum over strata instead of the closed formula.
    #[arg(long)]
    pub bruteforce: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("which").required(true).args(["milnor", "sec2"])))]
pub struct BettiArgs {
    #[arg(long, requires = "n")]
    pub milnor: bool,
    #[arg(long, requires = "g")]
    pub sec2: bool,
    #[arg(short, requires = "milnor")]
    pub n: Option<usize>,
    #[arg(short, requires = "sec2")]
    pub g: Option<u32>,
}

/// Output wrapper carrying the schema version next to the payload fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: String,
    #[serde(flatten)]
    pub payload: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataOutput {
    pub n: usize,
    pub strata: Vec<StratumDescriptor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeOutput {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub space: String,
    pub method: String,
    pub polynomial: HodgePoly,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyOutput {
    pub n: usize,
    pub eigenvalues: Vec<EigenEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearbyOutput {
    pub n: usize,
    pub summands: Vec<NearbyCycleSummand>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenvectorOutput {
    pub alpha_1: ExtForm,
    pub alpha_2: ExtForm,
    pub classes: Vec<u32>,
    pub modulus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub report: VerificationReport,
    pub random_points: usize,
    pub random_points_passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_point_failure: Option<String>,
}

/// The rendered result of a command.
enum Rendered {
    Ok(String),
    /// Output to show, but the command failed verification.
    Failed(String),
}

/// Parses `args` (program name first), runs the command and writes to
/// `out` / `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            let _ = writeln!(err, "error: --jobs must be at least 1");
            return 2;
        }
        // Only the first configuration in a process takes effect.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match execute(&cli) {
        Ok(Rendered::Ok(text)) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Ok(Rendered::Failed(text)) => {
            let _ = out.write_all(text.as_bytes());
            let _ = writeln!(err, "error: verification failed");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// 2 for bad arguments, 1 for everything that went wrong after validation.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::OutOfRange(_) => 2,
        _ => 1,
    }
}

fn check_max<T: PartialOrd + std::fmt::Display>(name: &str, value: T, max: T) -> Result<()> {
    if value > max {
        return Err(Error::InvalidArgument(format!("{name} = {value} exceeds the limit {max}")));
    }
    Ok(())
}

fn check_min<T: PartialOrd + std::fmt::Display>(name: &str, value: T, min: T) -> Result<()> {
    if value < min {
        return Err(Error::InvalidArgument(format!("{name} must be at least {min}")));
    }
    Ok(())
}

fn json<T: Serialize>(payload: T) -> Result<String> {
    let env = Envelope {
        schema: SCHEMA_VERSION.to_string(),
        payload,
    };
    let mut s = serde_json::to_string(&env).map_err(|e| Error::Consistency(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn execute(cli: &Cli) -> Result<Rendered> {
    let f = cli.format;
    let text = match &cli.command {
        Command::Strata { n } => {
            check_max("n", *n, MAX_STRATA_N)?;
            let out = StrataOutput {
                n: *n,
                strata: stratify(*n)?,
            };
            match f {
                Format::Json => json(out)?,
                Format::Table => strata_table(&out),
                Format::Latex => strata_latex(&out),
            }
        }
        Command::Hodge(args) => {
            let out = hodge(args)?;
            match f {
                Format::Json => json(out)?,
                Format::Table => format!("{}\n", out.text),
                Format::Latex => format!("${}$\n", latex_math(&out.text)),
            }
        }
        Command::Betti(args) => {
            let table = if args.milnor {
                let n = args.n.expect("clap enforces -n");
                check_min("n", n, 1)?;
                check_max("n", n, MAX_TABLE_N)?;
                annotated_milnor_betti(n)?
            } else {
                let g = args.g.expect("clap enforces -g");
                check_max("g", g, MAX_GENUS)?;
                sec2_singular_betti(g)
            };
            render_betti(&table, f)?
        }
        Command::Ih { g, k } => {
            check_max("g", *g, MAX_GENUS)?;
            check_min("k", *k, 1)?;
            check_max("k", *k, MAX_SECANT_K)?;
            render_betti(&ih_betti(*g, *k)?, f)?
        }
        Command::Monodromy { n } => {
            check_min("n", *n, 1)?;
            check_max("n", *n, MAX_TABLE_N)?;
            let out = MonodromyOutput {
                n: *n,
                eigenvalues: monodromy_eigentable(*n)?,
            };
            match f {
                Format::Json => json(out)?,
                Format::Table => monodromy_table(&out),
                Format::Latex => monodromy_latex(&out),
            }
        }
        Command::Nearby { n } => {
            check_min("n", *n, 1)?;
            check_max("n", *n, MAX_TABLE_N)?;
            let out = NearbyOutput {
                n: *n,
                summands: nearby_vanishing_decomposition(*n)?,
            };
            match f {
                Format::Json => json(out)?,
                Format::Table => nearby_table(&out),
                Format::Latex => nearby_latex(&out),
            }
        }
        Command::Eigenvectors => {
            let (a1, a2) = n2_eigenvectors()?;
            let classes = vec![homogeneous_class(&a1, 3)?.residue, homogeneous_class(&a2, 3)?.residue];
            let out = EigenvectorOutput {
                alpha_1: a1,
                alpha_2: a2,
                classes,
                modulus: 3,
            };
            match f {
                Format::Json => json(out)?,
                Format::Table => format!(
                    "alpha_1 (class {}): {}\nalpha_2 (class {}): {}\n",
                    out.classes[0], out.alpha_1, out.classes[1], out.alpha_2
                ),
                Format::Latex => format!(
                    "\\begin{{align*}}\n\\alpha_1 &= {} \\\\\n\\alpha_2 &= {}\n\\end{{align*}}\n",
                    latex_math(&out.alpha_1.to_string()),
                    latex_math(&out.alpha_2.to_string())
                ),
            }
        }
        Command::Blockreduce { n, k } => {
            check_min("n", *n, 1)?;
            check_max("n", *n, MAX_BLOCK_N)?;
            let r = block_reduce(*n, *k)?;
            match f {
                Format::Json => json(&r)?,
                Format::Table => block_table(&r),
                Format::Latex => block_latex(&r),
            }
        }
        Command::Verify { n, k } => {
            check_min("n", *n, 1)?;
            check_max("n", *n, MAX_VERIFY_N)?;
            let r = block_reduce(*n, *k)?;
            let report = verify_block_reduction(&r);
            let mut rng = StdRng::seed_from_u64((*n as u64) << 32 | *k as u64);
            let points = check_factorization_at_points(&r, VERIFY_SAMPLES, &mut rng);
            let passed = report.passed() && points.is_ok();
            let out = VerifyOutput {
                report,
                random_points: VERIFY_SAMPLES,
                random_points_passed: points.is_ok(),
                random_point_failure: points.err().map(|e| e.to_string()),
            };
            let text = match f {
                Format::Json => json(&out)?,
                Format::Table => verify_table(&out),
                Format::Latex => verify_latex(&out),
            };
            return Ok(if passed { Rendered::Ok(text) } else { Rendered::Failed(text) });
        }
    };
    Ok(Rendered::Ok(text))
}

fn hodge(args: &HodgeArgs) -> Result<HodgeOutput> {
    let n = args.n;
    check_min("n", n, 1)?;
    if args.bruteforce {
        check_max("n", n, MAX_BRUTEFORCE_N)?;
    } else {
        check_max("n", n, MAX_TABLE_N)?;
    }
    let method = if args.bruteforce { "bruteforce" } else { "closed" };
    let (space, polynomial) = match (args.d, args.gbundle, args.bruteforce) {
        (None, _, false) => ("milnor_fiber", milnor_hodge_closed(n)?),
        (None, _, true) => ("milnor_fiber", milnor_hodge_bruteforce(n)?),
        (Some(d), false, false) => ("quotient", quotient_hodge(n, d)?),
        (Some(_), false, true) => {
            return Err(Error::InvalidArgument(
                "--bruteforce is available for the Milnor fiber and --gbundle only".into(),
            ))
        }
        (Some(d), true, false) => ("gbundle", gbundle_hodge(n, d)?),
        (Some(d), true, true) => ("gbundle", gbundle_bruteforce(n, d)?),
    };
    Ok(HodgeOutput {
        n,
        d: args.d,
        space: space.into(),
        method: method.into(),
        text: polynomial.to_string(),
        polynomial,
    })
}

fn render_betti(table: &BettiTable, f: Format) -> Result<String> {
    Ok(match f {
        Format::Json => json(table)?,
        Format::Table => betti_table(table),
        Format::Latex => emit_latex(table),
    })
}

/// LaTeX `tabular` for a Betti table, degrees ascending.
pub fn emit_latex(table: &BettiTable) -> String {
    betti_latex(table)
}

fn betti_table(table: &BettiTable) -> String {
    let mut s = String::from("degree  dim\n");
    for (j, b) in table.degrees.iter().enumerate() {
        let note = table
            .annotations
            .get(j)
            .map(|a| {
                let mut parts = Vec::new();
                if let Some(d) = a.cohomological_degree {
                    parts.push(format!("H^{d}"));
                }
                if let Some(w) = a.weight {
                    parts.push(format!("weight {w}"));
                }
                if !a.eigenvalues.is_empty() {
                    let e: Vec<String> = a.eigenvalues.iter().map(ToString::to_string).collect();
                    parts.push(format!("eigenvalues {}", e.join(", ")));
                }
                if let Some(l) = &a.label {
                    parts.push(l.clone());
                }
                parts.join("; ")
            })
            .unwrap_or_default();
        if note.is_empty() {
            s.push_str(&format!("{j:>6}  {b}\n"));
        } else {
            s.push_str(&format!("{j:>6}  {b:<4} {note}\n"));
        }
    }
    s
}

fn strata_table(out: &StrataOutput) -> String {
    let mut s = format!("{:<24} {:>4} {:>4}  monomial\n", "composition", "gcd", "dim");
    for st in &out.strata {
        s.push_str(&format!(
            "{:<24} {:>4} {:>4}  {}\n",
            st.composition.to_string(),
            st.gcd,
            st.dimension(),
            st.monomial_string()
        ));
    }
    s
}

fn strata_latex(out: &StrataOutput) -> String {
    let mut s = String::from("\\begin{tabular}{lcl}\n$P$ & $\\gcd(P)$ & $f|_{Y_P}$ \\\\\n\\hline\n");
    for st in &out.strata {
        s.push_str(&format!(
            "${}$ & {} & ${}$ \\\\\n",
            st.composition,
            st.gcd,
            latex_math(&st.monomial_string())
        ));
    }
    s.push_str("\\end{tabular}\n");
    s
}

fn monodromy_table(out: &MonodromyOutput) -> String {
    let mut s = String::from("index  H^j  eigenvalue        mult\n");
    for e in &out.eigenvalues {
        s.push_str(&format!(
            "{:>5}  {:>3}  {:<16}  {}\n",
            e.degree,
            e.cohomological_degree,
            e.eigenvalue.to_string(),
            e.multiplicity
        ));
    }
    s
}

fn monodromy_latex(out: &MonodromyOutput) -> String {
    let mut s = String::from("\\begin{tabular}{ccc}\n$j$ & $\\lambda$ & mult. \\\\\n\\hline\n");
    for e in &out.eigenvalues {
        s.push_str(&format!(
            "{} & ${}$ & {} \\\\\n",
            e.cohomological_degree,
            e.eigenvalue.to_latex(),
            e.multiplicity
        ));
    }
    s.push_str("\\end{tabular}\n");
    s
}

fn kind_name(k: SummandKind) -> &'static str {
    match k {
        SummandKind::ConstantSheaf => "constant",
        SummandKind::IcOfRank1LocalSystem => "IC(L)",
    }
}

fn nearby_table(out: &NearbyOutput) -> String {
    let mut s = String::from("eigenvalue        support  rank  weight  kind\n");
    for x in &out.summands {
        s.push_str(&format!(
            "{:<16}  X_{:<5}  {:>4}  {:>6}  {}\n",
            x.eigenvalue.to_string(),
            x.support_index,
            x.rank,
            x.weight,
            kind_name(x.kind)
        ));
    }
    s
}

fn nearby_latex(out: &NearbyOutput) -> String {
    let mut s = String::from(
        "\\begin{tabular}{cccc}\n$\\lambda$ & support & rank & weight \\\\\n\\hline\n",
    );
    for x in &out.summands {
        s.push_str(&format!(
            "${}$ & $X_{{{}}}$ & {} & {} \\\\\n",
            x.eigenvalue.to_latex(),
            x.support_index,
            x.rank,
            x.weight
        ));
    }
    s.push_str("\\end{tabular}\n");
    s
}

fn block_table(r: &BlockReduction) -> String {
    let mut s = format!("n = {}, k = {}\n", r.n, r.k);
    for (i, p) in r.p_seq.iter().enumerate() {
        s.push_str(&format!("p{i} = {p}\n"));
    }
    for (i, y) in r.y_coords.iter().enumerate() {
        s.push_str(&format!("y{i} = {y}\n"));
    }
    s.push_str("N =\n");
    for row in r.n_matrix.to_string_rows() {
        s.push_str(&format!("  [{}]\n", row.join(", ")));
    }
    s
}

fn block_latex(r: &BlockReduction) -> String {
    let mut s = String::from("N = \\begin{pmatrix}\n");
    for row in r.n_matrix.to_string_rows() {
        let cells: Vec<String> = row.iter().map(|c| latex_math(c)).collect();
        s.push_str(&cells.join(" & "));
        s.push_str(" \\\\\n");
    }
    s.push_str("\\end{pmatrix}\n");
    s
}

fn verify_table(out: &VerifyOutput) -> String {
    let mut s = format!("n = {}, k = {}\n", out.report.n, out.report.k);
    for c in &out.report.checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        s.push_str(&format!("{status}  {}", c.case));
        if let Some(d) = &c.detail {
            s.push_str(&format!("  ({d})"));
        }
        s.push('\n');
    }
    let status = if out.random_points_passed { "pass" } else { "FAIL" };
    s.push_str(&format!("{status}  factorization at {} random points\n", out.random_points));
    if let Some(e) = &out.random_point_failure {
        s.push_str(&format!("      {e}\n"));
    }
    s
}

fn verify_latex(out: &VerifyOutput) -> String {
    let mut s = String::from("\\begin{tabular}{lc}\ncheck & result \\\\\n\\hline\n");
    for c in &out.report.checks {
        s.push_str(&format!("{} & {} \\\\\n", c.case, if c.passed { "pass" } else { "fail" }));
    }
    s.push_str(&format!(
        "random points ({}) & {} \\\\\n\\end{{tabular}}\n",
        out.random_points,
        if out.random_points_passed { "pass" } else { "fail" }
    ));
    s
}

/// Rewrites plain-text algebra (`x12^3*x0`, `dx1^dx2`, `e^(2pi i*1/3)`) as
/// ASCII LaTeX math.
pub fn latex_math(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let prev_alpha = i > 0 && chars[i - 1].is_ascii_alphabetic() && chars[i - 1] != 'd';
        match c {
            'x' | 'y' if !prev_alpha && i + 1 < chars.len() && chars[i + 1].is_ascii_digit() => {
                let start = i + 1;
                let mut end = start;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let digits: String = chars[start..end].iter().collect();
                out.push_str(&format!("{c}_{{{digits}}}"));
                i = end;
                continue;
            }
            '^' if i + 1 < chars.len() && chars[i + 1].is_ascii_digit() => {
                let start = i + 1;
                let mut end = start;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let digits: String = chars[start..end].iter().collect();
                out.push_str(&format!("^{{{digits}}}"));
                i = end;
                continue;
            }
            '^' if i + 1 < chars.len() && chars[i + 1] == 'd' => out.push_str(" \\wedge "),
            '*' => out.push(' '),
            _ => out.push(c),
        }
        i += 1;
    }
    out.replace("dx_", "\\,dx_")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["secant"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn milnor_betti_json() {
        let (code, out, _) = run_str(&["betti", "--milnor", "-n", "2", "--format", "json"]);
        assert_eq!(code, 0);
        assert!(out.starts_with(r#"{"schema":"1","degrees":[1,0,2]"#), "{out}");
    }

    #[test]
    fn argument_errors_exit_2() {
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["blockreduce", "-n", "2", "-k", "2"]).0, 2);
        assert_eq!(run_str(&["hodge", "-n", "2", "-d", "2"]).0, 2);
        assert_eq!(run_str(&["betti", "--milnor"]).0, 2);
        assert_eq!(run_str(&["ih", "-g", "1", "-k", "0"]).0, 2);
        assert_eq!(run_str(&["strata", "-n", "2", "--format", "xml"]).0, 2);
    }

    #[test]
    fn latex_math_rewrites() {
        assert_eq!(latex_math("-x2^3 + 2*x1*x2"), "-x_{2}^{3} + 2 x_{1} x_{2}");
        assert_eq!(latex_math("y1^2*y4"), "y_{1}^{2} y_{4}");
        assert_eq!(latex_math("(x1) dx1^dx2"), "(x_{1}) \\,dx_{1} \\wedge \\,dx_{2}");
    }
}
