//! The `pentagon` command line: verification of relations for built-in or
//! file-supplied operators, reconstruction, R-matrices and the formal checks.
//!
//! Exit status: 0 when every requested relation holds, 1 when one fails,
//! 2 on usage, input or parse errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use pentagon_core::bialgebra::{
    adjoint_rep, canonical_element, check_axioms, check_heisenberg_relations, tilde_rep, StructureConstants,
};
use pentagon_core::drinfeld::{
    agreement, canonical_r, drinfeld_generators, r_matrix, s_family, s_primes_from_reps,
    SMatrixFamily,
};
use pentagon_core::formal::{center_check, verify_dilog_identity, weyl_pentagon_check, QuantumPlane};
use pentagon_core::io::{
    constants_from_json, constants_to_json, operator_from_json, operator_to_json, read_json,
    reconstruction_to_json, reports_to_json, to_pretty, write_json,
};
use pentagon_core::reconstruction::reconstruct;
use pentagon_core::relations::{
    check_drinfeld_relations, check_fg_relations, check_mixed_pentagons, check_mixed_permutation, check_pentagon,
    check_reversed_pentagon, check_yang_baxter,
};
use pentagon_core::tensor::Operator;
use pentagon_core::{catalog, Error, Field, FieldTag, Rational, RationalFunction, VerificationReport};

/// Largest Yang–Baxter space checked without `--allow-large`.
pub const YBE_DEFAULT_LIMIT: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "pentagon", version, about = "Exact pentagon, Yang-Baxter and dilogarithm checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify a relation for a built-in example or an input file.
    Verify(VerifyArgs),
    /// Recover the pair of dual bialgebras from a pentagon solution.
    Reconstruct(ReconstructArgs),
    /// Build the factorized R-matrix and optionally check it.
    Rmatrix(RmatrixArgs),
    /// Check the quantum dilogarithm identity up to a total degree.
    Dilog(DilogArgs),
    /// Check the exponential pentagon on Fock states.
    Weyl(WeylArgs),
    /// Write a built-in example as a JSON file.
    Example(ExampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    Pentagon,
    Reversed,
    Mixed,
    Ybe,
    Heisenberg,
    Drinfeld,
    MixedPermutation,
    Fg,
    Axioms,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Built-in example: trivial, zn:<n> (n <= 12) or s3.
    #[arg(long)]
    pub example: Option<String>,
    /// Operator file (S, or R for ybe) or structure constants file
    /// (heisenberg, drinfeld, axioms).
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub relation: Relation,
    #[command(flatten)]
    pub source: Source,
    /// Legs per site of an R-matrix read from a file (default: half its legs).
    #[arg(long)]
    pub site_legs: Option<usize>,
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub diagnostics: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RCheck {
    Ybe,
    Mixed,
}

#[derive(Debug, Args)]
pub struct RmatrixArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum)]
    pub check: Vec<RCheck>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct DilogArgs {
    #[arg(long)]
    pub degree: u32,
    #[arg(long)]
    pub set_w_zero: bool,
    /// Specialize q to a rational number instead of working over Q(q).
    #[arg(long)]
    pub numeric_q: Option<String>,
    /// Also run the center check.
    #[arg(long)]
    pub center: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct WeylArgs {
    #[arg(long, default_value_t = 4)]
    pub max_occupation: u32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleKind {
    /// The canonical element S.
    S,
    /// The structure constants.
    Constants,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    pub name: String,
    #[arg(long, value_enum, default_value = "s")]
    pub kind: ExampleKind,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Reports plus free-form lines printed before them.
struct Outcome {
    notes: Vec<String>,
    reports: Vec<VerificationReport>,
}

impl Outcome {
    fn reports(reports: Vec<VerificationReport>) -> Self {
        Outcome { notes: Vec::new(), reports }
    }
}

fn file_tag(v: &Value) -> Result<FieldTag, Error> {
    let tag = v.get("field").and_then(Value::as_str).ok_or_else(|| Error::Schema {
        path: "$.field".into(),
        message: "expected \"Q\" or \"Qq\"".into(),
    })?;
    Ok(tag.parse()?)
}

fn example_constants(name: &str) -> Result<StructureConstants<Rational>, Error> {
    catalog::example(name)
}

fn operator_relation<F: Field>(relation: Relation, s: &Operator<F>) -> Result<Vec<VerificationReport>, Error> {
    Ok(match relation {
        Relation::Pentagon => vec![check_pentagon(s)?],
        Relation::Reversed => vec![check_reversed_pentagon(s)?],
        Relation::MixedPermutation => vec![check_mixed_permutation(s)?],
        Relation::Fg => vec![check_fg_relations(s)?],
        Relation::Mixed => {
            let fam = s_family(s)?;
            check_mixed_pentagons(&fam.s, &fam.s_prime, &fam.s_double_prime, &fam.s_tilde)?
        }
        _ => unreachable!("not an operator relation"),
    })
}

fn ybe_guard(space: usize, allow_large: bool) -> Result<(), Error> {
    if space > YBE_DEFAULT_LIMIT && !allow_large {
        return Err(Error::InvalidArgument(format!(
            "Yang-Baxter space has dimension {space}; pass --allow-large to check it"
        )));
    }
    Ok(())
}

fn ybe_file<F: Field>(r: &Operator<F>, site_legs: Option<usize>, allow_large: bool) -> Result<VerificationReport, Error> {
    let legs = r.row_dims().len();
    let k = site_legs.unwrap_or(legs / 2);
    let site: usize = r.row_dims().iter().take(k).product();
    ybe_guard(site.pow(3), allow_large)?;
    check_yang_baxter(r, k)
}

fn constants_relation<F: Field>(relation: Relation, sc: &StructureConstants<F>) -> Result<Vec<VerificationReport>, Error> {
    let rep = adjoint_rep(sc);
    Ok(match relation {
        Relation::Heisenberg => vec![check_heisenberg_relations(sc, &rep)],
        Relation::Axioms => check_axioms(sc),
        Relation::Drinfeld => {
            let tilde = tilde_rep(sc, &rep)?;
            let gens = drinfeld_generators(sc, &rep, &tilde)?;
            vec![check_drinfeld_relations(sc, &gens.lower, &gens.upper)?]
        }
        _ => unreachable!("not a structure-constant relation"),
    })
}

fn verify(args: &VerifyArgs) -> Result<Outcome, Error> {
    let by_constants = matches!(args.relation, Relation::Heisenberg | Relation::Drinfeld | Relation::Axioms);
    if let Some(name) = &args.source.example {
        let sc = example_constants(name)?;
        if by_constants {
            return Ok(Outcome::reports(constants_relation(args.relation, &sc)?));
        }
        let rep = adjoint_rep(&sc);
        let reports = match args.relation {
            Relation::Reversed => {
                let tilde = tilde_rep(&sc, &rep)?;
                vec![check_reversed_pentagon(&canonical_element(&tilde))?]
            }
            Relation::Mixed => {
                let tilde = tilde_rep(&sc, &rep)?;
                let fam = s_primes_from_reps(&rep, &tilde)?;
                check_mixed_pentagons(&fam.s, &fam.s_prime, &fam.s_double_prime, &fam.s_tilde)?
            }
            Relation::Ybe => {
                ybe_guard(sc.dim.pow(6), args.allow_large)?;
                let tilde = tilde_rep(&sc, &rep)?;
                vec![r_matrix(&s_primes_from_reps(&rep, &tilde)?)?.check_yang_baxter()?]
            }
            rel => operator_relation(rel, &canonical_element(&rep))?,
        };
        return Ok(Outcome::reports(reports));
    }
    let path = args.source.input.as_deref().expect("clap enforces a source");
    let v = read_json(path)?;
    let tag = file_tag(&v)?;
    let reports = match (by_constants, tag) {
        (true, FieldTag::Q) => constants_relation(args.relation, &constants_from_json::<Rational>(&v)?)?,
        (true, FieldTag::Qq) => constants_relation(args.relation, &constants_from_json::<RationalFunction>(&v)?)?,
        (false, FieldTag::Q) => {
            let op = operator_from_json::<Rational>(&v)?;
            if args.relation == Relation::Ybe {
                vec![ybe_file(&op, args.site_legs, args.allow_large)?]
            } else {
                operator_relation(args.relation, &op)?
            }
        }
        (false, FieldTag::Qq) => {
            let op = operator_from_json::<RationalFunction>(&v)?;
            if args.relation == Relation::Ybe {
                vec![ybe_file(&op, args.site_legs, args.allow_large)?]
            } else {
                operator_relation(args.relation, &op)?
            }
        }
    };
    Ok(Outcome::reports(reports))
}

fn reconstruct_generic<F: Field>(s: &Operator<F>, args: &ReconstructArgs) -> Result<Outcome, Error> {
    let res = reconstruct(s)?;
    if let Some(p) = &args.output {
        write_json(p, &reconstruction_to_json(&res))?;
    }
    if let Some(p) = &args.diagnostics {
        write_json(p, &reports_to_json(&res.diagnostics))?;
    }
    let mut notes = vec![
        format!("dimension {}", res.dim),
        format!("commutative {}", res.constants.is_commutative()),
    ];
    notes.push(match &res.unit {
        Some(u) => format!(
            "unit [{}]",
            u.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        ),
        None => "unit none found".into(),
    });
    Ok(Outcome {
        notes,
        reports: res.diagnostics,
    })
}

fn reconstruct_cmd(args: &ReconstructArgs) -> Result<Outcome, Error> {
    if let Some(name) = &args.source.example {
        let sc = example_constants(name)?;
        return reconstruct_generic(&canonical_element(&adjoint_rep(&sc)), args);
    }
    let v = read_json(args.source.input.as_deref().expect("clap enforces a source"))?;
    match file_tag(&v)? {
        FieldTag::Q => reconstruct_generic(&operator_from_json::<Rational>(&v)?, args),
        FieldTag::Qq => reconstruct_generic(&operator_from_json::<RationalFunction>(&v)?, args),
    }
}

fn rmatrix_generic<F: Field>(
    fam: &SMatrixFamily<F>,
    mut reports: Vec<VerificationReport>,
    args: &RmatrixArgs,
) -> Result<Outcome, Error> {
    let r = r_matrix(fam)?;
    if let Some(p) = &args.output {
        write_json(p, &operator_to_json(&r.operator))?;
    }
    let d = fam.s.row_dims()[0];
    if args.check.contains(&RCheck::Ybe) {
        ybe_guard(d.pow(6), args.allow_large)?;
        reports.push(r.check_yang_baxter()?);
    }
    if args.check.contains(&RCheck::Mixed) {
        reports.extend(check_mixed_pentagons(&fam.s, &fam.s_prime, &fam.s_double_prime, &fam.s_tilde)?);
        reports.push(check_reversed_pentagon(&fam.s_tilde)?);
    }
    Ok(Outcome {
        notes: vec![format!("R acts on {} legs of dimension {d}, {} nonzero entries", 4, r.operator.nnz())],
        reports,
    })
}

fn rmatrix_cmd(args: &RmatrixArgs) -> Result<Outcome, Error> {
    if let Some(name) = &args.source.example {
        let sc = example_constants(name)?;
        let rep = adjoint_rep(&sc);
        let tilde = tilde_rep(&sc, &rep)?;
        let fam = s_primes_from_reps(&rep, &tilde)?;
        let gens = drinfeld_generators(&sc, &rep, &tilde)?;
        let agree = agreement("r_matrix", &r_matrix(&fam)?.operator, &canonical_r(&gens).operator);
        return rmatrix_generic(&fam, vec![agree], args);
    }
    let v = read_json(args.source.input.as_deref().expect("clap enforces a source"))?;
    match file_tag(&v)? {
        FieldTag::Q => rmatrix_generic(&s_family(&operator_from_json::<Rational>(&v)?)?, Vec::new(), args),
        FieldTag::Qq => rmatrix_generic(&s_family(&operator_from_json::<RationalFunction>(&v)?)?, Vec::new(), args),
    }
}

fn dilog_generic<F: Field>(q: F, args: &DilogArgs) -> Result<Outcome, Error> {
    let plane = QuantumPlane::new(q, args.degree)?;
    let mut reports = vec![verify_dilog_identity(&plane, args.set_w_zero)?];
    if args.center {
        reports.push(center_check(&plane));
    }
    Ok(Outcome::reports(reports))
}

fn dilog_cmd(args: &DilogArgs) -> Result<Outcome, Error> {
    match &args.numeric_q {
        Some(text) => dilog_generic(<Rational as Field>::parse(text)?, args),
        None => dilog_generic(RationalFunction::q(), args),
    }
}

fn example_cmd(args: &ExampleArgs, out: &mut dyn Write) -> Result<(), Error> {
    let sc = example_constants(&args.name)?;
    let v = match args.kind {
        ExampleKind::S => operator_to_json(&canonical_element(&adjoint_rep(&sc))),
        ExampleKind::Constants => constants_to_json(&sc),
    };
    match &args.output {
        Some(p) => write_json(p, &v),
        None => Ok(out.write_all(to_pretty(&v).as_bytes())?),
    }
}

fn emit(outcome: &Outcome, json: bool, out: &mut dyn Write) -> std::io::Result<()> {
    if json {
        out.write_all(to_pretty(&reports_to_json(&outcome.reports)).as_bytes())
    } else {
        for n in &outcome.notes {
            writeln!(out, "{n}")?;
        }
        for r in &outcome.reports {
            writeln!(out, "{r}")?;
        }
        Ok(())
    }
}

/// Runs one command and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (result, json) = match &cli.command {
        Command::Verify(a) => (verify(a), a.json),
        Command::Reconstruct(a) => (reconstruct_cmd(a), a.json),
        Command::Rmatrix(a) => (rmatrix_cmd(a), a.json),
        Command::Dilog(a) => (dilog_cmd(a), a.json),
        Command::Weyl(a) => (Ok(Outcome::reports(vec![weyl_pentagon_check(a.max_occupation)])), a.json),
        Command::Example(a) => {
            return match example_cmd(a, out) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    2
                }
            }
        }
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome, json, out) {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            if outcome.reports.iter().all(|r| r.holds) {
                0
            } else {
                1
            }
        }
        // Inputs that parse but violate a relation's hypotheses count as failures.
        Err(e @ Error::Closure(_)) => {
            let _ = writeln!(err, "fails: {e}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Convenience for tests: path to string.
pub fn path_arg(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}
