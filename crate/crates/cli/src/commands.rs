//! Subcommand implementations and the exit-code contract:
//! 0 success, 1 verification or table mismatch, 2 invalid input,
//! 3 degenerate (singular) splitting system.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use heunfac_core::{
    adjoint, expand_factors, factorize_all, half_exponent_antisymmetry, infinity_indices,
    operator_equal, parse_coeff, right_solution, scan_symbols, solve_splitting,
    swap_partner_check, trivial_right_solution, trivial_splitting, verify_annihilates, Error,
    FamilySpec, Factorization, RationalFunction, SplittingMask, SplittingOutcome, SymbolTable,
    TrivialSplitting,
};

use crate::document::{
    build_document, record_from_factorization, record_from_outcome, record_from_trivial,
    render_csv, render_json, render_table, reparse_inputs, ExponentsSpec, FactorizationRecord,
    ProblemFile, ResultDocument,
};
use crate::tables;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "heunfac",
    version,
    about = "Exact factorization of second-order Fuchsian operators into first-order factors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Factor the family under every splitting of its singular points
    Factorize(FamilyArgs),
    /// Recompute a reference table and compare against the checked-in text
    Tables {
        /// Table number (1-7)
        #[arg(long)]
        id: u8,
    },
    /// Re-run and audit a problem file or a previously emitted document
    Verify {
        /// JSON problem file or result document
        file: PathBuf,
    },
    /// Factor the Lagrange adjoint of each splitting's pinned operator
    Adjoint {
        #[command(flatten)]
        family: FamilyArgs,
        /// Apply the adjoint twice (must reproduce the originals)
        #[arg(long)]
        twice: bool,
    },
}

#[derive(Args)]
pub struct FamilyArgs {
    /// Number of singular points beyond 0 and 1 (the accessory degree)
    #[arg(long)]
    pub k: usize,
    /// Extra singular points as comma-separated expressions, e.g. `a,b` or `2,5/2`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub sing: Vec<String>,
    /// Half-exponent family: every finite exponent is 1/2
    #[arg(long)]
    pub lame: bool,
    /// Exponent at x = 0
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Exponent at x = 1
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Exponents at the extra points, comma-separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub eps: Vec<String>,
    /// Also emit the two one-sided splittings
    #[arg(long)]
    pub include_trivial: bool,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the document to a file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Failure that terminates a subcommand: exit code plus a message for
/// standard error.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn internal(context: &str, err: Error) -> Self {
        Failure {
            code: EXIT_MISMATCH,
            message: format!("{context}: {err}"),
        }
    }
}

/// Entry point used by `main` and by tests: runs one parsed command and
/// returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Factorize(args) => cmd_factorize(&args),
        Command::Tables { id } => cmd_tables(id),
        Command::Verify { file } => cmd_verify(&file),
        Command::Adjoint { family, twice } => cmd_adjoint(&family, twice),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Parsed family inputs: symbol table, the engine family, and the exponent
/// values in point order.
struct ParsedFamily {
    family: FamilySpec,
    exponents: Vec<RationalFunction>,
}

fn parse_exprs(
    table: &Arc<SymbolTable>,
    texts: &[String],
    what: &str,
) -> Result<Vec<RationalFunction>, Failure> {
    texts
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_coeff(s, table).map_err(|e| {
                Failure::invalid(format!("{what} entry {} (`{s}`): {e}", i + 1))
            })
        })
        .collect()
}

fn build_family(args: &FamilyArgs) -> Result<ParsedFamily, Failure> {
    if args.sing.len() != args.k {
        return Err(Failure::invalid(format!(
            "--k {} requires exactly {} --sing entries, got {}",
            args.k,
            args.k,
            args.sing.len()
        )));
    }
    if args.k == 0 {
        return Err(Failure::invalid("--k must be at least 1"));
    }
    if args.lame {
        if args.gamma.is_some() || args.delta.is_some() || !args.eps.is_empty() {
            return Err(Failure::invalid(
                "--lame fixes every exponent to 1/2; omit --gamma/--delta/--eps",
            ));
        }
    } else {
        if args.gamma.is_none() || args.delta.is_none() {
            return Err(Failure::invalid(
                "either pass --lame or provide --gamma and --delta (and --eps per extra point)",
            ));
        }
        if args.eps.len() != args.k {
            return Err(Failure::invalid(format!(
                "--eps needs one entry per extra singular point: expected {}, got {}",
                args.k,
                args.eps.len()
            )));
        }
    }

    let mut texts: Vec<&str> = args.sing.iter().map(|s| s.as_str()).collect();
    if !args.lame {
        texts.push(args.gamma.as_deref().expect("validated above"));
        texts.push(args.delta.as_deref().expect("validated above"));
        texts.extend(args.eps.iter().map(|s| s.as_str()));
    }
    let table = SymbolTable::new(scan_symbols(&texts))
        .map_err(|e| Failure::invalid(e.to_string()))?;

    let extras = parse_exprs(&table, &args.sing, "--sing")?;
    let family = if args.lame {
        FamilySpec::new_half_exponent(&table, extras)
            .map_err(|e| Failure::invalid(e.to_string()))?
    } else {
        let gamma = parse_exprs(
            &table,
            std::slice::from_ref(args.gamma.as_ref().unwrap()),
            "--gamma",
        )?
        .pop()
        .unwrap();
        let delta = parse_exprs(
            &table,
            std::slice::from_ref(args.delta.as_ref().unwrap()),
            "--delta",
        )?
        .pop()
        .unwrap();
        let mut exps = vec![gamma, delta];
        exps.extend(parse_exprs(&table, &args.eps, "--eps")?);
        FamilySpec::new(&table, extras, exps).map_err(|e| Failure::invalid(e.to_string()))?
    };
    let exponents = family.exponents().to_vec();
    Ok(ParsedFamily { family, exponents })
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Failure::invalid(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_document(
    doc: &ResultDocument,
    format: Format,
    with_operator: bool,
) -> Result<String, Failure> {
    match format {
        Format::Table => Ok(render_table(doc, with_operator)),
        Format::Json => Ok(render_json(doc)),
        Format::Csv => render_csv(doc, with_operator)
            .map_err(|e| Failure::invalid(format!("csv rendering failed: {e}"))),
    }
}

fn exit_for_records(records: &[FactorizationRecord]) -> i32 {
    if records.iter().any(|r| r.status == "singular") {
        EXIT_DEGENERATE
    } else {
        EXIT_OK
    }
}

fn cmd_factorize(args: &FamilyArgs) -> Result<i32, Failure> {
    let parsed = build_family(args)?;
    let outcomes = factorize_all(&parsed.family, args.include_trivial)
        .map_err(|e| Failure::internal("factorization failed", e))?;
    let records: Vec<FactorizationRecord> = outcomes
        .iter()
        .map(|o| record_from_outcome(o, false))
        .collect();
    let doc = build_document(
        parsed.family.k(),
        parsed.family.singularities(),
        &parsed.exponents,
        records,
    );
    let text = render_document(&doc, args.format, false)?;
    write_output(&text, args.out.as_deref())?;
    Ok(exit_for_records(&doc.factorizations))
}

fn cmd_tables(id: u8) -> Result<i32, Failure> {
    if !tables::TABLE_IDS.contains(&id) {
        return Err(Failure::invalid(format!(
            "table id {id} out of range; valid ids are 1-7"
        )));
    }
    let diff = tables::diff_against_golden(id).expect("id validated");
    let rendered = tables::render_table(id).expect("id validated");
    print!("{rendered}");
    if diff.is_empty() {
        println!("# table {id}: matches the reference text");
        Ok(EXIT_OK)
    } else {
        let mut msg = format!("table {id} differs from the reference text:\n");
        for d in &diff {
            let _ = writeln!(msg, "{d}");
        }
        eprint!("{msg}");
        Ok(EXIT_MISMATCH)
    }
}

/// Adjoint of a one-sided splitting: the one-sided splitting of the adjoint
/// operator under the complementary mask.
fn adjoint_trivial(t: &TrivialSplitting) -> Result<TrivialSplitting, Error> {
    let adj_op = adjoint(&t.operator)?;
    let table = Arc::clone(adj_op.table());
    let sing = adj_op.params().singularities();
    let extras = sing[2..].to_vec();
    let exponents = adj_op.params().exponents().to_vec();
    let family = FamilySpec::new(&table, extras, exponents)?;
    match trivial_splitting(&family, &t.mask.complement())? {
        SplittingOutcome::Trivial(adj) => {
            // the recomputed accessory must agree with the adjoint operator
            let pinned = adj_op.q_low()?;
            let recomputed = adj.accessory.to_q_low(&table, family.k());
            if !recomputed.eq_poly(pinned)? {
                return Err(Error::ConsistencyFailure {
                    what: "one-sided adjoint accessory disagrees with the adjoint operator"
                        .into(),
                });
            }
            Ok(adj)
        }
        _ => Err(Error::ConsistencyFailure {
            what: "one-sided adjoint did not produce a one-sided splitting".into(),
        }),
    }
}

fn cmd_adjoint(args: &FamilyArgs, twice: bool) -> Result<i32, Failure> {
    let parsed = build_family(args)?;
    let outcomes = factorize_all(&parsed.family, args.include_trivial)
        .map_err(|e| Failure::internal("factorization failed", e))?;

    let mut records = Vec::with_capacity(outcomes.len());
    for outcome in &outcomes {
        let record = match outcome {
            SplittingOutcome::Proper(f) => {
                let adj = heunfac_core::adjoint_factorization(f)
                    .map_err(|e| Failure::internal("adjoint factorization failed", e))?;
                let result = if twice {
                    heunfac_core::adjoint_factorization(&adj)
                        .map_err(|e| Failure::internal("double adjoint failed", e))?
                } else {
                    adj
                };
                record_from_factorization(&result, true)
            }
            SplittingOutcome::Trivial(t) => {
                let adj = adjoint_trivial(t)
                    .map_err(|e| Failure::internal("one-sided adjoint failed", e))?;
                let result = if twice {
                    adjoint_trivial(&adj)
                        .map_err(|e| Failure::internal("double adjoint failed", e))?
                } else {
                    adj
                };
                record_from_trivial(&result, true)
            }
            SplittingOutcome::Singular { mask } => {
                let shown = if twice { mask.clone() } else { mask.complement() };
                record_from_outcome(
                    &SplittingOutcome::Singular { mask: shown },
                    true,
                )
            }
            SplittingOutcome::NotFactorizable { .. } => record_from_outcome(outcome, true),
        };
        records.push(record);
    }

    // echo the family the records describe: exponents flip to 2 - e unless
    // the double adjoint brought them back
    let two = RationalFunction::from_int(parsed.family.table(), 2);
    let echo_exponents: Vec<RationalFunction> = if twice {
        parsed.exponents.clone()
    } else {
        parsed
            .exponents
            .iter()
            .map(|e| (&two - e).simplify())
            .collect()
    };
    let doc = build_document(
        parsed.family.k(),
        parsed.family.singularities(),
        &echo_exponents,
        records,
    );
    let text = render_document(&doc, args.format, true)?;
    write_output(&text, args.out.as_deref())?;
    Ok(exit_for_records(&doc.factorizations))
}

/// One named check inside `verify`; prints its own pass/fail line.
fn report(label: &str, mask: &SplittingMask, ok: bool, detail: &str, failures: &mut usize) {
    if ok {
        println!("mask {mask}: {label} ok");
    } else {
        println!("mask {mask}: {label} FAILED{}", if detail.is_empty() {
            String::new()
        } else {
            format!(" ({detail})")
        });
        *failures += 1;
    }
}

fn check_proper(
    f: &Factorization,
    family: &FamilySpec,
    outcomes: &[SplittingOutcome],
    failures: &mut usize,
) {
    let mask = &f.mask;

    let roundtrip = expand_factors(&f.left, &f.right)
        .and_then(|exp| operator_equal(&exp, &f.operator));
    match roundtrip {
        Ok(true) => report("round-trip expansion", mask, true, "", failures),
        Ok(false) => report(
            "round-trip expansion",
            mask,
            false,
            "product differs from the pinned operator",
            failures,
        ),
        Err(e) => report("round-trip expansion", mask, false, &e.to_string(), failures),
    }

    let fuchs = infinity_indices(f).and_then(|(nu_r, nu_o)| {
        let sum = (&nu_r + &nu_o).simplify();
        Ok(sum.eq_rf(&family.sigma())?
            && nu_r.eq_rf(&f.index_pair.0)?
            && nu_o.eq_rf(&f.index_pair.1)?)
    });
    match fuchs {
        Ok(true) => report("index-pair consistency", mask, true, "", failures),
        Ok(false) => report(
            "index-pair consistency",
            mask,
            false,
            "pair does not match sigma or the stored values",
            failures,
        ),
        Err(e) => report("index-pair consistency", mask, false, &e.to_string(), failures),
    }

    let residual = right_solution(f).and_then(|sol| verify_annihilates(&f.operator, &sol));
    match residual {
        Ok(()) => report("solution residual", mask, true, "", failures),
        Err(e) => report("solution residual", mask, false, &e.to_string(), failures),
    }

    if family.is_half_exponent() {
        match half_exponent_antisymmetry(f) {
            Ok(true) => report("half-exponent antisymmetry", mask, true, "", failures),
            Ok(false) => report(
                "half-exponent antisymmetry",
                mask,
                false,
                "identity does not hold",
                failures,
            ),
            Err(e) => report(
                "half-exponent antisymmetry",
                mask,
                false,
                &e.to_string(),
                failures,
            ),
        }
        let partner = outcomes.iter().find_map(|o| match o {
            SplittingOutcome::Proper(g) if g.mask == mask.complement() => Some(g),
            _ => None,
        });
        match partner {
            Some(g) => match swap_partner_check(f, g) {
                Ok(true) => report("complement swap", mask, true, "", failures),
                Ok(false) => report(
                    "complement swap",
                    mask,
                    false,
                    "negate-swap identity does not hold",
                    failures,
                ),
                Err(e) => report("complement swap", mask, false, &e.to_string(), failures),
            },
            None => report(
                "complement swap",
                mask,
                false,
                "complementary splitting missing",
                failures,
            ),
        }
    }
}

fn check_trivial(t: &TrivialSplitting, failures: &mut usize) {
    let mask = &t.mask;
    let residual =
        trivial_right_solution(t).and_then(|sol| verify_annihilates(&t.operator, &sol));
    match residual {
        Ok(()) => report("solution residual", mask, true, "", failures),
        Err(e) => report("solution residual", mask, false, &e.to_string(), failures),
    }
}

/// Problem-file mode: run the full invariant audit on a freshly computed
/// factorization of the described family.
fn verify_problem(problem: &ProblemFile) -> Result<i32, Failure> {
    if problem.singularities.len() != problem.k {
        return Err(Failure::invalid(format!(
            "problem file lists {} extra singular points but k = {}",
            problem.singularities.len(),
            problem.k
        )));
    }
    let exponent_texts: Vec<String> = match &problem.exponents {
        ExponentsSpec::Keyword(word) if word == "lame" => Vec::new(),
        ExponentsSpec::Keyword(word) => {
            return Err(Failure::invalid(format!(
                "unknown exponents keyword `{word}`; use \"lame\" or a list"
            )));
        }
        ExponentsSpec::List(list) => {
            if list.len() != problem.k + 2 {
                return Err(Failure::invalid(format!(
                    "exponent list needs one entry per singular point ({}), got {}",
                    problem.k + 2,
                    list.len()
                )));
            }
            list.clone()
        }
    };

    let mut texts: Vec<&str> = problem.singularities.iter().map(|s| s.as_str()).collect();
    texts.extend(exponent_texts.iter().map(|s| s.as_str()));
    let table = SymbolTable::new(scan_symbols(&texts))
        .map_err(|e| Failure::invalid(e.to_string()))?;
    let extras = parse_exprs(&table, &problem.singularities, "singularities")?;
    let family = if exponent_texts.is_empty() {
        FamilySpec::new_half_exponent(&table, extras)
            .map_err(|e| Failure::invalid(e.to_string()))?
    } else {
        let exps = parse_exprs(&table, &exponent_texts, "exponents")?;
        FamilySpec::new(&table, extras, exps).map_err(|e| Failure::invalid(e.to_string()))?
    };

    let outcomes = factorize_all(&family, problem.include_trivial)
        .map_err(|e| Failure::internal("factorization failed", e))?;

    let mut failures = 0usize;
    let mut singular = 0usize;
    let mut total_checks = 0usize;
    for outcome in &outcomes {
        match outcome {
            SplittingOutcome::Proper(f) => {
                check_proper(f, &family, &outcomes, &mut failures);
                total_checks += if family.is_half_exponent() { 5 } else { 3 };
            }
            SplittingOutcome::Trivial(t) => {
                check_trivial(t, &mut failures);
                total_checks += 1;
            }
            SplittingOutcome::Singular { mask } => {
                println!("mask {mask}: singular system, checks skipped");
                singular += 1;
            }
            SplittingOutcome::NotFactorizable { mask, reason } => {
                println!("mask {mask}: not factorizable ({reason})");
                failures += 1;
            }
        }
    }
    println!(
        "checks: {} run, {} failed, {} splittings singular",
        total_checks, failures, singular
    );
    if failures > 0 {
        Ok(EXIT_MISMATCH)
    } else if singular > 0 {
        Ok(EXIT_DEGENERATE)
    } else {
        Ok(EXIT_OK)
    }
}

/// Document mode: recompute every record of a previously emitted document
/// and compare field by field.
fn verify_document(doc: &ResultDocument) -> Result<i32, Failure> {
    let (table, sing, exps) = reparse_inputs(doc)
        .map_err(|e| Failure::invalid(format!("document echo does not parse: {e}")))?;
    if sing.len() != doc.k + 2 || exps.len() != sing.len() {
        return Err(Failure::invalid(
            "document echo is inconsistent with its own k",
        ));
    }
    let zero = RationalFunction::zero(&table);
    let one = RationalFunction::one(&table);
    let normalized = sing[0].eq_rf(&zero).unwrap_or(false) && sing[1].eq_rf(&one).unwrap_or(false);
    if !normalized {
        return Err(Failure::invalid(
            "document echo must list singular points 0 and 1 first",
        ));
    }
    let family = FamilySpec::new(&table, sing[2..].to_vec(), exps)
        .map_err(|e| Failure::invalid(e.to_string()))?;

    let mut failures = 0usize;
    for stored in &doc.factorizations {
        let mask = SplittingMask::from_str(&stored.mask)
            .map_err(|e| Failure::invalid(format!("bad mask `{}`: {e}", stored.mask)))?;
        if mask.len() != doc.k + 2 {
            return Err(Failure::invalid(format!(
                "mask `{}` has wrong width for k = {}",
                stored.mask, doc.k
            )));
        }
        let with_operator = stored.operator.is_some();
        let recomputed: FactorizationRecord = if mask.is_proper() {
            match solve_splitting(&family, &mask) {
                Ok(f) => record_from_factorization(&f, with_operator),
                Err(Error::SingularSystem) => record_from_outcome(
                    &SplittingOutcome::Singular { mask: mask.clone() },
                    with_operator,
                ),
                Err(e) => return Err(Failure::internal("recomputation failed", e)),
            }
        } else {
            let outcome = trivial_splitting(&family, &mask)
                .map_err(|e| Failure::internal("recomputation failed", e))?;
            record_from_outcome(&outcome, with_operator)
        };
        if recomputed == *stored {
            println!("mask {}: matches recomputation", stored.mask);
        } else {
            failures += 1;
            println!("mask {}: differs from recomputation", stored.mask);
            for (field, got, want) in record_diffs(stored, &recomputed) {
                println!("  {field}: stored `{got}`, recomputed `{want}`");
            }
        }
    }
    println!(
        "records: {} checked, {} mismatched",
        doc.factorizations.len(),
        failures
    );
    Ok(if failures > 0 { EXIT_MISMATCH } else { EXIT_OK })
}

fn record_diffs(
    a: &FactorizationRecord,
    b: &FactorizationRecord,
) -> Vec<(&'static str, String, String)> {
    let mut out = Vec::new();
    let mut push = |field: &'static str, x: &str, y: &str| {
        if x != y {
            out.push((field, x.to_string(), y.to_string()));
        }
    };
    push("L", &a.l, &b.l);
    push("M", &a.m, &b.m);
    push("Lbar", &a.lbar, &b.lbar);
    push("Mbar", &a.mbar, &b.mbar);
    push("alpha_beta", &a.alpha_beta, &b.alpha_beta);
    push("rho", &a.rho.join("; "), &b.rho.join("; "));
    push(
        "q",
        a.q.as_deref().unwrap_or("<none>"),
        b.q.as_deref().unwrap_or("<none>"),
    );
    push("nu_infinity", &a.nu_infinity, &b.nu_infinity);
    push("nu_other", &a.nu_other, &b.nu_other);
    push("status", &a.status, &b.status);
    let op_a = a
        .operator
        .as_ref()
        .map(|o| format!("{} | {} | {}", o.q_top, o.q_mid, o.q_low));
    let op_b = b
        .operator
        .as_ref()
        .map(|o| format!("{} | {} | {}", o.q_top, o.q_mid, o.q_low));
    push(
        "operator",
        op_a.as_deref().unwrap_or("<none>"),
        op_b.as_deref().unwrap_or("<none>"),
    );
    out
}

fn cmd_verify(path: &Path) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::invalid(format!("{} is not valid JSON: {e}", path.display())))?;
    if value.get("factorizations").is_some() {
        let doc: ResultDocument = serde_json::from_value(value).map_err(|e| {
            Failure::invalid(format!("{} is not a result document: {e}", path.display()))
        })?;
        verify_document(&doc)
    } else {
        let problem: ProblemFile = serde_json::from_value(value).map_err(|e| {
            Failure::invalid(format!("{} is not a problem file: {e}", path.display()))
        })?;
        verify_problem(&problem)
    }
}
