//! `qfrm`: weight distributions, form classification, censuses, coset
//! spectra and formula-versus-oracle verification from the command line.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or parameter
//! error, 3 internal invariant violation.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use qfrm_core::census::{census_exhaustive, census_formula, count_even_rank, count_odd_rank, form_count, DEFAULT_FORM_BUDGET};
use qfrm_core::codes::{
    brute_force_distribution, coset_assembled_distribution, distribution, weight_enumerator_text,
    CodeFamily, WeightDistribution, DEFAULT_CODEWORD_BUDGET,
};
use qfrm_core::field::{prime_power, FiniteField};
use qfrm_core::forms::{admissible_classes, canonical_form, QuadraticForm, RankType, TypeTag, DEFAULT_POINT_BUDGET};
use qfrm_core::spectra::{
    coset_weight_multiset, spectrum_closed_form, spectrum_merged, spectrum_oracle, spectrum_oracle_merged,
    CClass, CosetQuery, SpectrumMultiset, DEFAULT_SPECTRUM_BUDGET,
};
use qfrm_core::{BigUint, CensusClass, Error};

#[derive(Parser)]
#[command(name = "qfrm", version, about = "Quadratic forms and second-order Reed-Muller weight distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Rm2,
    Hrm2,
    Prm2,
}

impl From<Family> for CodeFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Rm2 => CodeFamily::Rm2,
            Family::Hrm2 => CodeFamily::Hrm2,
            Family::Prm2 => CodeFamily::Prm2,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Closed-form tables
    Table,
    /// Sum of coset weight multisets (q > 2)
    Coset,
    /// Enumerate every codeword
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TypeArg {
    Plus,
    Minus,
    Untyped,
}

impl From<TypeArg> for TypeTag {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::Plus => TypeTag::Plus,
            TypeArg::Minus => TypeTag::Minus,
            TypeArg::Untyped => TypeTag::Untyped,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CClassArg {
    Zero,
    Square,
    Nonsquare,
    Nonzero,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scope {
    Census,
    Spectra,
    Codes,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Weight distribution of RM_q(2,m), HRM_q(2,m) or PRM_q(2,m)
    Dist {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_enum, default_value = "table")]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_CODEWORD_BUDGET)]
        max_codewords: u128,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rank, type, zero count and canonical representative of a form
    Classify {
        /// Form text, e.g. "q=3 m=2; c[1][2]=2"
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        form: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Number of forms per (rank, type) class
    Count {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long = "type", value_enum)]
        type_tag: Option<TypeArg>,
        /// Classify every form instead of using the closed forms
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = DEFAULT_FORM_BUDGET)]
        max_forms: u128,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Zero counts of Q + L + c over linear L and a class of constants c
    Spectrum {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long = "type", value_enum)]
        type_tag: Option<TypeArg>,
        #[arg(long, value_enum, default_value = "all")]
        c_class: CClassArg,
        /// Report Hamming weights of the coset Q + RM_q(1,m) instead
        #[arg(long)]
        coset_weights: bool,
        /// Evaluate the canonical form at every point instead of using the closed forms
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_SPECTRUM_BUDGET)]
        max_points: u128,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare closed forms with brute-force oracles
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        scope: Scope,
        /// Field orders: a list and/or inclusive ranges, e.g. "2,3" or "2..5"
        #[arg(long)]
        q: String,
        /// Dimensions, same syntax as --q
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = DEFAULT_SPECTRUM_BUDGET)]
        max_points: u128,
        #[arg(long, default_value_t = DEFAULT_FORM_BUDGET)]
        max_forms: u128,
        #[arg(long, default_value_t = DEFAULT_CODEWORD_BUDGET)]
        max_codewords: u128,
    },
    /// Modulus and basic data of GF(q)
    DescribeField {
        #[arg(long)]
        q: u64,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_internal() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Dist {
            family,
            q,
            m,
            format,
            method,
            max_codewords,
            output,
        } => {
            let family = CodeFamily::from(family);
            let wd = match method {
                Method::Table => distribution(family, q, m)?,
                Method::Coset if family == CodeFamily::Rm2 => coset_assembled_distribution(q, m)?,
                Method::Coset => return Err(usage("--method coset applies to rm2 only")),
                Method::Brute => brute_force_distribution(family, q, m, max_codewords)?,
            };
            emit(output, render_distribution(&wd, format)?)?;
        }
        Command::Classify {
            form,
            file,
            q,
            m,
            format,
            output,
        } => {
            let text = match (form, file) {
                (Some(t), _) => t,
                (None, Some(path)) => fs::read_to_string(path)?,
                (None, None) => unreachable!("clap requires one of --form/--file"),
            };
            let form = QuadraticForm::parse(text.trim())?;
            let field_q = form.field().order() as u64;
            if q.is_some_and(|q| q != field_q) {
                return Err(usage(format!("--q {} disagrees with the form's q={field_q}", q.unwrap())));
            }
            if let Some(m) = m {
                if m != form.m() {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        got: form.m(),
                    }
                    .into());
                }
            }
            emit(output, render_classification(&form, format)?)?;
        }
        Command::Count {
            q,
            m,
            rank,
            type_tag,
            exhaustive,
            max_forms,
            format,
            output,
        } => emit(output, render_count(q, m, rank, type_tag, exhaustive, max_forms, format)?)?,
        Command::Spectrum {
            q,
            m,
            rank,
            type_tag,
            c_class,
            coset_weights,
            oracle,
            max_points,
            format,
            output,
        } => {
            let text = render_spectrum(q, m, rank, type_tag, c_class, coset_weights, oracle, max_points, format)?;
            emit(output, text)?;
        }
        Command::Verify {
            scope,
            q,
            m,
            max_points,
            max_forms,
            max_codewords,
        } => {
            let qs = parse_values(&q, "--q", |q| prime_power(q).is_some())?;
            let ms = parse_values(&m, "--m", |m| m >= 1)?;
            let budgets = Budgets {
                points: max_points,
                forms: max_forms,
                codewords: max_codewords,
            };
            return verify(scope, &qs, &ms, budgets);
        }
        Command::DescribeField { q } => {
            let f = FiniteField::with_order(q)?;
            let modulus: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
            let mut out = String::new();
            writeln!(out, "q: {}", f.order()).unwrap();
            writeln!(out, "characteristic: {}", f.characteristic()).unwrap();
            writeln!(out, "degree: {}", f.degree()).unwrap();
            writeln!(out, "modulus: {}", modulus.join(",")).unwrap();
            emit(None, out)?;
        }
    }
    Ok(0)
}

fn emit(output: Option<PathBuf>, text: String) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_line(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn render_distribution(wd: &WeightDistribution, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Text => format!("{}\n", weight_enumerator_text(wd)),
        Format::Json => json_line(&wd.to_json()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["weight", "frequency"]).map_err(csv_failure)?;
            for (weight, freq) in wd.entries() {
                w.write_record([weight.to_string(), freq.to_string()]).map_err(csv_failure)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| usage(e.to_string()))?).expect("csv output is utf-8")
        }
    })
}

fn csv_failure(e: csv::Error) -> Failure {
    usage(e.to_string())
}

fn no_csv(what: &str) -> Failure {
    usage(format!("--format csv is not available for {what}"))
}

fn render_classification(form: &QuadraticForm, format: Format) -> Result<String, Failure> {
    let class = form.classify()?;
    let zeros = form.zero_count_exhaustive(DEFAULT_POINT_BUDGET)?;
    let canonical = canonical_form(form.field().clone(), form.m(), class)?;
    Ok(match format {
        Format::Text => format!(
            "rank: {}\ntype: {}\nzeros: {zeros}\ncanonical: {canonical}\n",
            class.rank, class.type_tag
        ),
        Format::Json => json_line(&serde_json::json!({
            "q": form.field().order(),
            "m": form.m(),
            "rank": class.rank,
            "type": class.type_tag,
            "zero_count": zeros.to_string(),
            "canonical": canonical.to_string(),
        })),
        Format::Csv => return Err(no_csv("classify")),
    })
}

fn render_count(
    q: u64,
    m: usize,
    rank: Option<usize>,
    type_tag: Option<TypeArg>,
    exhaustive: bool,
    max_forms: u128,
    format: Format,
) -> Result<String, Failure> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let even_q = p == 2;
    let Some(rank) = rank else {
        if type_tag.is_some() {
            return Err(usage("--type needs --rank"));
        }
        let table = if exhaustive {
            census_exhaustive(q, m, max_forms)?
        } else {
            census_formula(q, m)?
        };
        return match format {
            Format::Text => Ok(format!("{table}\n")),
            Format::Json => Ok(json_line(&table.to_json())),
            Format::Csv => Err(no_csv("count")),
        };
    };
    if rank > m {
        return Err(Error::OutOfRange(format!("rank {rank} exceeds m = {m}")).into());
    }
    let tags: Vec<TypeTag> = match (type_tag.map(TypeTag::from), rank) {
        (Some(t), 0) if t != TypeTag::Plus => {
            return Err(Error::InconsistentRankType("rank 0 has type plus".into()).into())
        }
        (_, 0) => vec![TypeTag::Plus],
        (Some(TypeTag::Untyped), r) if r % 2 == 0 => {
            return Err(Error::InconsistentRankType(format!("even rank {r} needs a type")).into())
        }
        (Some(t), r) if r % 2 == 1 && even_q && t != TypeTag::Untyped => {
            return Err(Error::InconsistentRankType(format!("odd rank {r} over even q is untyped")).into())
        }
        (Some(t), r) if r % 2 == 1 && !even_q && t != TypeTag::Untyped => {
            return Err(usage(
                "odd-rank counts over odd q are tabulated for both types together; omit --type",
            ))
        }
        (Some(t), _) => vec![t],
        (None, r) if r % 2 == 0 => vec![TypeTag::Plus, TypeTag::Minus],
        (None, _) => vec![TypeTag::Untyped],
    };
    let mut counts = Vec::new();
    for &t in &tags {
        let n = if exhaustive {
            let table = census_exhaustive(q, m, max_forms)?;
            let class = CensusClass::for_class(RankType::new(rank, t), even_q);
            table.get(rank, class).cloned().unwrap_or_default()
        } else if rank == 0 {
            1u32.into()
        } else if rank % 2 == 1 {
            count_odd_rank(q, m, rank)?
        } else {
            count_even_rank(q, m, rank, t)?
        };
        counts.push((t, n));
    }
    Ok(match format {
        Format::Text if counts.len() == 1 => format!("{}\n", counts[0].1),
        Format::Text => counts
            .iter()
            .map(|(t, n)| format!("{}: {n}\n", t.as_str()))
            .collect(),
        Format::Json => {
            let entries: Vec<_> = counts
                .iter()
                .map(|(t, n)| serde_json::json!({"rank": rank, "type": t, "count": n.to_string()}))
                .collect();
            json_line(&serde_json::json!({"q": q, "m": m, "entries": entries}))
        }
        Format::Csv => return Err(no_csv("count")),
    })
}

#[allow(clippy::too_many_arguments)]
fn render_spectrum(
    q: u64,
    m: usize,
    rank: usize,
    type_tag: Option<TypeArg>,
    c_class: CClassArg,
    coset_weights: bool,
    oracle: bool,
    max_points: u128,
    format: Format,
) -> Result<String, Failure> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let even_q = p == 2;
    let tag = match type_tag {
        Some(t) => t.into(),
        None if rank == 0 => TypeTag::Plus,
        None if rank % 2 == 1 && even_q => TypeTag::Untyped,
        None => return Err(usage(format!("rank {rank} over GF({q}) needs --type plus|minus"))),
    };
    let rt = RankType::new(rank, tag);
    rt.validate(even_q, m)?;
    let classes: Vec<(String, CClass)> = match c_class {
        CClassArg::All => Vec::new(),
        CClassArg::Zero => vec![("zero".into(), CClass::Zero)],
        CClassArg::Square => vec![("square".into(), CClass::Square)],
        CClassArg::Nonsquare => vec![("nonsquare".into(), CClass::NonSquare)],
        CClassArg::Nonzero => vec![("nonzero".into(), CClass::AnyNonzero)],
    };
    if coset_weights && c_class != CClassArg::All {
        return Err(usage("--coset-weights covers every constant; drop --c-class"));
    }
    let form = if oracle {
        Some(canonical_form(Arc::new(FiniteField::with_order(q)?), m, rt)?)
    } else {
        None
    };

    let (label, multiset): (String, SpectrumMultiset) = if let Some((label, class)) = classes.into_iter().next() {
        let query = CosetQuery::new(q, m, rt, class);
        query.validate()?;
        let ms = match &form {
            Some(f) => spectrum_oracle(f, class, max_points)?,
            None => spectrum_closed_form(&query)?,
        };
        (label, ms)
    } else {
        let ms = match &form {
            Some(f) => spectrum_oracle_merged(f, max_points)?,
            None => spectrum_merged(q, m, rt)?,
        };
        if coset_weights {
            if q == 2 {
                return Err(Error::UnsupportedForBinary.into());
            }
            let total = BigUint::from(q).pow(m as u32);
            let weights = match form {
                Some(_) => ms.complemented(&total)?,
                None => coset_weight_multiset(q, m, rt)?,
            };
            ("coset_weights".into(), weights)
        } else {
            ("all".into(), ms)
        }
    };
    Ok(match format {
        Format::Text => format!("{multiset}\n"),
        Format::Json => json_line(&multiset.to_json(q, m, rt, &label)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["value", "multiplicity"]).map_err(csv_failure)?;
            for (v, k) in multiset.entries() {
                w.write_record([v.to_string(), k.to_string()]).map_err(csv_failure)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| usage(e.to_string()))?).expect("csv output is utf-8")
        }
    })
}

/// Parses `"2,3"`, `"2..5"` or `"2-5"` (inclusive), and mixtures. Values
/// failing `admit` are an error when listed explicitly and dropped when a
/// range sweeps over them.
fn parse_values(text: &str, flag: &str, admit: fn(u64) -> bool) -> Result<Vec<u64>, Failure> {
    let bad = || usage(format!("{flag}: cannot parse '{text}'"));
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let range = item.split_once("..").or_else(|| item.split_once('-'));
        match range {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
                if a > b {
                    return Err(usage(format!("{flag}: empty range '{item}'")));
                }
                out.extend((a..=b).filter(|&v| admit(v)));
            }
            None => {
                let v: u64 = item.parse().map_err(|_| bad())?;
                if !admit(v) {
                    return Err(usage(format!("{flag}: {v} is not admissible")));
                }
                out.push(v);
            }
        }
    }
    if out.is_empty() {
        return Err(usage(format!("{flag}: no admissible values in '{text}'")));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Copy)]
struct Budgets {
    points: u128,
    forms: u128,
    codewords: u128,
}

enum CaseResult {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn verify(scope: Scope, qs: &[u64], ms: &[u64], budgets: Budgets) -> Outcome {
    let mut stdout = io::stdout().lock();
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    for &q in qs {
        for &m in ms {
            let m = m as usize;
            let mut cases = Vec::new();
            if matches!(scope, Scope::Census | Scope::All) {
                cases.push((format!("census q={q} m={m}"), verify_census(q, m, budgets)));
            }
            if matches!(scope, Scope::Spectra | Scope::All) {
                cases.push((format!("spectra q={q} m={m}"), verify_spectra(q, m, budgets)));
            }
            if matches!(scope, Scope::Codes | Scope::All) {
                for family in CodeFamily::ALL {
                    cases.push((format!("codes {family} q={q} m={m}"), verify_code(family, q, m, budgets)));
                }
            }
            for (name, result) in cases {
                let line = match result {
                    Ok(CaseResult::Pass(d)) => {
                        pass += 1;
                        format!("PASS {name} ({d})")
                    }
                    Ok(CaseResult::Fail(d)) => {
                        fail += 1;
                        format!("FAIL {name}: {d}")
                    }
                    Ok(CaseResult::Skip(d)) => {
                        skip += 1;
                        format!("SKIP {name}: {d}")
                    }
                    Err(e) if e.is_internal() => return Err(e.into()),
                    Err(e) => {
                        fail += 1;
                        format!("FAIL {name}: {e}")
                    }
                };
                writeln!(stdout, "{line}")?;
            }
        }
    }
    writeln!(stdout, "summary: {pass} passed, {fail} failed, {skip} skipped")?;
    Ok(if fail == 0 { 0 } else { 1 })
}

fn skip_on_budget(r: Result<CaseResult, Error>) -> Result<CaseResult, Error> {
    match r {
        Err(Error::BudgetExceeded { needed, budget }) => {
            Ok(CaseResult::Skip(format!("needs {needed} evaluations, budget {budget}")))
        }
        Err(Error::UnsupportedParameters(why)) => Ok(CaseResult::Skip(why)),
        other => other,
    }
}

fn verify_census(q: u64, m: usize, b: Budgets) -> Result<CaseResult, Error> {
    skip_on_budget((|| {
        let formula = census_formula(q, m)?;
        let brute = census_exhaustive(q, m, b.forms)?;
        let forms = form_count(q, m).unwrap_or(u128::MAX);
        Ok(if formula.same_counts(&brute) {
            CaseResult::Pass(format!("{forms} forms classified"))
        } else {
            CaseResult::Fail(format!("formula {formula} vs exhaustive {brute}"))
        })
    })())
}

fn verify_spectra(q: u64, m: usize, b: Budgets) -> Result<CaseResult, Error> {
    skip_on_budget((|| {
        let field = Arc::new(FiniteField::with_order(q)?);
        let mut cases = 0;
        for rt in admissible_classes(field.is_even(), m) {
            let form = canonical_form(field.clone(), m, rt)?;
            for c in CClass::partition(field.is_even(), rt.rank) {
                let formula = spectrum_closed_form(&CosetQuery::new(q, m, rt, c))?;
                let oracle = spectrum_oracle(&form, c, b.points)?;
                if formula != oracle {
                    return Ok(CaseResult::Fail(format!(
                        "rank {} type {} c={c}: formula {formula} vs oracle {oracle}",
                        rt.rank, rt.type_tag
                    )));
                }
                cases += 1;
            }
            let merged = spectrum_merged(q, m, rt)?;
            let oracle = spectrum_oracle_merged(&form, b.points)?;
            if merged != oracle {
                return Ok(CaseResult::Fail(format!(
                    "rank {} type {} merged: formula {merged} vs oracle {oracle}",
                    rt.rank, rt.type_tag
                )));
            }
        }
        Ok(CaseResult::Pass(format!("{cases} class/constant cases and merged tallies")))
    })())
}

fn verify_code(family: CodeFamily, q: u64, m: usize, b: Budgets) -> Result<CaseResult, Error> {
    skip_on_budget((|| {
        let table = distribution(family, q, m)?;
        let brute = brute_force_distribution(family, q, m, b.codewords)?;
        if table != brute {
            return Ok(CaseResult::Fail(format!("table {table} vs brute force {brute}")));
        }
        if family == CodeFamily::Rm2 && q > 2 {
            let coset = coset_assembled_distribution(q, m)?;
            if coset != table {
                return Ok(CaseResult::Fail(format!("table {table} vs coset assembly {coset}")));
            }
            return Ok(CaseResult::Pass("triple agreement".into()));
        }
        Ok(CaseResult::Pass("table equals brute force".into()))
    })())
}
