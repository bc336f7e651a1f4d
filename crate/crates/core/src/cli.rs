//! Command-line front end. Every command builds JSON records; the csv and
//! human modes are formatters over those records.

use std::ffi::OsString;
use std::io::{BufRead, Write};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::constructive::{
    construct_lemma, decompose, validate, validate_lemma, AlgorithmId, Decomposition, Domain, LemmaOutput,
    Outcome, RestrictionSpec, Stage, Target,
};
use crate::error::Error;
use crate::forms::{DiagonalQuaternary, TernaryForm};
use crate::genus::{enumerate_classes_with_bound, genus_of, weighted_average, DEFAULT_DISC_BOUND};
use crate::local::{
    dickson_exception_member, is_eligible, is_locally_represented, local_density, spinor_genus_count_bound,
    SpinorVerdict,
};
use crate::scan::{cross_check, scan_range, ResidueFilter, ScanProblem, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Parser)]
#[command(name = "quadrep", version, about = "Representations by ternary and quaternary quadratic forms")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub output: OutputMode,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solutions, counts, isometries and discriminants of ternary forms.
    #[command(subcommand)]
    Ternary(TernaryCmd),
    /// Local representability and densities.
    #[command(subcommand)]
    Local(LocalCmd),
    /// Exception sets of the regular diagonal forms.
    #[command(subcommand)]
    Dickson(DicksonCmd),
    /// Spinor genus count criterion.
    #[command(subcommand)]
    Spinor(SpinorCmd),
    /// Classes and genera.
    #[command(subcommand)]
    Genus(GenusCmd),
    /// Restricted four-variable decomposition by a constructive variant.
    Decompose(DecomposeArgs),
    /// Triple produced by one of the auxiliary constructions.
    Lemma(LemmaArgs),
    /// Exhaustive scan of a range for restricted representations.
    Scan(ScanArgs),
    /// Compare a constructive variant against brute force over a range.
    CrossCheck(CrossCheckArgs),
    /// Re-validate JSON records read from a file or stdin.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum TernaryCmd {
    Solve(FormN),
    Count(FormN),
    Aut(FormOnly),
    Disc(FormOnly),
}

#[derive(Debug, Subcommand)]
pub enum LocalCmd {
    Density(FormNP),
    Eligible(FormN),
    Represented(FormNP),
}

#[derive(Debug, Subcommand)]
pub enum DicksonCmd {
    Member(FormN),
}

#[derive(Debug, Subcommand)]
pub enum SpinorCmd {
    Bound(FormOnly),
}

#[derive(Debug, Subcommand)]
pub enum GenusCmd {
    Classes {
        #[arg(long)]
        disc: i64,
        #[arg(long, default_value_t = DEFAULT_DISC_BOUND)]
        bound: i64,
    },
    Of(FormOnly),
    /// Aut-weighted average of representation numbers over the given classes.
    Average {
        #[arg(long = "class", required = true)]
        classes: Vec<TernaryForm>,
        #[arg(long)]
        n: i64,
    },
}

#[derive(Debug, Args)]
pub struct FormOnly {
    #[arg(long)]
    pub form: TernaryForm,
}

#[derive(Debug, Args)]
pub struct FormN {
    #[arg(long)]
    pub form: TernaryForm,
    #[arg(long)]
    pub n: i64,
}

#[derive(Debug, Args)]
pub struct FormNP {
    #[arg(long)]
    pub form: TernaryForm,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub p: u64,
    /// Counting depth; defaults to ord_p(2d) + ord_p(n) + 3.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub variant: AlgorithmId,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long)]
    pub id: AlgorithmId,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Range {
    pub lo: i64,
    pub hi: i64,
}

impl std::str::FromStr for Range {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let (a, b) = s.split_once("..").ok_or_else(|| Error::Parse { literal: s.into(), reason: "expected LO..HI".into() })?;
        let p = |x: &str| x.trim().parse::<i64>().map_err(|_| Error::Parse { literal: s.into(), reason: "bad bound".into() });
        Ok(Range { lo: p(a)?, hi: p(b)? })
    }
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub form: DiagonalQuaternary,
    #[arg(long, value_parser = parse_linear)]
    pub linear: [i64; 4],
    #[arg(long)]
    pub target: Target,
    #[arg(long, default_value = "int")]
    pub domain: Domain,
    #[arg(long)]
    pub range: Range,
    #[arg(long = "exclude-mod")]
    pub exclude: Vec<ResidueFilter>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Keep one witness every this many n (0 keeps none).
    #[arg(long, default_value_t = 1024)]
    pub witness_stride: i64,
}

#[derive(Debug, Args)]
pub struct CrossCheckArgs {
    #[arg(long)]
    pub variant: AlgorithmId,
    #[arg(long)]
    pub range: Range,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON-lines file; reads stdin when absent.
    #[arg(long)]
    pub file: Option<std::path::PathBuf>,
}

fn parse_linear(s: &str) -> Result<[i64; 4], Error> {
    let v = crate::forms::parse_int_list(s)?;
    v.try_into().map_err(|_| Error::Parse { literal: s.into(), reason: "expected four integers".into() })
}

/// Domain failure: printed as a record and mapped to exit status 1.
struct Failure(Value);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(json!({ "error": e.to_string() }))
    }
}

type Records = Result<Vec<Value>, (Vec<Value>, Failure)>;

fn fail(e: Error) -> (Vec<Value>, Failure) {
    (vec![], e.into())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns 0 on success, 1 on a domain error and 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let mut text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                if !text.contains("Usage:") {
                    text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
                }
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let mode = cli.output;
    match execute(cli.command) {
        Ok(records) => {
            emit(out, mode, &records);
            0
        }
        Err((partial, Failure(v))) => {
            emit(out, mode, &partial);
            emit(out, mode, std::slice::from_ref(&v));
            if let Some(msg) = v.get("error").and_then(Value::as_str) {
                let _ = writeln!(err, "error: {msg}");
            }
            1
        }
    }
}

fn execute(cmd: Command) -> Records {
    match cmd {
        Command::Ternary(c) => ternary(c).map_err(fail),
        Command::Local(c) => local(c).map_err(fail),
        Command::Dickson(DicksonCmd::Member(a)) => {
            let c = a.form.coeffs();
            if !a.form.is_diagonal() {
                return Err(fail(Error::Invalid("expected a diagonal form".into())));
            }
            let member = dickson_exception_member((c[0], c[1], c[2]), a.n).map_err(fail)?;
            Ok(vec![json!({ "form": diag_str(&a.form), "n": a.n, "member": member })])
        }
        Command::Spinor(SpinorCmd::Bound(a)) => {
            let b = spinor_genus_count_bound(&a.form);
            let verdict = match b.verdict {
                SpinorVerdict::MustBeSingle => "must_be_single",
                SpinorVerdict::PossiblyMultiple => "possibly_multiple",
            };
            Ok(vec![json!({
                "form": a.form.to_string(),
                "discriminant": a.form.discriminant(),
                "verdict": verdict,
                "reason": b.reason,
            })])
        }
        Command::Genus(c) => genus(c).map_err(fail),
        Command::Decompose(a) => decompose_cmd(a),
        Command::Lemma(a) => {
            let o = construct_lemma(a.id, a.n).map_err(fail)?;
            Ok(vec![lemma_record(&o, a.trace)])
        }
        Command::Scan(a) => scan_cmd(a).map_err(fail),
        Command::CrossCheck(a) => {
            let rep = cross_check(a.variant, a.range.lo, a.range.hi).map_err(fail)?;
            let v = serde_json::to_value(&rep).expect("serializable");
            if rep.consistent() {
                Ok(vec![v])
            } else {
                Err((vec![v], Failure(json!({ "error": "cross-check found inconsistencies" }))))
            }
        }
        Command::Verify(a) => verify_cmd(a),
    }
}

fn diag_str(f: &TernaryForm) -> String {
    let c = f.coeffs();
    format!("{},{},{}", c[0], c[1], c[2])
}

fn ternary(c: TernaryCmd) -> Result<Vec<Value>, Error> {
    Ok(vec![match c {
        TernaryCmd::Solve(a) => {
            let sols = a.form.represent_all(a.n)?;
            json!({ "form": a.form.to_string(), "n": a.n, "count": sols.len(), "solutions": sols })
        }
        TernaryCmd::Count(a) => {
            json!({ "form": a.form.to_string(), "n": a.n, "count": a.form.represent_count(a.n)? })
        }
        TernaryCmd::Aut(a) => {
            let auts = a.form.automorphisms();
            json!({ "form": a.form.to_string(), "order": auts.len(), "matrices": auts })
        }
        TernaryCmd::Disc(a) => json!({ "form": a.form.to_string(), "discriminant": a.form.discriminant() }),
    }])
}

fn local(c: LocalCmd) -> Result<Vec<Value>, Error> {
    Ok(vec![match c {
        LocalCmd::Density(a) => {
            let k = a.k.unwrap_or_else(|| crate::local::default_depth(&a.form, a.n, a.p));
            let v = local_density(&a.form, a.n, a.p, k)?;
            json!({ "form": a.form.to_string(), "n": a.n, "p": a.p, "k": k, "value": v.to_string() })
        }
        LocalCmd::Eligible(a) => {
            if a.n < 0 {
                return Err(Error::Range(format!("n = {} is negative", a.n)));
            }
            json!({ "form": a.form.to_string(), "n": a.n, "eligible": is_eligible(&a.form, a.n) })
        }
        LocalCmd::Represented(a) => {
            let v = is_locally_represented(&a.form, a.n, a.p)?;
            json!({
                "form": a.form.to_string(), "n": a.n, "p": v.p, "k": v.k,
                "represented": v.represented, "witness": v.witness,
            })
        }
    }])
}

fn class_list(forms: &[TernaryForm], auts: &[u64]) -> Value {
    Value::Array(
        forms.iter().zip(auts).map(|(f, a)| json!({ "form": f.to_string(), "aut_order": a })).collect(),
    )
}

fn genus(c: GenusCmd) -> Result<Vec<Value>, Error> {
    Ok(vec![match c {
        GenusCmd::Classes { disc, bound } => {
            let classes = enumerate_classes_with_bound(disc, bound)?;
            let auts: Vec<u64> = classes.iter().map(|f| f.automorphisms().len() as u64).collect();
            json!({ "discriminant": disc, "count": classes.len(), "classes": class_list(&classes, &auts) })
        }
        GenusCmd::Of(a) => {
            let g = genus_of(&a.form)?;
            let forms: Vec<TernaryForm> = g.classes.iter().map(|c| c.form).collect();
            json!({
                "form": a.form.to_string(),
                "discriminant": g.discriminant,
                "count": forms.len(),
                "classes": class_list(&forms, &g.aut_orders),
                "spinor_partition": g.spinor_partition,
            })
        }
        GenusCmd::Average { classes, n } => {
            let with_aut: Vec<(TernaryForm, u64)> =
                classes.iter().map(|f| (*f, f.automorphisms().len() as u64)).collect();
            let avg = weighted_average(&with_aut, n)?;
            let auts: Vec<u64> = with_aut.iter().map(|x| x.1).collect();
            json!({ "n": n, "classes": class_list(&classes, &auts), "average": avg.to_string() })
        }
    }])
}

fn decomposition_record(d: &Decomposition, trace: bool) -> Value {
    let [x, y, z, w] = d.quad;
    let mut v = json!({
        "n": d.n, "variant": d.variant.name(), "x": x, "y": y, "z": z, "w": w,
        "linear_value": d.linear_value,
    });
    if trace {
        v["trace"] = serde_json::to_value(&d.trace).expect("serializable");
    }
    v
}

fn decompose_cmd(a: DecomposeArgs) -> Records {
    match decompose(a.variant, a.n).map_err(fail)? {
        Outcome::Found(d) => Ok(vec![decomposition_record(&d, a.trace)]),
        Outcome::Unavailable { variant, n, stage, detail } => Err((
            vec![],
            Failure(json!({
                "n": n, "variant": variant.name(), "unavailable": stage.to_string(), "detail": detail,
                "error": format!("{variant} unavailable at n = {n} ({stage})"),
            })),
        )),
    }
}

fn lemma_record(o: &LemmaOutput, trace: bool) -> Value {
    let [x, y, z] = o.triple;
    let mut v = json!({
        "n": o.n, "lemma": o.lemma.name(), "x": x, "y": y, "z": z,
        "weights": o.weights, "value": o.value,
    });
    if trace {
        v["trace"] = serde_json::to_value(&o.trace).expect("serializable");
    }
    v
}

fn scan_cmd(a: ScanArgs) -> Result<Vec<Value>, Error> {
    let restriction = RestrictionSpec::new(a.linear, a.target, a.domain)?;
    let mut p = ScanProblem::new(a.form, restriction, a.range.lo, a.range.hi)?;
    p.exclude = a.exclude;
    p.witness_stride = a.witness_stride;
    let rep = scan_range(&p, a.jobs)?;
    let mut v = serde_json::to_value(&rep).expect("serializable");
    v["wall_time_ms"] = json!(rep.wall_time.as_millis() as u64);
    Ok(vec![v])
}

/// Checks one record. `Ok(None)` means the record kind is unknown.
fn verify_record(v: &Value) -> Result<Option<bool>, String> {
    let int = |k: &str| v.get(k).and_then(Value::as_i64).ok_or_else(|| format!("missing integer field {k}"));
    let trace = || -> Result<Option<Vec<Stage>>, String> {
        v.get("trace").map(|t| serde_json::from_value(t.clone()).map_err(|e| e.to_string())).transpose()
    };
    if let Some(name) = v.get("variant").and_then(Value::as_str) {
        if v.get("unavailable").is_some() {
            return Ok(Some(false));
        }
        let variant: AlgorithmId = name.parse().map_err(|e: Error| e.to_string())?;
        let n = int("n")?;
        let quad = [int("x")?, int("y")?, int("z")?, int("w")?];
        let (form, restriction) = variant.restriction().ok_or("not a theorem variant")?;
        let linear_value = int("linear_value")?;
        return Ok(Some(match trace()? {
            Some(trace) => {
                let d = Decomposition { n, variant, quad, form, restriction, linear_value, trace };
                validate(&d, n)
            }
            None => {
                form.evaluate(quad) == n as i128
                    && restriction.admits(&quad)
                    && restriction.linear_value(&quad) == linear_value as i128
            }
        }));
    }
    if let Some(name) = v.get("lemma").and_then(Value::as_str) {
        let lemma: AlgorithmId = name.parse().map_err(|e: Error| e.to_string())?;
        let n = int("n")?;
        let triple = [int("x")?, int("y")?, int("z")?];
        let (weights, m, k) = lemma.lemma_equation().ok_or("not a lemma")?;
        return Ok(Some(match trace()? {
            Some(trace) => {
                let o = LemmaOutput { lemma, n, triple, weights, value: int("value")?, trace };
                validate_lemma(&o)
            }
            None => {
                let got: i128 = (0..3).map(|i| weights[i] as i128 * (triple[i] as i128).pow(2)).sum();
                got == m as i128 * n as i128 - k as i128
            }
        }));
    }
    if let (Some(problem), Some(witnesses)) = (v.get("problem"), v.get("witnesses")) {
        let p: ScanProblem = serde_json::from_value(problem.clone()).map_err(|e| e.to_string())?;
        let ws: std::collections::BTreeMap<i64, Witness> =
            serde_json::from_value(witnesses.clone()).map_err(|e| e.to_string())?;
        return Ok(Some(ws.values().all(|w| w.check(&p.form, &p.restriction))));
    }
    if let (Some(form), Some(sols)) = (v.get("form").and_then(Value::as_str), v.get("solutions")) {
        let f: TernaryForm = form.parse().map_err(|e: Error| e.to_string())?;
        let n = int("n")?;
        let sols: Vec<[i64; 3]> = serde_json::from_value(sols.clone()).map_err(|e| e.to_string())?;
        let all = f.represent_all(n).map_err(|e| e.to_string())?;
        return Ok(Some(sols == all));
    }
    Ok(None)
}

fn verify_cmd(a: VerifyArgs) -> Records {
    let reader: Box<dyn BufRead> = match &a.file {
        Some(path) => match std::fs::File::open(path) {
            Ok(f) => Box::new(std::io::BufReader::new(f)),
            Err(e) => return Err(fail(Error::Invalid(format!("{}: {e}", path.display())))),
        },
        None => Box::new(std::io::BufReader::new(std::io::stdin())),
    };
    let mut out = Vec::new();
    let mut bad = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| fail(Error::Invalid(e.to_string())))?;
        if line.trim().is_empty() {
            continue;
        }
        let status = match serde_json::from_str::<Value>(&line) {
            Err(e) => Err(format!("not JSON: {e}")),
            Ok(v) => verify_record(&v),
        };
        let rec = match status {
            Ok(Some(true)) => json!({ "line": i + 1, "valid": true }),
            Ok(Some(false)) => json!({ "line": i + 1, "valid": false }),
            Ok(None) => json!({ "line": i + 1, "valid": false, "reason": "unrecognized record" }),
            Err(reason) => json!({ "line": i + 1, "valid": false, "reason": reason }),
        };
        if rec["valid"] != Value::Bool(true) {
            bad += 1;
        }
        out.push(rec);
    }
    if bad == 0 {
        Ok(out)
    } else {
        Err((out, Failure(json!({ "error": format!("{bad} record(s) failed verification") }))))
    }
}

fn emit(out: &mut dyn Write, mode: OutputMode, records: &[Value]) {
    for r in records {
        let _ = match mode {
            OutputMode::Json => writeln!(out, "{r}"),
            OutputMode::Human => write_human(out, r),
            OutputMode::Csv => write_csv(out, r),
        };
    }
}

fn write_human(out: &mut dyn Write, r: &Value) -> std::io::Result<()> {
    match r.as_object() {
        Some(map) => {
            for (k, v) in map {
                match v {
                    Value::String(s) => writeln!(out, "{k}: {s}")?,
                    other => writeln!(out, "{k}: {other}")?,
                }
            }
            writeln!(out)
        }
        None => writeln!(out, "{r}"),
    }
}

fn csv_cell(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

/// Scan reports print their exceptions one per line; other records print a
/// header row and a value row.
fn write_csv(out: &mut dyn Write, r: &Value) -> std::io::Result<()> {
    if let (Some(_), Some(exc)) = (r.get("problem"), r.get("exceptions").and_then(Value::as_array)) {
        writeln!(out, "n")?;
        for n in exc {
            writeln!(out, "{n}")?;
        }
        return Ok(());
    }
    let empty = Map::new();
    let map = r.as_object().unwrap_or(&empty);
    let keys: Vec<&String> = map.keys().collect();
    let cells: Vec<String> = map.values().map(csv_cell).collect();
    writeln!(out, "{}", keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","))?;
    writeln!(out, "{}", cells.join(","))
}
