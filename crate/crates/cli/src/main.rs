//! `uam`: parse, validate and query unawareness models.
//!
//! Exit status is 0 when the request succeeds with no violations, 1 when a
//! check finds a violation, and 2 for unreadable or malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use unaware::dsl::{parse_event_expr, parse_model, serialize_model, Diagnostic, DiagnosticCode};
use unaware::epistemics::{validate_possibility, Knowledge, SuiteConfig};
use unaware::event::Event;
use unaware::harness::{
    generate_model, run_suite, search_counterexample, GenConfig, SearchMode, Shape,
};
use unaware::preferences::{
    check_pref_properties, derive_possibility, pref_epistemic, EpistemicKind, WeightScheme,
};
use unaware::{ClaimId, Lattice, StateSet, UnawarenessModel, Witness};

/// Version of the JSON documents printed by `--structured`.
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "uam", version, about = "Check and query finite unawareness models")]
struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    structured: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the lattice, the possibility correspondence and the preference properties.
    Validate { file: PathBuf },
    /// Evaluate an event expression.
    Eval {
        file: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// Print the correspondence revealed by the preferences.
    DerivePi { file: PathBuf },
    /// Compare preference-based and correspondence-based operators on every event.
    Equiv {
        file: PathBuf,
        /// Refuse models with a larger space.
        #[arg(long, default_value_t = 8)]
        max_states_per_space: usize,
    },
    /// Check claims against a model.
    Suite {
        file: PathBuf,
        /// Comma-separated claim ids, `theorems` or `all`.
        #[arg(long, default_value = "theorems")]
        claims: String,
        /// Also write the structured report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate a random valid model.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        /// Output file; standard output if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search generated models for a counterexample to a claim.
    Fuzz {
        #[arg(long)]
        claim: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Mutate every generated model once before checking.
        #[arg(long)]
        mutants: bool,
        #[command(flatten)]
        gen: GenArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    None,
    Uniform,
    Random,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "random")]
    shape: Shape,
    #[arg(long, default_value_t = 4)]
    max_spaces: usize,
    #[arg(long, default_value_t = 4)]
    max_states: usize,
    #[arg(long, value_enum, default_value_t = Weights::Random)]
    weights: Weights,
}

impl GenArgs {
    fn config(&self) -> GenConfig {
        GenConfig {
            seed: self.seed,
            max_spaces: self.max_spaces,
            max_states_per_space: self.max_states,
            shape: self.shape,
            weight_scheme: match self.weights {
                Weights::None => None,
                Weights::Uniform => Some(WeightScheme::Uniform),
                Weights::Random => Some(WeightScheme::SeededRandom(0)),
            },
        }
    }
}

/// Result of a subcommand: exit status, text lines and the JSON body.
struct Outcome {
    code: u8,
    lines: Vec<String>,
    body: Value,
}

impl Outcome {
    fn new(ok: bool, lines: Vec<String>, body: Value) -> Self {
        Outcome {
            code: if ok { 0 } else { 1 },
            lines,
            body,
        }
    }
}

/// Errors raised before any check runs. Printed to standard error.
struct Failure {
    messages: Vec<String>,
    /// Lattice violations found while parsing are semantic, not syntactic.
    semantic: bool,
}

impl Failure {
    fn msg(m: impl Into<String>) -> Self {
        Failure {
            messages: vec![m.into()],
            semantic: false,
        }
    }

    fn diagnostics(file: &Path, diags: &[Diagnostic]) -> Self {
        let name = file.display().to_string();
        Failure {
            messages: diags.iter().map(|d| d.render(&name)).collect(),
            semantic: diags.iter().all(|d| d.code == DiagnosticCode::InvalidLattice),
        }
    }
}

fn load(file: &Path) -> Result<UnawarenessModel, Failure> {
    let src = fs::read_to_string(file)
        .map_err(|e| Failure::msg(format!("{}: {e}", file.display())))?;
    parse_model(&src).map_err(|d| Failure::diagnostics(file, &d))
}

fn names(lat: &Lattice, set: &StateSet) -> Vec<String> {
    set.iter().map(|s| lat.state_name(s).to_owned()).collect()
}

fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

fn event_json(lat: &Lattice, e: &Event) -> Value {
    json!({
        "space": lat.space_name(e.space()),
        "base": names(lat, e.base()),
        "members": names(lat, &lat.members(e)),
        "vacuous": e.is_vacuous(),
    })
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn validate(file: &Path) -> Result<Outcome, Failure> {
    let m = load(file)?;
    let lat = &m.lattice;
    let mut ok = true;
    let mut lines = vec![format!(
        "lattice: ok ({} spaces, {} states)",
        lat.space_count(),
        lat.state_count()
    )];
    let possibility = m.correspondence.as_ref().map(|c| {
        let report = validate_possibility(lat, c);
        if report.is_valid() {
            lines.push("possibility: all properties hold".into());
        } else {
            ok = false;
            for (name, w) in report.failures() {
                lines.push(format!("possibility: FAIL {name}: {w}"));
            }
        }
        report
    });
    let preferences = m.preferences.as_ref().map(|p| {
        let report = check_pref_properties(lat, p);
        if report.all_hold() {
            lines.push("preferences: all properties hold".into());
        } else {
            ok = false;
            for (prop, w) in report.failures() {
                lines.push(format!("preferences: FAIL {prop}: {w}"));
            }
        }
        report
    });
    let consistent = match (&m.correspondence, &m.preferences) {
        (Some(c), Some(p)) => {
            let revealed = derive_possibility(lat, p);
            let differing: Vec<String> = lat
                .states()
                .filter(|&w| revealed.get(w) != c.get(w))
                .map(|w| lat.state_name(w).to_owned())
                .collect();
            if differing.is_empty() {
                lines.push("consistency: preferences reveal the stated correspondence".into());
            } else {
                ok = false;
                lines.push(format!(
                    "consistency: FAIL revealed correspondence differs [states: {}]",
                    differing.join(", ")
                ));
            }
            Some(differing)
        }
        _ => None,
    };
    Ok(Outcome::new(
        ok,
        lines,
        json!({
            "lattice": { "spaces": lat.space_count(), "states": lat.state_count() },
            "possibility": possibility.as_ref().map(to_value),
            "preferences": preferences.as_ref().map(to_value),
            "inconsistent_states": consistent,
        }),
    ))
}

fn eval(file: &Path, expr: &str) -> Result<Outcome, Failure> {
    let m = load(file)?;
    let lat = &m.lattice;
    let parsed = parse_event_expr(expr, &m).map_err(|d| Failure::msg(d.render("<expr>")))?;
    let e = match m.evaluate(&parsed) {
        Ok(e) => e,
        Err(err) => {
            return Ok(Outcome::new(
                false,
                vec![format!("error: {err}")],
                json!({ "error": err.to_string() }),
            ))
        }
    };
    let lines = vec![
        format!("expression: {}", parsed.display(lat)),
        format!("base-space: {}", lat.space_name(e.space())),
        format!("base: {}", braces(&names(lat, e.base()))),
        format!("members: {}", braces(&names(lat, &lat.members(&e)))),
    ];
    Ok(Outcome::new(true, lines, event_json(lat, &e)))
}

fn derive_pi(file: &Path) -> Result<Outcome, Failure> {
    let m = load(file)?;
    let lat = &m.lattice;
    let p = m
        .preferences
        .as_ref()
        .ok_or_else(|| Failure::msg(format!("{}: the model has no weights", file.display())))?;
    let c = derive_possibility(lat, p);
    let mut lines = Vec::new();
    let mut map = serde_json::Map::new();
    for w in lat.states() {
        let value = names(lat, c.get(w));
        lines.push(format!("pi({}) = {}", lat.state_name(w), braces(&value)));
        map.insert(lat.state_name(w).to_owned(), json!(value));
    }
    Ok(Outcome::new(true, lines, json!({ "pi": map })))
}

fn equiv(file: &Path, cap: usize) -> Result<Outcome, Failure> {
    let m = load(file)?;
    let lat = &m.lattice;
    let p = m
        .preferences
        .as_ref()
        .ok_or_else(|| Failure::msg(format!("{}: the model has no weights", file.display())))?;
    if let Some(big) = lat.spaces().find(|&s| lat.states_of(s).len() > cap) {
        return Err(Failure::msg(format!(
            "{}: space {} has {} states, above the cap of {cap}; raise --max-states-per-space to check it exhaustively",
            file.display(),
            lat.space_name(big),
            lat.states_of(big).len()
        )));
    }
    let c = derive_possibility(lat, p);
    let k = Knowledge::unchecked(lat, &c);
    let events = lat.all_events();
    let mut mismatches: Vec<Witness> = Vec::new();
    for e in &events {
        let pairs = [
            ("K", EpistemicKind::Knows, k.know(e)),
            ("A", EpistemicKind::Aware, k.aware(e)),
            ("U", EpistemicKind::Unaware, k.unaware(e)),
        ];
        for (op, kind, expected) in pairs {
            let got = pref_epistemic(lat, p, kind, e);
            if got != expected {
                mismatches.push(
                    Witness::new(format!(
                        "{op}: preference-based {} but correspondence-based {}",
                        got.display(lat),
                        expected.display(lat)
                    ))
                    .event(lat, e),
                );
            }
        }
    }
    let ok = mismatches.is_empty();
    let lines = if ok {
        vec![format!("all {} events checked, K~=K, A~=A, U~=U", events.len())]
    } else {
        let mut l = vec![format!("{} of {} events checked disagree", mismatches.len(), events.len())];
        l.extend(mismatches.iter().map(|w| format!("FAIL {w}")));
        l
    };
    Ok(Outcome::new(
        ok,
        lines,
        json!({ "events": events.len(), "mismatches": to_value(&mismatches) }),
    ))
}

fn parse_claims(list: &str) -> Result<Vec<ClaimId>, Failure> {
    match list.trim() {
        "all" => Ok(ClaimId::all()),
        "theorems" => Ok(ClaimId::theorems()),
        _ => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.parse::<ClaimId>().map_err(|e| Failure::msg(e.to_string())))
            .collect(),
    }
}

fn suite(file: &Path, claims: &str, report: Option<&Path>) -> Result<Outcome, Failure> {
    let claims = parse_claims(claims)?;
    let m = load(file)?;
    let r = run_suite(&m, &claims, SuiteConfig::default());
    let lines = r.results.iter().map(ToString::to_string).collect();
    let body = json!({ "results": to_value(&r.results) });
    if let Some(path) = report {
        let doc = with_header("suite", r.no_failures(), &body);
        fs::write(path, serde_json::to_string_pretty(&doc).expect("json") + "\n")
            .map_err(|e| Failure::msg(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome::new(r.no_failures(), lines, body))
}

fn gen(args: &GenArgs, output: Option<&Path>) -> Result<Outcome, Failure> {
    let m = generate_model(&args.config()).map_err(|e| Failure::msg(e.to_string()))?;
    let text = serialize_model(&m);
    let mut lines = Vec::new();
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Failure::msg(format!("{}: {e}", path.display())))?;
            lines.push(format!(
                "wrote {} ({} spaces, {} states)",
                path.display(),
                m.lattice.space_count(),
                m.lattice.state_count()
            ));
        }
        None => lines.extend(text.lines().map(str::to_owned)),
    }
    Ok(Outcome::new(true, lines, json!({ "model": text })))
}

fn fuzz(claim: &str, trials: u64, mutants: bool, args: &GenArgs) -> Result<Outcome, Failure> {
    let claim: ClaimId = claim.parse().map_err(|e: unaware::report::UnknownClaim| Failure::msg(e.to_string()))?;
    let mode = if mutants { SearchMode::Mutants } else { SearchMode::Valid };
    let found = search_counterexample(&args.config(), claim, trials, mode)
        .map_err(|e| Failure::msg(e.to_string()))?;
    Ok(match found {
        None => Outcome::new(
            true,
            vec![format!("no counterexample to {claim} in {trials} trials")],
            json!({ "claim": claim, "trials": trials, "counterexample": null }),
        ),
        Some(cx) => {
            let text = serialize_model(&cx.model);
            let mut lines = vec![
                format!("counterexample to {claim} at trial {} (seed {})", cx.trial, cx.seed),
                cx.result.to_string(),
                "shrunk model:".into(),
            ];
            lines.extend(text.lines().map(|l| format!("  {l}")));
            Outcome::new(
                false,
                lines,
                json!({
                    "claim": claim,
                    "trials": trials,
                    "counterexample": {
                        "trial": cx.trial,
                        "seed": cx.seed,
                        "result": to_value(&cx.result),
                        "model": text,
                    },
                }),
            )
        }
    })
}

fn with_header(command: &str, ok: bool, body: &Value) -> Value {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": command, "ok": ok });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b.clone());
    }
    doc
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, result) = match &cli.command {
        Command::Validate { file } => ("validate", validate(file)),
        Command::Eval { file, expr } => ("eval", eval(file, expr)),
        Command::DerivePi { file } => ("derive-pi", derive_pi(file)),
        Command::Equiv {
            file,
            max_states_per_space,
        } => ("equiv", equiv(file, *max_states_per_space)),
        Command::Suite {
            file,
            claims,
            report,
        } => ("suite", suite(file, claims, report.as_deref())),
        Command::Gen { gen: g, output } => ("gen", gen(g, output.as_deref())),
        Command::Fuzz {
            claim,
            trials,
            mutants,
            gen: g,
        } => ("fuzz", fuzz(claim, *trials, *mutants, g)),
    };
    match result {
        Ok(out) => {
            if cli.structured {
                let doc = with_header(name, out.code == 0, &out.body);
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            } else {
                for l in &out.lines {
                    println!("{l}");
                }
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            for m in &f.messages {
                eprintln!("{m}");
            }
            if cli.structured {
                let doc = with_header(name, false, &json!({ "errors": f.messages }));
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
            ExitCode::from(if f.semantic { 1 } else { 2 })
        }
    }
}
