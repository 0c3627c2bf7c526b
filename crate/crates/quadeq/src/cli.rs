//! Command-line front end. Every subcommand prints one JSON object per line
//! unless `--output text` is chosen; `qn` and `canon` default to text.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::classify::{classify, verify_tables, Budgets, Classification, Reason, Verdict};
use crate::derived::{analyze_v, first_solutions, second_decide};
use crate::error::{Error, Result};
use crate::fgword::{parse_word, BasisTag, EquationSpec, Frame, Sign, SolutionClass, Word};
use crate::grind::q_n;
use crate::surface::project;
use crate::wicks::{rhs_word, wicks_decompositions, wicks_search, WicksKind};

/// Exit status of a run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "quadeq", version, about = "Quadratic equations Q_δ(z₁,z₂) = v·R^ϑ·v⁻¹·R in the free group of rank two")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide existence of a solution of the requested class.
    Classify {
        #[command(flatten)]
        eq: EquationArgs,
        #[command(flatten)]
        budgets: BudgetArgs,
        /// The parameter word v.
        #[arg(long, conflicts_with = "batch", required_unless_present = "batch")]
        word: Option<String>,
        /// A file with one word per line; blank lines and lines starting with '#' are skipped.
        #[arg(long)]
        batch: Option<PathBuf>,
        #[arg(long, value_enum)]
        output: Option<Output>,
    },
    /// Check every explicit solution of the tables.
    VerifyTables {
        #[arg(long, value_enum)]
        output: Option<Output>,
    },
    /// Wicks-form matches of the cyclically reduced right-hand side.
    Wicks {
        #[command(flatten)]
        eq: EquationArgs,
        #[command(flatten)]
        budgets: BudgetArgs,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        output: Option<Output>,
    },
    /// Enumerated solutions of the first derived equation of a mixed case.
    FirstDerived {
        #[command(flatten)]
        eq: EquationArgs,
        #[command(flatten)]
        budgets: BudgetArgs,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        output: Option<Output>,
    },
    /// The decision of the second derived equation of a mixed case.
    SecondDerived {
        #[command(flatten)]
        eq: EquationArgs,
        #[command(flatten)]
        budgets: BudgetArgs,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        output: Option<Output>,
    },
    /// The image of a word of the normal closure of R in Z[π].
    Qn {
        #[arg(long, default_value = "-1", allow_hyphen_values = true, value_parser = parse_sign)]
        epsilon: Sign,
        #[arg(long, value_enum, default_value_t = Basis::Adapted)]
        basis: Basis,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        output: Option<Output>,
    },
    /// Reduced form, cyclic core and canonical projection of a word.
    Canon {
        #[arg(long, default_value = "-1", allow_hyphen_values = true, value_parser = parse_sign)]
        epsilon: Sign,
        #[arg(long, value_enum, default_value_t = Basis::Adapted)]
        basis: Basis,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        output: Option<Output>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    /// α, β with R = αβα^{-ε}β⁻¹; unknowns x, y.
    Adapted,
    /// a, b with R = a²b² for ε = −1; unknowns z₁, z₂.
    Classic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Class {
    Faithful,
    Nonfaithful,
}

#[derive(Debug, Args)]
pub struct EquationArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    pub delta: Sign,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    pub epsilon: Sign,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    pub theta: Sign,
    #[arg(long, value_enum, default_value_t = Class::Faithful)]
    pub class: Class,
    #[arg(long, value_enum, default_value_t = Basis::Adapted)]
    pub basis: Basis,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Largest cyclic length of the right-hand side searched for Wicks forms.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub wicks_len: u64,
    /// Bound on enumerated first-derived solutions.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(i64).range(1..))]
    pub enum_bound: i64,
    /// Half-width of the searched L window of the second derived decider.
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    pub l_window: Option<i64>,
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    s.parse::<Sign>().map_err(|e| e.to_string())
}

impl BudgetArgs {
    fn budgets(&self) -> Budgets {
        Budgets { wicks_len: self.wicks_len as usize, enum_bound: self.enum_bound, l_window_override: self.l_window }
    }
}

fn basis_tag(basis: Basis, eps: Sign) -> BasisTag {
    match basis {
        Basis::Adapted => BasisTag::adapted(eps),
        Basis::Classic => BasisTag::classic(eps),
    }
}

impl EquationArgs {
    fn spec(&self) -> EquationSpec {
        let class = match self.class {
            Class::Faithful => SolutionClass::Faithful,
            Class::Nonfaithful => SolutionClass::NonFaithful,
        };
        let mut spec = EquationSpec::adapted(self.delta, self.epsilon, self.theta, class);
        if self.basis == Basis::Classic {
            spec.frame = Frame::OriginalZ;
        }
        spec
    }
}

fn budgets_json(b: &Budgets) -> Value {
    json!({ "wicks_len": b.wicks_len, "enum_bound": b.enum_bound, "L_window_override": b.l_window_override })
}

/// The JSON line of one classification.
pub fn classification_json(input: &str, c: &Classification, budgets: &Budgets) -> Value {
    let mut m = Map::new();
    m.insert("input".into(), json!(input));
    m.insert("case".into(), json!({ "row": c.row.label(), "mixed": c.mixed.map(|k| k.label()) }));
    m.insert("vbar".into(), json!({ "r": c.vbar.r, "s": c.vbar.s }));
    match &c.verdict {
        Verdict::Exists { witness, verified } => {
            m.insert("verdict".into(), json!("exists"));
            m.insert(
                "witness".into(),
                json!({ "first": witness.first, "second": witness.second, "source": witness.source, "verified": verified }),
            );
        }
        Verdict::NotExists { reason } => {
            m.insert("verdict".into(), json!("not_exists"));
            let (name, extra) = match reason {
                Reason::AbelianObstruction => ("abelian_obstruction", None),
                Reason::TableBranch { case } => ("table_branch", Some(("branch", json!(case)))),
                Reason::SecondDerivedUnsolvable { certificate } => {
                    ("second_derived_unsolvable", Some(("certificate", json!(certificate))))
                }
                Reason::WicksExhaustive => ("wicks_exhaustive", None),
            };
            m.insert("reason".into(), json!(name));
            if let Some((k, v)) = extra {
                m.insert(k.into(), v);
            }
        }
        Verdict::Undetermined { second_derived, .. } => {
            m.insert("verdict".into(), json!("undetermined"));
            m.insert("trace".into(), json!(second_derived));
        }
    }
    m.insert("budgets".into(), budgets_json(budgets));
    Value::Object(m)
}

fn error_json(input: &str, e: &Error) -> Value {
    json!({ "input": input, "verdict": "error", "error": e.to_string() })
}

fn classification_text(input: &str, c: &Classification) -> String {
    let head = format!("{input}: {} v̄={}", c.row.label(), c.vbar);
    match &c.verdict {
        Verdict::Exists { witness, .. } => {
            format!("{head} exists ({}, {}) via {}", witness.first, witness.second, witness.source)
        }
        Verdict::NotExists { reason } => match reason {
            Reason::AbelianObstruction => format!("{head} not_exists abelian_obstruction"),
            Reason::TableBranch { case } => format!("{head} not_exists table_branch {case}"),
            Reason::SecondDerivedUnsolvable { certificate } => {
                format!("{head} not_exists second_derived_unsolvable: {} {}", certificate.condition, certificate.detail)
            }
            Reason::WicksExhaustive => format!("{head} not_exists wicks_exhaustive"),
        },
        Verdict::Undetermined { .. } => format!("{head} undetermined"),
    }
}

fn emit(out: &mut dyn Write, mode: Output, json: &Value, text: impl FnOnce() -> String) -> std::io::Result<()> {
    match mode {
        Output::Json => writeln!(out, "{json}"),
        Output::Text => writeln!(out, "{}", text()),
    }
}

fn word(text: &str, basis: BasisTag) -> std::result::Result<Word, (i32, String)> {
    parse_word(text, basis).map_err(|e| (EXIT_USAGE, format!("invalid word {text:?}: {e}")))
}

/// Parses `argv` (including the program name) and runs the command.
pub fn main_with(argv: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn io(e: std::io::Error) -> (i32, String) {
    (EXIT_FAILURE, e.to_string())
}

fn failure(e: Error) -> (i32, String) {
    (EXIT_FAILURE, e.to_string())
}

fn run(command: Command, out: &mut dyn Write) -> std::result::Result<i32, (i32, String)> {
    match command {
        Command::Classify { eq, budgets, word: w, batch, output } => {
            let spec = eq.spec();
            let b = budgets.budgets();
            let mode = output.unwrap_or(Output::Json);
            let inputs: Vec<String> = match (w, batch) {
                (Some(w), _) => {
                    word(&w, spec.basis())?;
                    vec![w]
                }
                (None, Some(path)) => std::fs::read_to_string(&path)
                    .map_err(|e| (EXIT_USAGE, format!("{}: {e}", path.display())))?
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .map(String::from)
                    .collect(),
                (None, None) => return Err((EXIT_USAGE, "one of --word or --batch is required".into())),
            };
            let results: Vec<(String, Result<Classification>)> = inputs
                .into_par_iter()
                .map(|input| {
                    let r = parse_word(&input, spec.basis()).and_then(|v| classify(&spec, &v, &b));
                    (input, r)
                })
                .collect();
            let mut code = EXIT_OK;
            for (input, r) in &results {
                match r {
                    Ok(c) => emit(out, mode, &classification_json(input, c, &b), || classification_text(input, c)),
                    Err(e) => {
                        code = EXIT_FAILURE;
                        emit(out, mode, &error_json(input, e), || format!("{input}: error {e}"))
                    }
                }
                .map_err(io)?;
            }
            Ok(code)
        }
        Command::VerifyTables { output } => {
            let report = verify_tables();
            let ok = report.failures.is_empty();
            let j = json!({ "checked": report.checked, "failures": report.failures });
            emit(out, output.unwrap_or(Output::Json), &j, || {
                let mut s = format!("checked {} fixtures, {} failures", report.checked, report.failures.len());
                for f in &report.failures {
                    s.push_str(&format!("\n  {f}"));
                }
                s
            })
            .map_err(io)?;
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Wicks { eq, budgets, word: w, output } => {
            let spec = eq.spec();
            let v = word(&w, spec.basis())?;
            let rhs = rhs_word(&spec, &v).map_err(failure)?;
            let (core, _) = rhs.cyclic_reduce();
            let search = wicks_search(&spec, &v, budgets.wicks_len as usize).map_err(failure)?;
            let matches = wicks_decompositions(&core, WicksKind::for_delta(spec.delta));
            let j = json!({
                "input": w,
                "rhs": core,
                "rhs_length": core.len(),
                "matches": matches.iter().map(|m| json!({ "shift": m.shift, "form": m.form, "parts": m.parts })).collect::<Vec<_>>(),
                "solutions": search.solutions,
                "exhaustive": search.exhaustive,
            });
            emit(out, output.unwrap_or(Output::Json), &j, || {
                let mut s = format!("rhs {core} (length {})", core.len());
                for m in &matches {
                    s.push_str(&format!("\n  shift {} {:?}", m.shift, m.form));
                }
                for sol in &search.solutions {
                    s.push_str(&format!("\n  ({}, {}) faithful={}", sol.first, sol.second, sol.faithful));
                }
                s
            })
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::FirstDerived { eq, budgets, word: w, output } => {
            let spec = eq.spec();
            let v = word(&w, spec.basis())?;
            let data = analyze_v(&spec, &v).map_err(failure)?;
            let sols = first_solutions(&data.case, &data.vbar, budgets.enum_bound).map_err(failure)?;
            let mut checked = Vec::with_capacity(sols.len());
            for s in &sols {
                checked.push(s.check(&data.case).map_err(failure)?);
            }
            let all_ok = checked.iter().all(|&c| c);
            let j = json!({
                "input": w,
                "case": data.case,
                "vbar": { "r": data.vbar.r, "s": data.vbar.s },
                "solutions": sols.iter().zip(&checked).map(|(s, c)| {
                    let mut v = json!(s);
                    v["check"] = json!(c);
                    v
                }).collect::<Vec<_>>(),
            });
            emit(out, output.unwrap_or(Output::Json), &j, || {
                let mut s = format!("{} v̄={}", data.case.label(), data.vbar);
                for f in &sols {
                    s.push_str(&format!("\n  ȳ={} x̃={} ℓ={}", f.ybar, f.xtilde, f.ell));
                }
                s
            })
            .map_err(io)?;
            Ok(if all_ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::SecondDerived { eq, budgets, word: w, output } => {
            let spec = eq.spec();
            let v = word(&w, spec.basis())?;
            let data = analyze_v(&spec, &v).map_err(failure)?;
            let r = second_decide(&data.case, &data.big_v, budgets.l_window).map_err(failure)?;
            let j = json!({
                "input": w,
                "case": data.case,
                "vbar": { "r": data.vbar.r, "s": data.vbar.s },
                "v0": data.v0,
                "V": data.big_v,
                "decision": r,
            });
            emit(out, output.unwrap_or(Output::Json), &j, || {
                format!("{} V={} {}", data.case.label(), data.big_v, if r.is_solvable() { "solvable" } else { "unsolvable" })
            })
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Qn { epsilon, basis, word: w, output } => {
            let v = word(&w, basis_tag(basis, epsilon))?;
            let x = q_n(&v).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let j = json!({ "input": w, "qn": x });
            emit(out, output.unwrap_or(Output::Text), &j, || x.to_string()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Canon { epsilon, basis, word: w, output } => {
            let v = word(&w, basis_tag(basis, epsilon))?;
            let (core, t) = v.cyclic_reduce();
            let p = project(&v);
            let j = json!({
                "input": w,
                "reduced": v,
                "cyclic_core": core,
                "conjugator": t,
                "vbar": { "r": p.r, "s": p.s },
                "canonical_adapted": p.to_word(),
                "sgn": p.w_eps().value(),
            });
            emit(out, output.unwrap_or(Output::Text), &j, || format!("{v} ~ {} = {}", p.to_word(), p)).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}
