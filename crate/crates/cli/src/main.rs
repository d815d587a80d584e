//! `fotl`: command-line front end for the temporal-logic workbench.
//!
//! # Formula grammar
//!
//! ```text
//! formula  := iff
//! iff      := imp ("<->" imp)*
//! imp      := or ("->" imp)?
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := ("~" | "G" | "H" | "F" | "P" | "box" | "dia") unary
//!           | ("forall" | "exists") var "." formula
//!           | "(" formula ")" | atom
//! atom     := pred "(" terms? ")" | term "=" term
//! term     := product ("+" product)*
//! product  := primary ("*" primary)*
//! primary  := "(" term ")" | name "(" terms ")" | name | numeral
//! ```
//!
//! A quantifier's scope extends as far right as possible. Predicates always
//! carry parentheses, so `s()` is a nullary atom and a bare `x` is a term.
//! Without a model, bare names are variables unless declared with `--const`.
//!
//! # Exit status
//!
//! `0` on success, a valid formula or an accepted proof; `1` when a formula
//! is falsified, a proof is rejected or a translation check disagrees; `2`
//! on usage or input errors.
//!
//! # Randomness
//!
//! Randomised modes take `--seed` (default `0`) and are deterministic for a
//! fixed seed.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use fotl::arith::{build_window_model, check_translation, la_signature, mu, mu_bounded, Samples};
use fotl::embed::{NsElement, TreePath};
use fotl::kernel::{check_proof, ProofScript, Verdict};
use fotl::model::{
    close_family, countermodel_search, Assignment, SearchBounds, Structure, TruthSet, Witness, MAX_POINTS,
};
use fotl::syntax::{parse_formula, parse_formula_infer, print_formula, Formula};
use fotl::{Rational, Theta, ThetaF64};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "fotl", version, about = "First-order temporal logic over finite and dense flows")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and report its structure.
    Parse {
        formula: String,
        /// Print the canonical text only.
        #[arg(long)]
        print: bool,
        /// Expand derived connectives.
        #[arg(long)]
        normalize: bool,
        /// Names to read as constants rather than variables.
        #[arg(long = "const", value_name = "NAME")]
        constants: Vec<String>,
    },
    /// Check a proof-script file.
    CheckProof { file: PathBuf },
    /// Evaluate a formula in a model file.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        /// Report truth at this point instead of the whole truth set.
        #[arg(long)]
        at: Option<String>,
        /// Variable assignment, `x=a`.
        #[arg(long = "assign", value_name = "VAR=ELEMENT")]
        assign: Vec<String>,
        /// Accept models whose family is not closed.
        #[arg(long)]
        premodel: bool,
    },
    /// Check validity of a formula in a model file.
    Valid {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        premodel: bool,
    },
    /// Search for a small standard model falsifying a formula.
    Countermodel {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        tmax: usize,
        #[arg(long, default_value_t = 2)]
        umax: usize,
        /// Sample this many random models instead of enumerating.
        #[arg(long, value_name = "COUNT")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Node budget for exhaustive search.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long = "const", value_name = "NAME")]
        constants: Vec<String>,
        /// Also write the model file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Close a family of subsets of `t0 … t(n-1)` under the admissibility
    /// operations.
    Closure {
        #[arg(long)]
        points: usize,
        /// A seed set as comma-separated point names; repeatable.
        #[arg(long = "set", value_name = "POINTS")]
        sets: Vec<String>,
    },
    /// Print the conjuncts of the arithmetic sentence.
    Mu {
        /// The variant with the bounded successor conjunct.
        #[arg(long)]
        bounded: bool,
    },
    /// Print the window model over `[-N, N]` as a model file.
    WindowModel {
        #[arg(long)]
        n: usize,
    },
    /// Compare arithmetic truth in `U_q` with temporal truth of the
    /// relativised formula.
    CheckTranslation {
        #[arg(long)]
        formula: String,
        /// Window size; ignored with `--model`.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Check this many random assignments instead of all of them.
        #[arg(long, value_name = "COUNT")]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Query the order embedding.
    Embed {
        #[command(subcommand)]
        query: EmbedQuery,
        /// Print values as floating point.
        #[arg(long, global = true)]
        float: bool,
    },
}

#[derive(Subcommand)]
enum EmbedQuery {
    /// Images of elements, written `n` or `g:j` with `g` rational.
    Theta {
        #[arg(allow_hyphen_values = true)]
        elements: Vec<String>,
    },
    /// The interval of a tree path, written `root` or a word over `L`, `R`.
    Interval { path: String },
    /// The committed pairs after some back-and-forth steps.
    Iso {
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
}

/// Result of a command: what to print and whether it counts as success.
struct Report {
    ok: bool,
    text: String,
    json: Value,
}

impl Report {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Report {
            ok: true,
            text: text.into(),
            json,
        }
    }

    fn status(ok: bool, text: impl Into<String>, json: Value) -> Self {
        Report {
            ok,
            text: text.into(),
            json,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            let out = if cli.json {
                serde_json::to_string_pretty(&report.json).expect("json output")
            } else {
                report.text
            };
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_model(path: &Path, premodel: bool) -> Result<Structure> {
    let text = read(path)?;
    let m = if premodel {
        Structure::premodel_from_json(&text)
    } else {
        Structure::from_json(&text)
    };
    m.with_context(|| format!("loading {}", path.display()))
}

fn parse_in(m: &Structure, text: &str) -> Result<Formula> {
    parse_formula(text, &m.signature()).context("parsing formula")
}

fn parse_free(text: &str, constants: &[String]) -> Result<Formula> {
    let names: Vec<&str> = constants.iter().map(String::as_str).collect();
    Ok(parse_formula_infer(text, &names).context("parsing formula")?.0)
}

fn point_names(m: &Structure, set: TruthSet) -> Vec<String> {
    set.points().map(|t| m.flow().name(t).to_string()).collect()
}

fn assignment_json(m: &Structure, f: &Assignment) -> Value {
    f.iter()
        .map(|(x, a)| (x.to_string(), Value::from(m.universe()[a].clone())))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

fn assignment_text(m: &Structure, f: &Assignment) -> String {
    let parts: Vec<String> = f.iter().map(|(x, a)| format!("{x} = {}", m.universe()[a])).collect();
    if parts.is_empty() {
        String::new()
    } else {
        format!(" under {}", parts.join(", "))
    }
}

fn run(command: Command) -> Result<Report> {
    match command {
        Command::Parse {
            formula,
            print,
            normalize,
            constants,
        } => {
            let mut phi = parse_free(&formula, &constants)?;
            if normalize {
                phi = phi.normalize();
            }
            let printed = print_formula(&phi);
            let free: Vec<String> = phi.free_vars().into_iter().collect();
            let sig = fotl::Signature::of_formula(&phi).context("signature")?;
            let text = if print {
                printed.clone()
            } else {
                format!(
                    "{printed}\nfree variables: {}\nquantifier depth: {}\nsentence: {}",
                    if free.is_empty() { "none".to_string() } else { free.join(", ") },
                    phi.quantifier_depth(),
                    phi.is_sentence()
                )
            };
            Ok(Report::ok(
                text,
                json!({
                    "formula": printed,
                    "free_vars": free,
                    "quantifier_depth": phi.quantifier_depth(),
                    "signature": sig,
                }),
            ))
        }
        Command::CheckProof { file } => {
            let script = ProofScript::from_json(&read(&file)?).with_context(|| format!("loading {}", file.display()))?;
            Ok(match check_proof(&script) {
                Verdict::Accepted => Report::ok(
                    format!("accepted ({}, {} lines)", script.logic, script.lines.len()),
                    json!({"verdict": "accepted", "logic": script.logic.to_string(), "lines": script.lines.len()}),
                ),
                Verdict::Rejected { line, reason } => Report::status(
                    false,
                    format!("rejected at line {line}: {reason}"),
                    json!({"verdict": "rejected", "line": line, "reason": reason}),
                ),
            })
        }
        Command::Eval {
            model,
            formula,
            at,
            assign,
            premodel,
        } => {
            let m = load_model(&model, premodel)?;
            let phi = parse_in(&m, &formula)?;
            let mut f = Assignment::new();
            for a in &assign {
                let (x, e) = a.split_once('=').ok_or_else(|| anyhow!("expected VAR=ELEMENT, got `{a}`"))?;
                let (x, e) = (x.trim(), e.trim());
                let i = m
                    .universe()
                    .iter()
                    .position(|u| u == e)
                    .ok_or_else(|| anyhow!("unknown element `{e}`"))?;
                f.insert(x, i);
            }
            let set = m.truth_set(&phi, &f)?;
            match at {
                Some(t) => {
                    let i = m.flow().position(&t).ok_or_else(|| anyhow!("unknown point `{t}`"))?;
                    let value = set.contains(i);
                    Ok(Report::status(value, value.to_string(), json!({"point": t, "value": value})))
                }
                None => {
                    let points = point_names(&m, set);
                    Ok(Report::ok(
                        format!("{{{}}}", points.join(", ")),
                        json!({"truth_set": points}),
                    ))
                }
            }
        }
        Command::Valid {
            model,
            formula,
            premodel,
        } => {
            let m = load_model(&model, premodel)?;
            let phi = parse_in(&m, &formula)?;
            Ok(match m.falsifier(&phi)? {
                None => Report::ok("valid", json!({"valid": true})),
                Some((t, f)) => Report::status(
                    false,
                    format!("falsified at {}{}", m.flow().name(t), assignment_text(&m, &f)),
                    json!({"valid": false, "point": m.flow().name(t), "assignment": assignment_json(&m, &f)}),
                ),
            })
        }
        Command::Countermodel {
            formula,
            tmax,
            umax,
            random,
            seed,
            budget,
            constants,
            out,
        } => {
            if tmax == 0 || tmax > MAX_POINTS || umax == 0 {
                bail!("bounds must satisfy 1 <= tmax <= {MAX_POINTS} and umax >= 1");
            }
            let phi = parse_free(&formula, &constants)?;
            let mut bounds = match random {
                Some(count) => SearchBounds::random(tmax, umax, seed, count),
                None => SearchBounds::exhaustive(tmax, umax),
            };
            if let Some(b) = budget {
                bounds = bounds.with_budget(b);
            }
            match countermodel_search(&phi, &bounds)? {
                None => Ok(Report::ok(
                    format!("no countermodel with |T| <= {tmax}, |U| <= {umax}"),
                    json!({"found": false}),
                )),
                Some(Witness {
                    model,
                    point,
                    assignment,
                }) => {
                    let file = model.to_json();
                    if let Some(path) = out {
                        std::fs::write(&path, serde_json::to_string_pretty(&file)? + "\n")
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    Ok(Report::status(
                        false,
                        format!(
                            "falsified at {}{}\n{}",
                            model.flow().name(point),
                            assignment_text(&model, &assignment),
                            serde_json::to_string_pretty(&file)?
                        ),
                        json!({
                            "found": true,
                            "point": model.flow().name(point),
                            "assignment": assignment_json(&model, &assignment),
                            "model": file,
                        }),
                    ))
                }
            }
        }
        Command::Closure { points, sets } => {
            if points == 0 || points > MAX_POINTS {
                bail!("--points must be between 1 and {MAX_POINTS}");
            }
            let names: Vec<String> = (0..points).map(|i| format!("t{i}")).collect();
            let seed = sets
                .iter()
                .map(|s| {
                    s.split(',')
                        .map(str::trim)
                        .filter(|p| !p.is_empty())
                        .map(|p| names.iter().position(|n| n == p).ok_or_else(|| anyhow!("unknown point `{p}`")))
                        .collect::<Result<Vec<usize>>>()
                        .map(TruthSet::from_points)
                })
                .collect::<Result<Vec<TruthSet>>>()?;
            let family = close_family(seed, points);
            let members: Vec<Vec<&str>> = family
                .members()
                .map(|s| s.points().map(|t| names[t].as_str()).collect())
                .collect();
            let lines: Vec<String> = members.iter().map(|m| format!("{{{}}}", m.join(", "))).collect();
            Ok(Report::ok(
                format!(
                    "{} members{}\n{}",
                    members.len(),
                    if family.is_powerset() { " (the full powerset)" } else { "" },
                    lines.join("\n")
                ),
                json!({"powerset": family.is_powerset(), "members": members}),
            ))
        }
        Command::Mu { bounded } => {
            let sentence = if bounded { mu_bounded() } else { mu() };
            let conjuncts: Vec<String> = sentence.formula().conjuncts().into_iter().map(print_formula).collect();
            Ok(Report::ok(conjuncts.join("\n"), json!({"conjuncts": conjuncts})))
        }
        Command::WindowModel { n } => {
            let w = build_window_model(n)?;
            let file = w.model().to_json();
            Ok(Report::ok(serde_json::to_string_pretty(&file)?, file))
        }
        Command::CheckTranslation {
            formula,
            n,
            model,
            samples,
            seed,
        } => {
            let m = match model {
                Some(path) => load_model(&path, false)?,
                None => build_window_model(n)?.into_model(),
            };
            let phi = parse_formula(&formula, &la_signature()).context("parsing arithmetic formula")?;
            let samples = match samples {
                Some(count) => Samples::Random { seed, count },
                None => Samples::Exhaustive,
            };
            let r = check_translation(&phi, &m, samples)?;
            let mut text = format!("{}/{} cases agree", r.agreed, r.checked);
            let mut disagreement = Value::Null;
            if let Some(d) = &r.first_disagreement {
                text += &format!(
                    "\nfirst disagreement at {}{}: arithmetic {}, temporal {}",
                    m.flow().name(d.point),
                    assignment_text(&m, &d.assignment),
                    d.arithmetic,
                    d.temporal
                );
                disagreement = json!({
                    "point": m.flow().name(d.point),
                    "assignment": assignment_json(&m, &d.assignment),
                    "arithmetic": d.arithmetic,
                    "temporal": d.temporal,
                });
            }
            Ok(Report::status(
                r.all_agree(),
                text,
                json!({"checked": r.checked, "agreed": r.agreed, "first_disagreement": disagreement}),
            ))
        }
        Command::Embed { query, float } => embed(query, float),
    }
}

fn embed(query: EmbedQuery, float: bool) -> Result<Report> {
    let show = |exact: Rational, approx: f64| -> Value {
        if float {
            json!(approx)
        } else {
            json!(exact.to_string())
        }
    };
    match query {
        EmbedQuery::Theta { elements } => {
            let (mut exact, mut approx) = (Theta::new(), ThetaF64::new());
            let mut rows = Vec::new();
            for e in &elements {
                let a: NsElement = e.parse().map_err(|err| anyhow!("bad element `{e}`: {err}"))?;
                rows.push((a.to_string(), show(exact.theta(&a), approx.theta(&a))));
            }
            let text: Vec<String> = rows.iter().map(|(a, v)| format!("{a}\t{}", plain(v))).collect();
            let json: BTreeMap<String, Value> = rows.into_iter().collect();
            Ok(Report::ok(text.join("\n"), json!(json)))
        }
        EmbedQuery::Interval { path } => {
            let p: TreePath = path.parse().map_err(|err| anyhow!("bad path `{path}`: {err}"))?;
            let (u, v) = p.interval::<Rational>();
            let (fu, fv) = p.interval::<f64>();
            let (lo, hi) = (show(u, fu), show(v, fv));
            Ok(Report::ok(
                format!("({}, {})", plain(&lo), plain(&hi)),
                json!({"path": p.to_string(), "interval": [lo, hi]}),
            ))
        }
        EmbedQuery::Iso { steps } => {
            let mut iso = fotl::embed::PartialIso::new(fotl::embed::RationalLine, fotl::embed::IntervalTree);
            for _ in 0..steps {
                iso.step();
            }
            let mut pairs: Vec<_> = iso.pairs().to_vec();
            pairs.sort();
            let text: Vec<String> = pairs.iter().map(|(q, p)| format!("{q}\t{p}")).collect();
            let json: Vec<Value> = pairs.iter().map(|(q, p)| json!([q.to_string(), p.to_string()])).collect();
            Ok(Report::ok(text.join("\n"), json!(json)))
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
