//! Command-line front end.
//!
//! Exit status: 0 for success, a valid formula, value 1 or a passing suite;
//! 1 for an invalid formula, a countermodel, a value below 1 or a failing
//! suite; 2 for usage and input errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::chain::ChainSpec;
use crate::decide::{
    classify_chain, prop_valid_within, run_suite, search_countermodel, SearchOutcome, SuiteConfig,
    SuiteId, DEFAULT_BUDGET,
};
use crate::finite_model::{eval_prop, FiniteModel, ModelFile};
use crate::formula::{parse, print_compact, Formula, Schema};
use crate::omega::{eval_omega, OmegaModel, OmegaValue};
use crate::rational::Rational;
use crate::transform::{
    check_embedding, cut_model, embed_finite, positive_collapse, rotate, rotate_value, star,
};

#[derive(Debug, Parser)]
#[command(name = "nmfo", version, about = "Exact evaluation and model checking for NM and Gödel first-order logics")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Args)]
struct FormulaArgs {
    /// Formula text.
    formula: Option<String>,
    /// Read the formula from a file.
    #[arg(long, value_name = "PATH")]
    formula_file: Option<PathBuf>,
    /// A named schema such as `sn:2`, `star` or `shift:15`.
    #[arg(long, value_name = "NAME[:PARAMS]")]
    formula_schema: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Value of a formula in a finite model, or under a propositional assignment.
    Eval {
        #[command(flatten)]
        formula: FormulaArgs,
        /// Finite model JSON.
        #[arg(long, value_name = "PATH", conflicts_with_all = ["chain", "assign"])]
        model: Option<PathBuf>,
        #[arg(long)]
        chain: Option<ChainSpec>,
        /// `name=p/q`, repeatable or comma separated.
        #[arg(long, value_delimiter = ',', requires = "chain")]
        assign: Vec<String>,
    },
    /// Value of a closed formula in an omega model.
    EvalOmega {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long, value_name = "PATH")]
        model: PathBuf,
    },
    /// Validity over a finite chain: exhaustive for propositional formulas,
    /// bounded-domain for first-order ones.
    Valid {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long)]
        chain: ChainSpec,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Search finite models up to a domain size for a countermodel.
    Search {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long)]
        chain: ChainSpec,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Order-type properties of a chain and what the theorems predict for it.
    Classify {
        #[arg(long)]
        chain: ChainSpec,
    },
    /// The squaring translation of a formula.
    Translate {
        #[command(flatten)]
        formula: FormulaArgs,
    },
    /// Rotate a Gödel chain, or a finite model over one, into an NM chain.
    Rotate {
        #[arg(long, conflicts_with = "model")]
        chain: Option<ChainSpec>,
        #[arg(long, value_name = "PATH")]
        model: Option<PathBuf>,
        /// Drop the negation fixpoint.
        #[arg(long)]
        no_fixpoint: bool,
    },
    /// The cut model at `alpha` of a finite or omega model.
    Cut {
        #[arg(long, value_name = "PATH")]
        model: PathBuf,
        #[arg(long)]
        alpha: Rational,
    },
    /// Keep positive atomic values, send the others to 0.
    Collapse {
        #[arg(long, value_name = "PATH")]
        model: PathBuf,
    },
    /// Embedding of a finite NM chain into another chain, checked exhaustively.
    Embed {
        #[arg(long)]
        source: ChainSpec,
        #[arg(long)]
        target: ChainSpec,
    },
    /// Run a verification suite, or `all` of them.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        refutations: usize,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

/// A failed invocation: message for stderr, exit 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Usage {
        Usage(e.to_string())
    }
}

struct Out {
    text: String,
    json: serde_json::Value,
    status: i32,
}

impl Out {
    fn new(text: impl Into<String>, json: serde_json::Value, status: i32) -> Out {
        Out {
            text: text.into(),
            json,
            status,
        }
    }
}

/// Parse `args` (program name first), run, write to the given streams.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.verb) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("json values serialize")
            } else {
                out.text
            };
            let _ = writeln!(stdout, "{}", body.trim_end());
            out.status
        }
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Usage> {
    std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn formula(a: FormulaArgs) -> Result<Formula, Usage> {
    match (a.formula, a.formula_file, a.formula_schema) {
        (Some(text), None, None) => Ok(parse(&text)?),
        (None, Some(path), None) => Ok(parse(&read(&path)?)?),
        (None, None, Some(name)) => Ok(name.parse::<Schema>()?.formula()),
        (None, None, None) => Err(Usage(
            "give a formula, --formula-file or --formula-schema".into(),
        )),
        _ => Err(Usage(
            "give only one of a formula, --formula-file and --formula-schema".into(),
        )),
    }
}

fn value_status(v: &Rational) -> i32 {
    if v.is_one() {
        0
    } else {
        1
    }
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn assignment(items: &[String]) -> Result<BTreeMap<String, Rational>, Usage> {
    items
        .iter()
        .map(|item| {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Usage(format!("bad assignment `{item}` (expected name=p/q)")))?;
            let v: Rational = value.trim().parse()?;
            Ok((name.trim().to_string(), v))
        })
        .collect()
}

enum AnyModel {
    Finite(FiniteModel),
    Omega(OmegaModel),
}

/// Finite model files list a domain; omega model files do not.
fn any_model(path: &PathBuf) -> Result<AnyModel, Usage> {
    let text = read(path)?;
    let raw: serde_json::Value = serde_json::from_str(&text)?;
    if raw.get("domain").is_some() {
        Ok(AnyModel::Finite(FiniteModel::from_json(&text)?))
    } else {
        Ok(AnyModel::Omega(OmegaModel::from_json(&text)?))
    }
}

fn model_out(m: AnyModel) -> Out {
    let (text, json) = match m {
        AnyModel::Finite(m) => (m.to_json(), to_json(&ModelFile::from_model(&m))),
        AnyModel::Omega(m) => (m.to_json(), to_json(&m)),
    };
    Out::new(text, json, 0)
}

fn dispatch(verb: Verb) -> Result<Out, Usage> {
    match verb {
        Verb::Eval {
            formula: fa,
            model,
            chain,
            assign,
        } => {
            let f = formula(fa)?;
            let v = match (model, chain) {
                (Some(path), _) => FiniteModel::from_json(&read(&path)?)?.model_value(&f)?,
                (None, Some(chain)) => eval_prop(&chain, &assignment(&assign)?, &f)?,
                (None, None) => return Err(Usage("eval needs --model or --chain".into())),
            };
            let v = v.into_value();
            Ok(Out::new(v.to_string(), json!({ "value": v }), value_status(&v)))
        }
        Verb::EvalOmega { formula: fa, model } => {
            let f = formula(fa)?;
            let m = OmegaModel::from_json(&read(&model)?)?;
            Ok(match eval_omega(&m, &f)? {
                OmegaValue::Value(v) => {
                    Out::new(v.to_string(), json!({ "value": v }), value_status(&v))
                }
                // no value is not a refutation
                OmegaValue::Unsafe(u) => Out::new(
                    format!("unsafe: {u}"),
                    json!({ "value": null, "unsafe": u.to_string() }),
                    0,
                ),
            })
        }
        Verb::Valid {
            formula: fa,
            chain,
            max_domain,
            budget,
        } => {
            let f = formula(fa)?;
            if f.is_propositional() {
                let v = prop_valid_within(&chain, &f, budget)?;
                let mut text = if v.valid { "valid".to_string() } else { "invalid".to_string() };
                if let (Some(c), Some(val)) = (&v.counter, &v.value) {
                    let parts: Vec<String> = c.iter().map(|(k, x)| format!("{k}={x}")).collect();
                    text.push_str(&format!("\ncounter: {}\nvalue: {val}", parts.join(", ")));
                }
                let status = i32::from(!v.valid);
                Ok(Out::new(
                    text,
                    json!({ "valid": v.valid, "counter": v.counter, "value": v.value, "checked": v.checked }),
                    status,
                ))
            } else {
                search_out(&chain, &f, max_domain, budget, true)
            }
        }
        Verb::Search {
            formula: fa,
            chain,
            max_domain,
            budget,
        } => {
            let f = formula(fa)?;
            search_out(&chain, &f, max_domain, budget, false)
        }
        Verb::Classify { chain } => {
            let c = classify_chain(&chain);
            let mut text = format!(
                "chain: {}\nnm: {}\nsize: {}\nfixpoint: {}\nall have predecessors: {}\ncomplete: {}\n",
                c.chain,
                c.nm,
                c.size.map_or("infinite".to_string(), |s| s.to_string()),
                c.has_fixpoint,
                c.all_have_predecessor,
                c.complete,
            );
            if c.nm {
                let list = |v: &[u8]| v.iter().map(u8::to_string).collect::<Vec<_>>().join(" ");
                text.push_str(&format!(
                    "shifting laws predicted valid: {}\nshifting laws predicted invalid: {}\n",
                    list(&c.shifting_valid),
                    list(&c.shifting_invalid)
                ));
                let yn = |b: Option<bool>| if b == Some(true) { "valid" } else { "invalid" };
                text.push_str(&format!("C-up: {}\nC-down: {}\n", yn(c.c_up), yn(c.c_down)));
                text.push_str(&format!(
                    "S_n valid from n = {}\nBP: {}\n",
                    c.sn_from.map_or("none".to_string(), |n| n.to_string()),
                    yn(c.bp)
                ));
            }
            for n in &c.notes {
                text.push_str(&format!("note: {n}\n"));
            }
            Ok(Out::new(text, to_json(&c), 0))
        }
        Verb::Translate { formula: fa } => {
            let s = star(&formula(fa)?);
            let text = print_compact(&s);
            Ok(Out::new(text.clone(), json!({ "formula": text }), 0))
        }
        Verb::Rotate {
            chain,
            model,
            no_fixpoint,
        } => {
            let fix = !no_fixpoint;
            match (chain, model) {
                (Some(g), None) => {
                    let rot = rotate(&g, fix)?;
                    let mut text = format!("{}", rot.chain);
                    if let Some(c) = &rot.correspondence {
                        for (a, b) in c {
                            text.push_str(&format!("\n{a} -> {b}"));
                        }
                    }
                    Ok(Out::new(text, to_json(&rot), 0))
                }
                (None, Some(path)) => {
                    let m = FiniteModel::from_json(&read(&path)?)?;
                    let g = m.chain().clone();
                    let rot = rotate(&g, fix)?;
                    let mut err = None;
                    let out = m.map_values(rot.chain, |v| {
                        rotate_value(&g, fix, v).unwrap_or_else(|e| {
                            err.get_or_insert(e);
                            Rational::zero()
                        })
                    });
                    if let Some(e) = err {
                        return Err(e.into());
                    }
                    Ok(model_out(AnyModel::Finite(out?)))
                }
                _ => Err(Usage("rotate needs --chain or --model".into())),
            }
        }
        Verb::Cut { model, alpha } => Ok(model_out(match any_model(&model)? {
            AnyModel::Finite(m) => AnyModel::Finite(cut_model(&m, &alpha)?),
            AnyModel::Omega(m) => AnyModel::Omega(cut_model(&m, &alpha)?),
        })),
        Verb::Collapse { model } => Ok(model_out(match any_model(&model)? {
            AnyModel::Finite(m) => AnyModel::Finite(positive_collapse(&m)?),
            AnyModel::Omega(m) => AnyModel::Omega(positive_collapse(&m)?),
        })),
        Verb::Embed { source, target } => {
            let e = embed_finite(&source, &target)?;
            let check = check_embedding(&e);
            let mut text: String = e.map.iter().map(|(a, b)| format!("{a} -> {b}\n")).collect();
            match &check {
                Ok(()) => text.push_str("complete embedding"),
                Err(d) => text.push_str(&format!("not an embedding: {d}")),
            }
            let status = i32::from(check.is_err());
            Ok(Out::new(
                text,
                json!({ "embedding": e, "complete": check.is_ok(), "defect": check.err() }),
                status,
            ))
        }
        Verb::Verify {
            suite,
            seed,
            samples,
            refutations,
            max_domain,
            budget,
        } => {
            let ids: Vec<SuiteId> = if suite == "all" {
                SuiteId::ALL.to_vec()
            } else {
                vec![suite.parse::<SuiteId>().map_err(Usage)?]
            };
            let cfg = SuiteConfig {
                seed,
                samples,
                refutations,
                max_domain,
                budget,
            };
            let reports: Vec<_> = ids.iter().map(|id| run_suite(*id, &cfg)).collect();
            let pass = reports.iter().all(|r| r.pass);
            let text: String = reports.iter().map(|r| r.to_string()).collect();
            let json = if reports.len() == 1 {
                to_json(&reports[0])
            } else {
                json!({ "reports": reports, "pass": pass })
            };
            Ok(Out::new(text, json, i32::from(!pass)))
        }
    }
}

fn search_out(chain: &ChainSpec, f: &Formula, max_domain: usize, budget: u64, as_validity: bool) -> Result<Out, Usage> {
    Ok(match search_countermodel(chain, f, max_domain, budget)? {
        SearchOutcome::Exhausted { checked } => {
            let text = if as_validity {
                format!("valid on domains up to {max_domain} ({checked} models)")
            } else {
                format!("no countermodel up to domain {max_domain} ({checked} models)")
            };
            Out::new(
                text,
                json!({ "found": false, "max_domain": max_domain, "checked": checked }),
                0,
            )
        }
        SearchOutcome::Found { model, value } => {
            let file = ModelFile::from_model(&model);
            let head = if as_validity { "invalid" } else { "countermodel" };
            Out::new(
                format!("{head} (value {value})\n{}", file.to_json()),
                json!({ "found": true, "value": value, "model": file }),
                1,
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("nmfo").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn valid_example() {
        // S_1 needs fewer than 4 elements
        let (code, out, _) = call(&["valid", "--chain", "nm3", "((x0->x1)->x1)->(x0\\/x1)"]);
        assert_eq!((code, out.as_str()), (0, "valid\n"));
        let (code, out, _) = call(&["valid", "--chain", "nm5", "((x0->x1)->x1)->(x0\\/x1)"]);
        assert_eq!((code, out.as_str()), (1, "invalid\ncounter: x0=3/4, x1=1/4\nvalue: 3/4\n"));
        let (code, _, _) = call(&["valid", "--chain", "nm5", "--formula-schema", "sn:2"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn translate_example() {
        let (code, out, _) = call(&["translate", "P(x) -> q"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "((P(x)&P(x))->(q&q))&((P(x)&P(x))->(q&q))");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["valid", "--chain", "nm5"]).0, 2);
        assert_eq!(call(&["valid", "--chain", "nm0", "p"]).0, 2);
        assert_eq!(call(&["valid", "--chain", "nm-inf", "p"]).0, 2);
        assert_eq!(call(&["eval", "--chain", "nm3", "--assign", "p=2", "p"]).0, 2);
        assert_eq!(call(&["verify", "nope"]).0, 2);
        let (code, _, err) = call(&["translate", "p ->"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn eval_assignment() {
        let (code, out, _) = call(&["eval", "--chain", "nm3", "--assign", "p=1/2,q=0", "p -> q"]);
        assert_eq!((code, out.trim()), (1, "1/2"));
        let (code, out, _) = call(&["--json", "eval", "--chain", "nm3", "--assign", "p=1/2", "p -> p"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "{\n  \"value\": \"1\"\n}");
    }

    #[test]
    fn schema_and_file_inputs() {
        let (code, out, _) = call(&["valid", "--chain", "nm5", "--formula-schema", "bp"]);
        assert_eq!(code, 1);
        assert!(out.starts_with("invalid\ncounter:"));
        let (code, out, _) = call(&["valid", "--chain", "nm4", "--formula-schema", "bp"]);
        assert_eq!((code, out.as_str()), (0, "valid\n"));
        assert_eq!(call(&["valid", "--chain", "nm4", "p", "--formula-schema", "bp"]).0, 2);
    }
}
