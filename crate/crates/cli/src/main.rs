//! `relog`: batch front end for the workbench. Every subcommand is a thin
//! wrapper over the library; negative logical results (invalid formula,
//! countermodel found, proof rejected, validation failure) exit with 1,
//! usage and input errors with 2, internal failures with 3.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use relog_core::formula::{parse, Formula};
use relog_core::proofs::{
    check_proof, lift_proof, load_proof_str, proof_to_json, rr_transform,
};
use relog_core::registry::{
    check_logic_frame, condition_by_tag, logic_conditions, CONDITION_TAGS,
};
use relog_core::search::{find_countermodel, Kind, SearchBudget};
use relog_core::semantics::{interpret, satisfies, valid};
use relog_core::structures::{load_model_str, Model};
use relog_core::transform::{default_formula_set, plus_construction, verify_plus};

#[derive(Parser)]
#[command(
    name = "relog",
    version,
    about = "workbench for relevant modal logics and their classicized counterparts"
)]
struct Cli {
    /// Emit a machine-readable JSON payload instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormulaArg {
    /// Formula in concrete syntax, e.g. "[](p & q) -> []p".
    #[arg(long, short = 'f', conflicts_with = "formula_file")]
    formula: Option<String>,
    /// Read the formula from a file instead.
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

impl FormulaArg {
    fn get(&self) -> Result<Formula, CliError> {
        let text = match (&self.formula, &self.formula_file) {
            (Some(t), _) => t.clone(),
            (None, Some(path)) => fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?,
            (None, None) => {
                return Err(CliError::Usage(
                    "one of --formula or --formula-file is required".into(),
                ))
            }
        };
        parse(text.trim()).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical rendering.
    Parse {
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Validate a model file; reports every violated condition. With
    /// --logic, also check the logic's frame conditions.
    ModelCheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        logic: Option<String>,
        /// Check the classicized frame conditions (needs a W-model).
        #[arg(long, requires = "logic")]
        classicized: bool,
    },
    /// Evaluate a formula in a model: its extension, truth at a state, or
    /// validity.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        /// Check truth at this state.
        #[arg(long, conflicts_with = "validity")]
        state: Option<String>,
        /// Check validity (designated states all satisfy the formula).
        #[arg(long)]
        validity: bool,
    },
    /// Print the classicized form of a named frame condition.
    Cvariant {
        /// Condition tag, e.g. X, ER, Nec, Cp, Box4.
        #[arg(long)]
        condition: String,
    },
    /// Apply the world-adjoining construction to an L-model.
    Plus {
        #[arg(long)]
        model: PathBuf,
        /// Write the resulting W-model here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-check preservation, transfer and frame conditions.
        #[arg(long)]
        verify: bool,
        /// Logic whose frame conditions the verification compares.
        #[arg(long)]
        logic: Option<String>,
    },
    /// Check a proof file against its declared system.
    ProofCheck {
        #[arg(long)]
        proof: PathBuf,
    },
    /// Lift an accepted relevant proof to the classicized system.
    Lift {
        #[arg(long)]
        proof: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relevant-reasoning transform: from a proof of a conjunctive
    /// implication to a classicized proof of the boxed version.
    Rr {
        #[arg(long)]
        proof: PathBuf,
        /// Number of conjuncts in the antecedent (left-nested split).
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a countermodel to a formula in a named logic.
    Search {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        logic: String,
        /// Designation style to search: L or W.
        #[arg(long, default_value = "L")]
        kind: String,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value_t = 60.0)]
        seconds: f64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Extra variables, comma separated.
        #[arg(long)]
        vars: Option<String>,
        /// Write a found countermodel here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect the condition table and the logic-name grammar.
    Registry {
        #[command(subcommand)]
        what: RegistryCmd,
    },
}

#[derive(Subcommand)]
enum RegistryCmd {
    /// Print the logic-name grammar and all condition tags.
    List,
    /// Print the conditions, axioms and rules of one logic.
    Show {
        #[arg(long)]
        logic: String,
        /// Show the classicized system instead.
        #[arg(long)]
        classicized: bool,
    },
}

enum CliError {
    /// Bad input: exits 2.
    Usage(String),
    /// Internal failure: exits 3.
    Internal(String),
}

fn read_model(path: &PathBuf) -> Result<Model, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    load_model_str(&text).map_err(|e| CliError::Usage(e.to_string()))
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    if let Some(p) = path {
        fs::write(p, text)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Parse { formula } => {
            let f = formula.get()?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "formula": f.to_string(),
                        "variables": f.variables(),
                        "complexity": f.complexity(),
                        "depth": f.depth(),
                    })
                );
            } else {
                println!("{f}");
            }
            Ok(0)
        }
        Command::ModelCheck {
            model,
            logic,
            classicized,
        } => {
            let text = fs::read_to_string(&model)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", model.display())))?;
            let m = match load_model_str(&text) {
                Ok(m) => m,
                Err(relog_core::structures::LoadError::Invalid { report }) => {
                    if cli.json {
                        println!("{}", json!({"ok": false, "violations": report.violations}));
                    } else {
                        println!("invalid: {report}");
                    }
                    return Ok(1);
                }
                Err(e) => return Err(CliError::Usage(e.to_string())),
            };
            if let Some(name) = logic {
                let rep = check_logic_frame(&m.structure, &m.designation, &name, classicized)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                if cli.json {
                    println!(
                        "{}",
                        json!({"ok": rep.is_ok(), "violations": rep.violations})
                    );
                } else if rep.is_ok() {
                    println!("ok: model satisfies the {name} frame conditions");
                } else {
                    println!("frame conditions fail: {rep}");
                }
                return Ok(if rep.is_ok() { 0 } else { 1 });
            }
            if cli.json {
                println!("{}", json!({"ok": true, "states": m.structure.len()}));
            } else {
                println!(
                    "ok: valid {}-model with {} state(s)",
                    m.designation.kind(),
                    m.structure.len()
                );
            }
            Ok(0)
        }
        Command::Eval {
            model,
            formula,
            state,
            validity,
        } => {
            let m = read_model(&model)?;
            let f = formula.get()?;
            if validity {
                let v = valid(&m, &f).map_err(|e| CliError::Usage(e.to_string()))?;
                if cli.json {
                    println!("{}", json!({"valid": v}));
                } else {
                    println!("{}", if v { "valid" } else { "invalid" });
                }
                return Ok(if v { 0 } else { 1 });
            }
            if let Some(st) = state {
                let v = satisfies(&m, &st, &f).map_err(|e| CliError::Usage(e.to_string()))?;
                if cli.json {
                    println!("{}", json!({"state": st, "satisfies": v}));
                } else {
                    println!("{}", if v { "true" } else { "false" });
                }
                return Ok(if v { 0 } else { 1 });
            }
            let ext = interpret(&m, &f);
            let names: Vec<&str> = ext.iter().map(|i| m.structure.name(i)).collect();
            if cli.json {
                println!("{}", json!({"extension": names}));
            } else {
                println!("{{{}}}", names.join(", "));
            }
            Ok(0)
        }
        Command::Cvariant { condition } => {
            let def = condition_by_tag(&condition).map_err(|e| CliError::Usage(e.to_string()))?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "tag": def.tag,
                        "condition": def.display(),
                        "cvariant": def.c_variant_display(),
                    })
                );
            } else {
                println!("{}", def.c_variant_display());
            }
            Ok(0)
        }
        Command::Plus {
            model,
            out,
            verify,
            logic,
        } => {
            let m = read_model(&model)?;
            if verify {
                let battery = default_formula_set(&m);
                let rep = verify_plus(&m, &battery, logic.as_deref())
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                write_out(&out, &rep.image.to_json())?;
                if cli.json {
                    println!(
                        "{}",
                        json!({
                            "ok": rep.ok(),
                            "image_states": rep.image.structure.len(),
                            "image_valid": rep.image_validation.is_ok(),
                            "formulas_checked": rep.formulas_checked,
                            "preservation_mismatches": rep.preservation_mismatches.len(),
                            "transfers_checked": rep.transfers.len(),
                            "transfer_ok": rep.transfer_ok(),
                            "frame_check": rep.frame_check.as_ref().map(|(name, input, image)| json!({
                                "logic": name,
                                "input_ok": input.is_ok(),
                                "image_ok": image.is_ok(),
                            })),
                        })
                    );
                } else {
                    println!(
                        "image: {} states, validation {}",
                        rep.image.structure.len(),
                        if rep.image_validation.is_ok() { "ok" } else { "FAILED" }
                    );
                    println!(
                        "preservation: {} formulas, {} mismatch(es)",
                        rep.formulas_checked,
                        rep.preservation_mismatches.len()
                    );
                    println!(
                        "transfer: {} invalid formula(s), {}",
                        rep.transfers.len(),
                        if rep.transfer_ok() {
                            "all refuted in the image"
                        } else {
                            "FAILURE"
                        }
                    );
                    if let Some((name, input, image)) = &rep.frame_check {
                        println!(
                            "frame check {name}: input {}, image {}",
                            if input.is_ok() { "ok" } else { "fails" },
                            if image.is_ok() { "ok" } else { "fails" }
                        );
                    }
                    println!("{}", if rep.ok() { "ok" } else { "FAILED" });
                }
                Ok(if rep.ok() { 0 } else { 1 })
            } else {
                let image = plus_construction(&m).map_err(|e| CliError::Usage(e.to_string()))?;
                let text = image.to_json();
                write_out(&out, &text)?;
                if out.is_none() {
                    println!("{text}");
                } else if !cli.json {
                    println!("wrote {} states", image.structure.len());
                }
                Ok(0)
            }
        }
        Command::ProofCheck { proof } => {
            let text = fs::read_to_string(&proof)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", proof.display())))?;
            let p = load_proof_str(&text).map_err(|e| CliError::Usage(e.to_string()))?;
            let verdict = check_proof(&p);
            if cli.json {
                println!(
                    "{}",
                    json!({"accepted": verdict.accepted, "failure": verdict.failure})
                );
            } else {
                println!("{verdict}");
            }
            Ok(if verdict.accepted { 0 } else { 1 })
        }
        Command::Lift { proof, out } => {
            let text = fs::read_to_string(&proof)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", proof.display())))?;
            let p = load_proof_str(&text).map_err(|e| CliError::Usage(e.to_string()))?;
            let lifted = lift_proof(&p).map_err(|e| CliError::Usage(e.to_string()))?;
            let json_text = proof_to_json(&lifted);
            write_out(&out, &json_text)?;
            if out.is_none() {
                println!("{json_text}");
            } else if !cli.json {
                println!("lifted conclusion: {}", lifted.conclusion().unwrap());
            }
            Ok(0)
        }
        Command::Rr { proof, n, out } => {
            let text = fs::read_to_string(&proof)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", proof.display())))?;
            let p = load_proof_str(&text).map_err(|e| CliError::Usage(e.to_string()))?;
            let conclusion = p
                .conclusion()
                .ok_or_else(|| CliError::Usage("empty proof".into()))?
                .clone();
            let (parts, psi) = split_conjunctive_implication(&conclusion, n).ok_or_else(|| {
                CliError::Usage(format!(
                    "conclusion {conclusion} does not split as {n} conjunct(s) implying a consequent"
                ))
            })?;
            let outp =
                rr_transform(&p, &parts, &psi).map_err(|e| CliError::Usage(e.to_string()))?;
            let json_text = proof_to_json(&outp);
            write_out(&out, &json_text)?;
            if out.is_none() {
                println!("{json_text}");
            } else if !cli.json {
                println!("conclusion: {}", outp.conclusion().unwrap());
            }
            Ok(0)
        }
        Command::Search {
            formula,
            logic,
            kind,
            max_size,
            seconds,
            jobs,
            vars,
            out,
        } => {
            let f = formula.get()?;
            let kind = match kind.as_str() {
                "L" => Kind::L,
                "W" => Kind::W,
                other => {
                    return Err(CliError::Usage(format!(
                        "--kind must be L or W, not {other:?}"
                    )))
                }
            };
            let budget = SearchBudget {
                max_states: max_size,
                variables: vars
                    .map(|v| {
                        v.split(',')
                            .map(|s| s.trim().to_string())
                            .filter(|s| !s.is_empty())
                            .collect()
                    })
                    .unwrap_or_default(),
                max_seconds: seconds,
                workers: jobs,
            };
            let outcome = find_countermodel(&f, &logic, kind, &budget)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            match outcome.countermodel {
                Some(cm) => {
                    let text = cm.model.to_json();
                    write_out(&out, &text)?;
                    if cli.json {
                        println!(
                            "{}",
                            json!({"found": true, "states": cm.states, "witness": cm.witness})
                        );
                    } else {
                        println!(
                            "countermodel with {} state(s); fails at designated state {}",
                            cm.states, cm.witness
                        );
                        if out.is_none() {
                            println!("{text}");
                        }
                    }
                    Ok(1)
                }
                None => {
                    if cli.json {
                        println!(
                            "{}",
                            json!({
                                "found": false,
                                "exhausted_states": outcome.exhausted_states,
                                "timed_out": outcome.timed_out,
                            })
                        );
                    } else {
                        println!(
                            "no countermodel: exhausted all models up to {} state(s){}",
                            outcome.exhausted_states,
                            if outcome.timed_out {
                                "; budget hit before the next tier finished"
                            } else {
                                ""
                            }
                        );
                    }
                    Ok(0)
                }
            }
        }
        Command::Registry { what } => match what {
            RegistryCmd::List => {
                if cli.json {
                    let tags: Vec<_> = CONDITION_TAGS
                        .iter()
                        .map(|t| {
                            let def = condition_by_tag(t).unwrap();
                            json!({
                                "tag": t,
                                "condition": def.display(),
                                "cvariant": def.c_variant_display(),
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "grammar": "<BM|DW|TW|T|E|R|RM>.<C|R|K>[T][D][4][5][+DN]",
                            "conditions": tags,
                        })
                    );
                } else {
                    println!("logic names: <BM|DW|TW|T|E|R|RM>.<C|R|K>[T][D][4][5], optional +DN");
                    println!("condition tags:");
                    for tag in CONDITION_TAGS {
                        let def = condition_by_tag(tag).unwrap();
                        println!("  {:5} {}", tag, def.display());
                    }
                }
                Ok(0)
            }
            RegistryCmd::Show { logic, classicized } => {
                let spec = logic_conditions(&logic, classicized)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                if cli.json {
                    let conds: Vec<_> = spec
                        .conditions
                        .iter()
                        .map(|c| json!({"tag": c.tag, "display": c.display}))
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "name": spec.name,
                            "classicized": spec.classicized,
                            "conditions": conds,
                            "axioms": spec.axioms,
                            "rules": spec.rules,
                        })
                    );
                } else {
                    println!(
                        "{}{}",
                        spec.name,
                        if classicized { " (classicized)" } else { "" }
                    );
                    println!("conditions:");
                    for c in &spec.conditions {
                        println!("  ({}) {}", c.tag, c.display);
                    }
                    println!("axioms: {}", spec.axioms.join(", "));
                    println!("rules: {}", spec.rules.join(", "));
                }
                Ok(0)
            }
        },
    }
}

/// Split `(((phi_1 & phi_2) & ...) & phi_n) -> psi` into parts and
/// consequent.
fn split_conjunctive_implication(f: &Formula, n: usize) -> Option<(Vec<Formula>, Formula)> {
    let Formula::Imp(lhs, psi) = f else {
        return None;
    };
    let mut parts = vec![];
    let mut cur: &Formula = lhs;
    for _ in 1..n {
        let Formula::And(l, r) = cur else {
            return None;
        };
        parts.push((**r).clone());
        cur = l;
    }
    parts.push(cur.clone());
    parts.reverse();
    Some((parts, (**psi).clone()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
