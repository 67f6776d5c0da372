use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use bfoml_core::formula::{classify, cleanse, is_clean, parse, to_nnf};
use bfoml_core::kripke::{enumerate_sat, Evaluator, DEFAULT_ORACLE_BUDGET};
use bfoml_core::reduction::{build_witness_model, fo_check, parse_fo, translate_sentence, FoModel};
use bfoml_core::tableau::{decide_constant_eb, decide_increasing, TableauOptions, DEFAULT_NODE_BUDGET};
use bfoml_core::{Assignment, Formula, KripkeModel, Semantics, Var, Verdict};
use serde::Serialize;

use crate::{CheckArgs, FormulaInput, OracleArgs, SatArgs, TranslateArgs};

pub const EXIT_SAT: u8 = 10;
pub const EXIT_UNSAT: u8 = 20;
pub const EXIT_FALSE: u8 = 3;

fn read_text(text: &Option<String>, file: &Option<PathBuf>) -> Result<String> {
    match (text, file) {
        (Some(t), _) => Ok(t.clone()),
        (None, Some(path)) => fs::read_to_string(path).with_context(|| format!("reading {}", path.display())),
        (None, None) => bail!("no input given"),
    }
}

fn read_formula(input: &FormulaInput) -> Result<Formula> {
    let text = read_text(&input.formula, &input.file)?;
    parse(text.trim()).map_err(|e| anyhow!("{e}"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct RunReport {
    verdict: &'static str,
    elapsed_ms: u128,
    nodes: usize,
    model: Option<PathBuf>,
}

pub fn sat(args: SatArgs) -> Result<u8> {
    let start = Instant::now();
    let outcome = decide(&args);
    if let Some(path) = &args.report {
        let report = match &outcome {
            Ok((verdict, nodes)) => RunReport {
                verdict: if *verdict == Verdict::Sat { "SAT" } else { "UNSAT" },
                elapsed_ms: start.elapsed().as_millis(),
                nodes: *nodes,
                model: args.model.clone().filter(|_| *verdict == Verdict::Sat),
            },
            Err(_) => RunReport {
                verdict: "INPUT-ERROR",
                elapsed_ms: start.elapsed().as_millis(),
                nodes: 0,
                model: None,
            },
        };
        write_file(path, &serde_json::to_string_pretty(&report)?)?;
    }
    let (verdict, _) = outcome?;
    println!("{verdict}");
    Ok(if verdict == Verdict::Sat { EXIT_SAT } else { EXIT_UNSAT })
}

fn decide(args: &SatArgs) -> Result<(Verdict, usize)> {
    let phi = read_formula(&args.input)?;
    let options = TableauOptions {
        node_budget: args.budget.unwrap_or(DEFAULT_NODE_BUDGET),
        trace: args.trace.is_some(),
        ..Default::default()
    };
    let out = match Semantics::from(args.semantics) {
        Semantics::Increasing => decide_increasing(&phi, options)?,
        Semantics::Constant => decide_constant_eb(&phi, options)?,
    };
    if let (Some(path), Some(trace)) = (&args.trace, &out.trace) {
        if path.as_os_str() == "-" {
            std::io::stderr().write_all(trace.as_bytes())?;
        } else {
            write_file(path, trace)?;
        }
    }
    if let (Some(path), Some(model)) = (&args.model, &out.model) {
        write_file(path, &model.to_json())?;
    }
    Ok((out.verdict, out.stats.nodes))
}

fn parse_assignment(pairs: &[String]) -> Result<Assignment> {
    let mut sigma = Assignment::new();
    for pair in pairs {
        let (var, element) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("assignment `{pair}` is not of the form x=e"))?;
        sigma.insert(Var::new(var.trim()), element.trim());
    }
    Ok(sigma)
}

fn read_model(path: &Path) -> Result<KripkeModel> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    KripkeModel::from_json(&text).with_context(|| format!("parsing model {}", path.display()))
}

pub fn check(args: CheckArgs) -> Result<u8> {
    let model = read_model(&args.model)?;
    let phi = read_formula(&args.input)?;
    let sigma = parse_assignment(&args.assign)?;
    let evaluator = Evaluator::new(&model)?;
    let world = match &args.world {
        Some(w) => w.clone(),
        None => model
            .worlds
            .first()
            .cloned()
            .ok_or_else(|| anyhow!("model has no worlds"))?,
    };
    let truth = evaluator.check(&world, &sigma, &phi)?;
    println!("{truth}");
    Ok(if truth { 0 } else { EXIT_FALSE })
}

pub fn nnf(input: FormulaInput) -> Result<u8> {
    println!("{}", to_nnf(&read_formula(&input)?));
    Ok(0)
}

pub fn clean(input: FormulaInput) -> Result<u8> {
    println!("{}", cleanse(&read_formula(&input)?));
    Ok(0)
}

fn list<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let items: Vec<String> = items.into_iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

pub fn info(input: FormulaInput) -> Result<u8> {
    let phi = read_formula(&input)?;
    let normal = cleanse(&to_nnf(&phi));
    println!("formula: {phi}");
    println!("normalized: {normal}");
    println!("size: {}", phi.size());
    println!("modal depth: {}", phi.modal_depth());
    println!("free variables: {}", list(phi.free_vars()));
    println!(
        "predicates: {}",
        list(phi.predicates().iter().map(|p| format!("{}/{}", p.name(), p.arity())))
    );
    println!("clean: {}", is_clean(&phi));
    println!("nnf: {}", to_nnf(&phi) == phi);
    println!("fragment: {:?}", classify(&normal));
    println!("exists-box variables: {}", list(normal.exists_box_vars()));
    Ok(0)
}

pub fn translate(args: TranslateArgs) -> Result<u8> {
    let text = read_text(&args.sentence, &args.file)?;
    let alpha = parse_fo(&text).map_err(|e| anyhow!("{e}"))?;
    let psi = translate_sentence(&alpha);
    println!("{psi}");
    if let Some(path) = &args.witness {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let m = FoModel::from_json(&text).with_context(|| format!("parsing FO model {}", path.display()))?;
        m.validate().map_err(|e| anyhow!("{e}"))?;
        if !fo_check(&m, &alpha) {
            bail!("the FO model does not satisfy {alpha}");
        }
        let k = build_witness_model(&m, &alpha);
        match &args.witness_out {
            Some(out) => write_file(out, &k.to_json())?,
            None => println!("{}", k.to_json()),
        }
    }
    Ok(0)
}

pub fn oracle(args: OracleArgs) -> Result<u8> {
    let phi = read_formula(&args.input)?;
    let found = enumerate_sat(
        &phi,
        args.max_worlds,
        args.max_domain,
        args.semantics.into(),
        args.budget.unwrap_or(DEFAULT_ORACLE_BUDGET),
    )?;
    match found {
        Some(found) => {
            println!("SAT");
            eprintln!(
                "model with {} world(s) and {} element(s), root {}",
                found.model.worlds.len(),
                found.model.domain.len(),
                found.root
            );
            if !found.assignment.is_empty() {
                let pairs: Vec<String> = found.assignment.iter().map(|(x, e)| format!("{x}={e}")).collect();
                eprintln!("assignment: {}", pairs.join(" "));
            }
            if let Some(path) = &args.model {
                write_file(path, &found.model.to_json())?;
            }
            Ok(EXIT_SAT)
        }
        None => {
            println!("UNSAT");
            eprintln!(
                "no model with at most {} world(s) and {} element(s)",
                args.max_worlds, args.max_domain
            );
            Ok(EXIT_UNSAT)
        }
    }
}
