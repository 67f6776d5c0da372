use anyhow::Result;
use bfoml_core::gen::{generate, GenConfig, GenFragment};
use bfoml_core::kripke::{enumerate_sat, DEFAULT_ORACLE_BUDGET};
use bfoml_core::tableau::{decide_constant_eb, decide_increasing, TableauOptions, DEFAULT_NODE_BUDGET};
use bfoml_core::{Formula, Semantics, Verdict};
use rayon::prelude::*;

use crate::FuzzArgs;

#[derive(Default)]
struct Case {
    increasing: Option<Verdict>,
    constant: Option<Verdict>,
    oracle_checks: usize,
    failure: Option<String>,
}

struct Bounds {
    worlds: usize,
    domain: usize,
    options: TableauOptions,
}

impl Bounds {
    /// `Some(reason)` if the oracle finds a model of `phi` over `semantics`.
    fn refutes(&self, phi: &Formula, semantics: Semantics) -> Result<Option<String>, String> {
        match enumerate_sat(phi, self.worlds, self.domain, semantics, DEFAULT_ORACLE_BUDGET) {
            Ok(Some(found)) => Ok(Some(format!(
                "{semantics} tableau says UNSAT but the oracle found a model with {} world(s) and {} element(s)",
                found.model.worlds.len(),
                found.model.domain.len()
            ))),
            Ok(None) => Ok(None),
            Err(e) => Err(format!("oracle: {e}")),
        }
    }
}

fn run_case(phi: &Formula, eb: bool, bounds: &Bounds) -> Case {
    let mut case = Case::default();
    let fail = |mut case: Case, reason: String| {
        case.failure = Some(reason);
        case
    };
    let increasing = match decide_increasing(phi, bounds.options) {
        Ok(out) => out.verdict,
        Err(e) => return fail(case, format!("increasing tableau: {e}")),
    };
    case.increasing = Some(increasing);
    if eb {
        let constant = match decide_constant_eb(phi, bounds.options) {
            Ok(out) => out.verdict,
            Err(e) => return fail(case, format!("constant tableau: {e}")),
        };
        case.constant = Some(constant);
        if constant != increasing {
            return fail(case, format!("increasing says {increasing}, constant says {constant}"));
        }
    }
    if increasing == Verdict::Unsat {
        let semantics: &[Semantics] = if eb {
            &[Semantics::Increasing, Semantics::Constant]
        } else {
            &[Semantics::Increasing]
        };
        for &s in semantics {
            case.oracle_checks += 1;
            match bounds.refutes(phi, s) {
                Ok(None) => {}
                Ok(Some(reason)) | Err(reason) => return fail(case, reason),
            }
        }
    }
    case
}

fn tally(cases: &[&Case], pick: impl Fn(&Case) -> Option<Verdict>) -> (usize, usize) {
    let verdicts: Vec<Verdict> = cases.iter().filter_map(|c| pick(c)).collect();
    let sat = verdicts.iter().filter(|v| **v == Verdict::Sat).count();
    (sat, verdicts.len() - sat)
}

pub fn run(args: FuzzArgs) -> Result<u8> {
    let fragment = GenFragment::from(args.fragment);
    let eb = fragment == GenFragment::ExistsBox;
    let config = GenConfig {
        max_depth: args.max_depth,
        fragment,
        weights: args.weights.unwrap_or_default(),
        ..Default::default()
    };
    let bounds = Bounds {
        worlds: args.max_worlds,
        domain: args.max_domain,
        options: TableauOptions {
            node_budget: args.budget.unwrap_or(DEFAULT_NODE_BUDGET),
            ..Default::default()
        },
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build()?;
    let results: Vec<(Formula, Case)> = pool.install(|| {
        (0..args.count as u64)
            .into_par_iter()
            .map(|i| {
                let phi = generate(args.seed, i, &config);
                let case = run_case(&phi, eb, &bounds);
                (phi, case)
            })
            .collect()
    });
    let cases: Vec<&Case> = results.iter().map(|(_, c)| c).collect();

    let name = if eb { "eb" } else { "full" };
    println!(
        "fuzz: seed {}, {} cases, fragment {name}, max depth {}",
        args.seed, args.count, args.max_depth
    );
    let (sat, unsat) = tally(&cases, |c| c.increasing);
    println!("increasing: {sat} SAT, {unsat} UNSAT");
    if eb {
        let (sat, unsat) = tally(&cases, |c| c.constant);
        println!("constant: {sat} SAT, {unsat} UNSAT");
        let agree = cases
            .iter()
            .filter(|c| c.constant.is_some() && c.constant == c.increasing)
            .count();
        println!("verdict agreement: {agree}/{}", cases.len());
    }
    let checks: usize = cases.iter().map(|c| c.oracle_checks).sum();
    println!(
        "oracle: {checks} UNSAT verdict(s) checked within {} world(s) and {} element(s)",
        args.max_worlds, args.max_domain
    );
    let failures: Vec<(usize, &Formula, &String)> = results
        .iter()
        .enumerate()
        .filter_map(|(i, (phi, c))| c.failure.as_ref().map(|f| (i, phi, f)))
        .collect();
    println!("failures: {}", failures.len());
    match failures.first() {
        Some((i, phi, reason)) => println!("first counterexample: case {i}: {phi}: {reason}"),
        None => println!("first counterexample: none"),
    }
    Ok(if failures.is_empty() { 0 } else { 1 })
}
