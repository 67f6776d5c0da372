use std::collections::BTreeSet;

use super::{
    extract, verify, Bundles, Child, Engine, Modal, Outcome, Rules, TableauError, TableauOptions, Verdict, ROOT_WORLD,
};
use crate::formula::{cleanse, cleanse_jointly, fresh_var, to_nnf, Formula, Var};
use crate::kripke::Assignment;

struct IncreasingRules;

impl Rules for IncreasingRules {
    const VARS_NAME: &'static str = "F";

    fn modal(&self, world: &str, gamma: &BTreeSet<Formula>, vars: &BTreeSet<Var>) -> Result<Modal, TableauError> {
        let bundles = Bundles::of(gamma);
        if !bundles.has_diamond() {
            return Ok(Modal::End {
                dom: vars.clone(),
                rule: "END",
            });
        }

        let mut dom = vars.clone();
        dom.extend(bundles.exists_diamond.iter().map(|(x, _)| (*x).clone()));
        dom.extend(bundles.exists_box.iter().map(|(y, _)| (*y).clone()));

        let mut shared: Vec<Formula> = bundles.exists_box.iter().map(|(_, beta)| (*beta).clone()).collect();
        for (z, psi) in &bundles.forall_box {
            for d in &dom {
                shared.push(psi.substitute(z, d)?);
            }
        }

        let mut children = Vec::new();
        let mut push = |name: String, first: Formula| {
            let formulas: Vec<Formula> = std::iter::once(&first).chain(&shared).cloned().collect();
            // Instances of one formula for different elements bind the same
            // variables; rename them apart so witnesses are not shared.
            let gamma = cleanse_jointly(&formulas, &dom).into_iter().collect();
            children.push(Child {
                name,
                gamma,
                vars: dom.clone(),
            });
        };
        for (x, alpha) in &bundles.exists_diamond {
            push(format!("{world}.{x}"), (*alpha).clone());
        }
        for (z, phi) in &bundles.forall_diamond {
            for y in &dom {
                push(format!("{world}.{z}[{y}]"), phi.substitute(z, y)?);
            }
        }
        Ok(Modal::Branch { dom, children })
    }
}

/// Decides satisfiability of `theta` over increasing-domain models.
///
/// The input is put into NNF and cleansed; the root label is
/// `(r, {θ'}, FV(θ') ∪ {z})` with `z` fresh. On `Sat` the extracted model is
/// checked against `θ'` at `r` under the identity assignment on that set.
pub fn decide_increasing(theta: &Formula, options: TableauOptions) -> Result<Outcome, TableauError> {
    let formula = cleanse(&to_nnf(theta));
    let mut root_vars = formula.free_vars();
    root_vars.insert(fresh_var("z", &formula.all_vars(), true));

    let rules = IncreasingRules;
    let mut engine = Engine::new(&rules, options);
    let completion = engine.expand(ROOT_WORLD, BTreeSet::from([formula.clone()]), &root_vars, 0, "root")?;
    let (stats, trace) = engine.finish();
    let assignment = Assignment::identity(&root_vars);
    let model = match completion {
        Some(root) => {
            let model = extract(&root, None);
            verify(&model, &assignment, &formula)?;
            Some(model)
        }
        None => None,
    };
    Ok(Outcome {
        verdict: if model.is_some() { Verdict::Sat } else { Verdict::Unsat },
        formula,
        model,
        assignment,
        stats,
        trace,
    })
}
