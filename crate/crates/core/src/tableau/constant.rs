use std::collections::{BTreeMap, BTreeSet};

use super::{
    extract, verify, Bundles, Child, Engine, Modal, Outcome, Rules, TableauError, TableauOptions, Verdict, ROOT_WORLD,
};
use crate::formula::{classify, cleanse, fresh_var, to_nnf, Formula, Fragment, Var};
use crate::kripke::Assignment;

/// The fixed domain of the constant-domain tableau for `theta`.
///
/// Every variable `x` bound by an `E x []` subformula gets a pool of `h`
/// fresh witnesses `x_k` (`h` the modal depth); `D_θ` is the free variables,
/// all pools, and one more fresh `z` so that the domain is never empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantDomainPlan {
    pub theta: Formula,
    pub modal_depth: usize,
    pub exists_box_vars: BTreeSet<Var>,
    pub pools: BTreeMap<Var, Vec<Var>>,
    pub z: Var,
    pub domain: BTreeSet<Var>,
}

/// Normalizes `theta` (NNF, clean) and computes its plan. Fresh names take
/// the least indices not occurring in the formula, pools first, then `z`.
pub fn build_domain(theta: &Formula) -> Result<ConstantDomainPlan, TableauError> {
    let theta = cleanse(&to_nnf(theta));
    let fragment = classify(&theta);
    if fragment != Fragment::ExistsBox {
        return Err(TableauError::Fragment(fragment));
    }
    let h = theta.modal_depth();
    let exists_box_vars = theta.exists_box_vars();
    let mut used = theta.all_vars();
    let mut pools = BTreeMap::new();
    for x in &exists_box_vars {
        let pool: Vec<Var> = (0..h)
            .map(|_| {
                let v = fresh_var(x.base(), &used, false);
                used.insert(v.clone());
                v
            })
            .collect();
        pools.insert(x.clone(), pool);
    }
    let z = fresh_var("z", &used, true);
    let mut domain = theta.free_vars();
    domain.extend(pools.values().flatten().cloned());
    domain.insert(z.clone());
    Ok(ConstantDomainPlan {
        theta,
        modal_depth: h,
        exists_box_vars,
        pools,
        z,
        domain,
    })
}

struct ConstantRules<'p> {
    plan: &'p ConstantDomainPlan,
}

impl Rules for ConstantRules<'_> {
    const VARS_NAME: &'static str = "C";

    fn modal(&self, world: &str, gamma: &BTreeSet<Formula>, used: &BTreeSet<Var>) -> Result<Modal, TableauError> {
        let bundles = Bundles::of(gamma);
        if !bundles.exists_diamond.is_empty() || !bundles.forall_box.is_empty() {
            return Err(TableauError::Fragment(Fragment::Full));
        }
        let dom = self.plan.domain.clone();
        if bundles.forall_diamond.is_empty() {
            return Ok(Modal::End { dom, rule: "END" });
        }

        let mut witnessed = Vec::with_capacity(bundles.exists_box.len());
        let mut next_used = used.clone();
        for (x, phi) in &bundles.exists_box {
            let witness = self.plan.pools[*x].iter().find(|v| !used.contains(*v)).ok_or_else(|| {
                TableauError::WitnessPoolExhausted {
                    var: (*x).clone(),
                    world: world.to_string(),
                }
            })?;
            witnessed.push(phi.substitute(x, witness)?);
            next_used.insert(witness.clone());
        }

        let mut children = Vec::new();
        for y in &self.plan.domain {
            for (yi, psi) in &bundles.forall_diamond {
                let mut gamma: BTreeSet<Formula> = witnessed.iter().cloned().collect();
                gamma.insert(psi.substitute(yi, y)?);
                let mut vars = next_used.clone();
                vars.insert(y.clone());
                children.push(Child {
                    name: format!("{world}.{yi}[{y}]"),
                    gamma,
                    vars,
                });
            }
        }
        Ok(Modal::Branch { dom, children })
    }
}

/// Decides satisfiability of an `E x []`-fragment formula over
/// constant-domain models. On `Sat` the model has domain `D_θ` at every
/// world and is checked against `θ` at `r` under the identity on `FV(θ)`.
pub fn decide_constant_eb(theta: &Formula, options: TableauOptions) -> Result<Outcome, TableauError> {
    let plan = build_domain(theta)?;
    let formula = plan.theta.clone();
    let root_vars = formula.free_vars();

    let rules = ConstantRules { plan: &plan };
    let mut engine = Engine::new(&rules, options);
    let completion = engine.expand(ROOT_WORLD, BTreeSet::from([formula.clone()]), &root_vars, 0, "root")?;
    let (stats, trace) = engine.finish();
    let assignment = Assignment::identity(&root_vars);
    let model = match completion {
        Some(root) => {
            let model = extract(&root, Some(&plan.domain));
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
