use std::collections::{BTreeMap, HashMap, HashSet};

use super::model::{KripkeModel, Violation};
use crate::formula::{Formula, Modality, Quantifier, Var};

/// A finite variable assignment into domain elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, String>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    /// Maps every variable to the element of the same name, as in models
    /// extracted from tableaux.
    pub fn identity<'a, I: IntoIterator<Item = &'a Var>>(vars: I) -> Self {
        Assignment(vars.into_iter().map(|v| (v.clone(), v.to_string())).collect())
    }

    pub fn with(mut self, var: Var, element: impl Into<String>) -> Self {
        self.0.insert(var, element.into());
        self
    }

    pub fn insert(&mut self, var: Var, element: impl Into<String>) {
        self.0.insert(var, element.into());
    }

    pub fn get(&self, var: &Var) -> Option<&str> {
        self.0.get(var).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &str)> {
        self.0.iter().map(|(v, e)| (v, e.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(Var, String)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, String)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("invalid model: {0}")]
    InvalidModel(#[from] Violation),
    #[error("unknown world {0}")]
    UnknownWorld(String),
    #[error("assignment maps {var} to {element}, which is not in the domain")]
    UnknownElement { var: Var, element: String },
    #[error("assignment is not relevant at {world}: {var} is mapped to {element}")]
    Irrelevant { var: Var, element: String, world: String },
    #[error("free variable {0} is not assigned")]
    Unbound(Var),
    #[error("predicate {pred} has arity {used} in the formula but {interpreted} in the model")]
    ArityMismatch {
        pred: String,
        used: usize,
        interpreted: usize,
    },
}

/// `M, w, σ ⊨ φ`.
///
/// Validates the model, requires `σ` to be relevant at `w` and to cover the
/// free variables of `φ`.
pub fn check(model: &KripkeModel, world: &str, sigma: &Assignment, phi: &Formula) -> Result<bool, CheckError> {
    Evaluator::new(model)?.check(world, sigma, phi)
}

/// A model indexed for repeated evaluation.
pub struct Evaluator<'m> {
    model: &'m KripkeModel,
    worlds: HashMap<&'m str, usize>,
    elements: HashMap<&'m str, usize>,
    succ: Vec<Vec<usize>>,
    local: Vec<Vec<usize>>,
    in_local: Vec<Vec<bool>>,
    facts: Vec<HashMap<&'m str, HashSet<Vec<usize>>>>,
    arities: HashMap<&'m str, usize>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m KripkeModel) -> Result<Self, CheckError> {
        model.validate()?;
        let worlds: HashMap<&str, usize> = model.worlds.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
        let elements: HashMap<&str, usize> = model.domain.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        let n = model.worlds.len();
        let mut succ = vec![Vec::new(); n];
        for (w, v) in &model.edges {
            succ[worlds[w.as_str()]].push(worlds[v.as_str()]);
        }
        let mut local = vec![Vec::new(); n];
        let mut in_local = vec![vec![false; elements.len()]; n];
        for (w, dom) in &model.local {
            let wi = worlds[w.as_str()];
            for e in dom {
                let ei = elements[e.as_str()];
                local[wi].push(ei);
                in_local[wi][ei] = true;
            }
        }
        let mut facts = vec![HashMap::new(); n];
        let mut arities = HashMap::new();
        for (w, preds) in &model.rho {
            let wi = worlds[w.as_str()];
            for (p, tuples) in preds {
                let set: &mut HashSet<Vec<usize>> = facts[wi].entry(p.as_str()).or_default();
                for t in tuples {
                    arities.insert(p.as_str(), t.len());
                    set.insert(t.iter().map(|e| elements[e.as_str()]).collect());
                }
            }
        }
        Ok(Evaluator {
            model,
            worlds,
            elements,
            succ,
            local,
            in_local,
            facts,
            arities,
        })
    }

    pub fn model(&self) -> &KripkeModel {
        self.model
    }

    pub fn check(&self, world: &str, sigma: &Assignment, phi: &Formula) -> Result<bool, CheckError> {
        let &w = self
            .worlds
            .get(world)
            .ok_or_else(|| CheckError::UnknownWorld(world.to_string()))?;
        let mut env = Vec::new();
        for (var, element) in sigma.iter() {
            let &e = self.elements.get(element).ok_or_else(|| CheckError::UnknownElement {
                var: var.clone(),
                element: element.to_string(),
            })?;
            if !self.in_local[w][e] {
                return Err(CheckError::Irrelevant {
                    var: var.clone(),
                    element: element.to_string(),
                    world: world.to_string(),
                });
            }
            env.push((var.clone(), e));
        }
        if let Some(v) = phi.free_vars().into_iter().find(|v| sigma.get(v).is_none()) {
            return Err(CheckError::Unbound(v));
        }
        let mut arity_error = None;
        phi.visit(&mut |g| {
            if let Formula::Atom(atom) = g {
                if let Some(&n) = self.arities.get(atom.pred.name()) {
                    if n != atom.args.len() && arity_error.is_none() {
                        arity_error = Some(CheckError::ArityMismatch {
                            pred: atom.pred.name().to_string(),
                            used: atom.args.len(),
                            interpreted: n,
                        });
                    }
                }
            }
        });
        if let Some(err) = arity_error {
            return Err(err);
        }
        Ok(self.eval(w, &mut env, phi))
    }

    fn lookup(env: &[(Var, usize)], var: &Var) -> usize {
        env.iter()
            .rev()
            .find(|(v, _)| v == var)
            .map(|(_, e)| *e)
            .expect("free variables are bound before evaluation")
    }

    fn relevant(&self, w: usize, env: &[(Var, usize)]) -> bool {
        env.iter().all(|&(_, e)| self.in_local[w][e])
    }

    fn eval(&self, w: usize, env: &mut Vec<(Var, usize)>, phi: &Formula) -> bool {
        match phi {
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Atom(atom) => {
                let tuple: Vec<usize> = atom.args.iter().map(|a| Self::lookup(env, a)).collect();
                self.facts[w]
                    .get(atom.pred.name())
                    .is_some_and(|set| set.contains(&tuple))
            }
            Formula::Not(a) => !self.eval(w, env, a),
            Formula::And(a, b) => self.eval(w, env, a) && self.eval(w, env, b),
            Formula::Or(a, b) => self.eval(w, env, a) || self.eval(w, env, b),
            Formula::Implies(a, b) => !self.eval(w, env, a) || self.eval(w, env, b),
            Formula::Bundle {
                quantifier,
                modality,
                var,
                body,
            } => {
                let at_successors = |d: usize, env: &mut Vec<(Var, usize)>| {
                    env.push((var.clone(), d));
                    let mut step = |v: usize| {
                        debug_assert!(self.relevant(v, env), "relevance lost along an edge");
                        self.eval(v, env, body)
                    };
                    let result = match modality {
                        Modality::Box => self.succ[w].iter().all(|&v| step(v)),
                        Modality::Diamond => self.succ[w].iter().any(|&v| step(v)),
                    };
                    env.pop();
                    result
                };
                match quantifier {
                    Quantifier::Exists => self.local[w].iter().any(|&d| at_successors(d, env)),
                    Quantifier::Forall => self.local[w].iter().all(|&d| at_successors(d, env)),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    fn one_world(facts: &[&str]) -> KripkeModel {
        let mut m = KripkeModel {
            worlds: vec!["w".into()],
            domain: ["a".to_string()].into_iter().collect(),
            local: [("w".to_string(), ["a".to_string()].into_iter().collect::<BTreeSet<_>>())]
                .into_iter()
                .collect(),
            ..Default::default()
        };
        for p in facts {
            m.insert_fact("w", p, vec!["a".into()]);
        }
        m
    }

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn atomic_clause() {
        let m = one_world(&["P"]);
        let sigma = Assignment::new().with(Var::new("x"), "a");
        assert_eq!(check(&m, "w", &sigma, &f("P(x)")), Ok(true));
        assert_eq!(check(&m, "w", &sigma, &f("Q(x)")), Ok(false));
    }

    #[test]
    fn vacuous_box_versus_witness_diamond() {
        let m = one_world(&["P"]);
        let empty = Assignment::new();
        assert_eq!(check(&m, "w", &empty, &f("E x [] P(x)")), Ok(true));
        assert_eq!(check(&m, "w", &empty, &f("E x <> P(x)")), Ok(false));
        assert_eq!(check(&m, "w", &empty, &f("A x [] F")), Ok(true));
        assert_eq!(check(&m, "w", &empty, &f("A x <> T")), Ok(false));
    }

    #[test]
    fn precondition_errors() {
        let m = one_world(&["P"]);
        assert_eq!(
            check(&m, "w", &Assignment::new(), &f("P(x)")),
            Err(CheckError::Unbound(Var::new("x")))
        );
        assert_eq!(
            check(&m, "nowhere", &Assignment::new(), &f("T")),
            Err(CheckError::UnknownWorld("nowhere".into()))
        );
        assert!(matches!(
            check(&m, "w", &Assignment::new().with(Var::new("x"), "zz"), &f("P(x)")),
            Err(CheckError::UnknownElement { .. })
        ));
        assert!(matches!(
            check(&m, "w", &Assignment::new().with(Var::new("x"), "a"), &f("P(x,x)")),
            Err(CheckError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn irrelevant_assignment_is_rejected() {
        let mut m = one_world(&[]);
        m.domain.insert("b".into());
        let sigma = Assignment::new().with(Var::new("x"), "b");
        assert!(matches!(
            check(&m, "w", &sigma, &f("P(x)")),
            Err(CheckError::Irrelevant { .. })
        ));
    }

    #[test]
    fn quantifiers_range_over_local_domain() {
        // w -> v, δ(w) = {a}, δ(v) = {a, b}; P holds of b only at v
        let mut m = KripkeModel {
            worlds: vec!["w".into(), "v".into()],
            domain: ["a", "b"].iter().map(|s| s.to_string()).collect(),
            edges: [("w".to_string(), "v".to_string())].into_iter().collect(),
            local: [
                ("w".to_string(), ["a"].iter().map(|s| s.to_string()).collect()),
                ("v".to_string(), ["a", "b"].iter().map(|s| s.to_string()).collect()),
            ]
            .into_iter()
            .collect(),
            ..Default::default()
        };
        m.insert_fact("v", "P", vec!["b".into()]);
        let empty = Assignment::new();
        assert_eq!(check(&m, "w", &empty, &f("E x <> P(x)")), Ok(false));
        assert_eq!(check(&m, "v", &empty, &f("E x [] T")), Ok(true));
        assert_eq!(check(&m, "w", &empty, &f("A x [] !P(x)")), Ok(true));
    }
}
