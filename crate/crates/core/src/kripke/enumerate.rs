//! Bounded model search, used as an oracle independent of the tableaux.
//!
//! [`enumerate_sat`] fixes `|W|` and `|D|`, then treats every accessibility
//! edge, local-domain membership and interpretation fact as a boolean unknown
//! and grounds the satisfaction relation over them into a propositional
//! circuit. A SAT solver answers whether some frame, domain map and
//! interpretation of that size satisfy the formula at world `w0`. Sizes are
//! tried in the order `|W| = 1..`, then `|D| = 1..`.
//!
//! [`enumerate_exhaustive`] walks the same space model by model and evaluates
//! each candidate with the model checker. It is only usable for tiny bounds
//! and exists to cross-check the grounded search.

use std::collections::{BTreeSet, HashMap};

use varisat::{ExtendFormula, Lit, Solver};

use super::eval::{Assignment, Evaluator};
use super::model::KripkeModel;
use super::Semantics;
use crate::formula::{Formula, Modality, Predicate, Quantifier, Var};

/// Default cap on grounded circuit gates (grounded search) or candidate
/// models (exhaustive search) per size.
pub const DEFAULT_ORACLE_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("search budget of {budget} exceeded at |W|={worlds}, |D|={domain}")]
    ResourceLimit {
        budget: usize,
        worlds: usize,
        domain: usize,
    },
    #[error("internal error: found model does not satisfy the formula")]
    Unsound,
}

/// A model found by the bounded search, with the evaluation point and the
/// assignment of the formula's free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundModel {
    pub model: KripkeModel,
    pub root: String,
    pub assignment: Assignment,
}

pub fn world_name(i: usize) -> String {
    format!("w{i}")
}

pub fn element_name(i: usize) -> String {
    format!("d{i}")
}

/// Searches for a model with at most `max_worlds` worlds and `max_domain`
/// elements in which `phi` holds at `w0` under some relevant assignment of
/// its free variables.
///
/// Every world can serve as the evaluation point up to renaming, so fixing
/// the root at `w0` loses nothing. Returned models are re-checked with the
/// model checker before being handed out.
pub fn enumerate_sat(
    phi: &Formula,
    max_worlds: usize,
    max_domain: usize,
    semantics: Semantics,
    budget: usize,
) -> Result<Option<FoundModel>, OracleError> {
    for worlds in 1..=max_worlds {
        for domain in 1..=max_domain {
            if let Some(found) = solve_size(phi, worlds, domain, semantics, budget)? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(Lit),
}

impl Node {
    fn negate(self) -> Node {
        match self {
            Node::True => Node::False,
            Node::False => Node::True,
            Node::Lit(l) => Node::Lit(!l),
        }
    }
}

struct Grounder<'f> {
    solver: Solver<'static>,
    next_var: usize,
    gates: usize,
    budget: usize,
    worlds: usize,
    domain: usize,
    edge: Vec<Vec<Node>>,
    dom: Vec<Vec<Node>>,
    facts: HashMap<(usize, String, Vec<usize>), Lit>,
    memo: HashMap<(usize, usize, Vec<usize>), Node>,
    free: HashMap<usize, Vec<Var>>,
    _formula: std::marker::PhantomData<&'f Formula>,
}

struct OverBudget;

impl<'f> Grounder<'f> {
    fn fresh(&mut self) -> Lit {
        self.next_var += 1;
        Lit::from_dimacs(self.next_var as isize)
    }

    fn charge(&mut self, n: usize) -> Result<(), OverBudget> {
        self.gates += n;
        if self.gates > self.budget {
            Err(OverBudget)
        } else {
            Ok(())
        }
    }

    fn and(&mut self, parts: Vec<Node>) -> Result<Node, OverBudget> {
        let mut lits = Vec::new();
        for p in parts {
            match p {
                Node::False => return Ok(Node::False),
                Node::True => {}
                Node::Lit(l) => lits.push(l),
            }
        }
        lits.sort_unstable_by_key(|l| l.to_dimacs());
        lits.dedup();
        match lits.len() {
            0 => Ok(Node::True),
            1 => Ok(Node::Lit(lits[0])),
            _ => {
                self.charge(lits.len())?;
                let g = self.fresh();
                for &l in &lits {
                    self.solver.add_clause(&[!g, l]);
                }
                let mut long: Vec<Lit> = lits.iter().map(|&l| !l).collect();
                long.push(g);
                self.solver.add_clause(&long);
                Ok(Node::Lit(g))
            }
        }
    }

    fn or(&mut self, parts: Vec<Node>) -> Result<Node, OverBudget> {
        let negated = parts.into_iter().map(Node::negate).collect();
        Ok(self.and(negated)?.negate())
    }

    fn fact(&mut self, world: usize, pred: &str, tuple: Vec<usize>) -> Node {
        let key = (world, pred.to_string(), tuple);
        if let Some(&l) = self.facts.get(&key) {
            return Node::Lit(l);
        }
        let l = self.fresh();
        self.facts.insert(key, l);
        Node::Lit(l)
    }

    fn free_of(&mut self, phi: &Formula) -> Vec<Var> {
        let key = phi as *const Formula as usize;
        self.free
            .entry(key)
            .or_insert_with(|| phi.free_vars().into_iter().collect())
            .clone()
    }

    fn lookup(env: &[(Var, usize)], var: &Var) -> usize {
        env.iter()
            .rev()
            .find(|(v, _)| v == var)
            .map(|(_, e)| *e)
            .expect("free variables are bound before grounding")
    }

    /// Circuit node equivalent to `M, w, env ⊨ phi`.
    fn ground(&mut self, phi: &'f Formula, w: usize, env: &mut Vec<(Var, usize)>) -> Result<Node, OverBudget> {
        let free = self.free_of(phi);
        let projection: Vec<usize> = free.iter().map(|v| Self::lookup(env, v)).collect();
        let key = (phi as *const Formula as usize, w, projection);
        if let Some(&n) = self.memo.get(&key) {
            return Ok(n);
        }
        let node = match phi {
            Formula::Top => Node::True,
            Formula::Bot => Node::False,
            Formula::Atom(atom) => {
                let tuple = atom.args.iter().map(|a| Self::lookup(env, a)).collect();
                self.fact(w, atom.pred.name(), tuple)
            }
            Formula::Not(a) => self.ground(a, w, env)?.negate(),
            Formula::And(a, b) => {
                let parts = vec![self.ground(a, w, env)?, self.ground(b, w, env)?];
                self.and(parts)?
            }
            Formula::Or(a, b) => {
                let parts = vec![self.ground(a, w, env)?, self.ground(b, w, env)?];
                self.or(parts)?
            }
            Formula::Implies(a, b) => {
                let parts = vec![self.ground(a, w, env)?.negate(), self.ground(b, w, env)?];
                self.or(parts)?
            }
            Formula::Bundle {
                quantifier,
                modality,
                var,
                body,
            } => {
                let mut per_element = Vec::with_capacity(self.domain);
                for d in 0..self.domain {
                    env.push((var.clone(), d));
                    let mut per_world = Vec::with_capacity(self.worlds);
                    for v in 0..self.worlds {
                        let edge = self.edge[w][v];
                        let inner = self.ground(body, v, env)?;
                        per_world.push(match modality {
                            // edge -> inner
                            Modality::Box => self.or(vec![edge.negate(), inner])?,
                            Modality::Diamond => self.and(vec![edge, inner])?,
                        });
                    }
                    env.pop();
                    let successors = match modality {
                        Modality::Box => self.and(per_world)?,
                        Modality::Diamond => self.or(per_world)?,
                    };
                    let member = self.dom[w][d];
                    per_element.push(match quantifier {
                        Quantifier::Exists => self.and(vec![member, successors])?,
                        Quantifier::Forall => self.or(vec![member.negate(), successors])?,
                    });
                }
                match quantifier {
                    Quantifier::Exists => self.or(per_element)?,
                    Quantifier::Forall => self.and(per_element)?,
                }
            }
        };
        self.memo.insert(key, node);
        Ok(node)
    }

    fn value(&self, model: &[bool], node: Node) -> bool {
        match node {
            Node::True => true,
            Node::False => false,
            Node::Lit(l) => model[l.index()] == l.is_positive(),
        }
    }
}

fn assignments(vars: usize, domain: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..vars {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..domain).map(move |d| {
                    let mut next = prefix.clone();
                    next.push(d);
                    next
                })
            })
            .collect();
    }
    out
}

fn solve_size(
    phi: &Formula,
    worlds: usize,
    domain: usize,
    semantics: Semantics,
    budget: usize,
) -> Result<Option<FoundModel>, OracleError> {
    let over = |_: OverBudget| OracleError::ResourceLimit { budget, worlds, domain };
    let mut g = Grounder {
        solver: Solver::new(),
        next_var: 0,
        gates: 0,
        budget,
        worlds,
        domain,
        edge: Vec::new(),
        dom: Vec::new(),
        facts: HashMap::new(),
        memo: HashMap::new(),
        free: HashMap::new(),
        _formula: std::marker::PhantomData,
    };
    g.edge = (0..worlds)
        .map(|_| (0..worlds).map(|_| Node::Lit(g.fresh())).collect::<Vec<_>>())
        .collect();
    g.dom = match semantics {
        Semantics::Constant => vec![vec![Node::True; domain]; worlds],
        Semantics::Increasing => (0..worlds)
            .map(|_| (0..domain).map(|_| Node::Lit(g.fresh())).collect::<Vec<_>>())
            .collect(),
    };
    if semantics == Semantics::Increasing {
        for w in 0..worlds {
            let nonempty: Vec<Lit> = g.dom[w].iter().map(|n| lit_of(*n)).collect();
            g.solver.add_clause(&nonempty);
            for v in 0..worlds {
                for d in 0..domain {
                    let (e, a, b) = (lit_of(g.edge[w][v]), lit_of(g.dom[w][d]), lit_of(g.dom[v][d]));
                    g.solver.add_clause(&[!e, !a, b]);
                }
            }
        }
    }

    let free: Vec<Var> = phi.free_vars().into_iter().collect();
    let candidates = assignments(free.len(), domain);
    let mut roots = Vec::with_capacity(candidates.len());
    for sigma in &candidates {
        let mut env: Vec<(Var, usize)> = free.iter().cloned().zip(sigma.iter().copied()).collect();
        let mut parts: Vec<Node> = sigma.iter().map(|&d| g.dom[0][d]).collect();
        parts.push(g.ground(phi, 0, &mut env).map_err(over)?);
        roots.push(g.and(parts).map_err(over)?);
    }
    let root = g.or(roots.clone()).map_err(over)?;
    match root {
        Node::False => return Ok(None),
        Node::True => {}
        Node::Lit(l) => g.solver.add_clause(&[l]),
    }
    if !g.solver.solve().expect("solver runs without proof output") {
        return Ok(None);
    }
    let assignment_bits = g.solver.model().expect("satisfiable instance has a model");
    let mut bits = vec![false; g.next_var + 1];
    for l in assignment_bits {
        if l.index() < bits.len() {
            bits[l.index()] = l.is_positive();
        }
    }

    let mut model = KripkeModel {
        worlds: (0..worlds).map(world_name).collect(),
        domain: (0..domain).map(element_name).collect(),
        ..Default::default()
    };
    for w in 0..worlds {
        for v in 0..worlds {
            if g.value(&bits, g.edge[w][v]) {
                model.edges.insert((world_name(w), world_name(v)));
            }
        }
        let local: BTreeSet<String> = (0..domain)
            .filter(|&d| g.value(&bits, g.dom[w][d]))
            .map(element_name)
            .collect();
        model.local.insert(world_name(w), local);
    }
    for ((w, pred, tuple), l) in &g.facts {
        if bits[l.index()] == l.is_positive() {
            model.insert_fact(&world_name(*w), pred, tuple.iter().map(|&e| element_name(e)).collect());
        }
    }
    let chosen = candidates
        .iter()
        .zip(&roots)
        .find(|(_, node)| g.value(&bits, **node))
        .map(|(sigma, _)| sigma)
        .ok_or(OracleError::Unsound)?;
    let assignment: Assignment = free
        .iter()
        .cloned()
        .zip(chosen.iter().map(|&d| element_name(d)))
        .collect();

    let root = world_name(0);
    let evaluator = Evaluator::new(&model).map_err(|_| OracleError::Unsound)?;
    if evaluator.check(&root, &assignment, phi) != Ok(true) {
        return Err(OracleError::Unsound);
    }
    Ok(Some(FoundModel {
        model,
        root,
        assignment,
    }))
}

fn lit_of(node: Node) -> Lit {
    match node {
        Node::Lit(l) => l,
        _ => unreachable!("frame unknowns are always solver variables"),
    }
}

/// Literal enumeration of every model up to the bounds: worlds, then domain
/// size, then edge sets, then local domains, then interpretations, then
/// assignments. Each candidate is evaluated with the model checker at every
/// world. Only predicates occurring in `phi` are interpreted.
pub fn enumerate_exhaustive(
    phi: &Formula,
    max_worlds: usize,
    max_domain: usize,
    semantics: Semantics,
    budget: usize,
) -> Result<Option<FoundModel>, OracleError> {
    let preds: Vec<Predicate> = phi.predicates().into_iter().collect();
    let free: Vec<Var> = phi.free_vars().into_iter().collect();
    for worlds in 1..=max_worlds {
        for domain in 1..=max_domain {
            let mut spent = 0usize;
            let names: Vec<String> = (0..worlds).map(world_name).collect();
            let elements: Vec<String> = (0..domain).map(element_name).collect();
            let pairs: Vec<(usize, usize)> = (0..worlds).flat_map(|w| (0..worlds).map(move |v| (w, v))).collect();
            let facts: Vec<(usize, &Predicate, Vec<usize>)> = (0..worlds)
                .flat_map(|w| {
                    preds
                        .iter()
                        .flat_map(move |p| assignments(p.arity(), domain).into_iter().map(move |t| (w, p, t)))
                })
                .collect();
            let local_choices: Vec<Vec<usize>> = match semantics {
                Semantics::Constant => vec![vec![(1 << domain) - 1; worlds]],
                Semantics::Increasing => assignments(worlds, (1 << domain) - 1)
                    .into_iter()
                    .map(|c| c.into_iter().map(|m| m + 1).collect())
                    .collect(),
            };
            for edge_mask in 0u64..(1u64 << pairs.len()) {
                let edges: BTreeSet<(String, String)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| edge_mask >> i & 1 == 1)
                    .map(|(_, &(w, v))| (names[w].clone(), names[v].clone()))
                    .collect();
                for locals in &local_choices {
                    let monotone = pairs
                        .iter()
                        .enumerate()
                        .all(|(i, &(w, v))| edge_mask >> i & 1 == 0 || locals[w] & !locals[v] == 0);
                    if !monotone {
                        continue;
                    }
                    let local: std::collections::BTreeMap<String, BTreeSet<String>> = (0..worlds)
                        .map(|w| {
                            let set: BTreeSet<String> = (0..domain)
                                .filter(|d| locals[w] >> d & 1 == 1)
                                .map(|d| elements[d].clone())
                                .collect();
                            (names[w].clone(), set)
                        })
                        .collect();
                    for fact_mask in 0u64..(1u64 << facts.len()) {
                        spent += 1;
                        if spent > budget {
                            return Err(OracleError::ResourceLimit { budget, worlds, domain });
                        }
                        let mut model = KripkeModel {
                            worlds: names.clone(),
                            domain: elements.iter().cloned().collect(),
                            edges: edges.clone(),
                            local: local.clone(),
                            rho: Default::default(),
                        };
                        for (i, (w, p, t)) in facts.iter().enumerate() {
                            if fact_mask >> i & 1 == 1 {
                                model.insert_fact(
                                    &names[*w],
                                    p.name(),
                                    t.iter().map(|&e| elements[e].clone()).collect(),
                                );
                            }
                        }
                        let evaluator = Evaluator::new(&model).expect("enumerated models are valid");
                        for (root, name) in names.iter().enumerate() {
                            for sigma in assignments(free.len(), domain) {
                                if sigma.iter().any(|&d| locals[root] >> d & 1 == 0) {
                                    continue;
                                }
                                let assignment: Assignment = free
                                    .iter()
                                    .cloned()
                                    .zip(sigma.iter().map(|&d| elements[d].clone()))
                                    .collect();
                                if evaluator.check(name, &assignment, phi) == Ok(true) {
                                    return Ok(Some(FoundModel {
                                        model: model.clone(),
                                        root: name.clone(),
                                        assignment,
                                    }));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::check;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn sat(s: &str, w: usize, d: usize, sem: Semantics) -> Option<FoundModel> {
        enumerate_sat(&f(s), w, d, sem, DEFAULT_ORACLE_BUDGET).unwrap()
    }

    #[test]
    fn vacuous_box_has_one_world_model() {
        let found = sat("E x [] P(x)", 1, 1, Semantics::Increasing).unwrap();
        assert_eq!(found.model.worlds.len(), 1);
        assert_eq!(
            check(&found.model, &found.root, &found.assignment, &f("E x [] P(x)")),
            Ok(true)
        );
    }

    #[test]
    fn contradiction_has_no_model() {
        for sem in [Semantics::Increasing, Semantics::Constant] {
            assert!(sat("(P(x) & !P(x))", 4, 3, sem).is_none());
            assert!(sat("(E x [] P(x) & A y <> !P(y))", 4, 3, sem).is_none());
        }
    }

    #[test]
    fn free_variables_are_assigned_into_root_domain() {
        let found = sat("(P(x) & !P(y))", 1, 2, Semantics::Increasing).unwrap();
        let x = found.assignment.get(&Var::new("x")).unwrap();
        let y = found.assignment.get(&Var::new("y")).unwrap();
        assert_ne!(x, y);
        assert!(found.model.local["w0"].contains(x));
    }

    #[test]
    fn separation_formula_needs_a_successor() {
        // Without successors both conjuncts hold vacuously, so even a constant
        // one-world model satisfies the formula.
        let phi = "(A x [] A y [] !P(x) & A z [] E u <> P(u))";
        let cons = sat(phi, 4, 3, Semantics::Constant).expect("one-world model");
        assert_eq!(cons.model.worlds.len(), 1);
        assert!(cons.model.edges.is_empty());

        // Demanding a successor separates the two semantics.
        let phi = "((A x [] A y [] !P(x) & A z [] E u <> P(u)) & E s <> T)";
        let inc = sat(phi, 4, 3, Semantics::Increasing).expect("increasing model");
        assert!(!inc.model.is_constant_domain());
        assert!(sat(phi, 4, 3, Semantics::Constant).is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_sat(&f("A x [] E y <> A z [] Q(x,y)"), 4, 3, Semantics::Increasing, 10);
        assert!(matches!(err, Err(OracleError::ResourceLimit { budget: 10, .. })));
        let err = enumerate_exhaustive(&f("(E x [] P(x) & A y <> !P(y))"), 2, 2, Semantics::Increasing, 10);
        assert!(matches!(err, Err(OracleError::ResourceLimit { .. })));
    }

    #[test]
    fn exhaustive_matches_grounded_on_small_cases() {
        let cases = [
            "E x [] P(x)",
            "E x <> P(x)",
            "(E x [] P(x) & A y <> !P(y))",
            "(A x <> P(x) & E y [] !P(y))",
            "(E x <> P(x) & E y <> !P(y))",
            "(A x [] E y <> P(y) & E z <> A u [] !P(u))",
            "(P(x) & A y [] E z <> !P(x))",
        ];
        for text in cases {
            for sem in [Semantics::Increasing, Semantics::Constant] {
                let a = enumerate_sat(&f(text), 2, 2, sem, DEFAULT_ORACLE_BUDGET).unwrap();
                let b = enumerate_exhaustive(&f(text), 2, 2, sem, DEFAULT_ORACLE_BUDGET).unwrap();
                assert_eq!(a.is_some(), b.is_some(), "{text} under {sem:?}");
            }
        }
    }
}
