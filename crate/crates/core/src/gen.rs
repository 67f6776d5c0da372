//! Seeded random generation of clean NNF formulas.
//!
//! Formulas are drawn from a weighted grammar over literals, `&`, `|` and the
//! bundles allowed by the requested fragment, over the predicates `P/1` and
//! `Q/2`. Atom arguments are picked from the variables bound at that point
//! plus a small pool of free variables. The result is cleansed.
//!
//! Case `i` of seed `s` depends only on `(s, i)`, so a corpus can be split
//! across workers without changing its contents.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{cleanse, Formula, Modality, Predicate, Quantifier, Var};
use crate::kripke::{element_name, world_name, KripkeModel, Semantics};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenFragment {
    /// `E x []` and `A x <>` only.
    ExistsBox,
    /// All four bundles.
    Full,
}

/// Relative weights of the grammar productions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weights {
    pub literal: u32,
    pub and: u32,
    pub or: u32,
    pub bundle: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            literal: 2,
            and: 5,
            or: 1,
            bundle: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub max_depth: usize,
    pub fragment: GenFragment,
    pub weights: Weights,
    /// Bound on binary connectives plus bundles per formula.
    pub max_nodes: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 3,
            fragment: GenFragment::Full,
            weights: Weights::default(),
            max_nodes: 12,
        }
    }
}

const BOUND: [&str; 4] = ["x", "y", "u", "v"];
const FREE: [&str; 1] = ["a"];

struct Gen<'c> {
    rng: ChaCha8Rng,
    config: &'c GenConfig,
    budget: usize,
}

impl Gen<'_> {
    fn var(&mut self, scope: &[Var]) -> Var {
        let free = FREE.len();
        let i = self.rng.random_range(0..scope.len() + free);
        if i < scope.len() {
            scope[i].clone()
        } else {
            Var::new(FREE[i - scope.len()])
        }
    }

    fn literal(&mut self, scope: &[Var]) -> Formula {
        if self.rng.random_ratio(1, 16) {
            return if self.rng.random_bool(0.5) {
                Formula::Top
            } else {
                Formula::Bot
            };
        }
        let atom = if self.rng.random_bool(0.5) {
            let x = self.var(scope).to_string();
            Formula::atom("P", &[&x])
        } else {
            let (x, y) = (self.var(scope).to_string(), self.var(scope).to_string());
            Formula::atom("Q", &[&x, &y])
        };
        if self.rng.random_bool(0.5) {
            Formula::not(atom)
        } else {
            atom
        }
    }

    fn formula(&mut self, depth: usize, scope: &mut Vec<Var>) -> Formula {
        let w = self.config.weights;
        let bundle_weight = if depth < self.config.max_depth { w.bundle } else { 0 };
        let binary_weight = |x: u32| if self.budget > 0 { x } else { 0 };
        let (and, or) = (binary_weight(w.and), binary_weight(w.or));
        let bundle = if self.budget > 0 { bundle_weight } else { 0 };
        let total = w.literal + and + or + bundle;
        if total == 0 {
            return self.literal(scope);
        }
        let mut pick = self.rng.random_range(0..total);
        if pick < w.literal {
            return self.literal(scope);
        }
        pick -= w.literal;
        self.budget -= 1;
        if pick < and + or {
            let a = self.formula(depth, scope);
            let b = self.formula(depth, scope);
            return if pick < and {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            };
        }
        let (quantifier, modality) = match self.config.fragment {
            GenFragment::ExistsBox => {
                if self.rng.random_bool(0.5) {
                    (Quantifier::Exists, Modality::Box)
                } else {
                    (Quantifier::Forall, Modality::Diamond)
                }
            }
            GenFragment::Full => {
                let q = if self.rng.random_bool(0.5) {
                    Quantifier::Exists
                } else {
                    Quantifier::Forall
                };
                let m = if self.rng.random_bool(0.5) {
                    Modality::Box
                } else {
                    Modality::Diamond
                };
                (q, m)
            }
        };
        let x = Var::new(BOUND[self.rng.random_range(0..BOUND.len())]);
        scope.push(x.clone());
        let body = self.formula(depth + 1, scope);
        scope.pop();
        Formula::bundle(quantifier, modality, x, body)
    }
}

/// Case `index` of the corpus for `seed`.
pub fn generate(seed: u64, index: u64, config: &GenConfig) -> Formula {
    let mut g = Gen {
        rng: case_rng(seed, index),
        config,
        budget: config.max_nodes,
    };
    cleanse(&g.formula(0, &mut Vec::new()))
}

fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn surface(rng: &mut ChaCha8Rng, depth: usize, max_depth: usize, budget: &mut usize) -> Formula {
    let var = |rng: &mut ChaCha8Rng| Var::new(["x", "y", "a"][rng.random_range(0..3)]);
    let choice = if *budget == 0 { 0 } else { rng.random_range(0..8) };
    if choice > 0 {
        *budget -= 1;
    }
    match choice {
        0 | 1 => match rng.random_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bot,
            2..=5 => Formula::atom("P", &[&var(rng).to_string()]),
            _ => Formula::atom("Q", &[&var(rng).to_string(), &var(rng).to_string()]),
        },
        2 => Formula::not(surface(rng, depth, max_depth, budget)),
        3 => Formula::and(
            surface(rng, depth, max_depth, budget),
            surface(rng, depth, max_depth, budget),
        ),
        4 => Formula::or(
            surface(rng, depth, max_depth, budget),
            surface(rng, depth, max_depth, budget),
        ),
        5 => Formula::implies(
            surface(rng, depth, max_depth, budget),
            surface(rng, depth, max_depth, budget),
        ),
        _ if depth < max_depth => {
            let q = if rng.random_bool(0.5) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            let m = if rng.random_bool(0.5) {
                Modality::Box
            } else {
                Modality::Diamond
            };
            let x = var(rng);
            Formula::bundle(q, m, x, surface(rng, depth + 1, max_depth, budget))
        }
        _ => Formula::not(surface(rng, depth, max_depth, budget)),
    }
}

/// A surface-syntax formula: any connective including `!` over compound
/// formulas, `->`, `T`, `F`, and binders that may reuse or shadow free
/// variables. Not cleansed and not in NNF.
pub fn generate_surface(seed: u64, index: u64, max_depth: usize) -> Formula {
    let mut budget = 10;
    surface(&mut case_rng(seed, index), 0, max_depth, &mut budget)
}

/// A random valid model with up to `max_worlds` worlds and `max_domain`
/// elements interpreting `preds`. Under increasing semantics the local
/// domains are random and then closed upwards along edges.
pub fn random_model(
    seed: u64,
    index: u64,
    max_worlds: usize,
    max_domain: usize,
    semantics: Semantics,
    preds: &BTreeSet<Predicate>,
) -> KripkeModel {
    let mut rng = case_rng(seed, index);
    let nw = rng.random_range(1..=max_worlds);
    let nd = rng.random_range(1..=max_domain);
    let worlds: Vec<String> = (0..nw).map(world_name).collect();
    let elements: Vec<String> = (0..nd).map(element_name).collect();
    let mut edges = BTreeSet::new();
    for w in &worlds {
        for v in &worlds {
            if rng.random_bool(0.4) {
                edges.insert((w.clone(), v.clone()));
            }
        }
    }
    let mut local: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for w in &worlds {
        let set: BTreeSet<String> = match semantics {
            Semantics::Constant => elements.iter().cloned().collect(),
            Semantics::Increasing => {
                let mut set: BTreeSet<String> = elements.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
                set.insert(elements[rng.random_range(0..nd)].clone());
                set
            }
        };
        local.insert(w.clone(), set);
    }
    loop {
        let mut changed = false;
        for (w, v) in &edges {
            let from = local[w].clone();
            let to = local.get_mut(v).expect("edge endpoints are worlds");
            for e in from {
                changed |= to.insert(e);
            }
        }
        if !changed {
            break;
        }
    }
    let mut model = KripkeModel {
        worlds: worlds.clone(),
        domain: elements.iter().cloned().collect(),
        edges,
        local,
        ..Default::default()
    };
    for w in &worlds {
        for p in preds {
            for tuple in tuples(&elements, p.arity()) {
                if rng.random_bool(0.5) {
                    model.insert_fact(w, p.name(), tuple);
                }
            }
        }
    }
    model
}

fn tuples(elements: &[String], arity: usize) -> Vec<Vec<String>> {
    (0..arity).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                elements.iter().map(move |e| {
                    let mut t = t.clone();
                    t.push(e.clone());
                    t
                })
            })
            .collect()
    })
}

/// Cases `0..count` of the corpus for `seed`.
pub fn corpus(seed: u64, count: usize, config: &GenConfig) -> Vec<Formula> {
    (0..count as u64).map(|i| generate(seed, i, config)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{classify, is_clean, to_nnf, Fragment};

    #[test]
    fn deterministic_per_case() {
        let config = GenConfig::default();
        assert_eq!(generate(7, 3, &config), generate(7, 3, &config));
        let a = corpus(7, 20, &config);
        let b = corpus(8, 20, &config);
        assert_ne!(a, b);
        assert_eq!(a[5], generate(7, 5, &config));
    }

    #[test]
    fn respects_shape_bounds() {
        for fragment in [GenFragment::ExistsBox, GenFragment::Full] {
            let config = GenConfig {
                fragment,
                ..Default::default()
            };
            for phi in corpus(1, 300, &config) {
                assert!(phi.modal_depth() <= 3);
                assert!(is_clean(&phi));
                assert_eq!(to_nnf(&phi), phi);
                for p in phi.predicates() {
                    assert!(p.arity() <= 2);
                }
                if fragment == GenFragment::ExistsBox {
                    assert_eq!(classify(&phi), Fragment::ExistsBox, "{phi}");
                }
            }
        }
    }

    #[test]
    fn surface_formulas_exercise_sugar() {
        let phis: Vec<Formula> = (0..300).map(|i| generate_surface(3, i, 3)).collect();
        let text: String = phis.iter().map(|p| p.to_string()).collect();
        assert!(text.contains("->") && text.contains("!(") && text.contains("!E"));
        assert!(phis.iter().any(|p| !crate::formula::is_clean(p)));
    }

    #[test]
    fn random_models_are_valid() {
        let preds: BTreeSet<Predicate> = [Predicate::new("P", 1), Predicate::new("Q", 2)].into_iter().collect();
        for i in 0..200 {
            let m = random_model(5, i, 3, 3, Semantics::Increasing, &preds);
            assert_eq!(m.validate(), Ok(()));
            let c = random_model(5, i, 3, 3, Semantics::Constant, &preds);
            assert!(c.is_constant_domain());
        }
    }

    #[test]
    fn corpus_is_varied() {
        let phis = corpus(1, 200, &GenConfig::default());
        let distinct: std::collections::BTreeSet<_> = phis.iter().collect();
        assert!(distinct.len() > 150);
        assert!(phis.iter().any(|p| p.modal_depth() == 3));
        assert!(phis.iter().any(|p| !p.free_vars().is_empty()));
    }
}
