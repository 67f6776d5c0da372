//! Tableau decision procedures.
//!
//! Both calculi share the propositional part: labels are canonical sets of
//! clean NNF formulas, `∧` is decomposed in place, `∨` is an OR-choice
//! explored depth-first with backtracking, and a label containing `F` or a
//! complementary pair of literals is closed. Once a label is saturated the
//! calculus-specific modal rule either ends the world (`END`) or creates the
//! successor worlds (`BR`), all of which must be open.
//!
//! [`decide_increasing`] handles the full fragment over increasing domains;
//! [`decide_constant_eb`] handles the `E x []` fragment over constant domains.

mod constant;
mod increasing;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::formula::{is_clean_set, CaptureError, Formula, Fragment, Var};
use crate::kripke::{Assignment, CheckError, Evaluator, KripkeModel};

pub use constant::{build_domain, decide_constant_eb, ConstantDomainPlan};
pub use increasing::decide_increasing;

/// Default node budget for a single decision.
pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;
/// Default bound on the length of a tableau branch.
pub const DEFAULT_DEPTH_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Sat,
    Unsat,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableauOptions {
    pub node_budget: usize,
    pub depth_budget: usize,
    /// Record the explored tableau as indented text.
    pub trace: bool,
}

impl Default for TableauOptions {
    fn default() -> Self {
        TableauOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            depth_budget: DEFAULT_DEPTH_BUDGET,
            trace: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Tableau nodes created, including those on closed alternatives.
    pub nodes: usize,
    /// Longest root-to-node path, counted in nodes below the root.
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TableauError {
    #[error("{what} budget of {limit} exceeded")]
    ResourceLimit { what: &'static str, limit: usize },
    #[error("formula is in the {0:?} fragment; the constant-domain tableau needs ExistsBox")]
    Fragment(Fragment),
    #[error("label at {world} is not clean: {detail}")]
    Cleanliness { world: String, detail: String },
    #[error("substitution captured a variable: {0}")]
    Capture(#[from] CaptureError),
    #[error("rule application at {world} did not decrease the termination measure")]
    Termination { world: String },
    #[error("no fresh witness left for {var} at {world}")]
    WitnessPoolExhausted { var: Var, world: String },
    #[error("extracted model does not satisfy the input: {0}")]
    Unsound(String),
}

/// Result of a decision. For `Sat` the model has been checked to satisfy
/// `formula` at world `r` under `assignment`.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    /// The normalized (NNF, clean) formula the tableau was run on.
    pub formula: Formula,
    pub model: Option<KripkeModel>,
    pub assignment: Assignment,
    pub stats: Stats,
    pub trace: Option<String>,
}

impl Outcome {
    pub fn is_sat(&self) -> bool {
        self.verdict == Verdict::Sat
    }
}

pub const ROOT_WORLD: &str = "r";

/// Result of the modal rule on a saturated label.
pub(crate) enum Modal {
    /// No successors are needed. `dom` is the extracted local domain.
    End {
        dom: BTreeSet<Var>,
        rule: &'static str,
    },
    Branch {
        dom: BTreeSet<Var>,
        children: Vec<Child>,
    },
}

pub(crate) struct Child {
    pub name: String,
    pub gamma: BTreeSet<Formula>,
    pub vars: BTreeSet<Var>,
}

pub(crate) trait Rules {
    /// `F` or `C`, for the trace.
    const VARS_NAME: &'static str;

    fn modal(&self, world: &str, gamma: &BTreeSet<Formula>, vars: &BTreeSet<Var>) -> Result<Modal, TableauError>;
}

/// The last node of a world in an open completion.
#[derive(Debug)]
pub(crate) struct WorldNode {
    pub name: String,
    pub dom: BTreeSet<Var>,
    pub atoms: Vec<Formula>,
    pub children: Vec<WorldNode>,
}

/// `(max modal depth, binary connectives)`; every rule application
/// decreases it lexicographically.
fn measure(gamma: &BTreeSet<Formula>) -> (usize, usize) {
    let depth = gamma.iter().map(Formula::modal_depth).max().unwrap_or(0);
    let connectives = gamma.iter().map(Formula::connective_count).sum();
    (depth, connectives)
}

fn clash(gamma: &BTreeSet<Formula>) -> Option<&Formula> {
    gamma.iter().find_map(|f| match f {
        Formula::Not(a) if gamma.contains(a.as_ref()) => Some(a.as_ref()),
        _ => None,
    })
}

fn render_set<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

pub(crate) struct Engine<'r, R: Rules> {
    rules: &'r R,
    options: TableauOptions,
    stats: Stats,
    trace: Option<String>,
}

impl<'r, R: Rules> Engine<'r, R> {
    pub fn new(rules: &'r R, options: TableauOptions) -> Self {
        Engine {
            rules,
            options,
            stats: Stats::default(),
            trace: options.trace.then(String::new),
        }
    }

    pub fn finish(self) -> (Stats, Option<String>) {
        (self.stats, self.trace)
    }

    fn enter(
        &mut self,
        world: &str,
        rule: &str,
        gamma: &BTreeSet<Formula>,
        vars: &BTreeSet<Var>,
        depth: usize,
    ) -> Result<(), TableauError> {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.stats.nodes > self.options.node_budget {
            return Err(TableauError::ResourceLimit {
                what: "node",
                limit: self.options.node_budget,
            });
        }
        if depth > self.options.depth_budget {
            return Err(TableauError::ResourceLimit {
                what: "depth",
                limit: self.options.depth_budget,
            });
        }
        if !is_clean_set(gamma) {
            return Err(TableauError::Cleanliness {
                world: world.to_string(),
                detail: render_set(gamma),
            });
        }
        for f in gamma {
            if let Some(v) = f.bound_vars().intersection(vars).next() {
                return Err(TableauError::Cleanliness {
                    world: world.to_string(),
                    detail: format!("{v} is bound in {f}"),
                });
            }
        }
        if let Some(out) = self.trace.as_mut() {
            let _ = writeln!(
                out,
                "{:indent$}{world} [{rule}] {} {}={}",
                "",
                render_set(gamma),
                R::VARS_NAME,
                render_set(vars),
                indent = 2 * depth
            );
        }
        Ok(())
    }

    fn note(&mut self, depth: usize, message: std::fmt::Arguments<'_>) {
        if let Some(out) = self.trace.as_mut() {
            let _ = writeln!(out, "{:indent$}{message}", "", indent = 2 * depth + 2);
        }
    }

    /// Expands the label of `world` until its last node; returns the open
    /// completion if one exists.
    pub fn expand(
        &mut self,
        world: &str,
        mut gamma: BTreeSet<Formula>,
        vars: &BTreeSet<Var>,
        mut depth: usize,
        mut rule: &'static str,
    ) -> Result<Option<WorldNode>, TableauError> {
        loop {
            gamma.remove(&Formula::Top);
            self.enter(world, rule, &gamma, vars, depth)?;
            if gamma.contains(&Formula::Bot) {
                self.note(depth, format_args!("closed: F"));
                return Ok(None);
            }
            if let Some(atom) = clash(&gamma) {
                let atom = atom.clone();
                self.note(depth, format_args!("closed: {atom} and its negation"));
                return Ok(None);
            }
            let before = measure(&gamma);
            if let Some(conj) = gamma.iter().find(|f| matches!(f, Formula::And(..))).cloned() {
                gamma.remove(&conj);
                let Formula::And(a, b) = conj else { unreachable!() };
                gamma.insert(*a);
                gamma.insert(*b);
                self.decreases(world, before, &gamma)?;
                depth += 1;
                rule = "and";
                continue;
            }
            if let Some(disj) = gamma.iter().find(|f| matches!(f, Formula::Or(..))).cloned() {
                gamma.remove(&disj);
                let Formula::Or(a, b) = disj else { unreachable!() };
                for pick in [*a, *b] {
                    let mut alternative = gamma.clone();
                    alternative.insert(pick);
                    self.decreases(world, before, &alternative)?;
                    if let Some(node) = self.expand(world, alternative, vars, depth + 1, "or")? {
                        return Ok(Some(node));
                    }
                }
                return Ok(None);
            }
            break;
        }

        let atoms: Vec<Formula> = gamma
            .iter()
            .filter(|f| matches!(f, Formula::Atom(_)))
            .cloned()
            .collect();
        match self.rules.modal(world, &gamma, vars)? {
            Modal::End { dom, rule } => {
                if gamma.iter().any(|f| !f.is_literal()) {
                    let literals: BTreeSet<Formula> = gamma.iter().filter(|f| f.is_literal()).cloned().collect();
                    self.decreases(world, measure(&gamma), &literals)?;
                    self.enter(world, rule, &literals, vars, depth + 1)?;
                }
                Ok(Some(WorldNode {
                    name: world.to_string(),
                    dom,
                    atoms,
                    children: Vec::new(),
                }))
            }
            Modal::Branch { dom, children } => {
                let before = measure(&gamma);
                let mut nodes = Vec::with_capacity(children.len());
                for child in children {
                    if measure(&child.gamma).0 >= before.0 {
                        return Err(TableauError::Termination { world: child.name });
                    }
                    match self.expand(&child.name, child.gamma, &child.vars, depth + 1, "BR")? {
                        Some(node) => nodes.push(node),
                        None => {
                            self.note(depth, format_args!("BR child {} closed", child.name));
                            return Ok(None);
                        }
                    }
                }
                Ok(Some(WorldNode {
                    name: world.to_string(),
                    dom,
                    atoms,
                    children: nodes,
                }))
            }
        }
    }

    fn decreases(&self, world: &str, before: (usize, usize), after: &BTreeSet<Formula>) -> Result<(), TableauError> {
        if measure(after) < before {
            Ok(())
        } else {
            Err(TableauError::Termination {
                world: world.to_string(),
            })
        }
    }
}

/// Builds the Kripke model of an open completion. With `constant` set, every
/// world gets that local domain; otherwise each world's own `dom`.
pub(crate) fn extract(root: &WorldNode, constant: Option<&BTreeSet<Var>>) -> KripkeModel {
    let mut model = KripkeModel::default();
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        model.worlds.push(node.name.clone());
        let dom = constant.unwrap_or(&node.dom);
        let local: BTreeSet<String> = dom.iter().map(Var::to_string).collect();
        model.domain.extend(local.iter().cloned());
        model.local.insert(node.name.clone(), local);
        for atom in &node.atoms {
            if let Formula::Atom(a) = atom {
                model.insert_fact(&node.name, a.pred.name(), a.args.iter().map(Var::to_string).collect());
            }
        }
        for child in &node.children {
            model.edges.insert((node.name.clone(), child.name.clone()));
        }
        stack.extend(node.children.iter().rev());
    }
    model
}

/// Verifies an extracted model against the formula it was built for.
pub(crate) fn verify(model: &KripkeModel, assignment: &Assignment, phi: &Formula) -> Result<(), TableauError> {
    let evaluator = Evaluator::new(model).map_err(|e: CheckError| TableauError::Unsound(e.to_string()))?;
    match evaluator.check(ROOT_WORLD, assignment, phi) {
        Ok(true) => Ok(()),
        Ok(false) => Err(TableauError::Unsound(format!("{phi} is false at {ROOT_WORLD}"))),
        Err(e) => Err(TableauError::Unsound(e.to_string())),
    }
}

/// Groups the bundles of a saturated label by kind, in canonical order.
#[derive(Default)]
pub(crate) struct Bundles<'a> {
    pub exists_diamond: Vec<(&'a Var, &'a Formula)>,
    pub forall_diamond: Vec<(&'a Var, &'a Formula)>,
    pub exists_box: Vec<(&'a Var, &'a Formula)>,
    pub forall_box: Vec<(&'a Var, &'a Formula)>,
}

impl<'a> Bundles<'a> {
    pub fn of(gamma: &'a BTreeSet<Formula>) -> Self {
        use crate::formula::{Modality, Quantifier};
        let mut out = Bundles::default();
        for f in gamma {
            if let Formula::Bundle {
                quantifier,
                modality,
                var,
                body,
            } = f
            {
                let slot = match (quantifier, modality) {
                    (Quantifier::Exists, Modality::Diamond) => &mut out.exists_diamond,
                    (Quantifier::Forall, Modality::Diamond) => &mut out.forall_diamond,
                    (Quantifier::Exists, Modality::Box) => &mut out.exists_box,
                    (Quantifier::Forall, Modality::Box) => &mut out.forall_box,
                };
                slot.push((var, body.as_ref()));
            }
        }
        out
    }

    pub fn has_diamond(&self) -> bool {
        !self.exists_diamond.is_empty() || !self.forall_diamond.is_empty()
    }
}
