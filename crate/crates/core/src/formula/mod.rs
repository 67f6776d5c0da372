//! Abstract syntax for the bundled fragment of first-order modal logic.
//!
//! Quantifiers only ever appear fused with a modality: `E x [] φ`, `E x <> φ`
//! and their duals `A x <> φ`, `A x [] φ`. Atoms take variables only; there
//! are no constants, function symbols or equality.

mod normal;
mod parse;
mod var;

use std::collections::BTreeSet;
use std::fmt;

pub(crate) use normal::cleanse_jointly;
pub use normal::{classify, cleanse, is_clean, is_clean_set, to_nnf, Fragment};
pub use parse::{parse, ParseError};
pub use var::{fresh_var, Var};

/// A predicate symbol together with its arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate {
    name: String,
    arity: usize,
}

impl Predicate {
    /// Panics if `name` is not an upper-case identifier.
    pub fn new(name: &str, arity: usize) -> Self {
        assert!(is_predicate_name(name), "invalid predicate name {name:?}");
        Predicate {
            name: name.to_string(),
            arity,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

const RESERVED: [&str; 4] = ["T", "F", "E", "A"];

pub(crate) fn is_predicate_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.contains(&name)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: Predicate,
    pub args: Vec<Var>,
}

impl Atom {
    pub fn new(pred: Predicate, args: Vec<Var>) -> Self {
        assert_eq!(pred.arity(), args.len(), "arity mismatch for {}", pred.name());
        Atom { pred, args }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    Box,
    Diamond,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

impl Modality {
    pub fn dual(self) -> Self {
        match self {
            Modality::Box => Modality::Diamond,
            Modality::Diamond => Modality::Box,
        }
    }
}

/// A BFOML formula.
///
/// `Implies` is surface syntax only; [`to_nnf`] removes it. `Top` and `Bot`
/// are kept as primitive literals throughout.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Bot,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Bundle {
        quantifier: Quantifier,
        modality: Modality,
        var: Var,
        body: Box<Formula>,
    },
}

/// Raised by [`Formula::substitute`] when the replacement variable would be
/// captured by a binder.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("substituting {replacement} for {var} is captured by the binder of {replacement}")]
pub struct CaptureError {
    pub var: Var,
    pub replacement: Var,
}

impl Formula {
    pub fn atom(name: &str, args: &[&str]) -> Formula {
        Formula::Atom(Atom::new(
            Predicate::new(name, args.len()),
            args.iter().map(|a| Var::new(a)).collect(),
        ))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn bundle(quantifier: Quantifier, modality: Modality, var: Var, body: Formula) -> Formula {
        Formula::Bundle {
            quantifier,
            modality,
            var,
            body: Box::new(body),
        }
    }

    pub fn exists_box(var: &str, body: Formula) -> Formula {
        Formula::bundle(Quantifier::Exists, Modality::Box, Var::new(var), body)
    }

    pub fn exists_diamond(var: &str, body: Formula) -> Formula {
        Formula::bundle(Quantifier::Exists, Modality::Diamond, Var::new(var), body)
    }

    pub fn forall_box(var: &str, body: Formula) -> Formula {
        Formula::bundle(Quantifier::Forall, Modality::Box, Var::new(var), body)
    }

    pub fn forall_diamond(var: &str, body: Formula) -> Formula {
        Formula::bundle(Quantifier::Forall, Modality::Diamond, Var::new(var), body)
    }

    /// Left-nested conjunction; `Top` for an empty iterator.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    /// True for atoms and negated atoms.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(inner) => matches!(**inner, Formula::Atom(_)),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(atom) => {
                for arg in &atom.args {
                    if !bound.contains(&arg) {
                        out.insert(arg.clone());
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Bundle { var, body, .. } => {
                bound.push(var);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, x: &Var) -> bool {
        match self {
            Formula::Top | Formula::Bot => false,
            Formula::Atom(atom) => atom.args.contains(x),
            Formula::Not(a) => a.has_free(x),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.has_free(x) || b.has_free(x),
            Formula::Bundle { var, body, .. } => var != x && body.has_free(x),
        }
    }

    /// Every variable occurring anywhere, free or bound (binders included).
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(atom) => out.extend(atom.args.iter().cloned()),
            Formula::Bundle { var, .. } => {
                out.insert(var.clone());
            }
            _ => {}
        });
        out
    }

    /// Variables bound by some bundle, in any position.
    pub fn bound_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Bundle { var, .. } = f {
                out.insert(var.clone());
            }
        });
        out
    }

    /// Pre-order traversal of every subformula occurrence.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => {}
            Formula::Not(a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Bundle { body, .. } => body.visit(f),
        }
    }

    /// `self[replacement/var]`: every free occurrence of `var` becomes
    /// `replacement`.
    pub fn substitute(&self, var: &Var, replacement: &Var) -> Result<Formula, CaptureError> {
        if var == replacement || !self.has_free(var) {
            return Ok(self.clone());
        }
        Ok(match self {
            Formula::Top | Formula::Bot => self.clone(),
            Formula::Atom(atom) => Formula::Atom(Atom {
                pred: atom.pred.clone(),
                args: atom
                    .args
                    .iter()
                    .map(|a| if a == var { replacement.clone() } else { a.clone() })
                    .collect(),
            }),
            Formula::Not(a) => Formula::not(a.substitute(var, replacement)?),
            Formula::And(a, b) => Formula::and(a.substitute(var, replacement)?, b.substitute(var, replacement)?),
            Formula::Or(a, b) => Formula::or(a.substitute(var, replacement)?, b.substitute(var, replacement)?),
            Formula::Implies(a, b) => {
                Formula::implies(a.substitute(var, replacement)?, b.substitute(var, replacement)?)
            }
            Formula::Bundle {
                quantifier,
                modality,
                var: bound,
                body,
            } => {
                // has_free(var) above guarantees bound != var
                if bound == replacement {
                    return Err(CaptureError {
                        var: var.clone(),
                        replacement: replacement.clone(),
                    });
                }
                Formula::bundle(
                    *quantifier,
                    *modality,
                    bound.clone(),
                    body.substitute(var, replacement)?,
                )
            }
        })
    }

    /// Maximum nesting of bundles.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Not(a) => a.modal_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Bundle { body, .. } => 1 + body.modal_depth(),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Number of binary boolean connectives.
    pub fn connective_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if matches!(f, Formula::And(..) | Formula::Or(..) | Formula::Implies(..)) {
                n += 1;
            }
        });
        n
    }

    /// Variables bound by an `E x []` subformula.
    pub fn exists_box_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Bundle {
                quantifier: Quantifier::Exists,
                modality: Modality::Box,
                var,
                ..
            } = f
            {
                out.insert(var.clone());
            }
        });
        out
    }

    /// Predicate symbols used, keyed by name.
    pub fn predicates(&self) -> BTreeSet<Predicate> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(atom) = f {
                out.insert(atom.pred.clone());
            }
        });
        out
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Exists => "E",
            Quantifier::Forall => "A",
        })
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modality::Box => "[]",
            Modality::Diamond => "<>",
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.pred.name)?;
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{arg}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("T"),
            Formula::Bot => f.write_str("F"),
            Formula::Atom(atom) => write!(f, "{atom}"),
            Formula::Not(a) => write!(f, "!{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Bundle {
                quantifier,
                modality,
                var,
                body,
            } => write!(f, "{quantifier} {var} {modality} {body}"),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
