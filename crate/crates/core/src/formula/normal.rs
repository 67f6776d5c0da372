use std::collections::{BTreeMap, BTreeSet};

use super::{fresh_var, Atom, Formula, Modality, Quantifier, Var};

/// Syntactic fragment of a formula, judged on its negation normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fragment {
    /// Only `E x []` and its dual `A x <>`.
    ExistsBox,
    /// Only `E x <>` and its dual `A x []`.
    ExistsDiamond,
    Full,
}

/// Negation normal form: negation only on atoms, no implication.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

fn nnf(f: &Formula, negated: bool) -> Formula {
    match f {
        Formula::Top if negated => Formula::Bot,
        Formula::Bot if negated => Formula::Top,
        Formula::Top | Formula::Bot => f.clone(),
        Formula::Atom(_) if negated => Formula::not(f.clone()),
        Formula::Atom(_) => f.clone(),
        Formula::Not(a) => nnf(a, !negated),
        Formula::And(a, b) if negated => Formula::or(nnf(a, true), nnf(b, true)),
        Formula::And(a, b) => Formula::and(nnf(a, false), nnf(b, false)),
        Formula::Or(a, b) if negated => Formula::and(nnf(a, true), nnf(b, true)),
        Formula::Or(a, b) => Formula::or(nnf(a, false), nnf(b, false)),
        Formula::Implies(a, b) if negated => Formula::and(nnf(a, false), nnf(b, true)),
        Formula::Implies(a, b) => Formula::or(nnf(a, true), nnf(b, false)),
        Formula::Bundle {
            quantifier,
            modality,
            var,
            body,
        } => {
            let (q, m) = if negated {
                (quantifier.dual(), modality.dual())
            } else {
                (*quantifier, *modality)
            };
            Formula::bundle(q, m, var.clone(), nnf(body, negated))
        }
    }
}

/// Renames bound variables so that no variable is both bound and free and
/// every binder binds a distinct variable.
///
/// Free variables are never renamed. A binder keeps its name the first time
/// (in pre-order) the name is available; later clashes get the least unused
/// index on the same base name.
pub fn cleanse(f: &Formula) -> Formula {
    let mut taken = f.free_vars();
    let mut avoid = f.all_vars();
    rename_apart(f, &mut taken, &mut avoid, &BTreeMap::new())
}

/// Cleanses a set of formulas jointly, as if they were one conjunction.
/// `reserved` variables are treated as free everywhere.
pub(crate) fn cleanse_jointly<'a, I>(formulas: I, reserved: &BTreeSet<Var>) -> Vec<Formula>
where
    I: IntoIterator<Item = &'a Formula> + Clone,
{
    let mut taken = reserved.clone();
    let mut avoid = reserved.clone();
    for f in formulas.clone() {
        taken.extend(f.free_vars());
        avoid.extend(f.all_vars());
    }
    formulas
        .into_iter()
        .map(|f| rename_apart(f, &mut taken, &mut avoid, &BTreeMap::new()))
        .collect()
}

fn rename_apart(
    f: &Formula,
    taken: &mut BTreeSet<Var>,
    avoid: &mut BTreeSet<Var>,
    env: &BTreeMap<Var, Var>,
) -> Formula {
    match f {
        Formula::Top | Formula::Bot => f.clone(),
        Formula::Atom(atom) => Formula::Atom(Atom {
            pred: atom.pred.clone(),
            args: atom.args.iter().map(|a| env.get(a).unwrap_or(a).clone()).collect(),
        }),
        Formula::Not(a) => Formula::not(rename_apart(a, taken, avoid, env)),
        Formula::And(a, b) => {
            let a = rename_apart(a, taken, avoid, env);
            Formula::and(a, rename_apart(b, taken, avoid, env))
        }
        Formula::Or(a, b) => {
            let a = rename_apart(a, taken, avoid, env);
            Formula::or(a, rename_apart(b, taken, avoid, env))
        }
        Formula::Implies(a, b) => {
            let a = rename_apart(a, taken, avoid, env);
            Formula::implies(a, rename_apart(b, taken, avoid, env))
        }
        Formula::Bundle {
            quantifier,
            modality,
            var,
            body,
        } => {
            let new = if taken.contains(var) {
                fresh_var(var.base(), avoid, false)
            } else {
                var.clone()
            };
            taken.insert(new.clone());
            avoid.insert(new.clone());
            let mut inner = env.clone();
            inner.insert(var.clone(), new.clone());
            let body = rename_apart(body, taken, avoid, &inner);
            Formula::bundle(*quantifier, *modality, new, body)
        }
    }
}

/// No variable both bound and free, and no variable bound twice.
pub fn is_clean(f: &Formula) -> bool {
    is_clean_set(std::iter::once(f))
}

/// Cleanliness of a set of formulas read as one conjunction.
pub fn is_clean_set<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> bool {
    let mut free = BTreeSet::new();
    let mut bound = BTreeSet::new();
    for f in formulas {
        free.extend(f.free_vars());
        let mut ok = true;
        f.visit(&mut |g| {
            if let Formula::Bundle { var, .. } = g {
                ok &= bound.insert(var.clone());
            }
        });
        if !ok {
            return false;
        }
    }
    free.is_disjoint(&bound)
}

pub fn classify(f: &Formula) -> Fragment {
    let (mut box_side, mut diamond_side) = (false, false);
    to_nnf(f).visit(&mut |g| {
        if let Formula::Bundle {
            quantifier, modality, ..
        } = g
        {
            match (quantifier, modality) {
                (Quantifier::Exists, Modality::Box) | (Quantifier::Forall, Modality::Diamond) => box_side = true,
                _ => diamond_side = true,
            }
        }
    });
    match (box_side, diamond_side) {
        (true, true) => Fragment::Full,
        (false, true) => Fragment::ExistsDiamond,
        // formulas without bundles belong to both restricted fragments
        _ => Fragment::ExistsBox,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn nnf_examples() {
        assert_eq!(to_nnf(&f("!E x [] P(x)")), f("A x <> !P(x)"));
        assert_eq!(to_nnf(&f("!(P(x) & Q(y))")), f("(!P(x) | !Q(y))"));
        assert_eq!(to_nnf(&f("!A x <> !P(x)")), f("E x [] P(x)"));
        assert_eq!(to_nnf(&f("!E x <> P(x)")), f("A x [] !P(x)"));
        assert_eq!(to_nnf(&f("(P(x) -> Q(x))")), f("(!P(x) | Q(x))"));
        assert_eq!(to_nnf(&f("!(P(x) -> Q(x))")), f("(P(x) & !Q(x))"));
        assert_eq!(to_nnf(&f("!!T")), Formula::Top);
        assert_eq!(to_nnf(&f("!T")), Formula::Bot);
    }

    #[test]
    fn cleanse_examples() {
        assert_eq!(
            cleanse(&f("(E x [] P(x) | E x [] Q(x))")),
            f("(E x [] P(x) | E x_1 [] Q(x_1))")
        );
        assert_eq!(cleanse(&f("(P(x) & E x [] Q(x))")), f("(P(x) & E x_1 [] Q(x_1))"));
        let clean = f("(P(x) & E y [] Q(y))");
        assert_eq!(cleanse(&clean), clean);
        // the fresh index avoids names already present
        assert_eq!(
            cleanse(&f("(E x [] P(x) & (R(x_1) | E x <> P(x)))")),
            f("(E x [] P(x) & (R(x_1) | E x_2 <> P(x_2)))")
        );
        // shadowing binders
        assert_eq!(
            cleanse(&f("E x [] (P(x) & E x <> Q(x))")),
            f("E x [] (P(x) & E x_1 <> Q(x_1))")
        );
    }

    #[test]
    fn cleanliness_predicate() {
        assert!(is_clean(&f("(P(x) & E y [] Q(y))")));
        assert!(!is_clean(&f("(P(x) & E x [] Q(x))")));
        assert!(!is_clean(&f("(E x [] P(x) | E x [] Q(x))")));
        assert!(!is_clean_set([&f("E u [] P(u)"), &f("E u [] Q(u)")]));
        let joint = cleanse_jointly([&f("E u [] P(u,a)"), &f("E u [] P(u,b)")], &BTreeSet::new());
        assert_eq!(joint, vec![f("E u [] P(u,a)"), f("E u_1 [] P(u_1,b)")]);
        assert!(is_clean_set(&joint));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&f("(E x [] P(x) & A y <> Q(y))")), Fragment::ExistsBox);
        assert_eq!(classify(&f("A x [] P(x)")), Fragment::ExistsDiamond);
        assert_eq!(classify(&f("(E x [] P(x) & A y [] Q(y))")), Fragment::Full);
        assert_eq!(classify(&f("!E x <> P(x)")), Fragment::ExistsDiamond);
        assert_eq!(classify(&f("!A x [] P(x)")), Fragment::ExistsDiamond);
        assert_eq!(classify(&f("P(x)")), Fragment::ExistsBox);
    }
}
