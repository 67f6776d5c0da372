use std::collections::BTreeSet;

use super::fo::{FoModel, FoQuantifier, FoSentence, Matrix};
use crate::formula::{cleanse, fresh_var, Formula, Modality, Quantifier, Var};
use crate::kripke::KripkeModel;

/// Predicate names standing for the first and second argument of `R`.
pub const FIRST: &str = "P";
pub const SECOND: &str = "Q";

fn pair(x: &Var, y: &Var) -> Formula {
    Formula::and(
        Formula::atom(FIRST, &[&x.to_string()]),
        Formula::atom(SECOND, &[&y.to_string()]),
    )
}

fn tower(quantifier: Quantifier, modality: Modality, var: &Var, n: usize, body: Formula) -> Formula {
    (0..n).fold(body, |acc, _| Formula::bundle(quantifier, modality, var.clone(), acc))
}

/// Translates a quantifier-free matrix: `R(x,y)` becomes
/// `E z <> (P(x) & Q(y))` with a fresh `z` for every occurrence, and the
/// boolean connectives are kept.
pub fn translate_qf(beta: &Matrix) -> Formula {
    let mut used: BTreeSet<Var> = beta.vars().into_iter().map(Var::new).collect();
    qf(beta, &mut used)
}

fn qf(beta: &Matrix, used: &mut BTreeSet<Var>) -> Formula {
    match beta {
        Matrix::R(x, y) => {
            let z = fresh_var("z", used, true);
            used.insert(z.clone());
            Formula::bundle(
                Quantifier::Exists,
                Modality::Diamond,
                z,
                pair(&Var::new(x), &Var::new(y)),
            )
        }
        Matrix::Not(a) => Formula::not(qf(a, used)),
        Matrix::And(a, b) => {
            let a = qf(a, used);
            Formula::and(a, qf(b, used))
        }
        Matrix::Or(a, b) => {
            let a = qf(a, used);
            Formula::or(a, qf(b, used))
        }
        Matrix::Implies(a, b) => {
            let a = qf(a, used);
            Formula::implies(a, qf(b, used))
        }
    }
}

/// `Q_1 x_1 Δ_1 ... Q_n x_n Δ_n β'` where `∃` becomes `E x <>` and `∀`
/// becomes `A x []`.
pub fn psi1(alpha: &FoSentence) -> Formula {
    alpha
        .prefix
        .iter()
        .rev()
        .fold(translate_qf(&alpha.matrix), |acc, (q, x)| match q {
            FoQuantifier::Exists => Formula::exists_diamond(x, acc),
            FoQuantifier::Forall => Formula::forall_box(x, acc),
        })
}

/// `A z1 [] A z2 [] ((E z <>)^n E z <> (P(z1) & Q(z2)) -> (A z [])^n E z <> (P(z1) & Q(z2)))`.
///
/// The innermost `E z <>` is outside the `n`-fold towers, giving modal depth
/// `n + 3`. Tower levels bind `z` repeatedly; [`translate_sentence`] cleanses.
pub fn psi2(n: usize) -> Formula {
    let (z, z1, z2) = (Var::new("z"), Var::new("z1"), Var::new("z2"));
    let inner = Formula::bundle(Quantifier::Exists, Modality::Diamond, z.clone(), pair(&z1, &z2));
    let body = Formula::implies(
        tower(Quantifier::Exists, Modality::Diamond, &z, n, inner.clone()),
        tower(Quantifier::Forall, Modality::Box, &z, n, inner),
    );
    Formula::forall_box("z1", Formula::forall_box("z2", body))
}

/// `⋀_{j=1}^{n+2} (A z [])^j E z <> T`.
pub fn psi3(n: usize) -> Formula {
    let z = Var::new("z");
    Formula::conjunction((1..=n + 2).map(|j| {
        tower(
            Quantifier::Forall,
            Modality::Box,
            &z,
            j,
            Formula::exists_diamond("z", Formula::Top),
        )
    }))
}

/// `ψ_α = (ψ1 & ψ2) & ψ3`, cleansed. A sentence of the `E x <>` fragment.
pub fn translate_sentence(alpha: &FoSentence) -> Formula {
    let n = alpha.n();
    cleanse(&Formula::and(Formula::and(psi1(alpha), psi2(n)), psi3(n)))
}

pub fn witness_world(d: &str) -> String {
    format!("u_{d}")
}

/// The path-plus-fan model built from a model of `alpha`:
/// `v1 -> v2 -> w1 -> ... -> wn`, then `wn -> u_d` for every element `d`,
/// with `P` true of `d` at `u_d`, `Q` true of every `c` with `(d, c) ∈ I`,
/// both empty elsewhere, and the whole domain local to every world.
pub fn build_witness_model(m: &FoModel, alpha: &FoSentence) -> KripkeModel {
    let n = alpha.n();
    let chain: Vec<String> = ["v1".to_string(), "v2".to_string()]
        .into_iter()
        .chain((1..=n).map(|i| format!("w{i}")))
        .collect();
    let fan: Vec<String> = m.domain.iter().map(|d| witness_world(d)).collect();
    let mut model = KripkeModel {
        worlds: chain.iter().chain(&fan).cloned().collect(),
        domain: m.domain.iter().cloned().collect(),
        ..Default::default()
    };
    for w in &model.worlds {
        model.local.insert(w.clone(), model.domain.clone());
    }
    for step in chain.windows(2) {
        model.edges.insert((step[0].clone(), step[1].clone()));
    }
    let last = chain.last().expect("chain has at least two worlds");
    for (d, u) in m.domain.iter().zip(&fan) {
        model.edges.insert((last.clone(), u.clone()));
        model.insert_fact(u, FIRST, vec![d.clone()]);
        for (a, c) in &m.relation {
            if a == d {
                model.insert_fact(u, SECOND, vec![c.clone()]);
            }
        }
    }
    model
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{classify, is_clean, Fragment};
    use crate::kripke::{check, Assignment};

    fn fo(s: &str) -> FoSentence {
        s.parse().unwrap()
    }

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn qf_translation() {
        assert_eq!(
            translate_qf(&fo("EX x . EX y . R(x,y)").matrix),
            f("E z <> (P(x) & Q(y))")
        );
        assert_eq!(
            translate_qf(&fo("EX x . EX y . !R(x,y)").matrix),
            f("!E z <> (P(x) & Q(y))")
        );
        assert_eq!(
            translate_qf(&fo("EX x . EX y . (R(x,y) & R(y,x))").matrix),
            f("(E z <> (P(x) & Q(y)) & E z_1 <> (P(y) & Q(x)))")
        );
        // z is fresh with respect to the FO variables
        assert_eq!(translate_qf(&fo("EX z . R(z,z)").matrix), f("E z_1 <> (P(z) & Q(z))"));
    }

    #[test]
    fn psi1_prefix() {
        assert_eq!(
            psi1(&fo("EX x . ALL y . R(x,y)")),
            f("E x <> A y [] E z <> (P(x) & Q(y))")
        );
    }

    #[test]
    fn towers_have_the_stated_depths() {
        for n in 1..=4 {
            assert_eq!(psi2(n).modal_depth(), n + 3);
            assert_eq!(psi3(n).modal_depth(), n + 3);
        }
        assert_eq!(
            psi3(1),
            f("((A z [] E z <> T & A z [] A z [] E z <> T) & A z [] A z [] A z [] E z <> T)")
        );
        assert_eq!(psi3(1).modal_depth(), 4);
        assert_eq!(
            psi2(1),
            f("A z1 [] A z2 [] (E z <> E z <> (P(z1) & Q(z2)) -> A z [] E z <> (P(z1) & Q(z2)))")
        );
    }

    #[test]
    fn sentence_is_clean_and_exists_diamond() {
        let psi = translate_sentence(&fo("EX x . ALL y . (R(x,y) | !R(y,y))"));
        assert!(is_clean(&psi));
        assert!(psi.free_vars().is_empty());
        assert_eq!(classify(&psi), Fragment::ExistsDiamond);
        assert_eq!(psi.to_string().parse::<Formula>().unwrap(), psi);
    }

    #[test]
    fn witness_model_shape() {
        let m = FoModel {
            domain: vec!["a".into()],
            relation: [("a".to_string(), "a".to_string())].into_iter().collect(),
        };
        let k = build_witness_model(&m, &fo("EX x . EX y . R(x,y)"));
        assert_eq!(k.worlds, vec!["v1", "v2", "w1", "w2", "u_a"]);
        assert_eq!(k.validate(), Ok(()));
        assert!(k.is_constant_domain());
        assert_eq!(k.rho["u_a"]["P"], [vec!["a".to_string()]].into_iter().collect());
        assert_eq!(k.rho["u_a"]["Q"], [vec!["a".to_string()]].into_iter().collect());
        assert_eq!(k.successors("w2").collect::<Vec<_>>(), vec!["u_a"]);
    }

    #[test]
    fn witness_model_misses_the_deepest_conjuncts() {
        // u_d sits n + 2 edges below v1 and has no successor, so the last
        // conjunct of ψ3 fails; ψ1 looks for P and Q one level too early.
        let m = FoModel {
            domain: vec!["a".into()],
            relation: [("a".to_string(), "a".to_string())].into_iter().collect(),
        };
        let alpha = fo("EX x . EX y . R(x,y)");
        let k = build_witness_model(&m, &alpha);
        let empty = Assignment::new();
        assert_eq!(check(&k, "v1", &empty, &psi2(2)), Ok(true));
        assert_eq!(check(&k, "v1", &empty, &f("A z [] A z [] A z [] E z <> T")), Ok(true));
        assert_eq!(
            check(&k, "v1", &empty, &f("A z [] A z [] A z [] A z [] E z <> T")),
            Ok(false)
        );
        assert_eq!(check(&k, "v1", &empty, &psi1(&alpha)), Ok(false));
        assert_eq!(check(&k, "v1", &empty, &translate_sentence(&alpha)), Ok(false));
    }
}
