use bfoml_core::formula::{classify, is_clean, Fragment};
use bfoml_core::kripke::{check, enumerate_sat, DEFAULT_ORACLE_BUDGET};
use bfoml_core::reduction::{
    build_witness_model, fo_check, fo_enumerate_sat, parse_fo, psi3, translate_sentence, FoModel, FoParseError,
};
use bfoml_core::{Assignment, Semantics};

/// Bounded bridge between FO(R) and constant-domain satisfiability: an FO
/// model of size `d` exists iff `ψ_α` has a constant-domain model with at
/// most `n + d + 2` worlds and `d` elements.
#[test]
fn bridge_property_on_small_sentences() {
    let sat = [
        "EX x . R(x,x)",
        "ALL x . !R(x,x)",
        "EX x . EX y . R(x,y)",
        "ALL x . EX y . R(x,y)",
    ];
    for text in sat {
        let alpha = parse_fo(text).unwrap();
        let m = fo_enumerate_sat(&alpha, 3).expect("satisfiable sentence");
        let d = m.domain.len();
        let psi = translate_sentence(&alpha);
        let found = enumerate_sat(&psi, alpha.n() + d + 2, d, Semantics::Constant, DEFAULT_ORACLE_BUDGET).unwrap();
        let found = found.unwrap_or_else(|| panic!("no constant-domain model of the translation of {text}"));
        assert!(found.model.is_constant_domain());
    }

    let unsat = ["EX x . (R(x,x) & !R(x,x))", "EX x . ALL y . (R(x,x) & !R(y,y))"];
    for text in unsat {
        let alpha = parse_fo(text).unwrap();
        assert_eq!(fo_enumerate_sat(&alpha, 3), None);
        let psi = translate_sentence(&alpha);
        for d in 1..=3 {
            let found = enumerate_sat(&psi, alpha.n() + d + 2, d, Semantics::Constant, DEFAULT_ORACLE_BUDGET).unwrap();
            assert!(found.is_none(), "translation of {text} has a model with {d} elements");
        }
    }
}

#[test]
fn translations_are_clean_sentences_of_the_exists_diamond_fragment() {
    for text in [
        "EX x . R(x,x)",
        "ALL x . EX y . (R(x,y) -> !R(y,x))",
        "EX x . ALL y . EX z . ((R(x,y) | R(y,z)) & !R(z,x))",
    ] {
        let alpha = parse_fo(text).unwrap();
        let psi = translate_sentence(&alpha);
        assert!(is_clean(&psi));
        assert!(psi.free_vars().is_empty());
        assert_eq!(classify(&psi), Fragment::ExistsDiamond);
        assert_eq!(psi.modal_depth(), alpha.n() + 3);
        assert_eq!(psi.to_string().parse(), Ok(psi));
    }
}

#[test]
fn fo_examples() {
    let model = |domain: &[&str], pairs: &[(&str, &str)]| FoModel {
        domain: domain.iter().map(|s| s.to_string()).collect(),
        relation: pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    };
    let total = parse_fo("ALL x . EX y . R(x,y)").unwrap();
    assert!(!fo_check(
        &model(&["a"], &[]),
        &parse_fo("EX x . EX y . R(x,y)").unwrap()
    ));
    assert!(fo_check(&model(&["a"], &[("a", "a")]), &total));
    assert!(!fo_check(&model(&["a", "b"], &[("a", "b")]), &total));

    let first = model(&["d0"], &[("d0", "d0")]);
    assert_eq!(
        fo_enumerate_sat(&parse_fo("EX x . EX y . R(x,y)").unwrap(), 1),
        Some(first.clone())
    );
    assert_eq!(fo_enumerate_sat(&total, 1), Some(first));
    let contradiction = parse_fo("EX x . EX y . ALL u . ALL v . (!R(u,v) & R(x,y))").unwrap();
    assert_eq!(fo_enumerate_sat(&contradiction, 3), None);

    assert!(matches!(parse_fo("EX x . R(x,y)"), Err(FoParseError::Open(_))));
    assert!(matches!(
        parse_fo("(EX x . R(x,x) & EX y . R(y,y))"),
        Err(FoParseError::NotPrenex(_))
    ));
}

#[test]
fn witness_model_satisfies_the_shorter_towers() {
    let alpha = parse_fo("EX x . ALL y . R(x,y)").unwrap();
    let m = fo_enumerate_sat(&alpha, 2).unwrap();
    let k = build_witness_model(&m, &alpha);
    let conjuncts = psi3(alpha.n());
    let towers: Vec<_> = {
        let mut parts = Vec::new();
        let mut rest = conjuncts;
        while let bfoml_core::Formula::And(a, b) = rest {
            parts.push(*b);
            rest = *a;
        }
        parts.push(rest);
        parts.reverse();
        parts
    };
    assert_eq!(towers.len(), alpha.n() + 2);
    let truth: Vec<bool> = towers
        .iter()
        .map(|t| check(&k, "v1", &Assignment::new(), t).unwrap())
        .collect();
    // every tower but the deepest finds a successor
    let mut expected = vec![true; alpha.n() + 1];
    expected.push(false);
    assert_eq!(truth, expected);
}
