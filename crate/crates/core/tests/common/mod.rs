#![allow(dead_code)]

use bfoml_core::Verdict::{self, Sat, Unsat};

/// Curated formulas with their satisfiability over increasing-domain models.
///
/// Each verdict was worked out by hand from the semantics and is confirmed
/// against the bounded oracle by the acceptance suite.
pub const GOLDEN: &[(&str, Verdict)] = &[
    // grammar, free variables, substitution and normal forms
    ("E x [] P(x)", Sat),
    ("(P(x) & !P(x))", Unsat),
    ("(P(x) & E y [] Q(y))", Sat),
    ("E x <> (P(x) & Q(y))", Sat),
    ("!E x [] P(x)", Sat),
    ("!(P(x) & Q(y))", Sat),
    ("!A x <> !P(x)", Sat),
    ("(E x [] P(x) | E x [] Q(x))", Sat),
    ("(P(x) & E x [] Q(x))", Sat),
    ("E x [] (P(x) & E y [] Q(x,y))", Sat),
    ("E x [] E y [] Q(x,y)", Sat),
    ("A x <> P(x)", Sat),
    ("(E x [] P(x) & A y <> Q(y))", Sat),
    ("A x [] P(x)", Sat),
    ("(E x [] P(x) & A y [] Q(y))", Sat),
    (
        "((A z [] E z <> T & A z [] A z [] E z <> T) & A z [] A z [] A z [] E z <> T)",
        Sat,
    ),
    // checker, oracle and tableau examples
    ("E x <> P(x)", Sat),
    ("(A x [] A y [] !P(x) & A z [] E w <> P(w))", Sat),
    ("(E x [] P(x) & A y <> !P(y))", Unsat),
    ("A y <> P(y)", Sat),
    ("(E x [] P(x) & Q(z))", Sat),
    ("A x <> !P(x)", Sat),
    ("(E x [] P(x) & R(z))", Sat),
    // reduction pieces for EX x . ALL y . R(x,y) and n = 1
    ("E x <> A y [] E z <> (P(x) & Q(y))", Sat),
    (
        "A z1 [] A z2 [] (E z <> E z <> (P(z1) & Q(z2)) -> A z [] E z <> (P(z1) & Q(z2)))",
        Sat,
    ),
    // epistemic readings, one modality, constants as free variables
    ("!E x [] Kill(x,mary)", Sat),
    ("E x [] !E y [] Prove(x,y)", Sat),
    ("A x <> E y [] Friend(x,y)", Sat),
    ("E x [] (E y [] Key(x,y) & !E y [] Key(x,y))", Sat),
    ("(E x [] (E y [] Key(x,y) & !E y [] Key(x,y)) & E s <> T)", Unsat),
    ("A m <> !E x [] Kill(x,m)", Sat),
    // boundary cases
    ("T", Sat),
    ("F", Unsat),
    ("E x <> F", Unsat),
    ("A x <> F", Unsat),
    ("A x [] F", Sat),
    ("(E x [] F & E y <> T)", Unsat),
    ("(A x [] P(x) & E y <> !P(y))", Unsat),
    ("(E x <> P(x) & E y <> !P(y))", Sat),
    ("E x <> (P(x) & !P(x))", Unsat),
    ("(A x <> P(x) & A y [] !P(y))", Unsat),
    ("(E x [] P(x) & A y <> P(y))", Sat),
    ("(E x [] Q(x,a) & A y <> !Q(y,a))", Unsat),
    ("(E x [] Q(x,a) & A y <> !Q(a,y))", Sat),
    ("A x <> (P(x) | !P(x))", Sat),
    ("(E x <> E y <> P(y) & A u [] A v [] !P(v))", Unsat),
    ("(E x <> E y <> P(y) & A u [] A v [] !P(u))", Sat),
    ("(E x [] (P(x) | Q(x,x)) & A y <> (!P(y) & !Q(y,y)))", Unsat),
    ("(E x [] E y [] Q(x,y) & A u <> A v <> !Q(u,v))", Unsat),
    ("(P(x) -> Q(x,x))", Sat),
    ("!(E x [] P(x) -> E x [] P(x))", Unsat),
    ("((A x [] A y [] !P(x) & A z [] E w <> P(w)) & E s <> T)", Sat),
];
