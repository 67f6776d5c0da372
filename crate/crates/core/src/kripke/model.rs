use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub type Tuple = Vec<String>;

/// A finite Kripke model `(W, D, δ, R, ρ)` with increasing local domains.
///
/// The serde form is the model JSON exchanged by the CLI:
/// `{"worlds":[..], "domain":[..], "edges":[[w,v],..], "local":{w:[..]}, "rho":{w:{P:[[e,..],..]}}}`.
/// Predicates missing from `rho` are interpreted as empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub worlds: Vec<String>,
    pub domain: BTreeSet<String>,
    pub edges: BTreeSet<(String, String)>,
    pub local: BTreeMap<String, BTreeSet<String>>,
    #[serde(default)]
    pub rho: BTreeMap<String, BTreeMap<String, BTreeSet<Tuple>>>,
}

/// The first model invariant found violated by [`KripkeModel::validate`].
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("model has no worlds")]
    NoWorlds,
    #[error("model has an empty domain")]
    EmptyDomain,
    #[error("world {0} is listed twice")]
    DuplicateWorld(String),
    #[error("edge ({0}, {1}) mentions an unknown world")]
    UnknownEdgeEndpoint(String, String),
    #[error("world {0} has no local domain")]
    MissingLocalDomain(String),
    #[error("local domain given for unknown world {0}")]
    UnknownLocalWorld(String),
    #[error("local domain of world {0} is empty")]
    EmptyLocalDomain(String),
    #[error("local domain of world {world} contains {element}, which is not in the domain")]
    LocalOutsideDomain { world: String, element: String },
    #[error("edge ({from}, {to}) breaks monotonicity: {element} is local to {from} but not to {to}")]
    NotMonotone { from: String, to: String, element: String },
    #[error("interpretation given for unknown world {0}")]
    UnknownRhoWorld(String),
    #[error("tuple for {pred} at world {world} contains {element}, which is not in the domain")]
    TupleOutsideDomain {
        world: String,
        pred: String,
        element: String,
    },
    #[error("predicate {pred} is interpreted with tuples of different lengths")]
    ArityConflict { pred: String },
}

impl KripkeModel {
    /// Checks the structural invariants in a fixed order and reports the
    /// first failure.
    pub fn validate(&self) -> Result<(), Violation> {
        if self.worlds.is_empty() {
            return Err(Violation::NoWorlds);
        }
        if self.domain.is_empty() {
            return Err(Violation::EmptyDomain);
        }
        let mut seen = BTreeSet::new();
        for w in &self.worlds {
            if !seen.insert(w.as_str()) {
                return Err(Violation::DuplicateWorld(w.clone()));
            }
        }
        for (w, v) in &self.edges {
            if !seen.contains(w.as_str()) || !seen.contains(v.as_str()) {
                return Err(Violation::UnknownEdgeEndpoint(w.clone(), v.clone()));
            }
        }
        for w in self.local.keys() {
            if !seen.contains(w.as_str()) {
                return Err(Violation::UnknownLocalWorld(w.clone()));
            }
        }
        for w in &self.worlds {
            let Some(local) = self.local.get(w) else {
                return Err(Violation::MissingLocalDomain(w.clone()));
            };
            if local.is_empty() {
                return Err(Violation::EmptyLocalDomain(w.clone()));
            }
            if let Some(e) = local.iter().find(|e| !self.domain.contains(*e)) {
                return Err(Violation::LocalOutsideDomain {
                    world: w.clone(),
                    element: e.clone(),
                });
            }
        }
        for (w, v) in &self.edges {
            if let Some(e) = self.local[w].difference(&self.local[v]).next() {
                return Err(Violation::NotMonotone {
                    from: w.clone(),
                    to: v.clone(),
                    element: e.clone(),
                });
            }
        }
        let mut arities: BTreeMap<&str, usize> = BTreeMap::new();
        for (w, preds) in &self.rho {
            if !seen.contains(w.as_str()) {
                return Err(Violation::UnknownRhoWorld(w.clone()));
            }
            for (p, tuples) in preds {
                for t in tuples {
                    if let Some(e) = t.iter().find(|e| !self.domain.contains(*e)) {
                        return Err(Violation::TupleOutsideDomain {
                            world: w.clone(),
                            pred: p.clone(),
                            element: e.clone(),
                        });
                    }
                    if *arities.entry(p).or_insert(t.len()) != t.len() {
                        return Err(Violation::ArityConflict { pred: p.clone() });
                    }
                }
            }
        }
        Ok(())
    }

    /// Every local domain equals the whole domain.
    pub fn is_constant_domain(&self) -> bool {
        self.worlds.iter().all(|w| self.local.get(w) == Some(&self.domain))
    }

    pub fn successors<'a>(&'a self, w: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges.iter().filter(move |(a, _)| a == w).map(|(_, b)| b.as_str())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub(crate) fn insert_fact(&mut self, world: &str, pred: &str, tuple: Tuple) {
        self.rho
            .entry(world.to_string())
            .or_default()
            .entry(pred.to_string())
            .or_default()
            .insert(tuple);
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.worlds {
            let local: Vec<&str> = self.local.get(w).into_iter().flatten().map(String::as_str).collect();
            let succ: Vec<&str> = self.successors(w).collect();
            write!(f, "{w}: local {{{}}} -> [{}]", local.join(","), succ.join(","))?;
            if let Some(preds) = self.rho.get(w) {
                for (p, tuples) in preds {
                    for t in tuples {
                        write!(f, " {p}({})", t.join(","))?;
                    }
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn two_worlds(local_w: &[&str], local_v: &[&str]) -> KripkeModel {
        KripkeModel {
            worlds: vec!["w".into(), "v".into()],
            domain: set(&["a", "b"]),
            edges: [("w".to_string(), "v".to_string())].into_iter().collect(),
            local: [("w".to_string(), set(local_w)), ("v".to_string(), set(local_v))]
                .into_iter()
                .collect(),
            rho: BTreeMap::new(),
        }
    }

    #[test]
    fn single_world_is_valid() {
        let m = KripkeModel {
            worlds: vec!["w".into()],
            domain: set(&["d"]),
            local: [("w".to_string(), set(&["d"]))].into_iter().collect(),
            ..Default::default()
        };
        assert_eq!(m.validate(), Ok(()));
        assert!(m.is_constant_domain());
    }

    #[test]
    fn monotonicity_violation_names_edge() {
        assert_eq!(
            two_worlds(&["a", "b"], &["a"]).validate(),
            Err(Violation::NotMonotone {
                from: "w".into(),
                to: "v".into(),
                element: "b".into()
            })
        );
        assert_eq!(two_worlds(&["a"], &["a", "b"]).validate(), Ok(()));
        assert!(!two_worlds(&["a"], &["a", "b"]).is_constant_domain());
    }

    #[test]
    fn empty_local_domain() {
        assert_eq!(
            two_worlds(&[], &["a"]).validate(),
            Err(Violation::EmptyLocalDomain("w".into()))
        );
    }

    #[test]
    fn tuple_checks() {
        let mut m = two_worlds(&["a"], &["a"]);
        m.insert_fact("w", "P", vec!["c".into()]);
        assert!(matches!(m.validate(), Err(Violation::TupleOutsideDomain { .. })));
        let mut m = two_worlds(&["a"], &["a"]);
        m.insert_fact("w", "P", vec!["a".into()]);
        m.insert_fact("v", "P", vec!["a".into(), "b".into()]);
        assert_eq!(m.validate(), Err(Violation::ArityConflict { pred: "P".into() }));
    }

    #[test]
    fn json_keys_are_exact() {
        let mut m = two_worlds(&["a"], &["a", "b"]);
        m.insert_fact("v", "R", vec!["a".into(), "b".into()]);
        let compact = serde_json::to_string(&m).unwrap();
        assert_eq!(
            compact,
            r#"{"worlds":["w","v"],"domain":["a","b"],"edges":[["w","v"]],"local":{"v":["a","b"],"w":["a"]},"rho":{"v":{"R":[["a","b"]]}}}"#
        );
        let value: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(value["edges"], serde_json::json!([["w", "v"]]));
        assert_eq!(value["rho"]["v"]["R"], serde_json::json!([["a", "b"]]));
        assert_eq!(KripkeModel::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn missing_rho_defaults_to_empty() {
        let text = r#"{"worlds":["w0"],"domain":["d"],"edges":[],"local":{"w0":["d"]}}"#;
        let m = KripkeModel::from_json(text).unwrap();
        assert!(m.rho.is_empty());
        assert_eq!(m.validate(), Ok(()));
    }
}
