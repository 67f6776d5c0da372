use std::collections::BTreeSet;
use std::fmt;

/// A first-order variable: a lower-case base name plus an optional freshness
/// index. Printed as `x` or `x_3`.
///
/// Identifiers ending in `_<digits>` are always read as indexed variables, so
/// `Var::new("x_3") == Var::indexed("x", 3)` and printing round-trips.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    name: String,
    index: Option<u32>,
}

impl Var {
    /// Panics if `ident` is not a lower-case identifier.
    pub fn new(ident: &str) -> Self {
        Var::from_ident(ident).unwrap_or_else(|| panic!("invalid variable name {ident:?}"))
    }

    pub fn indexed(base: &str, index: u32) -> Self {
        let base = Var::new(base);
        Var {
            name: base.to_string(),
            index: Some(index),
        }
    }

    pub(crate) fn from_ident(ident: &str) -> Option<Self> {
        let mut chars = ident.chars();
        if !matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return None;
        }
        if let Some((base, digits)) = ident.rsplit_once('_') {
            let canonical = !digits.is_empty()
                && digits.chars().all(|c| c.is_ascii_digit())
                && (digits == "0" || !digits.starts_with('0'));
            if canonical {
                if let Ok(index) = digits.parse() {
                    if !base.is_empty() {
                        return Some(Var {
                            name: base.to_string(),
                            index: Some(index),
                        });
                    }
                }
            }
        }
        Some(Var {
            name: ident.to_string(),
            index: None,
        })
    }

    pub fn base(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> Option<u32> {
        self.index
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            None => f.write_str(&self.name),
            Some(k) => write!(f, "{}_{}", self.name, k),
        }
    }
}

/// Least-index variable with the given base that is not in `used`.
///
/// With `allow_plain` the unindexed name is tried first.
pub fn fresh_var(base: &str, used: &BTreeSet<Var>, allow_plain: bool) -> Var {
    let plain = Var::new(base);
    if allow_plain && plain.index.is_none() && !used.contains(&plain) {
        return plain;
    }
    (1..)
        .map(|k| Var {
            name: base.to_string(),
            index: Some(k),
        })
        .find(|v| !used.contains(v))
        .expect("variable indices exhausted")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_suffix_is_structural() {
        assert_eq!(Var::new("x_3"), Var::indexed("x", 3));
        assert_eq!(Var::new("x_3").to_string(), "x_3");
        assert_eq!(Var::new("x_1_2"), Var::indexed("x_1", 2));
        assert_eq!(Var::new("x_1_2").base(), "x_1");
        // leading zeros are not an index
        assert_eq!(Var::new("x_01").index(), None);
        assert_eq!(Var::new("x_").index(), None);
        assert!(Var::from_ident("X").is_none());
        assert!(Var::from_ident("_x").is_none());
    }

    #[test]
    fn ordering_is_total_and_plain_first() {
        assert!(Var::new("x") < Var::indexed("x", 1));
        assert!(Var::indexed("x", 1) < Var::indexed("x", 2));
        assert!(Var::indexed("x", 9) < Var::new("y"));
    }

    #[test]
    fn fresh_picks_least_unused() {
        let used: BTreeSet<Var> = ["x", "x_1", "x_3"].iter().map(|s| Var::new(s)).collect();
        assert_eq!(fresh_var("x", &used, true), Var::indexed("x", 2));
        assert_eq!(fresh_var("z", &used, true), Var::new("z"));
        assert_eq!(fresh_var("z", &used, false), Var::indexed("z", 1));
    }
}
