//! First-order sentences over a single binary relation `R`, in prenex form.
//!
//! Concrete syntax: `EX x . ALL y . (R(x,y) & !R(y,x))`. The matrix uses
//! `!`, `&`, `|`, `->` and parentheses; `->` is right associative and binds
//! weakest, `!` strongest.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FoQuantifier {
    Exists,
    Forall,
}

/// Quantifier-free part of a sentence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Matrix {
    R(String, String),
    Not(Box<Matrix>),
    And(Box<Matrix>, Box<Matrix>),
    Or(Box<Matrix>, Box<Matrix>),
    Implies(Box<Matrix>, Box<Matrix>),
}

impl Matrix {
    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Matrix::R(x, y) => {
                out.insert(x);
                out.insert(y);
            }
            Matrix::Not(a) => a.collect_vars(out),
            Matrix::And(a, b) | Matrix::Or(a, b) | Matrix::Implies(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn eval(&self, env: &HashMap<&str, usize>, rel: &[Vec<bool>]) -> bool {
        match self {
            Matrix::R(x, y) => rel[env[x.as_str()]][env[y.as_str()]],
            Matrix::Not(a) => !a.eval(env, rel),
            Matrix::And(a, b) => a.eval(env, rel) && b.eval(env, rel),
            Matrix::Or(a, b) => a.eval(env, rel) || b.eval(env, rel),
            Matrix::Implies(a, b) => !a.eval(env, rel) || b.eval(env, rel),
        }
    }
}

/// A prenex FO(R) sentence `Q_1 x_1 ... Q_n x_n β`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FoSentence {
    pub prefix: Vec<(FoQuantifier, String)>,
    pub matrix: Matrix,
}

impl FoSentence {
    /// Number of quantifiers.
    pub fn n(&self) -> usize {
        self.prefix.len()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Matrix::R(x, y) => write!(f, "R({x},{y})"),
            Matrix::Not(a) => write!(f, "!{a}"),
            Matrix::And(a, b) => write!(f, "({a} & {b})"),
            Matrix::Or(a, b) => write!(f, "({a} | {b})"),
            Matrix::Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

impl fmt::Display for FoSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, x) in &self.prefix {
            let word = match q {
                FoQuantifier::Exists => "EX",
                FoQuantifier::Forall => "ALL",
            };
            write!(f, "{word} {x} . ")?;
        }
        write!(f, "{}", self.matrix)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FoParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("quantifier over {0} occurs inside the matrix; only prenex sentences are accepted")]
    NotPrenex(String),
    #[error("variable {0} occurs free; a sentence is required")]
    Open(String),
    #[error("variable {0} is quantified twice")]
    DuplicateVariable(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Arrow,
    Eof,
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, FoParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let at = (line, column);
        let width = match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
                continue;
            }
            '(' | ')' | ',' | '.' | '!' | '&' | '|' => {
                out.push(Lexed {
                    tok: match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        ',' => Tok::Comma,
                        '.' => Tok::Dot,
                        '!' => Tok::Not,
                        '&' => Tok::And,
                        _ => Tok::Or,
                    },
                    line: at.0,
                    column: at.1,
                });
                1
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Lexed {
                    tok: Tok::Arrow,
                    line: at.0,
                    column: at.1,
                });
                2
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                out.push(Lexed {
                    tok: Tok::Ident(chars[i..j].iter().collect()),
                    line: at.0,
                    column: at.1,
                });
                j - i
            }
            other => {
                return Err(FoParseError::Syntax {
                    line,
                    column,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        i += width;
        column += width;
    }
    out.push(Lexed {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// General FO syntax tree, before the prenex check.
enum Ast {
    Quant(FoQuantifier, String, Box<Ast>),
    Matrix(Matrix),
    Not(Box<Ast>),
    Bin(fn(Box<Matrix>, Box<Matrix>) -> Matrix, Box<Ast>, Box<Ast>),
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> FoParseError {
        let t = &self.toks[self.pos];
        FoParseError::Syntax {
            line: t.line,
            column: t.column,
            message: format!("expected {expected}, found {:?}", t.tok),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FoParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn var(&mut self) -> Result<String, FoParseError> {
        match self.peek().clone() {
            Tok::Ident(name) if name.starts_with(|c: char| c.is_ascii_lowercase()) => {
                self.bump();
                Ok(name)
            }
            _ => Err(self.error("a lower-case variable")),
        }
    }

    fn formula(&mut self) -> Result<Ast, FoParseError> {
        if let Tok::Ident(word) = self.peek().clone() {
            let q = match word.as_str() {
                "EX" => Some(FoQuantifier::Exists),
                "ALL" => Some(FoQuantifier::Forall),
                _ => None,
            };
            if let Some(q) = q {
                self.bump();
                let x = self.var()?;
                self.expect(Tok::Dot, "`.` after the quantified variable")?;
                return Ok(Ast::Quant(q, x, Box::new(self.formula()?)));
            }
        }
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Ast::Bin(Matrix::Implies, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Ast, FoParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Ast::Bin(Matrix::Or, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Ast, FoParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Ast::Bin(Matrix::And, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast, FoParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Ast::Not(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(word) if word == "EX" || word == "ALL" => self.formula(),
            Tok::Ident(word) if word == "R" => {
                self.bump();
                self.expect(Tok::LParen, "`(` after R")?;
                let x = self.var()?;
                self.expect(Tok::Comma, "`,`")?;
                let y = self.var()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Ast::Matrix(Matrix::R(x, y)))
            }
            _ => Err(self.error("`R(x,y)`, `!`, `(` or a quantifier")),
        }
    }
}

fn to_matrix(ast: Ast) -> Result<Matrix, FoParseError> {
    Ok(match ast {
        Ast::Quant(_, x, _) => return Err(FoParseError::NotPrenex(x)),
        Ast::Matrix(m) => m,
        Ast::Not(a) => Matrix::Not(Box::new(to_matrix(*a)?)),
        Ast::Bin(ctor, a, b) => ctor(Box::new(to_matrix(*a)?), Box::new(to_matrix(*b)?)),
    })
}

/// Parses a prenex FO(R) sentence.
pub fn parse_fo(text: &str) -> Result<FoSentence, FoParseError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let mut ast = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error("end of input"));
    }
    let mut prefix = Vec::new();
    while let Ast::Quant(q, x, body) = ast {
        if prefix.iter().any(|(_, y)| *y == x) {
            return Err(FoParseError::DuplicateVariable(x));
        }
        prefix.push((q, x));
        ast = *body;
    }
    let matrix = to_matrix(ast)?;
    if let Some(free) = matrix.vars().into_iter().find(|v| !prefix.iter().any(|(_, x)| x == v)) {
        return Err(FoParseError::Open(free.to_string()));
    }
    Ok(FoSentence { prefix, matrix })
}

impl std::str::FromStr for FoSentence {
    type Err = FoParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_fo(s)
    }
}

/// A finite structure `(D, I)` with `I ⊆ D × D`.
///
/// JSON form: `{"domain":[...], "R":[[a,b],...]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoModel {
    pub domain: Vec<String>,
    #[serde(rename = "R")]
    pub relation: BTreeSet<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FoModelError {
    #[error("the domain is empty")]
    EmptyDomain,
    #[error("element {0} is listed twice")]
    DuplicateElement(String),
    #[error("pair ({0}, {1}) mentions an element outside the domain")]
    OutsideDomain(String, String),
}

impl FoModel {
    pub fn validate(&self) -> Result<(), FoModelError> {
        if self.domain.is_empty() {
            return Err(FoModelError::EmptyDomain);
        }
        let mut seen = BTreeSet::new();
        for d in &self.domain {
            if !seen.insert(d) {
                return Err(FoModelError::DuplicateElement(d.clone()));
            }
        }
        for (a, b) in &self.relation {
            if !seen.contains(a) || !seen.contains(b) {
                return Err(FoModelError::OutsideDomain(a.clone(), b.clone()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    fn matrix(&self) -> Vec<Vec<bool>> {
        let index: HashMap<&str, usize> = self.domain.iter().enumerate().map(|(i, d)| (d.as_str(), i)).collect();
        let mut rel = vec![vec![false; self.domain.len()]; self.domain.len()];
        for (a, b) in &self.relation {
            rel[index[a.as_str()]][index[b.as_str()]] = true;
        }
        rel
    }
}

/// Tarskian truth of `alpha` in `m`, by expanding every quantifier.
///
/// Panics if `m` fails [`FoModel::validate`].
pub fn fo_check(m: &FoModel, alpha: &FoSentence) -> bool {
    m.validate().expect("fo_check needs a valid model");
    let rel = m.matrix();
    let mut env = HashMap::new();
    eval_prefix(&alpha.prefix, &alpha.matrix, m.domain.len(), &rel, &mut env)
}

fn eval_prefix<'a>(
    prefix: &'a [(FoQuantifier, String)],
    matrix: &Matrix,
    size: usize,
    rel: &[Vec<bool>],
    env: &mut HashMap<&'a str, usize>,
) -> bool {
    let Some(((q, x), rest)) = prefix.split_first() else {
        return matrix.eval(env, rel);
    };
    let mut at = |d: usize| {
        env.insert(x.as_str(), d);
        eval_prefix(rest, matrix, size, rel, env)
    };
    match q {
        FoQuantifier::Exists => (0..size).any(&mut at),
        FoQuantifier::Forall => (0..size).all(&mut at),
    }
}

/// First model of `alpha` with at most `max_domain` elements named
/// `d0, d1, ...`. Sizes are tried in increasing order; within a size the
/// relation is read as a bit mask over the row-major pairs and masks are
/// tried in increasing order.
pub fn fo_enumerate_sat(alpha: &FoSentence, max_domain: usize) -> Option<FoModel> {
    for size in 1..=max_domain {
        let domain: Vec<String> = (0..size).map(|i| format!("d{i}")).collect();
        let pairs = size * size;
        assert!(pairs < 64, "domain too large for exhaustive search");
        for mask in 0u64..(1u64 << pairs) {
            let relation = (0..pairs)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (domain[i / size].clone(), domain[i % size].clone()))
                .collect();
            let m = FoModel {
                domain: domain.clone(),
                relation,
            };
            if fo_check(&m, alpha) {
                return Some(m);
            }
        }
    }
    None
}

/// Every model of `alpha` with exactly `size` elements, in enumeration
/// order.
pub fn fo_models_of_size(alpha: &FoSentence, size: usize) -> Vec<FoModel> {
    let domain: Vec<String> = (0..size).map(|i| format!("d{i}")).collect();
    let pairs = size * size;
    assert!(pairs < 64, "domain too large for exhaustive search");
    (0u64..(1u64 << pairs))
        .map(|mask| FoModel {
            domain: domain.clone(),
            relation: (0..pairs)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (domain[i / size].clone(), domain[i % size].clone()))
                .collect(),
        })
        .filter(|m| fo_check(m, alpha))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(domain: &[&str], pairs: &[(&str, &str)]) -> FoModel {
        FoModel {
            domain: domain.iter().map(|s| s.to_string()).collect(),
            relation: pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        }
    }

    fn fo(s: &str) -> FoSentence {
        s.parse().unwrap()
    }

    #[test]
    fn parses_prefix_and_matrix() {
        let s = fo("EX x . ALL y . (R(x,y) & !R(y,x))");
        assert_eq!(s.n(), 2);
        assert_eq!(s.prefix[1], (FoQuantifier::Forall, "y".to_string()));
        assert_eq!(s.to_string(), "EX x . ALL y . (R(x,y) & !R(y,x))");
        assert_eq!(fo(&s.to_string()), s);
        // precedence: ! > & > | > ->
        let s = fo("ALL x . R(x,x) & R(x,x) | !R(x,x) -> R(x,x)");
        assert_eq!(s.matrix.to_string(), "(((R(x,x) & R(x,x)) | !R(x,x)) -> R(x,x))");
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_fo("EX x . R(x,y)"), Err(FoParseError::Open("y".into())));
        assert_eq!(
            parse_fo("EX x . (R(x,x) & EX y . R(x,y))"),
            Err(FoParseError::NotPrenex("y".into()))
        );
        assert_eq!(
            parse_fo("EX x . ALL x . R(x,x)"),
            Err(FoParseError::DuplicateVariable("x".into()))
        );
        assert!(matches!(parse_fo("EX x R(x,x)"), Err(FoParseError::Syntax { .. })));
    }

    #[test]
    fn evaluation() {
        assert!(!fo_check(&model(&["a"], &[]), &fo("EX x . EX y . R(x,y)")));
        assert!(fo_check(&model(&["a"], &[("a", "a")]), &fo("ALL x . EX y . R(x,y)")));
        assert!(!fo_check(
            &model(&["a", "b"], &[("a", "b")]),
            &fo("ALL x . EX y . R(x,y)")
        ));
    }

    #[test]
    fn enumeration_order() {
        assert_eq!(
            fo_enumerate_sat(&fo("EX x . EX y . R(x,y)"), 1),
            Some(model(&["d0"], &[("d0", "d0")]))
        );
        assert_eq!(
            fo_enumerate_sat(&fo("ALL x . EX y . R(x,y)"), 1),
            Some(model(&["d0"], &[("d0", "d0")]))
        );
        let contradiction = fo("ALL x . ALL y . EX u . EX v . (!R(x,y) & R(u,v))");
        assert_eq!(fo_enumerate_sat(&contradiction, 3), None);
        // irreflexive and serial needs two elements
        let m = fo_enumerate_sat(&fo("ALL x . EX y . (R(x,y) & !R(x,x))"), 3).unwrap();
        assert_eq!(m.domain.len(), 2);
    }

    #[test]
    fn model_json() {
        let m = model(&["a", "b"], &[("a", "b")]);
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"domain":["a","b"],"R":[["a","b"]]}"#
        );
        assert_eq!(FoModel::from_json(&m.to_json()).unwrap(), m);
        assert_eq!(
            model(&["a"], &[("a", "c")]).validate(),
            Err(FoModelError::OutsideDomain("a".into(), "c".into()))
        );
    }
}
