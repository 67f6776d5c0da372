//! Recursive-descent parser for the ASCII formula syntax:
//!
//! ```text
//! formula := "T" | "F" | pred | "!" formula | "(" formula op formula ")"
//!          | quant var mod formula
//! op      := "&" | "|" | "->"      quant := "E" | "A"      mod := "[]" | "<>"
//! pred    := UpperIdent "(" var ("," var)* ")"
//! ```
//!
//! `#` starts a comment running to the end of the line. A parenthesised single
//! formula is accepted as grouping.

use std::collections::HashMap;

use super::{is_predicate_name, Atom, Formula, Modality, Predicate, Quantifier, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: predicate {name} used with {found} argument(s), earlier with {expected}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        line: usize,
        column: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Upper(String),
    Lower(String),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Arrow,
    BoxOp,
    DiamondOp,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Upper(s) | Tok::Lower(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Not => "`!`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::BoxOp => "`[]`".into(),
        Tok::DiamondOp => "`<>`".into(),
        Tok::Eof => "end of input".into(),
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, width) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '!' => (Tok::Not, 1),
            '&' => (Tok::And, 1),
            '|' => (Tok::Or, 1),
            '-' if two == "->" => (Tok::Arrow, 2),
            '[' if two == "[]" => (Tok::BoxOp, 2),
            '<' if two == "<>" => (Tok::DiamondOp, 2),
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let ident: String = chars[i..j].iter().collect();
                let tok = if c.is_ascii_uppercase() {
                    Tok::Upper(ident)
                } else {
                    Tok::Lower(ident)
                };
                (tok, j - i)
            }
            other => return Err(syntax(start_line, start_col, format!("unexpected character {other:?}"))),
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
        i += width;
        col += width;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    arities: HashMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        syntax(
            t.line,
            t.column,
            format!("expected {expected}, found {}", describe(&t.tok)),
        )
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        match &self.peek().tok {
            Tok::Lower(name) => {
                let v = Var::from_ident(name).ok_or_else(|| self.unexpected("a variable"))?;
                self.bump();
                Ok(v)
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let start = self.peek().clone();
        match &start.tok {
            Tok::Upper(word) => match word.as_str() {
                "T" => {
                    self.bump();
                    Ok(Formula::Top)
                }
                "F" => {
                    self.bump();
                    Ok(Formula::Bot)
                }
                "E" | "A" => {
                    let quantifier = if word == "E" {
                        Quantifier::Exists
                    } else {
                        Quantifier::Forall
                    };
                    self.bump();
                    let var = self.var()?;
                    let modality = match self.peek().tok {
                        Tok::BoxOp => Modality::Box,
                        Tok::DiamondOp => Modality::Diamond,
                        _ => return Err(self.unexpected("`[]` or `<>`")),
                    };
                    self.bump();
                    let body = self.formula()?;
                    Ok(Formula::bundle(quantifier, modality, var, body))
                }
                _ => self.atom(),
            },
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.formula()?))
            }
            Tok::LParen => {
                self.bump();
                let lhs = self.formula()?;
                let ctor: fn(Formula, Formula) -> Formula = match self.peek().tok {
                    Tok::And => Formula::and,
                    Tok::Or => Formula::or,
                    Tok::Arrow => Formula::implies,
                    Tok::RParen => {
                        self.bump();
                        return Ok(lhs);
                    }
                    _ => return Err(self.unexpected("`&`, `|`, `->` or `)`")),
                };
                self.bump();
                let rhs = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ctor(lhs, rhs))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let start = self.bump();
        let Tok::Upper(name) = start.tok else {
            unreachable!("atom() called on a non-identifier")
        };
        if !is_predicate_name(&name) {
            return Err(syntax(
                start.line,
                start.column,
                format!("`{name}` is not a predicate name"),
            ));
        }
        self.expect(Tok::LParen, "`(` after predicate name")?;
        let mut args = Vec::new();
        if self.peek().tok != Tok::RParen {
            args.push(self.var()?);
            while self.peek().tok == Tok::Comma {
                self.bump();
                args.push(self.var()?);
            }
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        match self.arities.get(&name) {
            Some(&expected) if expected != args.len() => {
                return Err(ParseError::ArityMismatch {
                    name,
                    expected,
                    found: args.len(),
                    line: start.line,
                    column: start.column,
                });
            }
            _ => {
                self.arities.insert(name.clone(), args.len());
            }
        }
        Ok(Formula::Atom(Atom {
            pred: Predicate {
                name,
                arity: args.len(),
            },
            args,
        }))
    }
}

/// Parses exactly one formula; trailing input is an error.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        arities: HashMap::new(),
    };
    let f = p.formula()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_cases() {
        assert_eq!(
            parse("E x [] P(x)").unwrap(),
            Formula::exists_box("x", Formula::atom("P", &["x"]))
        );
        assert_eq!(
            parse("(P(x) & !P(x))").unwrap(),
            Formula::and(Formula::atom("P", &["x"]), Formula::not(Formula::atom("P", &["x"])))
        );
        assert_eq!(
            parse("  A y<>!P(y) ").unwrap(),
            Formula::forall_diamond("y", Formula::not(Formula::atom("P", &["y"])))
        );
        assert_eq!(parse("((T))").unwrap(), Formula::Top);
        assert_eq!(parse("Q()").unwrap(), Formula::atom("Q", &[]));
    }

    #[test]
    fn arity_mismatch_names_predicate() {
        match parse("(P(x) & P(x,y))") {
            Err(ParseError::ArityMismatch {
                name,
                expected,
                found,
                line,
                column,
            }) => {
                assert_eq!((name.as_str(), expected, found), ("P", 1, 2));
                assert_eq!((line, column), (1, 9));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse("(P(x) &\n  E x Q(x))") {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 7)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("P(x) Q(x)").is_err());
        assert!(parse("(P(x) & Q(x)").is_err());
        assert!(parse("T(x)").is_err());
        assert!(parse("P(X)").is_err());
        assert!(parse("").is_err());
        assert!(parse("P(x) $").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let f = parse("# knowing how\nE x [] P(x) # trailing").unwrap();
        assert_eq!(f, parse("E x [] P(x)").unwrap());
    }
}
