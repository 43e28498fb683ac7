//! Word expressions.
//!
//! ```text
//! expr := term { term }
//! term := atom [ "^-1" ] | "[" expr "," expr "]" | "(" expr ")" [ "^-1" ]
//! atom := "h" NAT "(" literal ")"
//! ```
//!
//! Whitespace is insignificant. `[a, b]` denotes `a b a⁻¹ b⁻¹`. Literals
//! are instance-specific and may contain balanced parentheses and commas,
//! e.g. `h0(1,1,0)` or `h0((1,1,0))` for the Heisenberg instance.

use std::fmt;

use crate::amalgam::{Syllable, Word};
use crate::error::{Error, Result};
use crate::system::FactorSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term<L> {
    Atom {
        level: usize,
        value: L,
        inverted: bool,
    },
    Commutator(Box<Expr<L>>, Box<Expr<L>>),
    Group {
        inner: Box<Expr<L>>,
        inverted: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr<L> {
    pub terms: Vec<Term<L>>,
}

impl<L> Expr<L> {
    /// The commutator operands, if this expression is exactly one `[a, b]`.
    pub fn as_commutator(&self) -> Option<(&Expr<L>, &Expr<L>)> {
        match self.terms.as_slice() {
            [Term::Commutator(a, b)] => Some((a, b)),
            _ => None,
        }
    }

    pub fn contains_commutator(&self) -> bool {
        self.terms.iter().any(|t| match t {
            Term::Atom { .. } => false,
            Term::Commutator(..) => true,
            Term::Group { inner, .. } => inner.contains_commutator(),
        })
    }

    fn try_map<M>(self, f: &mut impl FnMut(L) -> Result<M>) -> Result<Expr<M>> {
        let terms = self
            .terms
            .into_iter()
            .map(|t| {
                Ok(match t {
                    Term::Atom {
                        level,
                        value,
                        inverted,
                    } => Term::Atom {
                        level,
                        value: f(value)?,
                        inverted,
                    },
                    Term::Commutator(a, b) => {
                        Term::Commutator(Box::new(a.try_map(f)?), Box::new(b.try_map(f)?))
                    }
                    Term::Group { inner, inverted } => Term::Group {
                        inner: Box::new(inner.try_map(f)?),
                        inverted,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Expr { terms })
    }
}

impl fmt::Display for Expr<String> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match t {
                Term::Atom {
                    level,
                    value,
                    inverted,
                } => {
                    write!(f, "h{level}({value})")?;
                    if *inverted {
                        f.write_str("^-1")?;
                    }
                }
                Term::Commutator(a, b) => write!(f, "[{a}, {b}]")?,
                Term::Group { inner, inverted } => {
                    write!(f, "({inner})")?;
                    if *inverted {
                        f.write_str("^-1")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Syntax-only parse; literals are kept as raw text.
pub fn parse_syntax(src: &str) -> Result<Expr<String>> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses an expression and its literals for the given instance.
pub fn parse<S: FactorSystem>(src: &str, sys: &S) -> Result<Expr<S::Elem>> {
    parse_syntax(src)?.try_map(&mut |lit| sys.parse_literal(&lit))
}

/// Parses and expands to a word.
pub fn parse_word<S: FactorSystem>(src: &str, sys: &S) -> Result<Word<S::Elem>> {
    Ok(expand(&parse(src, sys)?, sys))
}

/// Expands groups, inverses and commutators into a flat word.
pub fn expand<S: FactorSystem>(e: &Expr<S::Elem>, sys: &S) -> Word<S::Elem> {
    let mut out = Word::default();
    for t in &e.terms {
        let w = match t {
            Term::Atom {
                level,
                value,
                inverted,
            } => {
                let v = if *inverted {
                    sys.factor_inv(*level, value)
                } else {
                    value.clone()
                };
                Word::new(vec![Syllable::new(*level, v)])
            }
            Term::Commutator(a, b) => {
                let (a, b) = (expand(a, sys), expand(b, sys));
                a.concat(&b).concat(&a.inverse(sys)).concat(&b.inverse(sys))
            }
            Term::Group { inner, inverted } => {
                let w = expand(inner, sys);
                if *inverted {
                    w.inverse(sys)
                } else {
                    w
                }
            }
        };
        out = out.concat(&w);
    }
    out
}

/// Renders a word as an expression, e.g. `h1(2/5) h0(1)`. The empty word
/// renders as the identity atom `h0(<id>)`.
pub fn format_word<S: FactorSystem>(w: &Word<S::Elem>, sys: &S) -> String {
    if w.is_empty() {
        return format!("h0({})", sys.literal(&sys.factor_id(0)));
    }
    w.syllables
        .iter()
        .map(|s| format!("h{}({})", s.level, sys.literal(&s.elem)))
        .collect::<Vec<_>>()
        .join(" ")
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr<String>> {
        let mut terms = vec![self.term()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some('h' | '[' | '(') => terms.push(self.term()?),
                _ => break,
            }
        }
        Ok(Expr { terms })
    }

    fn term(&mut self) -> Result<Term<String>> {
        self.skip_ws();
        match self.peek() {
            Some('h') => {
                self.pos += 1;
                let level = self.nat()?;
                self.expect('(')?;
                let value = self.literal()?;
                let inverted = self.inverse_suffix()?;
                Ok(Term::Atom {
                    level,
                    value,
                    inverted,
                })
            }
            Some('[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(Term::Commutator(Box::new(a), Box::new(b)))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                let inverted = self.inverse_suffix()?;
                Ok(Term::Group {
                    inner: Box::new(inner),
                    inverted,
                })
            }
            Some(_) => Err(self.error("expected `h`, `[` or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn nat(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a level number after `h`"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::Syntax {
                pos: start,
                msg: "level number out of range".into(),
            })
    }

    /// Raw text up to the `)` balancing the already consumed `(`.
    fn literal(&mut self) -> Result<String> {
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => {
                    let lit = self.src[start..self.pos].trim().to_string();
                    self.pos += 1;
                    if lit.is_empty() {
                        return Err(Error::Syntax {
                            pos: start,
                            msg: "empty literal".into(),
                        });
                    }
                    return Ok(lit);
                }
                ')' => depth -= 1,
                _ => {}
            }
            self.pos += c.len_utf8();
        }
        Err(Error::Syntax {
            pos: start,
            msg: "unterminated literal".into(),
        })
    }

    fn inverse_suffix(&mut self) -> Result<bool> {
        if !self.eat('^') {
            return Ok(false);
        }
        self.expect('-')?;
        self.expect('1')?;
        Ok(true)
    }
}
