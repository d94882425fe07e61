//! Text syntax for posets.
//!
//! ```text
//! expr    := term ('|' term)*
//! term    := factor ('*' factor)*
//! factor  := atom ('(' expr (',' expr)* ')')? | '(' expr ')'
//! atom    := 'C' nat | 'A' nat | '{' relations '}' | name
//! ```
//!
//! `|` (or `⊔`) is disjoint union, `*` is ordinal sum (left below right);
//! both are left-associative and `*` binds tighter. Inside braces, items are
//! separated by commas and each item is a label or a chain such as `x<y>z<w`;
//! `a>b` means `b<a`. Arguments of `outer(...)` fill the slots of `outer` in
//! first-appearance order of its labels.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::poset::{hasse_literal, Poset};

/// Source position, 1-based. Positions never affect structural equality.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    ChainLit(usize),
    AntichainLit(usize),
    HasseLit {
        labels: Vec<String>,
        covers: Vec<(String, String)>,
        pos: Pos,
    },
    Union(Box<Expr>, Box<Expr>),
    OrdinalSum(Box<Expr>, Box<Expr>),
    LexApply {
        outer: Box<Expr>,
        args: Vec<Expr>,
        pos: Pos,
    },
    Var {
        name: String,
        pos: Pos,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {expected}, found {found}")]
    Syntax { expected: String, found: String },
    #[error("{outer} takes {expected} arguments, found {found}")]
    Arity {
        outer: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(pos: Pos, kind: ParseErrorKind) -> Self {
        ParseError {
            line: pos.line,
            col: pos.col,
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Pipe,
    Star,
    LParen,
    RParen,
    Comma,
    LBrace,
    RBrace,
    Less,
    Greater,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Star => f.write_str("`*`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Less => f.write_str("`<`"),
            Tok::Greater => f.write_str("`>`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if is_word_char(c) {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                if !is_word_char(c) {
                    break;
                }
                w.push(c);
                chars.next();
                col += 1;
            }
            out.push((Tok::Word(w), pos));
            continue;
        }
        let tok = match c {
            '|' | '⊔' => Tok::Pipe,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '<' => Tok::Less,
            '>' => Tok::Greater,
            other => {
                return Err(ParseError::at(
                    pos,
                    ParseErrorKind::Syntax {
                        expected: "an expression".into(),
                        found: format!("character `{other}`"),
                    },
                ))
            }
        };
        chars.next();
        col += 1;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::at(
            self.pos(),
            ParseErrorKind::Syntax {
                expected: expected.into(),
                found: self.peek().to_string(),
            },
        ))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&tok.to_string())
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.term()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let right = self.term()?;
            left = Expr::Union(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let right = self.factor()?;
            left = Expr::OrdinalSum(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let e = self.expr()?;
            self.expect(Tok::RParen)?;
            return Ok(e);
        }
        let atom = self.atom()?;
        if *self.peek() != Tok::LParen {
            return Ok(atom);
        }
        let pos = self.pos();
        self.bump();
        let mut args = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.expr()?);
        }
        if *self.peek() != Tok::RParen {
            return self.fail("`,` or `)`");
        }
        self.bump();
        Ok(Expr::LexApply {
            outer: Box::new(atom),
            args,
            pos,
        })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LBrace => {
                self.bump();
                self.relations(pos)
            }
            Tok::Word(w) => {
                let size = |prefix: char| {
                    w.strip_prefix(prefix)
                        .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
                        .and_then(|d| d.parse::<usize>().ok())
                };
                let e = if let Some(n) = size('C') {
                    Expr::ChainLit(n)
                } else if let Some(n) = size('A') {
                    Expr::AntichainLit(n)
                } else if w.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
                    && !w.contains('.')
                {
                    Expr::Var { name: w, pos }
                } else {
                    return self.fail("a literal (`C<n>`, `A<n>`, `{...}`) or a name");
                };
                self.bump();
                Ok(e)
            }
            _ => self.fail("a literal (`C<n>`, `A<n>`, `{...}`), a name or `(`"),
        }
    }

    fn label(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Word(w) => {
                self.bump();
                Ok(w)
            }
            _ => self.fail("a label"),
        }
    }

    fn relations(&mut self, pos: Pos) -> Result<Expr, ParseError> {
        let mut labels: Vec<String> = Vec::new();
        let mut covers = Vec::new();
        let note = |l: &String, labels: &mut Vec<String>| {
            if !labels.contains(l) {
                labels.push(l.clone());
            }
        };
        if *self.peek() == Tok::RBrace {
            self.bump();
            return Ok(Expr::HasseLit {
                labels,
                covers,
                pos,
            });
        }
        loop {
            let mut prev = self.label()?;
            note(&prev, &mut labels);
            loop {
                let less = match self.peek() {
                    Tok::Less => true,
                    Tok::Greater => false,
                    _ => break,
                };
                self.bump();
                let next = self.label()?;
                note(&next, &mut labels);
                if less {
                    covers.push((prev, next.clone()));
                } else {
                    covers.push((next.clone(), prev));
                }
                prev = next;
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBrace => {
                    self.bump();
                    return Ok(Expr::HasseLit {
                        labels,
                        covers,
                        pos,
                    });
                }
                _ => return self.fail("`<`, `>`, `,` or `}`"),
            }
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("`|`, `*` or end of input");
    }
    Ok(e)
}

/// Named posets available to expressions.
#[derive(Debug, Clone)]
pub struct Env {
    names: HashMap<String, Poset>,
}

impl Default for Env {
    /// `pt` (a point), `N` (`{x<y>z<w}`) and `star` (`C1 * (C1 | C1 | C1)`).
    fn default() -> Self {
        let n = Poset::zigzag();
        let star = Poset::chain(1).ordinal_sum(&Poset::antichain(3));
        let mut names = HashMap::new();
        names.insert("pt".to_string(), Poset::chain(1));
        names.insert("N".to_string(), n);
        names.insert("star".to_string(), star);
        Env { names }
    }
}

impl Env {
    pub fn empty() -> Self {
        Env {
            names: HashMap::new(),
        }
    }

    pub fn define(&mut self, name: impl Into<String>, p: Poset) {
        self.names.insert(name.into(), p);
    }

    pub fn get(&self, name: &str) -> Option<&Poset> {
        self.names.get(name)
    }
}

pub fn resolve(e: &Expr, env: &Env) -> Result<Poset, ParseError> {
    Ok(match e {
        Expr::ChainLit(n) => Poset::chain(*n),
        Expr::AntichainLit(n) => Poset::antichain(*n),
        Expr::HasseLit {
            labels,
            covers,
            pos,
        } => Poset::new(labels.clone(), covers.clone())
            .map_err(|err| ParseError::at(*pos, ParseErrorKind::InvalidPoset(err.to_string())))?,
        Expr::Union(a, b) => resolve(a, env)?.disjoint_union(&resolve(b, env)?),
        Expr::OrdinalSum(a, b) => resolve(a, env)?.ordinal_sum(&resolve(b, env)?),
        Expr::LexApply { outer, args, pos } => {
            let o = resolve(outer, env)?;
            if o.len() != args.len() {
                return Err(ParseError::at(
                    *pos,
                    ParseErrorKind::Arity {
                        outer: format_expr(outer),
                        expected: o.len(),
                        found: args.len(),
                    },
                ));
            }
            let inner = args
                .iter()
                .map(|a| resolve(a, env))
                .collect::<Result<Vec<_>, _>>()?;
            o.lex_sum(&inner).expect("arity checked")
        }
        Expr::Var { name, pos } => env
            .get(name)
            .cloned()
            .ok_or_else(|| ParseError::at(*pos, ParseErrorKind::UnknownName(name.clone())))?,
    })
}

/// Parses and resolves against the default environment.
pub fn parse_poset(text: &str) -> Result<Poset, ParseError> {
    resolve(&parse_expr(text)?, &Env::default())
}

pub fn format_expr(e: &Expr) -> String {
    match e {
        Expr::ChainLit(n) => format!("C{n}"),
        Expr::AntichainLit(n) => format!("A{n}"),
        Expr::HasseLit { labels, covers, .. } => {
            let index = |l: &String| labels.iter().position(|x| x == l).expect("label listed");
            let covers: Vec<(usize, usize)> =
                covers.iter().map(|(a, b)| (index(a), index(b))).collect();
            hasse_literal(labels, &covers)
        }
        Expr::Union(a, b) => format!("({} | {})", format_expr(a), format_expr(b)),
        Expr::OrdinalSum(a, b) => format!("({} * {})", format_expr(a), format_expr(b)),
        Expr::LexApply { outer, args, .. } => {
            let args: Vec<String> = args.iter().map(format_expr).collect();
            format!("{}({})", format_expr(outer), args.join(", "))
        }
        Expr::Var { name, .. } => name.clone(),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_expr(self))
    }
}
