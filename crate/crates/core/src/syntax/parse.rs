//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula  := iff
//! iff      := imp ("<->" imp)*
//! imp      := or ("->" imp)?
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := ("~" | "G" | "H" | "F" | "P" | "box" | "dia") unary
//!           | ("forall" | "exists") var "." formula
//!           | "(" formula ")" | atom
//! atom     := pred "(" terms? ")" | term "=" term
//! term     := product ("+" product)*
//! product  := primary ("*" primary)*
//! primary  := "(" term ")" | name "(" terms ")" | name | numeral
//! ```

use std::collections::BTreeSet;

use super::signature::SymbolKind;
use super::{Formula, Signature, SyntaxError, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Equals,
    Plus,
    Star,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Num(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
        }
    }
}

const KEYWORDS: &[&str] = &["G", "H", "F", "P", "box", "dia", "forall", "exists"];

pub fn is_keyword(name: &str) -> bool {
    KEYWORDS.contains(&name)
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'=' => Tok::Equals,
            b'+' => Tok::Plus,
            b'*' => Tok::Star,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::DArrow
            }
            c if c.is_ascii_digit() => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num(src[start..=i].to_string())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(src[start..=i].to_string())
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(SyntaxError::Parse {
                    pos: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

enum Mode<'s> {
    Strict(&'s Signature),
    Infer {
        sig: Signature,
        constants: BTreeSet<String>,
    },
}

struct Parser<'s> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    mode: Mode<'s>,
}

type PResult<T> = Result<T, SyntaxError>;

impl<'s> Parser<'s> {
    fn new(src: &str, mode: Mode<'s>) -> PResult<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            end: src.len(),
            mode,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(SyntaxError::Parse {
            pos: self.offset(),
            message: message.into(),
        })
    }

    fn found(&self) -> String {
        self.peek().map_or("end of input".into(), Tok::describe)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.found()))
        }
    }

    fn kind(&self, name: &str) -> Option<SymbolKind> {
        match &self.mode {
            Mode::Strict(sig) => sig.kind(name),
            Mode::Infer { sig, constants } => {
                if constants.contains(name) {
                    Some(SymbolKind::Constant)
                } else {
                    sig.kind(name)
                }
            }
        }
    }

    fn declare(&mut self, name: &str, kind: SymbolKind, at: usize) -> PResult<()> {
        let result = match &mut self.mode {
            Mode::Strict(sig) => match (sig.kind(name), kind) {
                (None, _) => Err(SyntaxError::UnknownSymbol(name.to_string())),
                (Some(k), _) if k == kind => Ok(()),
                (Some(SymbolKind::Function(e)), SymbolKind::Function(f))
                | (Some(SymbolKind::Predicate(e)), SymbolKind::Predicate(f)) => {
                    Err(SyntaxError::ArityMismatch {
                        symbol: name.to_string(),
                        expected: e,
                        found: f,
                    })
                }
                (Some(_), _) => Err(SyntaxError::SymbolClash(name.to_string())),
            },
            Mode::Infer { sig, .. } => sig.declare(name, kind),
        };
        result.map_err(|e| SyntaxError::At {
            pos: at,
            source: Box::new(e),
        })
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::DArrow) {
            let rhs = self.implication()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.conjunction()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Tilde) {
            return Ok(self.unary()?.not());
        }
        if let Some(Tok::Ident(word)) = self.peek() {
            let word = word.clone();
            let op: Option<fn(Formula) -> Formula> = match word.as_str() {
                "G" => Some(Formula::g),
                "H" => Some(Formula::h),
                "F" => Some(Formula::f),
                "P" => Some(Formula::p),
                "box" => Some(Formula::always),
                "dia" => Some(Formula::sometime),
                _ => None,
            };
            if let Some(op) = op {
                self.pos += 1;
                return Ok(op(self.unary()?));
            }
            if word == "forall" || word == "exists" {
                self.pos += 1;
                let var = self.binder()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                return Ok(if word == "forall" {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                });
            }
        }
        self.primary()
    }

    fn binder(&mut self) -> PResult<String> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) if !is_keyword(&name) => {
                if self.kind(&name).is_some() {
                    return self.error(format!("`{name}` is a symbol and cannot be bound"));
                }
                self.pos += 1;
                Ok(name)
            }
            _ => self.error(format!("expected a variable, found {}", self.found())),
        }
    }

    fn primary(&mut self) -> PResult<Formula> {
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            self.pos += 1;
            let first = self
                .formula()
                .and_then(|f| self.expect(Tok::RParen).map(|_| f));
            match first {
                Ok(f) => return Ok(f),
                Err(e1) => {
                    self.pos = save;
                    return self.equation().map_err(|e2| furthest(e1, e2));
                }
            }
        }
        if let (Some(Tok::Ident(name)), Some(Tok::LParen)) = (self.peek(), self.peek_at(1)) {
            let name = name.clone();
            if is_keyword(&name) {
                return self.error(format!("unexpected keyword `{name}`"));
            }
            let is_pred = match self.kind(&name) {
                Some(SymbolKind::Predicate(_)) => true,
                Some(_) => false,
                None => match self.mode {
                    Mode::Strict(_) => {
                        return Err(SyntaxError::At {
                            pos: self.offset(),
                            source: Box::new(SyntaxError::UnknownSymbol(name)),
                        })
                    }
                    Mode::Infer { .. } => !matches!(
                        self.after_matching_paren(self.pos + 1),
                        Some(Tok::Equals | Tok::Plus | Tok::Star)
                    ),
                },
            };
            if is_pred {
                let at = self.offset();
                self.pos += 2;
                let args = self.term_list()?;
                self.declare(&name, SymbolKind::Predicate(args.len()), at)?;
                return Ok(Formula::pred(name, args));
            }
        }
        self.equation()
    }

    fn after_matching_paren(&self, open: usize) -> Option<&Tok> {
        let mut depth = 0usize;
        for (i, (_, t)) in self.toks.iter().enumerate().skip(open) {
            match t {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return self.toks.get(i + 1).map(|(_, t)| t);
                    }
                }
                _ => {}
            }
        }
        None
    }

    fn equation(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        if !self.eat(&Tok::Equals) {
            return self.error(format!(
                "expected a formula: a term must be followed by `=`, found {}",
                self.found()
            ));
        }
        let rhs = self.term()?;
        Ok(Formula::eq(lhs, rhs))
    }

    /// Comma-separated terms up to and including the closing parenthesis.
    fn term_list(&mut self) -> PResult<Vec<Term>> {
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(Tok::Comma)?;
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.product()?;
        loop {
            let at = self.offset();
            if !self.eat(&Tok::Plus) {
                return Ok(lhs);
            }
            let rhs = self.product()?;
            self.declare("+", SymbolKind::Function(2), at)?;
            lhs = lhs.plus(rhs);
        }
    }

    fn product(&mut self) -> PResult<Term> {
        let mut lhs = self.term_primary()?;
        loop {
            let at = self.offset();
            if !self.eat(&Tok::Star) {
                return Ok(lhs);
            }
            let rhs = self.term_primary()?;
            self.declare("*", SymbolKind::Function(2), at)?;
            lhs = lhs.times(rhs);
        }
    }

    fn term_primary(&mut self) -> PResult<Term> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if let Mode::Infer { constants, .. } = &mut self.mode {
                    constants.insert(n.clone());
                }
                self.declare(&n, SymbolKind::Constant, at)?;
                Ok(Term::Const(n))
            }
            Some(Tok::Ident(name)) if !is_keyword(&name) => {
                self.pos += 1;
                if self.eat(&Tok::LParen) {
                    let args = self.term_list()?;
                    if let Some(SymbolKind::Predicate(_)) = self.kind(&name) {
                        return Err(SyntaxError::At {
                            pos: at,
                            source: Box::new(SyntaxError::SymbolClash(name)),
                        });
                    }
                    if args.is_empty() {
                        return Err(SyntaxError::At {
                            pos: at,
                            source: Box::new(SyntaxError::ArityMismatch {
                                symbol: name,
                                expected: 1,
                                found: 0,
                            }),
                        });
                    }
                    self.declare(&name, SymbolKind::Function(args.len()), at)?;
                    return Ok(Term::App(name, args));
                }
                match self.kind(&name) {
                    Some(SymbolKind::Constant) => {
                        self.declare(&name, SymbolKind::Constant, at)?;
                        Ok(Term::Const(name))
                    }
                    Some(SymbolKind::Function(a)) => Err(SyntaxError::At {
                        pos: at,
                        source: Box::new(SyntaxError::ArityMismatch {
                            symbol: name,
                            expected: a,
                            found: 0,
                        }),
                    }),
                    Some(SymbolKind::Predicate(_)) => Err(SyntaxError::At {
                        pos: at,
                        source: Box::new(SyntaxError::SymbolClash(name)),
                    }),
                    None => Ok(Term::Var(name)),
                }
            }
            _ => self.error(format!("expected a term, found {}", self.found())),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.pos < self.toks.len() {
            self.error(format!("unexpected {} after formula", self.found()))
        } else {
            Ok(())
        }
    }
}

fn furthest(a: SyntaxError, b: SyntaxError) -> SyntaxError {
    if b.position() >= a.position() {
        b
    } else {
        a
    }
}

/// Parse `text` against a fixed signature. Bare names that are not declared
/// constants are variables.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, Mode::Strict(sig))?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parse `text`, inferring the signature from use. Bare names are variables
/// unless listed in `constants`; numerals are always constants.
pub fn parse_formula_infer(
    text: &str,
    constants: &[&str],
) -> Result<(Formula, Signature), SyntaxError> {
    let mut sig = Signature::new();
    let f = parse_formula_with(text, constants, &mut sig)?;
    Ok((f, sig))
}

/// Like [`parse_formula_infer`], extending an existing signature so several
/// formulas can share one.
pub fn parse_formula_with(
    text: &str,
    constants: &[&str],
    sig: &mut Signature,
) -> Result<Formula, SyntaxError> {
    let mut consts: BTreeSet<String> = constants.iter().map(|s| s.to_string()).collect();
    consts.extend(sig.constants.iter().cloned());
    let mut p = Parser::new(
        text,
        Mode::Infer {
            sig: sig.clone(),
            constants: consts,
        },
    )?;
    let f = p.formula()?;
    p.finish()?;
    if let Mode::Infer { sig: inferred, .. } = p.mode {
        *sig = inferred;
    }
    Ok(f)
}

/// Parse a standalone term against a signature.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text, Mode::Strict(sig))?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parse a standalone term, extending `sig` with the symbols it uses.
pub fn parse_term_with(
    text: &str,
    constants: &[&str],
    sig: &mut Signature,
) -> Result<Term, SyntaxError> {
    let mut consts: BTreeSet<String> = constants.iter().map(|s| s.to_string()).collect();
    consts.extend(sig.constants.iter().cloned());
    let mut p = Parser::new(
        text,
        Mode::Infer {
            sig: sig.clone(),
            constants: consts,
        },
    )?;
    let t = p.term()?;
    p.finish()?;
    if let Mode::Infer { sig: inferred, .. } = p.mode {
        *sig = inferred;
    }
    Ok(t)
}
