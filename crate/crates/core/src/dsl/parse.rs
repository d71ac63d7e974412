use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::calculus::{ConnectiveSpec, Formula, Item, Provenance, RuleScheme, Sequent, Side};

/// Largest supported arity.
pub const MAX_ARITY: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: connective {connective} has arity {arity}; supported arities are 1..={MAX_ARITY}")]
    Arity { span: SourceSpan, connective: String, arity: usize },
    #[error("{span}: duplicate rule name \"{name}\" in {connective}")]
    DuplicateRuleName { span: SourceSpan, connective: String, name: String },
    #[error("{span}: rule \"{rule}\" has {count} principal formulas in its conclusion")]
    MultiPrincipal { span: SourceSpan, rule: String, count: usize },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::Arity { span, .. }
            | ParseError::DuplicateRuleName { span, .. }
            | ParseError::MultiPrincipal { span, .. } => *span,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    Turnstile,
    Arrow,
    Star,
    Dot,
    Comma,
    Semi,
    Colon,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Str(s) => write!(f, "string \"{s}\""),
            Tok::Turnstile => f.write_str("`|-`"),
            Tok::Arrow => f.write_str("`=>`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&(start, c)) = chars.peek() {
        let span_at = |end: usize, line, col| SourceSpan { line, column: col, start, end };
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
        if c == '#' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        let (tok, len_chars, end) = if is_ident_start(c) {
            let mut s = String::new();
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if !is_ident_char(c) {
                    break;
                }
                s.push(c);
                end = i + c.len_utf8();
                chars.next();
            }
            let n = s.chars().count();
            (Tok::Ident(s), n, end)
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            let mut n = 1;
            let mut end = None;
            for (i, c) in chars.by_ref() {
                n += 1;
                if c == '"' {
                    end = Some(i + 1);
                    break;
                }
                if c == '\n' {
                    break;
                }
                s.push(c);
            }
            let Some(end) = end else {
                return Err(ParseError::Syntax {
                    span: span_at(start + 1, line, col),
                    message: "unterminated string".into(),
                });
            };
            if s.is_empty() {
                return Err(ParseError::Syntax { span: span_at(end, line, col), message: "empty rule name".into() });
            }
            (Tok::Str(s), n, end)
        } else {
            chars.next();
            let two = |chars: &mut std::iter::Peekable<std::str::CharIndices>, want: char| {
                if chars.peek().map(|&(_, c)| c) == Some(want) {
                    chars.next();
                    true
                } else {
                    false
                }
            };
            let simple = |t: Tok| (t, 1, start + 1);
            match c {
                '|' if two(&mut chars, '-') => (Tok::Turnstile, 2, start + 2),
                '=' if two(&mut chars, '>') => (Tok::Arrow, 2, start + 2),
                '*' => simple(Tok::Star),
                '.' => simple(Tok::Dot),
                ',' => simple(Tok::Comma),
                ';' => simple(Tok::Semi),
                ':' => simple(Tok::Colon),
                '(' => simple(Tok::LParen),
                ')' => simple(Tok::RParen),
                '{' => simple(Tok::LBrace),
                '}' => simple(Tok::RBrace),
                '[' => simple(Tok::LBrack),
                ']' => simple(Tok::RBrack),
                other => {
                    return Err(ParseError::Syntax {
                        span: span_at(start + other.len_utf8(), line, col),
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        out.push((tok, span_at(end, line, col)));
        col += len_chars;
    }
    let end = text.len();
    out.push((Tok::Eof, SourceSpan { line, column: col, start: end, end: end + 1 }));
    Ok(out)
}

/// Raw sequent side entry before classification.
enum Raw {
    Star,
    Ident(String),
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { span: self.span(), message: message.into() })
    }

    fn expect(&mut self, want: Tok) -> Result<SourceSpan, ParseError> {
        if *self.peek() == want {
            Ok(self.bump().1)
        } else {
            self.err(format!("expected {want}, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let sp = self.bump().1;
                Ok((s, sp))
            }
            other => self.err(format!("expected identifier, found {other}")),
        }
    }

    fn connective(&mut self) -> Result<ConnectiveSpec, ParseError> {
        match self.peek() {
            Tok::Ident(k) if k == "connective" => {
                self.bump();
            }
            other => return self.err(format!("expected `connective`, found {other}")),
        }
        let (name, name_span) = self.ident()?;
        self.expect(Tok::LParen)?;
        let mut args: Vec<String> = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                let (a, sp) = self.ident()?;
                if args.contains(&a) || a == name {
                    return Err(ParseError::Syntax { span: sp, message: format!("argument `{a}` declared twice") });
                }
                args.push(a);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        if args.is_empty() || args.len() > MAX_ARITY {
            return Err(ParseError::Arity { span: name_span, connective: name, arity: args.len() });
        }
        self.expect(Tok::LBrace)?;
        let mut spec = ConnectiveSpec::new(name, args, Vec::new(), Provenance::Parsed);
        while *self.peek() != Tok::RBrace {
            let rule = self.rule(&spec)?;
            spec.rules.push(rule);
        }
        self.expect(Tok::RBrace)?;
        Ok(spec)
    }

    fn rule(&mut self, spec: &ConnectiveSpec) -> Result<RuleScheme, ParseError> {
        let side = match self.peek() {
            Tok::Ident(k) if k == "left" => Side::Left,
            Tok::Ident(k) if k == "right" => Side::Right,
            other => return self.err(format!("expected `left`, `right` or `}}`, found {other}")),
        };
        let rule_span = self.bump().1;
        let name = match self.bump() {
            (Tok::Str(s), _) => s,
            (other, span) => {
                return Err(ParseError::Syntax { span, message: format!("expected quoted rule name, found {other}") })
            }
        };
        if spec.rule(&name).is_some() {
            return Err(ParseError::DuplicateRuleName { span: rule_span, connective: spec.name.clone(), name });
        }
        self.expect(Tok::Colon)?;
        self.expect(Tok::LBrack)?;
        let mut premises = Vec::new();
        if *self.peek() != Tok::RBrack {
            loop {
                let sp = self.span();
                let (ant, suc) = self.sequent()?;
                if ant.iter().chain(&suc).any(|r| matches!(r, Raw::Star)) {
                    return Err(ParseError::Syntax {
                        span: sp,
                        message: format!("rule \"{name}\": the principal formula `*` cannot occur in a premise"),
                    });
                }
                premises.push(self.build(spec, ant, suc, sp)?);
                if *self.peek() == Tok::Semi {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrack)?;
        self.expect(Tok::Arrow)?;
        let concl_span = self.span();
        let (ant, suc) = self.sequent()?;
        let stars_l = ant.iter().filter(|r| matches!(r, Raw::Star)).count();
        let stars_r = suc.iter().filter(|r| matches!(r, Raw::Star)).count();
        match stars_l + stars_r {
            0 => {
                return Err(ParseError::Syntax {
                    span: concl_span,
                    message: format!("rule \"{name}\": conclusion has no principal formula `*`"),
                })
            }
            1 => {}
            count => return Err(ParseError::MultiPrincipal { span: concl_span, rule: name, count }),
        }
        let actual = if stars_l == 1 { Side::Left } else { Side::Right };
        if actual != side {
            return Err(ParseError::Syntax {
                span: rule_span,
                message: format!("rule \"{name}\" is declared {side} but its principal formula is on the {actual}"),
            });
        }
        let conclusion = self.build(spec, ant, suc, concl_span)?;
        self.expect(Tok::Semi)?;
        Ok(RuleScheme::new(name, side, premises, conclusion))
    }

    fn sequent(&mut self) -> Result<(Vec<Raw>, Vec<Raw>), ParseError> {
        let ant = self.side()?;
        self.expect(Tok::Turnstile)?;
        let suc = self.side()?;
        Ok((ant, suc))
    }

    fn side(&mut self) -> Result<Vec<Raw>, ParseError> {
        if *self.peek() == Tok::Dot {
            self.bump();
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Star => {
                    self.bump();
                    out.push(Raw::Star);
                }
                Tok::Ident(s) => {
                    self.bump();
                    out.push(Raw::Ident(s));
                }
                other => return self.err(format!("expected `*`, an identifier or `.`, found {other}")),
            }
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    fn build(&self, spec: &ConnectiveSpec, ant: Vec<Raw>, suc: Vec<Raw>, span: SourceSpan) -> Result<Sequent, ParseError> {
        let conv = |raw: Vec<Raw>| -> Result<Vec<Item>, ParseError> {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for r in raw {
                match r {
                    Raw::Star => out.push(Item::Formula(spec.principal())),
                    Raw::Ident(s) => match spec.args.iter().position(|a| *a == s) {
                        Some(i) => out.push(Item::Formula(Formula::meta(i + 1, s))),
                        None => {
                            if !seen.insert(s.clone()) {
                                return Err(ParseError::Syntax {
                                    span,
                                    message: format!("context `{s}` occurs twice on one side"),
                                });
                            }
                            out.push(Item::ctx(s));
                        }
                    },
                }
            }
            Ok(out)
        };
        Ok(Sequent::new(conv(ant)?, conv(suc)?))
    }
}

/// Parses every `connective` block in `text`.
pub fn parse_spec(text: &str) -> Result<Vec<ConnectiveSpec>, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let mut out: Vec<ConnectiveSpec> = Vec::new();
    while *p.peek() != Tok::Eof {
        let span = p.span();
        let spec = p.connective()?;
        if out.iter().any(|s| s.name == spec.name) {
            return Err(ParseError::Syntax { span, message: format!("connective {} defined twice", spec.name) });
        }
        out.push(spec);
    }
    Ok(out)
}
