//! Line-oriented concrete syntax for knowledge bases and queries.
//!
//! ```text
//! # comment
//! SI <= Human
//! Human <~ some has_heart.LH
//! Quaker <~[1] Pacifist
//! nixon : RepQuaker
//! (nixon, dick) : knows
//! ```
//!
//! `not`, `some R.` and `only R.` bind tighter than `and`, which binds
//! tighter than `or`. Both binary connectives associate to the left.

use std::fmt;

use thiserror::Error;

use crate::model::{Axiom, Concept, DefeasibleCI, IndividualName, KnowledgeBase, RoleName};

/// 1-based line and column (columns count characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceLocation {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct ParseError {
    pub location: SourceLocation,
    pub message: String,
    pub expected: Vec<String>,
}

/// A value with the location of its first token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located<T> {
    pub location: SourceLocation,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u64),
    Top,
    Bot,
    Not,
    And,
    Or,
    Some,
    Only,
    Normal,
    Sub,
    DefSub,
    Colon,
    Comma,
    Dot,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(n) => format!("number `{n}`"),
            Tok::Top => "`Top`".into(),
            Tok::Bot => "`Bot`".into(),
            Tok::Not => "`not`".into(),
            Tok::And => "`and`".into(),
            Tok::Or => "`or`".into(),
            Tok::Some => "`some`".into(),
            Tok::Only => "`only`".into(),
            Tok::Normal => "`N`".into(),
            Tok::Sub => "`<=`".into(),
            Tok::DefSub => "`<~`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
        }
    }
}

/// Words that can never be used as names.
pub const KEYWORDS: [&str; 8] = ["Top", "Bot", "not", "and", "or", "some", "only", "N"];

/// True iff `s` is a legal concept, role or individual name.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&s)
}

struct LineLexer {
    line: usize,
    toks: Vec<(Tok, usize)>,
    /// Column used for "end of line" errors; always inside the line.
    eol_column: usize,
}

fn lex_line(line_no: usize, text: &str) -> Result<LineLexer, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut last_end = 0;
    let err = |col: usize, message: String, expected: Vec<String>| ParseError {
        location: SourceLocation {
            line: line_no,
            column: col,
        },
        message,
        expected,
    };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let single = match c {
            ':' => Some(Tok::Colon),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            _ => None,
        };
        if let Some(t) = single {
            toks.push((t, col));
            i += 1;
        } else if c == '<' {
            match chars.get(i + 1) {
                Some('=') => toks.push((Tok::Sub, col)),
                Some('~') => toks.push((Tok::DefSub, col)),
                _ => {
                    return Err(err(
                        col,
                        "expected `<=` or `<~` after `<`".into(),
                        vec!["`<=`".into(), "`<~`".into()],
                    ))
                }
            }
            i += 2;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits
                .parse::<u64>()
                .map_err(|_| err(col, format!("number `{digits}` is too large"), vec![]))?;
            toks.push((Tok::Number(n), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let t = match word.as_str() {
                "Top" => Tok::Top,
                "Bot" => Tok::Bot,
                "not" => Tok::Not,
                "and" => Tok::And,
                "or" => Tok::Or,
                "some" => Tok::Some,
                "only" => Tok::Only,
                "N" => Tok::Normal,
                _ => Tok::Ident(word),
            };
            toks.push((t, col));
        } else {
            return Err(err(col, format!("unexpected character `{c}`"), vec![]));
        }
        last_end = i;
    }
    let eol_column = (last_end + 1).min(chars.len()).max(1);
    Ok(LineLexer {
        line: line_no,
        toks,
        eol_column,
    })
}

struct Parser<'a> {
    lex: &'a LineLexer,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.lex.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.lex.toks.get(self.pos + offset).map(|(t, _)| t)
    }

    fn location(&self) -> SourceLocation {
        let column = self
            .lex
            .toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.lex.eol_column);
        SourceLocation {
            line: self.lex.line,
            column,
        }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of line".to_string(),
        };
        let message = if expected.is_empty() {
            format!("unexpected {found}")
        } else {
            format!("expected {}, found {found}", expected.join(" or "))
        };
        ParseError {
            location: self.location(),
            message,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.lex.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        let mut left = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let right = self.conjunction()?;
            left = Concept::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Concept, ParseError> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let right = self.unary()?;
            left = Concept::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Concept, ParseError> {
        match self.peek() {
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(Concept::Top)
            }
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(Concept::Bottom)
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident("concept name")?;
                Ok(Concept::atomic(name))
            }
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Concept::not(self.unary()?))
            }
            Some(Tok::Some) | Some(Tok::Only) => {
                let universal = self.bump() == Some(Tok::Only);
                let role = self.ident("role name")?;
                self.expect(Tok::Dot)?;
                let filler = self.unary()?;
                Ok(if universal {
                    Concept::forall(role, filler)
                } else {
                    Concept::exists(role, filler)
                })
            }
            Some(Tok::Normal) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let inner = self.concept()?;
                self.expect(Tok::RParen)?;
                Ok(Concept::normal(inner))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.concept()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.error(&["concept"])),
        }
    }

    fn axiom(&mut self, allow_defeasible: bool) -> Result<Axiom, ParseError> {
        // (a, b) : R
        if self.peek() == Some(&Tok::LParen)
            && matches!(self.peek_at(1), Some(Tok::Ident(_)))
            && self.peek_at(2) == Some(&Tok::Comma)
        {
            self.pos += 1;
            let subject = self.ident("individual name")?;
            self.expect(Tok::Comma)?;
            let object = self.ident("individual name")?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Colon)?;
            let role = self.ident("role name")?;
            return Ok(Axiom::RoleAssertion {
                subject: IndividualName::new(subject),
                object: IndividualName::new(object),
                role: RoleName::new(role),
            });
        }
        // a : C
        if matches!(self.peek(), Some(Tok::Ident(_))) && self.peek_at(1) == Some(&Tok::Colon) {
            let individual = self.ident("individual name")?;
            self.pos += 1;
            let concept = self.concept()?;
            return Ok(Axiom::ConceptAssertion {
                individual: IndividualName::new(individual),
                concept,
            });
        }
        let lhs = self.concept()?;
        match self.peek() {
            Some(Tok::Sub) => {
                self.pos += 1;
                let rhs = self.concept()?;
                Ok(Axiom::StrictCI { lhs, rhs })
            }
            Some(Tok::DefSub) if allow_defeasible => {
                self.pos += 1;
                let rank = if self.peek() == Some(&Tok::LBracket) {
                    self.pos += 1;
                    let n = match self.peek() {
                        Some(Tok::Number(n)) => *n,
                        _ => return Err(self.error(&["non-negative integer rank"])),
                    };
                    let rank = u32::try_from(n).map_err(|_| ParseError {
                        location: self.location(),
                        message: format!("rank {n} is too large"),
                        expected: vec![],
                    })?;
                    self.pos += 1;
                    self.expect(Tok::RBracket)?;
                    Some(rank)
                } else {
                    None
                };
                let rhs = self.concept()?;
                Ok(Axiom::DefeasibleCI(DefeasibleCI { lhs, rhs, rank }))
            }
            Some(Tok::DefSub) => Err(ParseError {
                location: self.location(),
                message: "defeasible inclusions are not allowed in queries".into(),
                expected: vec!["`<=`".into()],
            }),
            _ => {
                let expected: &[&str] = if allow_defeasible {
                    &["`<=`", "`<~`", "`and`", "`or`"]
                } else {
                    &["`<=`", "`and`", "`or`"]
                };
                Err(self.error(expected))
            }
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            Err(self.error(&["end of line"]))
        } else {
            Ok(())
        }
    }
}

fn parse_lines(source: &str, allow_defeasible: bool) -> Result<Vec<Located<Axiom>>, ParseError> {
    let mut out = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let lex = lex_line(idx + 1, line)?;
        if lex.toks.is_empty() {
            continue;
        }
        let mut p = Parser { lex: &lex, pos: 0 };
        let location = p.location();
        let value = p.axiom(allow_defeasible)?;
        p.finish()?;
        out.push(Located { location, value });
    }
    Ok(out)
}

/// Parses a knowledge base file, keeping the location of every axiom.
pub fn parse_document(source: &str) -> Result<Vec<Located<Axiom>>, ParseError> {
    parse_lines(source, true)
}

/// Parses a knowledge base. Duplicate axioms are accepted and collapsed.
pub fn parse_kb(source: &str) -> Result<KnowledgeBase, ParseError> {
    Ok(KnowledgeBase::from_axioms(
        parse_document(source)?.into_iter().map(|l| l.value),
    ))
}

/// Parses a single query: a strict inclusion or an assertion.
pub fn parse_query(source: &str) -> Result<Axiom, ParseError> {
    let mut queries = parse_queries(source)?;
    match queries.len() {
        1 => Ok(queries.remove(0).value),
        0 => Err(ParseError {
            location: SourceLocation { line: 1, column: 1 },
            message: "empty query".into(),
            expected: vec!["axiom".into()],
        }),
        _ => Err(ParseError {
            location: queries[1].location,
            message: "expected a single query".into(),
            expected: vec!["end of input".into()],
        }),
    }
}

/// Parses a query file: one query per line, `#` comments and blank lines allowed.
pub fn parse_queries(source: &str) -> Result<Vec<Located<Axiom>>, ParseError> {
    parse_lines(source, false)
}

/// Parses a single concept expression.
pub fn parse_concept(source: &str) -> Result<Concept, ParseError> {
    let lex = lex_line(1, source)?;
    let mut p = Parser { lex: &lex, pos: 0 };
    let c = p.concept()?;
    p.finish()?;
    Ok(c)
}

/// Output glyph set for the printer. Only [`Style::Ascii`] can be parsed back.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Style {
    #[default]
    Ascii,
    Unicode,
}

struct Glyphs {
    top: &'static str,
    bot: &'static str,
    not: &'static str,
    and: &'static str,
    or: &'static str,
    some: &'static str,
    only: &'static str,
    sub: &'static str,
    defsub: &'static str,
}

const ASCII: Glyphs = Glyphs {
    top: "Top",
    bot: "Bot",
    not: "not ",
    and: " and ",
    or: " or ",
    some: "some ",
    only: "only ",
    sub: " <= ",
    defsub: " <~",
};

const UNICODE: Glyphs = Glyphs {
    top: "⊤",
    bot: "⊥",
    not: "¬",
    and: " ⊓ ",
    or: " ⊔ ",
    some: "∃",
    only: "∀",
    sub: " ⊑ ",
    defsub: " ⊑ₙ",
};

impl Style {
    fn glyphs(self) -> &'static Glyphs {
        match self {
            Style::Ascii => &ASCII,
            Style::Unicode => &UNICODE,
        }
    }
}

fn is_binary(c: &Concept) -> bool {
    matches!(c, Concept::And(..) | Concept::Or(..))
}

fn write_concept(out: &mut String, c: &Concept, g: &Glyphs) {
    match c {
        Concept::Top => out.push_str(g.top),
        Concept::Bottom => out.push_str(g.bot),
        Concept::Atomic(n) => out.push_str(n.as_str()),
        Concept::Normal(inner) => {
            out.push_str("N(");
            write_concept(out, inner, g);
            out.push(')');
        }
        Concept::Not(inner) => {
            out.push_str(g.not);
            write_operand(out, inner, g, is_binary(inner));
        }
        Concept::Exists(r, inner) | Concept::Forall(r, inner) => {
            out.push_str(if matches!(c, Concept::Exists(..)) {
                g.some
            } else {
                g.only
            });
            out.push_str(r.as_str());
            out.push('.');
            write_operand(out, inner, g, is_binary(inner));
        }
        Concept::And(a, b) => {
            write_operand(out, a, g, matches!(**a, Concept::Or(..)));
            out.push_str(g.and);
            write_operand(out, b, g, is_binary(b));
        }
        Concept::Or(a, b) => {
            write_operand(out, a, g, matches!(**a, Concept::And(..)));
            out.push_str(g.or);
            write_operand(out, b, g, is_binary(b));
        }
    }
}

fn write_operand(out: &mut String, c: &Concept, g: &Glyphs, parens: bool) {
    if parens {
        out.push('(');
        write_concept(out, c, g);
        out.push(')');
    } else {
        write_concept(out, c, g);
    }
}

pub fn print_concept(c: &Concept) -> String {
    print_concept_with(c, Style::Ascii)
}

pub fn print_concept_with(c: &Concept, style: Style) -> String {
    let mut s = String::new();
    write_concept(&mut s, c, style.glyphs());
    s
}

/// Prints an axiom in the syntax accepted by [`parse_kb`].
pub fn print_axiom(a: &Axiom) -> String {
    print_axiom_with(a, Style::Ascii)
}

pub fn print_axiom_with(a: &Axiom, style: Style) -> String {
    let g = style.glyphs();
    let mut s = String::new();
    match a {
        Axiom::StrictCI { lhs, rhs } => {
            write_concept(&mut s, lhs, g);
            s.push_str(g.sub);
            write_concept(&mut s, rhs, g);
        }
        Axiom::DefeasibleCI(d) => {
            write_concept(&mut s, &d.lhs, g);
            s.push_str(g.defsub);
            if let Some(r) = d.rank {
                s.push_str(&format!("[{r}]"));
            }
            s.push(' ');
            write_concept(&mut s, &d.rhs, g);
        }
        Axiom::ConceptAssertion {
            individual,
            concept,
        } => {
            s.push_str(individual.as_str());
            s.push_str(" : ");
            write_concept(&mut s, concept, g);
        }
        Axiom::RoleAssertion {
            subject,
            object,
            role,
        } => {
            s.push_str(&format!("({subject}, {object}) : {role}"));
        }
    }
    s
}

/// Prints a whole knowledge base, strong part first.
pub fn print_kb(kb: &KnowledgeBase) -> String {
    let mut s = String::new();
    for a in kb.axioms() {
        s.push_str(&print_axiom(&a));
        s.push('\n');
    }
    s
}
