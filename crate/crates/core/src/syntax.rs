//! Text grammar, parser and pretty-printer for binding terms.
//!
//! Concrete syntax, one line per sort:
//!   quantities  `0 1 u v w u3 + * - inv(p) sign(p) num(k) cnum(k)
//!                sum[n] u . p  prod[n] u . p`
//!   processes   `delta eps a a(p,...) + . || |_ | encap{a,b}(P)
//!                [p] -> P term(P) chc[n] u . P seqc[n] u . P parc[n] u . P`
//!   sequences   `<> <P> ++ conc[n] u . S scond(p, S) Alt(S) Seq(S) Par(S)`
//!
//! `+` binds weakest, the merge operators bind tighter, and `.`/`*` bind
//! tightest. `a - b` and `a / b` are accepted as sugar for `a + (-b)` and
//! `a * inv(b)`. `num(k)` and `cnum(k)` expand to numerals at parse time.
//! `#` starts a line comment.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::extensions::FeatureSet;
use crate::terms::{sort_check, BinderKind, Pool, Term, TermError, VarName};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl From<TermError> for ParseError {
    fn from(e: TermError) -> ParseError {
        ParseError {
            message: e.to_string(),
            line: 0,
            col: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Dot,
    ParPar,    // ||
    LMerge,    // |_
    CMerge,    // |
    Arrow,     // ->
    PlusPlus,  // ++
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Lt,
    Gt,
    EmptySeq, // <>
    Comma,
}

#[derive(Debug, Clone)]
struct SpannedTok {
    tok: Tok,
    line: u32,
    col: u32,
}

fn lex(text: &str) -> Result<Vec<SpannedTok>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1u32;
    let mut col = 1u32;
    macro_rules! push {
        ($t:expr, $c:expr) => {
            toks.push(SpannedTok {
                tok: $t,
                line,
                col: $c,
            })
        };
    }
    while let Some(&c) = chars.peek() {
        let start_col = col;
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(u64::from(v)))
                            .ok_or(ParseError {
                                message: "integer literal too large".to_string(),
                                line,
                                col: start_col,
                            })?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Int(n), start_col);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Ident(s), start_col);
            }
            _ => {
                chars.next();
                col += 1;
                let tok = match c {
                    '+' => {
                        if chars.peek() == Some(&'+') {
                            chars.next();
                            col += 1;
                            Tok::PlusPlus
                        } else {
                            Tok::Plus
                        }
                    }
                    '-' => {
                        if chars.peek() == Some(&'>') {
                            chars.next();
                            col += 1;
                            Tok::Arrow
                        } else {
                            Tok::Minus
                        }
                    }
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '.' => Tok::Dot,
                    '|' => match chars.peek() {
                        Some(&'|') => {
                            chars.next();
                            col += 1;
                            Tok::ParPar
                        }
                        Some(&'_') => {
                            chars.next();
                            col += 1;
                            Tok::LMerge
                        }
                        _ => Tok::CMerge,
                    },
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '<' => {
                        if chars.peek() == Some(&'>') {
                            chars.next();
                            col += 1;
                            Tok::EmptySeq
                        } else {
                            Tok::Lt
                        }
                    }
                    '>' => Tok::Gt,
                    ',' => Tok::Comma,
                    other => {
                        return Err(ParseError {
                            message: format!("unexpected character '{other}'"),
                            line,
                            col: start_col,
                        })
                    }
                };
                push!(tok, start_col);
            }
        }
    }
    Ok(toks)
}

const RESERVED: &[&str] = &[
    "sum", "prod", "chc", "seqc", "parc", "conc", "delta", "eps", "encap", "term", "inv", "sign",
    "num", "cnum", "scond", "Alt", "Seq", "Par",
];

/// Returns the variable a bare identifier denotes, if any.
fn var_of_ident(s: &str) -> Option<VarName> {
    let (pool, base) = match s.chars().next()? {
        'u' => (Pool::U, 0),
        'v' => (Pool::U, 1),
        'w' => (Pool::U, 2),
        'x' => (Pool::X, 0),
        'y' => (Pool::X, 1),
        'z' => (Pool::X, 2),
        's' => (Pool::V, 0),
        _ => return None,
    };
    let rest = &s[1..];
    if rest.is_empty() {
        return Some(VarName { pool, index: base });
    }
    // indexed forms exist only on the pool's base letter: u<i>, x<i>, s<i>
    if base != 0 {
        return None;
    }
    rest.parse::<u32>().ok().map(|index| VarName { pool, index })
}

/// Validates that an alphabet label cannot collide with reserved words or
/// variable spellings.
pub fn validate_label(label: &str) -> Result<(), String> {
    if label.is_empty()
        || !label.chars().next().unwrap().is_ascii_alphabetic()
        || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
    {
        return Err(format!("invalid action label '{label}'"));
    }
    if RESERVED.contains(&label) {
        return Err(format!("action label '{label}' is a reserved word"));
    }
    if var_of_ident(label).is_some() {
        return Err(format!("action label '{label}' collides with a variable name"));
    }
    if label == "delta" || label == "eps" {
        return Err(format!("action label '{label}' is reserved"));
    }
    Ok(())
}

struct Parser<'a> {
    toks: Vec<SpannedTok>,
    pos: usize,
    alphabet: &'a BTreeSet<String>,
    features: FeatureSet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (u32, u32) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError {
            message: message.into(),
            line,
            col,
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn need_eps(&self, what: &str) -> Result<(), ParseError> {
        if self.features.epsilon_enabled() {
            Ok(())
        } else {
            Err(self.err(format!("{what} requires the epsilon feature")))
        }
    }

    fn need_seq(&self, what: &str) -> Result<(), ParseError> {
        if self.features.sequences_enabled() {
            Ok(())
        } else {
            Err(self.err(format!("{what} requires the sequences feature")))
        }
    }

    // expr1 := expr2 ((+|-) expr2)*
    fn expr1(&mut self) -> Result<Term, ParseError> {
        let mut t = self.expr2()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.expr2()?;
                    // sort is resolved later; build Alt for processes and
                    // Add for quantities once checked -- here we pick by a
                    // light syntactic probe and let sort_check verify
                    t = mixed_plus(t, rhs);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.expr2()?;
                    t = Term::sub(t, rhs);
                }
                Some(Tok::PlusPlus) => {
                    self.need_seq("'++'")?;
                    self.pos += 1;
                    let rhs = self.expr2()?;
                    t = Term::concat(t, rhs);
                }
                _ => return Ok(t),
            }
        }
    }

    // expr2 := expr3 ((`||`|`|_`|`|`) expr3)*
    fn expr2(&mut self) -> Result<Term, ParseError> {
        let mut t = self.expr3()?;
        loop {
            let op = match self.peek() {
                Some(Tok::ParPar) => Term::parc,
                Some(Tok::LMerge) => Term::left_merge,
                Some(Tok::CMerge) => Term::comm_merge,
                _ => return Ok(t),
            };
            self.pos += 1;
            let rhs = self.expr3()?;
            t = op(t, rhs);
        }
    }

    // expr3 := expr4 ((`.`|`*`|`/`) expr4)*
    fn expr3(&mut self) -> Result<Term, ParseError> {
        let mut t = self.expr4()?;
        loop {
            match self.peek() {
                Some(Tok::Dot) => {
                    self.pos += 1;
                    let rhs = self.expr4()?;
                    t = Term::seqc(t, rhs);
                }
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.expr4()?;
                    t = Term::mul(t, rhs);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.expr4()?;
                    t = Term::div(t, rhs);
                }
                _ => return Ok(t),
            }
        }
    }

    // expr4 := `-` expr4 | `[` expr1 `]` `->` expr4 | binder | primary
    fn expr4(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Term::neg(self.expr4()?))
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let q = self.expr1()?;
                self.expect(Tok::RBracket, "']'")?;
                self.expect(Tok::Arrow, "'->'")?;
                let p = self.expr4()?;
                Ok(Term::guard(q, p))
            }
            Some(Tok::Ident(s)) if binder_kind(s).is_some() => {
                let kind = binder_kind(s).unwrap();
                if kind == BinderKind::Conc {
                    self.need_seq("'conc'")?;
                }
                self.pos += 1;
                self.expect(Tok::LBracket, "'['")?;
                let n = match self.next() {
                    Some(Tok::Int(n)) if n >= 1 && n <= u64::from(u32::MAX) => n as u32,
                    _ => return Err(self.err("expected positive binder range")),
                };
                self.expect(Tok::RBracket, "']'")?;
                let var = match self.next() {
                    Some(Tok::Ident(s)) => match var_of_ident(&s) {
                        Some(v) if v.pool == Pool::U => v,
                        _ => return Err(self.err("binder variable must be a quantity variable")),
                    },
                    _ => return Err(self.err("expected binder variable")),
                };
                self.expect(Tok::Dot, "'.'")?;
                let body = self.expr1()?;
                Ok(Term::binder(kind, n, var, body))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        match self.next() {
            Some(Tok::Int(0)) => Ok(Term::Zero),
            Some(Tok::Int(1)) => Ok(Term::One),
            Some(Tok::Int(_)) => {
                self.pos -= 1;
                Err(self.err("numerals other than 0 and 1 must be written num(k) or cnum(k)"))
            }
            Some(Tok::LParen) => {
                let t = self.expr1()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            Some(Tok::EmptySeq) => {
                self.need_seq("'<>'")?;
                Ok(Term::EmptySeq)
            }
            Some(Tok::Lt) => {
                self.need_seq("'<...>'")?;
                let p = self.expr1()?;
                self.expect(Tok::Gt, "'>'")?;
                Ok(Term::single(p))
            }
            Some(Tok::Ident(s)) => self.ident(&s),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err("expected a term"))
            }
        }
    }

    fn ident(&mut self, s: &str) -> Result<Term, ParseError> {
        match s {
            "delta" => Ok(Term::Delta),
            "eps" => {
                self.need_eps("'eps'")?;
                Ok(Term::Eps)
            }
            "inv" => Ok(Term::minv(self.parens1()?)),
            "sign" => Ok(Term::sign(self.parens1()?)),
            "term" => {
                self.need_eps("'term'")?;
                Ok(Term::termi(self.parens1()?))
            }
            "Alt" => {
                self.need_seq("'Alt'")?;
                Ok(Term::gen_alt(self.parens1()?))
            }
            "Seq" => {
                self.need_seq("'Seq'")?;
                Ok(Term::gen_seq(self.parens1()?))
            }
            "Par" => {
                self.need_seq("'Par'")?;
                Ok(Term::gen_par(self.parens1()?))
            }
            "num" | "cnum" => {
                self.expect(Tok::LParen, "'('")?;
                let k = match self.next() {
                    Some(Tok::Int(k)) => k,
                    _ => return Err(self.err("expected a natural number")),
                };
                self.expect(Tok::RParen, "')'")?;
                Ok(if s == "num" {
                    crate::terms::unary_numeral(k)
                } else {
                    crate::terms::compact_numeral(k)
                })
            }
            "scond" => {
                self.need_seq("'scond'")?;
                self.expect(Tok::LParen, "'('")?;
                let q = self.expr1()?;
                self.expect(Tok::Comma, "','")?;
                let body = self.expr1()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Term::seq_cond(q, body))
            }
            "encap" => {
                self.expect(Tok::LBrace, "'{'")?;
                let mut labels = BTreeSet::new();
                if self.peek() != Some(&Tok::RBrace) {
                    loop {
                        match self.next() {
                            Some(Tok::Ident(l)) if self.alphabet.contains(&l) => {
                                labels.insert(l);
                            }
                            _ => return Err(self.err("expected an action label")),
                        }
                        match self.peek() {
                            Some(Tok::Comma) => {
                                self.pos += 1;
                            }
                            _ => break,
                        }
                    }
                }
                self.expect(Tok::RBrace, "'}'")?;
                let body = self.parens1()?;
                Ok(Term::Encap(labels, Box::new(body)))
            }
            _ => {
                if let Some(v) = var_of_ident(s) {
                    return Ok(match v.pool {
                        Pool::U => Term::QVar(v),
                        Pool::X => Term::PVar(v),
                        Pool::V => {
                            self.need_seq("sequence variables")?;
                            Term::SVar(v)
                        }
                        Pool::XPrime => unreachable!(),
                    });
                }
                if self.alphabet.contains(s) {
                    if self.peek() == Some(&Tok::LParen) {
                        self.pos += 1;
                        let mut args = Vec::new();
                        if self.peek() != Some(&Tok::RParen) {
                            loop {
                                args.push(self.expr1()?);
                                match self.peek() {
                                    Some(Tok::Comma) => {
                                        self.pos += 1;
                                    }
                                    _ => break,
                                }
                            }
                        }
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Term::DataAct(s.to_string(), args))
                    } else {
                        Ok(Term::Act(s.to_string()))
                    }
                } else {
                    self.pos -= 1;
                    Err(self.err(format!("unknown identifier '{s}'")))
                }
            }
        }
    }

    fn parens1(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let t = self.expr1()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(t)
    }
}

fn binder_kind(s: &str) -> Option<BinderKind> {
    match s {
        "sum" => Some(BinderKind::Sum),
        "prod" => Some(BinderKind::Prod),
        "chc" => Some(BinderKind::Chc),
        "seqc" => Some(BinderKind::SeqB),
        "parc" => Some(BinderKind::ParB),
        "conc" => Some(BinderKind::Conc),
        _ => None,
    }
}

/// `+` is shared between quantity addition and process alternative
/// composition; pick the constructor from the left operand's shape and let
/// the final sort check arbitrate.
fn mixed_plus(lhs: Term, rhs: Term) -> Term {
    if matches!(
        sort_check(&lhs),
        Ok(crate::terms::Sort::Quant)
    ) {
        Term::add(lhs, rhs)
    } else {
        Term::alt(lhs, rhs)
    }
}

/// Parses a term, checking sorts and feature gates.
pub fn parse(
    text: &str,
    alphabet: &BTreeSet<String>,
    features: FeatureSet,
) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        alphabet,
        features,
    };
    let t = p.expr1()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after term"));
    }
    sort_check(&t)?;
    Ok(t)
}

// printer precedence levels: Alt/Add/Concat 1, merges 2, SeqC/Mul 3,
// prefix forms 4, atoms 5
fn prec(t: &Term) -> u8 {
    match t {
        Term::Add(..) | Term::Alt(..) | Term::Concat(..) => 1,
        Term::ParC(..) | Term::LeftMerge(..) | Term::CommMerge(..) => 2,
        Term::SeqC(..) | Term::Mul(..) => 3,
        Term::Neg(..) | Term::Guard(..) => 4,
        Term::Binder(..) => 0,
        _ => 5,
    }
}

fn show(t: &Term, min: u8, out: &mut String) {
    let own = prec(t);
    let parens = own < min;
    if parens {
        out.push('(');
    }
    match t {
        Term::QVar(v) | Term::PVar(v) | Term::SVar(v) => {
            out.push_str(&v.to_string());
        }
        Term::Zero => out.push('0'),
        Term::One => out.push('1'),
        Term::Add(a, b) => {
            show(a, 1, out);
            out.push_str(" + ");
            show(b, 2, out);
        }
        Term::Alt(a, b) => {
            show(a, 1, out);
            out.push_str(" + ");
            show(b, 2, out);
        }
        Term::Concat(a, b) => {
            show(a, 1, out);
            out.push_str(" ++ ");
            show(b, 2, out);
        }
        Term::Mul(a, b) => {
            show(a, 3, out);
            out.push_str(" * ");
            show(b, 4, out);
        }
        Term::SeqC(a, b) => {
            show(a, 3, out);
            out.push_str(" . ");
            show(b, 4, out);
        }
        Term::ParC(a, b) => {
            show(a, 2, out);
            out.push_str(" || ");
            show(b, 3, out);
        }
        Term::LeftMerge(a, b) => {
            show(a, 2, out);
            out.push_str(" |_ ");
            show(b, 3, out);
        }
        Term::CommMerge(a, b) => {
            show(a, 2, out);
            out.push_str(" | ");
            show(b, 3, out);
        }
        Term::Neg(a) => {
            out.push('-');
            show(a, 4, out);
        }
        Term::Minv(a) => {
            out.push_str("inv(");
            show(a, 0, out);
            out.push(')');
        }
        Term::Sign(a) => {
            out.push_str("sign(");
            show(a, 0, out);
            out.push(')');
        }
        Term::Delta => out.push_str("delta"),
        Term::Eps => out.push_str("eps"),
        Term::Act(l) => out.push_str(l),
        Term::DataAct(l, args) => {
            out.push_str(l);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                show(a, 0, out);
            }
            out.push(')');
        }
        Term::Encap(h, a) => {
            out.push_str("encap{");
            for (i, l) in h.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(l);
            }
            out.push_str("}(");
            show(a, 0, out);
            out.push(')');
        }
        Term::Guard(q, p) => {
            out.push('[');
            show(q, 0, out);
            out.push_str("] -> ");
            show(p, 4, out);
        }
        Term::Termi(a) => {
            out.push_str("term(");
            show(a, 0, out);
            out.push(')');
        }
        Term::EmptySeq => out.push_str("<>"),
        Term::Single(p) => {
            out.push('<');
            show(p, 0, out);
            out.push('>');
        }
        Term::SeqCond(q, s) => {
            out.push_str("scond(");
            show(q, 0, out);
            out.push_str(", ");
            show(s, 0, out);
            out.push(')');
        }
        Term::GenAlt(s) => {
            out.push_str("Alt(");
            show(s, 0, out);
            out.push(')');
        }
        Term::GenSeq(s) => {
            out.push_str("Seq(");
            show(s, 0, out);
            out.push(')');
        }
        Term::GenPar(s) => {
            out.push_str("Par(");
            show(s, 0, out);
            out.push(')');
        }
        Term::Binder(kind, n, var, body) => {
            out.push_str(kind.keyword());
            out.push('[');
            out.push_str(&n.to_string());
            out.push_str("] ");
            out.push_str(&var.to_string());
            out.push_str(" . ");
            show(body, 0, out);
        }
    }
    if parens {
        out.push(')');
    }
}

/// Canonical rendering with minimal parentheses; `parse(print(t))` is
/// alpha-equal (in fact equal) to `t` for sort-correct terms without
/// XPrime variables.
pub fn print(t: &Term) -> String {
    let mut out = String::new();
    show(t, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Sort;

    fn alphabet() -> BTreeSet<String> {
        ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect()
    }

    fn p(text: &str) -> Term {
        parse(text, &alphabet(), FeatureSet::full()).unwrap()
    }

    #[test]
    fn parses_binder() {
        let t = p("sum[7] u . u*u");
        let want = Term::binder(
            BinderKind::Sum,
            7,
            VarName::u(0),
            Term::mul(Term::QVar(VarName::u(0)), Term::QVar(VarName::u(0))),
        );
        assert_eq!(t, want);
    }

    #[test]
    fn parses_guard_with_alternative() {
        let t = p("[u] -> a(u) + delta");
        let want = Term::alt(
            Term::guard(
                Term::QVar(VarName::u(0)),
                Term::data_act("a", alloc::vec![Term::QVar(VarName::u(0))]),
            ),
            Term::Delta,
        );
        assert_eq!(t, want);
    }

    #[test]
    fn parses_generalized_composition() {
        let t = p("Seq(<a> ++ <b>)");
        let want = Term::gen_seq(Term::concat(
            Term::single(Term::act("a")),
            Term::single(Term::act("b")),
        ));
        assert_eq!(t, want);
    }

    #[test]
    fn precedence() {
        // a + b . c parses as a + (b . c)
        let t = p("a + b . c");
        let want = Term::alt(Term::act("a"), Term::seqc(Term::act("b"), Term::act("c")));
        assert_eq!(t, want);
    }

    #[test]
    fn printing() {
        let t = Term::alt(Term::seqc(Term::act("a"), Term::act("b")), Term::act("c"));
        assert_eq!(print(&t), "a . b + c");
        assert_eq!(print(&Term::guard(Term::One, Term::Delta)), "[1] -> delta");
        // structure is preserved, so the right-nested alternative gets parens
        let r = Term::alt(Term::act("a"), Term::alt(Term::act("b"), Term::act("c")));
        assert_eq!(print(&r), "a + (b + c)");
    }

    #[test]
    fn round_trip_examples() {
        let samples = [
            "sum[7] u . u*u",
            "prod[3] u . (u + 1)",
            "[u] -> a(u) + delta",
            "a . b + c | d",
            "a || b |_ c",
            "encap{a, b}(a . c)",
            "chc[4] u . a(u, u + 1)",
            "Seq(<a> ++ <b> ++ <>)",
            "term(a + eps)",
            "conc[3] u . <a(u)>",
            "scond(1 - sign(u - num(3)), <a>)",
            "inv(sign(-u)) * cnum(12)",
        ];
        for s in samples {
            let t = p(s);
            let t2 = p(&print(&t));
            assert_eq!(t, t2, "round trip failed for {s}: printed {}", print(&t));
        }
    }

    #[test]
    fn feature_gating() {
        let base = FeatureSet::base();
        assert!(parse("eps", &alphabet(), base).is_err());
        assert!(parse("term(a)", &alphabet(), base).is_err());
        assert!(parse("<a>", &alphabet(), base).is_err());
        let eps_only = FeatureSet::with_epsilon();
        assert!(parse("eps", &alphabet(), eps_only).is_ok());
        assert!(parse("Alt(<a>)", &alphabet(), eps_only).is_err());
        assert!(parse("Alt(<a>)", &alphabet(), FeatureSet::full()).is_ok());
    }

    #[test]
    fn rejects_ill_sorted_and_unknown() {
        assert!(parse("delta + 1", &alphabet(), FeatureSet::base()).is_err());
        assert!(parse("q + 1", &alphabet(), FeatureSet::base()).is_err());
        assert!(parse("2 + 1", &alphabet(), FeatureSet::base()).is_err());
    }

    #[test]
    fn sugar() {
        assert_eq!(p("u - v"), Term::sub(Term::QVar(VarName::u(0)), Term::QVar(VarName::u(1))));
        assert_eq!(p("u / v"), Term::div(Term::QVar(VarName::u(0)), Term::QVar(VarName::u(1))));
        assert_eq!(p("num(2)"), crate::terms::unary_numeral(2));
        assert_eq!(sort_check(&p("num(2)")), Ok(Sort::Quant));
    }
}
