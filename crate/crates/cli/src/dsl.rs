//! The descriptor DSL.
//!
//! ```text
//! family := expr "for" ident cmp int
//! expr   := term (("+" | "-") term)*          a leading sign is allowed
//! term   := [rational] symbol "(" index ")" [tensor "(" expr ")"]
//! index  := ["-"] ident [("+" | "-") int] | ["-"] int
//! symbol := "e" | "x" | "x*"      tensor := "⊗" | "ox" | "(x)"
//! cmp    := ">=" | "<="
//! set    := "{" [bound [".." bound]] "}" ("|" set)*     bound := ["-"] (int | "inf")
//! ```

use std::fmt;

use flagstab::limits::{Cmp, Direction, Family, FamilyTerm, IndexDomain, IndexExpr, IndexSet, Symbol, Template};
use flagstab::linalg::Rational;
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    /// Well-formed but outside the supported class, e.g. `e(k*k)`.
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match (&self.kind, &self.message) {
            (ErrorKind::Unsupported, Some(m)) => write!(f, "unsupported form: {m}"),
            (_, Some(m)) => write!(f, "{m}"),
            _ => write!(f, "expected one of {}; found {}", self.expected.join(", "), self.found),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<ParseError> for flagstab::Error {
    fn from(e: ParseError) -> Self {
        flagstab::Error::Input(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Tensor,
    Ge,
    Le,
    DotDot,
    Pipe,
    /// A character outside the grammar; the parser reports what it wanted instead.
    Other(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(i) => format!("`{i}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Other(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Tensor => "⊗",
            Tok::Ge => ">=",
            Tok::Le => "<=",
            Tok::DotDot => "..",
            Tok::Pipe => "|",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned { tok, line: l0, column: c0 });
            *i += width;
            *col += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '{' => push(Tok::LBrace, 1, &mut i, &mut col),
            '}' => push(Tok::RBrace, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '-' => push(Tok::Minus, 1, &mut i, &mut col),
            '*' => push(Tok::Star, 1, &mut i, &mut col),
            '/' => push(Tok::Slash, 1, &mut i, &mut col),
            '^' => push(Tok::Caret, 1, &mut i, &mut col),
            '|' => push(Tok::Pipe, 1, &mut i, &mut col),
            '⊗' => push(Tok::Tensor, 1, &mut i, &mut col),
            '>' | '<' if chars.get(i + 1) == Some(&'=') => {
                push(if c == '>' { Tok::Ge } else { Tok::Le }, 2, &mut i, &mut col)
            }
            '.' if chars.get(i + 1) == Some(&'.') => push(Tok::DotDot, 2, &mut i, &mut col),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v = text.parse::<i64>().map_err(|_| ParseError {
                    kind: ErrorKind::Syntax,
                    line: l0,
                    column: c0,
                    expected: vec![],
                    found: format!("`{text}`"),
                    message: Some(format!("integer `{text}` is too large")),
                })?;
                out.push(Spanned { tok: Tok::Int(v), line: l0, column: c0 });
                col += i - start;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let tok = if text == "ox" { Tok::Tensor } else { Tok::Ident(text) };
                out.push(Spanned { tok, line: l0, column: c0 });
                col += i - start;
            }
            other => push(Tok::Other(other), 1, &mut i, &mut col),
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

/// An index naming a parameter, remembered with its position so the name
/// can be checked against the quantifier.
struct VarUse {
    name: String,
    line: usize,
    column: usize,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    vars: Vec<VarUse>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, vars: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.column)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (line, column) = self.here();
        ParseError {
            kind: ErrorKind::Syntax,
            line,
            column,
            expected: expected.iter().map(|s| format!("`{s}`")).collect(),
            found: self.peek().describe(),
            message: None,
        }
    }

    fn unsupported(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.here();
        ParseError {
            kind: ErrorKind::Unsupported,
            line,
            column,
            expected: vec![],
            found: self.peek().describe(),
            message: Some(message.into()),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[tok.text()]))
        }
    }

    fn int(&mut self) -> PResult<i64> {
        match self.bump() {
            Tok::Int(v) => Ok(v),
            _ => {
                self.pos -= 1;
                Err(self.error(&["integer"]))
            }
        }
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let neg = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let v = self.int()?;
        Ok(if neg { -v } else { v })
    }

    fn at_term_start(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Ident(_))
    }

    fn expr(&mut self) -> PResult<Vec<FamilyTerm>> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1
            }
            Tok::Plus => {
                self.bump();
                1
            }
            _ => 1,
        };
        loop {
            if !self.at_term_start() {
                return Err(self.error(&["coefficient", "e", "x", "x*"]));
            }
            let mut t = self.term()?;
            if sign < 0 {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Ok(terms),
            };
            self.bump();
        }
    }

    fn term(&mut self) -> PResult<FamilyTerm> {
        let coeff = if let Tok::Int(_) = self.peek() {
            let num = self.int()?;
            if *self.peek() == Tok::Slash {
                self.bump();
                let den = self.int()?;
                if den == 0 {
                    self.pos -= 1;
                    return Err(ParseError {
                        message: Some("zero denominator".into()),
                        ..self.error(&[])
                    });
                }
                Rational::new(num.into(), den.into())
            } else {
                Rational::from_integer(num.into())
            }
        } else {
            Rational::from_integer(1.into())
        };
        if *self.peek() == Tok::Star {
            return Err(self.error(&["e", "x", "x*"]));
        }
        let symbol = match self.peek().clone() {
            Tok::Ident(s) if s == "e" => {
                self.bump();
                Symbol::E
            }
            Tok::Ident(s) if s == "x" => {
                self.bump();
                if *self.peek() == Tok::Star {
                    self.bump();
                    Symbol::XStar
                } else {
                    Symbol::X
                }
            }
            _ => return Err(self.error(&["e", "x", "x*"])),
        };
        self.expect(Tok::LParen)?;
        let index = self.index()?;
        self.expect(Tok::RParen)?;
        let tensor = if self.at_tensor() {
            self.expect(Tok::LParen)?;
            let inner = self.expr()?;
            self.expect(Tok::RParen)?;
            Some(inner)
        } else {
            None
        };
        Ok(FamilyTerm { coeff, symbol, index, tensor })
    }

    /// `⊗`, `ox`, or the three tokens `(x)`; consumes it.
    fn at_tensor(&mut self) -> bool {
        if *self.peek() == Tok::Tensor {
            self.bump();
            return true;
        }
        let ascii = *self.peek() == Tok::LParen
            && *self.peek_at(1) == Tok::Ident("x".into())
            && *self.peek_at(2) == Tok::RParen
            && *self.peek_at(3) == Tok::LParen;
        if ascii {
            self.pos += 3;
        }
        ascii
    }

    fn index(&mut self) -> PResult<IndexExpr> {
        let negated = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                if matches!(self.peek(), Tok::Star | Tok::Ident(_) | Tok::Caret | Tok::Slash) {
                    return Err(self.unsupported("index must be ±parameter + integer or an integer"));
                }
                Ok(IndexExpr::Const(if negated { -v } else { v }))
            }
            Tok::Ident(name) => {
                let (line, column) = self.here();
                self.bump();
                self.vars.push(VarUse { name, line, column });
                if matches!(self.peek(), Tok::Star | Tok::Caret | Tok::Slash | Tok::LParen | Tok::Ident(_)) {
                    return Err(self.unsupported("index is not linear in the parameter"));
                }
                let offset = match self.peek() {
                    Tok::Plus | Tok::Minus => {
                        let neg = self.bump() == Tok::Minus;
                        if let Tok::Ident(_) = self.peek() {
                            return Err(self.unsupported("index is not linear in the parameter"));
                        }
                        let v = self.int()?;
                        if matches!(self.peek(), Tok::Star | Tok::Caret | Tok::Slash) {
                            return Err(self.unsupported("index is not linear in the parameter"));
                        }
                        if neg {
                            -v
                        } else {
                            v
                        }
                    }
                    _ => 0,
                };
                Ok(IndexExpr::Var { negated, offset })
            }
            _ => Err(self.error(&["parameter", "integer"])),
        }
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }
}

/// Merges repeated terms and drops zero coefficients, keeping first
/// occurrences in order.
fn normalize(terms: Vec<FamilyTerm>) -> Vec<FamilyTerm> {
    let mut out: Vec<FamilyTerm> = Vec::new();
    for mut t in terms {
        t.tensor = t.tensor.map(normalize);
        if let Some(prev) = out
            .iter_mut()
            .find(|u| u.symbol == t.symbol && u.index == t.index && u.tensor == t.tensor)
        {
            prev.coeff += t.coeff;
        } else {
            out.push(t);
        }
    }
    out.retain(|t| !t.coeff.is_zero() && t.tensor.as_ref().map_or(true, |v| !v.is_empty()));
    out
}

/// `expr for k >= b`.
pub fn parse_family(src: &str) -> Result<Family, ParseError> {
    let mut p = Parser::new(src)?;
    let terms = p.expr()?;
    match p.peek() {
        Tok::Ident(s) if s == "for" => {
            p.bump();
        }
        _ => return Err(p.error(&["+", "-", "⊗", "for"])),
    }
    let var = match p.peek().clone() {
        Tok::Ident(s) if s != "for" => {
            p.bump();
            s
        }
        _ => return Err(p.error(&["parameter name"])),
    };
    let cmp = match p.peek() {
        Tok::Ge => Cmp::Ge,
        Tok::Le => Cmp::Le,
        _ => return Err(p.error(&[">=", "<="])),
    };
    p.bump();
    let bound = p.signed_int()?;
    p.finish()?;
    if let Some(u) = p.vars.iter().find(|u| u.name != var) {
        return Err(ParseError {
            kind: ErrorKind::Syntax,
            line: u.line,
            column: u.column,
            expected: vec![format!("`{var}`")],
            found: format!("`{}`", u.name),
            message: Some(format!("unknown parameter `{}` (the family ranges over `{var}`)", u.name)),
        });
    }
    let terms = normalize(terms);
    if terms.is_empty() {
        return Err(ParseError {
            kind: ErrorKind::Syntax,
            line: 1,
            column: 1,
            expected: vec![],
            found: "zero".into(),
            message: Some("the family is identically zero".into()),
        });
    }
    Ok(Family { var, cmp, bound, terms })
}

/// A single vector with constant indices, e.g. `e(1) - 3 e(2)`.
pub fn parse_vector(src: &str) -> Result<Template, ParseError> {
    let mut p = Parser::new(src)?;
    let terms = p.expr()?;
    p.finish()?;
    if let Some(u) = p.vars.first() {
        return Err(ParseError {
            kind: ErrorKind::Syntax,
            line: u.line,
            column: u.column,
            expected: vec!["integer".into()],
            found: format!("`{}`", u.name),
            message: Some("a single vector takes integer indices; add `for ...` for a family".into()),
        });
    }
    let mut out = Vec::new();
    for t in normalize(terms) {
        if t.tensor.is_some() || t.symbol == Symbol::XStar {
            return Err(ParseError {
                kind: ErrorKind::Unsupported,
                line: 1,
                column: 1,
                expected: vec![],
                found: t.symbol.as_str().into(),
                message: Some("a single vector must be a combination of e(i) or x(i)".into()),
            });
        }
        let IndexExpr::Const(i) = t.index else { unreachable!() };
        out.push((i, t.coeff));
    }
    Ok(Template::new(out))
}

enum Bound {
    Int(i64),
    NegInf,
    PosInf,
}

/// `{-inf..-1} | {1} | {5..inf}` over `domain`.
pub fn parse_index_set(src: &str, domain: IndexDomain) -> Result<IndexSet, ParseError> {
    let mut p = Parser::new(src)?;
    let mut acc = IndexSet::empty(domain);
    loop {
        let (line, column) = p.here();
        p.expect(Tok::LBrace)?;
        let lift = |e: flagstab::Error| ParseError {
            kind: ErrorKind::Syntax,
            line,
            column,
            expected: vec![],
            found: String::new(),
            message: Some(e.to_string()),
        };
        let part = if *p.peek() == Tok::RBrace {
            IndexSet::empty(domain)
        } else {
            let a = bound(&mut p)?;
            let b = if *p.peek() == Tok::DotDot {
                p.bump();
                Some(bound(&mut p)?)
            } else {
                None
            };
            match (a, b) {
                (Bound::Int(i), None) => IndexSet::singleton(domain, i).map_err(lift)?,
                (Bound::Int(i), Some(Bound::Int(j))) => IndexSet::interval(domain, i, j).map_err(lift)?,
                (Bound::Int(i), Some(Bound::PosInf)) => IndexSet::ray(domain, Direction::Up, i).map_err(lift)?,
                (Bound::NegInf, Some(Bound::Int(j))) => IndexSet::ray(domain, Direction::Down, j).map_err(lift)?,
                (Bound::NegInf, Some(Bound::PosInf)) => IndexSet::full(domain),
                _ => return Err(lift(flagstab::Error::Input("bounds must read low..high".into()))),
            }
        };
        p.expect(Tok::RBrace)?;
        acc = acc.union(&part).map_err(|e| p.unsupported(e.to_string()))?;
        match p.peek() {
            Tok::Pipe => {
                p.bump();
            }
            Tok::Eof => return Ok(acc),
            _ => return Err(p.error(&["|", "end of input"])),
        }
    }
}

fn bound(p: &mut Parser) -> PResult<Bound> {
    let neg = if *p.peek() == Tok::Minus {
        p.bump();
        true
    } else {
        false
    };
    match p.peek().clone() {
        Tok::Int(v) => {
            p.bump();
            Ok(Bound::Int(if neg { -v } else { v }))
        }
        Tok::Ident(s) if s == "inf" => {
            p.bump();
            Ok(if neg { Bound::NegInf } else { Bound::PosInf })
        }
        _ => Err(p.error(&["integer", "inf"])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use flagstab::limits::FamilyKind;

    #[test]
    fn grammar_exemplars() {
        let f = parse_family("e(k) - e(k+1) for k >= 1").unwrap();
        assert_eq!(f.var, "k");
        assert_eq!((f.cmp, f.bound), (Cmp::Ge, 1));
        let offsets: Vec<_> = f
            .terms
            .iter()
            .map(|t| match t.index {
                IndexExpr::Var { offset, .. } => (offset, t.coeff.to_string()),
                _ => panic!(),
            })
            .collect();
        assert_eq!(offsets, vec![(0, "1".to_string()), (1, "-1".to_string())]);
        let x = parse_family("x(i) ⊗ (x*(i) + x*(-i)) for i >= 1").unwrap();
        assert_eq!(x.kind().unwrap(), FamilyKind::Matrix);
        assert_eq!(x.to_string(), "x(i) ⊗ (x*(i) + x*(-i)) for i >= 1");
        assert_eq!(parse_family("x(i) ox (x*(i) + x*(-i)) for i >= 1").unwrap(), x);
        assert_eq!(parse_family("x(i) (x) (x*(i) + x*(-i)) for i >= 1").unwrap(), x);
    }

    #[test]
    fn nonlinear_index_is_unsupported() {
        let e = parse_family("e(k*k) for k >= 1").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Unsupported);
        assert_eq!((e.line, e.column), (1, 4));
        assert_eq!(parse_vector("e(k*k)").unwrap_err().kind, ErrorKind::Unsupported);
    }

    #[test]
    fn diagnostics_carry_position_and_expectations() {
        let e = parse_family("e(k) -\n  e(k+1 for k >= 1").unwrap_err();
        assert_eq!((e.line, e.column), (2, 9));
        assert_eq!(e.expected, vec!["`)`"]);
        let e = parse_family("e(k) + for k >= 1").unwrap_err();
        assert!(e.expected.contains(&"`e`".to_string()), "{e}");
        let e = parse_family("e(j) for k >= 1").unwrap_err();
        assert!(e.to_string().contains("unknown parameter `j`"), "{e}");
        let e = parse_family("e(k) for k = 1").unwrap_err();
        assert_eq!(e.expected, vec!["`>=`", "`<=`"]);
        assert!(parse_family("e(k) $").is_err());
    }

    #[test]
    fn coefficients_are_normalized() {
        let f = parse_family("2/4 e(k) + 1/2 e(k) - e(k+1) + e(k+1) for k <= -1").unwrap();
        assert_eq!(f.to_string(), "e(k) for k <= -1");
        assert!(parse_family("e(k) - e(k) for k >= 1").is_err());
    }

    #[test]
    fn vectors_and_index_sets() {
        let t = parse_vector("e(1) - 3 e(2)").unwrap();
        assert_eq!(t.to_string(), "e(1) - 3 e(2)");
        let s = parse_index_set("{-inf..-3} | {1} | {5..inf}", IndexDomain::Signed).unwrap();
        assert_eq!(s.to_string(), "{-inf..-3} | {1} | {5..inf}");
        let merged = parse_index_set("{-inf..-1} | {1}", IndexDomain::Signed).unwrap();
        assert_eq!(merged.to_string(), "{-inf..1}");
        assert_eq!(parse_index_set(&s.to_string(), IndexDomain::Signed).unwrap(), s);
        assert!(parse_index_set("{0}", IndexDomain::Signed).is_err());
        assert!(parse_index_set("{-inf..inf}", IndexDomain::Positive).unwrap().is_full());
        let e = parse_index_set("{1..", IndexDomain::Positive).unwrap_err();
        assert_eq!(e.expected, vec!["`integer`", "`inf`"]);
    }
}
