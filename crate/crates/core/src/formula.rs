//! Formula AST, concrete syntax and substitution for the bimodal language
//! with `&`, `|`, `->`, `~`, `[]` (belief) and `[L]` (the auxiliary box).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A formula of the bimodal language. `<->` is surface sugar and is expanded
/// by the parser, so the AST has exactly these seven constructors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Neg(Box<Formula>),
    /// The belief operator `[]`.
    Box(Box<Formula>),
    /// The auxiliary operator `[L]`.
    BoxL(Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn bx(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn boxl(f: Formula) -> Formula {
        Formula::BoxL(Box::new(f))
    }

    /// `phi <-> psi` expanded to `(phi -> psi) & (psi -> phi)`.
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(Formula::imp(l.clone(), r.clone()), Formula::imp(r, l))
    }

    /// Left-nested conjunction of a nonempty list.
    pub fn conjoin(parts: &[Formula]) -> Formula {
        let mut it = parts.iter().cloned();
        let first = it.next().expect("conjoin of empty list");
        it.fold(first, Formula::and)
    }

    /// Number of AST nodes.
    pub fn complexity(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Neg(f) | Formula::Box(f) | Formula::BoxL(f) => 1 + f.complexity(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                1 + l.complexity() + r.complexity()
            }
        }
    }

    /// Nesting depth; a variable has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Neg(f) | Formula::Box(f) | Formula::BoxL(f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Neg(f) | Formula::Box(f) | Formula::BoxL(f) => f.collect_vars(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn substitute(&self, subst: &Substitution) -> Formula {
        match self {
            Formula::Var(v) => subst.get(v),
            Formula::And(l, r) => Formula::and(l.substitute(subst), r.substitute(subst)),
            Formula::Or(l, r) => Formula::or(l.substitute(subst), r.substitute(subst)),
            Formula::Imp(l, r) => Formula::imp(l.substitute(subst), r.substitute(subst)),
            Formula::Neg(f) => Formula::neg(f.substitute(subst)),
            Formula::Box(f) => Formula::bx(f.substitute(subst)),
            Formula::BoxL(f) => Formula::boxl(f.substitute(subst)),
        }
    }

    /// Match `self` as a template against `target`, returning the unique
    /// substitution `s` with `self.substitute(&s) == target`, if any.
    pub fn match_against(&self, target: &Formula) -> Option<Substitution> {
        let mut map = BTreeMap::new();
        if match_rec(self, target, &mut map) {
            Some(Substitution::new(map))
        } else {
            None
        }
    }
}

fn match_rec(template: &Formula, target: &Formula, map: &mut BTreeMap<String, Formula>) -> bool {
    match (template, target) {
        (Formula::Var(v), t) => match map.get(v) {
            Some(bound) => bound == t,
            None => {
                map.insert(v.clone(), t.clone());
                true
            }
        },
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d))
        | (Formula::Imp(a, b), Formula::Imp(c, d)) => {
            match_rec(a, c, map) && match_rec(b, d, map)
        }
        (Formula::Neg(a), Formula::Neg(b))
        | (Formula::Box(a), Formula::Box(b))
        | (Formula::BoxL(a), Formula::BoxL(b)) => match_rec(a, b, map),
        _ => false,
    }
}

/// A finite substitution; variables without an entry map to themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<String, Formula>);

impl Substitution {
    pub fn new(map: BTreeMap<String, Formula>) -> Substitution {
        Substitution(map)
    }

    pub fn identity() -> Substitution {
        Substitution::default()
    }

    pub fn bind(mut self, var: &str, f: Formula) -> Substitution {
        self.0.insert(var.to_string(), f);
        self
    }

    pub fn get(&self, var: &str) -> Formula {
        self.0
            .get(var)
            .cloned()
            .unwrap_or_else(|| Formula::var(var))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &Formula)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

// Precedence levels used by both the parser and the printer. `<->` would sit
// below Imp but never occurs in the AST.
const PREC_IMP: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;
const PREC_ATOM: u8 = 6;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Var(_) => PREC_ATOM,
        Formula::Imp(_, _) => PREC_IMP,
        Formula::Or(_, _) => PREC_OR,
        Formula::And(_, _) => PREC_AND,
        Formula::Neg(_) | Formula::Box(_) | Formula::BoxL(_) => PREC_UNARY,
    }
}

fn render_into(f: &Formula, min: u8, out: &mut String) {
    let p = prec(f);
    if p < min {
        out.push('(');
        render_into(f, 0, out);
        out.push(')');
        return;
    }
    match f {
        Formula::Var(v) => out.push_str(v),
        Formula::And(l, r) => {
            render_into(l, PREC_AND, out);
            out.push_str(" & ");
            render_into(r, PREC_AND + 1, out);
        }
        Formula::Or(l, r) => {
            render_into(l, PREC_OR, out);
            out.push_str(" | ");
            render_into(r, PREC_OR + 1, out);
        }
        Formula::Imp(l, r) => {
            render_into(l, PREC_IMP + 1, out);
            out.push_str(" -> ");
            render_into(r, PREC_IMP, out);
        }
        Formula::Neg(g) => {
            out.push('~');
            render_into(g, PREC_UNARY, out);
        }
        Formula::Box(g) => {
            out.push_str("[]");
            render_into(g, PREC_UNARY, out);
        }
        Formula::BoxL(g) => {
            out.push_str("[L]");
            render_into(g, PREC_UNARY, out);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        render_into(self, 0, &mut s);
        f.write_str(&s)
    }
}

/// Render with minimal parentheses; inverse of [`parse`].
pub fn render(f: &Formula) -> String {
    f.to_string()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown token at offset {pos}: {found:?}")]
    UnknownToken { pos: usize, found: char },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    BoxOp,
    BoxLOp,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(v) => return write!(f, "identifier {v:?}"),
            Tok::Tilde => "~",
            Tok::BoxOp => "[]",
            Tok::BoxLOp => "[L]",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::DoubleArrow => "<->",
            Tok::LParen => "(",
            Tok::RParen => ")",
        };
        write!(f, "`{s}`")
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '~' => {
                toks.push((i, Tok::Tilde));
                i += 1;
            }
            '&' => {
                toks.push((i, Tok::Amp));
                i += 1;
            }
            '|' => {
                toks.push((i, Tok::Pipe));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(ParseError::Syntax {
                        pos: i,
                        message: "expected `->`".into(),
                    });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    toks.push((i, Tok::DoubleArrow));
                    i += 3;
                } else {
                    return Err(ParseError::Syntax {
                        pos: i,
                        message: "expected `<->`".into(),
                    });
                }
            }
            '[' => {
                if bytes.get(i + 1) == Some(&b']') {
                    toks.push((i, Tok::BoxOp));
                    i += 2;
                } else if bytes.get(i + 1) == Some(&b'L') && bytes.get(i + 2) == Some(&b']') {
                    toks.push((i, Tok::BoxLOp));
                    i += 3;
                } else {
                    return Err(ParseError::Syntax {
                        pos: i,
                        message: "expected `[]` or `[L]`".into(),
                    });
                }
            }
            'a'..='z' => {
                let start = i;
                i += 1;
                while i < bytes.len()
                    && matches!(bytes[i], b'a'..=b'z' | b'0'..=b'9' | b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => return Err(ParseError::UnknownToken { pos: i, found: c }),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(ParseError::Syntax {
                pos: self.offset(),
                message: format!("expected {want}, found {t}"),
            }),
            None => Err(ParseError::Syntax {
                pos: self.offset(),
                message: format!("expected {want}, found end of input"),
            }),
        }
    }

    // iff := imp ("<->" imp)?   (non-associative, expanded on the spot)
    fn iff(&mut self) -> Result<Formula, ParseError> {
        let l = self.imp()?;
        if self.peek() == Some(&Tok::DoubleArrow) {
            self.pos += 1;
            let r = self.imp()?;
            return Ok(Formula::iff(l, r));
        }
        Ok(l)
    }

    // imp := disj ("->" imp)?   (right-associative)
    fn imp(&mut self) -> Result<Formula, ParseError> {
        let l = self.disj()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let r = self.imp()?;
            return Ok(Formula::imp(l, r));
        }
        Ok(l)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conj()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let r = self.conj()?;
            f = Formula::or(f, r);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let r = self.unary()?;
            f = Formula::and(f, r);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::neg(self.unary()?))
            }
            Some(Tok::BoxOp) => {
                self.pos += 1;
                Ok(Formula::bx(self.unary()?))
            }
            Some(Tok::BoxLOp) => {
                self.pos += 1;
                Ok(Formula::boxl(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Ident(v)) => Ok(Formula::Var(v)),
            Some(Tok::LParen) => {
                let f = self.iff()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(t) => Err(ParseError::Syntax {
                pos: off,
                message: format!("expected a formula, found {t}"),
            }),
            None => Err(ParseError::Syntax {
                pos: off,
                message: "expected a formula, found end of input".into(),
            }),
        }
    }
}

/// Parse the concrete syntax: unary `~`, `[]`, `[L]` bind tightest, then `&`,
/// then `|`, then right-associative `->`; `<->` is loosest and expands to the
/// conjunction of both implications.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.len(),
    };
    let f = p.iff()?;
    if let Some(t) = p.peek() {
        return Err(ParseError::Syntax {
            pos: p.offset(),
            message: format!("unexpected {t} after formula"),
        });
    }
    Ok(f)
}

/// All formulas over `vars` of nesting depth at most `depth` (a variable has
/// depth 1), in a fixed deterministic order.
pub fn enumerate_to_depth(vars: &[&str], depth: usize) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    if depth == 0 {
        return out;
    }
    for v in vars {
        out.push(Formula::var(v));
    }
    let mut prev_len = 0;
    for _ in 2..=depth {
        let upto = out.len();
        let mut next = Vec::new();
        // unary over anything new or old, binary where at least one side is new
        for f in &out[..upto] {
            next.push(Formula::neg(f.clone()));
            next.push(Formula::bx(f.clone()));
            next.push(Formula::boxl(f.clone()));
        }
        for (i, l) in out[..upto].iter().enumerate() {
            for (j, r) in out[..upto].iter().enumerate() {
                if i < prev_len && j < prev_len {
                    continue; // already produced at an earlier depth
                }
                next.push(Formula::and(l.clone(), r.clone()));
                next.push(Formula::or(l.clone(), r.clone()));
                next.push(Formula::imp(l.clone(), r.clone()));
            }
        }
        prev_len = upto;
        for f in next {
            if !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn parse_single_arrow() {
        assert_eq!(p("p -> p"), Formula::imp(Formula::var("p"), Formula::var("p")));
    }

    #[test]
    fn parse_box_examples() {
        let f = p("[](p & ~p) -> []q");
        let expected = Formula::imp(
            Formula::bx(Formula::and(
                Formula::var("p"),
                Formula::neg(Formula::var("p")),
            )),
            Formula::bx(Formula::var("q")),
        );
        assert_eq!(f, expected);

        let g = p("[L](p | ~p)");
        assert_eq!(
            g,
            Formula::boxl(Formula::or(
                Formula::var("p"),
                Formula::neg(Formula::var("p"))
            ))
        );
    }

    #[test]
    fn precedence_and_over_arrow() {
        assert_eq!(
            p("p & q -> r"),
            Formula::imp(
                Formula::and(Formula::var("p"), Formula::var("q")),
                Formula::var("r")
            )
        );
    }

    #[test]
    fn precedence_or_between() {
        assert_eq!(
            p("p | q & r"),
            Formula::or(
                Formula::var("p"),
                Formula::and(Formula::var("q"), Formula::var("r"))
            )
        );
    }

    #[test]
    fn arrow_right_associative() {
        assert_eq!(
            p("p -> q -> r"),
            Formula::imp(
                Formula::var("p"),
                Formula::imp(Formula::var("q"), Formula::var("r"))
            )
        );
    }

    #[test]
    fn iff_desugars() {
        assert_eq!(
            p("p <-> q"),
            Formula::and(
                Formula::imp(Formula::var("p"), Formula::var("q")),
                Formula::imp(Formula::var("q"), Formula::var("p"))
            )
        );
    }

    #[test]
    fn iff_non_associative() {
        assert!(parse("p <-> q <-> r").is_err());
    }

    #[test]
    fn render_examples() {
        assert_eq!(render(&p("p -> p")), "p -> p");
        assert_eq!(
            render(&Formula::bx(Formula::and(
                Formula::var("p"),
                Formula::neg(Formula::var("p"))
            ))),
            "[](p & ~p)"
        );
        assert_eq!(
            render(&Formula::boxl(Formula::imp(
                Formula::var("p"),
                Formula::var("q")
            ))),
            "[L](p -> q)"
        );
    }

    #[test]
    fn render_reassociation_parens() {
        assert_eq!(render(&p("p & (q & r)")), "p & (q & r)");
        assert_eq!(render(&p("(p -> q) -> r")), "(p -> q) -> r");
        assert_eq!(render(&p("p & q & r")), "p & q & r");
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse("p -> $") {
            Err(ParseError::UnknownToken { pos, found }) => {
                assert_eq!(pos, 5);
                assert_eq!(found, '$');
            }
            other => panic!("expected unknown token, got {other:?}"),
        }
        assert!(parse("p ->").is_err());
        assert!(parse("(p -> q").is_err());
        assert!(parse("[L p").is_err());
    }

    #[test]
    fn substitute_examples() {
        let s = Substitution::identity().bind("p", p("q & r"));
        assert_eq!(p("p -> p").substitute(&s), p("(q & r) -> (q & r)"));

        let s2 = Substitution::identity()
            .bind("p", Formula::var("p"))
            .bind("q", Formula::var("p"));
        assert_eq!(
            p("[]p & []q -> [](p & q)").substitute(&s2),
            p("[]p & []p -> [](p & p)")
        );

        let s3 = Substitution::identity().bind("q", Formula::var("r"));
        assert_eq!(p("p").substitute(&s3), p("p"));
    }

    #[test]
    fn substitute_identity_is_identity() {
        let f = p("[](p & ~p) -> []q <-> [L]r");
        assert_eq!(f.substitute(&Substitution::identity()), f);
    }

    #[test]
    fn match_against_finds_unique_substitution() {
        let tpl = p("(p & q) -> p");
        let inst = p("((a | b) & ~c) -> (a | b)");
        let s = tpl.match_against(&inst).unwrap();
        assert_eq!(tpl.substitute(&s), inst);
        assert!(tpl.match_against(&p("(a & b) -> b")).is_none());
    }

    #[test]
    fn depth_counts_vars_as_one() {
        assert_eq!(p("p").depth(), 1);
        assert_eq!(p("~p").depth(), 2);
        assert_eq!(p("[](p & q)").depth(), 3);
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_to_depth(&["p", "q"], 1).len(), 2);
        assert_eq!(enumerate_to_depth(&["p", "q"], 2).len(), 20);
        assert_eq!(enumerate_to_depth(&["p", "q"], 3).len(), 1262);
    }
}
