//! First-order frame conditions over the vocabulary `leq`, `R`, `Q`, `QL`,
//! `star`, `L` and `W`, with the derived relation macros, an evaluator over
//! finite structures, and the classicizing rewrite.

use std::fmt;

use thiserror::Error;

use crate::structures::{Designation, Structure};

/// A state term: a variable or an iterated star.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Star(Box<Term>),
}

pub fn tv(name: &str) -> Term {
    Term::Var(name.to_string())
}

pub fn tstar(t: Term) -> Term {
    Term::Star(Box::new(t))
}

impl Term {
    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Star(t) => t.collect_vars(out),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Star(t) => write!(f, "{t}*"),
        }
    }
}

/// A frame condition. The four `R`/`Q` composition forms are macros that
/// [`Condition::expand_macros`] rewrites into existentials before evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Leq(Term, Term),
    Eq(Term, Term),
    R(Term, Term, Term),
    Q(Term, Term),
    QL(Term, Term),
    InL(Term),
    InW(Term),
    /// `Rstuv := ∃x(Rstx ∧ Rxuv)`
    R4(Term, Term, Term, Term),
    /// `Rs(tu)v := ∃x(Rsxv ∧ Rtux)`
    RGroup(Term, Term, Term, Term),
    /// `RQstu := ∃x(Rstx ∧ Qxu)`
    RQ(Term, Term, Term),
    /// `QRstu := ∃x(Qsx ∧ Rxtu)`
    QR(Term, Term, Term),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
    Implies(Box<Condition>, Box<Condition>),
    Forall(String, Box<Condition>),
    Exists(String, Box<Condition>),
}

use Condition as C;

impl Condition {
    pub fn and(a: Condition, b: Condition) -> Condition {
        C::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Condition, b: Condition) -> Condition {
        C::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Condition, b: Condition) -> Condition {
        C::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, body: Condition) -> Condition {
        C::Forall(v.to_string(), Box::new(body))
    }

    pub fn exists(v: &str, body: Condition) -> Condition {
        C::Exists(v.to_string(), Box::new(body))
    }

    /// Every variable name occurring anywhere (free or bound).
    pub fn all_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit_vars(&mut out);
        out
    }

    fn visit_vars(&self, out: &mut Vec<String>) {
        match self {
            C::Leq(a, b) | C::Eq(a, b) | C::Q(a, b) | C::QL(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            C::R(a, b, c) | C::RQ(a, b, c) | C::QR(a, b, c) => {
                a.collect_vars(out);
                b.collect_vars(out);
                c.collect_vars(out);
            }
            C::R4(a, b, c, d) | C::RGroup(a, b, c, d) => {
                a.collect_vars(out);
                b.collect_vars(out);
                c.collect_vars(out);
                d.collect_vars(out);
            }
            C::InL(t) | C::InW(t) => t.collect_vars(out),
            C::And(a, b) | C::Or(a, b) | C::Implies(a, b) => {
                a.visit_vars(out);
                b.visit_vars(out);
            }
            C::Forall(v, b) | C::Exists(v, b) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
                b.visit_vars(out);
            }
        }
    }

    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit_free(&mut Vec::new(), &mut out);
        out
    }

    fn visit_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut add_terms = |terms: &[&Term]| {
            for t in terms {
                let mut vs = Vec::new();
                t.collect_vars(&mut vs);
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
        };
        match self {
            C::Leq(a, b) | C::Eq(a, b) | C::Q(a, b) | C::QL(a, b) => add_terms(&[a, b]),
            C::R(a, b, c) | C::RQ(a, b, c) | C::QR(a, b, c) => add_terms(&[a, b, c]),
            C::R4(a, b, c, d) | C::RGroup(a, b, c, d) => add_terms(&[a, b, c, d]),
            C::InL(t) | C::InW(t) => add_terms(&[t]),
            C::And(a, b) | C::Or(a, b) | C::Implies(a, b) => {
                a.visit_free(bound, out);
                b.visit_free(bound, out);
            }
            C::Forall(v, b) | C::Exists(v, b) => {
                bound.push(v.clone());
                b.visit_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Universally close all free variables, in first-occurrence order.
    pub fn closed(&self) -> Condition {
        let mut c = self.clone();
        for v in self.free_vars().into_iter().rev() {
            c = C::Forall(v, Box::new(c));
        }
        c
    }

    /// Rewrite the composition macros into their defining existentials.
    pub fn expand_macros(&self) -> Condition {
        let mut fresh = FreshVars::new("x", self.all_vars());
        self.expand_rec(&mut fresh)
    }

    fn expand_rec(&self, fresh: &mut FreshVars) -> Condition {
        match self {
            C::R4(a, b, c, d) => {
                let x = fresh.next();
                C::exists(
                    &x,
                    C::and(
                        C::R(a.clone(), b.clone(), tv(&x)),
                        C::R(tv(&x), c.clone(), d.clone()),
                    ),
                )
            }
            C::RGroup(a, b, c, d) => {
                let x = fresh.next();
                C::exists(
                    &x,
                    C::and(
                        C::R(a.clone(), tv(&x), d.clone()),
                        C::R(b.clone(), c.clone(), tv(&x)),
                    ),
                )
            }
            C::RQ(a, b, c) => {
                let x = fresh.next();
                C::exists(
                    &x,
                    C::and(
                        C::R(a.clone(), b.clone(), tv(&x)),
                        C::Q(tv(&x), c.clone()),
                    ),
                )
            }
            C::QR(a, b, c) => {
                let x = fresh.next();
                C::exists(
                    &x,
                    C::and(
                        C::Q(a.clone(), tv(&x)),
                        C::R(tv(&x), b.clone(), c.clone()),
                    ),
                )
            }
            C::And(a, b) => C::and(a.expand_rec(fresh), b.expand_rec(fresh)),
            C::Or(a, b) => C::or(a.expand_rec(fresh), b.expand_rec(fresh)),
            C::Implies(a, b) => C::implies(a.expand_rec(fresh), b.expand_rec(fresh)),
            C::Forall(v, b) => C::Forall(v.clone(), Box::new(b.expand_rec(fresh))),
            C::Exists(v, b) => C::Exists(v.clone(), Box::new(b.expand_rec(fresh))),
            atom => atom.clone(),
        }
    }

    /// The classicizing rewrite: every `t ∈ L` becomes `∃w(w ∈ W ∧ Q_L w t)`
    /// with a fresh `w`. Conditions without `L` are returned unchanged, and
    /// the rewrite is idempotent.
    pub fn c_variant(&self) -> Condition {
        let mut fresh = FreshVars::new("w", self.all_vars());
        self.c_variant_rec(&mut fresh)
    }

    fn c_variant_rec(&self, fresh: &mut FreshVars) -> Condition {
        match self {
            C::InL(t) => {
                let w = fresh.next();
                C::exists(&w, C::and(C::InW(tv(&w)), C::QL(tv(&w), t.clone())))
            }
            C::And(a, b) => C::and(a.c_variant_rec(fresh), b.c_variant_rec(fresh)),
            C::Or(a, b) => C::or(a.c_variant_rec(fresh), b.c_variant_rec(fresh)),
            C::Implies(a, b) => C::implies(a.c_variant_rec(fresh), b.c_variant_rec(fresh)),
            C::Forall(v, b) => C::Forall(v.clone(), Box::new(b.c_variant_rec(fresh))),
            C::Exists(v, b) => C::Exists(v.clone(), Box::new(b.c_variant_rec(fresh))),
            atom => atom.clone(),
        }
    }

    /// Which relation symbols and designation atoms the condition uses.
    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::default();
        self.visit_vocabulary(&mut v);
        v
    }

    fn visit_vocabulary(&self, v: &mut Vocabulary) {
        match self {
            C::R(_, _, _) | C::R4(_, _, _, _) | C::RGroup(_, _, _, _) => v.r = true,
            C::Q(_, _) => v.q = true,
            C::QL(_, _) => v.ql = true,
            C::RQ(_, _, _) | C::QR(_, _, _) => {
                v.r = true;
                v.q = true;
            }
            C::InL(_) => v.in_l = true,
            C::InW(_) => v.in_w = true,
            C::Leq(_, _) | C::Eq(_, _) => {}
            C::And(a, b) | C::Or(a, b) | C::Implies(a, b) => {
                a.visit_vocabulary(v);
                b.visit_vocabulary(v);
            }
            C::Forall(_, b) | C::Exists(_, b) => b.visit_vocabulary(v),
        }
    }

    pub fn mentions_l(&self) -> bool {
        match self {
            C::InL(_) => true,
            C::And(a, b) | C::Or(a, b) | C::Implies(a, b) => a.mentions_l() || b.mentions_l(),
            C::Forall(_, b) | C::Exists(_, b) => b.mentions_l(),
            _ => false,
        }
    }

    pub fn mentions_w(&self) -> bool {
        match self {
            C::InW(_) => true,
            C::And(a, b) | C::Or(a, b) | C::Implies(a, b) => a.mentions_w() || b.mentions_w(),
            C::Forall(_, b) | C::Exists(_, b) => b.mentions_w(),
            _ => false,
        }
    }
}

/// Relation symbols and designation atoms occurring in a condition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub r: bool,
    pub q: bool,
    pub ql: bool,
    pub in_l: bool,
    pub in_w: bool,
}

struct FreshVars {
    stem: &'static str,
    used: Vec<String>,
    counter: usize,
}

impl FreshVars {
    fn new(stem: &'static str, used: Vec<String>) -> FreshVars {
        FreshVars {
            stem,
            used,
            counter: 0,
        }
    }

    fn next(&mut self) -> String {
        loop {
            let cand = if self.counter == 0 {
                self.stem.to_string()
            } else {
                format!("{}{}", self.stem, self.counter)
            };
            self.counter += 1;
            if !self.used.contains(&cand) {
                self.used.push(cand.clone());
                return cand;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Printing in the paper's notation

fn atom_terms_concat(terms: &[&Term]) -> String {
    terms.iter().map(|t| t.to_string()).collect()
}

fn is_connective(c: &Condition) -> bool {
    matches!(c, C::And(_, _) | C::Or(_, _) | C::Implies(_, _))
}

fn fmt_cond(c: &Condition, out: &mut String) {
    match c {
        C::Leq(a, b) => out.push_str(&format!("{a} ≤ {b}")),
        C::Eq(a, b) => out.push_str(&format!("{a} = {b}")),
        C::R(a, b, c) => out.push_str(&format!("R{}", atom_terms_concat(&[a, b, c]))),
        C::Q(a, b) => out.push_str(&format!("Q{}", atom_terms_concat(&[a, b]))),
        C::QL(a, b) => out.push_str(&format!("Q_L {}", atom_terms_concat(&[a, b]))),
        C::InL(t) => out.push_str(&format!("{t} ∈ L")),
        C::InW(t) => out.push_str(&format!("{t} ∈ W")),
        C::R4(a, b, c, d) => out.push_str(&format!("R{}", atom_terms_concat(&[a, b, c, d]))),
        C::RGroup(a, b, c, d) => {
            out.push_str(&format!("R{}({}){}", a, atom_terms_concat(&[b, c]), d))
        }
        C::RQ(a, b, c) => out.push_str(&format!("RQ{}", atom_terms_concat(&[a, b, c]))),
        C::QR(a, b, c) => out.push_str(&format!("QR{}", atom_terms_concat(&[a, b, c]))),
        C::And(a, b) => {
            let wrap = |x: &Condition, out: &mut String| {
                if matches!(x, C::Or(_, _) | C::Implies(_, _)) {
                    out.push('(');
                    fmt_cond(x, out);
                    out.push(')');
                } else {
                    fmt_cond(x, out);
                }
            };
            wrap(a, out);
            out.push_str(" ∧ ");
            wrap(b, out);
        }
        C::Or(a, b) => {
            let wrap = |x: &Condition, out: &mut String| {
                if matches!(x, C::Implies(_, _)) {
                    out.push('(');
                    fmt_cond(x, out);
                    out.push(')');
                } else {
                    fmt_cond(x, out);
                }
            };
            wrap(a, out);
            out.push_str(" ∨ ");
            wrap(b, out);
        }
        C::Implies(a, b) => {
            // compound sides of an implication get parentheses
            if is_connective(a) {
                out.push('(');
                fmt_cond(a, out);
                out.push(')');
            } else {
                fmt_cond(a, out);
            }
            out.push_str(" ⇒ ");
            if is_connective(b) {
                out.push('(');
                fmt_cond(b, out);
                out.push(')');
            } else {
                fmt_cond(b, out);
            }
        }
        C::Forall(_, _) | C::Exists(_, _) => {
            // adjacent quantifiers of the same kind merge: ∃w,t(...);
            // an alternating quantifier follows without parentheses
            let (sym, vars, body) = collect_quantifiers(c);
            out.push_str(sym);
            out.push_str(&vars.join(","));
            if matches!(body, C::Forall(_, _) | C::Exists(_, _)) {
                fmt_cond(body, out);
            } else {
                out.push('(');
                fmt_cond(body, out);
                out.push(')');
            }
        }
    }
}

fn collect_quantifiers(c: &Condition) -> (&'static str, Vec<&str>, &Condition) {
    match c {
        C::Forall(v, b) => {
            let mut vars = vec![v.as_str()];
            let mut body: &Condition = b;
            while let C::Forall(v2, b2) = body {
                vars.push(v2.as_str());
                body = b2;
            }
            ("∀", vars, body)
        }
        C::Exists(v, b) => {
            let mut vars = vec![v.as_str()];
            let mut body: &Condition = b;
            while let C::Exists(v2, b2) = body {
                vars.push(v2.as_str());
                body = b2;
            }
            ("∃", vars, body)
        }
        _ => unreachable!("collect_quantifiers on non-quantifier"),
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        fmt_cond(self, &mut s);
        f.write_str(&s)
    }
}

// ---------------------------------------------------------------------------
// Evaluation

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConditionError {
    #[error("condition mentions `∈ L` but the structure has no L-designation")]
    NeedsL,
    #[error("condition mentions `∈ W` but the structure has no W-designation")]
    NeedsW,
    #[error("unbound condition variable {0:?}")]
    Unbound(String),
}

/// Outcome of evaluating a closed condition: holds, or a falsifying
/// assignment for the outermost universal variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub holds: bool,
    pub witness: Vec<(String, String)>,
}

struct Env<'a> {
    st: &'a Structure,
    des: &'a Designation,
    stack: Vec<(String, usize)>,
}

impl Env<'_> {
    fn term(&self, t: &Term) -> Result<usize, ConditionError> {
        match t {
            Term::Var(v) => self
                .stack
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|(_, s)| *s)
                .ok_or_else(|| ConditionError::Unbound(v.clone())),
            Term::Star(inner) => Ok(self.st.star(self.term(inner)?)),
        }
    }

    fn eval(&mut self, c: &Condition) -> Result<bool, ConditionError> {
        match c {
            C::Leq(a, b) => Ok(self.st.leq(self.term(a)?, self.term(b)?)),
            C::Eq(a, b) => Ok(self.term(a)? == self.term(b)?),
            C::R(a, b, cc) => {
                Ok(self
                    .st
                    .r_contains(self.term(a)?, self.term(b)?, self.term(cc)?))
            }
            C::Q(a, b) => Ok(self.st.q_set(self.term(a)?).contains(self.term(b)?)),
            C::QL(a, b) => Ok(self.st.ql_set(self.term(a)?).contains(self.term(b)?)),
            C::InL(t) => match self.des {
                Designation::L(set) => Ok(set.contains(self.term(t)?)),
                _ => Err(ConditionError::NeedsL),
            },
            C::InW(t) => match self.des {
                Designation::W(set) => Ok(set.contains(self.term(t)?)),
                _ => Err(ConditionError::NeedsW),
            },
            C::And(a, b) => Ok(self.eval(a)? && self.eval(b)?),
            C::Or(a, b) => Ok(self.eval(a)? || self.eval(b)?),
            C::Implies(a, b) => Ok(!self.eval(a)? || self.eval(b)?),
            C::Forall(v, body) => {
                for s in 0..self.st.len() {
                    self.stack.push((v.clone(), s));
                    let r = self.eval(body);
                    self.stack.pop();
                    if !r? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            C::Exists(v, body) => {
                for s in 0..self.st.len() {
                    self.stack.push((v.clone(), s));
                    let r = self.eval(body);
                    self.stack.pop();
                    if r? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            C::R4(_, _, _, _) | C::RGroup(_, _, _, _) | C::RQ(_, _, _) | C::QR(_, _, _) => {
                unreachable!("macros must be expanded before evaluation")
            }
        }
    }

    /// Search a falsifying assignment for the leading universal prefix.
    fn falsify(&mut self, c: &Condition) -> Result<Option<Vec<(String, usize)>>, ConditionError> {
        if let C::Forall(v, body) = c {
            for s in 0..self.st.len() {
                self.stack.push((v.clone(), s));
                let r = self.falsify(body);
                self.stack.pop();
                if let Some(mut w) = r? {
                    w.insert(0, (v.clone(), s));
                    return Ok(Some(w));
                }
            }
            return Ok(None);
        }
        if self.eval(c)? {
            Ok(None)
        } else {
            Ok(Some(Vec::new()))
        }
    }
}

/// Evaluate a condition against a designated structure. Free variables are
/// read universally; on failure the witness binds the outermost falsifying
/// universals.
pub fn evaluate_condition(
    st: &Structure,
    des: &Designation,
    c: &Condition,
) -> Result<CheckOutcome, ConditionError> {
    let prepared = c.expand_macros().closed();
    let mut env = Env {
        st,
        des,
        stack: Vec::new(),
    };
    match env.falsify(&prepared)? {
        None => Ok(CheckOutcome {
            holds: true,
            witness: Vec::new(),
        }),
        Some(assignment) => Ok(CheckOutcome {
            holds: false,
            witness: assignment
                .into_iter()
                .map(|(v, s)| (v, st.name(s).to_string()))
                .collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Structure;

    fn discrete2() -> Structure {
        Structure::new(
            vec!["a".into(), "b".into()],
            &[(0, 0), (1, 1)],
            vec![1, 0],
            &[],
            &[(0, 1)],
            &[],
            None,
        )
    }

    #[test]
    fn dn_on_star_swap() {
        let st = discrete2();
        let dn = C::Eq(tstar(tstar(tv("s"))), tv("s"));
        let out = evaluate_condition(&st, &Designation::None, &dn).unwrap();
        assert!(out.holds);
    }

    #[test]
    fn box4_failure_witness() {
        // Q = {(a,b),(b,c)} without (a,c)
        let st = Structure::new(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 0), (1, 1), (2, 2)],
            vec![0, 1, 2],
            &[],
            &[(0, 1), (1, 2)],
            &[],
            None,
        );
        let box4 = C::implies(
            C::and(C::Q(tv("s"), tv("t")), C::Q(tv("t"), tv("u"))),
            C::Q(tv("s"), tv("u")),
        );
        let out = evaluate_condition(&st, &Designation::None, &box4).unwrap();
        assert!(!out.holds);
        assert_eq!(
            out.witness,
            vec![
                ("s".to_string(), "a".to_string()),
                ("t".to_string(), "b".to_string()),
                ("u".to_string(), "c".to_string())
            ]
        );
    }

    #[test]
    fn inl_needs_l_designation() {
        let st = discrete2();
        let x = C::implies(C::InL(tv("s")), C::Leq(tstar(tv("s")), tv("s")));
        assert_eq!(
            evaluate_condition(&st, &Designation::None, &x),
            Err(ConditionError::NeedsL)
        );
    }

    #[test]
    fn c_variant_removes_l_and_is_idempotent() {
        let x = C::implies(C::InL(tv("s")), C::Leq(tstar(tv("s")), tv("s")));
        let cx = x.c_variant();
        assert!(!cx.mentions_l());
        assert!(cx.mentions_w());
        assert_eq!(cx.c_variant(), cx);
        assert_eq!(cx.to_string(), "∃w(w ∈ W ∧ Q_L ws) ⇒ s* ≤ s");
    }

    #[test]
    fn c_variant_identity_on_l_free() {
        let box4 = C::implies(
            C::and(C::Q(tv("s"), tv("t")), C::Q(tv("t"), tv("u"))),
            C::Q(tv("s"), tv("u")),
        );
        assert_eq!(box4.c_variant(), box4);
    }

    #[test]
    fn c_variant_avoids_capture() {
        // a condition already using `w`: the fresh witness must pick w1
        let c = C::forall("w", C::implies(C::InL(tv("w")), C::Q(tv("w"), tv("w"))));
        let cv = c.c_variant();
        let vars = cv.all_vars();
        assert!(vars.contains(&"w1".to_string()), "{vars:?}");
    }

    #[test]
    fn macro_expansion_matches_definitions() {
        // (W): Rstu => Rsttu, i.e. Rstu => ∃x(Rstx ∧ Rxtu)
        let w = C::implies(
            C::R(tv("s"), tv("t"), tv("u")),
            C::R4(tv("s"), tv("t"), tv("t"), tv("u")),
        );
        let expanded = w.expand_macros();
        let expected = C::implies(
            C::R(tv("s"), tv("t"), tv("u")),
            C::exists(
                "x",
                C::and(
                    C::R(tv("s"), tv("t"), tv("x")),
                    C::R(tv("x"), tv("t"), tv("u")),
                ),
            ),
        );
        assert_eq!(expanded, expected);
    }

    #[test]
    fn display_figure_style() {
        let cp = C::implies(
            C::R(tv("s"), tv("t"), tv("u")),
            C::R(tv("s"), tstar(tv("u")), tstar(tv("t"))),
        );
        assert_eq!(cp.to_string(), "Rstu ⇒ Rsu*t*");
        let m = C::implies(
            C::R(tv("s"), tv("t"), tv("u")),
            C::or(C::Leq(tv("s"), tv("u")), C::Leq(tv("t"), tv("u"))),
        );
        assert_eq!(m.to_string(), "Rstu ⇒ (s ≤ u ∨ t ≤ u)");
        let b = C::implies(
            C::R4(tv("s"), tv("t"), tv("u"), tv("v")),
            C::RGroup(tv("s"), tv("t"), tv("u"), tv("v")),
        );
        assert_eq!(b.to_string(), "Rstuv ⇒ Rs(tu)v");
        let er = C::exists(
            "x",
            C::and(C::InL(tv("x")), C::R(tv("s"), tv("x"), tv("s"))),
        );
        assert_eq!(er.to_string(), "∃x(x ∈ L ∧ Rsxs)");
    }

    #[test]
    fn quantifier_merge_display() {
        let c = C::forall(
            "s",
            C::exists(
                "w",
                C::exists(
                    "t",
                    C::and(
                        C::and(C::InW(tv("w")), C::QL(tv("w"), tv("t"))),
                        C::R(tv("s"), tv("t"), tv("s")),
                    ),
                ),
            ),
        );
        assert_eq!(c.to_string(), "∀s∃w,t(w ∈ W ∧ Q_L wt ∧ Rsts)");
    }
}
