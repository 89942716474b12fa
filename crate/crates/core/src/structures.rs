//! Finite frames and models: carrier with an information order, the ternary
//! relation `R`, the star function, the modal relations `Q`/`QL`, optional
//! bounds, and the two designation styles (logical states `L`, worlds `W`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{Report, Violation};
use crate::semantics::StateSet;

/// Maximum carrier size; relations are kept in 64-bit masks.
pub const MAX_STATES: usize = 32;

/// A finite structure over named states. Relations are stored densely by
/// state index; validation is separate so that arbitrary raw data can be
/// loaded and then checked in full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    names: Vec<String>,
    /// `up[s]` is `{ t | s <= t }`.
    up: Vec<StateSet>,
    star: Vec<usize>,
    /// `r[s][t]` is `{ u | Rstu }`.
    r: Vec<Vec<StateSet>>,
    q: Vec<StateSet>,
    ql: Vec<StateSet>,
    bounds: Option<(usize, usize)>,
}

impl Structure {
    pub fn new(
        names: Vec<String>,
        leq: &[(usize, usize)],
        star: Vec<usize>,
        r: &[(usize, usize, usize)],
        q: &[(usize, usize)],
        ql: &[(usize, usize)],
        bounds: Option<(usize, usize)>,
    ) -> Structure {
        let n = names.len();
        assert!(n <= MAX_STATES, "carrier too large ({n} > {MAX_STATES})");
        assert_eq!(star.len(), n, "star must be total");
        let mut up = vec![StateSet::empty(); n];
        for &(s, t) in leq {
            up[s].insert(t);
        }
        let mut rr = vec![vec![StateSet::empty(); n]; n];
        for &(s, t, u) in r {
            rr[s][t].insert(u);
        }
        let mut qq = vec![StateSet::empty(); n];
        for &(s, t) in q {
            qq[s].insert(t);
        }
        let mut qql = vec![StateSet::empty(); n];
        for &(s, t) in ql {
            qql[s].insert(t);
        }
        Structure {
            names,
            up,
            star,
            r: rr,
            q: qq,
            ql: qql,
            bounds,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.len())
    }

    pub fn leq(&self, s: usize, t: usize) -> bool {
        self.up[s].contains(t)
    }

    /// `{ t | s <= t }`
    pub fn up_set(&self, s: usize) -> StateSet {
        self.up[s]
    }

    /// `{ t | t <= s }`
    pub fn down_set(&self, s: usize) -> StateSet {
        let mut out = StateSet::empty();
        for t in 0..self.len() {
            if self.leq(t, s) {
                out.insert(t);
            }
        }
        out
    }

    pub fn star(&self, s: usize) -> usize {
        self.star[s]
    }

    pub fn r_contains(&self, s: usize, t: usize, u: usize) -> bool {
        self.r[s][t].contains(u)
    }

    /// `{ u | Rstu }`
    pub fn r_out(&self, s: usize, t: usize) -> StateSet {
        self.r[s][t]
    }

    pub fn q_set(&self, s: usize) -> StateSet {
        self.q[s]
    }

    pub fn ql_set(&self, s: usize) -> StateSet {
        self.ql[s]
    }

    pub fn bounds(&self) -> Option<(usize, usize)> {
        self.bounds
    }

    pub fn is_up_closed(&self, set: StateSet) -> bool {
        set.iter().all(|s| self.up[s].is_subset_of(set))
    }

    pub fn up_closure(&self, set: StateSet) -> StateSet {
        let mut out = StateSet::empty();
        for s in set.iter() {
            out = out.union(self.up[s]);
        }
        out
    }

    /// Image `B(X)` of a binary relation given as rows.
    pub fn ql_image(&self, set: StateSet) -> StateSet {
        let mut out = StateSet::empty();
        for s in set.iter() {
            out = out.union(self.ql[s]);
        }
        out
    }

    fn w(&self, s: usize) -> String {
        self.names[s].clone()
    }

    /// Partial-order laws for the information order.
    pub fn check_order(&self) -> Report {
        let mut rep = Report::ok();
        let n = self.len();
        for s in 0..n {
            if !self.leq(s, s) {
                rep.push(Violation::new(
                    "leq-reflexive",
                    vec![("s".into(), self.w(s))],
                    "leq is not reflexive".into(),
                ));
            }
        }
        for s in 0..n {
            for t in (s + 1)..n {
                if self.leq(s, t) && self.leq(t, s) {
                    rep.push(Violation::new(
                        "leq-antisymmetric",
                        vec![("s".into(), self.w(s)), ("t".into(), self.w(t))],
                        "distinct states below each other".into(),
                    ));
                }
            }
        }
        for s in 0..n {
            for t in self.up[s].iter() {
                for u in self.up[t].iter() {
                    if !self.leq(s, u) {
                        rep.push(Violation::new(
                            "leq-transitive",
                            vec![
                                ("s".into(), self.w(s)),
                                ("t".into(), self.w(t)),
                                ("u".into(), self.w(u)),
                            ],
                            "missing s <= u".into(),
                        ));
                    }
                }
            }
        }
        rep
    }

    /// Tonicity of `R` (down, down, up), `star` (antitone) and `Q`/`QL`
    /// (down, up). Assumes the order already validated; every missing tuple
    /// is reported once.
    pub fn check_tonicity(&self) -> Report {
        let mut rep = Report::ok();
        let n = self.len();

        // star: s <= t implies star(t) <= star(s)
        for s in 0..n {
            for t in self.up[s].iter() {
                if !self.leq(self.star[t], self.star[s]) {
                    rep.push(Violation::new(
                        "tonicity-star",
                        vec![("s".into(), self.w(s)), ("t".into(), self.w(t))],
                        format!(
                            "s <= t but not t* <= s* (t* = {}, s* = {})",
                            self.w(self.star[t]),
                            self.w(self.star[s])
                        ),
                    ));
                }
            }
        }

        // R: Rstu, s' <= s, t' <= t, u <= u' implies Rs't'u'
        let mut missing: Vec<(usize, usize, usize, (usize, usize, usize))> = Vec::new();
        for s in 0..n {
            for t in 0..n {
                for u in self.r[s][t].iter() {
                    for s2 in self.down_set(s).iter() {
                        for t2 in self.down_set(t).iter() {
                            for u2 in self.up[u].iter() {
                                if !self.r_contains(s2, t2, u2)
                                    && !missing.iter().any(|m| (m.0, m.1, m.2) == (s2, t2, u2))
                                {
                                    missing.push((s2, t2, u2, (s, t, u)));
                                }
                            }
                        }
                    }
                }
            }
        }
        for (s2, t2, u2, (s, t, u)) in missing {
            rep.push(Violation::new(
                "tonicity-R",
                vec![
                    ("s'".into(), self.w(s2)),
                    ("t'".into(), self.w(t2)),
                    ("u'".into(), self.w(u2)),
                ],
                format!(
                    "R{}{}{} requires R{}{}{} (R is of type down,down,up)",
                    self.w(s),
                    self.w(t),
                    self.w(u),
                    self.w(s2),
                    self.w(t2),
                    self.w(u2)
                ),
            ));
        }

        for (tag, rel) in [("tonicity-Q", &self.q), ("tonicity-QL", &self.ql)] {
            let mut missing: Vec<(usize, usize, (usize, usize))> = Vec::new();
            for s in 0..n {
                for t in rel[s].iter() {
                    for s2 in self.down_set(s).iter() {
                        for t2 in self.up[t].iter() {
                            if !rel[s2].contains(t2)
                                && !missing.iter().any(|m| (m.0, m.1) == (s2, t2))
                            {
                                missing.push((s2, t2, (s, t)));
                            }
                        }
                    }
                }
            }
            for (s2, t2, (s, t)) in missing {
                rep.push(Violation::new(
                    tag,
                    vec![("s'".into(), self.w(s2)), ("t'".into(), self.w(t2))],
                    format!(
                        "{}{}{} requires the pair ({}, {}) (type down,up)",
                        tag.trim_start_matches("tonicity-"),
                        self.w(s),
                        self.w(t),
                        self.w(s2),
                        self.w(t2)
                    ),
                ));
            }
        }
        rep
    }

    /// The bounded-frame equations; requires declared bounds.
    pub fn check_bounded(&self) -> Report {
        let mut rep = Report::ok();
        let Some((zero, one)) = self.bounds else {
            rep.push(Violation::new(
                "bounds-declared",
                vec![],
                "check_bounded called without declared bounds".into(),
            ));
            return rep;
        };
        let n = self.len();
        for s in 0..n {
            if !self.leq(zero, s) || !self.leq(s, one) {
                rep.push(Violation::new(
                    "bounds (0<=s<=1)",
                    vec![("s".into(), self.w(s))],
                    "state not between the bounds".into(),
                ));
            }
        }
        if self.star[one] != zero {
            rep.push(Violation::new(
                "eq (1*=0)",
                vec![("1*".into(), self.w(self.star[one]))],
                "star of the top bound must be the bottom bound".into(),
            ));
        }
        if self.star[zero] != one {
            rep.push(Violation::new(
                "eq (0*=1)",
                vec![("0*".into(), self.w(self.star[zero]))],
                "star of the bottom bound must be the top bound".into(),
            ));
        }
        if !self.q[zero].contains(zero) {
            rep.push(Violation::new("eq (Q00)", vec![], "Q00 must hold".into()));
        }
        if !self.ql[zero].contains(zero) {
            rep.push(Violation::new("eq (QL00)", vec![], "QL00 must hold".into()));
        }
        for t in self.q[one].iter() {
            if t != one {
                rep.push(Violation::new(
                    "eq (Q1s => s=1)",
                    vec![("s".into(), self.w(t))],
                    "Q from the top bound may only reach the top bound".into(),
                ));
            }
        }
        for t in self.ql[one].iter() {
            if t != one {
                rep.push(Violation::new(
                    "eq (QL1s => s=1)",
                    vec![("s".into(), self.w(t))],
                    "QL from the top bound may only reach the top bound".into(),
                ));
            }
        }
        if !self.r_contains(zero, one, zero) {
            rep.push(Violation::new("eq (R010)", vec![], "R010 must hold".into()));
        }
        for s in 0..n {
            for t in self.r[one][s].iter() {
                if s != zero && t != one {
                    rep.push(Violation::new(
                        "eq (R1st => s=0 or t=1)",
                        vec![("s".into(), self.w(s)), ("t".into(), self.w(t))],
                        "R from the top bound must route through the bounds".into(),
                    ));
                }
            }
        }
        rep
    }

    /// States passing all four possible-world tests. Empty without bounds
    /// (two of the tests mention them).
    pub fn possible_worlds(&self) -> StateSet {
        let Some((zero, one)) = self.bounds else {
            return StateSet::empty();
        };
        let mut out = StateSet::empty();
        'next: for w in 0..self.len() {
            if self.star[w] != w || !self.r_contains(w, w, w) {
                continue;
            }
            for s in 0..self.len() {
                for t in self.r[w][s].iter() {
                    if s != zero && !self.leq(w, t) {
                        continue 'next;
                    }
                    if t != one && !self.leq(s, self.star[w]) {
                        continue 'next;
                    }
                }
            }
            out.insert(w);
        }
        out
    }

    /// Full structural validation: order, tonicity, and - when bounds are
    /// declared - the bounded equations.
    pub fn validate(&self) -> Report {
        let mut rep = self.check_order();
        if rep.is_ok() {
            rep.merge(self.check_tonicity());
        }
        if self.bounds.is_some() {
            rep.merge(self.check_bounded());
        }
        rep
    }
}

/// Designated states defining validity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Designation {
    None,
    /// Logical states (upward closed, laws L1/L2).
    L(StateSet),
    /// Possible worlds (requires bounds).
    W(StateSet),
}

impl Designation {
    pub fn kind(&self) -> &'static str {
        match self {
            Designation::None => "none",
            Designation::L(_) => "L",
            Designation::W(_) => "W",
        }
    }

    pub fn set(&self) -> StateSet {
        match self {
            Designation::None => StateSet::empty(),
            Designation::L(s) | Designation::W(s) => *s,
        }
    }
}

/// A structure with a designation and a valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub structure: Structure,
    pub designation: Designation,
    valuation: BTreeMap<String, StateSet>,
}

impl Model {
    pub fn new(
        structure: Structure,
        designation: Designation,
        valuation: BTreeMap<String, StateSet>,
    ) -> Model {
        Model {
            structure,
            designation,
            valuation,
        }
    }

    /// Valuation of a variable. Variables not named in the model get the
    /// minimal admissible value: empty, or `{1}` when the model is bounded.
    pub fn valuation_of(&self, var: &str) -> StateSet {
        if let Some(v) = self.valuation.get(var) {
            return *v;
        }
        match self.structure.bounds() {
            Some((_, one)) => StateSet::singleton(one),
            None => StateSet::empty(),
        }
    }

    pub fn declared_variables(&self) -> impl Iterator<Item = &String> {
        self.valuation.keys()
    }

    pub fn valuation(&self) -> &BTreeMap<String, StateSet> {
        &self.valuation
    }

    pub(crate) fn set_valuation(&mut self, valuation: BTreeMap<String, StateSet>) {
        self.valuation = valuation;
    }

    /// Designation-specific laws: upward closure, L1 and L2 for `L`;
    /// world membership and the two QL laws for `W`.
    pub fn check_designation(&self) -> Report {
        designation_report(&self.structure, &self.designation)
    }
}

/// Designation laws, checkable before a valuation exists.
pub fn designation_report(st: &Structure, designation: &Designation) -> Report {
    let mut rep = Report::ok();
    let n = st.len();
    {
        match designation {
            Designation::None => {}
            Designation::L(set) => {
                if !st.is_up_closed(*set) {
                    rep.push(Violation::new(
                        "L-up-closed",
                        vec![],
                        "L is not upward closed".into(),
                    ));
                }
                for s in 0..n {
                    let ok = set.iter().any(|x| st.r_contains(x, s, s));
                    if !ok {
                        rep.push(Violation::new(
                            "(L1)",
                            vec![("s".into(), st.w(s))],
                            "no x in L with Rxss".into(),
                        ));
                    }
                }
                for s in set.iter() {
                    for t in 0..n {
                        for u in st.r[s][t].iter() {
                            if !st.leq(t, u) {
                                rep.push(Violation::new(
                                    "(L2)",
                                    vec![
                                        ("s".into(), st.w(s)),
                                        ("t".into(), st.w(t)),
                                        ("u".into(), st.w(u)),
                                    ],
                                    "s in L and Rstu but not t <= u".into(),
                                ));
                            }
                        }
                    }
                }
            }
            Designation::W(set) => {
                let Some(_) = st.bounds() else {
                    rep.push(Violation::new(
                        "W-requires-bounds",
                        vec![],
                        "a W-designation needs declared bounds".into(),
                    ));
                    return rep;
                };
                let worlds = st.possible_worlds();
                for s in set.iter() {
                    if !worlds.contains(s) {
                        rep.push(Violation::new(
                            "W-possible-world",
                            vec![("w".into(), st.w(s))],
                            "designated state fails a possible-world test".into(),
                        ));
                    }
                }
                // (Q_L-s<t): w in W, QLwu, Rust => s <= t
                for w in set.iter() {
                    for u in st.ql[w].iter() {
                        for s in 0..n {
                            for t in st.r[u][s].iter() {
                                if !st.leq(s, t) {
                                    rep.push(Violation::new(
                                        "(Q_L-s<t)",
                                        vec![
                                            ("w".into(), st.w(w)),
                                            ("u".into(), st.w(u)),
                                            ("s".into(), st.w(s)),
                                            ("t".into(), st.w(t)),
                                        ],
                                        "QLwu and Rust but not s <= t".into(),
                                    ));
                                }
                            }
                        }
                    }
                }
                // (Q_L-ss): for all s there are w in W, u with QLwu and Russ
                for s in 0..n {
                    let ok = set
                        .iter()
                        .any(|w| st.ql[w].iter().any(|u| st.r_contains(u, s, s)));
                    if !ok {
                        rep.push(Violation::new(
                            "(Q_L-ss)",
                            vec![("s".into(), st.w(s))],
                            "no w in W and u with QLwu and Russ".into(),
                        ));
                    }
                }
            }
        }
    }
    rep
}

impl Model {
    /// Valuation laws: upward closure, and in bounded models `1 in V(p)`,
    /// `0 not in V(p)` plus distinct bounds.
    pub fn check_valuation(&self) -> Report {
        let mut rep = Report::ok();
        let st = &self.structure;
        for (var, set) in &self.valuation {
            if !st.is_up_closed(*set) {
                rep.push(Violation::new(
                    "valuation-up-closed",
                    vec![("var".into(), var.clone())],
                    format!("V({var}) is not upward closed"),
                ));
            }
        }
        if let Some((zero, one)) = st.bounds() {
            if zero == one {
                rep.push(Violation::new(
                    "bounds-distinct",
                    vec![("0".into(), st.w(zero))],
                    "models require 0 and 1 to be distinct states".into(),
                ));
            }
            for (var, set) in &self.valuation {
                if !set.contains(one) {
                    rep.push(Violation::new(
                        "valuation-1",
                        vec![("var".into(), var.clone())],
                        format!("1 must be in V({var})"),
                    ));
                }
                if set.contains(zero) {
                    rep.push(Violation::new(
                        "valuation-0",
                        vec![("var".into(), var.clone())],
                        format!("0 must not be in V({var})"),
                    ));
                }
            }
        }
        rep
    }

    /// Full validation: structure, designation, valuation.
    pub fn validate(&self) -> Report {
        let mut rep = self.structure.validate();
        rep.merge(self.check_designation());
        rep.merge(self.check_valuation());
        rep
    }
}

// ---------------------------------------------------------------------------
// Model files

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub states: Vec<String>,
    pub leq: Vec<(String, String)>,
    pub star: BTreeMap<String, String>,
    #[serde(rename = "R")]
    pub r: Vec<(String, String, String)>,
    #[serde(rename = "Q")]
    pub q: Vec<(String, String)>,
    #[serde(rename = "QL")]
    pub ql: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsDoc>,
    pub designation: DesignationDoc,
    pub valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsDoc {
    pub zero: String,
    pub one: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignationDoc {
    pub kind: DesignationKindDoc,
    pub set: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DesignationKindDoc {
    L,
    W,
    #[serde(rename = "none")]
    None,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("model file parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("model file invalid:\n{report}")]
    Invalid { report: Report },
}

impl ModelDoc {
    /// Resolve names and check file well-formedness; all problems are
    /// collected, not just the first.
    pub fn build(&self) -> Result<Model, Report> {
        let mut rep = Report::ok();
        let names = self.states.clone();
        let n = names.len();
        if n > MAX_STATES {
            rep.push(Violation::new(
                "carrier-size",
                vec![],
                format!("at most {MAX_STATES} states are supported"),
            ));
            return Err(rep);
        }
        for (i, s) in names.iter().enumerate() {
            if names[..i].contains(s) {
                rep.push(Violation::new(
                    "duplicate-state",
                    vec![("s".into(), s.clone())],
                    "state id declared twice".into(),
                ));
            }
        }
        let idx = |name: &str, rep: &mut Report| -> Option<usize> {
            let i = names.iter().position(|x| x == name);
            if i.is_none() {
                rep.push(Violation::new(
                    "unknown-state",
                    vec![("s".into(), name.to_string())],
                    "state id not declared in `states`".into(),
                ));
            }
            i
        };

        let mut leq = Vec::new();
        for (a, b) in &self.leq {
            if let (Some(x), Some(y)) = (idx(a, &mut rep), idx(b, &mut rep)) {
                leq.push((x, y));
            }
        }
        let mut star = vec![usize::MAX; n];
        for (a, b) in &self.star {
            if let (Some(x), Some(y)) = (idx(a, &mut rep), idx(b, &mut rep)) {
                star[x] = y;
            }
        }
        for (i, &v) in star.iter().enumerate() {
            if v == usize::MAX {
                rep.push(Violation::new(
                    "star-total",
                    vec![("s".into(), names[i].clone())],
                    "star not total".into(),
                ));
            }
        }
        let mut r = Vec::new();
        for (a, b, c) in &self.r {
            if let (Some(x), Some(y), Some(z)) =
                (idx(a, &mut rep), idx(b, &mut rep), idx(c, &mut rep))
            {
                r.push((x, y, z));
            }
        }
        let mut q = Vec::new();
        for (a, b) in &self.q {
            if let (Some(x), Some(y)) = (idx(a, &mut rep), idx(b, &mut rep)) {
                q.push((x, y));
            }
        }
        let mut ql = Vec::new();
        for (a, b) in &self.ql {
            if let (Some(x), Some(y)) = (idx(a, &mut rep), idx(b, &mut rep)) {
                ql.push((x, y));
            }
        }
        let bounds = match &self.bounds {
            Some(b) => match (idx(&b.zero, &mut rep), idx(&b.one, &mut rep)) {
                (Some(z), Some(o)) => Some((z, o)),
                _ => None,
            },
            None => None,
        };
        let mut dset = StateSet::empty();
        for s in &self.designation.set {
            if let Some(i) = idx(s, &mut rep) {
                dset.insert(i);
            }
        }
        let designation = match self.designation.kind {
            DesignationKindDoc::L => Designation::L(dset),
            DesignationKindDoc::W => Designation::W(dset),
            DesignationKindDoc::None => {
                if !self.designation.set.is_empty() {
                    rep.push(Violation::new(
                        "designation-none-empty",
                        vec![],
                        "designation kind \"none\" must have an empty set".into(),
                    ));
                }
                Designation::None
            }
        };
        let mut valuation = BTreeMap::new();
        for (var, sts) in &self.valuation {
            if !is_valid_var(var) {
                rep.push(Violation::new(
                    "invalid-variable",
                    vec![("var".into(), var.clone())],
                    "variable names are lowercase-led identifiers".into(),
                ));
            }
            let mut set = StateSet::empty();
            for s in sts {
                if let Some(i) = idx(s, &mut rep) {
                    set.insert(i);
                }
            }
            valuation.insert(var.clone(), set);
        }
        if !rep.is_ok() {
            return Err(rep);
        }
        let structure = Structure::new(names, &leq, star, &r, &q, &ql, bounds);
        Ok(Model::new(structure, designation, valuation))
    }
}

fn is_valid_var(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Parse, build and fully validate a model file.
pub fn load_model_str(text: &str) -> Result<Model, LoadError> {
    let doc: ModelDoc = serde_json::from_str(text)?;
    let model = doc.build().map_err(|report| LoadError::Invalid { report })?;
    let report = model.validate();
    if !report.is_ok() {
        return Err(LoadError::Invalid { report });
    }
    Ok(model)
}

impl Model {
    /// Serialize back to the file format, with relations as sorted tuple
    /// lists so output is deterministic.
    pub fn to_doc(&self) -> ModelDoc {
        let st = &self.structure;
        let n = st.len();
        let name = |i: usize| st.name(i).to_string();
        let mut leq = Vec::new();
        let mut r = Vec::new();
        let mut q = Vec::new();
        let mut ql = Vec::new();
        for s in 0..n {
            for t in st.up_set(s).iter() {
                leq.push((name(s), name(t)));
            }
            for t in st.q_set(s).iter() {
                q.push((name(s), name(t)));
            }
            for t in st.ql_set(s).iter() {
                ql.push((name(s), name(t)));
            }
            for t in 0..n {
                for u in st.r_out(s, t).iter() {
                    r.push((name(s), name(t), name(u)));
                }
            }
        }
        leq.sort();
        r.sort();
        q.sort();
        ql.sort();
        let star = (0..n).map(|s| (name(s), name(st.star(s)))).collect();
        let valuation = self
            .valuation
            .iter()
            .map(|(v, set)| {
                let mut xs: Vec<String> = set.iter().map(name).collect();
                xs.sort();
                (v.clone(), xs)
            })
            .collect();
        let mut dset: Vec<String> = self.designation.set().iter().map(name).collect();
        dset.sort();
        ModelDoc {
            states: st.names().to_vec(),
            leq,
            star,
            r,
            q,
            ql,
            bounds: st.bounds().map(|(z, o)| BoundsDoc {
                zero: name(z),
                one: name(o),
            }),
            designation: DesignationDoc {
                kind: match self.designation {
                    Designation::None => DesignationKindDoc::None,
                    Designation::L(_) => DesignationKindDoc::L,
                    Designation::W(_) => DesignationKindDoc::W,
                },
                set: dset,
            },
            valuation,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("model serialization cannot fail")
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let st = &self.structure;
        writeln!(f, "states: {}", st.names().join(", "))?;
        if let Some((z, o)) = st.bounds() {
            writeln!(f, "bounds: 0 = {}, 1 = {}", st.name(z), st.name(o))?;
        }
        let dset: Vec<&str> = self.designation.set().iter().map(|s| st.name(s)).collect();
        writeln!(
            f,
            "designation: {} {{{}}}",
            self.designation.kind(),
            dset.join(", ")
        )?;
        for (var, set) in &self.valuation {
            let xs: Vec<&str> = set.iter().map(|s| st.name(s)).collect();
            writeln!(f, "V({var}) = {{{}}}", xs.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const ONE_STATE_L: &str = r#"{
        "states": ["s"],
        "leq": [["s","s"]],
        "star": {"s": "s"},
        "R": [["s","s","s"]],
        "Q": [],
        "QL": [],
        "designation": {"kind": "L", "set": ["s"]},
        "valuation": {"p": ["s"]}
    }"#;

    #[test]
    fn one_state_l_model_is_valid() {
        let m = load_model_str(ONE_STATE_L).unwrap();
        assert_eq!(m.structure.len(), 1);
        assert_eq!(m.designation.kind(), "L");
    }

    #[test]
    fn missing_star_reports_not_total() {
        let text = ONE_STATE_L.replace(r#""star": {"s": "s"},"#, r#""star": {},"#);
        match load_model_str(&text) {
            Err(LoadError::Invalid { report }) => {
                assert!(report.mentions("star-total"), "{report}");
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = ONE_STATE_L.replace(r#""valuation""#, r#""extra": 1, "valuation""#);
        assert!(matches!(load_model_str(&text), Err(LoadError::Json(_))));
    }

    fn bounded_doc(star_one: &str) -> String {
        format!(
            r#"{{
            "states": ["z", "o"],
            "leq": [["z","z"],["z","o"],["o","o"]],
            "star": {{"z": "o", "o": "{star_one}"}},
            "R": [["z","z","z"],["z","z","o"],["z","o","z"],["z","o","o"]],
            "Q": [["z","z"],["z","o"]],
            "QL": [["z","z"],["z","o"]],
            "bounds": {{"zero": "z", "one": "o"}},
            "designation": {{"kind": "none", "set": []}},
            "valuation": {{}}
        }}"#
        )
    }

    #[test]
    fn bounded_star_violation_named() {
        match load_model_str(&bounded_doc("o")) {
            Err(LoadError::Invalid { report }) => {
                assert!(report.mentions("eq (1*=0)"), "{report}");
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn two_state_bounded_frame_validates() {
        let m = load_model_str(&bounded_doc("z")).unwrap();
        assert_eq!(m.structure.possible_worlds(), StateSet::empty());
    }

    #[test]
    fn q_from_one_violation() {
        let text = bounded_doc("z").replace(
            r#""Q": [["z","z"],["z","o"]]"#,
            r#""Q": [["z","z"],["z","o"],["o","z"],["o","o"]]"#,
        );
        match load_model_str(&text) {
            Err(LoadError::Invalid { report }) => {
                assert!(report.mentions("eq (Q1s => s=1)"), "{report}");
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn missing_r010_violation() {
        let text = bounded_doc("z").replace(r#"["z","o","z"],"#, "");
        match load_model_str(&text) {
            Err(LoadError::Invalid { report }) => {
                assert!(report.mentions("eq (R010)"), "{report}");
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn tonicity_r_first_position() {
        // a <= b and R(b,s,t) requires R(a,s,t)
        let st = Structure::new(
            vec!["a".into(), "b".into()],
            &[(0, 0), (1, 1), (0, 1)],
            vec![1, 0],
            &[(1, 0, 0)],
            &[],
            &[],
            None,
        );
        let rep = st.validate();
        assert!(rep.mentions("tonicity-R"), "{rep}");
    }

    #[test]
    fn tonicity_star_antitone() {
        // a < b with star fixing both: needs star(b) <= star(a), i.e. b <= a
        let st = Structure::new(
            vec!["a".into(), "b".into()],
            &[(0, 0), (1, 1), (0, 1)],
            vec![0, 1],
            &[],
            &[],
            &[],
            None,
        );
        let rep = st.validate();
        assert!(rep.mentions("tonicity-star"), "{rep}");
    }

    #[test]
    fn discrete_order_tonicity_vacuous() {
        let st = Structure::new(
            vec!["a".into(), "b".into()],
            &[(0, 0), (1, 1)],
            vec![0, 1],
            &[(0, 1, 0), (1, 1, 1)],
            &[(0, 1)],
            &[(1, 0)],
            None,
        );
        assert!(st.check_tonicity().is_ok());
    }

    #[test]
    fn degenerate_bounds_rejected_for_models() {
        let text = r#"{
            "states": ["s"],
            "leq": [["s","s"]],
            "star": {"s": "s"},
            "R": [["s","s","s"]],
            "Q": [["s","s"]],
            "QL": [["s","s"]],
            "bounds": {"zero": "s", "one": "s"},
            "designation": {"kind": "none", "set": []},
            "valuation": {}
        }"#;
        match load_model_str(text) {
            Err(LoadError::Invalid { report }) => {
                assert!(report.mentions("bounds-distinct"), "{report}");
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn roundtrip_doc() {
        let m = load_model_str(ONE_STATE_L).unwrap();
        let again = load_model_str(&m.to_json()).unwrap();
        assert_eq!(m, again);
    }
}
