//! Interpretation of formulas in models and the two validity notions.

use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::structures::{Designation, Model, Structure};

/// A set of states of some structure, as a bitmask over state indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateSet {
    bits: u64,
}

impl StateSet {
    pub fn empty() -> StateSet {
        StateSet { bits: 0 }
    }

    pub fn full(n: usize) -> StateSet {
        debug_assert!(n <= 64);
        if n == 64 {
            StateSet { bits: u64::MAX }
        } else {
            StateSet {
                bits: (1u64 << n) - 1,
            }
        }
    }

    pub fn singleton(i: usize) -> StateSet {
        StateSet { bits: 1u64 << i }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> StateSet {
        let mut s = StateSet::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.bits |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.bits &= !(1u64 << i);
    }

    pub fn contains(self, i: usize) -> bool {
        self.bits & (1u64 << i) != 0
    }

    pub fn union(self, other: StateSet) -> StateSet {
        StateSet {
            bits: self.bits | other.bits,
        }
    }

    pub fn intersect(self, other: StateSet) -> StateSet {
        StateSet {
            bits: self.bits & other.bits,
        }
    }

    pub fn difference(self, other: StateSet) -> StateSet {
        StateSet {
            bits: self.bits & !other.bits,
        }
    }

    pub fn is_subset_of(self, other: StateSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Render with the owning structure's state names.
    pub fn display<'a>(&self, st: &'a Structure) -> StateSetDisplay<'a> {
        StateSetDisplay { set: *self, st }
    }
}

pub struct StateSetDisplay<'a> {
    set: StateSet,
    st: &'a Structure,
}

impl fmt::Display for StateSetDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.set.iter().map(|i| self.st.name(i)).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("unknown state id {0:?}")]
    UnknownState(String),
    #[error("model has no designation; validity is undefined")]
    NoDesignation,
}

/// `X \circ Y = { u | exists s in X, t in Y with Rstu }`.
pub fn fuse(st: &Structure, x: StateSet, y: StateSet) -> StateSet {
    let mut out = StateSet::empty();
    for s in x.iter() {
        for t in y.iter() {
            out = out.union(st.r_out(s, t));
        }
    }
    out
}

/// The extension of `f` in `m`, computed bottom-up over whole state sets.
/// Heredity (upward closure) is asserted after every connective in debug
/// builds; it holds for every validated model.
pub fn interpret(m: &Model, f: &Formula) -> StateSet {
    let st = &m.structure;
    let out = match f {
        Formula::Var(v) => m.valuation_of(v),
        Formula::And(l, r) => interpret(m, l).intersect(interpret(m, r)),
        Formula::Or(l, r) => interpret(m, l).union(interpret(m, r)),
        Formula::Neg(g) => {
            let x = interpret(m, g);
            let mut out = StateSet::empty();
            for s in 0..st.len() {
                if !x.contains(st.star(s)) {
                    out.insert(s);
                }
            }
            out
        }
        Formula::Imp(l, r) => {
            let x = interpret(m, l);
            let y = interpret(m, r);
            let mut out = StateSet::empty();
            for s in 0..st.len() {
                let ok = x.iter().all(|t| st.r_out(s, t).is_subset_of(y));
                if ok {
                    out.insert(s);
                }
            }
            out
        }
        Formula::Box(g) => {
            let x = interpret(m, g);
            let mut out = StateSet::empty();
            for s in 0..st.len() {
                if st.q_set(s).is_subset_of(x) {
                    out.insert(s);
                }
            }
            out
        }
        Formula::BoxL(g) => {
            let x = interpret(m, g);
            let mut out = StateSet::empty();
            for s in 0..st.len() {
                if st.ql_set(s).is_subset_of(x) {
                    out.insert(s);
                }
            }
            out
        }
    };
    debug_assert!(
        st.is_up_closed(out),
        "heredity violated for {f}; the model was not validated"
    );
    out
}

/// Truth at a named state.
pub fn satisfies(m: &Model, state: &str, f: &Formula) -> Result<bool, SemanticsError> {
    let i = m
        .structure
        .index(state)
        .ok_or_else(|| SemanticsError::UnknownState(state.to_string()))?;
    Ok(interpret(m, f).contains(i))
}

/// Truth at a state index.
pub fn satisfies_idx(m: &Model, state: usize, f: &Formula) -> bool {
    interpret(m, f).contains(state)
}

/// Validity: the designated states are all in the extension of `f`.
pub fn valid(m: &Model, f: &Formula) -> Result<bool, SemanticsError> {
    match &m.designation {
        Designation::None => Err(SemanticsError::NoDesignation),
        Designation::L(set) | Designation::W(set) => Ok(set.is_subset_of(interpret(m, f))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::structures::load_model_str;

    const ONE_STATE_L: &str = r#"{
        "states": ["s"],
        "leq": [["s","s"]],
        "star": {"s": "s"},
        "R": [["s","s","s"]],
        "Q": [],
        "QL": [],
        "designation": {"kind": "L", "set": ["s"]},
        "valuation": {"p": ["s"]}
    }"#;

    // Two discrete states with a star swap: a supports p, b does not.
    const TWO_STATE_SWAP: &str = r#"{
        "states": ["a", "b"],
        "leq": [["a","a"],["b","b"]],
        "star": {"a": "b", "b": "a"},
        "R": [],
        "Q": [],
        "QL": [],
        "designation": {"kind": "none", "set": []},
        "valuation": {"p": ["a"]}
    }"#;

    #[test]
    fn fuse_one_state() {
        let m = load_model_str(ONE_STATE_L).unwrap();
        let s = StateSet::singleton(0);
        assert_eq!(fuse(&m.structure, s, s), s);
        assert_eq!(fuse(&m.structure, StateSet::empty(), s), StateSet::empty());
    }

    #[test]
    fn negation_uses_star() {
        let m = load_model_str(TWO_STATE_SWAP).unwrap();
        // a* = b not in V(p), so a supports ~p; b* = a in V(p), so b does not.
        let notp = parse("~p").unwrap();
        assert_eq!(interpret(&m, &notp), StateSet::singleton(0));
    }

    #[test]
    fn identity_implication_one_state() {
        let m = load_model_str(ONE_STATE_L).unwrap();
        let f = parse("p -> p").unwrap();
        assert_eq!(interpret(&m, &f), StateSet::singleton(0));
        assert!(valid(&m, &f).unwrap());
    }

    #[test]
    fn satisfies_unknown_state_errors() {
        let m = load_model_str(ONE_STATE_L).unwrap();
        let f = parse("p").unwrap();
        assert!(satisfies(&m, "s", &f).unwrap());
        assert!(matches!(
            satisfies(&m, "zz", &f),
            Err(SemanticsError::UnknownState(_))
        ));
    }

    #[test]
    fn validity_requires_designation() {
        let m = load_model_str(TWO_STATE_SWAP).unwrap();
        let f = parse("p").unwrap();
        assert!(matches!(valid(&m, &f), Err(SemanticsError::NoDesignation)));
    }

    #[test]
    fn empty_valuation_defaults() {
        let m = load_model_str(ONE_STATE_L).unwrap();
        // q is not declared: minimal admissible value in an unbounded model
        assert_eq!(m.valuation_of("q"), StateSet::empty());
        let f = parse("q").unwrap();
        assert!(!satisfies(&m, "s", &f).unwrap());
    }
}
