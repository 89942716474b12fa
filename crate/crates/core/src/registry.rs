//! The frame-condition table, the logic-name grammar and the per-logic
//! condition/axiom/rule sets, for both the relevant systems and their
//! classicized counterparts.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::conditions::{evaluate_condition, tstar, tv, Condition, ConditionError};
use crate::formula::{parse, Formula};
use crate::report::{Report, Violation};
use crate::structures::{Designation, Structure};

/// One row of the condition table: the frame condition, its display, and the
/// corresponding axiom or rule.
#[derive(Debug, Clone)]
pub struct ConditionDef {
    pub tag: &'static str,
    pub condition: Condition,
    /// Axiom tag and template, for rows whose correspondent is an axiom.
    pub axiom: Option<(&'static str, Formula)>,
    /// Rule tag, for rows whose correspondent is a rule.
    pub rule: Option<&'static str>,
    /// Pinned display for the classicized form where the paper displays one
    /// (`X`, `ER`, `Nec`); everywhere else the condition is its own
    /// C-variant.
    pinned_cvariant_display: Option<&'static str>,
}

impl ConditionDef {
    /// The condition in the paper's notation.
    pub fn display(&self) -> String {
        self.condition.to_string()
    }

    pub fn c_variant(&self) -> Condition {
        self.condition.c_variant()
    }

    /// The classicized condition in the paper's notation.
    pub fn c_variant_display(&self) -> String {
        match self.pinned_cvariant_display {
            Some(s) => s.to_string(),
            None => self.c_variant().to_string(),
        }
    }
}

fn f(text: &str) -> Formula {
    parse(text).expect("registry axiom template must parse")
}

/// All seventeen condition tags, in table order.
pub const CONDITION_TAGS: [&str; 17] = [
    "DN", "Cp", "WB", "X", "Rd", "B", "CB", "W", "C", "M", "ER", "Nec", "BoxK", "BoxT", "BoxD",
    "Box4", "Box5",
];

fn build_table() -> Vec<ConditionDef> {
    use Condition as C;
    let (s, t, u, v, x) = (tv("s"), tv("t"), tv("u"), tv("v"), tv("x"));
    vec![
        ConditionDef {
            tag: "DN",
            condition: C::Eq(tstar(tstar(s.clone())), s.clone()),
            axiom: Some(("DN", f("(p -> ~~p) & (~~p -> p)"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "Cp",
            condition: C::implies(
                C::R(s.clone(), t.clone(), u.clone()),
                C::R(s.clone(), tstar(u.clone()), tstar(t.clone())),
            ),
            axiom: Some(("Cp", f("(p -> q) -> (~q -> ~p)"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "WB",
            condition: C::implies(
                C::R(s.clone(), t.clone(), u.clone()),
                C::RGroup(s.clone(), s.clone(), t.clone(), u.clone()),
            ),
            axiom: Some(("WB", f("((p -> q) & (q -> r)) -> (p -> r)"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "X",
            condition: C::implies(C::InL(s.clone()), C::Leq(tstar(s.clone()), s.clone())),
            axiom: Some(("X", f("p | ~p"))),
            rule: None,
            pinned_cvariant_display: Some("∃w(w ∈ W ∧ Q_L ws) ⇒ s* ≤ s"),
        },
        ConditionDef {
            tag: "Rd",
            condition: C::R(s.clone(), tstar(s.clone()), s.clone()),
            axiom: Some(("Rd", f("(p -> ~p) -> ~p"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "B",
            condition: C::implies(
                C::R4(s.clone(), t.clone(), u.clone(), v.clone()),
                C::RGroup(s.clone(), t.clone(), u.clone(), v.clone()),
            ),
            axiom: Some(("B", f("(p -> q) -> ((r -> p) -> (r -> q))"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "CB",
            condition: C::implies(
                C::R4(s.clone(), t.clone(), u.clone(), v.clone()),
                C::RGroup(t.clone(), s.clone(), u.clone(), v.clone()),
            ),
            axiom: Some(("CB", f("(p -> q) -> ((q -> r) -> (p -> r))"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "W",
            condition: C::implies(
                C::R(s.clone(), t.clone(), u.clone()),
                C::R4(s.clone(), t.clone(), t.clone(), u.clone()),
            ),
            axiom: Some(("W", f("(p -> (p -> q)) -> (p -> q)"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "C",
            condition: C::implies(
                C::R4(s.clone(), t.clone(), u.clone(), v.clone()),
                C::R4(s.clone(), u.clone(), t.clone(), v.clone()),
            ),
            axiom: Some(("C", f("(p -> (q -> r)) -> (q -> (p -> r))"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "M",
            condition: C::implies(
                C::R(s.clone(), t.clone(), u.clone()),
                C::or(C::Leq(s.clone(), u.clone()), C::Leq(t.clone(), u.clone())),
            ),
            axiom: Some(("M", f("p -> (p -> p)"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "ER",
            condition: C::exists(
                "x",
                C::and(C::InL(x.clone()), C::R(s.clone(), x.clone(), s.clone())),
            ),
            axiom: None,
            rule: Some("ER"),
            pinned_cvariant_display: Some("∀s∃w,t(w ∈ W ∧ Q_L wt ∧ Rsts)"),
        },
        ConditionDef {
            tag: "Nec",
            condition: C::implies(
                C::and(C::InL(x.clone()), C::Q(x.clone(), s.clone())),
                C::InL(s.clone()),
            ),
            axiom: None,
            rule: Some("Nec"),
            pinned_cvariant_display: Some("s ∈ Q_L(W) ∧ Qst ⇒ t ∈ Q_L(W)"),
        },
        ConditionDef {
            tag: "BoxK",
            condition: C::implies(
                C::RQ(s.clone(), t.clone(), u.clone()),
                C::exists(
                    "x",
                    C::and(
                        C::Q(t.clone(), x.clone()),
                        C::QR(s.clone(), x.clone(), u.clone()),
                    ),
                ),
            ),
            axiom: Some(("BoxK", f("[](p -> q) -> ([]p -> []q)"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "BoxT",
            condition: C::Q(s.clone(), s.clone()),
            axiom: Some(("BoxT", f("[]p -> p"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        // The table's condition for BoxD is taken verbatim. It matches the
        // stated axiom only under `x <= x**`; pair it with DN via
        // `RegistryOptions::pair_box_d_with_dn` when that matters.
        ConditionDef {
            tag: "BoxD",
            condition: C::exists(
                "x",
                C::and(
                    C::Q(s.clone(), tstar(x.clone())),
                    C::Q(tstar(s.clone()), x.clone()),
                ),
            ),
            axiom: Some(("BoxD", f("[]~p -> ~[]p"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "Box4",
            condition: C::implies(
                C::and(C::Q(s.clone(), t.clone()), C::Q(t.clone(), u.clone())),
                C::Q(s.clone(), u.clone()),
            ),
            axiom: Some(("Box4", f("[]p -> [][]p"))),
            rule: None,
            pinned_cvariant_display: None,
        },
        ConditionDef {
            tag: "Box5",
            condition: C::implies(
                C::and(
                    C::Q(tstar(s.clone()), u.clone()),
                    C::Q(s.clone(), t.clone()),
                ),
                C::Q(tstar(t.clone()), u.clone()),
            ),
            axiom: Some(("Box5", f("~[]p -> []~[]p"))),
            rule: None,
            pinned_cvariant_display: None,
        },
    ]
}

pub fn condition_table() -> &'static [ConditionDef] {
    static TABLE: OnceLock<Vec<ConditionDef>> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegistryError {
    #[error("unknown logic name {0:?} (grammar: <BM|DW|TW|T|E|R|RM>.<C|R|K>[T][D][4][5], optionally +DN)")]
    UnknownLogic(String),
    #[error("condition ({0}) is excluded from this registry")]
    ExcludedCondition(String),
    #[error("unknown condition tag {0:?}")]
    UnknownCondition(String),
    #[error("designation kind mismatch: expected {expected}, found {found}")]
    DesignationMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error(transparent)]
    Condition(#[from] ConditionError),
}

/// Look up a table row by tag. The weakening condition (K) and (M3) are
/// recognized and rejected with a dedicated error.
pub fn condition_by_tag(tag: &str) -> Result<&'static ConditionDef, RegistryError> {
    if tag == "K" || tag == "M3" {
        return Err(RegistryError::ExcludedCondition(tag.to_string()));
    }
    condition_table()
        .iter()
        .find(|d| d.tag == tag)
        .ok_or_else(|| RegistryError::UnknownCondition(tag.to_string()))
}

/// Propositional bases, in increasing strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropBase {
    Bm,
    Dw,
    Tw,
    T,
    E,
    R,
    Rm,
}

impl PropBase {
    fn parse(s: &str) -> Option<PropBase> {
        Some(match s {
            "BM" => PropBase::Bm,
            "DW" => PropBase::Dw,
            "TW" => PropBase::Tw,
            "T" => PropBase::T,
            "E" => PropBase::E,
            "R" => PropBase::R,
            "RM" => PropBase::Rm,
            _ => return None,
        })
    }

    fn as_str(self) -> &'static str {
        match self {
            PropBase::Bm => "BM",
            PropBase::Dw => "DW",
            PropBase::Tw => "TW",
            PropBase::T => "T",
            PropBase::E => "E",
            PropBase::R => "R",
            PropBase::Rm => "RM",
        }
    }

    /// Figure-table tags accumulated along the chain
    /// BM < DW < TW < T < E < R < RM.
    fn condition_tags(self) -> &'static [&'static str] {
        match self {
            PropBase::Bm => &[],
            PropBase::Dw => &["Cp"],
            PropBase::Tw => &["Cp", "B", "CB"],
            PropBase::T => &["Cp", "B", "CB", "WB", "X", "Rd", "W"],
            PropBase::E => &["Cp", "B", "CB", "WB", "X", "Rd", "W", "ER"],
            PropBase::R => &["Cp", "B", "CB", "WB", "X", "Rd", "W", "ER", "C"],
            PropBase::Rm => &["Cp", "B", "CB", "WB", "X", "Rd", "W", "ER", "C", "M"],
        }
    }
}

/// The modal column: `.C` is conjunctively regular, `.R` adds (BoxK),
/// `.K` adds (Nec) on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModalFamily {
    C,
    R,
    K,
}

impl ModalFamily {
    fn condition_tags(self) -> &'static [&'static str] {
        match self {
            ModalFamily::C => &[],
            ModalFamily::R => &["BoxK"],
            ModalFamily::K => &["BoxK", "Nec"],
        }
    }

    fn as_char(self) -> char {
        match self {
            ModalFamily::C => 'C',
            ModalFamily::R => 'R',
            ModalFamily::K => 'K',
        }
    }
}

/// A parsed logic name, e.g. `R.KT4` or `DW.C+DN`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicName {
    pub base: PropBase,
    pub family: ModalFamily,
    pub suffixes: Vec<char>,
    pub add_dn: bool,
}

impl LogicName {
    pub fn parse(name: &str) -> Result<LogicName, RegistryError> {
        let err = || RegistryError::UnknownLogic(name.to_string());
        let (core, add_dn) = match name.strip_suffix("+DN") {
            Some(rest) => (rest, true),
            None => (name, false),
        };
        let (base_str, modal_str) = core.split_once('.').ok_or_else(err)?;
        let base = PropBase::parse(base_str).ok_or_else(err)?;
        let mut chars = modal_str.chars();
        let family = match chars.next() {
            Some('C') => ModalFamily::C,
            Some('R') => ModalFamily::R,
            Some('K') => ModalFamily::K,
            _ => return Err(err()),
        };
        let mut suffixes = Vec::new();
        for c in chars {
            if !matches!(c, 'T' | 'D' | '4' | '5') || suffixes.contains(&c) {
                return Err(err());
            }
            suffixes.push(c);
        }
        Ok(LogicName {
            base,
            family,
            suffixes,
            add_dn,
        })
    }

    fn suffix_tag(c: char) -> &'static str {
        match c {
            'T' => "BoxT",
            'D' => "BoxD",
            '4' => "Box4",
            '5' => "Box5",
            _ => unreachable!("validated at parse time"),
        }
    }

    /// Tags of all table conditions of this logic, in table order.
    pub fn condition_tags(&self) -> Vec<&'static str> {
        let mut tags: Vec<&'static str> = Vec::new();
        if self.add_dn {
            tags.push("DN");
        }
        tags.extend(self.base.condition_tags());
        tags.extend(self.family.condition_tags());
        for &c in &self.suffixes {
            tags.push(Self::suffix_tag(c));
        }
        tags
    }
}

impl fmt::Display for LogicName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.base.as_str(), self.family.as_char())?;
        for c in &self.suffixes {
            write!(f, "{c}")?;
        }
        if self.add_dn {
            write!(f, "+DN")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RegistryOptions {
    /// Add (DN) whenever (BoxD) is present, per the table's footnote caveat.
    pub pair_box_d_with_dn: bool,
}

/// A named condition of a logic, carrying the evaluable form and its
/// paper-notation display.
#[derive(Debug, Clone)]
pub struct NamedCondition {
    pub tag: &'static str,
    pub condition: Condition,
    pub display: String,
}

/// Everything the registry knows about one logic: its frame conditions and
/// the tags of its axioms and rules (templates live in the proofs module).
#[derive(Debug, Clone)]
pub struct LogicSpec {
    pub name: String,
    pub classicized: bool,
    pub conditions: Vec<NamedCondition>,
    pub axioms: Vec<String>,
    pub rules: Vec<String>,
}

const BASE_AXIOMS: [&str; 12] = [
    "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10", "a11", "a12",
];
const BASE_RULES: [&str; 7] = ["US", "MP", "Adj", "Aff", "Con", "BoxL-Mon", "Box-Mon"];
/// The classical propositional base used by the classicized systems.
pub const CPC_AXIOMS: [&str; 9] = [
    "cpc1", "cpc2", "cpc3", "cpc4", "cpc5", "cpc6", "cpc7", "cpc8", "cpc9",
];

/// The condition/axiom/rule sets of a named logic. With `classicized` the
/// conditions are replaced by their C-variants and the proof system switches
/// to the classicized family.
pub fn logic_conditions(name: &str, classicized: bool) -> Result<LogicSpec, RegistryError> {
    logic_conditions_with(name, classicized, RegistryOptions::default())
}

pub fn logic_conditions_with(
    name: &str,
    classicized: bool,
    opts: RegistryOptions,
) -> Result<LogicSpec, RegistryError> {
    let parsed = LogicName::parse(name)?;
    let mut tags = parsed.condition_tags();
    if opts.pair_box_d_with_dn && tags.contains(&"BoxD") && !tags.contains(&"DN") {
        tags.insert(0, "DN");
    }

    let mut conditions = Vec::new();
    let mut extra_axioms: Vec<String> = Vec::new();
    let mut extra_rules: Vec<String> = Vec::new();
    for tag in &tags {
        let def = condition_by_tag(tag)?;
        conditions.push(NamedCondition {
            tag: def.tag,
            condition: if classicized {
                def.c_variant()
            } else {
                def.condition.clone()
            },
            display: if classicized {
                def.c_variant_display()
            } else {
                def.display()
            },
        });
        if let Some((ax, _)) = &def.axiom {
            extra_axioms.push((*ax).to_string());
        }
        if let Some(rule) = def.rule {
            extra_rules.push(rule.to_string());
        }
    }

    let l_axioms: Vec<String> = BASE_AXIOMS
        .iter()
        .map(|s| s.to_string())
        .chain(extra_axioms)
        .collect();
    let l_rules: Vec<String> = BASE_RULES
        .iter()
        .map(|s| s.to_string())
        .chain(extra_rules)
        .collect();

    let (axioms, rules) = if classicized {
        let mut axioms: Vec<String> = CPC_AXIOMS.iter().map(|s| s.to_string()).collect();
        axioms.extend(l_axioms.iter().map(|a| format!("L:{a}")));
        let mut rules = vec!["MP".to_string(), "US".to_string(), "BR".to_string()];
        rules.extend(l_rules.iter().map(|r| format!("L:{r}")));
        (axioms, rules)
    } else {
        (l_axioms, l_rules)
    };

    Ok(LogicSpec {
        name: parsed.to_string(),
        classicized,
        conditions,
        axioms,
        rules,
    })
}

/// Evaluate every condition of the named logic on a designated structure.
/// Plain logics expect an L-designation, classicized ones a W-designation.
pub fn check_logic_frame(
    st: &Structure,
    des: &Designation,
    name: &str,
    classicized: bool,
) -> Result<Report, RegistryError> {
    let spec = logic_conditions(name, classicized)?;
    let expected = if classicized { "W" } else { "L" };
    if des.kind() != expected {
        return Err(RegistryError::DesignationMismatch {
            expected,
            found: des.kind(),
        });
    }
    let mut rep = Report::ok();
    for nc in &spec.conditions {
        let out = evaluate_condition(st, des, &nc.condition)?;
        if !out.holds {
            rep.push(Violation::new(
                &format!("({})", nc.tag),
                out.witness,
                format!("frame condition fails: {}", nc.display),
            ));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_all_tags() {
        for tag in CONDITION_TAGS {
            assert!(condition_by_tag(tag).is_ok(), "missing {tag}");
        }
    }

    #[test]
    fn excluded_conditions() {
        assert!(matches!(
            condition_by_tag("K"),
            Err(RegistryError::ExcludedCondition(_))
        ));
        assert!(matches!(
            condition_by_tag("M3"),
            Err(RegistryError::ExcludedCondition(_))
        ));
    }

    #[test]
    fn figure_displays_are_verbatim() {
        let expect = [
            ("DN", "s** = s"),
            ("Cp", "Rstu ⇒ Rsu*t*"),
            ("WB", "Rstu ⇒ Rs(st)u"),
            ("X", "s ∈ L ⇒ s* ≤ s"),
            ("Rd", "Rss*s"),
            ("B", "Rstuv ⇒ Rs(tu)v"),
            ("CB", "Rstuv ⇒ Rt(su)v"),
            ("W", "Rstu ⇒ Rsttu"),
            ("C", "Rstuv ⇒ Rsutv"),
            ("M", "Rstu ⇒ (s ≤ u ∨ t ≤ u)"),
            ("ER", "∃x(x ∈ L ∧ Rsxs)"),
            ("Nec", "(x ∈ L ∧ Qxs) ⇒ s ∈ L"),
            ("BoxK", "RQstu ⇒ ∃x(Qtx ∧ QRsxu)"),
            ("BoxT", "Qss"),
            ("BoxD", "∃x(Qsx* ∧ Qs*x)"),
            ("Box4", "(Qst ∧ Qtu) ⇒ Qsu"),
            ("Box5", "(Qs*u ∧ Qst) ⇒ Qt*u"),
        ];
        for (tag, display) in expect {
            assert_eq!(condition_by_tag(tag).unwrap().display(), display, "{tag}");
        }
    }

    #[test]
    fn logic_name_grammar() {
        assert!(LogicName::parse("BM.C").is_ok());
        assert!(LogicName::parse("R.KT45").is_ok());
        assert!(LogicName::parse("DW.C+DN").is_ok());
        assert!(LogicName::parse("XX.C").is_err());
        assert!(LogicName::parse("BM").is_err());
        assert!(LogicName::parse("BM.Z").is_err());
        assert!(LogicName::parse("BM.CTT").is_err());
    }

    #[test]
    fn dw_adds_cp_over_bm() {
        let bm = logic_conditions("BM.C", false).unwrap();
        assert!(bm.conditions.is_empty());
        assert_eq!(bm.axioms.len(), 12);
        assert_eq!(bm.rules.len(), 7);

        let dw = logic_conditions("DW.C", false).unwrap();
        assert_eq!(
            dw.conditions.iter().map(|c| c.tag).collect::<Vec<_>>(),
            vec!["Cp"]
        );
    }

    #[test]
    fn ec_adds_er_rule() {
        let ec = logic_conditions("E.C", false).unwrap();
        assert!(ec.conditions.iter().any(|c| c.tag == "ER"));
        assert!(ec.rules.contains(&"ER".to_string()));
        assert!(!ec.rules.contains(&"Nec".to_string()));
    }

    #[test]
    fn rkt_composition() {
        let spec = logic_conditions("R.KT", false).unwrap();
        let tags: Vec<&str> = spec.conditions.iter().map(|c| c.tag).collect();
        for t in ["Cp", "B", "CB", "WB", "X", "Rd", "W", "ER", "C", "BoxK", "Nec", "BoxT"] {
            assert!(tags.contains(&t), "missing {t} in {tags:?}");
        }
        assert!(!tags.contains(&"M"));
        assert!(spec.rules.contains(&"Nec".to_string()));
    }

    #[test]
    fn classicized_spec_switches_family() {
        let spec = logic_conditions("BM.C", true).unwrap();
        assert!(spec.axioms.contains(&"cpc1".to_string()));
        assert!(spec.axioms.contains(&"L:a1".to_string()));
        assert!(spec.rules.contains(&"BR".to_string()));
        assert!(spec.rules.contains(&"L:MP".to_string()));
        assert_eq!(spec.axioms.len(), 9 + 12);
        assert_eq!(spec.rules.len(), 3 + 7);
    }

    #[test]
    fn classicized_conditions_drop_l() {
        let spec = logic_conditions("T.C", true).unwrap();
        for nc in &spec.conditions {
            assert!(!nc.condition.mentions_l(), "{} kept L", nc.tag);
        }
        let x = spec.conditions.iter().find(|c| c.tag == "X").unwrap();
        assert_eq!(x.display, "∃w(w ∈ W ∧ Q_L ws) ⇒ s* ≤ s");
    }

    #[test]
    fn pair_box_d_with_dn_option() {
        let opts = RegistryOptions {
            pair_box_d_with_dn: true,
        };
        let spec = logic_conditions_with("BM.CD", false, opts).unwrap();
        let tags: Vec<&str> = spec.conditions.iter().map(|c| c.tag).collect();
        assert_eq!(tags, vec!["DN", "BoxD"]);
        let plain = logic_conditions("BM.CD", false).unwrap();
        assert_eq!(
            plain.conditions.iter().map(|c| c.tag).collect::<Vec<_>>(),
            vec!["BoxD"]
        );
    }
}
