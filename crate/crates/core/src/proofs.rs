//! Hilbert systems for the relevant modal logics and their classicized
//! counterparts: axiom schemas, proof checking, the box-lift of whole
//! proofs, and the relevant-reasoning proof transformer.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{parse, Formula, ParseError, Substitution};
use crate::registry::{condition_by_tag, logic_conditions, RegistryError};

/// Proof-system family: the relevant systems or their classicized versions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    L,
    CL,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::L => write!(f, "L"),
            Family::CL => write!(f, "CL"),
        }
    }
}

fn t(text: &str) -> Formula {
    parse(text).expect("axiom template must parse")
}

/// The twelve base axioms shared by every relevant system here.
pub fn base_axiom_templates() -> &'static [(&'static str, Formula)] {
    static TABLE: OnceLock<Vec<(&'static str, Formula)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        vec![
            ("a1", t("p -> p")),
            ("a2", t("~(p & q) -> (~p | ~q)")),
            ("a3", t("(~p & ~q) -> ~(p | q)")),
            ("a4", t("(p & q) -> p")),
            ("a5", t("(p & q) -> q")),
            ("a6", t("p -> (p | q)")),
            ("a7", t("q -> (p | q)")),
            ("a8", t("((p -> q) & (p -> r)) -> (p -> (q & r))")),
            ("a9", t("((p -> r) & (q -> r)) -> ((p | q) -> r)")),
            ("a10", t("(p & (q | r)) -> ((p & q) | (p & r))")),
            ("a11", t("([]p & []q) -> [](p & q)")),
            ("a12", t("([L]p & [L]q) -> [L](p & q)")),
        ]
    })
}

/// A complete classical basis over exactly the connectives `&`, `|`, `->`,
/// `~`, used as item one of the classicized systems.
pub fn cpc_axiom_templates() -> &'static [(&'static str, Formula)] {
    static TABLE: OnceLock<Vec<(&'static str, Formula)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        vec![
            ("cpc1", t("p -> (q -> p)")),
            ("cpc2", t("(p -> (q -> r)) -> ((p -> q) -> (p -> r))")),
            ("cpc3", t("(~p -> ~q) -> (q -> p)")),
            ("cpc4", t("p & q -> p")),
            ("cpc5", t("p & q -> q")),
            ("cpc6", t("p -> (q -> p & q)")),
            ("cpc7", t("p -> p | q")),
            ("cpc8", t("q -> p | q")),
            ("cpc9", t("(p -> r) -> ((q -> r) -> (p | q -> r))")),
        ]
    })
}

/// Template carried by an axiom tag, with `L:` prefixes resolving to the
/// boxed copy of the underlying template.
pub fn axiom_template(tag: &str) -> Option<Formula> {
    if let Some(rest) = tag.strip_prefix("L:") {
        return axiom_template(rest).map(Formula::boxl);
    }
    if let Some((_, f)) = base_axiom_templates().iter().find(|(n, _)| *n == tag) {
        return Some(f.clone());
    }
    if let Some((_, f)) = cpc_axiom_templates().iter().find(|(n, _)| *n == tag) {
        return Some(f.clone());
    }
    match condition_by_tag(tag) {
        Ok(def) => def.axiom.as_ref().map(|(_, f)| f.clone()),
        Err(_) => None,
    }
}

/// A resolved proof system: the axiom schemas and rule names of one logic in
/// one family.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub family: Family,
    pub logic: String,
    pub axioms: Vec<(String, Formula)>,
    pub rules: Vec<String>,
}

impl SystemSpec {
    pub fn axiom(&self, tag: &str) -> Option<&Formula> {
        self.axioms.iter().find(|(n, _)| n == tag).map(|(_, f)| f)
    }

    pub fn has_rule(&self, name: &str) -> bool {
        self.rules.iter().any(|r| r == name)
    }
}

/// The axiom schemas and rules of a named logic in the given family.
pub fn axioms_of(name: &str, family: Family) -> Result<SystemSpec, RegistryError> {
    let spec = logic_conditions(name, family == Family::CL)?;
    let axioms = spec
        .axioms
        .iter()
        .map(|tag| {
            let f = axiom_template(tag).expect("registry axiom tags all have templates");
            (tag.clone(), f)
        })
        .collect();
    Ok(SystemSpec {
        family,
        logic: spec.name,
        axioms,
        rules: spec.rules,
    })
}

/// Justification of a single proof step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// An instance of a named axiom schema. An empty substitution means
    /// "infer it by matching the template".
    Axiom { tag: String, subst: Substitution },
    /// Application of a named rule to earlier steps (1-based indices).
    /// `subst` is meaningful for the substitution rules only.
    Rule {
        name: String,
        from: Vec<usize>,
        subst: Substitution,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

/// A numbered derivation in one system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub family: Family,
    pub logic: String,
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }
}

/// Result of checking a proof; rejection carries the first failing step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    /// `(step number, reason)`, 1-based.
    pub failure: Option<(usize, String)>,
}

impl Verdict {
    fn accept() -> Verdict {
        Verdict {
            accepted: true,
            failure: None,
        }
    }

    fn reject(step: usize, reason: impl Into<String>) -> Verdict {
        Verdict {
            accepted: false,
            failure: Some((step, reason.into())),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "accepted"),
            Some((step, reason)) => write!(f, "rejected at step {step}: {reason}"),
        }
    }
}

fn unbox_l(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::BoxL(inner) => Some(inner),
        _ => None,
    }
}

fn as_imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Imp(a, b) => Some((a, b)),
        _ => None,
    }
}

/// Check one rule application; premises are the resolved premise formulas.
fn check_rule(
    name: &str,
    premises: &[&Formula],
    conclusion: &Formula,
    subst: &Substitution,
) -> Result<(), String> {
    if let Some(base) = name.strip_prefix("L:") {
        let mut stripped = Vec::new();
        for p in premises {
            stripped.push(
                unbox_l(p).ok_or_else(|| format!("{name}: premise is not boxed: {p}"))?,
            );
        }
        let c = unbox_l(conclusion)
            .ok_or_else(|| format!("{name}: conclusion is not boxed: {conclusion}"))?;
        return check_rule(base, &stripped, c, subst);
    }
    let arity = |n: usize| -> Result<(), String> {
        if premises.len() == n {
            Ok(())
        } else {
            Err(format!(
                "{name} takes {n} premise(s), got {}",
                premises.len()
            ))
        }
    };
    match name {
        "US" => {
            arity(1)?;
            let expected = if subst.is_empty() {
                match premises[0].match_against(conclusion) {
                    Some(_) => conclusion.clone(),
                    None => {
                        return Err(format!(
                            "US: {conclusion} is not a substitution instance of {}",
                            premises[0]
                        ))
                    }
                }
            } else {
                premises[0].substitute(subst)
            };
            if *conclusion == expected {
                Ok(())
            } else {
                Err(format!("US: expected {expected}, found {conclusion}"))
            }
        }
        "MP" => {
            arity(2)?;
            for (i, anti) in [(0, 1), (1, 0)] {
                if let Some((a, b)) = as_imp(premises[i]) {
                    if a == premises[anti] && b == conclusion {
                        return Ok(());
                    }
                }
            }
            Err("MP: premises do not give this conclusion".into())
        }
        "Adj" => {
            arity(2)?;
            match conclusion {
                Formula::And(l, r)
                    if (**l == *premises[0] && **r == *premises[1])
                        || (**l == *premises[1] && **r == *premises[0]) =>
                {
                    Ok(())
                }
                _ => Err("Adj: conclusion is not the conjunction of the premises".into()),
            }
        }
        "Aff" => {
            arity(2)?;
            let ((f, g), (f2, g2)) = match as_imp(conclusion) {
                Some((l, r)) => match (as_imp(l), as_imp(r)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err("Aff: conclusion must be (A -> B) -> (C -> D)".into()),
                },
                None => return Err("Aff: conclusion must be an implication".into()),
            };
            let want1 = Formula::imp(f2.clone(), f.clone());
            let want2 = Formula::imp(g.clone(), g2.clone());
            if (*premises[0] == want1 && *premises[1] == want2)
                || (*premises[1] == want1 && *premises[0] == want2)
            {
                Ok(())
            } else {
                Err(format!("Aff: expected premises {want1} and {want2}"))
            }
        }
        "Con" => {
            arity(1)?;
            match conclusion {
                Formula::Imp(nb, na) => match (nb.as_ref(), na.as_ref()) {
                    (Formula::Neg(b), Formula::Neg(a)) => {
                        let want = Formula::imp((**a).clone(), (**b).clone());
                        if *premises[0] == want {
                            Ok(())
                        } else {
                            Err(format!("Con: expected premise {want}"))
                        }
                    }
                    _ => Err("Con: conclusion must be ~B -> ~A".into()),
                },
                _ => Err("Con: conclusion must be ~B -> ~A".into()),
            }
        }
        "Box-Mon" | "BoxL-Mon" => {
            arity(1)?;
            let (a, b) = as_imp(conclusion)
                .ok_or_else(|| format!("{name}: conclusion must be an implication"))?;
            let (ia, ib) = match (name, a, b) {
                ("Box-Mon", Formula::Box(x), Formula::Box(y)) => (x, y),
                ("BoxL-Mon", Formula::BoxL(x), Formula::BoxL(y)) => (x, y),
                _ => return Err(format!("{name}: conclusion must box both sides")),
            };
            let want = Formula::imp((**ia).clone(), (**ib).clone());
            if *premises[0] == want {
                Ok(())
            } else {
                Err(format!("{name}: expected premise {want}"))
            }
        }
        "ER" => {
            arity(1)?;
            if let Some((l, b2)) = as_imp(conclusion) {
                if let Some((a, b)) = as_imp(l) {
                    if a == premises[0] && b == b2 {
                        return Ok(());
                    }
                }
            }
            Err("ER: conclusion must be (P -> B) -> B with P the premise".into())
        }
        "Nec" => {
            arity(1)?;
            match conclusion {
                Formula::Box(inner) if **inner == *premises[0] => Ok(()),
                _ => Err("Nec: conclusion must box the premise".into()),
            }
        }
        "BR" => {
            arity(1)?;
            match premises[0] {
                Formula::BoxL(inner) => match inner.as_ref() {
                    Formula::Imp(_, _) if **inner == *conclusion => Ok(()),
                    Formula::Imp(_, _) => Err(format!("BR: expected conclusion {inner}")),
                    _ => Err("BR: premise must box an implication".into()),
                },
                _ => Err("BR: premise must box an implication".into()),
            }
        }
        other => Err(format!("unknown rule {other:?}")),
    }
}

/// Check every step of a proof against its declared system. The verdict
/// encodes failures; it never errors.
pub fn check_proof(p: &Proof) -> Verdict {
    let spec = match axioms_of(&p.logic, p.family) {
        Ok(s) => s,
        Err(e) => return Verdict::reject(0, e.to_string()),
    };
    if p.steps.is_empty() {
        return Verdict::reject(0, "empty proof");
    }
    for (i, step) in p.steps.iter().enumerate() {
        let num = i + 1;
        match &step.justification {
            Justification::Axiom { tag, subst } => {
                let Some(template) = spec.axiom(tag) else {
                    return Verdict::reject(
                        num,
                        format!("{tag} is not an axiom of {} ({})", spec.logic, spec.family),
                    );
                };
                if subst.is_empty() {
                    if template.match_against(&step.formula).is_none() {
                        return Verdict::reject(
                            num,
                            format!("{} is not an instance of {tag}: {template}", step.formula),
                        );
                    }
                } else {
                    let expected = template.substitute(subst);
                    if expected != step.formula {
                        return Verdict::reject(
                            num,
                            format!("axiom instance mismatch: expected {expected}"),
                        );
                    }
                }
            }
            Justification::Rule { name, from, subst } => {
                if !spec.has_rule(name) {
                    return Verdict::reject(
                        num,
                        format!("{name} is not a rule of {} ({})", spec.logic, spec.family),
                    );
                }
                if !subst.is_empty() && name != "US" && name != "L:US" {
                    return Verdict::reject(
                        num,
                        format!("substitutions only accompany US, not {name}"),
                    );
                }
                let mut premises = Vec::new();
                for &j in from {
                    if j == 0 || j >= num {
                        return Verdict::reject(
                            num,
                            format!("premise index {j} is not an earlier step"),
                        );
                    }
                    premises.push(&p.steps[j - 1].formula);
                }
                if let Err(reason) = check_rule(name, &premises, &step.formula, subst) {
                    return Verdict::reject(num, reason);
                }
            }
        }
    }
    Verdict::accept()
}

#[derive(Debug, Error)]
pub enum ProofError {
    #[error("proof rejected: step {0}: {1}")]
    Rejected(usize, String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error("proof is not in the expected family")]
    WrongFamily,
    #[error("conclusion shape mismatch: {0}")]
    Shape(String),
    #[error("proof file parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad formula in step {step}: {err}")]
    BadFormula { step: usize, err: ParseError },
}

fn require_accepted(p: &Proof) -> Result<(), ProofError> {
    let v = check_proof(p);
    match v.failure {
        None => Ok(()),
        Some((step, reason)) => Err(ProofError::Rejected(step, reason)),
    }
}

/// Lift an accepted relevant proof of `phi` to a classicized proof of
/// `[L]phi`: axioms become their boxed copies, rules their boxed versions.
pub fn lift_proof(p: &Proof) -> Result<Proof, ProofError> {
    if p.family != Family::L {
        return Err(ProofError::WrongFamily);
    }
    require_accepted(p)?;
    let steps = p
        .steps
        .iter()
        .map(|step| Step {
            formula: Formula::boxl(step.formula.clone()),
            justification: match &step.justification {
                Justification::Axiom { tag, subst } => Justification::Axiom {
                    tag: format!("L:{tag}"),
                    subst: subst.clone(),
                },
                Justification::Rule { name, from, subst } => Justification::Rule {
                    name: format!("L:{name}"),
                    from: from.clone(),
                    subst: subst.clone(),
                },
            },
        })
        .collect();
    Ok(Proof {
        family: Family::CL,
        logic: p.logic.clone(),
        steps,
    })
}

/// Step-emitting helper for building derivations programmatically.
struct Builder {
    steps: Vec<Step>,
}

impl Builder {
    fn axiom(&mut self, tag: &str, subst: Substitution) -> usize {
        let formula = axiom_template(tag)
            .expect("builder uses known axiom tags")
            .substitute(&subst);
        self.steps.push(Step {
            formula,
            justification: Justification::Axiom {
                tag: tag.to_string(),
                subst,
            },
        });
        self.steps.len()
    }

    fn rule(&mut self, name: &str, from: Vec<usize>, formula: Formula) -> usize {
        self.steps.push(Step {
            formula,
            justification: Justification::Rule {
                name: name.to_string(),
                from,
                subst: Substitution::identity(),
            },
        });
        self.steps.len()
    }

    fn formula(&self, idx: usize) -> &Formula {
        &self.steps[idx - 1].formula
    }

    fn identity_axiom(&mut self, f: &Formula) -> usize {
        self.axiom("a1", Substitution::identity().bind("p", f.clone()))
    }

    /// From `i: A -> B` and `j: B -> C` derive `A -> C`
    /// (via Aff, a1 and MP).
    fn trans(&mut self, i: usize, j: usize) -> usize {
        let (a, b) = as_imp(self.formula(i)).expect("trans premise");
        let (b2, c) = as_imp(self.formula(j)).expect("trans premise");
        debug_assert_eq!(b, b2);
        let (a, b, c) = (a.clone(), b.clone(), c.clone());
        let bridge = Formula::imp(
            Formula::imp(b.clone(), b.clone()),
            Formula::imp(a.clone(), c.clone()),
        );
        let k1 = self.rule("Aff", vec![i, j], bridge);
        let k2 = self.identity_axiom(&b);
        self.rule("MP", vec![k1, k2], Formula::imp(a, c))
    }

    /// From `i: A -> B` derive `(A & C) -> (B & C)`.
    fn conj_mono(&mut self, i: usize, extra: &Formula) -> usize {
        let (a, b) = as_imp(self.formula(i)).expect("conj_mono premise");
        let (a, b) = (a.clone(), b.clone());
        let ac = Formula::and(a.clone(), extra.clone());
        let k1 = self.axiom(
            "a4",
            Substitution::identity()
                .bind("p", a.clone())
                .bind("q", extra.clone()),
        );
        let k2 = self.trans(k1, i);
        let k3 = self.axiom(
            "a5",
            Substitution::identity()
                .bind("p", a.clone())
                .bind("q", extra.clone()),
        );
        let k4 = self.rule(
            "Adj",
            vec![k2, k3],
            Formula::and(
                self.steps[k2 - 1].formula.clone(),
                self.steps[k3 - 1].formula.clone(),
            ),
        );
        let k5 = self.axiom(
            "a8",
            Substitution::identity()
                .bind("p", ac.clone())
                .bind("q", b.clone())
                .bind("r", extra.clone()),
        );
        self.rule(
            "MP",
            vec![k5, k4],
            Formula::imp(ac, Formula::and(b, extra.clone())),
        )
    }

    /// Derive `[]phi_1 & ... & []phi_n -> [](phi_1 & ... & phi_n)` for
    /// n >= 2 by iterating the regularity axiom.
    fn box_conj(&mut self, parts: &[Formula]) -> usize {
        let boxed: Vec<Formula> = parts.iter().cloned().map(Formula::bx).collect();
        let mut acc = self.axiom(
            "a11",
            Substitution::identity()
                .bind("p", parts[0].clone())
                .bind("q", parts[1].clone()),
        );
        let mut plain = Formula::and(parts[0].clone(), parts[1].clone());
        for k in 2..parts.len() {
            let cm = self.conj_mono(acc, &boxed[k]);
            let a11k = self.axiom(
                "a11",
                Substitution::identity()
                    .bind("p", plain.clone())
                    .bind("q", parts[k].clone()),
            );
            acc = self.trans(cm, a11k);
            plain = Formula::and(plain, parts[k].clone());
        }
        acc
    }
}

/// The relevant-reasoning transformer: from an accepted relevant proof of
/// `phi_1 & ... & phi_n -> psi` (left-nested), produce a checked classicized
/// proof of `[]phi_1 & ... & []phi_n -> []psi`. The route extends the input
/// proof with monotonicity and regularity steps, lifts it and closes with
/// the bridge rule.
pub fn rr_transform(p: &Proof, parts: &[Formula], psi: &Formula) -> Result<Proof, ProofError> {
    if p.family != Family::L {
        return Err(ProofError::WrongFamily);
    }
    if parts.is_empty() {
        return Err(ProofError::Shape("at least one conjunct is required".into()));
    }
    require_accepted(p)?;
    let conj = Formula::conjoin(parts);
    let expected = Formula::imp(conj.clone(), psi.clone());
    match p.conclusion() {
        Some(c) if *c == expected => {}
        Some(c) => {
            return Err(ProofError::Shape(format!(
                "conclusion is {c}, expected {expected}"
            )))
        }
        None => return Err(ProofError::Shape("empty proof".into())),
    }

    let mut b = Builder {
        steps: p.steps.clone(),
    };
    let concl_idx = b.steps.len();
    let mon = b.rule(
        "Box-Mon",
        vec![concl_idx],
        Formula::imp(Formula::bx(conj.clone()), Formula::bx(psi.clone())),
    );
    let final_l = if parts.len() == 1 {
        mon
    } else {
        let bc = b.box_conj(parts);
        b.trans(bc, mon)
    };
    debug_assert_eq!(final_l, b.steps.len());

    let l_proof = Proof {
        family: Family::L,
        logic: p.logic.clone(),
        steps: b.steps,
    };
    let mut lifted = lift_proof(&l_proof)?;
    let last = lifted.steps.len();
    let target = unbox_l(&lifted.steps[last - 1].formula)
        .expect("lifted steps are boxed")
        .clone();
    lifted.steps.push(Step {
        formula: target,
        justification: Justification::Rule {
            name: "BR".to_string(),
            from: vec![last],
            subst: Substitution::identity(),
        },
    });
    require_accepted(&lifted)?;
    Ok(lifted)
}

// ---------------------------------------------------------------------------
// Proof files

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofDoc {
    pub family: Family,
    pub logic: String,
    pub steps: Vec<StepDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub formula: String,
    pub by: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub from: Vec<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subst: BTreeMap<String, String>,
}

/// Names that justify a step as a rule application rather than an axiom
/// instance.
fn is_rule_name(name: &str) -> bool {
    let base = name.strip_prefix("L:").unwrap_or(name);
    matches!(
        base,
        "US" | "MP" | "Adj" | "Aff" | "Con" | "BoxL-Mon" | "Box-Mon" | "ER" | "Nec" | "BR"
    )
}

pub fn proof_from_doc(doc: &ProofDoc) -> Result<Proof, ProofError> {
    let mut steps = Vec::new();
    for (i, sd) in doc.steps.iter().enumerate() {
        let formula = parse(&sd.formula).map_err(|err| ProofError::BadFormula {
            step: i + 1,
            err,
        })?;
        let mut map = BTreeMap::new();
        for (var, text) in &sd.subst {
            let f = parse(text).map_err(|err| ProofError::BadFormula {
                step: i + 1,
                err,
            })?;
            map.insert(var.clone(), f);
        }
        let subst = Substitution::new(map);
        let justification = if is_rule_name(&sd.by) {
            Justification::Rule {
                name: sd.by.clone(),
                from: sd.from.clone(),
                subst,
            }
        } else {
            Justification::Axiom {
                tag: sd.by.clone(),
                subst,
            }
        };
        steps.push(Step {
            formula,
            justification,
        });
    }
    Ok(Proof {
        family: doc.family,
        logic: doc.logic.clone(),
        steps,
    })
}

pub fn proof_to_doc(p: &Proof) -> ProofDoc {
    let steps = p
        .steps
        .iter()
        .map(|s| {
            let (by, from, subst) = match &s.justification {
                Justification::Axiom { tag, subst } => (tag.clone(), Vec::new(), subst),
                Justification::Rule { name, from, subst } => (name.clone(), from.clone(), subst),
            };
            StepDoc {
                formula: s.formula.to_string(),
                by,
                from,
                subst: subst
                    .entries()
                    .map(|(v, f)| (v.clone(), f.to_string()))
                    .collect(),
            }
        })
        .collect();
    ProofDoc {
        family: p.family,
        logic: p.logic.clone(),
        steps,
    }
}

pub fn load_proof_str(text: &str) -> Result<Proof, ProofError> {
    let doc: ProofDoc = serde_json::from_str(text)?;
    proof_from_doc(&doc)
}

pub fn proof_to_json(p: &Proof) -> String {
    serde_json::to_string_pretty(&proof_to_doc(p)).expect("proof serialization cannot fail")
}

// ---------------------------------------------------------------------------
// Seeded proof generation (for fuzz suites)

/// Generate `count` valid proofs in the named relevant logic by chaining
/// randomly chosen applicable rules over random axiom instances.
/// Deterministic in the seed; every output is accepted by the checker.
pub fn generate_proofs(logic: &str, count: usize, seed: u64) -> Result<Vec<Proof>, ProofError> {
    let spec = axioms_of(logic, Family::L)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small: Vec<Formula> = {
        let p = Formula::var("p");
        let q = Formula::var("q");
        vec![
            p.clone(),
            q.clone(),
            Formula::neg(p.clone()),
            Formula::and(p.clone(), q.clone()),
            Formula::imp(p.clone(), q.clone()),
            Formula::bx(p.clone()),
        ]
    };
    let mut out = Vec::new();
    while out.len() < count {
        let mut b = Builder { steps: Vec::new() };
        let seeds = rng.gen_range(1..=3);
        for _ in 0..seeds {
            let (tag, _) = spec.axioms[rng.gen_range(0..spec.axioms.len())].clone();
            let subst = Substitution::identity()
                .bind("p", small.choose(&mut rng).unwrap().clone())
                .bind("q", small.choose(&mut rng).unwrap().clone())
                .bind("r", small.choose(&mut rng).unwrap().clone());
            b.axiom(&tag, subst);
        }
        let target = rng.gen_range(3..=10);
        let mut guard = 0;
        while b.steps.len() < target && guard < 50 {
            guard += 1;
            let n = b.steps.len();
            let choice = rng.gen_range(0..7);
            match choice {
                0 => {
                    // US with a random small substitution
                    let i = rng.gen_range(1..=n);
                    let subst = Substitution::identity()
                        .bind("p", small.choose(&mut rng).unwrap().clone());
                    let formula = b.formula(i).substitute(&subst);
                    b.steps.push(Step {
                        formula,
                        justification: Justification::Rule {
                            name: "US".into(),
                            from: vec![i],
                            subst,
                        },
                    });
                }
                1 => {
                    let i = rng.gen_range(1..=n);
                    let j = rng.gen_range(1..=n);
                    let f = Formula::and(b.formula(i).clone(), b.formula(j).clone());
                    b.rule("Adj", vec![i, j], f);
                }
                2 => {
                    let i = rng.gen_range(1..=n);
                    if let Some((a, c)) = as_imp(b.formula(i)) {
                        let f = Formula::imp(Formula::neg(c.clone()), Formula::neg(a.clone()));
                        b.rule("Con", vec![i], f);
                    }
                }
                3 => {
                    let i = rng.gen_range(1..=n);
                    if let Some((a, c)) = as_imp(b.formula(i)) {
                        let f = Formula::imp(Formula::bx(a.clone()), Formula::bx(c.clone()));
                        b.rule("Box-Mon", vec![i], f);
                    }
                }
                4 => {
                    let i = rng.gen_range(1..=n);
                    if let Some((a, c)) = as_imp(b.formula(i)) {
                        let f = Formula::imp(Formula::boxl(a.clone()), Formula::boxl(c.clone()));
                        b.rule("BoxL-Mon", vec![i], f);
                    }
                }
                5 => {
                    // transitivity pattern when two implications compose
                    let i = rng.gen_range(1..=n);
                    let j = rng.gen_range(1..=n);
                    if let (Some((_, bmid)), Some((cmid, _))) =
                        (as_imp(b.formula(i)), as_imp(b.formula(j)))
                    {
                        if bmid == cmid {
                            b.trans(i, j);
                        }
                    }
                }
                _ => {
                    if spec.has_rule("ER") {
                        let i = rng.gen_range(1..=n);
                        let psi = small.choose(&mut rng).unwrap().clone();
                        let f = Formula::imp(
                            Formula::imp(b.formula(i).clone(), psi.clone()),
                            psi,
                        );
                        b.rule("ER", vec![i], f);
                    }
                }
            }
        }
        let proof = Proof {
            family: Family::L,
            logic: spec.logic.clone(),
            steps: b.steps,
        };
        debug_assert!(check_proof(&proof).accepted);
        out.push(proof);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axiom_step(tag: &str, subst: Substitution) -> Step {
        let formula = axiom_template(tag).unwrap().substitute(&subst);
        Step {
            formula,
            justification: Justification::Axiom {
                tag: tag.into(),
                subst,
            },
        }
    }

    /// The two-step derivation of `[](p & q) -> []p`.
    fn conj_elim_proof() -> Proof {
        let a4 = axiom_step("a4", Substitution::identity());
        let mon = Step {
            formula: parse("[](p & q) -> []p").unwrap(),
            justification: Justification::Rule {
                name: "Box-Mon".into(),
                from: vec![1],
                subst: Substitution::identity(),
            },
        };
        Proof {
            family: Family::L,
            logic: "BM.C".into(),
            steps: vec![a4, mon],
        }
    }

    #[test]
    fn bmc_axiom_and_rule_counts() {
        let spec = axioms_of("BM.C", Family::L).unwrap();
        assert_eq!(spec.axioms.len(), 12);
        assert_eq!(spec.rules.len(), 7);
        let ec = axioms_of("E.C", Family::L).unwrap();
        assert!(ec.has_rule("ER"));
        let cl = axioms_of("BM.C", Family::CL).unwrap();
        assert!(cl.axiom("L:a1").is_some());
        assert!(cl.has_rule("L:MP"));
        assert!(cl.has_rule("BR"));
    }

    #[test]
    fn box_mon_proof_accepted() {
        let p = conj_elim_proof();
        assert!(check_proof(&p).accepted);
    }

    #[test]
    fn bridge_rule_example() {
        let p = Proof {
            family: Family::CL,
            logic: "BM.C".into(),
            steps: vec![
                axiom_step("L:a1", Substitution::identity()),
                Step {
                    formula: parse("p -> p").unwrap(),
                    justification: Justification::Rule {
                        name: "BR".into(),
                        from: vec![1],
                        subst: Substitution::identity(),
                    },
                },
            ],
        };
        assert!(check_proof(&p).accepted, "{}", check_proof(&p));
    }

    #[test]
    fn nec_rejected_outside_k_logics() {
        let p = Proof {
            family: Family::L,
            logic: "BM.C".into(),
            steps: vec![
                axiom_step("a1", Substitution::identity()),
                Step {
                    formula: parse("[](p -> p)").unwrap(),
                    justification: Justification::Rule {
                        name: "Nec".into(),
                        from: vec![1],
                        subst: Substitution::identity(),
                    },
                },
            ],
        };
        let v = check_proof(&p);
        assert!(!v.accepted);
        let (step, reason) = v.failure.unwrap();
        assert_eq!(step, 2);
        assert!(reason.contains("not a rule of"), "{reason}");

        let mut p2 = p;
        p2.logic = "BM.K".into();
        assert!(check_proof(&p2).accepted);
    }

    #[test]
    fn axiom_instance_inferred_by_matching() {
        let inst = Step {
            formula: parse("(q & (r -> r)) -> q").unwrap(),
            justification: Justification::Axiom {
                tag: "a4".into(),
                subst: Substitution::identity(),
            },
        };
        // identity substitution does not literally match, but inference does
        let p = Proof {
            family: Family::L,
            logic: "BM.C".into(),
            steps: vec![inst],
        };
        assert!(check_proof(&p).accepted);
    }

    #[test]
    fn wrong_axiom_instance_rejected() {
        let p = Proof {
            family: Family::L,
            logic: "BM.C".into(),
            steps: vec![Step {
                formula: parse("(p & q) -> q").unwrap(),
                justification: Justification::Axiom {
                    tag: "a4".into(),
                    subst: Substitution::identity(),
                },
            }],
        };
        assert!(!check_proof(&p).accepted);
    }

    #[test]
    fn lift_of_two_step_proof() {
        let lifted = lift_proof(&conj_elim_proof()).unwrap();
        assert_eq!(lifted.family, Family::CL);
        assert_eq!(
            *lifted.conclusion().unwrap(),
            parse("[L]([](p & q) -> []p)").unwrap()
        );
        assert!(check_proof(&lifted).accepted);
    }

    #[test]
    fn rr_single_part() {
        let a4 = Proof {
            family: Family::L,
            logic: "BM.C".into(),
            steps: vec![axiom_step("a4", Substitution::identity())],
        };
        let parts = vec![parse("p & q").unwrap()];
        let psi = parse("p").unwrap();
        let out = rr_transform(&a4, &parts, &psi).unwrap();
        assert_eq!(out.family, Family::CL);
        assert_eq!(
            *out.conclusion().unwrap(),
            parse("[](p & q) -> []p").unwrap()
        );
        assert!(check_proof(&out).accepted);
    }

    #[test]
    fn rr_two_parts_via_regularity() {
        // premise: (p & q) -> (p & q), an a1 instance
        let id = Proof {
            family: Family::L,
            logic: "BM.C".into(),
            steps: vec![axiom_step(
                "a1",
                Substitution::identity().bind("p", parse("p & q").unwrap()),
            )],
        };
        let parts = vec![parse("p").unwrap(), parse("q").unwrap()];
        let psi = parse("p & q").unwrap();
        let out = rr_transform(&id, &parts, &psi).unwrap();
        assert_eq!(
            *out.conclusion().unwrap(),
            parse("[]p & []q -> [](p & q)").unwrap()
        );
        assert!(check_proof(&out).accepted);
    }

    #[test]
    fn rr_three_parts() {
        let id = Proof {
            family: Family::L,
            logic: "BM.C".into(),
            steps: vec![axiom_step(
                "a1",
                Substitution::identity().bind("p", parse("(p & q) & r").unwrap()),
            )],
        };
        let parts = vec![
            parse("p").unwrap(),
            parse("q").unwrap(),
            parse("r").unwrap(),
        ];
        let psi = parse("(p & q) & r").unwrap();
        let out = rr_transform(&id, &parts, &psi).unwrap();
        assert_eq!(
            *out.conclusion().unwrap(),
            parse("([]p & []q) & []r -> []((p & q) & r)").unwrap()
        );
        assert!(check_proof(&out).accepted);
    }

    #[test]
    fn rr_shape_mismatch() {
        let a4 = Proof {
            family: Family::L,
            logic: "BM.C".into(),
            steps: vec![axiom_step("a4", Substitution::identity())],
        };
        let parts = vec![parse("p").unwrap()];
        let psi = parse("p").unwrap();
        assert!(matches!(
            rr_transform(&a4, &parts, &psi),
            Err(ProofError::Shape(_))
        ));
    }

    #[test]
    fn proof_json_roundtrip() {
        let p = conj_elim_proof();
        let text = proof_to_json(&p);
        let back = load_proof_str(&text).unwrap();
        assert_eq!(p, back);
        assert!(check_proof(&back).accepted);
    }

    #[test]
    fn generated_proofs_check_and_lift() {
        let proofs = generate_proofs("E.C", 10, 7).unwrap();
        assert_eq!(proofs.len(), 10);
        for p in &proofs {
            assert!(check_proof(p).accepted);
            let lifted = lift_proof(p).unwrap();
            assert!(check_proof(&lifted).accepted);
        }
    }
}
