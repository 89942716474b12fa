//! Turning an L-model into an equivalent W-model by adjoining a world and
//! two bounds, the converse designation swap, and a verifier for the
//! preservation and transfer properties of the construction.

use thiserror::Error;

use crate::formula::{enumerate_to_depth, Formula};
use crate::proofs::base_axiom_templates;
use crate::registry::{check_logic_frame, RegistryError};
use crate::report::Report;
use crate::semantics::{interpret, valid, StateSet};
use crate::structures::{Designation, Model, Structure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("input is not an L-model (designation kind {0:?})")]
    NotLModel(String),
    #[error("input is not a W-model (designation kind {0:?})")]
    NotWModel(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

const RESERVED: [&str; 3] = ["w", "0", "1"];

/// Rename input states that collide with the reserved ids by appending
/// primes until fresh.
fn freshen_names(names: &[String]) -> Vec<String> {
    let mut out: Vec<String> = names.to_vec();
    for i in 0..out.len() {
        if RESERVED.contains(&out[i].as_str()) {
            let mut cand = out[i].clone();
            loop {
                cand.push('\'');
                let taken = RESERVED.contains(&cand.as_str())
                    || out.iter().enumerate().any(|(j, n)| j != i && *n == cand);
                if !taken {
                    break;
                }
            }
            out[i] = cand;
        }
    }
    out
}

/// Adjoin a designated world `w` and bounds `0`, `1` to an L-model, giving a
/// W-model that agrees with the input on all original states. Original
/// states keep their indices; `w`, `0`, `1` take the next three.
pub fn plus_construction(m: &Model) -> Result<Model, TransformError> {
    let Designation::L(l_set) = m.designation else {
        return Err(TransformError::NotLModel(m.designation.kind().to_string()));
    };
    let st = &m.structure;
    let n = st.len();
    let mut names = freshen_names(st.names());
    let w = n;
    let zero = n + 1;
    let one = n + 2;
    names.push("w".into());
    names.push("0".into());
    names.push("1".into());
    let np = n + 3;

    let mut leq = Vec::new();
    for s in 0..n {
        for t in st.up_set(s).iter() {
            leq.push((s, t));
        }
    }
    leq.push((w, w));
    for s in 0..np {
        leq.push((s, one));
        leq.push((zero, s));
    }

    let mut star: Vec<usize> = (0..n).map(|s| st.star(s)).collect();
    star.push(w);
    star.push(one);
    star.push(zero);

    let mut r = Vec::new();
    for s in 0..n {
        for t in 0..n {
            for u in st.r_out(s, t).iter() {
                r.push((s, t, u));
            }
        }
    }
    r.push((w, w, w));
    for s in 0..np {
        for t in 0..np {
            r.push((zero, s, t));
            r.push((s, zero, t));
            r.push((s, t, one));
        }
    }

    let mut q = Vec::new();
    let mut ql = Vec::new();
    for s in 0..n {
        for t in st.q_set(s).iter() {
            q.push((s, t));
        }
        for t in st.ql_set(s).iter() {
            ql.push((s, t));
        }
    }
    q.push((w, w));
    ql.push((w, w));
    for s in l_set.iter() {
        ql.push((w, s));
    }
    for s in 0..np {
        q.push((s, one));
        q.push((zero, s));
        ql.push((s, one));
        ql.push((zero, s));
    }

    let structure = Structure::new(names, &leq, star, &r, &q, &ql, Some((zero, one)));
    let valuation = m
        .valuation()
        .iter()
        .map(|(var, set)| {
            let mut v = *set;
            v.insert(one);
            (var.clone(), v)
        })
        .collect();
    Ok(Model::new(
        structure,
        Designation::W(StateSet::singleton(w)),
        valuation,
    ))
}

/// View a W-model as an L-model: same structure, with the QL-image of W as
/// the set of logical states.
pub fn induced_lframe(m: &Model) -> Result<Model, TransformError> {
    let Designation::W(w_set) = m.designation else {
        return Err(TransformError::NotWModel(m.designation.kind().to_string()));
    };
    let l = m.structure.ql_image(w_set);
    Ok(Model::new(
        m.structure.clone(),
        Designation::L(l),
        m.valuation().clone(),
    ))
}

/// Outcome of checking the construction on one input model.
#[derive(Debug, Clone)]
pub struct PlusReport {
    pub image: Model,
    /// Full W-model validation of the image.
    pub image_validation: Report,
    pub formulas_checked: usize,
    /// `(state, formula, in input, in image)` for every disagreement.
    pub preservation_mismatches: Vec<(String, Formula, bool, bool)>,
    /// For each formula invalid in the input: the image witness state `u`
    /// with `QL w u` but `u` outside the formula's extension, or `None` when
    /// the transfer failed.
    pub transfers: Vec<(Formula, Option<String>)>,
    /// `(logic, input frame report, image frame report)` when a target logic
    /// was named.
    pub frame_check: Option<(String, Report, Report)>,
}

impl PlusReport {
    pub fn transfer_ok(&self) -> bool {
        self.transfers.iter().all(|(_, w)| w.is_some())
    }

    pub fn ok(&self) -> bool {
        self.image_validation.is_ok()
            && self.preservation_mismatches.is_empty()
            && self.transfer_ok()
            && match &self.frame_check {
                None => true,
                // the claim is conditional: an input satisfying the frame
                // conditions must map to an image satisfying the C-variants
                Some((_, input, image)) => !input.is_ok() || image.is_ok(),
            }
    }
}

/// The default formula battery: everything over the model's declared
/// variables to depth 3, plus the twelve base axioms.
pub fn default_formula_set(m: &Model) -> Vec<Formula> {
    let vars: Vec<String> = m.declared_variables().cloned().collect();
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut out = enumerate_to_depth(&var_refs, 3);
    for (_, template) in base_axiom_templates() {
        if !out.contains(template) {
            out.push(template.clone());
        }
    }
    out
}

/// Run the construction and check, per formula: agreement at every original
/// state, and for formulas invalid in the input, that the lifted box formula
/// is invalid in the image. With `logic`, also compare frame checks.
pub fn verify_plus(
    m: &Model,
    formulas: &[Formula],
    logic: Option<&str>,
) -> Result<PlusReport, TransformError> {
    let image = plus_construction(m)?;
    let image_validation = image.validate();
    let n = m.structure.len();

    let mut preservation_mismatches = Vec::new();
    let mut transfers = Vec::new();
    for f in formulas {
        let before = interpret(m, f);
        let after = interpret(&image, f);
        for s in 0..n {
            if before.contains(s) != after.contains(s) {
                preservation_mismatches.push((
                    m.structure.name(s).to_string(),
                    f.clone(),
                    before.contains(s),
                    after.contains(s),
                ));
            }
        }
        if !valid(m, f).expect("input has a designation") {
            let boxed = Formula::boxl(f.clone());
            let witness = if valid(&image, &boxed).expect("image has a designation") {
                None
            } else {
                // exhibit u with QL w u and u outside the extension
                let ext = interpret(&image, f);
                let w = image.designation.set().iter().next().expect("W = {w}");
                image
                    .structure
                    .ql_set(w)
                    .iter()
                    .find(|u| !ext.contains(*u))
                    .map(|u| image.structure.name(u).to_string())
            };
            transfers.push((f.clone(), witness));
        }
    }

    let frame_check = match logic {
        None => None,
        Some(name) => {
            let input_rep = check_logic_frame(&m.structure, &m.designation, name, false)?;
            let image_rep = check_logic_frame(&image.structure, &image.designation, name, true)?;
            Some((name.to_string(), input_rep, image_rep))
        }
    };

    Ok(PlusReport {
        image,
        image_validation,
        formulas_checked: formulas.len(),
        preservation_mismatches,
        transfers,
        frame_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::satisfies;
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

    const ONE_STATE_L_EMPTY_P: &str = r#"{
        "states": ["s"],
        "leq": [["s","s"]],
        "star": {"s": "s"},
        "R": [["s","s","s"]],
        "Q": [],
        "QL": [],
        "designation": {"kind": "L", "set": ["s"]},
        "valuation": {"p": []}
    }"#;

    #[test]
    fn plus_of_one_state_model() {
        let m = load_model_str(ONE_STATE_L).unwrap();
        let plus = plus_construction(&m).unwrap();
        assert_eq!(plus.structure.len(), 4);
        let rep = plus.validate();
        assert!(rep.is_ok(), "{rep}");
        assert_eq!(plus.designation.kind(), "W");

        // QL(w) = {w} ∪ L ∪ {1}
        let w = plus.structure.index("w").unwrap();
        let names: Vec<&str> = plus
            .structure
            .ql_set(w)
            .iter()
            .map(|i| plus.structure.name(i))
            .collect();
        assert_eq!(names, vec!["s", "w", "1"]);

        // R gains (w,w,w)
        assert!(plus.structure.r_contains(w, w, w));

        // R gains the bound families
        let zero = plus.structure.index("0").unwrap();
        let one = plus.structure.index("1").unwrap();
        for s in 0..4 {
            for t in 0..4 {
                assert!(plus.structure.r_contains(zero, s, t));
                assert!(plus.structure.r_contains(s, zero, t));
                assert!(plus.structure.r_contains(s, t, one));
            }
        }
    }

    #[test]
    fn plus_worlds_contain_w() {
        let m = load_model_str(ONE_STATE_L).unwrap();
        let plus = plus_construction(&m).unwrap();
        let worlds = plus.structure.possible_worlds();
        let w = plus.structure.index("w").unwrap();
        let zero = plus.structure.index("0").unwrap();
        let one = plus.structure.index("1").unwrap();
        assert!(worlds.contains(w));
        assert!(!worlds.contains(zero));
        assert!(!worlds.contains(one));
        // the original reflexive star-fixed state also passes the world
        // tests here; only {w} is designated
        assert_eq!(plus.designation.set(), StateSet::singleton(w));
    }

    #[test]
    fn reserved_names_are_renamed() {
        let text = ONE_STATE_L.replace("\"s\"", "\"w\"");
        let m = load_model_str(&text).unwrap();
        let plus = plus_construction(&m).unwrap();
        assert_eq!(plus.structure.name(0), "w'");
        assert_eq!(plus.structure.name(1), "w");
        assert!(plus.validate().is_ok());
    }

    #[test]
    fn induced_lframe_of_plus() {
        let m = load_model_str(ONE_STATE_L).unwrap();
        let plus = plus_construction(&m).unwrap();
        let induced = induced_lframe(&plus).unwrap();
        let rep = induced.validate();
        assert!(rep.is_ok(), "{rep}");
        let names: Vec<&str> = induced
            .designation
            .set()
            .iter()
            .map(|i| induced.structure.name(i))
            .collect();
        assert_eq!(names, vec!["s", "w", "1"]);
    }

    #[test]
    fn transfer_of_invalid_formula() {
        // V(p) empty: p is invalid at the designated state; the image must
        // refute the lifted box at w.
        let m = load_model_str(ONE_STATE_L_EMPTY_P).unwrap();
        let p = parse("p").unwrap();
        assert!(!valid(&m, &p).unwrap());
        let report = verify_plus(&m, &[p.clone()], None).unwrap();
        assert!(report.ok());
        assert_eq!(report.transfers.len(), 1);
        assert_eq!(report.transfers[0].1.as_deref(), Some("s"));
        let boxed = parse("[L]p").unwrap();
        assert!(!valid(&report.image, &boxed).unwrap());
        assert!(!satisfies(&report.image, "w", &boxed).unwrap());
    }

    #[test]
    fn preservation_on_default_battery() {
        let m = load_model_str(ONE_STATE_L).unwrap();
        let formulas = default_formula_set(&m);
        let report = verify_plus(&m, &formulas, Some("BM.C")).unwrap();
        assert!(
            report.ok(),
            "mismatches: {:?}",
            report.preservation_mismatches
        );
        assert!(report.preservation_mismatches.is_empty());
    }

    #[test]
    fn plus_requires_l_designation() {
        let m = load_model_str(&ONE_STATE_L.replace(
            r#""designation": {"kind": "L", "set": ["s"]}"#,
            r#""designation": {"kind": "none", "set": []}"#,
        ))
        .unwrap();
        assert!(matches!(
            plus_construction(&m),
            Err(TransformError::NotLModel(_))
        ));
    }
}
