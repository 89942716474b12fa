//! Property tests: parser/printer round trip, substitution laws, heredity
//! on random validated models, and idempotence of the classicizing rewrite.

use proptest::prelude::*;

use relog_core::formula::{parse, render, Formula, Substitution};
use relog_core::registry::{condition_table, CONDITION_TAGS};
use relog_core::search::random_l_models;
use relog_core::semantics::interpret;

fn var_name() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,4}"
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = var_name().prop_map(Formula::Var);
    leaf.prop_recursive(4, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.clone().prop_map(Formula::neg),
            inner.clone().prop_map(Formula::bx),
            inner.prop_map(Formula::boxl),
        ]
    })
}

proptest! {
    #[test]
    fn parse_render_roundtrip(f in formula_strategy()) {
        let text = render(&f);
        let back = parse(&text).expect("rendered formula must parse");
        prop_assert_eq!(back, f);
    }

    #[test]
    fn rendered_text_is_stable(f in formula_strategy()) {
        // render . parse . render is the identity on rendered output
        let text = render(&f);
        let again = render(&parse(&text).unwrap());
        prop_assert_eq!(text, again);
    }

    #[test]
    fn substitution_identity(f in formula_strategy()) {
        prop_assert_eq!(f.substitute(&Substitution::identity()), f);
    }

    #[test]
    fn substitution_is_a_homomorphism(
        a in formula_strategy(),
        b in formula_strategy(),
        g in formula_strategy(),
    ) {
        let s = Substitution::identity().bind("p", g);
        prop_assert_eq!(
            Formula::and(a.clone(), b.clone()).substitute(&s),
            Formula::and(a.substitute(&s), b.substitute(&s))
        );
        prop_assert_eq!(
            Formula::imp(a.clone(), b.clone()).substitute(&s),
            Formula::imp(a.substitute(&s), b.substitute(&s))
        );
        prop_assert_eq!(
            Formula::bx(a.clone()).substitute(&s),
            Formula::bx(a.substitute(&s))
        );
    }

    #[test]
    fn heredity_on_random_models(seed in 0u64..500, f in formula_strategy()) {
        let vars = vec!["p".to_string(), "q".to_string()];
        for m in random_l_models(4, &vars, 2, seed) {
            let ext = interpret(&m, &f);
            prop_assert!(m.structure.is_up_closed(ext), "heredity broken for {f}");
        }
    }
}

#[test]
fn c_variant_idempotent_on_all_tags() {
    for def in condition_table() {
        let once = def.condition.c_variant();
        assert_eq!(once.c_variant(), once, "({}) not idempotent", def.tag);
        assert!(!once.mentions_l());
    }
    assert_eq!(condition_table().len(), CONDITION_TAGS.len());
}
