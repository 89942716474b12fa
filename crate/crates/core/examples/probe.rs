use relog_core::search::{enumerate_models, Kind};
use relog_core::transform::{default_formula_set, verify_plus};
use std::time::Instant;

fn main() {
    let vars = vec!["p".to_string(), "q".to_string()];
    for logic in ["BM.C", "DW.C", "E.C", "R.CT"] {
        for n in 1..=3 {
            let t0 = Instant::now();
            let e = enumerate_models(n, logic, Kind::L, &vars, 25).unwrap();
            let t_enum = t0.elapsed();
            let t1 = Instant::now();
            let mut ok = 0;
            for m in &e.models {
                let battery = default_formula_set(m);
                let rep = verify_plus(m, &battery, Some(logic)).unwrap();
                assert!(rep.ok(), "verify_plus failed for {logic} n={n}");
                ok += 1;
            }
            println!(
                "{logic} n={n}: {} models (exhausted={}) enum {:?}, verify {} in {:?}",
                e.models.len(), e.exhausted, t_enum, ok, t1.elapsed()
            );
        }
    }
}
