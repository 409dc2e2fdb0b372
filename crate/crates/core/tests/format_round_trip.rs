use std::sync::Arc;

use quiverlab::fixtures;
use quiverlab::format::{parse_algebra, parse_modules, write_algebra, write_explicit, write_presented};
use quiverlab::rep::PresentedModule;

fn modules_of(id: &str, alg: &Arc<quiverlab::Algebra>) -> Vec<(String, PresentedModule)> {
    let mut out = Vec::new();
    match id {
        "ex2" => {
            for n in 1..=4 {
                out.push((format!("M{n}"), fixtures::zipper_m(alg, n).unwrap()));
            }
        }
        "ex3" => out.push(("A1".into(), fixtures::ex3_a1(alg).unwrap())),
        "ex4" => {
            out.push(("M".into(), fixtures::ex4_m(alg).unwrap()));
            out.push(("E2".into(), fixtures::ex4_e(alg, 2).unwrap()));
        }
        "ex12" => out.push(("A1".into(), fixtures::ex12_a1(alg).unwrap())),
        "ex13" => {
            for n in 1..=3 {
                out.push((format!("C{n}"), fixtures::ex13_c(alg, n).unwrap()));
            }
        }
        _ => unreachable!(),
    }
    out
}

#[test]
fn fixture_algebras_survive_write_and_parse() {
    for id in fixtures::FIXTURE_IDS {
        let alg = fixtures::fixture_algebra(id, quiverlab::Field::Rational).unwrap();
        let again = parse_algebra(&write_algebra(&alg)).unwrap();
        assert_eq!(*alg, again, "{id}");
    }
}

#[test]
fn fixture_modules_survive_both_stanza_kinds() {
    for id in fixtures::FIXTURE_IDS {
        let alg = fixtures::fixture_algebra(id, quiverlab::Field::Rational).unwrap();
        for (name, pm) in modules_of(id, &alg) {
            let gens: Vec<String> = (1..=pm.gens.len()).map(|i| format!("x{i}")).collect();
            let back = parse_modules(&alg, &write_presented(&name, &pm, &gens)).unwrap();
            assert_eq!(back[0].module, pm.module, "{id}/{name} presented");
            let back = parse_modules(&alg, &write_explicit(&name, &pm.module)).unwrap();
            assert_eq!(back[0].module, pm.module, "{id}/{name} explicit");
            assert_eq!(back[0].name, name);
        }
    }
}
