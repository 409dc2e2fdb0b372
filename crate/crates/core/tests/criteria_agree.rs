use quiverlab::criteria::{criterion10_check, criterion1_check, Criterion1Options, ZipperSpec};
use quiverlab::{fixtures, Field};

#[test]
fn one_step_zipper_matches_first_criterion_on_monomial_fixtures() {
    let mut compared = 0;
    for id in fixtures::FIXTURE_IDS {
        let alg = fixtures::fixture_algebra(id, Field::Rational).unwrap();
        if !alg.is_monomial() {
            continue;
        }
        let quiver = alg.quiver();
        let paths: Vec<_> = alg.basis_paths().iter().filter(|p| !p.is_trivial() && p.len() <= 2).cloned().collect();
        for p in &paths {
            for q in &paths {
                if p == q || p.source != q.source || p.target != q.target {
                    continue;
                }
                let r1 = criterion1_check(&alg, p, q, &Criterion1Options::default()).unwrap();
                let text = format!(
                    "step {} | {} | {}",
                    quiver.vertex_name(p.source),
                    p.display(quiver),
                    q.display(quiver)
                );
                let spec = ZipperSpec::parse(&alg, &text).unwrap();
                let r10 = criterion10_check(&alg, &spec, 3, 12).unwrap();
                assert_eq!(r1.verdict, r10.verdict, "{id}: {text}\n{}\n{}", r1.text(), r10.text());
                compared += 1;
            }
        }
    }
    assert!(compared >= 4, "only {compared} pairs compared");
}
