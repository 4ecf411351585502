mod common;

use common::KacWalton;
use rand::rngs::StdRng;
use rand::SeedableRng;
use tvf_core::suites::{random_cover_spec, random_degeneration};
use tvf_core::{
    longest_element_dual, parse_cover_spec, rank, untwisted_fusion, verify_propagation, CoverSpec,
    CoverSpecDoc, Degeneration, DiagramAutomorphism, Error, Evaluator, FiniteType, Weight,
};

fn ft(s: &str) -> FiniteType {
    s.parse().unwrap()
}

fn parse(json: &str) -> CoverSpec {
    parse_cover_spec(json).unwrap()
}

#[test]
fn double_cover_of_the_sphere_with_four_points() {
    let s = parse(
        r#"{"algebra":"A3","sigma":"flip","level":1,"genus":0,"monodromies":[1,1,1,1],"weights":[[0,0],[0,0],[0,0],[0,0]]}"#,
    );
    let r = rank(&s).unwrap();
    assert_eq!(r.rank, 2);
    assert!(r.residual < 1e-9);
}

#[test]
fn triality_three_point_ranks() {
    let eval = Evaluator::new();
    for (l, expected) in [(1, 2), (2, 3)] {
        let s = parse(&format!(
            r#"{{"algebra":"D4","sigma":"triality","level":{l},"genus":0,"monodromies":[1,1,1],"weights":[[0,0],[0,0],[0,0]]}}"#
        ));
        assert_eq!(eval.rank(&s).unwrap().rank, expected);
    }
    for l in [1, 2] {
        let s = parse(&format!(
            r#"{{"algebra":"D4","sigma":"triality","level":{l},"genus":0,"monodromies":[1,2,0],"weights":[[0,0],[0,0],[0,0,0,0]]}}"#
        ));
        assert_eq!(eval.rank(&s).unwrap().rank, 1);
    }
}

#[test]
fn sigma_as_a_permutation() {
    let named = parse(
        r#"{"algebra":"A3","sigma":"flip","level":2,"genus":0,"monodromies":[1,1,0],"weights":[[0,0],[1,0],[0,1,0]]}"#,
    );
    let perm = parse(
        r#"{"algebra":"A3","sigma":[3,2,1],"level":2,"genus":0,"monodromies":[1,1,0],"weights":[[0,0],[1,0],[0,1,0]]}"#,
    );
    assert_eq!(named, perm);
    assert_eq!(rank(&named).unwrap(), rank(&perm).unwrap());
}

#[test]
fn invalid_documents() {
    let cases = [
        // monodromies do not multiply to the identity
        r#"{"algebra":"A3","sigma":"flip","level":1,"genus":0,"monodromies":[1,1,1],"weights":[[0,0],[0,0],[0,0]]}"#,
        // weight of the wrong rank for a ramified point
        r#"{"algebra":"A3","sigma":"flip","level":1,"genus":0,"monodromies":[1,1,0],"weights":[[0,0,0],[0,0],[0,0,0]]}"#,
        // above the level
        r#"{"algebra":"A3","sigma":"flip","level":1,"genus":0,"monodromies":[1,1],"weights":[[2,0],[0,0]]}"#,
        // unstable
        r#"{"algebra":"A3","sigma":"flip","level":1,"genus":0,"monodromies":[1,1],"weights":[[0,0],[0,0]]}"#,
        // unknown field
        r#"{"algebra":"A3","sigma":"flip","level":1,"genus":1,"monodromies":[],"weights":[],"colour":1}"#,
        // not an automorphism
        r#"{"algebra":"A3","sigma":[2,1,3],"level":1,"genus":1,"monodromies":[],"weights":[]}"#,
        // zero level
        r#"{"algebra":"A3","sigma":"flip","level":0,"genus":1,"monodromies":[],"weights":[]}"#,
        // genus-0 holonomy larger than what the points generate
        r#"{"algebra":"A3","sigma":"flip","level":1,"genus":0,"monodromies":[0,0,0],"weights":[[0,0,0],[0,0,0],[0,0,0]],"holonomy":1}"#,
    ];
    for json in cases {
        assert!(parse_cover_spec(json).is_err(), "{json}");
    }
}

#[test]
fn json_round_trip() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..30 {
        let s = random_cover_spec(&mut rng, 3);
        let json = serde_json::to_string(&CoverSpecDoc::from(&s)).unwrap();
        assert_eq!(parse(&json), s);
    }
}

#[test]
fn rank_is_invariant_under_reordering_points() {
    let eval = Evaluator::new();
    let mut rng = StdRng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 25 {
        let s = random_cover_spec(&mut rng, 2);
        if s.num_points() < 2 {
            continue;
        }
        let mut t = s.clone();
        t.monodromies.reverse();
        t.weights.reverse();
        assert_eq!(eval.rank(&s).unwrap().rank, eval.rank(&t).unwrap().rank);
        checked += 1;
    }
}

#[test]
fn double_cover_genus_one_factorizes() {
    let s = parse(
        r#"{"algebra":"A3","sigma":"flip","level":1,"genus":1,"monodromies":[1,1],"weights":[[0,0],[0,0]]}"#,
    );
    let eval = Evaluator::new();
    assert_eq!(eval.rank(&s).unwrap().rank, 4);
    for k in [0, 1] {
        let r = eval
            .verify_factorization(&s, &Degeneration::NonSeparating { edge_class: k })
            .unwrap();
        assert!(r.holds, "edge class {k}: {} vs {}", r.lhs, r.rhs);
    }
}

#[test]
fn separating_factorization() {
    let s = parse(
        r#"{"algebra":"A5","sigma":"flip","level":2,"genus":0,"monodromies":[1,1,1,1],"weights":[[0,0,0],[1,0,0],[1,0,0],[0,0,0]]}"#,
    );
    let r = Evaluator::new()
        .verify_factorization(
            &s,
            &Degeneration::Separating {
                first: vec![0, 2],
                first_genus: 0,
            },
        )
        .unwrap();
    assert!(r.holds);
    assert!(r.terms > 0);
}

#[test]
fn random_factorizations_hold() {
    let eval = Evaluator::new();
    let mut rng = StdRng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 10 {
        let (s, d) = random_degeneration(&mut rng, 2);
        match eval.verify_factorization(&s, &d) {
            Ok(r) => {
                assert!(r.holds, "{s:?} {d:?}: {} vs {}", r.lhs, r.rhs);
                checked += 1;
            }
            Err(Error::InvalidSpec(_)) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn propagation_of_vacua() {
    let s = parse(
        r#"{"algebra":"E6","sigma":"flip","level":1,"genus":2,"monodromies":[],"weights":[]}"#,
    );
    let r = verify_propagation(&s).unwrap();
    assert!(r.holds);
    assert_eq!(r.before, 3);
}

#[test]
fn untwisted_three_point_ranks_are_fusion_coefficients() {
    for (n, name) in [(1usize, "A1"), (2, "A2")] {
        let g = ft(name);
        for level in 1..=3 {
            let kw = KacWalton::new(n, level);
            let fusion = untwisted_fusion(g, level).unwrap().rounded().unwrap();
            let alcove = kw.alcove();
            let eval = Evaluator::new();
            let size = alcove.len();
            for (a, lambda) in alcove.iter().enumerate() {
                for (b, mu) in alcove.iter().enumerate() {
                    for (c, nu) in alcove.iter().enumerate() {
                        let nu_star = longest_element_dual(g, &Weight::new(g, nu.clone()).unwrap());
                        let spec = CoverSpec {
                            algebra: g,
                            sigma: DiagramAutomorphism::identity(g),
                            order: 1,
                            level,
                            genus: 0,
                            monodromies: vec![0, 0, 0],
                            weights: vec![
                                Weight::new(g, lambda.clone()).unwrap(),
                                Weight::new(g, mu.clone()).unwrap(),
                                nu_star,
                            ],
                            holonomy: 1,
                        };
                        let r = eval.rank(&spec).unwrap().rank as i64;
                        assert_eq!(r, fusion[(a * size + b) * size + c].a, "{name} l={level}");
                        assert_eq!(r, kw.fuse(lambda, mu).get(nu).copied().unwrap_or(0));
                    }
                }
            }
        }
    }
}
