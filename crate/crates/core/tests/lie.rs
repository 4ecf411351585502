use proptest::prelude::*;
use tvf_core::{
    longest_element_dual, weyl_group, weyl_group_with_cap, weyl_vector, Error, FiniteType,
    GramData, Weight,
};

fn ft(s: &str) -> FiniteType {
    s.parse().unwrap()
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

#[test]
fn cartan_matrices_in_kac_convention() {
    assert_eq!(ft("C2").cartan_matrix(), vec![vec![2, -2], vec![-1, 2]]);
    assert_eq!(ft("B2").cartan_matrix(), vec![vec![2, -1], vec![-2, 2]]);
    assert_eq!(ft("G2").cartan_matrix(), vec![vec![2, -1], vec![-3, 2]]);
    let b3 = ft("B3").cartan_matrix();
    assert_eq!(b3[2][1], -2);
    assert_eq!(b3[1][2], -1);
    let f4 = ft("F4").cartan_matrix();
    assert_eq!(f4[2][1], -2);
    let d4 = ft("D4").cartan_matrix();
    assert_eq!((d4[1][0], d4[1][2], d4[1][3]), (-1, -1, -1));
}

#[test]
fn cartan_determinants() {
    for (t, d) in [
        ("A1", 2),
        ("A4", 5),
        ("B3", 2),
        ("C4", 2),
        ("D4", 4),
        ("D5", 4),
        ("E6", 3),
        ("E7", 2),
        ("E8", 1),
        ("F4", 1),
        ("G2", 1),
    ] {
        assert_eq!(det(&ft(t).cartan_matrix()), d, "{t}");
    }
}

#[test]
fn root_counts_and_coxeter_numbers() {
    for (t, roots, h, hv) in [
        ("A3", 6, 4, 4),
        ("B3", 9, 6, 5),
        ("C3", 9, 6, 4),
        ("D5", 20, 8, 8),
        ("G2", 6, 6, 4),
        ("F4", 24, 12, 9),
        ("E6", 36, 12, 12),
        ("E7", 63, 18, 18),
        ("E8", 120, 30, 30),
    ] {
        let g = ft(t);
        assert_eq!(g.positive_roots().len(), roots, "{t}");
        assert_eq!(g.coxeter_number(), h, "{t}");
        assert_eq!(g.dual_coxeter_number(), hv, "{t}");
    }
}

#[test]
fn weyl_group_orders() {
    for (t, order) in [
        ("A1", 2),
        ("A3", 24),
        ("B2", 8),
        ("C2", 8),
        ("B3", 48),
        ("C4", 384),
        ("D4", 192),
        ("G2", 12),
        ("F4", 1152),
        ("E6", 51840),
    ] {
        let g = ft(t);
        assert_eq!(weyl_group(g).unwrap().len(), order, "{t}");
        assert_eq!(g.weyl_order(), order as u64, "{t}");
    }
}

#[test]
fn weyl_order_formula_beyond_the_cap() {
    assert_eq!(ft("E7").weyl_order(), 2_903_040);
    assert_eq!(ft("E8").weyl_order(), 696_729_600);
    match weyl_group(ft("E7")) {
        Err(Error::GroupTooLarge { rank: 7, .. }) => {}
        other => panic!("expected the cap to trigger, got {other:?}"),
    }
    assert_eq!(weyl_group_with_cap(ft("A6"), 6).unwrap().len(), 5040);
}

#[test]
fn group_is_closed_and_signs_are_determinants() {
    for t in ["A3", "B3", "G2", "D4"] {
        let g = ft(t);
        let w = weyl_group(g).unwrap();
        let set: std::collections::HashSet<Vec<Vec<i64>>> =
            w.elements().iter().map(|e| e.matrix()).collect();
        assert_eq!(set.len(), w.len());
        for (i, a) in w.elements().iter().enumerate().step_by(7) {
            assert_eq!(det(&a.matrix()), a.sign() as i64);
            for b in w.elements().iter().skip(i % 5).step_by(11) {
                assert!(set.contains(&a.compose(b).matrix()));
            }
        }
    }
}

#[test]
fn rho_has_a_single_regular_orbit() {
    let g = ft("C3");
    let w = weyl_group(g).unwrap();
    let rho = weyl_vector(g);
    let orbit = w.orbit_with_signs(rho.coeffs());
    let distinct: std::collections::HashSet<_> = orbit.iter().map(|(x, _)| x.clone()).collect();
    assert_eq!(distinct.len(), w.len());
    assert_eq!(
        orbit
            .iter()
            .filter(|(x, _)| x.iter().all(|&c| c > 0))
            .count(),
        1
    );
}

#[test]
fn longest_element_dual_matches_enumeration() {
    for t in ["A1", "A2", "A4", "B3", "C3", "D4", "D5", "E6", "F4", "G2"] {
        let g = ft(t);
        let w = weyl_group(g).unwrap();
        // breadth-first order ends at the unique longest element
        let w0 = w.elements().last().unwrap();
        for i in 0..g.rank() {
            let lambda = Weight::fundamental(g, i);
            let expected: Vec<i64> = w0.apply(lambda.coeffs()).iter().map(|c| -c).collect();
            assert_eq!(
                longest_element_dual(g, &lambda).coeffs(),
                &expected[..],
                "{t} omega_{}",
                i + 1
            );
        }
    }
}

#[test]
fn pairing_on_fundamental_weights() {
    let a1 = GramData::untwisted(ft("A1"));
    let w = Weight::fundamental(ft("A1"), 0);
    assert_eq!(
        a1.pairing(&w, &w).unwrap(),
        num_rational::Rational64::new(1, 2)
    );
    let b2 = GramData::untwisted(ft("B2"));
    assert!(b2.pairing(&w, &w).is_err());
}

fn weyl_element_strategy(t: &'static str) -> impl Strategy<Value = usize> {
    0..weyl_group(ft(t)).unwrap().len()
}

proptest! {
    #[test]
    fn reflections_preserve_the_form(idx in weyl_element_strategy("B3"), x in prop::collection::vec(-4i64..5, 3), y in prop::collection::vec(-4i64..5, 3)) {
        let g = ft("B3");
        let gram = GramData::untwisted(g);
        let group = weyl_group(g).unwrap();
        let w = &group.elements()[idx];
        prop_assert_eq!(gram.pairing_coeffs(&w.apply(&x), &w.apply(&y)), gram.pairing_coeffs(&x, &y));
    }

    #[test]
    fn g2_elements_preserve_the_form(idx in weyl_element_strategy("G2"), x in prop::collection::vec(-6i64..7, 2)) {
        let g = ft("G2");
        let gram = GramData::untwisted(g);
        let group = weyl_group(g).unwrap();
        let w = &group.elements()[idx];
        let y = w.apply(&x);
        prop_assert_eq!(gram.pairing_coeffs(&y, &y), gram.pairing_coeffs(&x, &x));
    }

    #[test]
    fn dominant_orbit_representative_is_unique(x in prop::collection::vec(0i64..4, 4)) {
        let g = ft("D4");
        let orbit = weyl_group(g).unwrap().orbit_with_signs(&x);
        let dominant: std::collections::HashSet<_> = orbit.into_iter().filter(|(y, _)| y.iter().all(|&c| c >= 0)).map(|(y, _)| y).collect();
        prop_assert_eq!(dominant.len(), 1);
    }

    #[test]
    fn type_strings_round_trip(series in prop::sample::select(vec!['A', 'B', 'C', 'D']), rank in 1usize..9) {
        let s = format!("{series}{rank}");
        if let Ok(g) = s.parse::<FiniteType>() {
            prop_assert_eq!(g.to_string(), s);
        }
    }
}

#[test]
fn invalid_types_are_rejected() {
    for s in [
        "", "A0", "B1", "C1", "D2", "E5", "E9", "F3", "G3", "H2", "A",
    ] {
        assert!(s.parse::<FiniteType>().is_err(), "{s}");
    }
}
