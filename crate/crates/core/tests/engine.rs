use itertools::Itertools;
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use groudit_core::biunitary::{check_biunitary, Biunitary};
use groudit_core::gaf::laws::{run_law_suite, snakes};
use groudit_core::gaf::{
    check_graphical_biunitarity, left_unitor, measurement_equations, random, right_unitor, yellow_biunitary_equations,
    Engine, Profunctor, Span,
};
use groudit_core::groupoid::{make_cyclic_groudit, make_cyclic_identity, make_groubit, Group, Groupoid};
use groudit_core::Error;

fn groubit_groupoid() -> Groupoid {
    Groupoid::cyclic_union(2, 2)
}

fn z3_generic() -> groudit_core::Groudit {
    make_cyclic_groudit(
        3,
        vec![vec![1, 2, 0], vec![0, 2, 1], vec![2, 1, 0]],
        vec![vec![2, 0, 1], vec![1, 0, 2], vec![0, 1, 2]],
    )
    .unwrap()
}

/// Discrete profunctor `1 ↛ 1` with `n` elements.
fn discrete(name: &str, n: usize) -> Profunctor {
    let u = Groupoid::unit();
    Profunctor::from_fn(name, &u, &u, |_, _| n, |_, _, _, x| x, |_, _, _, x| x).unwrap()
}

#[test]
fn identity_profunctor_carriers() {
    let p = Profunctor::identity(&groubit_groupoid());
    assert_eq!(p.cell_len(0, 0), 2);
    assert_eq!(p.cell_len(1, 1), 2);
    assert_eq!(p.cell_len(0, 1), 0);
    assert_eq!(p.cell_len(1, 0), 0);
    assert!(p.is_free());
}

#[test]
fn boundary_carriers() {
    let g = groubit_groupoid();
    let l = Profunctor::boundary_left("L", &g);
    assert_eq!(l.cell_len(0, 0), 2);
    assert_eq!(l.cell_len(0, 1), 2);
    assert!(l.is_free());
    assert!(Profunctor::boundary_right("R", &g).is_free());
}

#[test]
fn boundary_composite_has_two_classes_per_object() {
    let g = groubit_groupoid();
    let lr = Profunctor::compose(&Profunctor::boundary_left("L", &g), &Profunctor::boundary_right("R", &g)).unwrap();
    assert_eq!(lr.cell_len(0, 0), 4);
    for b in 0..2 {
        let per_object = (0..4).filter(|&k| lr.representative(0, 0, k).unwrap().0 == b).count();
        assert_eq!(per_object, 2);
    }
}

#[test]
fn non_free_action_is_rejected() {
    let z2 = Groupoid::new(vec![Group::cyclic(2)]).unwrap();
    let u = Groupoid::unit();
    let p = Profunctor::from_fn("P", &z2, &u, |_, _| 1, |_, _, _, x| x, |_, _, _, x| x);
    assert!(matches!(p, Err(Error::Validation(_))));
}

#[test]
fn non_equivariant_span_is_rejected() {
    let p = Profunctor::identity(&groubit_groupoid());
    assert!(matches!(Span::natural(&p, &p, |_, _, _| 0), Err(Error::Engine(_))));
}

#[test]
fn vertical_with_identity() {
    let (p, q) = (discrete("P", 2), discrete("Q", 3));
    let tau = Span::from_fn(&p, &q, |_, _, x, y| (x + 2 * y) as u64).unwrap();
    assert!(Span::identity(&p).then(&tau).unwrap().equals(&tau));
    assert!(tau.then(&Span::identity(&q)).unwrap().equals(&tau));
}

#[test]
fn constant_spans_through_three_elements() {
    let (p, q, r) = (discrete("P", 1), discrete("Q", 3), discrete("R", 1));
    let sigma = Span::from_fn(&p, &q, |_, _, _, _| 2).unwrap();
    let tau = Span::from_fn(&q, &r, |_, _, _, _| 2).unwrap();
    assert_eq!(sigma.then(&tau).unwrap().get(0, 0, 0, 0), BigUint::from(12u32));
}

#[test]
fn vertical_matches_matrix_product() {
    for seed in 0..30 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random::groupoid(&mut rng, 3, 3);
        let b = random::groupoid(&mut rng, 3, 3);
        let ps: Vec<_> = (0..3).map(|_| random::profunctor(&mut rng, &a, &b, 2)).collect();
        let sigma = random::span(&mut rng, &ps[0], &ps[1], 3).unwrap();
        let tau = random::span(&mut rng, &ps[1], &ps[2], 3).unwrap();
        let comp = sigma.then(&tau).unwrap();
        for x in 0..a.object_count() {
            for y in 0..b.object_count() {
                let (s, t) = (sigma.cell_matrix(x, y), tau.cell_matrix(x, y));
                let want: Vec<Vec<BigUint>> = s
                    .iter()
                    .map(|row| {
                        (0..ps[2].cell_len(x, y))
                            .map(|j| row.iter().zip(&t).map(|(v, trow)| v * &trow[j]).sum())
                            .collect()
                    })
                    .collect();
                assert_eq!(comp.cell_matrix(x, y), want, "seed {seed}");
            }
        }
    }
}

#[test]
fn unitors_are_unitary() {
    let g = groubit_groupoid();
    for p in [Profunctor::boundary_left("L", &g), Profunctor::identity(&g)] {
        for u in [left_unitor(&p).unwrap(), right_unitor(&p).unwrap()] {
            assert!(u.then(&u.dagger()).unwrap().is_identity());
            assert!(u.dagger().then(&u).unwrap().is_identity());
        }
    }
}

#[test]
fn horizontal_of_identities_is_identity() {
    let g = groubit_groupoid();
    let (l, r) = (Profunctor::boundary_left("L", &g), Profunctor::boundary_right("R", &g));
    assert!(Span::horizontal(&Span::identity(&l), &Span::identity(&r)).unwrap().is_identity());
    assert!(Span::horizontal(&Span::identity(&r), &Span::identity(&l)).unwrap().is_identity());
}

#[test]
fn horizontal_formulas_agree_on_groubit_spans() {
    let e = Engine::new(&make_groubit()).unwrap();
    let f = e.f();
    let h = Span::horizontal(f, f).unwrap();
    assert!(h.equals(&Span::horizontal_reference(f, f).unwrap()));
}

#[test]
fn dagger_basics() {
    let e = Engine::new(&make_groubit()).unwrap();
    assert!(e.tick().dagger().dagger().equals(e.tick()));
    let id = Span::identity(e.lr());
    assert!(id.dagger().equals(&id));
}

#[test]
fn snake_on_groubit_boundary() {
    let g = groubit_groupoid();
    assert!(snakes(&Profunctor::boundary_left("L", &g)).unwrap());
    assert!(snakes(&Profunctor::boundary_right("R", &g)).unwrap());
}

#[test]
fn law_suite_on_100_instances() {
    let report = run_law_suite(2024, 100).unwrap();
    assert_eq!(report.instances, 100);
    assert!(report.all_pass(), "{report:?}");
}

#[test]
fn groubit_measurement_equations() {
    let rep = measurement_equations(&Engine::new(&make_groubit()).unwrap()).unwrap();
    assert!(rep.f_blue_lens);
    assert!(rep.d_iso_unitary);
    assert!(!rep.c_nonequation);
    assert_eq!(rep.e_bubble.as_deref(), Some("2"));
}

#[test]
fn z3_yellow_bubble_is_three() {
    for d in [make_cyclic_identity(3), z3_generic()] {
        let rep = measurement_equations(&Engine::new(&d).unwrap()).unwrap();
        assert!(rep.f_blue_lens && rep.d_iso_unitary && !rep.c_nonequation);
        assert_eq!(rep.e_bubble.as_deref(), Some("3"));
    }
}

#[test]
fn yellow_biunitary_equations_hold() {
    for d in [make_groubit(), make_cyclic_identity(3), z3_generic()] {
        let rep = yellow_biunitary_equations(&Engine::new(&d).unwrap()).unwrap();
        assert!(rep.c_mirror && rep.d && rep.e, "{rep:?}");
    }
}

#[test]
fn graphical_biunitarity_matches_algebraic_on_all_groubit_permutations() {
    let g = groubit_groupoid();
    let mut holds = 0;
    for perm in (0..4).permutations(4) {
        let algebraic = check_biunitary(&g, &perm).unwrap().holds;
        let graphical = check_graphical_biunitarity(&Biunitary::new(g.clone(), perm.clone()).unwrap()).unwrap();
        assert_eq!(algebraic, graphical, "{perm:?}");
        holds += algebraic as usize;
    }
    assert_eq!(holds, 16);
}

#[test]
fn transpose_crossing_is_unitary_and_identity_is_not() {
    let g = groubit_groupoid();
    assert!(check_graphical_biunitarity(&Biunitary::new(g.clone(), vec![0, 2, 1, 3]).unwrap()).unwrap());
    assert!(!check_graphical_biunitarity(&Biunitary::new(g, vec![0, 1, 2, 3]).unwrap()).unwrap());
}
