use std::sync::Arc;

use groudit_core::groupoid::{make_cyclic_groudit, make_cyclic_identity, make_groubit, Morphism};
use groudit_core::netsim::{run_program, states_equal_up_to_scalar, MultisetState, Network, Op, Program, Step, Value};
use groudit_core::{Error, Groudit};
use num_bigint::BigUint;
use num_rational::BigRational;

fn m(a: usize, b: usize) -> Value {
    Value::Morph(Morphism::new(a, b))
}

fn state(terms: &[(Vec<Value>, u32)]) -> MultisetState {
    let mut s = MultisetState::empty();
    for (c, k) in terms {
        s.add(c.clone(), BigUint::from(*k));
    }
    s
}

fn net(d: Groudit) -> Network {
    Network::new(Arc::new(d))
}

fn run(d: Groudit, ops: Vec<Op>) -> Network {
    let mut n = net(d);
    for op in &ops {
        n.apply(op).unwrap();
    }
    n
}

fn prep(name: &str, a: usize, b: usize) -> Op {
    Op::Prep(name.into(), Morphism::new(a, b))
}

fn z3_generic() -> Groudit {
    make_cyclic_groudit(
        3,
        vec![vec![1, 2, 0], vec![0, 2, 1], vec![2, 1, 0]],
        vec![vec![2, 0, 1], vec![1, 0, 2], vec![0, 1, 2]],
    )
    .unwrap()
}

#[test]
fn init_groubit() {
    let n = run(make_groubit(), vec![Op::Init("A".into())]);
    assert_eq!(n.state(), &state(&[(vec![m(0, 0)], 1), (vec![m(1, 0)], 1)]));
}

#[test]
fn init_twice_is_a_product() {
    let n = run(make_groubit(), vec![Op::Init("A".into()), Op::Init("B".into())]);
    assert_eq!(n.state().iter().count(), 4);
    let z = run(make_cyclic_identity(3), vec![Op::Init("A".into())]);
    assert_eq!(z.state(), &state(&[(vec![m(0, 0)], 1), (vec![m(1, 0)], 1), (vec![m(2, 0)], 1)]));
}

#[test]
fn duplicate_name_is_an_error() {
    let mut n = run(make_groubit(), vec![Op::Init("A".into())]);
    let before = n.state().clone();
    assert!(matches!(n.apply(&Op::Init("A".into())), Err(Error::Op(_))));
    assert_eq!(n.state(), &before);
}

#[test]
fn swap_examples() {
    let n = run(make_groubit(), vec![prep("A", 0, 1), Op::Swap("A".into())]);
    assert_eq!(n.state(), &state(&[(vec![m(1, 0)], 1)]));
    let n = run(make_groubit(), vec![prep("A", 1, 1), Op::Swap("A".into())]);
    assert_eq!(n.state(), &state(&[(vec![m(1, 1)], 1)]));
    let n = run(make_cyclic_identity(3), vec![prep("A", 0, 2), Op::Swap("A".into())]);
    assert_eq!(n.state(), &state(&[(vec![m(2, 0)], 1)]));
}

#[test]
fn swap_on_dit_is_a_type_error() {
    let mut n = run(make_groubit(), vec![Op::Rand("x".into())]);
    assert!(matches!(n.apply(&Op::Swap("x".into())), Err(Error::Op(_))));
}

#[test]
fn tick_examples() {
    let tick = Op::Tick("A".into(), "B".into());
    let n = run(make_groubit(), vec![prep("A", 0, 1), prep("B", 1, 0), tick.clone()]);
    assert_eq!(n.state(), &state(&[(vec![m(0, 0), m(1, 0)], 1)]));
    let n = run(make_groubit(), vec![prep("A", 1, 1), prep("B", 0, 1), tick]);
    assert_eq!(n.state(), &state(&[(vec![m(1, 1), m(0, 0)], 1)]));
}

#[test]
fn groubit_tick_rule_on_all_inputs() {
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let n =
                        run(make_groubit(), vec![prep("A", a, b), prep("B", c, d), Op::Tick("A".into(), "B".into())]);
                    assert_eq!(n.state(), &state(&[(vec![m(a, b ^ c), m(c, a ^ d)], 1)]));
                }
            }
        }
    }
}

#[test]
fn unlinked_tick_is_rejected() {
    let mut n = Network::with_links(Arc::new(make_groubit()), [("A".to_string(), "B".to_string())]);
    for op in [Op::Init("A".into()), Op::Init("B".into()), Op::Init("C".into())] {
        n.apply(&op).unwrap();
    }
    assert!(n.apply(&Op::Tick("B".into(), "A".into())).is_ok());
    assert!(matches!(n.apply(&Op::Tick("A".into(), "C".into())), Err(Error::Op(_))));
}

#[test]
fn read_examples() {
    let n = run(make_groubit(), vec![prep("A", 1, 0), Op::Read("A".into())]);
    assert_eq!(n.state(), &state(&[(vec![Value::Dit(1)], 1)]));
    let mut n = run(make_groubit(), vec![Op::Rand("x".into()), Op::Write("x".into())]);
    n.apply(&Op::Read("x".into())).unwrap();
    assert_eq!(n.state(), &state(&[(vec![Value::Dit(0)], 2), (vec![Value::Dit(1)], 2)]));
    let n = run(make_cyclic_identity(3), vec![prep("A", 2, 0), Op::Read("A".into())]);
    assert_eq!(n.state(), &state(&[(vec![Value::Dit(2)], 1)]));
}

#[test]
fn read_merges_branches() {
    let mut n = run(make_groubit(), vec![Op::PrepDit("A".into(), 0), Op::Write("A".into())]);
    assert_eq!(n.state(), &state(&[(vec![m(0, 0)], 1), (vec![m(0, 1)], 1)]));
    n.apply(&Op::Read("A".into())).unwrap();
    assert_eq!(n.state(), &state(&[(vec![Value::Dit(0)], 2)]));
}

#[test]
fn write_examples() {
    let n = run(make_groubit(), vec![Op::PrepDit("x".into(), 1), Op::Write("x".into())]);
    assert_eq!(n.state(), &state(&[(vec![m(1, 0)], 1), (vec![m(1, 1)], 1)]));
    let n = run(make_cyclic_identity(3), vec![Op::PrepDit("x".into(), 0), Op::Write("x".into())]);
    assert_eq!(n.state().iter().count(), 3);
    let n = run(make_cyclic_identity(3), vec![Op::PrepDit("x".into(), 2), Op::Write("x".into()), Op::Read("x".into())]);
    assert_eq!(n.state(), &state(&[(vec![Value::Dit(2)], 3)]));
}

#[test]
fn write_rejects_out_of_range_dit() {
    let mut n = net(make_groubit());
    assert!(n.apply(&Op::PrepDit("x".into(), 2)).is_err());
}

#[test]
fn rand_and_erase() {
    let n = run(make_groubit(), vec![Op::Rand("x".into())]);
    assert_eq!(n.state(), &state(&[(vec![Value::Dit(0)], 1), (vec![Value::Dit(1)], 1)]));
    let n = run(make_groubit(), vec![Op::PrepDit("x".into(), 1), Op::Erase("x".into())]);
    assert_eq!(n.state(), &state(&[(vec![], 1)]));
    let n = run(make_groubit(), vec![Op::Rand("x".into()), Op::Erase("x".into())]);
    assert_eq!(n.state(), &state(&[(vec![], 2)]));
    assert!(n.systems().is_empty());
}

#[test]
fn iread_iwrite_examples() {
    let n = run(make_groubit(), vec![prep("A", 1, 0), Op::IRead("A".into())]);
    assert_eq!(n.state(), &state(&[(vec![Value::Dit(0)], 1)]));
    let n = run(make_groubit(), vec![Op::PrepDit("x".into(), 1), Op::IWrite("x".into())]);
    assert_eq!(n.state(), &state(&[(vec![m(0, 1)], 1), (vec![m(1, 1)], 1)]));
    for d in [make_groubit(), make_cyclic_identity(3), z3_generic()] {
        for x in 0..d.n() {
            let n = run(d.clone(), vec![Op::PrepDit("x".into(), x), Op::IWrite("x".into()), Op::IRead("x".into())]);
            assert_eq!(n.state(), &state(&[(vec![Value::Dit(x)], d.n() as u32)]));
        }
    }
}

#[test]
fn ctick_examples() {
    let n =
        run(make_groubit(), vec![Op::PrepDit("c".into(), 1), prep("A", 0, 0), Op::CTickLeft("c".into(), "A".into())]);
    assert_eq!(n.state(), &state(&[(vec![Value::Dit(1), m(0, 1)], 1)]));
    for a in 0..2 {
        for b in 0..2 {
            let n = run(
                make_groubit(),
                vec![Op::PrepDit("c".into(), 0), prep("A", a, b), Op::CTickLeft("c".into(), "A".into())],
            );
            assert_eq!(n.state(), &state(&[(vec![Value::Dit(0), m(a, b)], 1)]));
            for c in 0..2 {
                let n = run(
                    make_groubit(),
                    vec![prep("A", a, b), Op::PrepDit("c".into(), c), Op::CTickRight("A".into(), "c".into())],
                );
                assert_eq!(n.state(), &state(&[(vec![m(a, b ^ c), Value::Dit(c)], 1)]));
            }
        }
    }
}

#[test]
fn split_examples() {
    let n = run(make_groubit(), vec![Op::Split("A".into(), "B".into())]);
    let expected: Vec<_> = (0..2).flat_map(|a| (0..2).map(move |b| (vec![m(a, b), m(a, b)], 1))).collect();
    assert_eq!(n.state(), &state(&expected));
    let n = run(make_cyclic_identity(3), vec![Op::Split("A".into(), "B".into())]);
    assert_eq!(n.state().iter().count(), 9);
    assert_eq!(n.state().get(&vec![m(0, 1), m(0, 2)]), BigUint::from(1u32));
}

#[test]
fn entanglement_trace() {
    let program = Program::from_json(
        r#"[{"op": "init", "args": ["A"]}, {"op": "init", "args": ["B"]},
            {"op": "tick", "args": ["A", "B"]}, {"op": "swap", "args": ["B"]}]"#,
    )
    .unwrap();
    let (n, trace) = run_program(net(make_groubit()), &program).unwrap();
    let expected: Vec<_> = (0..2).flat_map(|a| (0..2).map(move |c| (vec![m(a, c), m(a, c)], 1))).collect();
    assert_eq!(n.state(), &state(&expected));
    assert_eq!(trace.entries.len(), 4);
    let text = trace.to_string();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().last().unwrap().ends_with("\tSwap(B)"));
}

#[test]
fn empty_program_is_identity() {
    let (n, trace) = run_program(net(make_groubit()), &Program::new(vec![])).unwrap();
    assert_eq!(n.state(), &MultisetState::unit());
    assert!(trace.entries.is_empty());
}

#[test]
fn failed_steps_are_skipped() {
    let ops = [Op::Init("A".into()), Op::Init("B".into()), Op::Tick("A".into(), "B".into()), Op::Swap("B".into())];
    let program = Program::new(
        ops.iter()
            .enumerate()
            .map(|(i, op)| if i == 2 { Step::failed(op.clone()) } else { Step::ok(op.clone()) })
            .collect(),
    );
    let (faulty, trace) = run_program(net(make_groubit()), &program).unwrap();
    let skipped = run(make_groubit(), vec![ops[0].clone(), ops[1].clone(), ops[3].clone()]);
    assert_eq!(faulty.state(), skipped.state());
    assert!(trace.entries[2].failed);
    assert!(trace.to_string().lines().nth(2).unwrap().ends_with("[failed]"));
}

#[test]
fn type_errors_carry_the_step_index() {
    let program = Program::from_ops([Op::Init("A".into()), Op::Read("A".into()), Op::Swap("A".into())]);
    assert!(matches!(run_program(net(make_groubit()), &program), Err(Error::Step { step: 2, .. })));
    let bad = Program::from_json(r#"[{"op": "init", "args": ["A"]}, {"op": "teleport", "args": []}]"#);
    assert!(matches!(bad, Err(Error::Step { step: 1, .. })));
    assert!(matches!(Program::from_json("[{"), Err(Error::Parse { .. })));
}

#[test]
fn scalar_comparator() {
    let s = |k: u32| state(&[(vec![Value::Dit(0)], k)]);
    assert_eq!(states_equal_up_to_scalar(&s(2), &s(1)), Some(BigRational::from_integer(2.into())));
    let x = state(&[(vec![Value::Dit(0)], 1), (vec![Value::Dit(1)], 1)]);
    let y = state(&[(vec![Value::Dit(0)], 1), (vec![Value::Dit(1)], 2)]);
    assert_eq!(states_equal_up_to_scalar(&x, &y), None);
    assert_eq!(states_equal_up_to_scalar(&x, &MultisetState::empty()), None);
}

#[test]
fn three_node_ticks_commute() {
    let links = [("A".to_string(), "B".to_string()), ("B".to_string(), "C".to_string())];
    let d = Arc::new(make_groubit());
    let g = d.groupoid().clone();
    let mut count = 0;
    for x in g.morphisms() {
        for y in g.morphisms() {
            for z in g.morphisms() {
                let run_order = |first: Op, second: Op| {
                    let mut n = Network::with_links(d.clone(), links.clone());
                    for op in [Op::Prep("A".into(), x), Op::Prep("B".into(), y), Op::Prep("C".into(), z), first, second]
                    {
                        n.apply(&op).unwrap();
                    }
                    n.state().clone()
                };
                let ab = Op::Tick("A".into(), "B".into());
                let bc = Op::Tick("B".into(), "C".into());
                assert_eq!(run_order(ab.clone(), bc.clone()), run_order(bc, ab));
                count += 1;
            }
        }
    }
    assert_eq!(count, 64);
}

#[test]
fn swap_is_involution_iff_f_is() {
    for d in [make_groubit(), make_cyclic_identity(3), z3_generic()] {
        let involutive = d.groupoid().morphisms().all(|g| d.f(d.f(g)) == g);
        let swap_twice_identity = d.groupoid().morphisms().all(|g| {
            let n = run(d.clone(), vec![Op::Prep("A".into(), g), Op::Swap("A".into()), Op::Swap("A".into())]);
            n.state() == &state(&[(vec![Value::Morph(g)], 1)])
        });
        assert_eq!(involutive, swap_twice_identity);
    }
    assert!(!z3_generic().groupoid().morphisms().all(|g| z3_generic().f(z3_generic().f(g)) == g));
}

#[test]
fn inverse_ops_undo() {
    let d = z3_generic();
    for x in d.groupoid().morphisms() {
        for y in d.groupoid().morphisms() {
            let start = run(d.clone(), vec![Op::Prep("A".into(), x), Op::Prep("B".into(), y)]);
            let n = run(
                d.clone(),
                vec![
                    Op::Prep("A".into(), x),
                    Op::Prep("B".into(), y),
                    Op::Tick("A".into(), "B".into()),
                    Op::Swap("A".into()),
                    Op::Unswap("A".into()),
                    Op::Untick("A".into(), "B".into()),
                ],
            );
            assert_eq!(n.state(), start.state());
        }
    }
}
