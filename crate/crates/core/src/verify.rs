//! Cross-checks between the multiset simulator and the span engine.

use std::sync::Arc;

use num_rational::BigRational;

use crate::error::Result;
use crate::gaf::{Engine, EngineNetwork};
use crate::groupoid::{Groudit, Morphism};
use crate::netsim::{states_equal_up_to_scalar, MultisetState, Network, Op, SystemKind, Value};

/// Outcome of comparing one operation on every basis input.
#[derive(Clone, Debug)]
pub struct OpCheck {
    pub op: &'static str,
    pub inputs: usize,
    /// The common ratio engine/simulator, `None` when some input disagrees
    /// or the ratio is not uniform.
    pub scalar: Option<BigRational>,
}

impl OpCheck {
    pub fn passed(&self) -> bool {
        self.scalar.is_some()
    }
}

/// Every operation that has an engine semantics, with the kinds of its
/// input systems and a constructor taking the system names.
pub fn op_catalogue() -> Vec<(&'static str, Vec<SystemKind>, fn(&[&str]) -> Op)> {
    use SystemKind::{Dit, Groudit as G};
    vec![
        ("init", vec![], |_| Op::Init("Y".into())),
        ("rand", vec![], |_| Op::Rand("y".into())),
        ("swap", vec![G], |n| Op::Swap(n[0].into())),
        ("unswap", vec![G], |n| Op::Unswap(n[0].into())),
        ("read", vec![G], |n| Op::Read(n[0].into())),
        ("write", vec![Dit], |n| Op::Write(n[0].into())),
        ("erase", vec![Dit], |n| Op::Erase(n[0].into())),
        ("iread", vec![G], |n| Op::IRead(n[0].into())),
        ("iwrite", vec![Dit], |n| Op::IWrite(n[0].into())),
        ("tick", vec![G, G], |n| Op::Tick(n[0].into(), n[1].into())),
        ("tick_reversed", vec![G, G], |n| Op::Tick(n[1].into(), n[0].into())),
        ("untick", vec![G, G], |n| Op::Untick(n[0].into(), n[1].into())),
        ("ctick_left", vec![Dit, G], |n| Op::CTickLeft(n[0].into(), n[1].into())),
        ("ctick_right", vec![G, Dit], |n| Op::CTickRight(n[0].into(), n[1].into())),
        ("split", vec![], |_| Op::Split("Y".into(), "Z".into())),
        ("copy", vec![Dit], |n| Op::Copy(n[0].into(), "y".into())),
    ]
}

fn basis_values(d: &Groudit, kind: SystemKind) -> Vec<Value> {
    match kind {
        SystemKind::Groudit => d.groupoid().morphisms().map(Value::Morph).collect(),
        SystemKind::Dit => (0..d.n()).map(Value::Dit).collect(),
    }
}

fn prep(name: &str, v: Value) -> Op {
    match v {
        Value::Morph(m) => Op::Prep(name.into(), m),
        Value::Dit(c) => Op::PrepDit(name.into(), c),
    }
}

/// Run `ops` in both the simulator and the engine from the empty register.
pub fn run_both(engine: &Engine, ops: &[Op]) -> Result<(MultisetState, MultisetState)> {
    let mut sim = Network::new(Arc::new(engine.groudit().clone()));
    let mut eng = EngineNetwork::new(engine)?;
    for op in ops {
        sim.apply(op)?;
        eng.apply(op)?;
    }
    Ok((sim.state().clone(), eng.state()))
}

/// Compare one catalogued operation on all basis inputs.
pub fn check_op(engine: &Engine, name: &'static str, kinds: &[SystemKind], make: fn(&[&str]) -> Op) -> Result<OpCheck> {
    let d = engine.groudit();
    let names = ["A", "B"];
    let choices: Vec<Vec<Value>> = kinds.iter().map(|&k| basis_values(d, k)).collect();
    let inputs: Vec<Vec<Value>> = if choices.is_empty() {
        vec![vec![]]
    } else {
        itertools::Itertools::multi_cartesian_product(choices.into_iter()).collect()
    };
    let mut scalar: Option<BigRational> = None;
    let mut ok = true;
    for input in &inputs {
        let mut ops: Vec<Op> = input.iter().zip(names).map(|(v, n)| prep(n, *v)).collect();
        ops.push(make(&names[..kinds.len()]));
        let (sim, eng) = run_both(engine, &ops)?;
        match states_equal_up_to_scalar(&eng, &sim) {
            Some(k) if scalar.as_ref().is_none_or(|s| *s == k) => scalar = Some(k),
            _ => ok = false,
        }
    }
    Ok(OpCheck { op: name, inputs: inputs.len(), scalar: if ok { scalar } else { None } })
}

pub fn check_all_ops(engine: &Engine) -> Result<Vec<OpCheck>> {
    op_catalogue().into_iter().map(|(name, kinds, make)| check_op(engine, name, &kinds, make)).collect()
}

/// The basic block (`Tick, Swap, Swap, Tick`) on every pair of inputs.
pub fn basic_block_table(engine: &Engine) -> Result<Vec<((Morphism, Morphism), MultisetState, MultisetState)>> {
    let g = engine.groupoid().clone();
    let mut out = Vec::new();
    for x in g.morphisms() {
        for y in g.morphisms() {
            let mut ops = vec![Op::Prep("A".into(), x), Op::Prep("B".into(), y)];
            ops.extend(crate::protocols::basic_block("A", "B"));
            let (sim, eng) = run_both(engine, &ops)?;
            out.push(((x, y), sim, eng));
        }
    }
    Ok(out)
}
