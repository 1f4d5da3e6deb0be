//! The protocol library: state transfer, entanglement, dense coding,
//! teleportation and key distribution, with exhaustive verifiers.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaf::{Engine, EngineNetwork};
use crate::groupoid::{Groudit, Morphism};
use crate::netsim::{run_program, states_equal_up_to_scalar, MultisetState, Network, Op, Program, Step, Value};

pub const PROTOCOLS: [&str; 5] = ["state-transfer", "entanglement", "dense-coding", "teleportation", "kd"];

fn party(i: usize) -> String {
    format!("P{i}")
}

/// The basic block on a linked pair: `Tick, Swap, Swap, Tick`.
pub fn basic_block(x: &str, y: &str) -> Vec<Op> {
    vec![Op::Tick(x.into(), y.into()), Op::Swap(x.into()), Op::Swap(y.into()), Op::Tick(x.into(), y.into())]
}

/// Move `input` from `P0` to `P{n-1}` along a chain of basic blocks.
pub fn build_state_transfer(parties: usize, input: Morphism) -> Result<Program> {
    if parties < 2 {
        return Err(Error::Validation("state transfer needs at least two parties".into()));
    }
    let mut ops = vec![Op::Prep(party(0), input)];
    ops.extend((1..parties).map(|i| Op::Init(party(i))));
    for i in 0..parties - 1 {
        ops.extend(basic_block(&party(i), &party(i + 1)));
    }
    let mut p = Program::from_ops(ops);
    p.links = Some((0..parties - 1).map(|i| (party(i), party(i + 1))).collect());
    Ok(p)
}

pub fn build_entanglement() -> Program {
    Program::from_ops(entangle_ops("A", "B"))
}

fn entangle_ops(a: &str, b: &str) -> Vec<Op> {
    vec![Op::Init(a.into()), Op::Init(b.into()), Op::Tick(a.into(), b.into()), Op::Swap(b.into())]
}

/// How Alice's groudit reaches Bob in dense coding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transfer {
    /// A registry relabel.
    #[default]
    Rename,
    /// One basic block into a fresh groudit on Bob's side.
    Chain,
}

/// Alice encodes the dits `(x, y)` into her half of an entangled pair; Bob
/// decodes with `Tick` and two `IRead`s. Bob's decoded dits are `B` then `C`.
pub fn build_dense_coding(x: usize, y: usize, transfer: Transfer) -> Program {
    let mut ops = entangle_ops("A", "B");
    ops.extend([
        Op::PrepDit("x".into(), x),
        Op::PrepDit("y".into(), y),
        Op::CTickLeft("x".into(), "A".into()),
        Op::Swap("A".into()),
        Op::CTickLeft("y".into(), "A".into()),
    ]);
    match transfer {
        Transfer::Rename => ops.push(Op::Rename("A".into(), "C".into())),
        Transfer::Chain => {
            ops.push(Op::Init("C".into()));
            ops.extend(basic_block("A", "C"));
        }
    }
    ops.extend([Op::Tick("C".into(), "B".into()), Op::IRead("C".into()), Op::IRead("B".into())]);
    Program::from_ops(ops)
}

/// Teleport `input` held in `X` to Bob's `B`.
pub fn build_teleportation(input: Morphism) -> Program {
    let mut ops = vec![Op::Prep("X".into(), input)];
    ops.extend(entangle_ops("A", "B"));
    ops.extend([
        Op::Tick("X".into(), "A".into()),
        Op::Swap("X".into()),
        Op::Swap("A".into()),
        Op::Read("X".into()),
        Op::Read("A".into()),
        Op::CTickLeft("A".into(), "B".into()),
        Op::Swap("B".into()),
        Op::CTickLeft("X".into(), "B".into()),
        Op::Erase("X".into()),
        Op::Erase("A".into()),
    ]);
    Program::from_ops(ops)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Encode {
    Write,
    IWrite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Decode {
    Read,
    IRead,
}

impl Decode {
    fn op(self, x: &str) -> Op {
        match self {
            Decode::Read => Op::Read(x.into()),
            Decode::IRead => Op::IRead(x.into()),
        }
    }

    fn dagger(self, x: &str) -> Op {
        match self {
            Decode::Read => Op::Write(x.into()),
            Decode::IRead => Op::IWrite(x.into()),
        }
    }

    fn matches(self, e: Encode) -> bool {
        matches!((e, self), (Encode::Write, Decode::Read) | (Encode::IWrite, Decode::IRead))
    }
}

impl fmt::Display for Encode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encode::Write => "Write",
            Encode::IWrite => "IWrite",
        })
    }
}

impl fmt::Display for Decode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decode::Read => "Read",
            Decode::IRead => "IRead",
        })
    }
}

/// Alice sends a random dit `ka` through `g`; Eve optionally intercepts it,
/// keeps a copy in `ke` and resends; Bob's result is the dit `g`.
pub fn build_kd(alice: Encode, eve: Option<Decode>, bob: Decode) -> Program {
    let mut ops = vec![Op::Rand("ka".into()), Op::Copy("ka".into(), "g".into())];
    ops.push(match alice {
        Encode::Write => Op::Write("g".into()),
        Encode::IWrite => Op::IWrite("g".into()),
    });
    if let Some(e) = eve {
        ops.push(e.op("g"));
        ops.push(Op::Copy("g".into(), "ke".into()));
        ops.push(e.dagger("g"));
    }
    ops.push(bob.op("g"));
    Program::from_ops(ops)
}

/// One verified input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub input: String,
    pub output: String,
    pub scalar: Option<String>,
    pub engine_agrees: Option<bool>,
    pub pass: bool,
}

/// Exact joint distribution of one key-distribution basis choice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KdRow {
    pub alice: Encode,
    pub eve: Option<Decode>,
    pub bob: Decode,
    /// `(alice dit, eve dit if present, bob dit) -> count`.
    pub distribution: Vec<(Vec<usize>, String)>,
    pub expected: String,
    pub engine_agrees: Option<bool>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub protocol: String,
    pub objects: usize,
    pub cases: Vec<CaseReport>,
    pub kd: Vec<KdRow>,
    /// Observed decoded-output map for dense coding, `input -> output`.
    pub decoded: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl ProtocolReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::parse)
    }
}

impl fmt::Display for ProtocolReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "protocol: {} (|Ob| = {})", self.protocol, self.objects)?;
        if !self.cases.is_empty() {
            writeln!(f, "{:<16} {:<8} {:<8} {:<8} output", "input", "verdict", "scalar", "engine")?;
            for c in &self.cases {
                let engine = match c.engine_agrees {
                    Some(true) => "agree",
                    Some(false) => "DIFFER",
                    None => "-",
                };
                writeln!(
                    f,
                    "{:<16} {:<8} {:<8} {:<8} {}",
                    c.input,
                    if c.pass { "pass" } else { "FAIL" },
                    c.scalar.as_deref().unwrap_or("-"),
                    engine,
                    c.output
                )?;
            }
        }
        if !self.decoded.is_empty() {
            let map: Vec<String> = self.decoded.iter().map(|(i, o)| format!("{i}->{o}")).collect();
            writeln!(f, "decoded map: {}", map.join(" "))?;
        }
        for row in &self.kd {
            let eve = row.eve.map(|e| e.to_string()).unwrap_or_else(|| "-".into());
            let dist: Vec<String> = row
                .distribution
                .iter()
                .map(|(k, v)| format!("{}:{v}", k.iter().map(usize::to_string).collect::<String>()))
                .collect();
            writeln!(
                f,
                "alice={:<6} eve={:<5} bob={:<5} {:<4} expected {:<10} {}",
                row.alice.to_string(),
                eve,
                row.bob.to_string(),
                if row.pass { "pass" } else { "FAIL" },
                row.expected,
                dist.join(" ")
            )?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        writeln!(f, "result: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub parties: usize,
    pub fail_step: Option<usize>,
    /// Also evaluate every run in the span engine.
    pub engine: bool,
    pub transfer: Transfer,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { parties: 3, fail_step: None, engine: true, transfer: Transfer::Rename }
    }
}

fn simulate(d: &Arc<Groudit>, program: &Program) -> Result<Network> {
    let net = match &program.links {
        Some(links) => Network::with_links(d.clone(), links.iter().cloned()),
        None => Network::new(d.clone()),
    };
    Ok(run_program(net, program)?.0)
}

fn engine_state(engine: &Engine, program: &Program) -> Result<MultisetState> {
    let mut net = EngineNetwork::new(engine)?;
    for (i, step) in program.steps.iter().enumerate() {
        if !step.failed {
            net.apply(&step.op).map_err(|e| Error::Step { step: i, msg: e.to_string() })?;
        }
    }
    Ok(net.state())
}

fn engine_agrees(engine: Option<&Engine>, program: &Program, sim: &MultisetState) -> Result<Option<bool>> {
    match engine {
        None => Ok(None),
        Some(e) => Ok(Some(states_equal_up_to_scalar(&engine_state(e, program)?, sim).is_some())),
    }
}

fn with_failure(mut p: Program, fail: Option<usize>) -> Result<Program> {
    if let Some(k) = fail {
        let n = p.steps.len();
        let step: &mut Step = p
            .steps
            .get_mut(k)
            .ok_or_else(|| Error::Validation(format!("fail step {k} outside program of {n} steps")))?;
        step.failed = true;
    }
    Ok(p)
}

fn scalar_string(k: &num_rational::BigRational) -> String {
    k.to_string()
}

/// Exhaustively verify `name` on `d`.
pub fn verify_protocol(name: &str, d: &Groudit, opts: &VerifyOptions) -> Result<ProtocolReport> {
    if !PROTOCOLS.contains(&name) {
        return Err(Error::UnknownProtocol(name.to_string()));
    }
    let arc = Arc::new(d.clone());
    let engine = if opts.engine { Some(Engine::new(d)?) } else { None };
    let mut report = ProtocolReport {
        protocol: name.to_string(),
        objects: d.n(),
        cases: Vec::new(),
        kd: Vec::new(),
        decoded: Vec::new(),
        notes: Vec::new(),
        pass: true,
    };
    match name {
        "state-transfer" => state_transfer_cases(&arc, engine.as_ref(), opts, &mut report)?,
        "entanglement" => {
            let p = with_failure(build_entanglement(), opts.fail_step)?;
            let net = simulate(&arc, &p)?;
            let scalar = correlated_pairs(d, net.state());
            let agrees = engine_agrees(engine.as_ref(), &p, net.state())?;
            report.cases.push(CaseReport {
                input: "-".into(),
                output: net.state().to_string(),
                pass: scalar.is_some() && agrees != Some(false),
                scalar: scalar.as_ref().map(scalar_string),
                engine_agrees: agrees,
            });
        }
        "dense-coding" => dense_coding_cases(&arc, engine.as_ref(), opts, &mut report)?,
        "teleportation" => {
            for m in d.groupoid().morphisms() {
                let p = with_failure(build_teleportation(m), opts.fail_step)?;
                let net = simulate(&arc, &p)?;
                let b = net.marginal(&["B"])?;
                let scalar = if net.systems().len() == 1 {
                    states_equal_up_to_scalar(&b, &MultisetState::singleton(vec![Value::Morph(m)]))
                } else {
                    None
                };
                let agrees = engine_agrees(engine.as_ref(), &p, net.state())?;
                report.cases.push(CaseReport {
                    input: m.to_string(),
                    output: net.state().to_string(),
                    pass: scalar.is_some() && agrees != Some(false),
                    scalar: scalar.as_ref().map(scalar_string),
                    engine_agrees: agrees,
                });
            }
            let scalars: std::collections::BTreeSet<_> = report.cases.iter().map(|c| c.scalar.clone()).collect();
            if scalars.len() != 1 {
                report.notes.push("scalar is not uniform across inputs".into());
                report.pass = false;
            }
        }
        "kd" => kd_rows(&arc, engine.as_ref(), &mut report)?,
        _ => unreachable!(),
    }
    report.pass &= report.cases.iter().all(|c| c.pass) && report.kd.iter().all(|r| r.pass);
    Ok(report)
}

fn state_transfer_cases(
    d: &Arc<Groudit>,
    engine: Option<&Engine>,
    opts: &VerifyOptions,
    report: &mut ProtocolReport,
) -> Result<()> {
    let n = opts.parties;
    let g = d.groupoid();
    let mut supports: Vec<(Morphism, MultisetState)> = Vec::new();
    for m in g.morphisms() {
        let p = with_failure(build_state_transfer(n, m)?, opts.fail_step)?;
        let net = simulate(d, &p)?;
        let agrees = engine_agrees(engine, &p, net.state())?;
        let expected = transfer_expectation(d, n, m);
        let exact = net.state() == &expected;
        let pass = match opts.fail_step {
            None => exact,
            Some(_) => true,
        } && agrees != Some(false);
        report.cases.push(CaseReport {
            input: m.to_string(),
            output: net.state().to_string(),
            scalar: if exact { Some("1".into()) } else { None },
            engine_agrees: agrees,
            pass,
        });
        supports.push((m, net.state().clone()));
    }
    if let Some(k) = opts.fail_step {
        let disjoint = supports.iter().enumerate().all(|(i, (_, s))| {
            supports[i + 1..].iter().all(|(_, t)| s.iter().all(|(c, _)| t.get(c) == BigUint::from(0u32)))
        });
        report.notes.push(format!(
            "step {k} failed; distinct inputs {} disjoint output supports, so the input is {}recoverable",
            if disjoint { "have" } else { "do not have" },
            if disjoint { "" } else { "not " }
        ));
        report.pass &= disjoint;
    }
    Ok(())
}

/// Every morphism appears once on each side with one common weight, so the
/// two halves determine each other. Returns that weight.
pub fn correlated_pairs(d: &Groudit, state: &MultisetState) -> Option<num_rational::BigRational> {
    let mor = d.groupoid().mor_count();
    let weights: std::collections::BTreeSet<&BigUint> = state.iter().map(|(_, w)| w).collect();
    let left: std::collections::BTreeSet<Value> = state.iter().map(|(c, _)| c[0]).collect();
    let right: std::collections::BTreeSet<Value> = state.iter().map(|(c, _)| c[1]).collect();
    let ok = state.iter().count() == mor && left.len() == mor && right.len() == mor && weights.len() == 1;
    let w = *weights.iter().next()?;
    ok.then(|| num_rational::BigRational::from_integer(w.clone().into()))
}

/// `Σ_c (c_1, e) ... (c_{n-1}, e) (a, b)`, every term once.
pub fn transfer_expectation(d: &Groudit, parties: usize, input: Morphism) -> MultisetState {
    let g = d.groupoid();
    let mut out = MultisetState::empty();
    let objs: Vec<Vec<usize>> = vec![(0..d.n()).collect(); parties - 1];
    for cs in itertools::Itertools::multi_cartesian_product(objs.into_iter()) {
        let mut cfg: Vec<Value> = cs.iter().map(|&c| Value::Morph(g.identity(c))).collect();
        cfg.push(Value::Morph(input));
        out.add(cfg, BigUint::from(1u32));
    }
    out
}

fn dense_coding_cases(
    d: &Arc<Groudit>,
    engine: Option<&Engine>,
    opts: &VerifyOptions,
    report: &mut ProtocolReport,
) -> Result<()> {
    let n = d.n();
    let mut images = std::collections::BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            let p = with_failure(build_dense_coding(x, y, opts.transfer), opts.fail_step)?;
            let net = simulate(d, &p)?;
            let out = net.marginal(&["B", "C"])?;
            let decoded: Vec<(usize, usize)> = out
                .iter()
                .map(|(c, _)| (c[0].as_dit().unwrap_or(usize::MAX), c[1].as_dit().unwrap_or(usize::MAX)))
                .collect();
            let deterministic = decoded.len() == 1;
            let agrees = engine_agrees(engine, &p, net.state())?;
            let shown = if deterministic { format!("({},{})", decoded[0].0, decoded[0].1) } else { out.to_string() };
            if deterministic {
                images.insert(decoded[0]);
            }
            report.decoded.push((format!("({x},{y})"), shown.clone()));
            report.cases.push(CaseReport {
                input: format!("({x},{y})"),
                output: shown,
                scalar: deterministic.then(|| out.total().to_string()),
                engine_agrees: agrees,
                pass: deterministic && agrees != Some(false),
            });
        }
    }
    let bijective = images.len() == n * n;
    let identity = report.decoded.iter().all(|(i, o)| i == o);
    report.notes.push(format!(
        "decoded map is {}a bijection{}",
        if bijective { "" } else { "not " },
        if identity { " (the identity)" } else { "" }
    ));
    report.pass &= bijective;
    Ok(())
}

/// Exact `(alice, eve?, bob)` counts for one basis choice.
pub fn kd_distribution(
    d: &Arc<Groudit>,
    alice: Encode,
    eve: Option<Decode>,
    bob: Decode,
) -> Result<BTreeMap<Vec<usize>, BigUint>> {
    let net = simulate(d, &build_kd(alice, eve, bob))?;
    let names: Vec<&str> = if eve.is_some() { vec!["ka", "ke", "g"] } else { vec!["ka", "g"] };
    let m = net.marginal(&names)?;
    Ok(m.iter().map(|(c, w)| (c.iter().map(|v| v.as_dit().expect("dits")).collect(), w.clone())).collect())
}

fn kd_rows(d: &Arc<Groudit>, engine: Option<&Engine>, report: &mut ProtocolReport) -> Result<()> {
    let n = d.n();
    let mut combos = Vec::new();
    for alice in [Encode::Write, Encode::IWrite] {
        for eve in [Some(Decode::Read), Some(Decode::IRead), None] {
            for bob in [Decode::Read, Decode::IRead] {
                combos.push((alice, eve, bob));
            }
        }
    }
    for (alice, eve, bob) in combos {
        let dist = kd_distribution(d, alice, eve, bob)?;
        let matched = bob.matches(alice) && eve.is_none_or(|e| e.matches(alice));
        let arity = if eve.is_some() { 3 } else { 2 };
        let pass = if matched {
            dist.keys().all(|k| k.iter().all(|&v| v == k[0]))
        } else {
            let counts: std::collections::BTreeSet<_> = dist.values().collect();
            dist.len() == n.pow(arity) && counts.len() == 1
        };
        let p = build_kd(alice, eve, bob);
        let sim = simulate(d, &p)?;
        let agrees = engine_agrees(engine, &p, sim.state())?;
        report.kd.push(KdRow {
            alice,
            eve,
            bob,
            distribution: dist.into_iter().map(|(k, v)| (k, v.to_string())).collect(),
            expected: if matched { "correlated".into() } else { "uniform".into() },
            engine_agrees: agrees,
            pass: pass && agrees != Some(false),
        });
    }
    Ok(())
}
