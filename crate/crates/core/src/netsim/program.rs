use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::{Error, Result};
use crate::groupoid::Morphism;
use crate::netsim::ops::{Network, Op};
use crate::netsim::state::{MultisetState, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub op: Op,
    pub failed: bool,
}

impl Step {
    pub fn ok(op: Op) -> Self {
        Step { op, failed: false }
    }

    pub fn failed(op: Op) -> Self {
        Step { op, failed: true }
    }
}

/// A straight-line program. `links` restricts which groudit pairs may tick;
/// `None` links every pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub links: Option<Vec<(String, String)>>,
    pub steps: Vec<Step>,
}

impl Program {
    pub fn new(steps: Vec<Step>) -> Self {
        Program { links: None, steps }
    }

    pub fn from_ops(ops: impl IntoIterator<Item = Op>) -> Self {
        Program::new(ops.into_iter().map(Step::ok).collect())
    }

    pub fn push(&mut self, op: Op) {
        self.steps.push(Step::ok(op));
    }

    /// Parse either a bare list of steps or `{"links": [...], "steps": [...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawProgram = serde_json::from_str(text).map_err(Error::parse)?;
        let (links, steps) = match raw {
            RawProgram::Bare(steps) => (None, steps),
            RawProgram::Full { links, steps } => (links, steps),
        };
        let steps = steps
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.into_step().map_err(|msg| Error::Step { step: i, msg }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Program { links, steps })
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawProgram {
    Bare(Vec<RawStep>),
    Full { links: Option<Vec<(String, String)>>, steps: Vec<RawStep> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    op: String,
    #[serde(default)]
    args: Vec<Json>,
    #[serde(default)]
    failed: bool,
}

impl RawStep {
    fn into_step(self) -> std::result::Result<Step, String> {
        let name = |i: usize| -> std::result::Result<String, String> {
            self.args
                .get(i)
                .and_then(Json::as_str)
                .map(str::to_string)
                .ok_or_else(|| format!("`{}` expects a system name as argument {i}", self.op))
        };
        let num = |i: usize| -> std::result::Result<usize, String> {
            self.args
                .get(i)
                .and_then(Json::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| format!("`{}` expects a non-negative integer as argument {i}", self.op))
        };
        let arity = |n: usize| -> std::result::Result<(), String> {
            if self.args.len() == n {
                Ok(())
            } else {
                Err(format!("`{}` takes {n} arguments, got {}", self.op, self.args.len()))
            }
        };
        let op = match self.op.as_str() {
            "init" => arity(1).and_then(|_| Ok(Op::Init(name(0)?))),
            "rand" => arity(1).and_then(|_| Ok(Op::Rand(name(0)?))),
            "prep" => arity(3).and_then(|_| Ok(Op::Prep(name(0)?, Morphism::new(num(1)?, num(2)?)))),
            "prep_dit" => arity(2).and_then(|_| Ok(Op::PrepDit(name(0)?, num(1)?))),
            "swap" => arity(1).and_then(|_| Ok(Op::Swap(name(0)?))),
            "unswap" => arity(1).and_then(|_| Ok(Op::Unswap(name(0)?))),
            "tick" => arity(2).and_then(|_| Ok(Op::Tick(name(0)?, name(1)?))),
            "untick" => arity(2).and_then(|_| Ok(Op::Untick(name(0)?, name(1)?))),
            "read" => arity(1).and_then(|_| Ok(Op::Read(name(0)?))),
            "write" => arity(1).and_then(|_| Ok(Op::Write(name(0)?))),
            "erase" => arity(1).and_then(|_| Ok(Op::Erase(name(0)?))),
            "iread" => arity(1).and_then(|_| Ok(Op::IRead(name(0)?))),
            "iwrite" => arity(1).and_then(|_| Ok(Op::IWrite(name(0)?))),
            "ctick_left" => arity(2).and_then(|_| Ok(Op::CTickLeft(name(0)?, name(1)?))),
            "ctick_right" => arity(2).and_then(|_| Ok(Op::CTickRight(name(0)?, name(1)?))),
            "split" => arity(2).and_then(|_| Ok(Op::Split(name(0)?, name(1)?))),
            "copy" => arity(2).and_then(|_| Ok(Op::Copy(name(0)?, name(1)?))),
            "rename" => arity(2).and_then(|_| Ok(Op::Rename(name(0)?, name(1)?))),
            other => Err(format!("unknown op `{other}`")),
        }?;
        Ok(Step { op, failed: self.failed })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceEntry {
    pub step: usize,
    pub op: String,
    pub failed: bool,
    pub systems: Vec<String>,
    #[serde(serialize_with = "serialize_state")]
    pub state: MultisetState,
}

fn serialize_state<S: serde::Serializer>(state: &MultisetState, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Term<'a> {
        config: &'a [Value],
        mult: String,
    }
    s.collect_seq(state.iter().map(|(c, m)| Term { config: c, mult: m.to_string() }))
}

/// Per-step record of a run: one entry per step, failed steps included.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
}

impl Trace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("plain data serializes")
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{}\t{}", e.state, e.op)?;
            if e.failed {
                write!(f, " [failed]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Run `program` on `network`. Failed steps are skipped; a type error aborts
/// with the index of the offending step.
pub fn run_program(mut network: Network, program: &Program) -> Result<(Network, Trace)> {
    let mut trace = Trace::default();
    for (i, step) in program.steps.iter().enumerate() {
        if !step.failed {
            network.apply(&step.op).map_err(|e| Error::Step { step: i, msg: e.to_string() })?;
        }
        trace.entries.push(TraceEntry {
            step: i,
            op: step.op.to_string(),
            failed: step.failed,
            systems: network.system_names(),
            state: network.state().clone(),
        });
    }
    Ok((network, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::make_groubit;
    use std::sync::Arc;

    #[test]
    fn parses_bare_and_linked_forms() {
        let p = Program::from_json(r#"[{"op":"init","args":["A"]},{"op":"swap","args":["A"],"failed":true}]"#).unwrap();
        assert_eq!(p.steps.len(), 2);
        assert!(p.steps[1].failed);
        assert!(p.links.is_none());
        let q = Program::from_json(r#"{"links":[["A","B"]],"steps":[{"op":"tick","args":["A","B"]}]}"#).unwrap();
        assert_eq!(q.links.unwrap(), vec![("A".to_string(), "B".to_string())]);
    }

    #[test]
    fn unknown_op_is_a_step_error() {
        match Program::from_json(r#"[{"op":"init","args":["A"]},{"op":"teleport","args":[]}]"#) {
            Err(Error::Step { step: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(Program::from_json("[{\"op\":}]"), Err(Error::Parse { .. })));
    }

    #[test]
    fn failed_steps_are_traced_and_skipped() {
        let p =
            Program::new(vec![Step::ok(Op::Prep("A".into(), Morphism::new(1, 0))), Step::failed(Op::Swap("A".into()))]);
        let (net, trace) = run_program(Network::new(Arc::new(make_groubit())), &p).unwrap();
        assert_eq!(net.state().to_string(), "(1,0)");
        assert_eq!(trace.to_string(), "(1,0)\tPrep(A=(1,0))\n(1,0)\tSwap(A) [failed]\n");
    }
}
