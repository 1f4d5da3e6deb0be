use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::{Groudit, Morphism};
use crate::netsim::state::{Configuration, MultisetState, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemKind {
    Groudit,
    Dit,
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemKind::Groudit => write!(f, "groudit"),
            SystemKind::Dit => write!(f, "dit"),
        }
    }
}

/// One primitive operation on named systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Init(String),
    Rand(String),
    Prep(String, Morphism),
    PrepDit(String, usize),
    Swap(String),
    Unswap(String),
    Tick(String, String),
    Untick(String, String),
    Read(String),
    Write(String),
    Erase(String),
    IRead(String),
    IWrite(String),
    /// Controlled tick with the dit on the left: `(control, target)`.
    CTickLeft(String, String),
    /// Controlled tick with the dit on the right: `(target, control)`.
    CTickRight(String, String),
    Split(String, String),
    Copy(String, String),
    Rename(String, String),
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::Init(_) => "init",
            Op::Rand(_) => "rand",
            Op::Prep(..) => "prep",
            Op::PrepDit(..) => "prep_dit",
            Op::Swap(_) => "swap",
            Op::Unswap(_) => "unswap",
            Op::Tick(..) => "tick",
            Op::Untick(..) => "untick",
            Op::Read(_) => "read",
            Op::Write(_) => "write",
            Op::Erase(_) => "erase",
            Op::IRead(_) => "iread",
            Op::IWrite(_) => "iwrite",
            Op::CTickLeft(..) => "ctick_left",
            Op::CTickRight(..) => "ctick_right",
            Op::Split(..) => "split",
            Op::Copy(..) => "copy",
            Op::Rename(..) => "rename",
        }
    }

    /// Inverse of a reversible op, used for rollback after a partial failure.
    pub fn inverse(&self) -> Option<Op> {
        Some(match self {
            Op::Swap(x) => Op::Unswap(x.clone()),
            Op::Unswap(x) => Op::Swap(x.clone()),
            Op::Tick(x, y) => Op::Untick(x.clone(), y.clone()),
            Op::Untick(x, y) => Op::Tick(x.clone(), y.clone()),
            Op::Rename(x, y) => Op::Rename(y.clone(), x.clone()),
            _ => return None,
        })
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Init(x) => write!(f, "Init({x})"),
            Op::Rand(x) => write!(f, "Rand({x})"),
            Op::Prep(x, m) => write!(f, "Prep({x}={m})"),
            Op::PrepDit(x, v) => write!(f, "Prep({x}=[{v}])"),
            Op::Swap(x) => write!(f, "Swap({x})"),
            Op::Unswap(x) => write!(f, "Unswap({x})"),
            Op::Tick(x, y) => write!(f, "Tick({x},{y})"),
            Op::Untick(x, y) => write!(f, "Untick({x},{y})"),
            Op::Read(x) => write!(f, "Read({x})"),
            Op::Write(x) => write!(f, "Write({x})"),
            Op::Erase(x) => write!(f, "Erase({x})"),
            Op::IRead(x) => write!(f, "IRead({x})"),
            Op::IWrite(x) => write!(f, "IWrite({x})"),
            Op::CTickLeft(c, t) => write!(f, "CTick({c}->{t})"),
            Op::CTickRight(t, c) => write!(f, "CTick({t}<-{c})"),
            Op::Split(x, y) => write!(f, "Split({x},{y})"),
            Op::Copy(x, y) => write!(f, "Copy({x}->{y})"),
            Op::Rename(x, y) => write!(f, "Rename({x}->{y})"),
        }
    }
}

/// The multiset simulator: a registry of named systems sharing one groudit,
/// an optional link set restricting `Tick`, and the current state.
#[derive(Clone, Debug)]
pub struct Network {
    groudit: Arc<Groudit>,
    systems: Vec<(String, SystemKind)>,
    links: Option<BTreeSet<(String, String)>>,
    state: MultisetState,
}

impl Network {
    /// Empty registry in which every pair of groudits is linked.
    pub fn new(groudit: Arc<Groudit>) -> Self {
        Network { groudit, systems: Vec::new(), links: None, state: MultisetState::unit() }
    }

    pub fn with_links<I, S>(groudit: Arc<Groudit>, links: I) -> Self
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let links = links
            .into_iter()
            .map(|(a, b)| {
                let (a, b) = (a.into(), b.into());
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        Network { links: Some(links), ..Network::new(groudit) }
    }

    pub fn groudit(&self) -> &Arc<Groudit> {
        &self.groudit
    }

    pub fn systems(&self) -> &[(String, SystemKind)] {
        &self.systems
    }

    pub fn system_names(&self) -> Vec<String> {
        self.systems.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn state(&self) -> &MultisetState {
        &self.state
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.systems.iter().position(|(n, _)| n == name)
    }

    pub fn kind(&self, name: &str) -> Option<SystemKind> {
        self.position(name).map(|i| self.systems[i].1)
    }

    /// Marginal distribution over the named systems.
    pub fn marginal(&self, names: &[&str]) -> Result<MultisetState> {
        let pos = names
            .iter()
            .map(|n| self.position(n).ok_or_else(|| Error::Op(format!("unknown system `{n}`"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.state.marginal(&pos))
    }

    fn expect(&self, name: &str, kind: SystemKind) -> Result<usize> {
        let i = self.position(name).ok_or_else(|| Error::Op(format!("unknown system `{name}`")))?;
        if self.systems[i].1 != kind {
            return Err(Error::Op(format!("`{name}` is a {}, expected a {kind}", self.systems[i].1)));
        }
        Ok(i)
    }

    fn fresh(&self, name: &str) -> Result<()> {
        if self.position(name).is_some() {
            return Err(Error::Op(format!("system `{name}` already exists")));
        }
        Ok(())
    }

    fn check_link(&self, x: &str, y: &str) -> Result<()> {
        if x == y {
            return Err(Error::Op(format!("tick needs two distinct systems, got `{x}` twice")));
        }
        if let Some(links) = &self.links {
            let key = if x <= y { (x.to_string(), y.to_string()) } else { (y.to_string(), x.to_string()) };
            if !links.contains(&key) {
                return Err(Error::Op(format!("`{x}` and `{y}` are not linked")));
            }
        }
        Ok(())
    }

    /// Type-check `op` and apply it. On error the network is unchanged.
    pub fn apply(&mut self, op: &Op) -> Result<()> {
        let d = self.groudit.clone();
        let n = d.n();
        let g = d.groupoid();
        match op {
            Op::Init(x) => {
                self.fresh(x)?;
                self.push_system(x, SystemKind::Groudit, (0..n).map(|a| Value::Morph(g.identity(a))).collect());
            }
            Op::Rand(x) => {
                self.fresh(x)?;
                self.push_system(x, SystemKind::Dit, (0..n).map(Value::Dit).collect());
            }
            Op::Prep(x, m) => {
                self.fresh(x)?;
                if !g.contains(*m) {
                    return Err(Error::Op(format!("{m} is not a morphism of the groudit")));
                }
                self.push_system(x, SystemKind::Groudit, vec![Value::Morph(*m)]);
            }
            Op::PrepDit(x, v) => {
                self.fresh(x)?;
                if *v >= n {
                    return Err(Error::Op(format!("dit value {v} out of range 0..{n}")));
                }
                self.push_system(x, SystemKind::Dit, vec![Value::Dit(*v)]);
            }
            Op::Swap(x) => self.map_morph(x, |m| d.f(m))?,
            Op::Unswap(x) => self.map_morph(x, |m| d.f_inv(m))?,
            Op::Tick(x, y) | Op::Untick(x, y) => {
                let i = self.expect(x, SystemKind::Groudit)?;
                let j = self.expect(y, SystemKind::Groudit)?;
                self.check_link(x, y)?;
                let forward = matches!(op, Op::Tick(..));
                self.state = self.state.map(|c| {
                    let (gi, gj) = (morph(c[i]), morph(c[j]));
                    let (a, b) = if forward { tick(&d, gi, gj) } else { untick(&d, gi, gj) };
                    let mut c = c.clone();
                    c[i] = Value::Morph(a);
                    c[j] = Value::Morph(b);
                    c
                });
            }
            Op::Read(x) => {
                let i = self.expect(x, SystemKind::Groudit)?;
                self.read_at(i);
            }
            Op::Write(x) => {
                let i = self.expect(x, SystemKind::Dit)?;
                self.write_at(i, n);
            }
            Op::Erase(x) => {
                let i = self.expect(x, SystemKind::Dit)?;
                self.systems.remove(i);
                self.state = self.state.map(|c| {
                    let mut c = c.clone();
                    c.remove(i);
                    c
                });
            }
            Op::IRead(x) => {
                let i = self.expect(x, SystemKind::Groudit)?;
                self.state = self.state.map(|c| set(c, i, Value::Morph(d.f(morph(c[i])))));
                self.read_at(i);
            }
            Op::IWrite(x) => {
                let i = self.expect(x, SystemKind::Dit)?;
                self.write_at(i, n);
                self.state = self.state.map(|c| set(c, i, Value::Morph(d.f_inv(morph(c[i])))));
            }
            Op::CTickLeft(ctl, tgt) => {
                let i = self.expect(ctl, SystemKind::Dit)?;
                let j = self.expect(tgt, SystemKind::Groudit)?;
                self.state = self.state.map(|c| {
                    let probe = g.identity(dit(c[i]));
                    set(c, j, Value::Morph(tick(&d, probe, morph(c[j])).1))
                });
            }
            Op::CTickRight(tgt, ctl) => {
                let i = self.expect(tgt, SystemKind::Groudit)?;
                let j = self.expect(ctl, SystemKind::Dit)?;
                self.state = self.state.map(|c| {
                    let probe = g.identity(dit(c[j]));
                    set(c, i, Value::Morph(tick(&d, morph(c[i]), probe).0))
                });
            }
            Op::Split(x, y) => {
                if x == y {
                    return Err(Error::Op("split needs two distinct names".into()));
                }
                self.fresh(x)?;
                self.fresh(y)?;
                self.systems.push((x.clone(), SystemKind::Groudit));
                self.systems.push((y.clone(), SystemKind::Groudit));
                self.state = self.state.flat_map(|c| {
                    g.morphisms()
                        .map(|m| {
                            let mut c = c.clone();
                            c.push(Value::Morph(g.inverse(m)));
                            c.push(Value::Morph(m));
                            (c, 1)
                        })
                        .collect()
                });
            }
            Op::Copy(src, dst) => {
                let i = self.expect(src, SystemKind::Dit)?;
                self.fresh(dst)?;
                self.systems.push((dst.clone(), SystemKind::Dit));
                self.state = self.state.map(|c| {
                    let mut c = c.clone();
                    c.push(c[i]);
                    c
                });
            }
            Op::Rename(from, to) => {
                let i = self.position(from).ok_or_else(|| Error::Op(format!("unknown system `{from}`")))?;
                if from != to {
                    self.fresh(to)?;
                }
                self.systems[i].0 = to.clone();
            }
        }
        Ok(())
    }

    fn push_system(&mut self, name: &str, kind: SystemKind, values: Vec<Value>) {
        self.systems.push((name.to_string(), kind));
        self.state = self.state.flat_map(|c| {
            values
                .iter()
                .map(|v| {
                    let mut c = c.clone();
                    c.push(*v);
                    (c, 1)
                })
                .collect()
        });
    }

    fn map_morph(&mut self, x: &str, f: impl Fn(Morphism) -> Morphism) -> Result<()> {
        let i = self.expect(x, SystemKind::Groudit)?;
        self.state = self.state.map(|c| set(c, i, Value::Morph(f(morph(c[i])))));
        Ok(())
    }

    fn read_at(&mut self, i: usize) {
        self.systems[i].1 = SystemKind::Dit;
        self.state = self.state.map(|c| set(c, i, Value::Dit(morph(c[i]).object)));
    }

    fn write_at(&mut self, i: usize, n: usize) {
        self.systems[i].1 = SystemKind::Groudit;
        self.state = self.state.flat_map(|c| {
            let a = dit(c[i]);
            (0..n).map(|k| (set(c, i, Value::Morph(Morphism::new(a, k))), 1)).collect()
        });
    }
}

fn set(c: &Configuration, i: usize, v: Value) -> Configuration {
    let mut c = c.clone();
    c[i] = v;
    c
}

fn morph(v: Value) -> Morphism {
    v.as_morphism().expect("type-checked groudit slot")
}

fn dit(v: Value) -> usize {
    v.as_dit().expect("type-checked dit slot")
}

/// The tick bijection on a pair of groudits:
/// `(g . tau_{s(g)}^-1(s(h))^-1, sigma_{s(h)}^-1(s(g)) . h)`.
pub fn tick(d: &Groudit, g: Morphism, h: Morphism) -> (Morphism, Morphism) {
    let gr = d.groupoid();
    let u = gr.inverse(d.tau_inv(g.object, h.object));
    let v = d.sigma_inv(h.object, g.object);
    (gr.compose(g, u).expect("same object"), gr.compose(v, h).expect("same object"))
}

pub fn untick(d: &Groudit, g: Morphism, h: Morphism) -> (Morphism, Morphism) {
    let gr = d.groupoid();
    let u = d.tau_inv(g.object, h.object);
    let v = gr.inverse(d.sigma_inv(h.object, g.object));
    (gr.compose(g, u).expect("same object"), gr.compose(v, h).expect("same object"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::make_groubit;

    fn m(a: usize, k: usize) -> Morphism {
        Morphism::new(a, k)
    }

    #[test]
    fn groubit_tick_table() {
        let d = make_groubit();
        for (a, b, c, e) in itertools::iproduct!(0..2, 0..2, 0..2, 0..2) {
            let (g, h) = tick(&d, m(a, b), m(c, e));
            assert_eq!((g, h), (m(a, b ^ c), m(c, e ^ a)));
            assert_eq!(untick(&d, g, h), (m(a, b), m(c, e)));
        }
    }

    #[test]
    fn type_errors_leave_state_untouched() {
        let mut net = Network::new(Arc::new(make_groubit()));
        net.apply(&Op::Rand("x".into())).unwrap();
        let before = net.state().clone();
        assert!(net.apply(&Op::Swap("x".into())).is_err());
        assert!(net.apply(&Op::Read("nope".into())).is_err());
        assert!(net.apply(&Op::Rand("x".into())).is_err());
        assert_eq!(net.state(), &before);
    }

    #[test]
    fn links_restrict_tick() {
        let mut net = Network::with_links(Arc::new(make_groubit()), [("A", "B")]);
        for x in ["A", "B", "C"] {
            net.apply(&Op::Init(x.into())).unwrap();
        }
        assert!(net.apply(&Op::Tick("B".into(), "A".into())).is_ok());
        assert!(net.apply(&Op::Tick("A".into(), "C".into())).is_err());
    }
}
