//! Span semantics of the simulator operations, built from the biunitary,
//! the measurement vertices and the pivotal structure.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::gaf::diagram::Diagram;
use crate::gaf::pivotal::{boundary_star_iso, cap, cup};
use crate::gaf::profunctor::{Atom, Profunctor};
use crate::gaf::span::Span;
use crate::groupoid::{Groudit, Groupoid, Morphism};
use crate::netsim::{Configuration, MultisetState, Op, SystemKind, Value};

/// Which quarter turn of the biunitary is used for `Tick`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rotation {
    /// New white region opened on the right, closed on the left.
    Clockwise,
    /// New white region opened on the left, closed on the right.
    Anticlockwise,
}

/// The wires and elementary spans of one groudit.
pub struct Engine {
    groudit: Groudit,
    g: Groupoid,
    d: Groupoid,
    unit: Groupoid,
    pub l: Profunctor,
    pub r: Profunctor,
    pub ld: Profunctor,
    pub rd: Profunctor,
    pub s: Profunctor,
    lr: Profunctor,
    lrd: Profunctor,
    f: Span,
    tick: Span,
    read: Span,
    init: Span,
    rand: Span,
    split: Span,
    copy: Span,
}

impl Engine {
    /// The engine with `Tick` the anticlockwise quarter turn of `F†`, the
    /// variant that agrees with the simulator.
    pub fn new(groudit: &Groudit) -> Result<Self> {
        Engine::with_tick(groudit, Rotation::Anticlockwise, true)
    }

    /// Build with an explicit choice of Tick: a quarter turn of `F` or of
    /// `F†`.
    pub fn with_tick(groudit: &Groudit, rotation: Rotation, dagger: bool) -> Result<Self> {
        let g = groudit.groupoid().clone();
        let n = groudit.n();
        let d = Groupoid::discrete(n);
        let unit = Groupoid::unit();
        let l = Profunctor::boundary_left("L", &g);
        let r = Profunctor::boundary_right("R", &g);
        let ld = Profunctor::boundary_left("Ld", &d);
        let rd = Profunctor::boundary_right("Rd", &d);
        let s = Profunctor::from_fn(
            "S",
            &d,
            &g,
            |b, a| if a == b { g.aut_order(a) } else { 0 },
            |_, _, _, x| x,
            |_, a, h, x| g.group(a).mul(x, h),
        )?;
        let lr = Profunctor::compose(&l, &r)?;
        let lrd = Profunctor::compose(&ld, &rd)?;
        let f = Span::natural(&lr, &lr, |_, _, k| {
            let m = decode_lr(&lr, &g, k);
            encode_lr(&lr, &g, groudit.f(m))
        })?;
        let mut e = Engine {
            groudit: groudit.clone(),
            g: g.clone(),
            d,
            unit,
            l,
            r,
            ld,
            rd,
            s,
            lr: lr.clone(),
            lrd,
            tick: f.clone(),
            read: f.clone(),
            init: f.clone(),
            rand: f.clone(),
            split: f.clone(),
            copy: f.clone(),
            f,
        };
        let base = if dagger { e.f.dagger() } else { e.f.clone() };
        let rot = e.rotate(&base, rotation)?;
        let mut tick = Diagram::new(vec![e.l.clone(), e.r.clone(), e.l.clone(), e.r.clone()], &e.unit)?;
        tick.apply(1, 2, &rot, vec![e.r.clone(), e.l.clone()])?;
        e.tick = tick.into_span();
        e.read = e.build_read()?;
        e.init = e.build_init(&e.l.clone(), &e.r.clone())?;
        e.rand = e.build_init(&e.ld.clone(), &e.rd.clone())?;
        e.split = e.build_split()?;
        e.copy = e.build_copy()?;
        Ok(e)
    }

    pub fn groudit(&self) -> &Groudit {
        &self.groudit
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.g
    }

    pub fn dit_groupoid(&self) -> &Groupoid {
        &self.d
    }

    pub fn unit(&self) -> &Groupoid {
        &self.unit
    }

    /// `L;R`, whose elements are the morphisms of `G`.
    pub fn lr(&self) -> &Profunctor {
        &self.lr
    }

    pub fn lrd(&self) -> &Profunctor {
        &self.lrd
    }

    pub fn f(&self) -> &Span {
        &self.f
    }

    pub fn tick(&self) -> &Span {
        &self.tick
    }

    pub fn read(&self) -> &Span {
        &self.read
    }

    pub fn init(&self) -> &Span {
        &self.init
    }

    pub fn rand(&self) -> &Span {
        &self.rand
    }

    pub fn split(&self) -> &Span {
        &self.split
    }

    pub fn copy(&self) -> &Span {
        &self.copy
    }

    pub fn encode(&self, m: Morphism) -> u32 {
        encode_lr(&self.lr, &self.g, m)
    }

    pub fn decode(&self, k: u32) -> Morphism {
        decode_lr(&self.lr, &self.g, k)
    }

    pub fn bent_cup(&self, diag: &mut Diagram, pos: usize, p: &Profunctor, q: &Profunctor) -> Result<()> {
        bend_cup(diag, pos, p, q)
    }

    pub fn bent_cap(&self, diag: &mut Diagram, pos: usize, p: &Profunctor, q: &Profunctor) -> Result<()> {
        bend_cap(diag, pos, p, q)
    }

    /// Quarter turn of a span `L;R ⇒ L;R` into a span `R;L ⇒ R;L`.
    pub fn rotate(&self, sigma: &Span, rotation: Rotation) -> Result<Span> {
        quarter_turn(&self.l, &self.r, sigma, rotation)
    }

    /// The isospan `L^G ⇒ L^D;S`.
    pub fn measure_iso(&self) -> Result<Span> {
        let tgt = Profunctor::compose(&self.ld, &self.s)?;
        Span::natural(&self.l, &tgt, |_, a, x| tgt.class_of(0, a, a, 0, x).expect("class exists"))
    }

    /// The discard `L^G;S* ⇒ L^D`, every class to the single element.
    pub fn measure_discard_left(&self) -> Result<Span> {
        let src = Profunctor::compose(&self.l, &self.s.star())?;
        Span::natural(&src, &self.ld, |_, _, _| 0)
    }

    /// The mirrored discard `S;R^G ⇒ R^D`.
    pub fn measure_discard_right(&self) -> Result<Span> {
        let src = Profunctor::compose(&self.s, &self.r)?;
        Span::natural(&src, &self.rd, |_, _, _| 0)
    }

    fn build_read(&self) -> Result<Span> {
        let mut diag = Diagram::new(vec![self.l.clone(), self.r.clone()], &self.unit)?;
        diag.apply(0, 1, &self.measure_iso()?, vec![self.ld.clone(), self.s.clone()])?;
        diag.apply(1, 2, &self.measure_discard_right()?, vec![self.rd.clone()])?;
        Ok(diag.into_span())
    }

    fn build_init(&self, l: &Profunctor, r: &Profunctor) -> Result<Span> {
        let mut diag = Diagram::new(vec![], &self.unit)?;
        diag.apply(0, 0, &cup(r)?, vec![r.star(), r.clone()])?;
        diag.apply(0, 1, &boundary_star_iso(&r.star(), l)?, vec![l.clone()])?;
        Ok(diag.into_span())
    }

    fn build_split(&self) -> Result<Span> {
        let mut diag = Diagram::from_span(self.init.clone(), vec![self.l.clone(), self.r.clone()], &self.unit)?;
        self.bent_cup(&mut diag, 1, &self.l, &self.r)?;
        Ok(diag.into_span())
    }

    fn build_copy(&self) -> Result<Span> {
        let mut diag = Diagram::new(vec![self.ld.clone(), self.rd.clone()], &self.unit)?;
        self.bent_cup(&mut diag, 1, &self.ld, &self.rd)?;
        Ok(diag.into_span())
    }

    fn wires_for(&self, kind: SystemKind) -> [Profunctor; 2] {
        match kind {
            SystemKind::Groudit => [self.l.clone(), self.r.clone()],
            SystemKind::Dit => [self.ld.clone(), self.rd.clone()],
        }
    }

    /// A basis state `1 ⇒ L;R` or `1 ⇒ Ld;Rd`.
    pub fn basis(&self, v: Value) -> Result<Span> {
        let id = Profunctor::identity(&self.unit);
        match v {
            Value::Morph(m) => Span::from_rows(&id, &self.lr, |_, _, _| vec![(self.encode(m), 1)]),
            Value::Dit(c) => {
                let k = self.lrd.class_of(0, c, 0, 0, 0).expect("dit class");
                Span::from_rows(&id, &self.lrd, |_, _, _| vec![(k, 1)])
            }
        }
    }
}

/// Quarter turn of a span `L;R ⇒ L;R` on the boundaries of one groupoid.
pub fn quarter_turn(l: &Profunctor, r: &Profunctor, sigma: &Span, rotation: Rotation) -> Result<Span> {
    let mut diag = Diagram::new(vec![r.clone(), l.clone()], l.target())?;
    match rotation {
        Rotation::Clockwise => {
            bend_cup(&mut diag, 2, l, r)?;
            diag.apply(1, 2, sigma, vec![l.clone(), r.clone()])?;
            bend_cap(&mut diag, 0, r, l)?;
        }
        Rotation::Anticlockwise => {
            bend_cup(&mut diag, 0, l, r)?;
            diag.apply(1, 2, sigma, vec![l.clone(), r.clone()])?;
            bend_cap(&mut diag, 2, r, l)?;
        }
    }
    Ok(diag.into_span())
}

/// Open a cup for `p` at `pos` and bend its adjoint leg into `q`.
pub fn bend_cup(diag: &mut Diagram, pos: usize, p: &Profunctor, q: &Profunctor) -> Result<()> {
    diag.apply(pos, 0, &cup(p)?, vec![p.star(), p.clone()])?;
    diag.apply(pos, 1, &boundary_star_iso(&p.star(), q)?, vec![q.clone()])
}

/// Close wires `pos, pos+1 = (p, q)` with a cap, bending `q` into `p*`.
pub fn bend_cap(diag: &mut Diagram, pos: usize, p: &Profunctor, q: &Profunctor) -> Result<()> {
    diag.apply(pos + 1, 1, &boundary_star_iso(q, &p.star())?, vec![p.star()])?;
    diag.apply(pos, 2, &cap(p)?, vec![])
}

pub(crate) fn encode_lr(lr: &Profunctor, g: &Groupoid, m: Morphism) -> u32 {
    let e = g.group(m.object).identity() as u32;
    lr.class_of(0, m.object, 0, m.element as u32, e).expect("morphism class")
}

pub(crate) fn decode_lr(lr: &Profunctor, g: &Groupoid, k: u32) -> Morphism {
    let (a, x, y) = lr.representative(0, 0, k).expect("composite");
    Morphism::new(a, g.group(a).mul(x as usize, y as usize))
}

/// A register of systems whose joint state is a span `1 ⇒ w_1;...;w_2n`.
pub struct EngineNetwork<'e> {
    engine: &'e Engine,
    systems: Vec<(String, SystemKind)>,
    diagram: Diagram,
}

impl<'e> EngineNetwork<'e> {
    pub fn new(engine: &'e Engine) -> Result<Self> {
        Ok(EngineNetwork { engine, systems: Vec::new(), diagram: Diagram::new(vec![], &engine.unit)? })
    }

    fn position(&self, name: &str) -> Result<usize> {
        self.systems.iter().position(|(n, _)| n == name).ok_or_else(|| Error::Op(format!("unknown system `{name}`")))
    }

    fn expect(&self, name: &str, kind: SystemKind) -> Result<usize> {
        let i = self.position(name)?;
        if self.systems[i].1 != kind {
            return Err(Error::Op(format!("`{name}` is a {}, expected a {kind}", self.systems[i].1)));
        }
        Ok(i)
    }

    fn append(&mut self, name: &str, kind: SystemKind, span: &Span) -> Result<()> {
        if self.systems.iter().any(|(n, _)| n == name) {
            return Err(Error::Op(format!("system `{name}` already exists")));
        }
        let pos = self.diagram.wires().len();
        self.diagram.apply(pos, 0, span, self.engine.wires_for(kind).to_vec())?;
        self.systems.push((name.to_string(), kind));
        Ok(())
    }

    fn on_one(&mut self, i: usize, span: &Span, kind: SystemKind) -> Result<()> {
        self.diagram.apply(2 * i, 2, span, self.engine.wires_for(kind).to_vec())?;
        self.systems[i].1 = kind;
        Ok(())
    }

    /// Bring systems `i, j` next to each other (in that order) at the front,
    /// run `f`, and restore the layout.
    fn on_pair(&mut self, i: usize, j: usize, f: impl FnOnce(&mut Self) -> Result<()>) -> Result<()> {
        let n = self.systems.len();
        let mut order = vec![i, j];
        order.extend((0..n).filter(|&k| k != i && k != j));
        let blocks = vec![2; n];
        self.diagram.permute_blocks(&blocks, &order)?;
        let saved = self.systems.clone();
        self.systems = order.iter().map(|&k| saved[k].clone()).collect();
        f(self)?;
        let mut back = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            back[old] = new;
        }
        self.diagram.permute_blocks(&blocks, &back)?;
        let now = self.systems.clone();
        self.systems = back.iter().map(|&k| now[k].clone()).collect();
        Ok(())
    }

    pub fn apply(&mut self, op: &Op) -> Result<()> {
        let e = self.engine;
        match op {
            Op::Init(x) => self.append(x, SystemKind::Groudit, &e.init),
            Op::Rand(x) => self.append(x, SystemKind::Dit, &e.rand),
            Op::Prep(x, m) => self.append(x, SystemKind::Groudit, &e.basis(Value::Morph(*m))?),
            Op::PrepDit(x, c) => self.append(x, SystemKind::Dit, &e.basis(Value::Dit(*c))?),
            Op::Swap(x) => {
                let i = self.expect(x, SystemKind::Groudit)?;
                self.on_one(i, &e.f, SystemKind::Groudit)
            }
            Op::Unswap(x) => {
                let i = self.expect(x, SystemKind::Groudit)?;
                self.on_one(i, &e.f.dagger(), SystemKind::Groudit)
            }
            Op::Read(x) => {
                let i = self.expect(x, SystemKind::Groudit)?;
                self.on_one(i, &e.read, SystemKind::Dit)
            }
            Op::Write(x) => {
                let i = self.expect(x, SystemKind::Dit)?;
                self.on_one(i, &e.read.dagger(), SystemKind::Groudit)
            }
            Op::IRead(x) => {
                let i = self.expect(x, SystemKind::Groudit)?;
                self.on_one(i, &e.f, SystemKind::Groudit)?;
                self.on_one(i, &e.read, SystemKind::Dit)
            }
            Op::IWrite(x) => {
                let i = self.expect(x, SystemKind::Dit)?;
                self.on_one(i, &e.read.dagger(), SystemKind::Groudit)?;
                self.on_one(i, &e.f.dagger(), SystemKind::Groudit)
            }
            Op::Erase(x) => {
                let i = self.expect(x, SystemKind::Dit)?;
                self.diagram.apply(2 * i, 2, &e.rand.dagger(), vec![])?;
                self.systems.remove(i);
                Ok(())
            }
            Op::Tick(x, y) | Op::Untick(x, y) => {
                let i = self.expect(x, SystemKind::Groudit)?;
                let j = self.expect(y, SystemKind::Groudit)?;
                if i == j {
                    return Err(Error::Op("tick needs two distinct systems".into()));
                }
                let span = if matches!(op, Op::Tick(..)) { e.tick.clone() } else { e.tick.dagger() };
                let wires = vec![e.l.clone(), e.r.clone(), e.l.clone(), e.r.clone()];
                self.on_pair(i, j, |me| me.diagram.apply(0, 4, &span, wires))
            }
            Op::CTickLeft(c, t) => {
                let i = self.expect(c, SystemKind::Dit)?;
                let j = self.expect(t, SystemKind::Groudit)?;
                self.on_pair(i, j, |me| {
                    me.on_one(0, &e.read.dagger(), SystemKind::Groudit)?;
                    let wires = vec![e.l.clone(), e.r.clone(), e.l.clone(), e.r.clone()];
                    me.diagram.apply(0, 4, &e.tick, wires)?;
                    me.on_one(0, &e.read, SystemKind::Dit)
                })
            }
            Op::CTickRight(t, c) => {
                let i = self.expect(t, SystemKind::Groudit)?;
                let j = self.expect(c, SystemKind::Dit)?;
                self.on_pair(i, j, |me| {
                    me.on_one(1, &e.read.dagger(), SystemKind::Groudit)?;
                    let wires = vec![e.l.clone(), e.r.clone(), e.l.clone(), e.r.clone()];
                    me.diagram.apply(0, 4, &e.tick, wires)?;
                    me.on_one(1, &e.read, SystemKind::Dit)
                })
            }
            Op::Split(x, y) => {
                if x == y || self.position(x).is_ok() || self.position(y).is_ok() {
                    return Err(Error::Op("split needs two fresh names".into()));
                }
                let pos = self.diagram.wires().len();
                let wires = vec![e.l.clone(), e.r.clone(), e.l.clone(), e.r.clone()];
                self.diagram.apply(pos, 0, &e.split, wires)?;
                self.systems.push((x.clone(), SystemKind::Groudit));
                self.systems.push((y.clone(), SystemKind::Groudit));
                Ok(())
            }
            Op::Copy(src, dst) => {
                let i = self.expect(src, SystemKind::Dit)?;
                if self.position(dst).is_ok() {
                    return Err(Error::Op(format!("system `{dst}` already exists")));
                }
                let wires = vec![e.ld.clone(), e.rd.clone(), e.ld.clone(), e.rd.clone()];
                self.diagram.apply(2 * i, 2, &e.copy, wires)?;
                self.systems.insert(i + 1, (dst.clone(), SystemKind::Dit));
                let n = self.systems.len();
                let mut order: Vec<usize> = (0..n).filter(|&k| k != i + 1).collect();
                order.push(i + 1);
                self.diagram.permute_blocks(&vec![2; n], &order)?;
                let saved = self.systems.clone();
                self.systems = order.iter().map(|&k| saved[k].clone()).collect();
                Ok(())
            }
            Op::Rename(from, to) => {
                let i = self.position(from)?;
                if from != to && self.position(to).is_ok() {
                    return Err(Error::Op(format!("system `{to}` already exists")));
                }
                self.systems[i].0 = to.clone();
                Ok(())
            }
        }
    }

    pub fn systems(&self) -> &[(String, SystemKind)] {
        &self.systems
    }

    /// Read the joint state back as a multiset of configurations.
    pub fn state(&self) -> MultisetState {
        let span = self.diagram.span();
        let nest = span.target();
        let mut out: BTreeMap<Configuration, BigUint> = BTreeMap::new();
        for (k, w) in span.row(0, 0, 0) {
            let mut atoms: Vec<Atom> = Vec::new();
            nest.collect_atoms(0, 0, *k, &mut atoms);
            let cfg = atoms
                .chunks(2)
                .zip(&self.systems)
                .map(|(pair, (_, kind))| match kind {
                    SystemKind::Groudit => {
                        let a = pair[0].b;
                        Value::Morph(Morphism::new(
                            a,
                            self.engine.g.group(a).mul(pair[0].x as usize, pair[1].x as usize),
                        ))
                    }
                    SystemKind::Dit => Value::Dit(pair[0].b),
                })
                .collect();
            *out.entry(cfg).or_default() += w;
        }
        out.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::make_groubit;

    #[test]
    fn encode_decode_round_trip() {
        let e = Engine::new(&make_groubit()).unwrap();
        for m in e.groupoid().morphisms() {
            assert_eq!(e.decode(e.encode(m)), m);
        }
    }
}
