use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::Groupoid;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

/// One cell `P(a, b)` of a profunctor: a finite set with commuting actions,
/// `Aut(a)` on the left and `Aut(b)` on the right, stored as tables.
#[derive(Clone, Debug)]
pub(crate) struct Cell {
    len: usize,
    left: Vec<u32>,
    right: Vec<u32>,
}

/// Identity of an opaque factor in a composite. A profunctor and its adjoint
/// share the base id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum LeafKey {
    Base(u64),
    Star(u64),
}

/// A factor of a composite element: leaf profunctor, cell and element.
#[derive(Clone, Debug)]
pub(crate) struct Atom {
    pub leaf: Profunctor,
    pub a: usize,
    pub b: usize,
    pub x: u32,
}

enum Kind {
    Leaf,
    Identity,
    Star(Profunctor),
    Comp(Box<CompData>),
}

struct CompData {
    first: Profunctor,
    second: Profunctor,
    /// Per cell, the canonical representative `(mid, x, y)` of each class.
    reps: Vec<Vec<(u32, u32, u32)>>,
    index: HashMap<(u32, u32, u32, u32, u32), u32>,
}

struct Inner {
    id: u64,
    name: String,
    shape: String,
    source: Groupoid,
    target: Groupoid,
    cells: Vec<Cell>,
    leaves: Vec<LeafKey>,
    kind: Kind,
}

/// A profunctor `A ↛ B` between finite skeletal groupoids whose cells are
/// free on both sides. Composition is in diagram order: `compose(p, q)` is
/// `p` followed by `q`.
#[derive(Clone)]
pub struct Profunctor(Arc<Inner>);

impl fmt::Debug for Profunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profunctor({}: {} elements)", self.0.shape, self.total_len())
    }
}

impl PartialEq for Profunctor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.shape == other.0.shape && self.0.source == other.0.source && self.0.target == other.0.target)
    }
}

impl Profunctor {
    /// Build a leaf from its cell sizes and action functions, checking the
    /// action laws and freeness.
    pub fn from_fn(
        name: &str,
        source: &Groupoid,
        target: &Groupoid,
        size: impl Fn(usize, usize) -> usize,
        left: impl Fn(usize, usize, usize, usize) -> usize,
        right: impl Fn(usize, usize, usize, usize) -> usize,
    ) -> Result<Self> {
        let mut cells = Vec::with_capacity(source.object_count() * target.object_count());
        for a in 0..source.object_count() {
            for b in 0..target.object_count() {
                let len = size(a, b);
                let na = source.aut_order(a);
                let nb = target.aut_order(b);
                let mut l = Vec::with_capacity(na * len);
                for f in 0..na {
                    for x in 0..len {
                        l.push(left(a, b, f, x) as u32);
                    }
                }
                let mut r = Vec::with_capacity(nb * len);
                for g in 0..nb {
                    for x in 0..len {
                        r.push(right(a, b, g, x) as u32);
                    }
                }
                cells.push(Cell { len, left: l, right: r });
            }
        }
        let id = fresh_id();
        let p = Profunctor(Arc::new(Inner {
            id,
            name: name.to_string(),
            shape: format!("{name}#{id}"),
            source: source.clone(),
            target: target.clone(),
            cells,
            leaves: vec![LeafKey::Base(id)],
            kind: Kind::Leaf,
        }));
        p.validate()?;
        Ok(p)
    }

    /// The hom profunctor `1_A`.
    pub fn identity(g: &Groupoid) -> Self {
        let n = g.object_count();
        let mut cells = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    cells.push(Cell { len: 0, left: Vec::new(), right: Vec::new() });
                    continue;
                }
                let grp = g.group(a);
                let k = grp.order();
                let mut left = Vec::with_capacity(k * k);
                let mut right = Vec::with_capacity(k * k);
                for f in 0..k {
                    for x in 0..k {
                        left.push(grp.mul(f, x) as u32);
                    }
                }
                for h in 0..k {
                    for x in 0..k {
                        right.push(grp.mul(x, h) as u32);
                    }
                }
                cells.push(Cell { len: k, left, right });
            }
        }
        let id = fresh_id();
        Profunctor(Arc::new(Inner {
            id,
            name: "1".into(),
            shape: format!("1[{}]", groupoid_tag(g)),
            source: g.clone(),
            target: g.clone(),
            cells,
            leaves: Vec::new(),
            kind: Kind::Identity,
        }))
    }

    /// `L^G : 1 ↛ G`, cell `(•, a) = Aut(a)` with right multiplication.
    pub fn boundary_left(name: &str, g: &Groupoid) -> Self {
        let unit = Groupoid::unit();
        Profunctor::from_fn(name, &unit, g, |_, b| g.aut_order(b), |_, _, _, x| x, |_, b, h, x| g.group(b).mul(x, h))
            .expect("boundary profunctor is free")
    }

    /// `R^G : G ↛ 1`, cell `(a, •) = Aut(a)` with left multiplication.
    pub fn boundary_right(name: &str, g: &Groupoid) -> Self {
        let unit = Groupoid::unit();
        Profunctor::from_fn(name, g, &unit, |a, _| g.aut_order(a), |a, _, f, x| g.group(a).mul(f, x), |_, _, _, x| x)
            .expect("boundary profunctor is free")
    }

    fn validate(&self) -> Result<()> {
        let (src, tgt) = (&self.0.source, &self.0.target);
        for a in 0..src.object_count() {
            for b in 0..tgt.object_count() {
                let len = self.cell_len(a, b);
                let (ga, gb) = (src.group(a), tgt.group(b));
                for x in 0..len as u32 {
                    for f in 0..ga.order() {
                        let fx = self.act_left(a, b, f, x);
                        if fx as usize >= len {
                            return Err(Error::Validation(format!(
                                "{}: left action leaves cell ({a},{b})",
                                self.0.name
                            )));
                        }
                        if f != ga.identity() && fx == x {
                            return Err(Error::Validation(format!(
                                "{}: left action not free on ({a},{b})",
                                self.0.name
                            )));
                        }
                        for f2 in 0..ga.order() {
                            if self.act_left(a, b, f2, fx) != self.act_left(a, b, ga.mul(f2, f), x) {
                                return Err(Error::Validation(format!("{}: left action law fails", self.0.name)));
                            }
                        }
                        for h in 0..gb.order() {
                            if self.act_right(a, b, h, fx) != self.act_left(a, b, f, self.act_right(a, b, h, x)) {
                                return Err(Error::Validation(format!("{}: actions do not commute", self.0.name)));
                            }
                        }
                    }
                    if self.act_left(a, b, ga.identity(), x) != x {
                        return Err(Error::Validation(format!("{}: identity acts non-trivially", self.0.name)));
                    }
                    for h in 0..gb.order() {
                        let xh = self.act_right(a, b, h, x);
                        if xh as usize >= len {
                            return Err(Error::Validation(format!(
                                "{}: right action leaves cell ({a},{b})",
                                self.0.name
                            )));
                        }
                        if h != gb.identity() && xh == x {
                            return Err(Error::Validation(format!(
                                "{}: right action not free on ({a},{b})",
                                self.0.name
                            )));
                        }
                        for h2 in 0..gb.order() {
                            if self.act_right(a, b, h2, xh) != self.act_right(a, b, gb.mul(h, h2), x) {
                                return Err(Error::Validation(format!("{}: right action law fails", self.0.name)));
                            }
                        }
                    }
                    if self.act_right(a, b, gb.identity(), x) != x {
                        return Err(Error::Validation(format!("{}: identity acts non-trivially", self.0.name)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Freeness of both actions on every cell.
    pub fn is_free(&self) -> bool {
        let (src, tgt) = (&self.0.source, &self.0.target);
        for a in 0..src.object_count() {
            for b in 0..tgt.object_count() {
                for x in 0..self.cell_len(a, b) as u32 {
                    let (ga, gb) = (src.group(a), tgt.group(b));
                    if (0..ga.order()).any(|f| f != ga.identity() && self.act_left(a, b, f, x) == x) {
                        return false;
                    }
                    if (0..gb.order()).any(|h| h != gb.identity() && self.act_right(a, b, h, x) == x) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn source(&self) -> &Groupoid {
        &self.0.source
    }

    pub fn target(&self) -> &Groupoid {
        &self.0.target
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Structural description; equal shapes mean equal element numbering.
    pub fn shape(&self) -> &str {
        &self.0.shape
    }

    #[inline]
    fn cell(&self, a: usize, b: usize) -> &Cell {
        &self.0.cells[a * self.0.target.object_count() + b]
    }

    #[inline]
    pub fn cell_len(&self, a: usize, b: usize) -> usize {
        self.cell(a, b).len
    }

    pub fn total_len(&self) -> usize {
        self.0.cells.iter().map(|c| c.len).sum()
    }

    /// `f . x` for `f` in `Aut(a)`.
    #[inline]
    pub fn act_left(&self, a: usize, b: usize, f: usize, x: u32) -> u32 {
        let c = self.cell(a, b);
        c.left[f * c.len + x as usize]
    }

    /// `x . h` for `h` in `Aut(b)`.
    #[inline]
    pub fn act_right(&self, a: usize, b: usize, h: usize, x: u32) -> u32 {
        let c = self.cell(a, b);
        c.right[h * c.len + x as usize]
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.0.kind, Kind::Identity)
    }

    pub fn is_composite(&self) -> bool {
        matches!(self.0.kind, Kind::Comp(_))
    }

    pub(crate) fn leaf_keys(&self) -> &[LeafKey] {
        &self.0.leaves
    }

    fn key(&self) -> Option<LeafKey> {
        match &self.0.kind {
            Kind::Leaf => Some(LeafKey::Base(self.0.id)),
            Kind::Star(inner) => Some(LeafKey::Star(inner.0.id)),
            _ => None,
        }
    }

    /// The adjoint `P* : B ↛ A`, with `h . x . f = f^-1 . x . h^-1`.
    pub fn star(&self) -> Profunctor {
        if let Kind::Star(inner) = &self.0.kind {
            return inner.clone();
        }
        if self.is_identity() {
            return self.clone();
        }
        let (src, tgt) = (&self.0.source, &self.0.target);
        let mut cells = Vec::with_capacity(self.0.cells.len());
        for b in 0..tgt.object_count() {
            for a in 0..src.object_count() {
                let len = self.cell_len(a, b);
                let (ga, gb) = (src.group(a), tgt.group(b));
                let mut left = Vec::with_capacity(gb.order() * len);
                for h in 0..gb.order() {
                    for x in 0..len as u32 {
                        left.push(self.act_right(a, b, gb.inv(h), x));
                    }
                }
                let mut right = Vec::with_capacity(ga.order() * len);
                for f in 0..ga.order() {
                    for x in 0..len as u32 {
                        right.push(self.act_left(a, b, ga.inv(f), x));
                    }
                }
                cells.push(Cell { len, left, right });
            }
        }
        let leaves = match self.key() {
            Some(LeafKey::Base(id)) => vec![LeafKey::Star(id)],
            _ => vec![LeafKey::Star(self.0.id)],
        };
        Profunctor(Arc::new(Inner {
            id: fresh_id(),
            name: format!("{}*", self.0.name),
            shape: format!("{}*", self.0.shape),
            source: tgt.clone(),
            target: src.clone(),
            cells,
            leaves,
            kind: Kind::Star(self.clone()),
        }))
    }

    /// `p` then `q`: the quotient of `⨿_b P(a,b) × Q(b,c)` by
    /// `(x.f, y) ~ (x, f.y)`.
    pub fn compose(p: &Profunctor, q: &Profunctor) -> Result<Profunctor> {
        if p.target() != q.source() {
            return Err(Error::Engine(format!(
                "cannot compose {} and {}: middle groupoids differ",
                p.shape(),
                q.shape()
            )));
        }
        let (ga, gb, gc) = (p.source(), p.target(), q.target());
        let mut reps = Vec::with_capacity(ga.object_count() * gc.object_count());
        let mut index = HashMap::new();
        let mut cells = Vec::with_capacity(ga.object_count() * gc.object_count());
        for a in 0..ga.object_count() {
            for c in 0..gc.object_count() {
                let mut cell_reps = Vec::new();
                for b in 0..gb.object_count() {
                    let (lp, lq) = (p.cell_len(a, b), q.cell_len(b, c));
                    let grp = gb.group(b);
                    let mut seen = vec![false; lp * lq];
                    for x in 0..lp as u32 {
                        for y in 0..lq as u32 {
                            if seen[x as usize * lq + y as usize] {
                                continue;
                            }
                            let k = cell_reps.len() as u32;
                            cell_reps.push((b as u32, x, y));
                            for f in 0..grp.order() {
                                let xf = p.act_right(a, b, f, x);
                                let fy = q.act_left(b, c, grp.inv(f), y);
                                seen[xf as usize * lq + fy as usize] = true;
                                index.insert((a as u32, b as u32, c as u32, xf, fy), k);
                            }
                        }
                    }
                }
                let len = cell_reps.len();
                let mut left = Vec::with_capacity(ga.aut_order(a) * len);
                for f in 0..ga.aut_order(a) {
                    for &(b, x, y) in &cell_reps {
                        let fx = p.act_left(a, b as usize, f, x);
                        left.push(index[&(a as u32, b, c as u32, fx, y)]);
                    }
                }
                let mut right = Vec::with_capacity(gc.aut_order(c) * len);
                for h in 0..gc.aut_order(c) {
                    for &(b, x, y) in &cell_reps {
                        let yh = q.act_right(b as usize, c, h, y);
                        right.push(index[&(a as u32, b, c as u32, x, yh)]);
                    }
                }
                cells.push(Cell { len, left, right });
                reps.push(cell_reps);
            }
        }
        let mut leaves = p.0.leaves.clone();
        leaves.extend_from_slice(&q.0.leaves);
        let out = Profunctor(Arc::new(Inner {
            id: fresh_id(),
            name: format!("{};{}", p.name(), q.name()),
            shape: format!("({};{})", p.shape(), q.shape()),
            source: ga.clone(),
            target: gc.clone(),
            cells,
            leaves,
            kind: Kind::Comp(Box::new(CompData { first: p.clone(), second: q.clone(), reps, index })),
        }));
        if !out.is_free() {
            return Err(Error::Engine(format!("composite {} is not free", out.shape())));
        }
        Ok(out)
    }

    /// Factors of a composite, `None` for anything else.
    pub fn factors(&self) -> Option<(&Profunctor, &Profunctor)> {
        match &self.0.kind {
            Kind::Comp(d) => Some((&d.first, &d.second)),
            _ => None,
        }
    }

    /// Representative `(mid, x, y)` of class `k` in cell `(a, c)`.
    pub fn representative(&self, a: usize, c: usize, k: u32) -> Option<(usize, u32, u32)> {
        match &self.0.kind {
            Kind::Comp(d) => {
                let (b, x, y) = d.reps[a * self.0.target.object_count() + c][k as usize];
                Some((b as usize, x, y))
            }
            _ => None,
        }
    }

    /// Class of `(x, y)` through mid object `b` in cell `(a, c)`.
    pub fn class_of(&self, a: usize, b: usize, c: usize, x: u32, y: u32) -> Option<u32> {
        match &self.0.kind {
            Kind::Comp(d) => d.index.get(&(a as u32, b as u32, c as u32, x, y)).copied(),
            _ => None,
        }
    }

    /// Size of the orbit of the representative of class `k`; equals
    /// `|Aut(mid)|` when the middle action is free.
    pub fn orbit_size(&self, a: usize, c: usize, k: u32) -> Option<usize> {
        let (b, x, y) = self.representative(a, c, k)?;
        let (p, q) = self.factors()?;
        let grp = p.target().group(b);
        let mut members: Vec<(u32, u32)> =
            (0..grp.order()).map(|f| (p.act_right(a, b, f, x), q.act_left(b, c, grp.inv(f), y))).collect();
        members.sort_unstable();
        members.dedup();
        Some(members.len())
    }

    pub(crate) fn collect_atoms(&self, a: usize, b: usize, x: u32, out: &mut Vec<Atom>) {
        match &self.0.kind {
            Kind::Comp(d) => {
                let (m, x1, y1) = d.reps[a * self.0.target.object_count() + b][x as usize];
                d.first.collect_atoms(a, m as usize, x1, out);
                d.second.collect_atoms(m as usize, b, y1, out);
            }
            _ => out.push(Atom { leaf: self.clone(), a, b, x }),
        }
    }

    /// Locate the element whose normalized factor list is `atoms`. The
    /// residue is a bare automorphism left over when every factor was an
    /// identity; it is absorbed by the first identity factor reached.
    pub(crate) fn from_atoms(&self, a: usize, b: usize, atoms: &[Atom], residue: &mut Option<usize>) -> Option<u32> {
        match &self.0.kind {
            Kind::Identity => {
                if !atoms.is_empty() || a != b {
                    return None;
                }
                let e = self.0.source.group(a).identity();
                Some(residue.take().unwrap_or(e) as u32)
            }
            Kind::Leaf | Kind::Star(_) => match atoms {
                [atom] if atom.leaf.key() == self.key() && atom.a == a && atom.b == b => Some(atom.x),
                _ => None,
            },
            Kind::Comp(d) => {
                let k = d.first.0.leaves.len();
                if atoms.len() < k {
                    return None;
                }
                let mid = if k > 0 {
                    atoms[k - 1].b
                } else if atoms.len() > k {
                    atoms[k].a
                } else {
                    a
                };
                if mid >= d.first.0.target.object_count() {
                    return None;
                }
                let x = d.first.from_atoms(a, mid, &atoms[..k], residue)?;
                let y = d.second.from_atoms(mid, b, &atoms[k..], residue)?;
                d.index.get(&(a as u32, mid as u32, b as u32, x, y)).copied()
            }
        }
    }
}

/// Absorb identity factors into their neighbours.
pub(crate) fn normalize(atoms: Vec<Atom>) -> (Vec<Atom>, Option<usize>) {
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    let mut pending: Option<(usize, usize)> = None;
    for mut atom in atoms {
        if atom.leaf.is_identity() {
            let f = atom.x as usize;
            if let Some(last) = out.last_mut() {
                last.x = last.leaf.act_right(last.a, last.b, f, last.x);
            } else {
                let grp = atom.leaf.source().group(atom.a);
                pending = Some(match pending {
                    None => (atom.a, f),
                    Some((o, g)) => (o, grp.mul(g, f)),
                });
            }
        } else {
            if let Some((_, f)) = pending.take() {
                atom.x = atom.leaf.act_left(atom.a, atom.b, f, atom.x);
            }
            out.push(atom);
        }
    }
    (out, pending.map(|(_, f)| f))
}

/// Symmetry of closed composites: reorder blocks of factors of `cur`
/// (each block a `1 ↛ 1` composite) to obtain `next`.
pub(crate) fn block_permutation(
    cur: &Profunctor,
    next: &Profunctor,
    blocks: &[usize],
    order: &[usize],
) -> Result<crate::gaf::span::Span> {
    let span = crate::gaf::span::Span::from_rows_unchecked(cur, next, |a, b, x| {
        let mut atoms = Vec::new();
        cur.collect_atoms(a, b, x, &mut atoms);
        let (atoms, mut residue) = normalize(atoms);
        let mut chunks = Vec::with_capacity(blocks.len());
        let mut rest = &atoms[..];
        for &len in blocks {
            let (head, tail) = rest.split_at(len.min(rest.len()));
            chunks.push(head);
            rest = tail;
        }
        let permuted: Vec<Atom> = order.iter().flat_map(|&k| chunks[k].iter().cloned()).collect();
        next.from_atoms(a, b, &permuted, &mut residue).map(|y| vec![(y, 1)]).unwrap_or_default()
    })?;
    if span.nonzero_count() != cur.total_len() {
        return Err(Error::Engine("block permutation is not total".into()));
    }
    Ok(span)
}

fn groupoid_tag(g: &Groupoid) -> String {
    g.groups().iter().map(|grp| grp.order().to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::Group;

    fn z2z2() -> Groupoid {
        Groupoid::cyclic_union(2, 2)
    }

    #[test]
    fn boundary_sizes() {
        let g = z2z2();
        let l = Profunctor::boundary_left("L", &g);
        let r = Profunctor::boundary_right("R", &g);
        assert_eq!(l.total_len(), 4);
        let lr = Profunctor::compose(&l, &r).unwrap();
        assert_eq!(lr.total_len(), 4);
        let rl = Profunctor::compose(&r, &l).unwrap();
        assert_eq!(rl.total_len(), 16);
    }

    #[test]
    fn star_is_involutive() {
        let g = z2z2();
        let l = Profunctor::boundary_left("L", &g);
        let ss = l.star().star();
        assert_eq!(ss, l);
        assert_eq!(l.star().leaf_keys(), &[LeafKey::Star(l.0.id)]);
    }

    #[test]
    fn non_free_action_is_rejected() {
        let g = Groupoid::new(vec![Group::cyclic(2)]).unwrap();
        let unit = Groupoid::unit();
        let r = Profunctor::from_fn("bad", &g, &unit, |_, _| 1, |_, _, _, x| x, |_, _, _, x| x);
        assert!(r.is_err());
    }

    #[test]
    fn composite_orbits_are_full() {
        let g = Groupoid::new(vec![Group::cyclic(3), Group::symmetric3()]).unwrap();
        let r = Profunctor::boundary_right("R", &g);
        let l = Profunctor::boundary_left("L", &g);
        let lr = Profunctor::compose(&l, &r).unwrap();
        for k in 0..lr.cell_len(0, 0) as u32 {
            let (b, _, _) = lr.representative(0, 0, k).unwrap();
            assert_eq!(lr.orbit_size(0, 0, k), Some(g.aut_order(b)));
        }
        assert_eq!(lr.total_len(), g.mor_count());
    }
}
