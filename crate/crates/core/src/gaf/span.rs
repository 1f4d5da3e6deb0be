use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaf::profunctor::Profunctor;

/// Sparse row: `(column, weight)` pairs sorted by column, no zero weights.
pub type Row = Vec<(u32, BigUint)>;

/// An equivariant span `sigma : S ⇒ T` between parallel profunctors,
/// stored per cell as sparse rows indexed by elements of `S`.
#[derive(Clone, Debug)]
pub struct Span {
    source: Profunctor,
    target: Profunctor,
    rows: Vec<Vec<Row>>,
}

fn cell_index(p: &Profunctor, a: usize, b: usize) -> usize {
    a * p.target().object_count() + b
}

fn check_parallel(s: &Profunctor, t: &Profunctor) -> Result<()> {
    if s.source() != t.source() || s.target() != t.target() {
        return Err(Error::Engine(format!("{} and {} are not parallel", s.shape(), t.shape())));
    }
    Ok(())
}

fn row_from_map(m: BTreeMap<u32, BigUint>) -> Row {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

impl Span {
    fn empty_rows(source: &Profunctor) -> Vec<Vec<Row>> {
        let (na, nb) = (source.source().object_count(), source.target().object_count());
        let mut rows = Vec::with_capacity(na * nb);
        for a in 0..na {
            for b in 0..nb {
                rows.push(vec![Vec::new(); source.cell_len(a, b)]);
            }
        }
        rows
    }

    /// Build from a sparse row function and check equivariance.
    pub fn from_rows(
        source: &Profunctor,
        target: &Profunctor,
        f: impl Fn(usize, usize, u32) -> Vec<(u32, u64)>,
    ) -> Result<Span> {
        let s = Span::from_rows_unchecked(source, target, f)?;
        if !s.is_equivariant() {
            return Err(Error::Engine(format!("span {} ⇒ {} is not equivariant", source.shape(), target.shape())));
        }
        Ok(s)
    }

    pub(crate) fn from_rows_unchecked(
        source: &Profunctor,
        target: &Profunctor,
        f: impl Fn(usize, usize, u32) -> Vec<(u32, u64)>,
    ) -> Result<Span> {
        check_parallel(source, target)?;
        let mut rows = Span::empty_rows(source);
        for a in 0..source.source().object_count() {
            for b in 0..source.target().object_count() {
                let ci = cell_index(source, a, b);
                let tl = target.cell_len(a, b) as u32;
                for x in 0..source.cell_len(a, b) as u32 {
                    let mut acc = BTreeMap::new();
                    for (y, w) in f(a, b, x) {
                        if y >= tl {
                            return Err(Error::Engine(format!("target index {y} out of range in cell ({a},{b})")));
                        }
                        *acc.entry(y).or_insert_with(BigUint::zero) += BigUint::from(w);
                    }
                    rows[ci][x as usize] = row_from_map(acc);
                }
            }
        }
        Ok(Span { source: source.clone(), target: target.clone(), rows })
    }

    /// Dense construction from an entry function, mainly for tests.
    pub fn from_fn(
        source: &Profunctor,
        target: &Profunctor,
        f: impl Fn(usize, usize, u32, u32) -> u64,
    ) -> Result<Span> {
        Span::from_rows(source, target, |a, b, x| {
            (0..target.cell_len(a, b) as u32).map(|y| (y, f(a, b, x, y))).filter(|(_, w)| *w != 0).collect()
        })
    }

    /// The span of a natural transformation `x ↦ map(x)`.
    pub fn natural(source: &Profunctor, target: &Profunctor, map: impl Fn(usize, usize, u32) -> u32) -> Result<Span> {
        Span::from_rows(source, target, |a, b, x| vec![(map(a, b, x), 1)])
    }

    pub fn identity(p: &Profunctor) -> Span {
        Span::from_rows_unchecked(p, p, |_, _, x| vec![(x, 1)]).expect("identity is well-formed")
    }

    pub fn zero(source: &Profunctor, target: &Profunctor) -> Result<Span> {
        Span::from_rows_unchecked(source, target, |_, _, _| Vec::new())
    }

    pub fn source(&self) -> &Profunctor {
        &self.source
    }

    pub fn target(&self) -> &Profunctor {
        &self.target
    }

    pub fn row(&self, a: usize, b: usize, x: u32) -> &Row {
        &self.rows[cell_index(&self.source, a, b)][x as usize]
    }

    pub fn get(&self, a: usize, b: usize, x: u32, y: u32) -> BigUint {
        let row = self.row(a, b, x);
        match row.binary_search_by_key(&y, |(c, _)| *c) {
            Ok(i) => row[i].1.clone(),
            Err(_) => BigUint::zero(),
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.rows.iter().flatten().map(Vec::len).sum()
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nb = self.source.target().object_count();
        (0..self.source.source().object_count()).flat_map(move |a| (0..nb).map(move |b| (a, b)))
    }

    /// `sigma(f.x.g, f.y.g) = sigma(x, y)` for all actions.
    pub fn is_equivariant(&self) -> bool {
        let (src, tgt) = (self.source.source(), self.source.target());
        for (a, b) in self.cells() {
            for x in 0..self.source.cell_len(a, b) as u32 {
                let row = self.row(a, b, x);
                for f in 0..src.aut_order(a) {
                    for g in 0..tgt.aut_order(b) {
                        let x2 = self.source.act_right(a, b, g, self.source.act_left(a, b, f, x));
                        let row2 = self.row(a, b, x2);
                        if row2.len() != row.len() {
                            return false;
                        }
                        for (y, w) in row {
                            let y2 = self.target.act_right(a, b, g, self.target.act_left(a, b, f, *y));
                            if self.get(a, b, x2, y2) != *w {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    pub fn dagger(&self) -> Span {
        let mut rows = Span::empty_rows(&self.target);
        for (a, b) in self.cells() {
            let ci = cell_index(&self.target, a, b);
            for x in 0..self.source.cell_len(a, b) as u32 {
                for (y, w) in self.row(a, b, x) {
                    rows[ci][*y as usize].push((x, w.clone()));
                }
            }
        }
        Span { source: self.target.clone(), target: self.source.clone(), rows }
    }

    /// Vertical composite: `self` first, then `next`.
    pub fn then(&self, next: &Span) -> Result<Span> {
        if self.target != next.source {
            return Err(Error::Engine(format!(
                "vertical composition mismatch: {} vs {}",
                self.target.shape(),
                next.source.shape()
            )));
        }
        let mut rows = Span::empty_rows(&self.source);
        for (a, b) in self.cells() {
            let ci = cell_index(&self.source, a, b);
            for x in 0..self.source.cell_len(a, b) as u32 {
                let mut acc: BTreeMap<u32, BigUint> = BTreeMap::new();
                for (q, v) in self.row(a, b, x) {
                    for (r, w) in next.row(a, b, *q) {
                        *acc.entry(*r).or_insert_with(BigUint::zero) += v * w;
                    }
                }
                rows[ci][x as usize] = row_from_map(acc);
            }
        }
        Ok(Span { source: self.source.clone(), target: next.target.clone(), rows })
    }

    pub fn scale(&self, k: &BigUint) -> Span {
        let rows = self
            .rows
            .iter()
            .map(|cell| {
                cell.iter()
                    .map(|row| if k.is_zero() { Vec::new() } else { row.iter().map(|(c, w)| (*c, w * k)).collect() })
                    .collect()
            })
            .collect();
        Span { source: self.source.clone(), target: self.target.clone(), rows }
    }

    pub fn same_boundary(&self, other: &Span) -> bool {
        self.source == other.source && self.target == other.target
    }

    /// Exact equality of boundaries and every entry.
    pub fn equals(&self, other: &Span) -> bool {
        self.same_boundary(other) && self.rows == other.rows
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.equals(&Span::identity(&self.source))
    }

    /// `Some(k)` with `self = k * other`, `k` a positive rational.
    pub fn ratio_to(&self, other: &Span) -> Option<BigRational> {
        if !self.same_boundary(other) {
            return None;
        }
        let mut ratio: Option<BigRational> = None;
        for (r1, r2) in self.rows.iter().flatten().zip(other.rows.iter().flatten()) {
            if r1.len() != r2.len() {
                return None;
            }
            for ((c1, w1), (c2, w2)) in r1.iter().zip(r2) {
                if c1 != c2 {
                    return None;
                }
                let r = BigRational::new(w1.clone().into(), w2.clone().into());
                match &ratio {
                    None => ratio = Some(r),
                    Some(k) if *k == r => {}
                    Some(_) => return None,
                }
            }
        }
        Some(ratio.unwrap_or_else(BigRational::one))
    }

    /// Relabel boundaries with structurally equal profunctors.
    pub fn retarget(&self, source: &Profunctor, target: &Profunctor) -> Result<Span> {
        if self.source != *source || self.target != *target {
            return Err(Error::Engine("retarget needs structurally equal boundaries".into()));
        }
        Ok(Span { source: source.clone(), target: target.clone(), rows: self.rows.clone() })
    }

    /// Horizontal composite `sigma ∘ tau : S;T ⇒ S';T'`. Each source class is
    /// read off its representative and pushed through both spans.
    pub fn horizontal(sigma: &Span, tau: &Span) -> Result<Span> {
        let cs = Profunctor::compose(&sigma.source, &tau.source)?;
        let ct = Profunctor::compose(&sigma.target, &tau.target)?;
        let mut rows = Span::empty_rows(&cs);
        let nc = cs.target().object_count();
        for a in 0..cs.source().object_count() {
            for c in 0..nc {
                let ci = a * nc + c;
                for k in 0..cs.cell_len(a, c) as u32 {
                    let (b, s, t) = cs.representative(a, c, k).expect("composite");
                    let mut acc: BTreeMap<u32, BigUint> = BTreeMap::new();
                    for (s2, v) in sigma.row(a, b, s) {
                        for (t2, w) in tau.row(b, c, t) {
                            let cls = ct.class_of(a, b, c, *s2, *t2).expect("target class exists");
                            *acc.entry(cls).or_insert_with(BigUint::zero) += v * w;
                        }
                    }
                    rows[ci][k as usize] = row_from_map(acc);
                }
            }
        }
        Ok(Span { source: cs, target: ct, rows })
    }

    /// Dense horizontal composite straight from the coend formula
    /// `Σ_{f ∈ Aut(b)} sigma(s, s'.f) tau(f.t, t')`, used as a cross-check.
    pub fn horizontal_reference(sigma: &Span, tau: &Span) -> Result<Span> {
        let cs = Profunctor::compose(&sigma.source, &tau.source)?;
        let ct = Profunctor::compose(&sigma.target, &tau.target)?;
        let mid = sigma.source.target().clone();
        let s_out = sigma.target.clone();
        let t_in = tau.source.clone();
        let mut rows = Span::empty_rows(&cs);
        let nc = cs.target().object_count();
        for a in 0..cs.source().object_count() {
            for c in 0..nc {
                for k in 0..cs.cell_len(a, c) as u32 {
                    let (b, s, t) = cs.representative(a, c, k).unwrap();
                    let mut row = Vec::new();
                    for k2 in 0..ct.cell_len(a, c) as u32 {
                        let (b2, s2, t2) = ct.representative(a, c, k2).unwrap();
                        if b2 != b {
                            continue;
                        }
                        let mut sum = BigUint::zero();
                        for f in 0..mid.aut_order(b) {
                            let x = sigma.get(a, b, s, s_out.act_right(a, b, f, s2));
                            if x.is_zero() {
                                continue;
                            }
                            sum += x * tau.get(b, c, t_in.act_left(b, c, f, t), t2);
                        }
                        if !sum.is_zero() {
                            row.push((k2, sum));
                        }
                    }
                    rows[a * nc + c][k as usize] = row;
                }
            }
        }
        Ok(Span { source: cs, target: ct, rows })
    }

    /// Dense matrix of one cell, rows indexed by source elements.
    pub fn cell_matrix(&self, a: usize, b: usize) -> Vec<Vec<BigUint>> {
        (0..self.source.cell_len(a, b) as u32)
            .map(|x| (0..self.target.cell_len(a, b) as u32).map(|y| self.get(a, b, x, y)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::Groupoid;

    #[test]
    fn dagger_is_involutive_and_reverses() {
        let g = Groupoid::cyclic_union(2, 2);
        let l = Profunctor::boundary_left("L", &g);
        let s = Span::from_fn(&l, &l, |_, b, x, y| if b == 0 { 1 + ((x ^ y) as u64) } else { 2 }).unwrap();
        assert!(s.dagger().dagger().equals(&s));
        let t = s.then(&s).unwrap();
        assert!(t.dagger().equals(&s.dagger().then(&s.dagger()).unwrap()));
    }

    #[test]
    fn non_equivariant_is_rejected() {
        let g = Groupoid::cyclic_union(2, 2);
        let l = Profunctor::boundary_left("L", &g);
        assert!(Span::from_fn(&l, &l, |_, _, x, y| u64::from(x == 0 && y == 0)).is_err());
    }

    #[test]
    fn ratio() {
        let g = Groupoid::cyclic_union(2, 2);
        let l = Profunctor::boundary_left("L", &g);
        let id = Span::identity(&l);
        let two = id.scale(&BigUint::from(2u32));
        assert_eq!(two.ratio_to(&id), Some(BigRational::from_integer(2.into())));
        assert!(id.is_identity());
    }
}
