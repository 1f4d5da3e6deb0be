//! Seeded random instances for the law suites: small groupoids, free
//! profunctors and equivariant spans.

use std::collections::HashMap;

use rand::Rng;

use crate::error::Result;
use crate::gaf::profunctor::Profunctor;
use crate::gaf::span::Span;
use crate::groupoid::{Group, Groupoid};

/// At most `max_objects` objects, each with a cyclic group of order 1 to
/// `max_order`.
pub fn groupoid(rng: &mut impl Rng, max_objects: usize, max_order: usize) -> Groupoid {
    let n = rng.gen_range(1..=max_objects);
    Groupoid::new((0..n).map(|_| Group::cyclic(rng.gen_range(1..=max_order))).collect()).expect("nonempty")
}

#[derive(Clone, Copy)]
enum Orbit {
    /// `Aut(a) × Aut(b)` with multiplication on each side.
    Product,
    /// `Z_n` with `f.x.h = f + x + h`, for equal orders.
    Diagonal,
}

/// A free profunctor `A ↛ B`: every cell is a disjoint union of up to
/// `max_orbits` free orbits.
pub fn profunctor(rng: &mut impl Rng, a: &Groupoid, b: &Groupoid, max_orbits: usize) -> Profunctor {
    let mut layout: Vec<Vec<Vec<Orbit>>> = Vec::new();
    for x in 0..a.object_count() {
        let mut row = Vec::new();
        for y in 0..b.object_count() {
            let k = rng.gen_range(0..=max_orbits);
            let same = a.aut_order(x) == b.aut_order(y);
            row.push(
                (0..k).map(|_| if same && rng.gen_bool(0.5) { Orbit::Diagonal } else { Orbit::Product }).collect(),
            );
        }
        layout.push(row);
    }
    let width = |x: usize, y: usize, o: Orbit| match o {
        Orbit::Product => a.aut_order(x) * b.aut_order(y),
        Orbit::Diagonal => a.aut_order(x),
    };
    let locate = |x: usize, y: usize, mut e: usize| -> (usize, Orbit, usize) {
        let mut base = 0;
        for &o in &layout[x][y] {
            let w = width(x, y, o);
            if e < w {
                return (base, o, e);
            }
            e -= w;
            base += w;
        }
        unreachable!("element inside cell")
    };
    let size = |x: usize, y: usize| layout[x][y].iter().map(|&o| width(x, y, o)).sum();
    let left = |x: usize, y: usize, f: usize, e: usize| {
        let (base, o, i) = locate(x, y, e);
        match o {
            Orbit::Product => {
                let nb = b.aut_order(y);
                base + a.group(x).mul(f, i / nb) * nb + i % nb
            }
            Orbit::Diagonal => base + a.group(x).mul(f, i),
        }
    };
    let right = |x: usize, y: usize, h: usize, e: usize| {
        let (base, o, i) = locate(x, y, e);
        match o {
            Orbit::Product => {
                let nb = b.aut_order(y);
                base + (i / nb) * nb + b.group(y).mul(i % nb, h)
            }
            Orbit::Diagonal => base + a.group(x).mul(i, h),
        }
    };
    Profunctor::from_fn("P", a, b, size, left, right).expect("free by construction")
}

/// An equivariant span with values in `0..=max_value`, constant on orbits.
pub fn span(rng: &mut impl Rng, s: &Profunctor, t: &Profunctor, max_value: u64) -> Result<Span> {
    let (ga, gb) = (s.source(), s.target());
    let mut values: HashMap<(usize, usize, u32, u32), u64> = HashMap::new();
    for a in 0..ga.object_count() {
        for b in 0..gb.object_count() {
            for x in 0..s.cell_len(a, b) as u32 {
                for y in 0..t.cell_len(a, b) as u32 {
                    if values.contains_key(&(a, b, x, y)) {
                        continue;
                    }
                    let v = rng.gen_range(0..=max_value);
                    for f in 0..ga.aut_order(a) {
                        for h in 0..gb.aut_order(b) {
                            let x2 = s.act_right(a, b, h, s.act_left(a, b, f, x));
                            let y2 = t.act_right(a, b, h, t.act_left(a, b, f, y));
                            values.insert((a, b, x2, y2), v);
                        }
                    }
                }
            }
        }
    }
    Span::from_fn(s, t, |a, b, x, y| values.get(&(a, b, x, y)).copied().unwrap_or(0))
}
