//! Structural spans: cups, caps, coherence isomorphisms and the general
//! reassociation isomorphism between composites of the same factors.

use crate::error::{Error, Result};
use crate::gaf::profunctor::{normalize, Profunctor};
use crate::gaf::span::Span;

/// `ε_P : P;P* ⇒ 1_A`, `ε([p, p'], f) = δ(f^-1 . p = p')`.
pub fn cap(p: &Profunctor) -> Result<Span> {
    let ps = p.star();
    let comp = Profunctor::compose(p, &ps)?;
    let id = Profunctor::identity(p.source());
    let ga = p.source().clone();
    Span::from_rows(&comp, &id, |a, a2, k| {
        if a != a2 {
            return Vec::new();
        }
        let (b, x, x2) = comp.representative(a, a2, k).expect("composite");
        let grp = ga.group(a);
        (0..grp.order()).filter(|&f| p.act_left(a, b, grp.inv(f), x) == x2).map(|f| (f as u32, 1)).collect()
    })
}

/// `η_P : 1_B ⇒ P*;P`, `η(f, [p', p]) = δ(p' = p . f^-1)`.
pub fn cup(p: &Profunctor) -> Result<Span> {
    let ps = p.star();
    let comp = Profunctor::compose(&ps, p)?;
    let id = Profunctor::identity(p.target());
    let gb = p.target().clone();
    let cup = Span::from_rows(&comp, &id, |b, b2, k| {
        if b != b2 {
            return Vec::new();
        }
        let (a, x2, x) = comp.representative(b, b2, k).expect("composite");
        let grp = gb.group(b);
        (0..grp.order()).filter(|&f| p.act_right(a, b, grp.inv(f), x) == x2).map(|f| (f as u32, 1)).collect()
    })?;
    Ok(cup.dagger())
}

/// `α : (P;Q);R ⇒ P;(Q;R)`, `[[p, q], r] ↦ [p, [q, r]]`.
pub fn associator(p: &Profunctor, q: &Profunctor, r: &Profunctor) -> Result<Span> {
    let pq = Profunctor::compose(p, q)?;
    let src = Profunctor::compose(&pq, r)?;
    let qr = Profunctor::compose(q, r)?;
    let tgt = Profunctor::compose(p, &qr)?;
    Span::from_rows_unchecked(&src, &tgt, |a, d, k| {
        let (c, pq_el, z) = src.representative(a, d, k).unwrap();
        let (b, x, y) = pq.representative(a, c, pq_el).unwrap();
        let yz = qr.class_of(b, c, d, y, z).unwrap();
        vec![(tgt.class_of(a, b, d, x, yz).unwrap(), 1)]
    })
}

/// `λ : 1_A;P ⇒ P`, `[f, p] ↦ f . p`.
pub fn left_unitor(p: &Profunctor) -> Result<Span> {
    let src = Profunctor::compose(&Profunctor::identity(p.source()), p)?;
    Span::from_rows_unchecked(&src, p, |a, b, k| {
        let (_, f, x) = src.representative(a, b, k).unwrap();
        vec![(p.act_left(a, b, f as usize, x), 1)]
    })
}

/// `ρ : P;1_B ⇒ P`, `[p, g] ↦ p . g`.
pub fn right_unitor(p: &Profunctor) -> Result<Span> {
    let src = Profunctor::compose(p, &Profunctor::identity(p.target()))?;
    Span::from_rows_unchecked(&src, p, |a, b, k| {
        let (_, x, g) = src.representative(a, b, k).unwrap();
        vec![(p.act_right(a, b, g as usize, x), 1)]
    })
}

/// The unique structural isomorphism between two composites built from the
/// same non-identity factors in the same order.
pub fn reassociate(from: &Profunctor, to: &Profunctor) -> Result<Span> {
    if from.source() != to.source() || from.target() != to.target() || from.leaf_keys() != to.leaf_keys() {
        return Err(Error::Engine(format!("no structural isomorphism {} ⇒ {}", from.shape(), to.shape())));
    }
    if from == to {
        return Span::identity(from).retarget(from, to);
    }
    let span = Span::from_rows_unchecked(from, to, |a, b, x| {
        let mut atoms = Vec::new();
        from.collect_atoms(a, b, x, &mut atoms);
        let (atoms, residue) = normalize(atoms);
        let mut residue = residue;
        match to.from_atoms(a, b, &atoms, &mut residue) {
            Some(y) => vec![(y, 1)],
            None => Vec::new(),
        }
    });
    let span = span?;
    if span.nonzero_count() != from.total_len() {
        return Err(Error::Engine(format!("reassociation {} ⇒ {} is not total", from.shape(), to.shape())));
    }
    Ok(span)
}

/// The adjoint of `L^G` is `R^G` up to `x ↦ x^-1`; likewise `R^* ≅ L`.
pub fn boundary_star_iso(star: &Profunctor, plain: &Profunctor) -> Result<Span> {
    if star.source() != plain.source() || star.target() != plain.target() {
        return Err(Error::Engine("boundary iso needs parallel profunctors".into()));
    }
    let src = star.source().clone();
    let tgt = star.target().clone();
    let grp_of = move |a: usize, b: usize| {
        if src.object_count() == 1 && src.is_discrete() {
            tgt.group(b).clone()
        } else {
            src.group(a).clone()
        }
    };
    Span::natural(star, plain, |a, b, x| grp_of(a, b).inv(x as usize) as u32)
}
