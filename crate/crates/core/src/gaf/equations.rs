//! The measurement and biunitarity equations, evaluated as span equalities.

use num_rational::BigRational;
use serde::Serialize;

use crate::biunitary::Biunitary;
use crate::error::Result;
use crate::gaf::diagram::Diagram;
use crate::gaf::profunctor::Profunctor;
use crate::gaf::semantics::{bend_cap, bend_cup, decode_lr, encode_lr, quarter_turn, Engine, Rotation};
use crate::gaf::span::Span;
use crate::groupoid::{Groupoid, Morphism};

/// The crossing `L;R ⇒ L;R` of a permutation of `Mor(G)`.
pub fn biunitary_span(f: &Biunitary) -> Result<Span> {
    let g = f.groupoid();
    let l = Profunctor::boundary_left("L", g);
    let r = Profunctor::boundary_right("R", g);
    crossing(&l, &r, g, |m| f.apply(m))
}

fn crossing(l: &Profunctor, r: &Profunctor, g: &Groupoid, f: impl Fn(Morphism) -> Morphism) -> Result<Span> {
    let lr = Profunctor::compose(l, r)?;
    Span::natural(&lr, &lr, |_, _, k| encode_lr(&lr, g, f(decode_lr(&lr, g, k))))
}

/// The crossing is unitary (automatic for a permutation) and so is its
/// quarter turn. Agrees with the one-intersection test.
pub fn check_graphical_biunitarity(f: &Biunitary) -> Result<bool> {
    let g = f.groupoid();
    let l = Profunctor::boundary_left("L", g);
    let r = Profunctor::boundary_right("R", g);
    let x = crossing(&l, &r, g, |m| f.apply(m))?;
    let unitary =
        |s: &Span| -> Result<bool> { Ok(s.then(&s.dagger())?.is_identity() && s.dagger().then(s)?.is_identity()) };
    if !unitary(&x)? {
        return Ok(false);
    }
    let turned = quarter_turn(&l, &r, &x, Rotation::Anticlockwise)?;
    unitary(&turned)
}

/// Measurement calculus facts for one groudit.
#[derive(Clone, Debug, Serialize)]
pub struct MeasurementReport {
    /// `L^G ⇒ L^D;S ⇒ L^G` is the identity.
    pub f_blue_lens: bool,
    /// `L^D;S ⇒ L^G ⇒ L^D;S` is the identity.
    pub d_iso_unitary: bool,
    /// Discard then its dagger on `L^G;S*` is the identity. Expected false.
    pub c_nonequation: bool,
    /// The closed yellow lens as a multiple of the identity.
    pub e_bubble: Option<String>,
}

pub fn measurement_equations(e: &Engine) -> Result<MeasurementReport> {
    let iso = e.measure_iso()?;
    let discard = e.measure_discard_left()?;
    let bubble = discard.dagger().then(&discard)?;
    Ok(MeasurementReport {
        f_blue_lens: iso.then(&iso.dagger())?.is_identity(),
        d_iso_unitary: iso.dagger().then(&iso)?.is_identity(),
        c_nonequation: discard.then(&discard.dagger())?.is_identity(),
        e_bubble: bubble.ratio_to(&Span::identity(bubble.source())).map(|k: BigRational| k.to_string()),
    })
}

/// Yellow-blue crossing `L;R ⇒ Ld;Rd`: the biunitary followed by `Read`.
pub fn yellow_blue_crossing(e: &Engine) -> Result<Span> {
    e.f().then(e.read())
}

/// Yellow-yellow crossing `Ld;Rd ⇒ Ld;Rd`: `Write`, the biunitary, `Read`.
pub fn yellow_yellow_crossing(e: &Engine, dagger: bool) -> Result<Span> {
    let f = if dagger { e.f().dagger() } else { e.f().clone() };
    e.read().dagger().then(&f)?.then(e.read())
}

#[derive(Clone, Debug, Serialize)]
pub struct YellowReport {
    /// The two yellow-yellow crossings (of `F` and of `F†`) agree.
    pub c_mirror: bool,
    /// Yellow-yellow crossing equals yellow cap followed by yellow cup.
    pub d: bool,
    /// A crossing and its mirror joined by a blue cup and a yellow cap
    /// equal a blue cap followed by a yellow cup.
    pub e: bool,
}

/// Yellow cap then yellow cup on `Ld;Rd`.
fn yellow_cap_cup(e: &Engine) -> Result<Span> {
    let mut diag = Diagram::new(vec![e.ld.clone(), e.rd.clone()], e.unit())?;
    bend_cap(&mut diag, 0, &e.ld, &e.rd)?;
    bend_cup(&mut diag, 0, &e.rd, &e.ld)?;
    Ok(diag.into_span())
}

/// Left side of the crossing-pair equation.
pub fn crossing_pair(e: &Engine) -> Result<Span> {
    let g = e.groupoid();
    let d = e.groudit();
    let mirror = crossing(&e.l, &e.r, g, |m| g.inverse(d.f(g.inverse(m))))?.then(e.read())?;
    let left = yellow_blue_crossing(e)?;
    let mut diag = Diagram::new(vec![e.l.clone(), e.r.clone()], e.unit())?;
    bend_cup(&mut diag, 1, &e.l, &e.r)?;
    diag.apply(0, 2, &left, vec![e.ld.clone(), e.rd.clone()])?;
    diag.apply(2, 2, &mirror, vec![e.ld.clone(), e.rd.clone()])?;
    bend_cap(&mut diag, 1, &e.rd, &e.ld)?;
    Ok(diag.into_span())
}

/// Right side: blue cap then yellow cup.
pub fn cap_then_cup(e: &Engine) -> Result<Span> {
    let mut diag = Diagram::new(vec![e.l.clone(), e.r.clone()], e.unit())?;
    bend_cap(&mut diag, 0, &e.l, &e.r)?;
    bend_cup(&mut diag, 0, &e.rd, &e.ld)?;
    Ok(diag.into_span())
}

pub fn yellow_biunitary_equations(e: &Engine) -> Result<YellowReport> {
    let yy = yellow_yellow_crossing(e, false)?;
    let yy_dagger = yellow_yellow_crossing(e, true)?;
    let cc = yellow_cap_cup(e)?.retarget(yy.source(), yy.target())?;
    let pair = crossing_pair(e)?;
    let rhs = cap_then_cup(e)?.retarget(pair.source(), pair.target())?;
    Ok(YellowReport { c_mirror: yy.equals(&yy_dagger), d: yy.equals(&cc), e: pair.equals(&rhs) })
}
