//! Randomized law suite for the engine: interchange, coherence, snakes,
//! dagger and freeness, each an exact span equality.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::gaf::pivotal::{associator, cap, cup, left_unitor, right_unitor};
use crate::gaf::profunctor::Profunctor;
use crate::gaf::random;
use crate::gaf::span::Span;

/// Passed and total counts per law.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct LawReport {
    pub instances: usize,
    pub interchange: usize,
    pub horizontal_reference: usize,
    pub well_defined: usize,
    pub vertical_units: usize,
    pub dagger: usize,
    pub pentagon: usize,
    pub triangle: usize,
    pub snake: usize,
    pub freeness: usize,
}

impl LawReport {
    pub fn all_pass(&self) -> bool {
        let n = self.instances;
        [
            self.interchange,
            self.horizontal_reference,
            self.well_defined,
            self.vertical_units,
            self.dagger,
            self.pentagon,
            self.triangle,
            self.snake,
            self.freeness,
        ]
        .iter()
        .all(|&k| k == n)
    }
}

pub const MAX_OBJECTS: usize = 3;
pub const MAX_ORDER: usize = 3;

pub fn interchange(sigma: &Span, mu: &Span, tau: &Span, nu: &Span) -> Result<bool> {
    let lhs = Span::horizontal(sigma, tau)?.then(&Span::horizontal(mu, nu)?)?;
    let rhs = Span::horizontal(&sigma.then(mu)?, &tau.then(nu)?)?;
    Ok(lhs.equals(&rhs))
}

/// Every pair in a source class gives the same row as the representative.
pub fn horizontal_well_defined(sigma: &Span, tau: &Span) -> Result<bool> {
    let h = Span::horizontal(sigma, tau)?;
    let (cs, ct) = (h.source(), h.target());
    let (s, t) = (sigma.source(), tau.source());
    let mid = s.target();
    for a in 0..cs.source().object_count() {
        for c in 0..cs.target().object_count() {
            for b in 0..mid.object_count() {
                for x in 0..s.cell_len(a, b) as u32 {
                    for y in 0..t.cell_len(b, c) as u32 {
                        let k = cs.class_of(a, b, c, x, y).expect("class");
                        let mut row = std::collections::BTreeMap::new();
                        for (x2, v) in sigma.row(a, b, x) {
                            for (y2, w) in tau.row(b, c, y) {
                                let cls = ct.class_of(a, b, c, *x2, *y2).expect("class");
                                *row.entry(cls).or_insert_with(num_bigint::BigUint::default) += v * w;
                            }
                        }
                        let row: Vec<_> = row.into_iter().collect();
                        if &row != h.row(a, c, k) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

pub fn dagger_laws(sigma: &Span, mu: &Span, tau: &Span) -> Result<bool> {
    let vertical = sigma.then(mu)?.dagger().equals(&mu.dagger().then(&sigma.dagger())?);
    let horizontal = Span::horizontal(sigma, tau)?.dagger().equals(&Span::horizontal(&sigma.dagger(), &tau.dagger())?);
    Ok(vertical && horizontal && sigma.dagger().dagger().equals(sigma))
}

pub fn pentagon(p: &Profunctor, q: &Profunctor, r: &Profunctor, t: &Profunctor) -> Result<bool> {
    let pq = Profunctor::compose(p, q)?;
    let qr = Profunctor::compose(q, r)?;
    let rt = Profunctor::compose(r, t)?;
    let top = associator(&pq, r, t)?.then(&associator(p, q, &rt)?)?;
    let bottom = Span::horizontal(&associator(p, q, r)?, &Span::identity(t))?
        .then(&associator(p, &qr, t)?)?
        .then(&Span::horizontal(&Span::identity(p), &associator(q, r, t)?)?)?;
    Ok(top.equals(&bottom))
}

pub fn triangle(p: &Profunctor, q: &Profunctor) -> Result<bool> {
    let id = Profunctor::identity(p.target());
    let lhs = associator(p, &id, q)?.then(&Span::horizontal(&Span::identity(p), &left_unitor(q)?)?)?;
    let rhs = Span::horizontal(&right_unitor(p)?, &Span::identity(q))?;
    Ok(lhs.equals(&rhs))
}

/// Both zigzags for `P` are identities.
pub fn snakes(p: &Profunctor) -> Result<bool> {
    let ps = p.star();
    let first = right_unitor(p)?
        .dagger()
        .then(&Span::horizontal(&Span::identity(p), &cup(p)?)?)?
        .then(&associator(p, &ps, p)?.dagger())?
        .then(&Span::horizontal(&cap(p)?, &Span::identity(p))?)?
        .then(&left_unitor(p)?)?;
    let second = left_unitor(&ps)?
        .dagger()
        .then(&Span::horizontal(&cup(p)?, &Span::identity(&ps))?)?
        .then(&associator(&ps, p, &ps)?)?
        .then(&Span::horizontal(&Span::identity(&ps), &cap(p)?)?)?
        .then(&right_unitor(&ps)?)?;
    Ok(first.is_identity() && second.is_identity())
}

/// Run `instances` random instances seeded from `seed`.
pub fn run_law_suite(seed: u64, instances: usize) -> Result<LawReport> {
    let mut rep = LawReport { instances, ..LawReport::default() };
    for i in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let gs: Vec<_> = (0..5).map(|_| random::groupoid(&mut rng, MAX_OBJECTS, MAX_ORDER)).collect();
        let (a, b, c) = (&gs[0], &gs[1], &gs[2]);
        let s: Vec<_> = (0..3).map(|_| random::profunctor(&mut rng, a, b, 2)).collect();
        let t: Vec<_> = (0..3).map(|_| random::profunctor(&mut rng, b, c, 2)).collect();
        let sigma = random::span(&mut rng, &s[0], &s[1], 2)?;
        let mu = random::span(&mut rng, &s[1], &s[2], 2)?;
        let tau = random::span(&mut rng, &t[0], &t[1], 2)?;
        let nu = random::span(&mut rng, &t[1], &t[2], 2)?;
        rep.interchange += interchange(&sigma, &mu, &tau, &nu)? as usize;
        rep.horizontal_reference +=
            Span::horizontal(&sigma, &tau)?.equals(&Span::horizontal_reference(&sigma, &tau)?) as usize;
        rep.well_defined += horizontal_well_defined(&sigma, &tau)? as usize;
        rep.vertical_units += (Span::identity(&s[0]).then(&sigma)?.equals(&sigma)
            && sigma.then(&Span::identity(&s[1]))?.equals(&sigma)) as usize;
        rep.dagger += dagger_laws(&sigma, &mu, &tau)? as usize;
        let chain: Vec<_> = (0..4).map(|k| random::profunctor(&mut rng, &gs[k], &gs[k + 1], 1)).collect();
        rep.pentagon += pentagon(&chain[0], &chain[1], &chain[2], &chain[3])? as usize;
        rep.triangle += triangle(&s[0], &t[0])? as usize;
        rep.snake += snakes(&s[0])? as usize;
        let st = Profunctor::compose(&s[0], &t[0])?;
        let pqr = Profunctor::compose(&Profunctor::compose(&chain[0], &chain[1])?, &chain[2])?;
        rep.freeness += (st.is_free()
            && pqr.is_free()
            && crate::quantize::stabilizers_trivial(&st)
            && crate::quantize::stabilizers_trivial(&pqr)) as usize;
    }
    Ok(rep)
}
