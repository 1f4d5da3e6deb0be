//! Biunitary permutations of `Mor(G)` and their correspondence with balancer
//! pairs.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::groupoid::{Groudit, Groupoid, GroupoidFile, Morphism};

/// Largest `|Mor|` that [`enumerate_biunitaries`] accepts by default.
pub const DEFAULT_ENUM_GUARD: usize = 10;

/// Which balancer plays the role of `epsilon` in the correspondence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BalancerOrdering {
    /// `epsilon = sigma`.
    #[default]
    SigmaEpsilon,
    /// `epsilon = tau`, the two balancers trade places.
    TauEpsilon,
}

/// A permutation of `Mor(G)` in flat-index form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Biunitary {
    groupoid: Groupoid,
    perm: Vec<usize>,
}

/// A pair `(a, b)` with `|F(Aut a) ∩ Aut b| != 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub a: usize,
    pub b: usize,
    pub size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BiunitaryCheck {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Biunitary {
    pub fn new(groupoid: Groupoid, perm: Vec<usize>) -> Result<Self> {
        validate_permutation(&groupoid, &perm)?;
        Ok(Biunitary { groupoid, perm })
    }

    /// Parse `{"groupoid": {...}, "perm": [...]}`; the permutation is over
    /// the object-major morphism order.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct File {
            groupoid: GroupoidFile,
            perm: Vec<usize>,
        }
        let file: File = serde_json::from_str(text).map_err(Error::parse)?;
        Biunitary::new(file.groupoid.build()?, file.perm)
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, m: Morphism) -> Morphism {
        self.groupoid.morphism_at(self.perm[self.groupoid.flat_index(m)])
    }

    pub fn inverse(&self) -> Biunitary {
        let mut inv = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            inv[j] = i;
        }
        Biunitary { groupoid: self.groupoid.clone(), perm: inv }
    }

    pub fn check(&self) -> BiunitaryCheck {
        check_perm(&self.groupoid, &self.perm)
    }
}

fn validate_permutation(g: &Groupoid, perm: &[usize]) -> Result<()> {
    let n = g.mor_count();
    if perm.len() != n {
        return Err(Error::Validation(format!("map has {} entries but |Mor| = {n}", perm.len())));
    }
    let mut seen = vec![false; n];
    for &j in perm {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(Error::Validation("map is not a bijection of Mor".into()));
        }
    }
    Ok(())
}

fn intersection_sizes(g: &Groupoid, perm: &[usize], a: usize, counts: &mut [usize]) {
    counts.iter_mut().for_each(|c| *c = 0);
    for k in 0..g.aut_order(a) {
        let img = g.morphism_at(perm[g.flat_index(Morphism::new(a, k))]);
        counts[img.object] += 1;
    }
}

fn check_perm(g: &Groupoid, perm: &[usize]) -> BiunitaryCheck {
    let n = g.object_count();
    let mut counts = vec![0; n];
    let mut first_other = None;
    for a in 0..n {
        intersection_sizes(g, perm, a, &mut counts);
        for (b, &size) in counts.iter().enumerate() {
            if size == 0 {
                return BiunitaryCheck { holds: false, witness: Some(Witness { a, b, size }) };
            }
            if size != 1 && first_other.is_none() {
                first_other = Some(Witness { a, b, size });
            }
        }
    }
    BiunitaryCheck { holds: first_other.is_none(), witness: first_other }
}

/// Decide whether a bijection of `Mor(G)` (flat indices) is biunitary. An
/// empty intersection is reported in preference to an oversized one.
pub fn check_biunitary(g: &Groupoid, perm: &[usize]) -> Result<BiunitaryCheck> {
    validate_permutation(g, perm)?;
    Ok(check_perm(g, perm))
}

fn fast_is_biunitary(g: &Groupoid, perm: &[usize], counts: &mut [usize]) -> bool {
    let n = g.object_count();
    for a in 0..n {
        intersection_sizes(g, perm, a, counts);
        if counts.iter().any(|&c| c != 1) {
            return false;
        }
    }
    true
}

pub fn balancers_to_biunitary(d: &Groudit, ordering: BalancerOrdering) -> Biunitary {
    let g = d.groupoid();
    let perm = g
        .morphisms()
        .map(|m| {
            let img = match ordering {
                BalancerOrdering::SigmaEpsilon => d.f(m),
                BalancerOrdering::TauEpsilon => {
                    let b = d.tau(m);
                    d.sigma_inv(b, m.object)
                }
            };
            g.flat_index(img)
        })
        .collect();
    Biunitary { groupoid: g.clone(), perm }
}

/// Recover the balancer pair of a biunitary: `epsilon_a(g) = s(F(g))` and the
/// partner balancer is `s(F^-1(g))`.
pub fn biunitary_to_balancers(f: &Biunitary, ordering: BalancerOrdering) -> Result<Groudit> {
    let check = f.check();
    if !check.holds {
        let w = check.witness.expect("failing check has a witness");
        return Err(Error::Validation(format!("not biunitary: |F(Aut {}) ∩ Aut {}| = {}", w.a, w.b, w.size)));
    }
    let g = f.groupoid();
    let inv = f.inverse();
    let table = |h: &dyn Fn(Morphism) -> usize| -> Vec<Vec<usize>> {
        (0..g.object_count()).map(|a| (0..g.aut_order(a)).map(|k| h(Morphism::new(a, k))).collect()).collect()
    };
    let eps = table(&|m| f.apply(m).object);
    let other = table(&|m| inv.apply(m).object);
    let (sigma, tau) = match ordering {
        BalancerOrdering::SigmaEpsilon => (eps, other),
        BalancerOrdering::TauEpsilon => (other, eps),
    };
    Groudit::new(g.clone(), sigma, tau)
}

/// Every biunitary of `G`, permutations taken in lexicographic order of their
/// flat-index form.
pub fn enumerate_biunitaries(g: &Groupoid, guard: usize) -> Result<Vec<Biunitary>> {
    let size = g.mor_count();
    if size > guard {
        return Err(Error::Guard { size, guard });
    }
    let mut counts = vec![0; g.object_count()];
    Ok((0..size)
        .permutations(size)
        .filter(|p| fast_is_biunitary(g, p, &mut counts))
        .map(|perm| Biunitary { groupoid: g.clone(), perm })
        .collect())
}

/// Every balancer pair of `G`; empty when some `|Aut(a)| != |Ob|`.
pub fn enumerate_balancer_pairs(g: &Groupoid) -> Vec<Groudit> {
    let n = g.object_count();
    if (0..n).any(|a| g.aut_order(a) != n) {
        return Vec::new();
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let tables: Vec<Vec<Vec<usize>>> =
        std::iter::repeat(perms.iter().cloned()).take(n).multi_cartesian_product().collect();
    let mut out = Vec::with_capacity(tables.len() * tables.len());
    for s in &tables {
        for t in &tables {
            out.push(Groudit::new(g.clone(), s.clone(), t.clone()).expect("bijective rows"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{make_cyclic_identity, make_groubit};

    #[test]
    fn identity_on_groubit_fails_with_empty_witness() {
        let g = make_groubit().groupoid().clone();
        let check = check_biunitary(&g, &[0, 1, 2, 3]).unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, Some(Witness { a: 0, b: 1, size: 0 }));
    }

    #[test]
    fn swap_passes() {
        let d = make_groubit();
        let f = balancers_to_biunitary(&d, BalancerOrdering::SigmaEpsilon);
        assert_eq!(f.perm(), &[0, 2, 1, 3]);
        assert!(f.check().holds);
    }

    #[test]
    fn non_bijection_is_rejected() {
        let g = make_groubit().groupoid().clone();
        assert!(matches!(check_biunitary(&g, &[0, 0, 1, 2]), Err(Error::Validation(_))));
        assert!(matches!(check_biunitary(&g, &[0, 1, 2]), Err(Error::Validation(_))));
    }

    #[test]
    fn guard_refuses_large_groupoids() {
        let g = Groupoid::cyclic_union(4, 4);
        assert!(matches!(enumerate_biunitaries(&g, DEFAULT_ENUM_GUARD), Err(Error::Guard { size: 16, guard: 10 })));
    }

    #[test]
    fn groubit_count() {
        let g = make_groubit().groupoid().clone();
        assert_eq!(enumerate_biunitaries(&g, DEFAULT_ENUM_GUARD).unwrap().len(), 16);
        assert_eq!(enumerate_balancer_pairs(&g).len(), 16);
    }

    #[test]
    fn tau_epsilon_round_trip() {
        let d = make_cyclic_identity(3);
        for ord in [BalancerOrdering::SigmaEpsilon, BalancerOrdering::TauEpsilon] {
            let f = balancers_to_biunitary(&d, ord);
            assert_eq!(biunitary_to_balancers(&f, ord).unwrap(), d);
        }
    }
}
