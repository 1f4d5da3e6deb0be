//! Finite groups, skeletal groupoids and groudits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group given by its multiplication table. Element `0` need not be
/// the identity; the identity is located when the table is validated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl Group {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("row {i} contains {bad}, outside 0..{n}")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity) {
                Some(y) => inverse[x] = y,
                None => return Err(Error::InvalidGroup(format!("element {x} has no inverse"))),
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({x}, {y}, {z})")));
                    }
                }
            }
        }
        Ok(Group { table, identity, inverse })
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Group { table, identity: 0, inverse: (0..n).map(|i| (n - i) % n).collect() }
    }

    pub fn trivial() -> Self {
        Group::cyclic(1)
    }

    /// Symmetric group on three letters, elements in lexicographic order of
    /// their one-line notation.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms.iter().map(|p| perms.iter().map(|q| idx([p[q[0]], p[q[1]], p[q[2]]])).collect()).collect();
        Group::from_table(table).expect("S3 table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }
}

/// A morphism of a skeletal groupoid: an element of the automorphism group of
/// `object`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Morphism {
    pub object: usize,
    pub element: usize,
}

impl Morphism {
    pub fn new(object: usize, element: usize) -> Self {
        Morphism { object, element }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.object, self.element)
    }
}

/// A finite skeletal groupoid: one automorphism group per object and no
/// morphisms between distinct objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Groupoid {
    groups: Vec<Group>,
    offsets: Vec<usize>,
}

impl Groupoid {
    pub fn new(groups: Vec<Group>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::Validation("a groupoid needs at least one object".into()));
        }
        let mut offsets = Vec::with_capacity(groups.len() + 1);
        let mut acc = 0;
        for g in &groups {
            offsets.push(acc);
            acc += g.order();
        }
        offsets.push(acc);
        Ok(Groupoid { groups, offsets })
    }

    /// The discrete groupoid on `n` objects.
    pub fn discrete(n: usize) -> Self {
        Groupoid::new(vec![Group::trivial(); n]).expect("n > 0")
    }

    /// The terminal groupoid: one object, trivial group.
    pub fn unit() -> Self {
        Groupoid::discrete(1)
    }

    /// Disjoint union of `objects` copies of `Z_order`.
    pub fn cyclic_union(objects: usize, order: usize) -> Self {
        Groupoid::new(vec![Group::cyclic(order); objects]).expect("objects > 0")
    }

    pub fn object_count(&self) -> usize {
        self.groups.len()
    }

    pub fn group(&self, a: usize) -> &Group {
        &self.groups[a]
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn aut_order(&self, a: usize) -> usize {
        self.groups[a].order()
    }

    pub fn mor_count(&self) -> usize {
        self.offsets[self.groups.len()]
    }

    pub fn is_discrete(&self) -> bool {
        self.groups.iter().all(|g| g.order() == 1)
    }

    /// Object-major flat index of a morphism.
    #[inline]
    pub fn flat_index(&self, m: Morphism) -> usize {
        self.offsets[m.object] + m.element
    }

    pub fn morphism_at(&self, idx: usize) -> Morphism {
        let object = self.offsets.partition_point(|&o| o <= idx) - 1;
        Morphism { object, element: idx - self.offsets[object] }
    }

    pub fn morphisms(&self) -> impl Iterator<Item = Morphism> + '_ {
        self.groups.iter().enumerate().flat_map(|(a, g)| (0..g.order()).map(move |k| Morphism::new(a, k)))
    }

    pub fn identity(&self, a: usize) -> Morphism {
        Morphism::new(a, self.groups[a].identity())
    }

    pub fn inverse(&self, m: Morphism) -> Morphism {
        Morphism::new(m.object, self.groups[m.object].inv(m.element))
    }

    /// `f ∘ g`, defined only when both live on the same object.
    pub fn compose(&self, f: Morphism, g: Morphism) -> Result<Morphism> {
        if f.object != g.object {
            return Err(Error::NotComposable(f.object, g.object));
        }
        Ok(Morphism::new(f.object, self.groups[f.object].mul(f.element, g.element)))
    }

    pub fn contains(&self, m: Morphism) -> bool {
        m.object < self.object_count() && m.element < self.aut_order(m.object)
    }
}

/// Finite discrete set of size `n`; the logical content of a groudit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dit {
    size: usize,
}

impl Dit {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Validation("a dit needs at least one value".into()));
        }
        Ok(Dit { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn groupoid(&self) -> Groupoid {
        Groupoid::discrete(self.size)
    }
}

/// A groupoid together with balancers `sigma` and `tau`. `sigma[a][k]` is the
/// object that element `k` of `Aut(a)` is sent to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Groudit {
    groupoid: Groupoid,
    sigma: Vec<Vec<usize>>,
    tau: Vec<Vec<usize>>,
    sigma_inv: Vec<Vec<usize>>,
    tau_inv: Vec<Vec<usize>>,
}

fn invert_balancer(name: &str, groupoid: &Groupoid, bal: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let n = groupoid.object_count();
    if bal.len() != n {
        return Err(Error::Validation(format!("{name} has {} rows for {n} objects", bal.len())));
    }
    let mut out = Vec::with_capacity(n);
    for (a, row) in bal.iter().enumerate() {
        if row.len() != groupoid.aut_order(a) || row.len() != n {
            return Err(Error::Validation(format!(
                "{name}_{a} must be a bijection Aut({a}) -> Ob: |Aut({a})| = {}, |Ob| = {n}, row length {}",
                groupoid.aut_order(a),
                row.len()
            )));
        }
        let mut inv = vec![usize::MAX; n];
        for (k, &b) in row.iter().enumerate() {
            if b >= n || inv[b] != usize::MAX {
                return Err(Error::Validation(format!("{name}_{a} is not a bijection")));
            }
            inv[b] = k;
        }
        out.push(inv);
    }
    Ok(out)
}

impl Groudit {
    pub fn new(groupoid: Groupoid, sigma: Vec<Vec<usize>>, tau: Vec<Vec<usize>>) -> Result<Self> {
        let sigma_inv = invert_balancer("sigma", &groupoid, &sigma)?;
        let tau_inv = invert_balancer("tau", &groupoid, &tau)?;
        Ok(Groudit { groupoid, sigma, tau, sigma_inv, tau_inv })
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn n(&self) -> usize {
        self.groupoid.object_count()
    }

    #[inline]
    pub fn sigma(&self, m: Morphism) -> usize {
        self.sigma[m.object][m.element]
    }

    #[inline]
    pub fn tau(&self, m: Morphism) -> usize {
        self.tau[m.object][m.element]
    }

    /// The element of `Aut(a)` that `sigma_a` sends to `b`.
    #[inline]
    pub fn sigma_inv(&self, a: usize, b: usize) -> Morphism {
        Morphism::new(a, self.sigma_inv[a][b])
    }

    #[inline]
    pub fn tau_inv(&self, a: usize, b: usize) -> Morphism {
        Morphism::new(a, self.tau_inv[a][b])
    }

    pub fn sigma_table(&self) -> &[Vec<usize>] {
        &self.sigma
    }

    pub fn tau_table(&self) -> &[Vec<usize>] {
        &self.tau
    }

    /// The biunitary permutation `F(g) = tau^-1_{sigma(g)}(s(g))`.
    pub fn f(&self, g: Morphism) -> Morphism {
        let b = self.sigma(g);
        self.tau_inv(b, g.object)
    }

    pub fn f_inv(&self, h: Morphism) -> Morphism {
        let a = self.tau(h);
        self.sigma_inv(a, h.object)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GrouditFile = serde_json::from_str(text).map_err(Error::parse)?;
        file.build()
    }

    pub fn to_json(&self) -> String {
        let file = GrouditFile {
            cyclic: None,
            objects: Some(self.n()),
            groups: Some(self.groupoid.groups().iter().map(|g| g.table().to_vec()).collect()),
            sigma: Some(self.sigma.clone()),
            tau: Some(self.tau.clone()),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }
}

/// On-disk form of a groupoid: `{"objects": n, "order": k}` for `n` copies of
/// `Z_k`, or `{"groups": [table, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<Vec<Vec<usize>>>>,
}

impl GroupoidFile {
    pub fn build(self) -> Result<Groupoid> {
        match (self.objects, self.order, self.groups) {
            (Some(n), Some(k), None) if n > 0 && k > 0 => Ok(Groupoid::cyclic_union(n, k)),
            (_, None, Some(groups)) => {
                let groups = groups.into_iter().map(Group::from_table).collect::<Result<Vec<_>>>()?;
                let g = Groupoid::new(groups)?;
                match self.objects {
                    Some(n) if n != g.object_count() => {
                        Err(Error::Validation(format!("`objects` is {n} but {} groups are given", g.object_count())))
                    }
                    _ => Ok(g),
                }
            }
            _ => Err(Error::Validation("a groupoid needs positive `objects` and `order`, or `groups`".into())),
        }
    }
}

impl Groupoid {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupoidFile = serde_json::from_str(text).map_err(Error::parse)?;
        file.build()
    }
}

/// On-disk form of a groudit. `{"cyclic": n}` is shorthand for `n` copies of
/// `Z_n` with identity balancers.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GrouditFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    cyclic: Option<usize>,
    objects: Option<usize>,
    groups: Option<Vec<Vec<Vec<usize>>>>,
    sigma: Option<Vec<Vec<usize>>>,
    tau: Option<Vec<Vec<usize>>>,
}

impl GrouditFile {
    fn build(self) -> Result<Groudit> {
        if let Some(n) = self.cyclic {
            if n == 0 {
                return Err(Error::Validation("cyclic order must be positive".into()));
            }
            let sigma = self.sigma.unwrap_or_else(|| identity_balancer(n));
            let tau = self.tau.unwrap_or_else(|| identity_balancer(n));
            return make_cyclic_groudit(n, sigma, tau);
        }
        let groups = self.groups.ok_or_else(|| Error::Validation("missing `groups`".into()))?;
        if let Some(n) = self.objects {
            if n != groups.len() {
                return Err(Error::Validation(format!("`objects` is {n} but {} group tables are given", groups.len())));
            }
        }
        let groups = groups.into_iter().map(Group::from_table).collect::<Result<Vec<_>>>()?;
        let groupoid = Groupoid::new(groups)?;
        let n = groupoid.object_count();
        let sigma = self.sigma.unwrap_or_else(|| identity_balancer(n));
        let tau = self.tau.unwrap_or_else(|| identity_balancer(n));
        Groudit::new(groupoid, sigma, tau)
    }
}

fn identity_balancer(n: usize) -> Vec<Vec<usize>> {
    vec![(0..n).collect(); n]
}

/// The groubit: two objects with automorphism group `Z_2`, identity balancers.
pub fn make_groubit() -> Groudit {
    make_cyclic_groudit(2, identity_balancer(2), identity_balancer(2)).expect("groubit is valid")
}

/// `n` copies of `Z_n` with the given balancers.
pub fn make_cyclic_groudit(n: usize, sigma: Vec<Vec<usize>>, tau: Vec<Vec<usize>>) -> Result<Groudit> {
    Groudit::new(Groupoid::cyclic_union(n, n), sigma, tau)
}

/// `n` copies of `Z_n` with identity balancers.
pub fn make_cyclic_identity(n: usize) -> Groudit {
    make_cyclic_groudit(n, identity_balancer(n), identity_balancer(n)).expect("n > 0")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_tables() {
        let z3 = Group::cyclic(3);
        assert_eq!(z3.mul(2, 2), 1);
        assert_eq!(z3.inv(1), 2);
        assert_eq!(z3.identity(), 0);
    }

    #[test]
    fn rejects_non_group_tables() {
        assert!(matches!(Group::from_table(vec![vec![0, 1], vec![1, 1]]), Err(Error::InvalidGroup(_))));
        assert!(matches!(Group::from_table(vec![vec![0, 1]]), Err(Error::InvalidGroup(_))));
        assert!(Group::from_table(vec![]).is_err());
    }

    #[test]
    fn identity_need_not_be_zero() {
        let g = Group::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.identity(), 0);
        let h = Group::from_table(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(h.identity(), 1);
        assert_eq!(h.inv(0), 0);
    }

    #[test]
    fn s3_is_nonabelian() {
        let s3 = Group::symmetric3();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
    }

    #[test]
    fn composition_across_objects_fails() {
        let g = Groupoid::cyclic_union(2, 2);
        let r = g.compose(Morphism::new(0, 1), Morphism::new(1, 1));
        assert!(matches!(r, Err(Error::NotComposable(0, 1))));
        assert_eq!(g.compose(Morphism::new(1, 1), Morphism::new(1, 1)).unwrap(), Morphism::new(1, 0));
    }

    #[test]
    fn flat_index_round_trip() {
        let g = Groupoid::new(vec![Group::cyclic(2), Group::cyclic(3), Group::trivial()]).unwrap();
        assert_eq!(g.mor_count(), 6);
        for (i, m) in g.morphisms().enumerate() {
            assert_eq!(g.flat_index(m), i);
            assert_eq!(g.morphism_at(i), m);
        }
    }

    #[test]
    fn balancer_size_mismatch() {
        let g = Groupoid::cyclic_union(2, 3);
        let r = Groudit::new(g, vec![vec![0, 1, 2]; 2], vec![vec![0, 1, 2]; 2]);
        assert!(matches!(r, Err(Error::Validation(_))));
    }

    #[test]
    fn groubit_f_is_the_swap() {
        let d = make_groubit();
        for a in 0..2 {
            for k in 0..2 {
                assert_eq!(d.f(Morphism::new(a, k)), Morphism::new(k, a));
                assert_eq!(d.f_inv(d.f(Morphism::new(a, k))), Morphism::new(a, k));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let d =
            make_cyclic_groudit(3, vec![vec![1, 2, 0], vec![0, 1, 2], vec![2, 0, 1]], vec![vec![0, 2, 1]; 3]).unwrap();
        let back = Groudit::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        let short = Groudit::from_json(r#"{"cyclic": 2}"#).unwrap();
        assert_eq!(short, make_groubit());
    }

    #[test]
    fn json_errors_carry_position() {
        match Groudit::from_json("{\n  \"cyclic\": ,\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(Groudit::from_json(r#"{"groups": [[[0,1],[1,1]]]}"#), Err(Error::InvalidGroup(_))));
    }
}
