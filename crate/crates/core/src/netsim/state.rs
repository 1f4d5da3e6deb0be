use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::groupoid::Morphism;

/// The value held by one system in one configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Value {
    Morph(Morphism),
    Dit(usize),
}

impl Value {
    pub fn as_morphism(&self) -> Option<Morphism> {
        match self {
            Value::Morph(m) => Some(*m),
            Value::Dit(_) => None,
        }
    }

    pub fn as_dit(&self) -> Option<usize> {
        match self {
            Value::Dit(d) => Some(*d),
            Value::Morph(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Morph(m) => write!(f, "{m}"),
            Value::Dit(d) => write!(f, "[{d}]"),
        }
    }
}

pub type Configuration = Vec<Value>;

/// A finite multiset of configurations with arbitrary-precision
/// multiplicities. Zero multiplicities are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultisetState {
    entries: BTreeMap<Configuration, BigUint>,
}

impl MultisetState {
    pub fn empty() -> Self {
        MultisetState::default()
    }

    /// The state of an empty registry: the single empty configuration.
    pub fn unit() -> Self {
        MultisetState::singleton(Vec::new())
    }

    pub fn singleton(cfg: Configuration) -> Self {
        let mut s = MultisetState::empty();
        s.add(cfg, BigUint::one());
        s
    }

    pub fn add(&mut self, cfg: Configuration, mult: BigUint) {
        if mult.is_zero() {
            return;
        }
        *self.entries.entry(cfg).or_default() += mult;
    }

    pub fn get(&self, cfg: &[Value]) -> BigUint {
        self.entries.get(cfg).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Configuration, &BigUint)> {
        self.entries.iter()
    }

    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    /// Replace every configuration by a weighted list of successors and merge
    /// equal results.
    pub fn flat_map<F>(&self, mut f: F) -> MultisetState
    where
        F: FnMut(&Configuration) -> Vec<(Configuration, u64)>,
    {
        let mut out = MultisetState::empty();
        for (cfg, m) in &self.entries {
            for (next, w) in f(cfg) {
                out.add(next, m * BigUint::from(w));
            }
        }
        out
    }

    pub fn map<F>(&self, mut f: F) -> MultisetState
    where
        F: FnMut(&Configuration) -> Configuration,
    {
        self.flat_map(|c| vec![(f(c), 1)])
    }

    /// Keep only the given positions, summing multiplicities.
    pub fn marginal(&self, positions: &[usize]) -> MultisetState {
        self.map(|c| positions.iter().map(|&i| c[i]).collect())
    }

    pub fn scaled(&self, k: &BigUint) -> MultisetState {
        let mut out = MultisetState::empty();
        for (c, m) in &self.entries {
            out.add(c.clone(), m * k);
        }
        out
    }
}

impl FromIterator<(Configuration, BigUint)> for MultisetState {
    fn from_iter<I: IntoIterator<Item = (Configuration, BigUint)>>(iter: I) -> Self {
        let mut s = MultisetState::empty();
        for (c, m) in iter {
            s.add(c, m);
        }
        s
    }
}

impl fmt::Display for MultisetState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (i, (cfg, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if !m.is_one() {
                write!(f, "{m}")?;
            }
            if cfg.is_empty() {
                write!(f, "()")?;
            }
            for v in cfg {
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

/// `Some(k)` when `x = k * y` for a single positive rational `k`.
pub fn states_equal_up_to_scalar(x: &MultisetState, y: &MultisetState) -> Option<BigRational> {
    if x.len() != y.len() {
        return None;
    }
    if x.is_empty() {
        return Some(BigRational::one());
    }
    let mut ratio: Option<BigRational> = None;
    for ((cx, mx), (cy, my)) in x.entries.iter().zip(y.entries.iter()) {
        if cx != cy {
            return None;
        }
        let r = BigRational::new(mx.clone().into(), my.clone().into());
        match &ratio {
            None => ratio = Some(r),
            Some(k) if *k == r => {}
            Some(_) => return None,
        }
    }
    ratio
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: usize, k: usize) -> Value {
        Value::Morph(Morphism::new(a, k))
    }

    #[test]
    fn display_format() {
        let mut s = MultisetState::empty();
        s.add(vec![g(0, 0), Value::Dit(1)], BigUint::from(2u32));
        s.add(vec![g(1, 1), Value::Dit(0)], BigUint::one());
        assert_eq!(s.to_string(), "2(0,0)[1] + (1,1)[0]");
        assert_eq!(MultisetState::unit().to_string(), "()");
    }

    #[test]
    fn merges_equal_configurations() {
        let s: MultisetState =
            [(vec![Value::Dit(0)], BigUint::one()), (vec![Value::Dit(0)], BigUint::from(3u32))].into_iter().collect();
        assert_eq!(s.len(), 1);
        assert_eq!(s.get(&[Value::Dit(0)]), BigUint::from(4u32));
    }

    #[test]
    fn scalar_comparison() {
        let a: MultisetState = [(vec![Value::Dit(0)], BigUint::from(2u32)), (vec![Value::Dit(1)], BigUint::from(4u32))]
            .into_iter()
            .collect();
        let b: MultisetState =
            [(vec![Value::Dit(0)], BigUint::one()), (vec![Value::Dit(1)], BigUint::from(2u32))].into_iter().collect();
        assert_eq!(states_equal_up_to_scalar(&a, &b), Some(BigRational::from_integer(2.into())));
        let c: MultisetState =
            [(vec![Value::Dit(0)], BigUint::one()), (vec![Value::Dit(1)], BigUint::one())].into_iter().collect();
        assert_eq!(states_equal_up_to_scalar(&a, &c), None);
    }
}
