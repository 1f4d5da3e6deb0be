//! String-diagram builder: a row of wires and the span accumulated so far.

use crate::error::{Error, Result};
use crate::gaf::pivotal::reassociate;
use crate::gaf::profunctor::Profunctor;
use crate::gaf::span::Span;
use crate::groupoid::Groupoid;

/// Left-nested composite of `wires`, or `1_base` when empty.
pub fn nest(wires: &[Profunctor], base: &Groupoid) -> Result<Profunctor> {
    let mut it = wires.iter();
    let Some(first) = it.next() else {
        return Ok(Profunctor::identity(base));
    };
    if first.source() != base {
        return Err(Error::Engine(format!("wire {} does not start at the boundary region", first.shape())));
    }
    let mut acc = first.clone();
    for w in it {
        acc = Profunctor::compose(&acc, w)?;
    }
    Ok(acc)
}

/// Whisker `sigma` with identities: `1_left ; sigma ; 1_right`.
pub fn whisker(left: &Profunctor, sigma: &Span, right: &Profunctor) -> Result<Span> {
    let inner = Span::horizontal(&Span::identity(left), sigma)?;
    Span::horizontal(&inner, &Span::identity(right))
}

#[derive(Clone, Debug)]
pub struct Diagram {
    base: Groupoid,
    wires: Vec<Profunctor>,
    span: Span,
}

impl Diagram {
    /// The identity diagram on `wires`, whose leftmost region is `base`.
    pub fn new(wires: Vec<Profunctor>, base: &Groupoid) -> Result<Self> {
        let n = nest(&wires, base)?;
        Ok(Diagram { base: base.clone(), span: Span::identity(&n), wires })
    }

    /// Continue from an existing span whose target has the factors `wires`.
    pub fn from_span(span: Span, wires: Vec<Profunctor>, base: &Groupoid) -> Result<Self> {
        let n = nest(&wires, base)?;
        let iso = reassociate(span.target(), &n)?;
        Ok(Diagram { base: base.clone(), span: span.then(&iso)?, wires })
    }

    pub fn wires(&self) -> &[Profunctor] {
        &self.wires
    }

    pub fn span(&self) -> &Span {
        &self.span
    }

    pub fn into_span(self) -> Span {
        self.span
    }

    /// Groupoid of the region left of wire `i`.
    pub fn region(&self, i: usize) -> &Groupoid {
        if i == 0 {
            &self.base
        } else {
            self.wires[i - 1].target()
        }
    }

    /// Replace wires `pos..pos+len` by `new_wires` through `sigma`.
    pub fn apply(&mut self, pos: usize, len: usize, sigma: &Span, new_wires: Vec<Profunctor>) -> Result<()> {
        if pos + len > self.wires.len() {
            return Err(Error::Engine(format!("window {pos}..{} outside {} wires", pos + len, self.wires.len())));
        }
        let g_pos = self.region(pos).clone();
        let g_end = self.region(pos + len).clone();
        let end_of_new = new_wires.last().map(|w| w.target().clone()).unwrap_or_else(|| g_pos.clone());
        if end_of_new != g_end {
            return Err(Error::Engine("replacement wires end in the wrong region".into()));
        }
        let win = nest(&self.wires[pos..pos + len], &g_pos)?;
        let win_new = nest(&new_wires, &g_pos)?;
        let local = reassociate(&win, sigma.source())?.then(sigma)?.then(&reassociate(sigma.target(), &win_new)?)?;
        let left = nest(&self.wires[..pos], &self.base)?;
        let right = nest(&self.wires[pos + len..], &g_end)?;
        let whisk = whisker(&left, &local, &right)?;

        let mut wires = self.wires[..pos].to_vec();
        wires.extend(new_wires);
        wires.extend_from_slice(&self.wires[pos + len..]);
        let cur = nest(&self.wires, &self.base)?;
        let next = nest(&wires, &self.base)?;
        self.span = self
            .span
            .then(&reassociate(&cur, whisk.source())?)?
            .then(&whisk)?
            .then(&reassociate(whisk.target(), &next)?)?;
        self.wires = wires;
        Ok(())
    }

    /// Permute blocks of wires; every block must be a `1 ↛ 1` composite.
    /// `blocks` gives the block lengths and `order` the new block order.
    pub fn permute_blocks(&mut self, blocks: &[usize], order: &[usize]) -> Result<()> {
        if blocks.iter().sum::<usize>() != self.wires.len() || order.len() != blocks.len() {
            return Err(Error::Engine("block layout does not cover the wires".into()));
        }
        let mut starts = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for &b in blocks {
            starts.push(acc);
            acc += b;
        }
        let mut wires = Vec::with_capacity(self.wires.len());
        for &k in order {
            let block = &self.wires[starts[k]..starts[k] + blocks[k]];
            if block.is_empty() || !block[0].source().is_discrete() || block[0].source().object_count() != 1 {
                return Err(Error::Engine("blocks must be closed 1 ↛ 1 composites".into()));
            }
            wires.extend_from_slice(block);
        }
        let cur = nest(&self.wires, &self.base)?;
        let next = nest(&wires, &self.base)?;
        let perm = crate::gaf::profunctor::block_permutation(&cur, &next, blocks, order)?;
        self.span = self.span.then(&perm)?;
        self.wires = wires;
        Ok(())
    }
}
