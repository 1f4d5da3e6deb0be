//! Quantization: groupoid algebras, profunctors as complex bimodules and
//! spans as integer matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaf::{Profunctor, Span};
use crate::groupoid::{Groupoid, Morphism};

pub type CMatrix = DMatrix<Complex64>;

/// The convolution algebra `ℂG` with basis `Mor(G)`.
#[derive(Clone, Debug)]
pub struct GroupoidAlgebra {
    groupoid: Groupoid,
    basis: Vec<Morphism>,
}

impl GroupoidAlgebra {
    pub fn new(g: &Groupoid) -> Self {
        GroupoidAlgebra { groupoid: g.clone(), basis: g.morphisms().collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Morphism] {
        &self.basis
    }

    /// `f ⋆ g = fg` when composable, otherwise zero (`None`).
    pub fn product(&self, f: Morphism, g: Morphism) -> Option<Morphism> {
        self.groupoid.compose(f, g).ok()
    }

    pub fn star(&self, f: Morphism) -> Morphism {
        self.groupoid.inverse(f)
    }

    /// Product of two vectors in the basis order.
    pub fn multiply(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (i, f) in self.basis.iter().enumerate() {
            for (j, g) in self.basis.iter().enumerate() {
                if let Some(h) = self.product(*f, *g) {
                    out[self.groupoid.flat_index(h)] += x[i] * y[j];
                }
            }
        }
        out
    }

    pub fn is_associative(&self) -> bool {
        let b = &self.basis;
        b.iter().all(|&f| {
            b.iter().all(|&g| {
                b.iter().all(|&h| {
                    let l = self.product(f, g).and_then(|fg| self.product(fg, h));
                    let r = self.product(g, h).and_then(|gh| self.product(f, gh));
                    l == r
                })
            })
        })
    }
}

/// Offsets of the cells `(a, b)` in the flat carrier order.
fn offsets(p: &Profunctor) -> Vec<Vec<usize>> {
    let (na, nb) = (p.source().object_count(), p.target().object_count());
    let mut out = vec![vec![0; nb]; na];
    let mut acc = 0;
    for (a, row) in out.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            *slot = acc;
            acc += p.cell_len(a, b);
        }
    }
    out
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `Q(σ)`, with entry `(q, p) = σ(p, q)` over the flat carriers.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantizedMap {
    pub matrix: CMatrix,
}

impl QuantizedMap {
    pub fn is_permutation(&self) -> bool {
        let m = &self.matrix;
        let zero_one = m.iter().all(|z| z.im == 0.0 && (z.re == 0.0 || z.re == 1.0));
        let rows = (0..m.nrows()).all(|i| m.row(i).iter().filter(|z| z.re == 1.0).count() == 1);
        let cols = (0..m.ncols()).all(|j| m.column(j).iter().filter(|z| z.re == 1.0).count() == 1);
        m.is_square() && zero_one && rows && cols
    }

    pub fn is_unitary(&self) -> bool {
        let m = &self.matrix;
        m.is_square() && (m.adjoint() * m - CMatrix::identity(m.nrows(), m.ncols())).norm() == 0.0
    }

    /// Rows of `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let m = &self.matrix;
        let rows: Vec<Vec<[f64; 2]>> =
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
        serde_json::json!(rows)
    }
}

pub fn quantize_protransformation(sigma: &Span) -> QuantizedMap {
    let (s, t) = (sigma.source(), sigma.target());
    let (os, ot) = (offsets(s), offsets(t));
    let mut m = CMatrix::zeros(t.total_len(), s.total_len());
    for a in 0..s.source().object_count() {
        for b in 0..s.target().object_count() {
            for x in 0..s.cell_len(a, b) as u32 {
                for (y, w) in sigma.row(a, b, x) {
                    let w = w.to_f64().expect("finite weight");
                    m[(ot[a][b] + *y as usize, os[a][b] + x as usize)] = c(w);
                }
            }
        }
    }
    QuantizedMap { matrix: m }
}

/// The action of `f ⊗ h` on `Q(P)`: `p ↦ f.p.h` on the cell of `f`'s and
/// `h`'s objects, zero elsewhere.
pub fn action_matrix(p: &Profunctor, f: Morphism, h: Morphism) -> CMatrix {
    let o = offsets(p);
    let n = p.total_len();
    let mut m = CMatrix::zeros(n, n);
    let (a, b) = (f.object, h.object);
    for x in 0..p.cell_len(a, b) as u32 {
        let y = p.act_right(a, b, h.element, p.act_left(a, b, f.element, x));
        m[(o[a][b] + y as usize, o[a][b] + x as usize)] = c(1.0);
    }
    m
}

/// `Q(σ)` commutes with every basis element of `ℂA ⊗ ℂB^op`.
pub fn is_intertwiner(sigma: &Span) -> bool {
    let q = quantize_protransformation(sigma).matrix;
    let (s, t) = (sigma.source(), sigma.target());
    s.source()
        .morphisms()
        .all(|f| s.target().morphisms().all(|h| &q * action_matrix(s, f, h) == action_matrix(t, f, h) * &q))
}

pub fn check_vertical(sigma: &Span, tau: &Span) -> Result<bool> {
    let composite = quantize_protransformation(&sigma.then(tau)?).matrix;
    let product = quantize_protransformation(tau).matrix * quantize_protransformation(sigma).matrix;
    Ok(composite == product)
}

pub fn check_dagger(sigma: &Span) -> bool {
    quantize_protransformation(&sigma.dagger()).matrix == quantize_protransformation(sigma).matrix.adjoint()
}

/// Every class of a composite has a trivial stabilizer.
pub fn stabilizers_trivial(p: &Profunctor) -> bool {
    let Some((left, _)) = p.factors() else { return true };
    (0..p.source().object_count()).all(|a| {
        (0..p.target().object_count()).all(|c| {
            (0..p.cell_len(a, c) as u32).all(|k| {
                let (b, _, _) = p.representative(a, c, k).expect("composite");
                p.orbit_size(a, c, k) == Some(left.target().aut_order(b))
            })
        })
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HorizontalReport {
    pub constant: f64,
    pub deviation: f64,
    pub pass: bool,
}

/// Orbit-sum embedding `Q(S;T) → Q(S) ⊗ Q(T)`, `[s, t] ↦ Σ_f s.f ⊗ f⁻¹.t`.
fn orbit_embedding(st: &Profunctor) -> Result<CMatrix> {
    let (s, t) = st.factors().ok_or_else(|| Error::Engine("not a composite".into()))?;
    let (os, ot, ost) = (offsets(s), offsets(t), offsets(st));
    let mid = s.target();
    let mut v = CMatrix::zeros(s.total_len() * t.total_len(), st.total_len());
    for a in 0..st.source().object_count() {
        for cc in 0..st.target().object_count() {
            for k in 0..st.cell_len(a, cc) as u32 {
                let (b, x, y) = st.representative(a, cc, k).expect("composite");
                let grp = mid.group(b);
                for f in 0..grp.order() {
                    let xs = s.act_right(a, b, f, x) as usize + os[a][b];
                    let yt = t.act_left(b, cc, grp.inv(f), y) as usize + ot[b][cc];
                    v[(xs * t.total_len() + yt, ost[a][cc] + k as usize)] += c(1.0);
                }
            }
        }
    }
    Ok(v)
}

/// The separability idempotent `Σ_b |Aut b|⁻¹ Σ_f ρ(f) ⊗ λ(f⁻¹)` on
/// `Q(S) ⊗ Q(T)`.
fn splitting_idempotent(s: &Profunctor, t: &Profunctor) -> CMatrix {
    let (os, ot) = (offsets(s), offsets(t));
    let mid = s.target();
    let nt = t.total_len();
    let mut x = CMatrix::zeros(s.total_len() * nt, s.total_len() * nt);
    for a in 0..s.source().object_count() {
        for b in 0..mid.object_count() {
            let grp = mid.group(b);
            let w = 1.0 / grp.order() as f64;
            for cc in 0..t.target().object_count() {
                for p in 0..s.cell_len(a, b) as u32 {
                    for q in 0..t.cell_len(b, cc) as u32 {
                        let col = (os[a][b] + p as usize) * nt + ot[b][cc] + q as usize;
                        for f in 0..grp.order() {
                            let p2 = s.act_right(a, b, f, p) as usize + os[a][b];
                            let q2 = t.act_left(b, cc, grp.inv(f), q) as usize + ot[b][cc];
                            x[(p2 * nt + q2, col)] += c(w);
                        }
                    }
                }
            }
        }
    }
    x
}

/// Compare `Q(σ ∘ τ)` with `V_t† X (Q(σ) ⊗ Q(τ)) X V_s`.
pub fn check_horizontal_functoriality(sigma: &Span, tau: &Span) -> Result<HorizontalReport> {
    let composite = Span::horizontal(sigma, tau)?;
    let q = quantize_protransformation(&composite).matrix;
    let kron = quantize_protransformation(sigma).matrix.kronecker(&quantize_protransformation(tau).matrix);
    let xs = splitting_idempotent(sigma.source(), tau.source());
    let xt = splitting_idempotent(sigma.target(), tau.target());
    let vs = orbit_embedding(composite.source())?;
    let vt = orbit_embedding(composite.target())?;
    let m = vt.adjoint() * xt * kron * xs * vs;
    let qq = q.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if qq == 0.0 {
        let zero = m.norm() == 0.0;
        return Ok(HorizontalReport { constant: 0.0, deviation: if zero { 0.0 } else { 1.0 }, pass: zero });
    }
    let constant = q.iter().zip(m.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>() / qq;
    let deviation = (&m - &q * c(constant)).norm() / m.norm().max(f64::MIN_POSITIVE);
    Ok(HorizontalReport { constant, deviation, pass: constant > 0.0 && deviation < 1e-9 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::make_groubit;

    #[test]
    fn groubit_algebra() {
        let g = make_groubit().groupoid().clone();
        let alg = GroupoidAlgebra::new(&g);
        assert_eq!(alg.dim(), 4);
        assert!(alg.is_associative());
        assert_eq!(alg.product(Morphism::new(0, 1), Morphism::new(1, 1)), None);
        assert_eq!(alg.star(Morphism::new(0, 1)), Morphism::new(0, 1));
    }

    #[test]
    fn identity_span_is_identity_matrix() {
        let g = make_groubit().groupoid().clone();
        let l = Profunctor::boundary_left("L", &g);
        let q = quantize_protransformation(&Span::identity(&l));
        assert_eq!(q.matrix, CMatrix::identity(2 * 2, 2 * 2));
    }
}
