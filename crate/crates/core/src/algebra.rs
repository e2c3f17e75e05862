//! Finite-dimensional matrix algebras and their two-sided ideals.
//!
//! An [`AlgebraBasis`] is a list of linearly independent `n×n` matrices whose
//! span is closed under multiplication. Ideals are subspaces of the algebra's
//! coordinate space `F^d`, where coordinate `i` multiplies basis element `i`.
//!
//! The radical is the Dickson trace-form kernel
//! `{x ∈ A : tr(x·b) = 0 for every b ∈ A}`. In characteristic 0 or `p > n`
//! this is the Jacobson radical, which for finite-dimensional algebras is
//! also the Levitzky (largest locally nilpotent) radical.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{kernel, CoordinateSystem, Subspace};
use crate::matrix::Matrix;

#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    field: FieldSpec,
    size: usize,
    basis: Vec<Matrix>,
    coords: CoordinateSystem,
}

impl PartialEq for AlgebraBasis {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.size == other.size && self.basis == other.basis
    }
}

impl Eq for AlgebraBasis {}

impl AlgebraBasis {
    /// Wraps an explicit basis, checking independence and product closure.
    pub fn from_basis(field: FieldSpec, size: usize, basis: Vec<Matrix>) -> Result<Self> {
        let a = Self::build(field, size, basis)?;
        if let Some((i, j)) = a.product_closure_violation() {
            return Err(Error::NotInAlgebra(format!("product of basis elements {i} and {j} leaves the span")));
        }
        Ok(a)
    }

    fn build(field: FieldSpec, size: usize, basis: Vec<Matrix>) -> Result<Self> {
        for m in &basis {
            if m.rows() != size || m.cols() != size {
                return Err(Error::DimensionMismatch(format!("expected {size}x{size}, got {}x{}", m.rows(), m.cols())));
            }
        }
        let flat = Matrix::from_flat(field, basis.len(), size * size, basis.iter().flat_map(Matrix::flatten).collect());
        let coords = CoordinateSystem::new(&flat)?;
        Ok(AlgebraBasis { field, size, basis, coords })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Matrix size `n`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    /// Coordinates of `m` in the basis, or `None` if `m ∉ A`.
    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        if m.rows() != self.size || m.cols() != self.size || m.field() != self.field {
            return None;
        }
        self.coords.coordinates(m.entries())
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.coordinates(m).is_some()
    }

    /// `Σ c_i b_i`.
    pub fn element(&self, coords: &[Scalar]) -> Matrix {
        assert_eq!(coords.len(), self.dim());
        let mut acc = Matrix::zeros(self.field, self.size, self.size);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }

    /// First pair `(i, j)` with `b_i·b_j` outside the span, if any.
    pub fn product_closure_violation(&self) -> Option<(usize, usize)> {
        for (i, x) in self.basis.iter().enumerate() {
            for (j, y) in self.basis.iter().enumerate() {
                if !self.contains(&x.mul(y)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&Matrix::identity(self.field, self.size))
    }

    /// The whole coordinate space, i.e. `A` as an ideal of itself.
    pub fn coordinate_space(&self) -> Subspace {
        Subspace::full(self.field, self.dim())
    }

    /// Coordinates of every basis element as an ideal/subspace spanning set.
    fn coords_of(&self, m: &Matrix) -> Result<Vec<Scalar>> {
        self.coordinates(m).ok_or_else(|| Error::InternalInconsistency(format!("product {m} left the algebra")))
    }

    /// Span of all products `x·y` with `x ∈ left`, `y ∈ right`.
    pub fn product_space(&self, left: &Subspace, right: &Subspace) -> Result<Subspace> {
        let lm: Vec<Matrix> = left.basis_vectors().iter().map(|c| self.element(c)).collect();
        let rm: Vec<Matrix> = right.basis_vectors().iter().map(|c| self.element(c)).collect();
        let mut vectors = Vec::with_capacity(lm.len() * rm.len());
        for x in &lm {
            for y in &rm {
                let p = x.mul(y);
                if !p.is_zero() {
                    vectors.push(self.coords_of(&p)?);
                }
            }
        }
        Ok(Subspace::span(self.field, self.dim(), &vectors))
    }
}

/// Incrementally grown list of independent matrices.
struct SpanBuilder {
    field: FieldSpec,
    size: usize,
    members: Vec<Matrix>,
    span: Subspace,
}

impl SpanBuilder {
    fn new(field: FieldSpec, size: usize) -> Self {
        SpanBuilder { field, size, members: Vec::new(), span: Subspace::zero(field, size * size) }
    }

    fn try_add(&mut self, m: Matrix) -> bool {
        let flat = m.flatten();
        if self.span.contains(&flat) {
            return false;
        }
        let one = Subspace::span(self.field, self.size * self.size, &[flat]);
        self.span = self.span.sum(&one).expect("same ambient space");
        self.members.push(m);
        true
    }
}

/// Smallest subalgebra of `M_n` containing `generators` (and `I` when
/// `include_identity`). Basis order is deterministic: identity first, then the
/// independent generators in order, then products in discovery order.
pub fn span_closure(
    field: FieldSpec,
    size: usize,
    generators: &[Matrix],
    include_identity: bool,
) -> Result<AlgebraBasis> {
    let mut sb = SpanBuilder::new(field, size);
    if include_identity {
        sb.try_add(Matrix::identity(field, size));
    }
    for g in generators {
        if g.rows() != size || g.cols() != size || g.field() != field {
            return Err(Error::DimensionMismatch(format!(
                "generator is {}x{} over {}, expected {size}x{size} over {field}",
                g.rows(),
                g.cols(),
                g.field()
            )));
        }
        sb.try_add(g.clone());
    }
    // every ordered pair (i, j) is multiplied once, when the later index is processed
    let mut i = 0;
    while i < sb.members.len() {
        for j in 0..=i {
            let left = sb.members[i].mul(&sb.members[j]);
            let right = sb.members[j].mul(&sb.members[i]);
            sb.try_add(left);
            sb.try_add(right);
        }
        i += 1;
    }
    let a = AlgebraBasis::build(field, size, sb.members)?;
    debug_assert!(a.product_closure_violation().is_none());
    Ok(a)
}

/// A two-sided ideal of an algebra, stored in the algebra's coordinates.
#[derive(Clone, Debug)]
pub struct Ideal {
    parent: Arc<AlgebraBasis>,
    space: Subspace,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        *self.parent == *other.parent && self.space == other.space
    }
}

impl Ideal {
    /// Checks closure under left and right multiplication by every basis element.
    pub fn new(parent: Arc<AlgebraBasis>, space: Subspace) -> Result<Self> {
        if space.ambient_dim() != parent.dim() {
            return Err(Error::DimensionMismatch(format!(
                "ideal coordinates have dimension {}, algebra has {}",
                space.ambient_dim(),
                parent.dim()
            )));
        }
        let ideal = Ideal { parent, space };
        for x in ideal.matrices() {
            for b in ideal.parent.basis() {
                for p in [b.mul(&x), x.mul(b)] {
                    let c = ideal.parent.coords_of(&p)?;
                    if !ideal.space.contains(&c) {
                        return Err(Error::NotAnIdeal(format!("{p} escapes the subspace")));
                    }
                }
            }
        }
        Ok(ideal)
    }

    pub fn zero(parent: Arc<AlgebraBasis>) -> Self {
        let space = Subspace::zero(parent.field(), parent.dim());
        Ideal { parent, space }
    }

    pub fn whole(parent: Arc<AlgebraBasis>) -> Self {
        let space = parent.coordinate_space();
        Ideal { parent, space }
    }

    pub fn parent(&self) -> &Arc<AlgebraBasis> {
        &self.parent
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    /// Basis of the ideal as matrices.
    pub fn matrices(&self) -> Vec<Matrix> {
        self.space.basis_vectors().iter().map(|c| self.parent.element(c)).collect()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.parent.coordinates(m).is_some_and(|c| self.space.contains(&c))
    }

    pub fn is_subideal_of(&self, other: &Ideal) -> bool {
        *self.parent == *other.parent && self.space.is_subspace_of(&other.space)
    }

    /// Span of `I·J`.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        let space = self.parent.product_space(&self.space, &other.space)?;
        Ok(Ideal { parent: self.parent.clone(), space })
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        Ok(Ideal { parent: self.parent.clone(), space: self.space.sum(&other.space)? })
    }
}

/// Smallest two-sided ideal of `a` containing `seeds`.
pub fn ideal_closure(a: &Arc<AlgebraBasis>, seeds: &[Matrix]) -> Result<Ideal> {
    let d = a.dim();
    let field = a.field();
    let mut space = Subspace::zero(field, d);
    let mut queue: Vec<Matrix> = Vec::new();
    let push = |m: Matrix, space: &mut Subspace, queue: &mut Vec<Matrix>| -> Result<()> {
        let c = a.coordinates(&m).ok_or_else(|| Error::NotInAlgebra(m.to_string()))?;
        if !space.contains(&c) {
            *space = space.sum(&Subspace::span(field, d, &[c]))?;
            queue.push(m);
        }
        Ok(())
    };
    for s in seeds {
        push(s.clone(), &mut space, &mut queue)?;
    }
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i].clone();
        for b in a.basis() {
            push(b.mul(&x), &mut space, &mut queue)?;
            push(x.mul(b), &mut space, &mut queue)?;
        }
        i += 1;
    }
    Ok(Ideal { parent: a.clone(), space })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    /// Smallest `m` with `I^m = 0`; the zero ideal has index 1.
    Index(usize),
    NotNilpotent,
}

#[derive(Clone, Debug)]
pub struct PowerChain {
    /// `I, I², …`, ending at the zero space or at the first repeated power.
    pub chain: Vec<Subspace>,
    pub nilpotency: Nilpotency,
}

/// Descending chain of ideal powers.
pub fn ideal_power_chain(ideal: &Ideal) -> Result<PowerChain> {
    let a = ideal.parent();
    let mut chain = vec![ideal.space().clone()];
    loop {
        let last = chain.last().expect("nonempty");
        if last.is_zero() {
            let m = chain.len();
            return Ok(PowerChain { chain, nilpotency: Nilpotency::Index(m) });
        }
        let next = a.product_space(last, ideal.space())?;
        if next == *last {
            return Ok(PowerChain { chain, nilpotency: Nilpotency::NotNilpotent });
        }
        chain.push(next);
    }
}

/// Gram matrix of the trace form `tr(b_i·b_j)`.
pub fn trace_form(a: &AlgebraBasis) -> Matrix {
    let d = a.dim();
    let field = a.field();
    let mut g = Matrix::zeros(field, d, d);
    for (i, x) in a.basis().iter().enumerate() {
        for (j, y) in a.basis().iter().enumerate() {
            g.set(i, j, x.mul(y).trace());
        }
    }
    g
}

/// Radical of `a` as the kernel of the trace form, verified nilpotent.
pub fn trace_radical(a: &Arc<AlgebraBasis>) -> Result<Ideal> {
    let p = a.field().characteristic();
    if p != 0 && p <= a.size() as u64 {
        return Err(Error::CharacteristicTooSmall { characteristic: p, size: a.size() });
    }
    let space = kernel(&trace_form(a));
    let ideal = Ideal::new(a.clone(), space)?;
    match ideal_power_chain(&ideal)?.nilpotency {
        Nilpotency::Index(_) => Ok(ideal),
        Nilpotency::NotNilpotent => Err(Error::InternalInconsistency("trace-form kernel is not nilpotent".into())),
    }
}

/// Common test algebras.
pub mod examples {
    use super::*;

    /// All of `M_n`, basis `E_11, E_12, …` in row-major order.
    pub fn full_matrix_algebra(field: FieldSpec, n: usize) -> AlgebraBasis {
        let basis =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| Matrix::unit(field, n, i, j)).collect();
        AlgebraBasis::from_basis(field, n, basis).expect("M_n is an algebra")
    }

    /// Upper-triangular `n×n` matrices, basis `E_ij` with `i ≤ j`.
    pub fn upper_triangular(field: FieldSpec, n: usize) -> AlgebraBasis {
        let basis =
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| Matrix::unit(field, n, i, j)).collect();
        AlgebraBasis::from_basis(field, n, basis).expect("upper triangular matrices form an algebra")
    }

    /// Diagonal `n×n` matrices.
    pub fn diagonal(field: FieldSpec, n: usize) -> AlgebraBasis {
        let basis = (0..n).map(|i| Matrix::unit(field, n, i, i)).collect();
        AlgebraBasis::from_basis(field, n, basis).expect("diagonal matrices form an algebra")
    }

    /// Coordinates of the strictly upper part of [`upper_triangular`].
    pub fn strictly_upper_coordinates(field: FieldSpec, n: usize) -> Subspace {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let d = pairs.len();
        let vectors: Vec<Vec<Scalar>> = pairs
            .iter()
            .enumerate()
            .filter(|(_, (i, j))| i < j)
            .map(|(k, _)| {
                let mut v = vec![field.zero(); d];
                v[k] = field.one();
                v
            })
            .collect();
        Subspace::span(field, d, &vectors)
    }
}
