//! Row reduction, left kernels, the subspace lattice, quotient actions and flags.
//!
//! Vectors are rows and matrices act on the right (`v ↦ v·m`), so every
//! kernel here is a left kernel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{format_vector, Matrix};

/// Output of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row-echelon form.
///
/// Over ℚ each row is first scaled to integers, then eliminated with the
/// fraction-free Gauss-Jordan (Bareiss/Montante) scheme: every update divides
/// exactly by the previous pivot, so intermediate entries are minors of the
/// scaled input. Rows are normalised by their pivot only at the very end.
/// Over `F_p` plain Gauss-Jordan is used.
pub fn rref(m: &Matrix) -> Echelon {
    match m.field() {
        FieldSpec::Rationals => rref_fraction_free(m),
        FieldSpec::PrimeField(_) => rref_plain(m),
    }
}

fn rref_fraction_free(m: &Matrix) -> Echelon {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row
                .iter()
                .map(|s| s.as_rational().expect("rational entry").denom().clone())
                .fold(BigInt::one(), |acc, d| acc.lcm(&d));
            row.iter()
                .map(|s| {
                    let r = s.as_rational().expect("rational entry");
                    r.numer() * (&lcm / r.denom())
                })
                .collect()
        })
        .collect();

    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let pivot_row = a[r].clone();
        let pv = pivot_row[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[col].clone();
            for (x, pr) in row.iter_mut().zip(&pivot_row) {
                let num = &pv * &*x - &factor * pr;
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                *x = q;
            }
        }
        prev = pv;
        pivots.push(col);
        r += 1;
    }

    let field = FieldSpec::Rationals;
    let mut reduced = Matrix::zeros(field, rows, cols);
    for (t, &pc) in pivots.iter().enumerate() {
        let pv = a[t][pc].clone();
        for (j, x) in a[t].iter().enumerate() {
            if !x.is_zero() {
                reduced.set(t, j, Scalar::Rational(BigRational::new(x.clone(), pv.clone())));
            }
        }
    }
    let rank = pivots.len();
    Echelon { reduced, pivots, rank }
}

fn rref_plain(m: &Matrix) -> Echelon {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.row_vecs();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][col].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, pr) in row.iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *x = &*x - &(&factor * pr);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let field = m.field();
    let data = a.into_iter().flatten().collect();
    let rank = pivots.len();
    Echelon { reduced: Matrix::from_flat(field, rows, cols, data), pivots, rank }
}

/// Reference Gauss-Jordan over any field with no fraction-free tricks.
/// Kept public so tests can cross-check [`rref`] over ℚ.
pub fn rref_naive(m: &Matrix) -> Echelon {
    rref_plain(m)
}

/// Left kernel `{v : v·m = 0}` in canonical form.
pub fn kernel(m: &Matrix) -> Subspace {
    let field = m.field();
    let n = m.rows();
    let e = rref(&m.transpose());
    let pivot_set: Vec<bool> = (0..n).map(|j| e.pivots.contains(&j)).collect();
    let mut vectors = Vec::new();
    for free in (0..n).filter(|&j| !pivot_set[j]) {
        let mut v = vec![field.zero(); n];
        v[free] = field.one();
        for (t, &pc) in e.pivots.iter().enumerate() {
            v[pc] = -e.reduced.get(t, free);
        }
        vectors.push(v);
    }
    Subspace::span(field, n, &vectors)
}

/// A subspace of `field^ambient`, stored by its RREF basis.
///
/// Two subspaces are equal as sets iff they compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the given row vectors.
    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        let data: Vec<Scalar> = vectors
            .iter()
            .flat_map(|v| {
                assert_eq!(v.len(), ambient, "vector length does not match ambient dimension");
                v.iter().cloned()
            })
            .collect();
        Self::row_space(&Matrix::from_flat(field, vectors.len(), ambient, data))
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let e = rref(m);
        let field = m.field();
        let cols = m.cols();
        let data = (0..e.rank).flat_map(|t| e.reduced.row(t).to_vec()).collect();
        Subspace { ambient: cols, basis: Matrix::from_flat(field, e.rank, cols, data), pivots: e.pivots }
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// RREF basis; rows are the basis vectors.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Standard coordinates not used as pivots: the fixed complement basis for quotients.
    pub fn complement_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|j| !self.pivots.contains(j)).collect()
    }

    /// Residue of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient);
        let mut out = v.to_vec();
        for (t, &pc) in self.pivots.iter().enumerate() {
            if out[pc].is_zero() {
                continue;
            }
            let c = out[pc].clone();
            for (x, b) in out.iter_mut().zip(self.basis.row(t)) {
                if !b.is_zero() {
                    *x = &*x - &(&c * b);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.contains(v).then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && (0..self.dim()).all(|t| other.contains(self.basis.row(t)))
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of dimension {} and {}",
                self.ambient, other.ambient
            )));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), other.field().to_string()));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(Subspace::row_space(&self.basis.vstack(&other.basis)))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        // (x, y) with x·A + y·B = 0 gives x·A in both spaces
        let stacked = self.basis.vstack(&other.basis);
        let relations = kernel(&stacked);
        let p = self.dim();
        let vectors: Vec<Vec<Scalar>> = relations
            .basis_vectors()
            .iter()
            .map(|rel| {
                let x = &rel[..p];
                let mut acc = vec![self.field().zero(); self.ambient];
                for (c, row) in x.iter().zip(0..p) {
                    if c.is_zero() {
                        continue;
                    }
                    for (a, b) in acc.iter_mut().zip(self.basis.row(row)) {
                        *a = &*a + &(c * b);
                    }
                }
                acc
            })
            .collect();
        Ok(Subspace::span(self.field(), self.ambient, &vectors))
    }

    /// Image `{v·m : v ∈ self}`.
    pub fn image(&self, m: &Matrix) -> Subspace {
        Subspace::row_space(&self.basis.mul(m))
    }

    /// `Ok` if `v·m ∈ self` for every basis vector, otherwise the first violating vector.
    pub fn check_invariant(&self, m: &Matrix) -> std::result::Result<(), Vec<Scalar>> {
        for t in 0..self.dim() {
            let row = self.basis.row(t);
            if !self.contains(&m.vec_mul(row)) {
                return Err(row.to_vec());
            }
        }
        Ok(())
    }

    /// Coordinates of the class of `v` in `V/self`, in the complement basis.
    pub fn quotient_coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.reduce(v);
        self.complement_columns().into_iter().map(|j| r[j].clone()).collect()
    }

    /// Lifts quotient coordinates back to `V` by placing them on the complement columns.
    pub fn lift_from_quotient(&self, q: &[Scalar]) -> Vec<Scalar> {
        let cols = self.complement_columns();
        assert_eq!(q.len(), cols.len());
        let mut v = vec![self.field().zero(); self.ambient];
        for (x, j) in q.iter().zip(cols) {
            v[j] = x.clone();
        }
        v
    }
}

/// `{v : v·m = v for every m}`, the vectors on which all `mats` act trivially.
pub fn fixed_space(field: FieldSpec, dim: usize, mats: &[Matrix]) -> Result<Subspace> {
    let mut stacked: Option<Matrix> = None;
    for m in mats {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::DimensionMismatch(format!("expected {dim}x{dim}, got {}x{}", m.rows(), m.cols())));
        }
        if m.field() != field {
            return Err(Error::FieldMismatch(field.to_string(), m.field().to_string()));
        }
        let d = m.minus_identity();
        stacked = Some(match stacked {
            None => d,
            Some(s) => s.hstack(&d),
        });
    }
    Ok(match stacked {
        None => Subspace::full(field, dim),
        Some(s) => kernel(&s),
    })
}

/// Matrix of the action induced by `m` on `V/w`, in the complement basis of `w`.
pub fn quotient_action(m: &Matrix, w: &Subspace) -> Result<Matrix> {
    if !m.is_square() || m.rows() != w.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix on a subspace of dimension {}",
            m.rows(),
            m.cols(),
            w.ambient_dim()
        )));
    }
    if let Err(v) = w.check_invariant(m) {
        return Err(Error::NotInvariant { vector: format_vector(&v) });
    }
    let comp = w.complement_columns();
    let field = m.field();
    let q = comp.len();
    let mut data = Vec::with_capacity(q * q);
    for &j in &comp {
        data.extend(w.quotient_coordinates(m.row(j)));
    }
    Ok(Matrix::from_flat(field, q, q, data))
}

/// Ascending chain `0 = W_0 ⊂ W_1 ⊂ … ⊂ W_k = V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    steps: Vec<Subspace>,
}

impl Flag {
    pub fn new(steps: Vec<Subspace>) -> Result<Self> {
        let first = steps.first().ok_or_else(|| Error::MalformedFlag("no steps".into()))?;
        if !first.is_zero() {
            return Err(Error::MalformedFlag("first step is not the zero subspace".into()));
        }
        let last = steps.last().expect("nonempty");
        if !last.is_full() {
            return Err(Error::MalformedFlag("last step is not the whole space".into()));
        }
        for (i, pair) in steps.windows(2).enumerate() {
            if pair[0].ambient_dim() != pair[1].ambient_dim() || pair[0].field() != pair[1].field() {
                return Err(Error::MalformedFlag(format!("step {} lives in a different space", i + 1)));
            }
            if !(pair[0].is_subspace_of(&pair[1]) && pair[0].dim() < pair[1].dim()) {
                return Err(Error::MalformedFlag(format!("step {} does not strictly contain step {i}", i + 1)));
            }
        }
        Ok(Flag { steps })
    }

    pub fn ambient_dim(&self) -> usize {
        self.steps[0].ambient_dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.steps[0].field()
    }

    /// All steps including `W_0 = 0`.
    pub fn steps(&self) -> &[Subspace] {
        &self.steps
    }

    /// Number of proper inclusions `k`.
    pub fn length(&self) -> usize {
        self.steps.len() - 1
    }

    /// Whether `(m − I)` maps every `W_i` into `W_{i−1}`.
    pub fn drops(&self, m: &Matrix) -> bool {
        let d = m.minus_identity();
        self.steps.windows(2).all(|pair| pair[1].image(&d).is_subspace_of(&pair[0]))
    }
}

/// Basis adapted to a flag: `W_1`'s basis first, then extensions step by step.
///
/// In this basis every matrix that drops the flag is lower unitriangular
/// (row convention).
pub fn assemble_flag_basis(f: &Flag) -> Result<Matrix> {
    let field = f.field();
    let n = f.ambient_dim();
    let mut current = Subspace::zero(field, n);
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for step in &f.steps()[1..] {
        for v in step.basis_vectors() {
            if !current.contains(&v) {
                current = current.sum(&Subspace::span(field, n, std::slice::from_ref(&v)))?;
                rows.push(v);
            }
        }
    }
    if rows.len() != n {
        return Err(Error::MalformedFlag(format!("flag spans {} of {n} dimensions", rows.len())));
    }
    Matrix::from_rows(field, rows)
}

/// Expresses vectors in a fixed (not necessarily echelon) basis.
///
/// Built by row-reducing `[B | I]`; the right block records how each echelon
/// row combines the original basis rows.
#[derive(Clone, Debug)]
pub struct CoordinateSystem {
    space: Subspace,
    transform: Matrix,
}

impl CoordinateSystem {
    /// `basis` rows must be linearly independent.
    pub fn new(basis: &Matrix) -> Result<Self> {
        let d = basis.rows();
        let field = basis.field();
        let aug = basis.hstack(&Matrix::identity(field, d));
        let e = rref(&aug);
        if e.pivots.iter().filter(|&&p| p < basis.cols()).count() != d {
            return Err(Error::InternalInconsistency("basis rows are linearly dependent".into()));
        }
        let n = basis.cols();
        let mut space_rows = Vec::with_capacity(d);
        let mut transform_rows = Vec::with_capacity(d);
        for t in 0..d {
            let row = e.reduced.row(t);
            space_rows.push(row[..n].to_vec());
            transform_rows.push(row[n..].to_vec());
        }
        let space = Subspace::span(field, n, &space_rows);
        debug_assert_eq!(space.basis().row_vecs(), space_rows);
        let transform = Matrix::from_flat(field, d, d, transform_rows.into_iter().flatten().collect());
        Ok(CoordinateSystem { space, transform })
    }

    pub fn span(&self) -> &Subspace {
        &self.space
    }

    /// Coefficients `c` with `v = c·B`, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let c = self.space.coordinates(v)?;
        Some(self.transform.vec_mul(&c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(Q, 3);
        let e = rref(&id);
        assert_eq!(e.reduced, id);
        assert_eq!(e.pivots, vec![0, 1, 2]);
        assert_eq!(e.rank, 3);

        let z = Matrix::zeros(Q, 2, 2);
        let e = rref(&z);
        assert_eq!(e.reduced, z);
        assert!(e.pivots.is_empty());
        assert_eq!(e.rank, 0);

        let m = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        let e = rref(&m);
        assert_eq!(e.reduced, Matrix::from_i64(Q, &[&[1, 2], &[0, 0]]));
        assert_eq!(e.rank, 1);
    }

    #[test]
    fn rref_handles_fractions_and_skipped_columns() {
        let m = Matrix::from_rows(
            Q,
            vec![
                vec![Q.parse_scalar("1/2").unwrap(), Q.from_i64(1), Q.from_i64(0), Q.from_i64(3)],
                vec![Q.from_i64(1), Q.from_i64(2), Q.from_i64(1), Q.parse_scalar("-2/3").unwrap()],
                vec![Q.from_i64(0), Q.from_i64(0), Q.from_i64(5), Q.from_i64(1)],
            ],
        )
        .unwrap();
        assert_eq!(rref(&m), rref_naive(&m));
        assert_eq!(rref(&m).pivots, vec![0, 2, 3]);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&Matrix::identity(Q, 3)).is_zero());
        assert!(kernel(&Matrix::zeros(Q, 3, 3)).is_full());
        let k = kernel(&Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]));
        assert_eq!(k, Subspace::span(Q, 2, &[v(&[-2, 1])]));
        let m = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        assert!(m.vec_mul(&v(&[-2, 1])).iter().all(Scalar::is_zero));
    }

    #[test]
    fn sum_and_intersection() {
        let w = Subspace::span(Q, 3, &[v(&[1, 1, 0])]);
        let zero = Subspace::zero(Q, 3);
        let full = Subspace::full(Q, 3);
        assert_eq!(w.sum(&zero).unwrap(), w);
        assert_eq!(w.intersection(&full).unwrap(), w);
        let e12 = Subspace::span(Q, 3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let e23 = Subspace::span(Q, 3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(e12.intersection(&e23).unwrap(), Subspace::span(Q, 3, &[v(&[0, 1, 0])]));
        assert_eq!(e12.sum(&e23).unwrap(), full);
        assert!(e12.sum(&Subspace::zero(Q, 2)).is_err());
    }

    #[test]
    fn fixed_space_examples() {
        assert!(fixed_space(Q, 2, &[Matrix::identity(Q, 2)]).unwrap().is_full());
        let g = Matrix::unit(Q, 2, 0, 1).plus_identity();
        assert_eq!(fixed_space(Q, 2, &[g]).unwrap(), Subspace::span(Q, 2, &[v(&[0, 1])]));
        let a = Matrix::unit(Q, 3, 0, 1).plus_identity();
        let b = Matrix::unit(Q, 3, 1, 2).plus_identity();
        assert_eq!(fixed_space(Q, 3, &[a, b]).unwrap(), Subspace::span(Q, 3, &[v(&[0, 0, 1])]));
        assert!(fixed_space(Q, 3, &[Matrix::identity(Q, 2)]).is_err());
    }

    #[test]
    fn quotient_action_examples() {
        let w = Subspace::span(Q, 2, &[v(&[0, 1])]);
        let id = Matrix::identity(Q, 2);
        assert!(quotient_action(&id, &w).unwrap().is_identity());
        let g = Matrix::unit(Q, 2, 0, 1).plus_identity();
        assert_eq!(quotient_action(&g, &w).unwrap(), Matrix::identity(Q, 1));
        let d = Matrix::diagonal(Q, &[2, 1]);
        assert_eq!(quotient_action(&d, &w).unwrap(), Matrix::from_i64(Q, &[&[2]]));
    }

    #[test]
    fn quotient_action_rejects_non_invariant() {
        let w = Subspace::span(Q, 2, &[v(&[1, 0])]);
        let g = Matrix::unit(Q, 2, 0, 1).plus_identity();
        match quotient_action(&g, &w) {
            Err(Error::NotInvariant { vector }) => assert_eq!(vector, "(1, 0)"),
            other => panic!("expected NotInvariant, got {other:?}"),
        }
    }

    #[test]
    fn flag_basis_examples() {
        let std_flag = Flag::new(vec![
            Subspace::zero(Q, 3),
            Subspace::span(Q, 3, &[v(&[1, 0, 0])]),
            Subspace::span(Q, 3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]),
            Subspace::full(Q, 3),
        ])
        .unwrap();
        assert!(assemble_flag_basis(&std_flag).unwrap().is_identity());

        let rev = Flag::new(vec![
            Subspace::zero(Q, 3),
            Subspace::span(Q, 3, &[v(&[0, 0, 1])]),
            Subspace::span(Q, 3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]),
            Subspace::full(Q, 3),
        ])
        .unwrap();
        let b = assemble_flag_basis(&rev).unwrap();
        assert_eq!(b, Matrix::from_i64(Q, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
        assert!(!b.determinant().is_zero());
    }

    #[test]
    fn malformed_flags_rejected() {
        let e1 = Subspace::span(Q, 2, &[v(&[1, 0])]);
        assert!(Flag::new(vec![]).is_err());
        assert!(Flag::new(vec![e1.clone(), Subspace::full(Q, 2)]).is_err());
        assert!(Flag::new(vec![Subspace::zero(Q, 2), e1.clone()]).is_err());
        assert!(Flag::new(vec![Subspace::zero(Q, 2), e1.clone(), e1, Subspace::full(Q, 2)]).is_err());
    }

    #[test]
    fn coordinate_system_solves() {
        let basis = Matrix::from_i64(Q, &[&[1, 1, 0], &[0, 1, 1]]);
        let cs = CoordinateSystem::new(&basis).unwrap();
        let target = v(&[2, 5, 3]);
        assert_eq!(cs.coordinates(&target).unwrap(), v(&[2, 3]));
        assert!(cs.coordinates(&v(&[1, 0, 0])).is_none());
        assert!(CoordinateSystem::new(&Matrix::from_i64(Q, &[&[1, 2], &[2, 4]])).is_err());
    }
}
